#!/usr/bin/env python3
"""Regenerate every figure-input CSV by driving the delayhopf CLI.

Writes into --out-dir (default ./data):

  duffing_eps05_fig2.csv     exact + undelayed-reduction curves
  duffing_eps05_fig4.csv     all three methods
  vdp_eps01_fig6.csv         exact + undelayed-reduction curves
  vdp_eps01_fig8.csv         all three methods, eps = 0.1
  vdp_eps05_fig8.csv         all three methods, eps = 0.5
  vdp_growth_fig9.csv        trajectory in the post-singular regime
  erneux_eps01_fig10.csv     all methods, aligned pairing, eps = 0.1
  erneux_eps05_fig10.csv     all methods, aligned pairing, eps = 0.5
  duffing_eps05_compare.csv  accuracy report against the exact curve
  vdp_eps05_compare.csv      accuracy report against the exact curve

The plot recipes under plots/recipes/ consume exactly these file names.
"""

import argparse
import pathlib
import sys

from delayhopf.cli import main as delayhopf


def run(args):
    code = delayhopf([str(a) for a in args])
    if code != 0:
        sys.exit(f"delayhopf {' '.join(str(a) for a in args[:2])}... failed with exit code {code}")


def generate(out_dir: pathlib.Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    duffing = ["--system", "duffing", "--epsilon", "0.5", "--alpha", "0.05", "--gamma", "1"]
    grid_duffing = ["--k-min", "0.1", "--k-max", "3", "--k-steps", "120"]
    grid_vdp = ["--k-min", "1.02", "--k-max", "3", "--k-steps", "100"]
    # the Erneux ground-truth wedge tip sits at k = 1 + eps/2; start above it
    grid_erneux = {"0.1": ["--k-min", "1.1", "--k-max", "3", "--k-steps", "100"],
                   "0.5": ["--k-min", "1.4", "--k-max", "3", "--k-steps", "100"]}

    run(["hopf-curves", *duffing, *grid_duffing,
         "--methods", "approach1,exact", "--out", out_dir / "duffing_eps05_fig2.csv"])
    run(["hopf-curves", *duffing, *grid_duffing,
         "--methods", "approach1,approach2,exact", "--out", out_dir / "duffing_eps05_fig4.csv"])
    run(["hopf-curves", "--system", "vdp", "--epsilon", "0.1", *grid_vdp,
         "--methods", "approach1,exact", "--out", out_dir / "vdp_eps01_fig6.csv"])
    run(["hopf-curves", "--system", "vdp", "--epsilon", "0.1", *grid_vdp,
         "--methods", "approach1,approach2,exact", "--out", out_dir / "vdp_eps01_fig8.csv"])
    run(["hopf-curves", "--system", "vdp", "--epsilon", "0.5", *grid_vdp,
         "--methods", "approach1,approach2,exact", "--out", out_dir / "vdp_eps05_fig8.csv"])
    run(["simulate", "--system", "vdp", "--epsilon", "0.5", "--k", "2.1",
         "--delay", "0.4", "--dt", "0.05", "--t-end", "200", "--history", "const:0.1",
         "--out", out_dir / "vdp_growth_fig9.csv"])
    for eps, name in (("0.1", "erneux_eps01_fig10.csv"), ("0.5", "erneux_eps05_fig10.csv")):
        run(["hopf-curves", "--system", "erneux", "--epsilon", eps, *grid_erneux[eps],
             "--methods", "approach1,approach2,exact", "--erneux-pairing", "aligned",
             "--out", out_dir / name])
    run(["compare", *duffing, "--k-min", "0.2", "--k-max", "3", "--k-steps", "57",
         "--out", out_dir / "duffing_eps05_compare.csv"])
    run(["compare", "--system", "vdp", "--epsilon", "0.5",
         "--k-min", "1.1", "--k-max", "3", "--k-steps", "39",
         "--out", out_dir / "vdp_eps05_compare.csv"])


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=pathlib.Path, default=pathlib.Path("data"))
    generate(parser.parse_args().out_dir)
