"""Figure batch: every checked-in recipe renders from CSVs produced by the
delayhopf CLI, with series counts matching what the data contains.

The producing component is touched only through its command line and file
formats; reduced grids keep the batch fast.
"""

import csv
import pathlib
import subprocess
import sys

import pytest

from hopfplots.recipes import parse_recipe
from hopfplots.render import render

RECIPE_DIR = pathlib.Path(__file__).resolve().parent.parent / "recipes"


def delayhopf(args):
    proc = subprocess.run(
        [sys.executable, "-m", "delayhopf.cli", *[str(a) for a in args]],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, f"delayhopf failed: {proc.stderr}"


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("figure_batch")
    data = root / "data"
    data.mkdir()
    duffing = ["--system", "duffing", "--epsilon", "0.5", "--alpha", "0.05", "--gamma", "1"]
    grid_d = ["--k-min", "0.1", "--k-max", "3", "--k-steps", "25"]
    grid_v = ["--k-min", "1.05", "--k-max", "3", "--k-steps", "25"]
    delayhopf(["hopf-curves", *duffing, *grid_d, "--methods", "approach1,exact",
               "--out", data / "duffing_eps05_fig2.csv"])
    delayhopf(["hopf-curves", *duffing, *grid_d, "--methods", "approach1,approach2,exact",
               "--out", data / "duffing_eps05_fig4.csv"])
    delayhopf(["hopf-curves", "--system", "vdp", "--epsilon", "0.1", *grid_v,
               "--methods", "approach1,exact", "--out", data / "vdp_eps01_fig6.csv"])
    delayhopf(["hopf-curves", "--system", "vdp", "--epsilon", "0.1", *grid_v,
               "--methods", "approach1,approach2,exact", "--out", data / "vdp_eps01_fig8.csv"])
    delayhopf(["hopf-curves", "--system", "vdp", "--epsilon", "0.5", *grid_v,
               "--methods", "approach1,approach2,exact", "--out", data / "vdp_eps05_fig8.csv"])
    delayhopf(["simulate", "--system", "vdp", "--epsilon", "0.5", "--k", "2.1",
               "--delay", "0.4", "--dt", "0.05", "--t-end", "60",
               "--history", "const:0.1", "--out", data / "vdp_growth_fig9.csv"])
    delayhopf(["hopf-curves", "--system", "erneux", "--epsilon", "0.1",
               "--k-min", "1.1", "--k-max", "3", "--k-steps", "25",
               "--methods", "approach1,approach2,exact", "--erneux-pairing", "aligned",
               "--out", data / "erneux_eps01_fig10.csv"])
    delayhopf(["hopf-curves", "--system", "erneux", "--epsilon", "0.5",
               "--k-min", "1.4", "--k-max", "3", "--k-steps", "25",
               "--methods", "approach1,approach2,exact", "--erneux-pairing", "aligned",
               "--out", data / "erneux_eps05_fig10.csv"])
    delayhopf(["compare", *duffing, "--k-min", "0.2", "--k-max", "3", "--k-steps", "25",
               "--out", data / "duffing_eps05_compare.csv"])
    delayhopf(["compare", "--system", "vdp", "--epsilon", "0.5",
               "--k-min", "1.1", "--k-max", "3", "--k-steps", "25",
               "--out", data / "vdp_eps05_compare.csv"])
    return root


def combos_in(csv_path: pathlib.Path) -> set:
    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if "method" in rows[0]:
        return {(r["method"], r["branch"]) for r in rows}
    return {("trajectory", "x")}


@pytest.mark.parametrize(
    "recipe_name",
    [p.name for p in sorted(RECIPE_DIR.glob("*.json"))],
)
def test_recipe_renders_with_matching_series_counts(recipe_name, workdir, monkeypatch):
    monkeypatch.chdir(workdir)
    recipe = parse_recipe(str(RECIPE_DIR / recipe_name))
    summary = render(recipe)
    assert pathlib.Path(recipe.output).exists()
    assert len(summary.series) == len(recipe.panels)
    for panel, counts in zip(recipe.panels, summary.series):
        if recipe.kind == "comparison":
            assert len(counts) == len(combos_in(pathlib.Path(panel.input)))
        else:
            assert set(counts) == combos_in(pathlib.Path(panel.input))
        assert all(n > 0 for n in counts.values())
