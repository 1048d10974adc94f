"""Command line: render figure recipes.

    delayhopf-plots render recipes/fig4_duffing_all_methods.json ...

Exit codes mirror the delayhopf CLI: 0 success, 2 usage error, 3 recipe or
data schema mismatch, 4 missing or unwritable files.
"""

from __future__ import annotations

import argparse
import sys

from .recipes import RecipeError, SchemaError, parse_recipe
from .render import render

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SCHEMA = 3
EXIT_IO = 4


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="delayhopf-plots", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one image per recipe file")
    p.add_argument("recipes", nargs="+", metavar="recipe.json")
    args = parser.parse_args(argv)
    for path in args.recipes:
        try:
            recipe = parse_recipe(path)
            summary = render(recipe)
        except FileNotFoundError as exc:
            print(f"missing file: {exc}", file=sys.stderr)
            return EXIT_IO
        except (RecipeError, SchemaError) as exc:
            print(f"schema error: {exc}", file=sys.stderr)
            return EXIT_SCHEMA
        except OSError as exc:
            print(f"I/O failure: {exc}", file=sys.stderr)
            return EXIT_IO
        n_series = sum(len(panel) for panel in summary.series)
        print(
            f"{path} -> {summary.output} ({summary.width_px}x{summary.height_px}px, "
            f"{n_series} series, {summary.total_points()} points)",
            file=sys.stderr,
        )
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
