"""Declarative figure recipes.

A recipe is a small JSON file describing one output image: which CSV files
feed which panels, how each computation method is styled, and where the
image goes.  One recipe per reproduced figure is checked into the repo, so
the whole figure batch is a single command.

Schema:

    {
      "kind": "curves" | "trajectory" | "comparison",
      "output": "figs/name.svg",
      "styles": {"exact": "solid", "approach1": "dashdot", ...},
      "panels": [
        {"input": "data/name.csv", "title": "...",
         "x_label": "...", "y_label": "...",
         "x_range": [lo, hi], "y_range": [lo, hi]}
      ]
    }

``styles`` maps method names to matplotlib line styles and must cover every
method that actually appears in the data; axis ranges and titles are
optional.  Relative paths resolve against the working directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class RecipeError(Exception):
    """Malformed recipe file (unknown kind, missing field, bad types)."""


class SchemaError(Exception):
    """Input data does not satisfy the recipe (missing column, uncovered method, no rows)."""


KINDS = ("curves", "trajectory", "comparison")

DEFAULT_STYLES = {
    "exact": "solid",
    "approach1": "dashdot",
    "approach2": "dashed",
    "simulated": "dotted",
}

LINE_STYLES = {"solid": "-", "dashdot": "-.", "dashed": "--", "dotted": ":"}


@dataclass(frozen=True)
class PanelSpec:
    input: str
    title: str | None = None
    x_label: str | None = None
    y_label: str | None = None
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None


@dataclass(frozen=True)
class FigureRecipe:
    kind: str
    output: str
    panels: tuple[PanelSpec, ...]
    styles: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_STYLES))


def _range(value, where):
    if value is None:
        return None
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise RecipeError(f"{where}: range must be a two-element list")
    return float(value[0]), float(value[1])


def parse_recipe(path: str) -> FigureRecipe:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise RecipeError(f"{path}: not valid JSON ({exc})") from exc
    kind = raw.get("kind")
    if kind not in KINDS:
        raise RecipeError(f"{path}: kind must be one of {KINDS}, got {kind!r}")
    output = raw.get("output")
    if not isinstance(output, str) or not output:
        raise RecipeError(f"{path}: missing output path")
    panels_raw = raw.get("panels")
    if not isinstance(panels_raw, list) or not panels_raw:
        raise RecipeError(f"{path}: panels must be a nonempty list")
    panels = []
    for i, p in enumerate(panels_raw):
        where = f"{path}: panel {i}"
        if not isinstance(p, dict) or not isinstance(p.get("input"), str):
            raise RecipeError(f"{where}: needs an input CSV path")
        panels.append(
            PanelSpec(
                input=p["input"],
                title=p.get("title"),
                x_label=p.get("x_label"),
                y_label=p.get("y_label"),
                x_range=_range(p.get("x_range"), where),
                y_range=_range(p.get("y_range"), where),
            )
        )
    styles = dict(DEFAULT_STYLES)
    styles.update(raw.get("styles", {}))
    for method, style in styles.items():
        if style not in LINE_STYLES:
            raise RecipeError(
                f"{path}: style {style!r} for method {method!r} not in {sorted(LINE_STYLES)}"
            )
    return FigureRecipe(kind=kind, output=output, panels=tuple(panels), styles=styles)
