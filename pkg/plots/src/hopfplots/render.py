"""Rendering of figure recipes from delayhopf CSV files.

Read-only over its inputs; each data row lands in exactly one plotted
series, and the returned summary carries the per-series point counts so
callers (and tests) can verify that accounting.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .recipes import LINE_STYLES, FigureRecipe, PanelSpec, SchemaError

CURVE_COLUMNS = ["system", "method", "branch", "epsilon", "alpha", "gamma", "k", "T", "omega"]
TRAJECTORY_COLUMNS = ["t", "x", "v"]
COMPARISON_COLUMNS = ["system", "method", "branch", "max_abs_T_error", "mean_abs_T_error", "n_points"]

METHOD_COLORS = {
    "exact": "tab:blue",
    "approach1": "black",
    "approach2": "tab:red",
    "simulated": "tab:green",
}


@dataclass(frozen=True)
class RenderSummary:
    """What one recipe produced: image path, size, and series accounting."""

    output: str
    width_px: int
    height_px: int
    # per panel: {(method, branch) or column-name: point count}
    series: tuple[dict, ...]

    def total_points(self) -> int:
        return sum(sum(panel.values()) for panel in self.series)


def _read_rows(path: str, expected_columns: list[str]) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in expected_columns if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {missing}, header was {header}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _curves_panel(ax, panel: PanelSpec, styles: dict[str, str]) -> dict:
    rows = _read_rows(panel.input, CURVE_COLUMNS)
    present = sorted({r["method"] for r in rows})
    uncovered = [m for m in present if m not in styles]
    if uncovered:
        raise SchemaError(f"{panel.input}: no style for method(s) {uncovered}")
    counts: dict = {}
    for method in present:
        for branch in sorted({r["branch"] for r in rows if r["method"] == method}):
            series = [r for r in rows if r["method"] == method and r["branch"] == branch]
            series.sort(key=lambda r: float(r["k"]))
            ks = [float(r["k"]) for r in series]
            Ts = [float(r["T"]) for r in series]
            ax.plot(
                ks, Ts,
                linestyle=LINE_STYLES[styles[method]],
                color=METHOD_COLORS.get(method, "tab:gray"),
                label=method if branch == sorted({r["branch"] for r in rows if r["method"] == method})[0] else None,
            )
            counts[(method, branch)] = len(series)
    ax.legend()
    return counts


def _trajectory_panel(ax, panel: PanelSpec) -> dict:
    rows = _read_rows(panel.input, TRAJECTORY_COLUMNS)
    ts = [float(r["t"]) for r in rows]
    xs = [float(r["x"]) for r in rows]
    ax.plot(ts, xs, linestyle="-", color="tab:blue", label="x(t)")
    ax.legend()
    return {("trajectory", "x"): len(rows)}


def _comparison_panel(ax, panel: PanelSpec) -> dict:
    rows = _read_rows(panel.input, COMPARISON_COLUMNS)
    labels = [f"{r['method']}\n{r['branch']}" for r in rows]
    values = [float(r["max_abs_T_error"]) for r in rows]
    colors = [METHOD_COLORS.get(r["method"], "tab:gray") for r in rows]
    ax.bar(range(len(rows)), values, color=colors)
    ax.set_xticks(range(len(rows)), labels)
    counts = {(r["method"], r["branch"]): 1 for r in rows}
    if len(counts) != len(rows):
        raise SchemaError(f"{panel.input}: duplicate (method, branch) rows")
    return counts


def render(recipe: FigureRecipe) -> RenderSummary:
    """Render one recipe to its output image; returns the series accounting."""
    n = len(recipe.panels)
    fig, axes = plt.subplots(1, n, figsize=(6.4 * n, 4.8))
    if n == 1:
        axes = [axes]
    series = []
    try:
        for ax, panel in zip(axes, recipe.panels):
            if recipe.kind == "curves":
                counts = _curves_panel(ax, panel, recipe.styles)
            elif recipe.kind == "trajectory":
                counts = _trajectory_panel(ax, panel)
            else:
                counts = _comparison_panel(ax, panel)
            if panel.title:
                ax.set_title(panel.title)
            if panel.x_label:
                ax.set_xlabel(panel.x_label)
            if panel.y_label:
                ax.set_ylabel(panel.y_label)
            if panel.x_range:
                ax.set_xlim(*panel.x_range)
            if panel.y_range:
                ax.set_ylim(*panel.y_range)
            series.append(counts)
        out_dir = os.path.dirname(recipe.output)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        fig.savefig(recipe.output)
    finally:
        plt.close(fig)
    width, height = fig.get_size_inches() * fig.dpi
    return RenderSummary(recipe.output, int(width), int(height), tuple(series))
