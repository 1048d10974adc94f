"""Static figure reproduction from delayhopf CSV files."""

from .recipes import FigureRecipe, PanelSpec, RecipeError, SchemaError, parse_recipe
from .render import RenderSummary, render

__all__ = [
    "FigureRecipe",
    "PanelSpec",
    "RecipeError",
    "RenderSummary",
    "SchemaError",
    "parse_recipe",
    "render",
]
