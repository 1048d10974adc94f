import json

import pytest

from hopfplots.recipes import DEFAULT_STYLES, FigureRecipe, RecipeError, parse_recipe


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


VALID = {
    "kind": "curves",
    "output": "figs/out.svg",
    "panels": [{"input": "data/in.csv", "x_label": "k", "y_label": "T"}],
}


class TestParseRecipe:
    def test_valid_minimal(self, tmp_path):
        recipe = parse_recipe(write_json(tmp_path / "r.json", VALID))
        assert isinstance(recipe, FigureRecipe)
        assert recipe.kind == "curves"
        assert recipe.panels[0].input == "data/in.csv"
        assert recipe.styles == DEFAULT_STYLES

    def test_style_override(self, tmp_path):
        payload = dict(VALID, styles={"exact": "dotted"})
        recipe = parse_recipe(write_json(tmp_path / "r.json", payload))
        assert recipe.styles["exact"] == "dotted"
        assert recipe.styles["approach1"] == "dashdot"

    def test_unknown_kind(self, tmp_path):
        with pytest.raises(RecipeError, match="kind"):
            parse_recipe(write_json(tmp_path / "r.json", dict(VALID, kind="pie")))

    def test_missing_output(self, tmp_path):
        bad = {k: v for k, v in VALID.items() if k != "output"}
        with pytest.raises(RecipeError, match="output"):
            parse_recipe(write_json(tmp_path / "r.json", bad))

    def test_empty_panels(self, tmp_path):
        with pytest.raises(RecipeError, match="panels"):
            parse_recipe(write_json(tmp_path / "r.json", dict(VALID, panels=[])))

    def test_bad_style_name(self, tmp_path):
        payload = dict(VALID, styles={"exact": "wavy"})
        with pytest.raises(RecipeError, match="wavy"):
            parse_recipe(write_json(tmp_path / "r.json", payload))

    def test_bad_range(self, tmp_path):
        payload = dict(VALID, panels=[{"input": "a.csv", "x_range": [1]}])
        with pytest.raises(RecipeError, match="range"):
            parse_recipe(write_json(tmp_path / "r.json", payload))

    def test_not_json(self, tmp_path):
        path = tmp_path / "r.json"
        path.write_text("{nope")
        with pytest.raises(RecipeError, match="JSON"):
            parse_recipe(str(path))
