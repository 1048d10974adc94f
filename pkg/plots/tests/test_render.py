import json

import pytest

from hopfplots.cli import EXIT_IO, EXIT_OK, EXIT_SCHEMA, main
from hopfplots.recipes import FigureRecipe, PanelSpec, SchemaError, parse_recipe
from hopfplots.render import render

CURVE_HEADER = "system,method,branch,epsilon,alpha,gamma,k,T,omega"


def curve_csv(tmp_path, name="curves.csv", methods=("approach1", "exact"), n=5):
    lines = [CURVE_HEADER]
    for method in methods:
        for branch in ("lower", "upper"):
            for i in range(n):
                k = 1.0 + 0.1 * i
                T = (1.0 if branch == "lower" else 2.0) + 0.05 * i
                lines.append(f"vdp,{method},{branch},0.1,0,0,{k},{T},1.0")
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return path


def recipe_for(tmp_path, input_path, kind="curves", name="r.json"):
    payload = {
        "kind": kind,
        "output": str(tmp_path / "figs" / "out.svg"),
        "panels": [{"input": str(input_path), "x_label": "k", "y_label": "T"}],
    }
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


class TestRenderCurves:
    def test_series_counts_match_method_branch_combinations(self, tmp_path):
        csv_path = curve_csv(tmp_path, methods=("approach1", "approach2", "exact"))
        recipe = parse_recipe(str(recipe_for(tmp_path, csv_path)))
        summary = render(recipe)
        assert (tmp_path / "figs" / "out.svg").exists()
        assert len(summary.series) == 1
        counts = summary.series[0]
        assert set(counts) == {
            (m, b) for m in ("approach1", "approach2", "exact") for b in ("lower", "upper")
        }
        assert summary.total_points() == 5 * 6

    def test_every_row_lands_in_exactly_one_series(self, tmp_path):
        csv_path = curve_csv(tmp_path, methods=("exact",), n=7)
        recipe = parse_recipe(str(recipe_for(tmp_path, csv_path)))
        summary = render(recipe)
        n_rows = len(csv_path.read_text().splitlines()) - 1
        assert summary.total_points() == n_rows

    def test_empty_csv_is_error_and_no_image(self, tmp_path):
        csv_path = tmp_path / "empty.csv"
        csv_path.write_text(CURVE_HEADER + "\n")
        recipe = parse_recipe(str(recipe_for(tmp_path, csv_path)))
        with pytest.raises(SchemaError, match="no data rows"):
            render(recipe)
        assert not (tmp_path / "figs" / "out.svg").exists()

    def test_missing_column_names_the_column(self, tmp_path):
        csv_path = tmp_path / "bad.csv"
        csv_path.write_text("system,method,branch,k\nvdp,exact,lower,1.0\n")
        recipe = parse_recipe(str(recipe_for(tmp_path, csv_path)))
        with pytest.raises(SchemaError, match="T"):
            render(recipe)

    def test_uncovered_method_is_schema_error(self, tmp_path):
        csv_path = curve_csv(tmp_path, methods=("newfangled",))
        recipe = parse_recipe(str(recipe_for(tmp_path, csv_path)))
        with pytest.raises(SchemaError, match="newfangled"):
            render(recipe)

    def test_rendering_twice_is_stable(self, tmp_path):
        csv_path = curve_csv(tmp_path)
        recipe = parse_recipe(str(recipe_for(tmp_path, csv_path)))
        a = render(recipe)
        b = render(recipe)
        assert (a.width_px, a.height_px) == (b.width_px, b.height_px)
        assert a.series == b.series


class TestRenderTrajectory:
    def test_single_time_series_panel(self, tmp_path):
        csv_path = tmp_path / "traj.csv"
        lines = ["t,x,v"] + [f"{0.1 * i},{i * 0.01},{0.0}" for i in range(50)]
        csv_path.write_text("\n".join(lines) + "\n")
        recipe = parse_recipe(str(recipe_for(tmp_path, csv_path, kind="trajectory")))
        summary = render(recipe)
        assert summary.series[0] == {("trajectory", "x"): 50}


class TestRenderComparison:
    def test_bar_per_method_branch(self, tmp_path):
        csv_path = tmp_path / "cmp.csv"
        csv_path.write_text(
            "system,method,branch,max_abs_T_error,mean_abs_T_error,n_points\n"
            "duffing,approach1,lower,1.0,0.5,10\n"
            "duffing,approach1,upper,2.0,0.9,10\n"
            "duffing,approach2,lower,0.1,0.05,10\n"
            "duffing,approach2,upper,0.2,0.09,10\n"
        )
        recipe = parse_recipe(str(recipe_for(tmp_path, csv_path, kind="comparison")))
        summary = render(recipe)
        assert len(summary.series[0]) == 4


class TestCli:
    def test_batch_of_two_recipes_two_images(self, tmp_path):
        csv_path = curve_csv(tmp_path)
        r1 = recipe_for(tmp_path, csv_path, name="r1.json")
        payload = json.loads(r1.read_text())
        payload["output"] = str(tmp_path / "figs" / "out2.svg")
        r2 = tmp_path / "r2.json"
        r2.write_text(json.dumps(payload))
        assert main(["render", str(r1), str(r2)]) == EXIT_OK
        assert (tmp_path / "figs" / "out.svg").exists()
        assert (tmp_path / "figs" / "out2.svg").exists()

    def test_missing_input_file_exit_code(self, tmp_path):
        recipe = recipe_for(tmp_path, tmp_path / "nope.csv")
        assert main(["render", str(recipe)]) == EXIT_IO

    def test_schema_mismatch_exit_code(self, tmp_path):
        csv_path = tmp_path / "empty.csv"
        csv_path.write_text(CURVE_HEADER + "\n")
        recipe = recipe_for(tmp_path, csv_path)
        assert main(["render", str(recipe)]) == EXIT_SCHEMA

    def test_bad_recipe_exit_code(self, tmp_path):
        path = tmp_path / "r.json"
        path.write_text(json.dumps({"kind": "pie", "output": "x.svg", "panels": [{"input": "a"}]}))
        assert main(["render", str(path)]) == EXIT_SCHEMA
