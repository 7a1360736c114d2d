import json
import re

import pytest

from treelike import census, parse_gauss_code
from treelike.cli import main

STAR15 = "(" + "-()" * 14 + ")"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


class TestAnalyze:
    def test_interleaved_gauss(self, capsys):
        code, out, _ = run(capsys, "analyze", "--gauss", "1 2 1 2")
        assert code == 1 and "not tree-like" in out

    def test_limacon(self, capsys, schema_validator):
        code, rep, _ = run_json(capsys, "analyze", "--tree", "(>())")
        assert code == 0
        assert rep["nonflattening"] is True and rep["index"] == 2
        assert rep["bounds"]["exact"] == 0
        schema_validator(rep, "analyze.v1.json")

    def test_figure_eight(self, capsys, schema_validator):
        code, rep, _ = run_json(capsys, "analyze", "--tree", "(-())")
        assert code == 0
        assert rep["nonflattening"] is False and rep["index"] == 0
        assert rep["bounds"]["exact"] == 2
        schema_validator(rep, "analyze.v1.json")

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "analyze", "--tree", "(>())")
        assert code == 0
        assert "nonflattening: true" in out and "index: 2" in out

    def test_gauss_tree_like(self, capsys, schema_validator):
        code, rep, _ = run_json(capsys, "analyze", "--gauss", "1 2 2 1")
        assert code == 0 and rep["tree_like"] and rep["directions"] is None
        schema_validator(rep, "analyze.v1.json")

    def test_all_directions(self, capsys, schema_validator):
        code, rep, _ = run_json(capsys, "analyze", "--gauss", "1 1", "--all-directions")
        assert code == 0
        # one undirected and two directed choices on a single edge
        assert len(rep["directions"]) == 3
        assert sorted(r["bounds"]["exact"] for r in rep["directions"]) == [0, 0, 2]
        schema_validator(rep, "analyze.v1.json")

    def test_all_directions_size_limit(self, capsys):
        word = " ".join(str(k) for k in range(1, 9))
        word = word + " " + " ".join(reversed(word.split()))
        code, _, err = run(capsys, "analyze", "--gauss", word, "--all-directions")
        assert code == 3 and "n <= 8" in err

    def test_parse_error_position(self, capsys):
        code, _, err = run(capsys, "analyze", "--tree", "(-()")
        assert code == 2
        assert re.search(r"line 1", err) and re.search(r"col", err)

    def test_gauss_parse_error(self, capsys):
        assert run(capsys, "analyze", "--gauss", "1 2 x 1")[0] == 2

    def test_colliding(self, capsys):
        code, _, err = run(capsys, "analyze", "--tree", "(<()<())")
        assert code == 1 and "rejected" in err

    def test_stdin_and_file(self, capsys, monkeypatch, tmp_path):
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO("(>())\n"))
        code, rep, _ = run_json(capsys, "analyze", "--tree", "-")
        assert code == 0 and rep["index"] == 2
        f = tmp_path / "t.txt"
        f.write_text("\n(-())\n")
        code, rep, _ = run_json(capsys, "analyze", "--tree", f"@{f}")
        assert code == 0 and rep["index"] == 0

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "analyze", "--tree", f"@{tmp_path / 'nope'}")[0] == 2

    def test_deterministic(self, capsys):
        a = run(capsys, "analyze", "--tree", "(-(>())<(-()))", "--json")
        b = run(capsys, "analyze", "--tree", "(-(>())<(-()))", "--json")
        assert a == b


class TestMinimize:
    def test_chain(self, capsys, schema_validator):
        code, out, _ = run(capsys, "minimize", "--tree", "(-()-())")
        rep = json.loads(out)
        assert code == 0
        assert (rep["lower"], rep["exact"], rep["upper"]) == (0, 2, 4)
        schema_validator(rep, "bound_report.v1.json")

    def test_single_vertex(self, capsys):
        code, out, _ = run(capsys, "minimize", "--tree", "()")
        rep = json.loads(out)
        assert (rep["lower"], rep["exact"], rep["upper"]) == (0, 0, 0)

    def test_budget_cutoff(self, capsys, schema_validator):
        code, out, _ = run(capsys, "minimize", "--tree", STAR15, "--budget", "26")
        rep = json.loads(out)
        assert code == 3
        assert rep["exact"] is None and rep["witness"] is None
        assert rep["lower"] <= rep["upper"]
        schema_validator(rep, "bound_report.v1.json")

    def test_budget_env(self, capsys, monkeypatch):
        monkeypatch.setenv("TLC_BUDGET", "26")
        code, out, _ = run(capsys, "minimize", "--tree", STAR15)
        assert code == 3 and json.loads(out)["exact"] is None

    def test_rejects_gauss(self, capsys):
        with pytest.raises(SystemExit):
            main(["minimize", "--gauss", "1 1"])


class TestCount:
    def test_totals(self, capsys, schema_validator):
        code, rep, _ = run_json(capsys, "count", "--n", "5")
        assert code == 0 and rep["total_ncpd"] == 48 and rep["plane_trees"] == 3
        schema_validator(rep, "count_totals.v1.json")

    def test_tree(self, capsys, schema_validator):
        code, rep, _ = run_json(capsys, "count", "--tree", "(-()-())")
        assert code == 0 and rep["orbit_count"] == 5
        schema_validator(rep, "census_row.v1.json")

    def test_gauss(self, capsys):
        code, rep, _ = run_json(capsys, "count", "--gauss", "1 2 2 1")
        assert rep["orbit_count"] == 5

    def test_star_document(self, capsys, schema_validator):
        code, out, _ = run(capsys, "count", "--tree", "(" + "-()" * 6 + ")", "--document")
        assert code == 0 and "classes: 46" in out and "literal" in out

    def test_size_limit(self, capsys):
        assert run(capsys, "count", "--n", "13")[0] == 3

    def test_needs_input(self, capsys):
        assert run(capsys, "count")[0] == 2


class TestEnumerate:
    def test_from_two(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--n", "4", "--from", "2")
        rows = out.strip().splitlines()[1:]
        assert code == 0
        counts = [int(r.split(",")[5]) for r in rows]
        assert counts == [2, 5, 11, 8]

    def test_single_row(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--n", "2")
        rows = out.strip().splitlines()[1:]
        # the two directed maps on one edge are swapped by the half turn
        assert len(rows) == 1 and rows[0].split(",")[5] == "2"

    def test_json(self, capsys, schema_validator):
        code, rep, _ = run_json(capsys, "enumerate", "--n", "5", "--from", "3")
        assert code == 0 and len(rep["rows"]) == 1 + 2 + 3
        schema_validator(rep, "census.v1.json")

    def test_strict_clean(self, capsys):
        assert run(capsys, "enumerate", "--n", "7", "--strict")[0] == 0

    def test_strict_with_injected_fault(self, capsys, monkeypatch):
        real = census.formula_orbits
        monkeypatch.setattr(census, "formula_orbits", lambda base, sym=None: real(base, sym) + 1)
        code, _, err = run(capsys, "enumerate", "--n", "5", "--strict")
        assert code == 4 and "disagreeing" in err

    @pytest.mark.slow
    def test_strict_fault_at_twelve(self, capsys, monkeypatch):
        real = census.formula_orbits

        def faulty(base, sym=None):
            value = real(base, sym)
            return value + 1 if max(map(base.degree, range(base.n))) == 11 else value

        monkeypatch.setattr(census, "formula_orbits", faulty)
        code, out, err = run(capsys, "enumerate", "--n", "12", "--strict")
        assert code == 4 and "1 disagreeing" in err
        assert out.count("\n") == 2694 + 1

    def test_size_limit(self, capsys):
        assert run(capsys, "enumerate", "--n", "13")[0] == 3


class TestRender:
    def test_limacon(self, capsys, tmp_path):
        out = tmp_path / "out.svg"
        code, _, _ = run(capsys, "render", "--tree", "(>())", "--svg", str(out))
        assert code == 0
        assert out.read_text().count('class="crossing"') == 1

    def test_simple_loop(self, capsys, tmp_path):
        out = tmp_path / "out.svg"
        assert run(capsys, "render", "--tree", "()", "--svg", str(out))[0] == 0
        svg = out.read_text()
        assert 'class="curve"' in svg and 'class="crossing"' not in svg

    def test_witness_colouring(self, capsys, tmp_path):
        out = tmp_path / "out.svg"
        code, _, _ = run(capsys, "render", "--tree", "(-())", "--svg", str(out),
                         "--coorient", "witness")
        svg = out.read_text()
        assert code == 0 and svg.count('class="side"') == 2
        assert svg.count('class="inflection"') == 2

    def test_continuous_colouring(self, capsys):
        code, out, _ = run(capsys, "render", "--tree", "(-())", "--coorient", "continuous")
        # one loop outward, the other inward
        assert code == 0 and "#1a9641" in out and "#d7191c" in out

    def test_stdout(self, capsys):
        code, out, _ = run(capsys, "render", "--tree", "(>())", "--width", "200")
        assert code == 0 and out.startswith("<svg") and 'width="200"' in out

    def test_json_summary(self, capsys, schema_validator, tmp_path):
        code, rep, _ = run_json(capsys, "render", "--tree", "(-(-()))",
                                "--svg", str(tmp_path / "p.svg"))
        assert code == 0 and rep["crossings"] == 2
        assert parse_gauss_code(" ".join(map(str, rep["word"]))) == parse_gauss_code("1 2 2 1")
        assert abs(rep["turning"]) == rep["index"]
        schema_validator(rep, "render.v1.json")

    def test_size_limit(self, capsys):
        assert run(capsys, "render", "--tree", "(" + "-()" * 10 + ")")[0] == 3

    def test_realization_failure(self, capsys, monkeypatch):
        from treelike import render
        from treelike.errors import RealizationFailed

        def boom(t, **kw):
            raise RealizationFailed("injected", t.to_text())

        monkeypatch.setattr(render, "realize", boom)
        code, _, err = run(capsys, "render", "--tree", "(>())")
        assert code == 4 and "render failed" in err
