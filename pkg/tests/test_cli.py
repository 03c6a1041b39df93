import io
import math

import pytest

from unimodal_bounds import gauss_bound
from unimodal_bounds.cli import main
from unimodal_bounds.verify import parse_report


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def report(*argv):
    code, text = run(*argv)
    assert code == 0, text
    return parse_report(text)


class TestBound:
    def test_s3(self):
        rep = report("bound", "--kind", "second", "--u", "2", "--v", "6")
        assert rep["region"] == "S3"
        assert float(rep["bound"]) == pytest.approx(1 / 18, rel=1e-15)
        assert rep["bound"].startswith("0.05555555555555")

    def test_a3(self):
        rep = report("bound", "--kind", "first", "--u", "1.5", "--v", "3")
        assert rep["region"] == "A3" and rep["bound"].startswith("0.2222222222")

    def test_one_sided(self):
        rep = report("bound", "--kind", "first", "--u", "0.5", "--v", "inf")
        assert rep["region"] == "A2" and float(rep["bound"]) == 0.375
        assert rep["v"] == "inf"

    def test_raw_matches_normalized(self):
        a = report("bound", "--u", "2", "--v", "6", "--moment", "1")
        b = report("bound", "--u", "4", "--v", "12", "--moment", "4")
        assert abs(float(a["bound"]) - float(b["bound"])) <= 1e-12
        assert a["region"] == b["region"]

    def test_swapped(self):
        rep = report("bound", "--u", "6", "--v", "2")
        assert rep["swapped"] == "true" and rep["region"] == "S3"

    def test_chebyshev_ratio_uncapped(self):
        rep = report("bound", "--u", "0.5", "--v", "0.6")
        assert float(rep["chebyshev_ratio"]) == pytest.approx(4.0)

    def test_unimodal_family(self):
        rep = report("bound", "--u", "1", "--v", "5", "--family", "unimodal")
        assert float(rep["bound"]) == pytest.approx(1 - 1 / math.sqrt(3))

    def test_oracle_flag(self):
        rep = report("bound", "--u", "2", "--v", "6", "--oracle")
        assert float(rep["oracle"]) == pytest.approx(1 / 18, abs=5e-4)

    @pytest.mark.parametrize(
        "argv",
        [
            ("bound", "--u", "-1", "--v", "2"),
            ("bound", "--u", "inf", "--v", "inf"),
            ("bound", "--u", "1", "--v", "2", "--moment", "0"),
            ("bound", "--u", "abc", "--v", "2"),
            ("bound", "--u", "1", "--v", "nan"),
            ("bound", "--u", "1"),
            ("nope",),
        ],
    )
    def test_usage_errors_exit_two(self, argv, capsys):
        assert run(*argv)[0] == 2


def test_region_and_extremal():
    assert report("region", "--kind", "first", "--u", "1.5", "--v", "5")["region"] == "A4"
    rep = report("extremal", "--u", "0.5", "--v", "2")
    assert rep["region"] == "S4" and rep["components"] == "2"
    assert float(rep["component_1_half_width"]) == pytest.approx(1.4431, abs=1e-3)
    assert float(rep["component_2_weight"]) == pytest.approx(0.2291, abs=1e-4)


def test_extremal_raw_scale():
    rep = report("extremal", "--u", "4", "--v", "12", "--moment", "4")
    assert float(rep["component_1_half_width"]) == pytest.approx(6.0)


class TestSweep:
    def test_first_small(self):
        code, text = run("sweep", "--kind", "first", "--step", "1", "--extent", "2")
        assert code == 0
        lines = text.splitlines()
        assert lines[0] == "u,v,bound,region"
        rows = [line.split(",") for line in lines[1:]]
        assert [(r[0], r[1]) for r in rows] == [("1", "1"), ("1", "2"), ("2", "2")]
        assert [float(r[2]) for r in rows] == pytest.approx([0.5, 1 / 3, 0.25], rel=1e-15)
        assert all(not line.endswith(",") for line in lines)

    def test_step_beyond_extent(self):
        assert run("sweep", "--step", "3", "--extent", "2") == (0, "u,v,bound,region\n")

    def test_second_diagonal(self, tmp_path):
        path = tmp_path / "grid.csv"
        assert run("sweep", "--step", "0.25", "--extent", "3", "--output", str(path))[0] == 0
        rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
        diag = [r for r in rows if r[0] == r[1]]
        assert len(diag) == 12
        for u, _, b, _ in diag:
            assert float(b) == pytest.approx(gauss_bound(float(u)).bound, abs=1e-15)

    def test_unwritable(self, tmp_path):
        assert run("sweep", "--step", "1", "--extent", "2", "--output", str(tmp_path / "no" / "x.csv"))[0] == 2

    def test_bad_step(self):
        assert run("sweep", "--step", "0", "--extent", "2")[0] == 2


def write_table(path, rows, header="# x g"):
    path.write_text(header + "\n" + "\n".join(f"{x} {g}" for x, g in rows) + "\n")
    return str(path)


class TestGbound:
    def test_square_table(self, tmp_path):
        xs = [i / 100 for i in range(1001)]
        table = write_table(tmp_path / "sq.txt", [(x, x * x) for x in xs])
        rep = report("gbound", "--table", table, "--v", "1", "--eg", "1")
        assert float(rep["x_v"]) == pytest.approx(1.5, rel=1e-4)
        assert float(rep["bound"]) == pytest.approx(4 / 9, rel=1e-3)
        assert rep["horizon_hit"] == "false"

    def test_constant_table(self, tmp_path):
        table = write_table(tmp_path / "one.txt", [(0, 1), (10, 1)])
        rep = report("gbound", "--table", table, "--v", "1", "--eg", "1")
        assert rep["x_v"] == "inf" and float(rep["bound"]) == 1.0 and rep["horizon_hit"] == "true"

    @pytest.mark.parametrize(
        "rows",
        [[(0, 0), (1, 2), (2, 1)], [(0, -1), (1, 1)], [(0, 0), (0, 1)]],
    )
    def test_invalid_tables(self, tmp_path, rows):
        table = write_table(tmp_path / "bad.txt", rows)
        assert run("gbound", "--table", table, "--v", "1", "--eg", "1")[0] == 2

    def test_malformed_and_missing(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("0 1 2\n")
        assert run("gbound", "--table", str(bad), "--v", "1", "--eg", "1")[0] == 2
        assert run("gbound", "--table", str(tmp_path / "missing"), "--v", "1", "--eg", "1")[0] == 2


class TestVerify:
    ARGS = ("verify", "--grid", "4", "--oracle-grid", "64", "--refine", "2", "--mc-cases", "5", "--mc-samples", "2000")

    def test_deterministic(self, tmp_path):
        code1, a = run(*self.ARGS, "--seed", "7")
        code2, b = run(*self.ARGS, "--seed", "7", "--output", str(tmp_path / "r.txt"))
        assert a == b and code1 == code2
        assert (tmp_path / "r.txt").read_text() == a
        assert a.startswith("seed=7\ntolerance=0.00050000000000000001\n")
        assert a.rstrip().splitlines()[-1] in ("status=PASS", "status=FAIL")

    def test_second_moment_oracle_suite_passes(self):
        _, text = run(*self.ARGS)
        assert "oracle_second: 10/10 pass" in text

    def test_tight_tolerance_reports_failures(self):
        code, text = run(*self.ARGS, "--tol", "1e-12")
        assert code == 1
        assert "status=FAIL" in text and "fail:" in text
