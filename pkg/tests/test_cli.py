import csv
import json

from lejaflip.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestLejaCommand:
    def test_disk_csv(self, capsys, tmp_path):
        out = tmp_path / "out.csv"
        code, _, err = run(capsys, "leja", "--disk", "-N", "16", "-o", str(out))
        assert code == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 16
        assert float(rows[0]["re"]) == 1.0
        assert "pass" in err

    def test_disk_json(self, capsys, tmp_path):
        out = tmp_path / "out.json"
        code, _, _ = run(capsys, "leja", "--disk", "-N", "8", "--format", "json", "-o", str(out))
        assert code == 0
        data = json.loads(out.read_text())
        assert data["n"] == 8 and len(data["points"]) == 8

    def test_rejects_zero_points(self, capsys):
        code, _, _ = run(capsys, "leja", "--disk", "-N", "0")
        assert code == 1

    def test_usage_error_exit_code(self, capsys):
        assert main(["leja", "--disk"]) == 1  # missing -N

    def test_ellipse_greedy(self, capsys, tmp_path):
        out = tmp_path / "ell.csv"
        code, _, err = run(
            capsys, "leja", "--ellipse", "1.2", "0.8", "--greedy", "-N", "32", "--samples", "4096", "-o", str(out)
        )
        assert code == 0
        assert "max_violation" in err
        assert len(list(csv.DictReader(out.open()))) == 32

    def test_disk_greedy(self, capsys):
        code, out, _ = run(capsys, "leja", "--disk", "--greedy", "-N", "4", "--samples", "512")
        assert code == 0
        assert out.splitlines()[0] == "index,re,im"

    def test_validation_failure_exits_two(self, capsys):
        # an unreachable tolerance turns rounding-level shortfalls into failures
        code, _, err = run(capsys, "leja", "--disk", "-N", "50", "--samples", "256", "--tol", "1e-18")
        assert code == 2
        assert "FAIL" in err


class TestBoundsCommand:
    def test_small_sweep(self, capsys):
        code, out, _ = run(capsys, "bounds", "--max-n", "12")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert len(rows) == 12
        assert all(float(r["sup_margin"]) > 0 for r in rows)

    def test_special_n(self, capsys):
        code, out, _ = run(capsys, "bounds", "--special-n", "--p", "2..3")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert [int(r["N"]) for r in rows] == [3, 7]
        assert all(float(r["lebesgue_relerr"]) <= 1e-6 for r in rows)

    def test_special_n_avg_trend(self, capsys):
        code, _, _ = run(capsys, "bounds", "--special-n", "--p", "2..4", "--avg")
        assert code == 0

    def test_threads_do_not_change_output(self, capsys):
        code1, out1, _ = run(capsys, "bounds", "--max-n", "10")
        code2, out2, _ = run(capsys, "bounds", "--max-n", "10", "--threads", "4")
        assert code1 == code2 == 0
        assert out1 == out2

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "bounds", "--max-n", "3", "--format", "json")
        assert code == 0
        assert [r["N"] for r in json.loads(out)] == [1, 2, 3]

    def test_rejects_empty_sweep(self, capsys):
        code, _, err = run(capsys, "bounds", "--max-n", "0")
        assert code == 1
        assert "error" in err


class TestBivariateCommand:
    def test_delta(self, capsys):
        code, out, _ = run(capsys, "bivariate", "--delta", "--n-max", "13")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert int(rows[-1]["cases_seen"]) == 7
        assert float(rows[-1]["max_delta_err"]) <= 1e-10

    def test_oracle(self, capsys):
        code, out, _ = run(capsys, "bivariate", "--oracle", "--n-max", "10", "--points", "4")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert all(float(r["max_rel_err"]) <= 1e-8 for r in rows)

    def test_factorization(self, capsys):
        code, out, _ = run(capsys, "bivariate", "--factorization", "--n-max", "10", "--points", "4")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert {r["check"] for r in rows} == {"extension", "product-formula"}
        assert all(float(r["max_rel_err"]) <= 1e-8 for r in rows)

    def test_verify_2d_leja(self, capsys):
        code, out, _ = run(capsys, "bivariate", "--verify-2d-leja", "--n-max", "12", "--grid", "256")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert float(rows[0]["max_shortfall"]) <= 1e-6

    def test_lebesgue_slope_report(self, capsys):
        code, out, err = run(capsys, "bivariate", "--lebesgue", "--n", "2..5", "--grid", "64")
        assert code == 0
        assert "slope" in err
        assert len(list(csv.DictReader(out.splitlines()))) == 4

    def test_decay(self, capsys):
        code, out, _ = run(capsys, "bivariate", "--decay", "--n", "2..6", "--grid", "24")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        errs = [float(r["sup_error"]) for r in rows]
        assert all(b < a for a, b in zip(errs, errs[1:]))


class TestTransportCommand:
    def test_identity_alper_zero(self, capsys):
        code, out, _ = run(capsys, "transport", "--alper", "--ellipse", "1", "1")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert abs(float(rows[0]["alper"])) <= 1e-6

    def test_ellipse_sweep(self, capsys):
        code, out, err = run(capsys, "transport", "--ellipse", "1.2", "0.8", "--max-n", "16", "--refine", "0")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert [int(r["N"]) for r in rows] == [2, 4, 8, 16]
        assert "slope" in err

    def test_rejects_bad_axes(self, capsys):
        code, _, err = run(capsys, "transport", "--alper", "--ellipse", "0.5", "1.0")
        assert code == 1
        assert "error" in err


def test_unknown_command_is_usage_error():
    assert main(["frobnicate"]) == 1
