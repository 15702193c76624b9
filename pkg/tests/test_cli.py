import csv
import io
import json
import subprocess
import sys

import pytest

from wellpress.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestLevels:
    def test_n3(self):
        code, text = run("levels", "--n", "3", "--l", "0")
        assert code == 0
        row, = csv_rows(text)
        assert float(row["xi"]) == pytest.approx(1.71425757490148297, abs=1e-12)
        assert row["l"] == "0" and row["branch"] == "0"

    def test_empty_is_ok(self):
        code, text = run("levels", "--n", "2", "--l", "0")
        assert code == 0
        assert text.strip() == "n,l,branch,xi,eta,energy_fraction,marginal"

    def test_both_l(self):
        code, text = run("levels", "--n", "12", "--l", "0,1", "--format", "json")
        assert code == 0
        doc = json.loads(text)
        assert [r["l"] for r in doc["rows"]] == [0, 1]

    def test_physical_triple(self):
        code, text = run("levels", "--mass", "9.1093837139e-31", "--depth", "1.602176634e-19",
                         "--radius", "6.761640727783680147e-10", "--format", "json")
        assert code == 0
        doc = json.loads(text)
        assert doc["n"] == 12
        assert doc["strength_exact"] == pytest.approx(12.0, rel=1e-12)

    def test_inconsistent_triple(self):
        code, _ = run("levels", "--mass", "9.1093837139e-31", "--depth", "1.602176634e-19",
                      "--radius", "7e-10")
        assert code == 2

    @pytest.mark.parametrize("argv", [["levels", "--n", "3", "--l", "2"],
                                      ["levels", "--n", "x"],
                                      ["levels", "--n", "0"],
                                      ["levels"],
                                      ["bogus"]])
    def test_usage_errors(self, argv):
        assert run(*argv)[0] == 2


class TestTransition:
    def test_3_4(self):
        code, text = run("transition", "--n1", "3", "--n2", "4")
        assert code == 0
        row, = csv_rows(text)
        assert float(row["p_xi_form"]) == pytest.approx(0.203927470590078029, rel=1e-12)
        assert float(row["p_energy_form"]) == pytest.approx(0.203927470590078029, rel=1e-12)
        assert row["allowed"] == "true"

    def test_4_5(self):
        code, text = run("transition", "--n1", "4", "--n2", "5", "--format", "json")
        doc = json.loads(text)
        assert code == 0
        assert doc["unit"] == "mV0/(pi*hbar^2)"
        assert doc["rows"][0]["p_xi_form"] == pytest.approx(0.123626404098249705, rel=1e-12)

    def test_not_allowed(self, capsys):
        code, text = run("transition", "--n1", "4", "--n2", "3")
        assert code == 3 and text == ""
        assert "not allowed" in capsys.readouterr().err

    def test_no_level(self):
        assert run("transition", "--n1", "2", "--n2", "4")[0] == 4
        assert run("transition", "--n1", "3", "--n2", "4", "--branch2", "1")[0] == 4


class TestIonize:
    def test_n3(self):
        code, text = run("ionize", "--n", "3")
        assert code == 0
        assert abs(float(csv_rows(text)[0]["p_ion"]) - 0.653) < 1e-3

    def test_n6_note(self, capsys):
        code, text = run("ionize", "--n", "6", "--format", "json")
        assert code == 0
        doc = json.loads(text)
        assert doc["rows"][0]["p_ion"] == pytest.approx(0.246502359568581769, rel=1e-12)
        assert "0.4931" in doc["notes"][0]
        assert "0.4931" in capsys.readouterr().err

    def test_physical(self):
        code, text = run("ionize", "--n", "3", "--mass", "9.1093837139e-31",
                         "--depth", "1.602176634e-19", "--format", "json")
        row = json.loads(text)["rows"][0]
        assert row["physical_unit"] == "m^-2"
        assert row["p_ion_physical"] == pytest.approx(row["p_ion"] * 4177314707953694485.4, rel=1e-9)

    def test_no_bound_state(self, capsys):
        assert run("ionize", "--n", "2")[0] == 4
        assert "no bound state" in capsys.readouterr().err


class TestEos:
    def test_pressure_cube(self):
        code, text = run("eos", "pressure", "--b0", "1", "--b0p", "4", "--x", "8")
        assert code == 0 and float(csv_rows(text)[0]["pressure"]) == 144.0

    def test_invert_cube(self):
        code, text = run("eos", "invert", "--b0", "1", "--b0p", "4", "--p", "144")
        assert code == 0 and float(csv_rows(text)[0]["x"]) == pytest.approx(8.0, abs=1e-11)

    def test_jump_zero(self):
        code, text = run("eos", "jump", "--b0", "1", "--b0p", "4", "--rho1", "1.2", "--ptr", "0")
        assert code == 0 and float(csv_rows(text)[0]["delta"]) == 0.0

    def test_diff_and_approx(self):
        _, a = run("eos", "diff", "--b0", "160", "--b0p", "4.5", "--rho0", "3.58",
                   "--rho1", "3.7", "--rho2", "4.1")
        _, b = run("eos", "approx", "--b0", "160", "--b0p", "4.5", "--rho0", "3.58",
                   "--rho1", "3.7", "--rho2", "4.1")
        assert a == b

    def test_range_errors(self):
        assert run("eos", "invert", "--b0", "1", "--b0p", "4", "--p", "1e9")[0] == 5
        assert run("eos", "invert", "--b0", "1", "--b0p", "3.5", "--p", "0.5")[0] == 5
        assert run("eos", "invert", "--b0", "1", "--b0p", "3.5", "--p", "0.5", "--x-max", "3")[0] == 0

    def test_material_file(self, tmp_path):
        f = tmp_path / "mat.txt"
        f.write_text("# units: B0 in GPa, rho0 in g/cm^3\nsample_a 160 4.5 3.58\n")
        code, text = run("eos", "pressure", "--material-file", str(f), "--material", "sample_a",
                         "--rho", "3.58", "--format", "json")
        assert code == 0
        doc = json.loads(text)
        assert doc["material"] == "sample_a" and doc["rows"][0]["pressure"] == 0.0
        assert run("eos", "pressure", "--material-file", str(f), "--material", "nope", "--x", "1")[0] == 2

    def test_missing_inputs(self):
        assert run("eos", "pressure", "--b0", "1", "--b0p", "4")[0] == 2
        assert run("eos", "diff", "--b0", "1", "--b0p", "4", "--rho1", "1")[0] == 2
        assert run("eos", "pressure", "--b0", "1", "--b0p", "4", "--x", "-1")[0] == 2


class TestSweep:
    def test_adjacent(self):
        code, text = run("sweep", "--n-min", "3", "--n-max", "5", "--pairs", "adjacent")
        assert code == 0
        rows = csv_rows(text)
        assert [(r["n1"], r["n2"]) for r in rows] == [("3", "4"), ("4", "5")]
        assert float(rows[0]["p_tr"]) == pytest.approx(0.203927470590078029, rel=1e-12)
        assert float(rows[1]["p_tr"]) == pytest.approx(0.123626404098249705, rel=1e-12)

    def test_single_n(self):
        code, text = run("sweep", "--n-min", "4", "--n-max", "4")
        row, = csv_rows(text)
        assert row["n2"] == row["xi2"] == row["p_tr"] == ""
        assert float(row["p_ion_n1"]) == pytest.approx(0.449112314544836084, rel=1e-12)

    def test_all_allowed_count(self):
        from wellpress.pressure import transition_allowed
        from wellpress.well import solve_l0
        g = {n: solve_l0(n)[0] for n in range(3, 7)}
        expected = sum(transition_allowed(g[a], g[b]) for a in g for b in g if a != b)
        code, text = run("sweep", "--n-min", "3", "--n-max", "6", "--pairs", "all-allowed")
        rows = csv_rows(text)
        assert len(rows) == expected == 6
        keys = [(int(r["n1"]), int(r["n2"])) for r in rows]
        assert keys == sorted(keys)

    def test_out_file(self, tmp_path):
        target = tmp_path / "sweep.csv"
        code, text = run("sweep", "--n-min", "3", "--n-max", "5", "--out", str(target))
        assert code == 0 and text == ""
        assert target.read_text().startswith("n1,n2,")

    @pytest.mark.parametrize("lo,hi", [("2", "5"), ("6", "5"), ("3", "201")])
    def test_bounds(self, lo, hi):
        assert run("sweep", "--n-min", lo, "--n-max", hi)[0] == 2


class TestVerify:
    def test_default(self):
        code, text = run("verify")
        assert code == 0
        rows = csv_rows(text)
        kinds = {r["kind"] for r in rows}
        assert kinds == {"published", "family", "deviation"}
        dev, = [r for r in rows if r["kind"] == "deviation"]
        assert dev["name"] == "P_ion n=6" and float(dev["expected"]) == 0.4931

    def test_json(self):
        code, text = run("verify", "--format", "json")
        doc = json.loads(text)
        assert code == 0 and doc["passed"] is True
        assert doc["paper_deviations"][0]["paper_value"] == 0.4931

    def test_detail(self):
        _, text = run("verify", "--n-min", "3", "--n-max", "5", "--detail")
        assert any(r["kind"] == "check" for r in csv_rows(text))


class TestSerialization:
    @pytest.mark.parametrize("argv", [
        ["levels", "--n", "30", "--l", "0,1"],
        ["transition", "--n1", "3", "--n2", "7"],
        ["sweep", "--n-min", "3", "--n-max", "12", "--pairs", "all-allowed"],
        ["eos", "diff", "--b0", "160", "--b0p", "4.5", "--rho0", "3.58", "--rho1", "3.7", "--rho2", "4.1"],
    ])
    def test_csv_json_identical_numbers(self, argv):
        _, c = run(*argv)
        _, j = run(*argv, "--format", "json")
        rows_c = csv_rows(c)
        rows_j = json.loads(j)["rows"]
        assert len(rows_c) == len(rows_j)
        for rc, rj in zip(rows_c, rows_j):
            for key, value in rj.items():
                if isinstance(value, float):
                    assert float(rc[key]) == value

    def test_meta_only_on_request(self):
        _, plain = run("ionize", "--n", "3", "--format", "json")
        _, meta = run("ionize", "--n", "3", "--format", "json", "--meta")
        assert "meta" not in json.loads(plain)
        assert json.loads(meta)["meta"]["tool"] == "wellpress"
        _, meta_csv = run("ionize", "--n", "3", "--meta")
        assert meta_csv.startswith("# tool: wellpress")


class TestConfig:
    def test_values_and_override(self, tmp_path):
        cfg = tmp_path / "wp.cfg"
        cfg.write_text("# solver settings\ntol = 1e-30\n")
        assert run("levels", "--n", "3", "--config", str(cfg))[0] == 2
        assert run("levels", "--n", "3", "--config", str(cfg), "--tol", "1e-6")[0] == 0
        cfg.write_text("tol = 1e-6\nhbar = 1.0545718176461565e-34\n")
        assert run("levels", "--n", "3", "--config", str(cfg))[0] == 0
        cfg.write_text("x_max = 3\n")
        assert run("eos", "invert", "--b0", "1", "--b0p", "3.5", "--p", "0.5", "--config", str(cfg))[0] == 0
        assert run("eos", "invert", "--b0", "1", "--b0p", "3.5", "--p", "0.5", "--config", str(cfg),
                   "--x-max", "10")[0] == 5

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "wp.cfg"
        cfg.write_text("colour = blue\n")
        assert run("levels", "--n", "3", "--config", str(cfg))[0] == 2
        cfg.write_text("tol = small\n")
        assert run("levels", "--n", "3", "--config", str(cfg))[0] == 2
        assert run("levels", "--n", "3", "--config", str(tmp_path / "missing"))[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wellpress", "transition", "--n1", "4", "--n2", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 3
    assert proc.stdout == ""
