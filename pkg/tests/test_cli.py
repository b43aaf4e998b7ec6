from __future__ import annotations

import io
import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from lcfn.cli import main, to_jsonable
from lcfn.series import builtin, dump_coeff_file


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def value(doc):
    return complex(doc["value"]["re"], doc["value"]["im"])


class TestVerbs:
    def test_special(self):
        code, out, _ = run("special", "--fn", "beta", "--n", "1")
        assert code == 0
        assert json.loads(out)["value"] == "-1/12"

    def test_lc_hurwitz(self):
        code, out, _ = run("lc", "--fn", "beta_a", "--a", "1/2", "--z", "2,0")
        doc = json.loads(out)
        assert code == 0
        assert abs(value(doc) - math.pi**2 / 2) < 1e-10
        assert doc["method"] == "series"

    def test_lc_negative_argument(self):
        code, out, _ = run("lc", "--fn", "beta", "--z", "-1,0")
        assert code == 0
        assert abs(value(json.loads(out)) + 1 / 12) < 1e-10
        assert json.loads(out)["method"] == "contour"

    def test_coeffs_csv(self):
        code, out, _ = run("coeffs", "--fn", "beta", "--order", "3", "--format", "csv")
        assert code == 0
        assert out.splitlines() == ["n,c,p", "0,1/1,1/1", "1,-1/2,0/1", "2,1/6,0/1", "3,0/1,0/1"]

    def test_order_env(self, monkeypatch):
        monkeypatch.setenv("LCFN_DEFAULT_ORDER", "5")
        _, out, _ = run("coeffs", "--fn", "exp_c", "--c", "1/3")
        assert json.loads(out)["order"] == 5

    def test_bad_order_env(self, monkeypatch):
        monkeypatch.setenv("LCFN_DEFAULT_ORDER", "many")
        assert run("coeffs", "--fn", "beta")[0] == 1

    def test_poly(self):
        _, out, _ = run("poly", "--fn", "beta", "--n", "2", "--x", "1/2")
        doc = json.loads(out)
        assert doc["c_poly"] == ["1/6", "-1/1", "1/1"]
        assert doc["c_value"] == "-1/12"
        assert doc["p_value"] == "1/4"

    def test_power(self):
        _, out, _ = run("power", "--fn", "beta_a", "--a", "1/3", "--s", "4", "--z", "-0.5,0")
        assert abs(value(json.loads(out)) - (4 - 2 / 3) ** -0.5) < 1e-13

    def test_table(self):
        code, out, _ = run("table", "--fn", "beta", "--grid", "-2:3:6", "--format", "csv")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "z_re,z_im,re,im,method,error_estimate"
        assert len(lines) == 7
        assert lines[4].endswith("error,")
        assert "np." not in out

    def test_table_json_roundtrip(self):
        _, out, _ = run("table", "--fn", "beta", "--grid", "2:4:3")
        rows = json.loads(out)["rows"]
        assert [r["method"] for r in rows] == ["series"] * 3
        assert abs(complex(rows[0]["value"]["re"], rows[0]["value"]["im"]) - math.pi**2 / 6) < 1e-12

    def test_file_function(self, tmp_path):
        path = tmp_path / "f.json"
        dump_coeff_file(builtin("beta_a", 24, a=Fraction(1, 2)), path)
        _, out, _ = run("special", "--fn", "file", "--file", str(path), "--n", "0")
        assert json.loads(out)["value"] == "0/1"

    def test_verify_exact(self):
        code, out, _ = run("verify", "--suite", "hurwitz-reduction")
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_deterministic(self):
        a = run("verify", "--suite", "lc-formula", "--format", "csv")
        b = run("verify", "--suite", "lc-formula", "--format", "csv")
        assert a == b


class TestErrors:
    def test_pole_exit_2(self):
        code, _, err = run("lc", "--fn", "beta", "--z", "1,0")
        doc = json.loads(err)
        assert code == 2
        assert doc["error"] == "PoleError"
        assert doc["residue"] == "1/1"

    @pytest.mark.parametrize(
        "argv",
        [
            ("lc", "--fn", "beta"),
            ("frobnicate", "--fn", "beta"),
            ("lc", "--fn", "beta", "--z", "a,b"),
            ("lc", "--fn", "beta", "--z", "nan"),
            ("special",),
            ("verify", "--suite", "appell-exact"),
            ("coeffs", "--fn", "file"),
            ("coeffs", "--fn", "beta", "--file", "x.json"),
        ],
    )
    def test_usage_exit_1(self, argv):
        code, out, err = run(*argv)
        assert code == 1
        assert out == ""
        assert json.loads(err)["error"] == "usage"

    def test_domain_exit_2(self):
        code, _, err = run("power", "--fn", "beta", "--s", "-1", "--z", "2")
        assert code == 2
        assert json.loads(err)["error"] == "DomainError"

    def test_tolerance_exit_3(self):
        # |s| barely above r_f = 2/3: the binomial series needs far more P-numbers than are stored
        code, _, err = run("power", "--fn", "beta_a", "--a", "1/3", "--s", "0.7,0", "--z", "-0.5")
        assert code == 3
        assert json.loads(err)["error"] == "ToleranceError"

    def test_bad_beta_a(self):
        code, _, err = run("coeffs", "--fn", "beta_a", "--a", "2")
        assert code == 2


class TestSerialisation:
    def test_rational(self):
        assert to_jsonable(Fraction(-1, 12)) == "-1/12"

    def test_complex(self):
        assert to_jsonable(1 + 2j) == {"re": 1.0, "im": 2.0}

    def test_unknown(self):
        with pytest.raises(TypeError):
            to_jsonable(object())


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lcfn", "special", "--fn", "beta", "--n", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == "1/120"
