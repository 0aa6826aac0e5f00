import json
import re
import subprocess
import sys
from fractions import Fraction

import pytest

from fractheta import MalformedRange
from fractheta.cli import parse_h_list, run

SCI6 = re.compile(r"-?\d\.\d{5}e[+-]\d\d")
SCI17 = re.compile(r"-?\d\.\d{16}e[+-]\d\d")


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParseH:
    def test_power_chain(self):
        assert parse_h_list("1/4..1/64") == [Fraction(1, 4), Fraction(1, 8), Fraction(1, 16), Fraction(1, 32), Fraction(1, 64)]

    def test_single_doubling(self):
        assert parse_h_list("1/3..1/6") == [Fraction(1, 3), Fraction(1, 6)]

    def test_not_power_of_two(self):
        with pytest.raises(MalformedRange):
            parse_h_list("1/4..1/10")

    def test_comma_list(self):
        assert parse_h_list("0.5, 1/4") == [Fraction(1, 2), Fraction(1, 4)]

    @pytest.mark.parametrize("text", ["1/4,1/2", "abc", "0,1/2", "1/8..1/4", ""])
    def test_rejects(self, text):
        with pytest.raises(MalformedRange):
            parse_h_list(text)


class TestCommands:
    def test_weights_identity(self, capsys):
        code, out, _ = _run(capsys, "weights", "--family", "bt", "--alpha", "0", "--theta", "0", "--n", "4")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "j,omega"
        parsed = [(int(a), float(b)) for a, b in (line.split(",") for line in lines[1:])]
        assert parsed == [(0, 1.0), (1, 0.0), (2, 0.0), (3, 0.0), (4, 0.0)]
        assert all(SCI17.fullmatch(line.split(",")[1]) for line in lines[1:])

    def test_table_layout(self, capsys):
        code, out, _ = _run(
            capsys, "table", "--example", "caputo", "--family", "bt",
            "--alphas", "0.1,0.5,0.9", "--thetas", "-1,0,0.2,0.45", "--h", "1/4..1/64",
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "alpha,theta,h,error,rate"
        assert len(lines) == 1 + 3 * 4 * 5
        first = lines[1].split(",")
        assert first[:3] == ["0.1", "-1", "1/4"] and first[4] == ""
        for line in lines[1:]:
            cells = line.split(",")
            assert SCI6.fullmatch(cells[3])
            assert cells[4] == "" or SCI6.fullmatch(cells[4])
        row = next(line for line in lines if line.startswith("0.5,0.45,1/64,"))
        assert float(row.split(",")[3]) == pytest.approx(2.278e-4, rel=0.01)

    def test_bagley_table(self, capsys):
        code, out, _ = _run(
            capsys, "table", "--example", "bagley", "--family", "bn",
            "--theta1", "1", "--theta2", "0.7", "--mu", "1.1", "--h", "1/64..1/128",
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "alpha,theta1,theta2,h,error,rate"
        assert float(lines[-1].split(",")[4]) == pytest.approx(1.948e-3, rel=0.02)

    def test_region_negative_intercept(self, capsys):
        code, out, err = _run(
            capsys, "region", "--family", "bn", "--alpha", "0.6667", "--theta", "0.9", "--samples", "4096"
        )
        assert code == 0
        assert "advisory" in err
        lines = out.splitlines()
        assert lines[0] == "phi,re_z,im_z"
        assert len(lines) == 1 + 4096 + 1
        re_z = [float(line.split(",")[1]) for line in lines[1:]]
        assert min(re_z) < 0

    def test_check_stability(self, capsys):
        code, out, _ = _run(capsys, "check-stability", "--family", "bn", "--alpha", "2/3", "--theta", "0.9",
                            "--vartheta", "1.5707963267948966")
        assert code == 0
        header, row = out.splitlines()
        assert header == "family,alpha,theta,vartheta,verdict,phi,real_intercept"
        assert row.split(",")[4] == "violation"
        code, out, _ = _run(capsys, "check-stability", "--family", "bt", "--alpha", "0.5", "--theta", "0.2")
        assert out.splitlines()[1].split(",")[4] == "stable-evidence"

    def test_corrections(self, capsys):
        code, out, _ = _run(capsys, "corrections", "--family", "bt", "--alpha", "-1.5", "--theta", "0",
                            "--mu", "1.1", "--n", "8")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,j,omega_nj" and len(lines) == 1 + 9 * 3
        assert "-0.0" not in lines[1]

    def test_solve_caputo(self, capsys):
        code, out, _ = _run(capsys, "solve", "--example", "caputo", "--family", "bn", "--alpha", "0.5",
                            "--theta", "1", "--h", "1/8")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,x,u_num,u_exact,abs_err" and len(lines) == 10
        assert max(float(line.split(",")[4]) for line in lines[1:]) == pytest.approx(6.786e-2, rel=0.01)

    def test_solve_abel_complex(self, capsys):
        code, out, _ = _run(capsys, "solve", "--example", "abel", "--alpha", "0.5", "--theta", "0",
                            "--lambda", "-1,0.5", "--n", "8", "--L", "4")
        assert code == 0
        assert out.splitlines()[0] == "n,x,u_num,u_num_imag,u_exact,abs_err"

    def test_json(self, capsys):
        code, out, _ = _run(capsys, "weights", "--alpha", "1", "--theta", "0", "--n", "2", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["columns"] == ["j", "omega"]
        assert doc["metadata"]["scheme"]["family"] == "BT"
        assert float(doc["rows"][1]["omega"]) == pytest.approx(8 / 9, rel=1e-15)

    def test_byte_identical_repeat(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            code = run(["table", "--example", "caputo", "--family", "bn", "--alphas", "0.5",
                        "--thetas", "-0.5,1", "--h", "1/4..1/16", "--out", str(p)])
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert capsys.readouterr().out == ""


class TestExitCodes:
    def test_invalid_theta(self, capsys):
        code, _, err = _run(capsys, "weights", "--family", "bt", "--alpha", "-2", "--theta", "0.5", "--n", "3")
        assert code == 2 and "theta" in err

    def test_malformed_range(self, capsys):
        code, _, _ = _run(capsys, "table", "--alphas", "0.5", "--thetas", "0", "--h", "1/4..1/10")
        assert code == 2

    def test_degenerate(self, capsys):
        code, _, _ = _run(capsys, "weights", "--family", "bn", "--alpha", "1", "--theta", "1", "--n", "3")
        assert code == 2

    def test_usage_error(self, capsys):
        code, _, err = _run(capsys, "weights", "--format", "xml")
        assert code == 2 and "usage" in err

    def test_numerical_failure(self, capsys):
        # lambda = 1/omega_0 with h = 1 makes the first implicit step singular
        lam = repr(1 / (2 / 3) ** 0.5)
        code, _, err = _run(capsys, "solve", "--example", "abel", "--alpha", "0.5", "--theta", "0",
                            "--lambda", lam, "--h", "1", "--L", "4")
        assert code == 3 and "numerical failure" in err

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "fractheta", "--version"], capture_output=True, text=True)
        assert proc.returncode == 0 and proc.stdout.strip()
