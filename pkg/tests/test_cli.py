import json
import subprocess
import sys
from pathlib import Path

import pytest

from omegaring import ReductionCertificate, verify_certificate
from omegaring.cli import main, run

INPUTS = Path(__file__).parent / "golden" / "inputs"


def ok_json(argv):
    status, text = run(argv + ["--json"])
    assert status == 0, text
    doc = json.loads(text)
    assert doc["status"] == "ok"
    return doc["result"]


class TestTextMode:
    def test_norm(self):
        assert run(["norm", "--ring", "gauss", "1+2i"]) == (0, "norm(1+2i) = 5")
        assert run(["norm", "--ring", "polyfp:5", "x^3+1"]) == (0, "norm(x^3+1) = 8")

    def test_chain(self):
        status, text = run(["chain", "12", "8"])
        assert status == 0
        assert text.splitlines() == ["1: 12 = (8)*(1) + 4", "2: 8 = (4)*(2) + 0", "norm(r_2) = 0 < norm(b) = 8"]

    def test_gcd(self):
        assert run(["gcd", "--ring", "gauss", "5", "1+2i"]) == (0, "gcd = 1+2i")
        assert run(["gcd", "6", "10", "15"]) == (0, "gcd = 1")

    def test_series(self):
        status, text = run(["series", "--ring", "laurent:int:id:4", "inv", "1 + x"])
        assert (status, text) == (0, "1 - x + x^2 - x^3 + O(x^4)")

    def test_matreduce(self):
        status, text = run(["matreduce", str(INPUTS / "z2x2.csv")])
        assert status == 0
        assert text.splitlines()[0] == "D = diag(2, 4)"
        assert text.splitlines()[-1].startswith("verified: shape")


class TestJson:
    def test_chain_policy_and_stop(self):
        res = ok_json(["chain", "7", "2", "--policy", "perturbed", "--stop", "accept"])
        assert res["steps"][0] == {"q": "4", "r": "-1"}
        assert res["stages"] == 1 and res["accepted"]

    def test_common_flags_before_command(self):
        assert ok_json(["--ring", "gauss", "norm", "3+4i"])["norm"] == 25

    def test_prec_override(self):
        res = ok_json(["series", "--ring", "laurent:int:id:16", "--prec", "3", "inv", "1 - x"])
        assert res["inverse"]["text"] == "1 + x + x^2 + O(x^3)"

    def test_series_divisions(self):
        ring = ["--ring", "laurent:gauss:conj:8"]
        right = ok_json(["series", *ring, "divr", "(1+i)x^2", "x"])
        left = ok_json(["series", *ring, "divl", "(1+i)x^2", "x"])
        assert right["exact"] and right["quotient"]["text"].startswith("(1-i)*x")
        assert left["exact"] and left["quotient"]["text"].startswith("(1+i)*x")

    def test_lift(self):
        res = ok_json(["series", "--ring", "laurent:int:id:8", "lift", "7 + x", "-2 + x^2", "--policy", "perturbed"])
        assert res["stages"] == 2 and res["verified"] and res["accepted"]

    def test_matreduce_writes_certificate(self, tmp_path):
        out = tmp_path / "cert.json"
        res = ok_json(["matreduce", "--ring", "polyfp:5", str(INPUTS / "f5.csv"), "-o", str(out)])
        cert = ReductionCertificate.from_json(json.loads(out.read_text()))
        assert verify_certificate(cert)
        assert res["diagonal"] == json.loads(out.read_text())["diagonal"]
        assert res["output"] == str(out)

    def test_matreduce_stdin(self, monkeypatch):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO("4,6\n6,9\n"))
        res = ok_json(["matreduce", "-"])
        assert res["diagonal"] == ["1", "0"] and res["rank"] == 1


class TestErrors:
    @pytest.mark.parametrize(
        "argv, status, code",
        [
            (["chain", "3", "0"], 3, "division-by-zero"),
            (["gcd", "0", "0"], 1, "algebra"),
            (["norm", "--ring", "polyfp:4", "x"], 2, "parse"),
            (["norm", "--ring", "gauss", "2j"], 2, "parse"),
            (["chain", "--ring", "gauss", "3", "2", "--policy", "floor"], 2, "parse"),
            (["series", "--ring", "laurent:int:id:8", "inv", "2 + x"], 1, "algebra"),
            (["series", "--ring", "int", "inv", "1"], 2, "parse"),
            (["series", "--ring", "laurent:int:id:8", "mul", "x"], 2, "parse"),
            (["matreduce", "/nonexistent/matrix.csv"], 4, "io"),
            (["chain", "3", "2", "--max-stages", "0"], 2, "parse"),
        ],
    )
    def test_exit_codes(self, argv, status, code):
        got, text = run(argv + ["--json"])
        doc = json.loads(text)
        assert got == status
        assert doc["status"] == "error" and doc["code"] == code and doc["message"]

    def test_text_error(self):
        status, text = run(["chain", "3", "0"])
        assert status == 3 and text == "error (division-by-zero): division by zero"

    def test_main_routes_errors_to_stderr(self, capsys):
        assert main(["chain", "3", "0"]) == 3
        captured = capsys.readouterr()
        assert captured.out == "" and "division by zero" in captured.err

    def test_usage_error(self):
        with pytest.raises(SystemExit) as info:
            run(["frobnicate"])
        assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "omegaring", "gcd", "12", "8", "--json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["result"]["gcd"] == "4"
