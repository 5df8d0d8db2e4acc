"""CLI: reports, exit codes, expression round-trips."""

import json

import pytest

from jetcalc import parse_expr, parse_problem
from jetcalc.cli import run

BEAM = """
base 1;
field u;
order 2;
lagrangian 1/2*u[2]^2;
"""

MECH = """
base 1;
field q;
order 1;
param m;
opaque U(2);
lagrangian m/2*q[1]^2 - U(x1,q);
"""

DIV = """
base 1;
field u;
order 2;
lagrangian 0;
fcomponent u*u[1];
"""

MS_GOOD = BEAM + """
section { u = x1; u[1] = 1; p[u;;1] = 0; p[u;1;1] = 0; }
"""

MS_BAD = BEAM + """
section { u = x1; u[1] = 1; p[u;;1] = 0; p[u;1;1] = 7; }
"""


@pytest.fixture
def lagfile(tmp_path):
    def write(text, name="prob.lag"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


class TestCommands:
    def test_el_beam(self, capsys, lagfile):
        code, doc = invoke(capsys, "el", lagfile(BEAM))
        assert code == 0
        assert doc["result"]["euler_lagrange"] == {"u": "u[4]"}
        assert doc["problem"] == {"n": 1, "k": 2, "fields": ["u"]}

    def test_galilei(self, capsys):
        code, doc = invoke(capsys, "galilei")
        assert code == 0
        assert doc["result"]["theta-shift"] == "0"
        assert doc["result"]["omega-invariance"] == "0"

    def test_check_divergence(self, capsys, lagfile):
        code, doc = invoke(capsys, "check-divergence", lagfile(DIV))
        assert code == 0
        assert doc["residuals"] == []

    def test_ms_check_exit_codes(self, capsys, lagfile):
        code, _ = invoke(capsys, "ms-check", lagfile(MS_GOOD))
        assert code == 0
        code, doc = invoke(capsys, "ms-check", lagfile(MS_BAD, "bad.lag"))
        assert code == 1
        assert doc["residuals"]

    def test_parse_error_exit_2(self, capsys, lagfile, caplog):
        code = run(["el", lagfile("base 1; field u; order 2; lagrangian u[5];")])
        assert code == 2

    def test_missing_file_exit_2(self, capsys):
        assert run(["el", "/nonexistent/x.lag"]) == 2

    def test_singular_legendre_exit_2(self, capsys, lagfile):
        path = lagfile("base 1; field u; order 2; lagrangian u[2];")
        assert run(["legendre", path]) == 2

    def test_verify_all(self, capsys):
        code, doc = invoke(capsys, "verify-all", "--seed", "3")
        assert code == 0
        assert doc["result"]["cascade-equivalence"] == "pass"
        assert doc["result"]["seed"] == 3

    def test_energy_defaults_to_last_direction(self, capsys, lagfile):
        path = lagfile("base 1; field q; order 1; lagrangian 1/2*q[1]^2;")
        code, doc = invoke(capsys, "energy", path)
        assert code == 0
        assert doc["result"]["time_direction"] == "1"

    def test_latex_mode(self, capsys, lagfile):
        code, doc = invoke(capsys, "momenta", lagfile(MECH), "--latex")
        assert code == 0
        assert doc["result"]["p[q;0;1]"] == "m\\,q_{(1)}"


class TestRoundTrip:
    @pytest.mark.parametrize("command,source", [
        ("momenta", BEAM), ("momenta", MECH),
        ("el", BEAM), ("el", MECH),
        ("currents", BEAM), ("legendre", MECH),
    ])
    def test_result_strings_reparse(self, capsys, lagfile, command, source):
        path = lagfile(source)
        code, doc = invoke(capsys, command, path)
        assert code == 0
        problem = parse_problem(source).problem

        def walk(value):
            if isinstance(value, dict):
                for v in value.values():
                    walk(v)
            elif "=" not in value and not value.isdigit():
                e = parse_expr(value, problem, max_jet_order=12)
                assert parse_expr(str(e), problem, max_jet_order=12) == e

        walk(doc["result"])


class TestDeterminism:
    def test_verify_all_replays_identically(self, capsys):
        code1, doc1 = invoke(capsys, "verify-all", "--seed", "5")
        code2, doc2 = invoke(capsys, "verify-all", "--seed", "5")
        assert (code1, doc1) == (code2, doc2)
