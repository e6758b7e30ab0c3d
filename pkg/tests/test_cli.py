import json

import pytest
from click.testing import CliRunner

from superw.cli import main


@pytest.fixture()
def run():
    r = CliRunner()
    return lambda *args: r.invoke(main, list(args))


def test_compute_one(run):
    res = run("compute", "1")
    assert res.exit_code == 0 and res.output.strip() == "1"


def test_bracket_closed_form(run):
    res = run("bracket", "Lambda(J[fb], J[fb])", "--algebra", "osp12")
    assert res.exit_code == 0
    assert res.output.strip() == "-2*J[Fb]"


def test_miura_display(run):
    res = run("miura", "omega(Fb)", "--algebra", "osp12")
    assert res.exit_code == 0
    assert res.output.strip() == "(1/2*k^2 + 5/4*k + 3/4)*d(J[Hb]) + (1/4*k + 3/8)*:J[Hb] DJ[Hb]:"


def test_finite_operations(run):
    assert run("compute", "ad(eb, x*x)").output.strip() == "1/4 - x"
    assert run("compute", "ad(eb, F)").output.strip() == "-fb"
    # chi(ebar) = -1 and the ideal is generated by n + chi(n), so ebar acts as 1
    assert run("compute", "reduce(Fb*eb)").output.strip() == "Fb"


def test_d0_and_zhu(run):
    assert run("compute", "d0(omega(Fb))").output.strip() == "0"
    assert run("compute", "Q(J[Fb])").exit_code == 0


def test_output_is_deterministic(run):
    a = run("compute", "miura(omega(ftb))", "--algebra", "sl21").output
    b = run("compute", "miura(omega(ftb))", "--algebra", "sl21").output
    assert a == b and a.strip()


def test_usage_errors_exit_2(run):
    assert run("compute", "J[zz]").exit_code == 2
    assert run("compute", "NO(J[Hb])").exit_code == 2
    assert run("verify-paper", "--algebra", "nope").exit_code == 2
    assert run("verify-paper", "--sample-k", "1,x").exit_code == 2
    assert run("verify-paper", "--sample-k", "-3/2").exit_code == 2
    assert run("verify-paper", "--cutoff", "0").exit_code == 2


def test_corrupt_fails_at_axioms(run):
    res = run("verify-paper", "--algebra", "osp12", "--corrupt", "jacobi", "--json")
    assert res.exit_code == 1
    data = json.loads(res.output)
    assert [c["id"] for c in data["criteria"]] == [1]
    assert data["criteria"][0]["status"] == "FAIL"


def test_verify_selected_criteria_json(run):
    res = run("verify-paper", "--algebra", "sl21", "--criterion", "5", "--criterion", "6", "--json")
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["schema"] == "superw.verify/1" and data["ok"]


def test_spec_file_roundtrip(run, tmp_path):
    p = tmp_path / "sl21.json"
    p.write_text(run("dump-spec", "--algebra", "sl21").output)
    res = run("verify-paper", "--spec-file", str(p), "--criterion", "1", "--criterion", "2")
    assert res.exit_code == 0, res.output
