"""Command-line examples, exit codes and determinism."""

import pytest

from bordcalc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ss_su(capsys, fixtures):
    code, out, _ = run(capsys, "ss", str(fixtures / "su.space"), "--coeff", "spin",
                       "--hints", str(fixtures / "su.hints"), "--upto", "8")
    assert code == 0
    assert out.splitlines()[-1] == "n=7: Z^2"


def test_ss_kz3(capsys, fixtures):
    code, out, _ = run(capsys, "ss", str(fixtures / "kz3.space"), "--coeff", "spin",
                       "--hints", str(fixtures / "kz3.hints"), "--upto", "8")
    assert code == 0
    assert "n=8: Z/2" in out.splitlines()


def test_ss_parametric_exits_2(capsys, fixtures):
    code, out, _ = run(capsys, "ss", str(fixtures / "bsu.space"), "--hints", str(fixtures / "bsu2.hints"))
    assert code == 2
    assert "n=8: (Z)/k" in out.splitlines()


def test_ss_missing_file(capsys):
    code, _, err = run(capsys, "ss", "missing.space")
    assert code == 1 and "not found" in err


def test_ss_is_byte_identical(capsys, fixtures):
    argv = ("ss", str(fixtures / "su.space"), "--hints", str(fixtures / "su.hints"), "--format", "kv")
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first


@pytest.mark.parametrize("argv,expected", [
    (("floer", "2"), "8"),
    (("floer", "3"), "6"),
    (("floer", "9"), "2"),
    (("floer", "3", "--stabilize", "6"), "24"),
])
def test_floer(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip() == expected


def test_floer_errors(capsys):
    assert run(capsys, "floer", "1")[0] == 1
    assert run(capsys, "floer", "5", "--stabilize", "4")[0] == 1


def test_xi_and_abc(capsys, fixtures):
    code, out, _ = run(capsys, "xi", str(fixtures / "s4s3s1.bundle"), "--r", "4")
    assert code == 0 and out.strip() == "(0,0,1)  Xi=2"
    code, out, _ = run(capsys, "xi", str(fixtures / "trivial.bundle"))
    assert out.strip() == "(0,0,0)  Xi=0"
    code, out, _ = run(capsys, "abc", str(fixtures / "k3s3s1.bundle"))
    assert out.strip() == "(0,1,0)"


def test_abc_inline_spec(capsys):
    code, out, _ = run(capsys, "abc", "--blocks", "S4,S3,S1", "--rank", "4",
                       "--summand", "rank=2;c2=u1", "--summand", "rank=2;c2=u2*u3")
    assert code == 0 and out.strip() == "(0,0,1)"


def test_non_integral_exits_3(capsys):
    code, _, err = run(capsys, "abc", "--blocks", "S4,S3,S1", "--rank", "2",
                       "--summand", "rank=2;c2=u1 + u2*u3")
    assert code == 3 and "integrality" in err


@pytest.mark.parametrize("expr,n,expected", [
    ("Sp(2)", "7", "COUNTEREXAMPLE: X = Sp(2) ×_{Sp(1)×Sp(1)} Sp(1), P = X x G (factor Sp(2))"),
    ("SU(5) x E8", "8", "ORIENTABLE-ALL"),
    ("SO(10)/K", "7", "ORIENTABLE-ALL [simply-connected]"),
])
def test_orientable(capsys, expr, n, expected):
    code, out, _ = run(capsys, "orientable", expr, "--n", n)
    assert code == 0 and out.strip() == expected


def test_orientable_parse_error(capsys):
    code, _, err = run(capsys, "orientable", "SU()", "--n", "7")
    assert code == 1 and "offset 3" in err


def test_picard_queries(capsys):
    code, out, _ = run(capsys, "picard", "ses_check", "Z2", "Z2")
    assert code == 0 and out.splitlines()[0] == "|Alt|=1 |Skew|=2 exact=true"
    assert run(capsys, "picard", "functor", "forgetful")[1].splitlines()[-1] == "NOT SYMMETRIC-MONOIDAL"
    assert run(capsys, "picard", "functor", "identity")[1].splitlines()[-1] == "OK"
    out = run(capsys, "picard", "functor", "--src", "Z2;Z2;1", "--dst", "Z2;Z2;0", "--f1", "0")[1]
    assert out.splitlines()[-1] == "OK"
    out = run(capsys, "picard", "torsors")[1].splitlines()
    assert len(out) == 9 and out[-1] == "OK"
    out = run(capsys, "picard", "quadratic", "Z2", "Z2", "--values", "1")[1]
    assert out.strip() == "quadratic=true linear=true sampled=false"


def test_picard_malformed(capsys):
    assert run(capsys, "picard", "ses_check", "Z2", "Q")[0] == 1
    assert run(capsys, "picard", "ses_check", "Z", "Z2")[0] == 1
    assert run(capsys, "picard", "functor", "nonsense")[0] == 1
