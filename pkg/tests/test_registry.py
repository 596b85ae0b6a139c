"""Fixture tables, the group-expression parser and the orientability classification."""

import pytest
import tomlkit
from hypothesis import given
from hypothesis import strategies as st

from bordcalc.registry import (
    COUNTEREXAMPLE_7,
    COUNTEREXAMPLE_8,
    ParseError,
    RegistryError,
    classify_orientability,
    complex_type,
    export_toml,
    lookup_e8_homotopy,
    lookup_point_bordism,
    parse,
)


def test_point_bordism_examples():
    g = lookup_point_bordism("Spin", 4)
    assert str(g) == "Z" and g.labels == ("a2",)
    assert str(lookup_point_bordism("Spin", 8)) == "Z^2"
    assert str(lookup_point_bordism("O", 6)) == "Z/2 + Z/2 + Z/2"
    assert str(lookup_point_bordism("BSpin", 1)) == "Z/2"
    with pytest.raises(RegistryError):
        lookup_point_bordism("Spin", 10)
    with pytest.raises(RegistryError):
        lookup_point_bordism("Pin+", 1)


def test_e8_homotopy():
    assert [str(lookup_e8_homotopy(d)) for d in (0, 4, 7)] == ["0", "Z", "0"]
    assert str(lookup_e8_homotopy(3, classifying=False)) == "Z"
    with pytest.raises(RegistryError):
        lookup_e8_homotopy(16)


def test_parse_examples():
    e = parse("SU(5) x E8")
    assert len(e.atoms) == 2 and not e.quotient
    assert parse("Spin(10)/K").quotient
    assert str(parse("SU(5)×E8")) == "SU(5) x E8"


@pytest.mark.parametrize("text,offset", [("SU()", 3), ("SU(5) x", 7), ("Foo(2)", 0), ("SU(0)", 3)])
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset


atom_text = st.one_of(
    st.sampled_from(["E6", "E7", "E8", "F4", "G2"]),
    st.builds(lambda f, k: f"{f}({k})", st.sampled_from(["SU", "U", "Sp", "Spin", "SO"]), st.integers(1, 30)),
)


@given(st.lists(atom_text, min_size=1, max_size=4), st.booleans())
def test_parse_print_round_trip(atoms, quotient):
    text = " x ".join(atoms) + ("/K" if quotient else "")
    assert str(parse(text)) == text
    assert parse(str(parse(text))) == parse(text)


def test_complex_type_examples():
    r = complex_type("SU(3) x U(1)", "SU(4)")
    assert r is not None and r.p == 6
    r = complex_type("G2", "Spin(8)")
    assert r is not None and r.p is None
    assert complex_type("SU(2)", "E8") is None
    assert complex_type("U(1) x E7", "E8") is not None


@pytest.mark.parametrize("m", range(1, 12))
def test_complex_type_families(m):
    assert complex_type(f"Sp({m}) x U(1)", f"Sp({m + 1})").p == 4 * m + 2
    assert complex_type(f"Spin({m}) x U(1)", f"Spin({m + 2})").p == m - 1
    assert complex_type(f"U({m})", f"SU({m + 1})") is not None
    assert complex_type(f"U({m})", f"SU({m + 2})") is None


# -- orientability, against a table written directly from the two lists -----------

def expected_verdict(family, k):
    """(orientable, quotient caveat), or None for atoms that are not groups."""
    if family in ("E6", "E7", "E8", "G2"):
        return True, False
    if family == "F4":
        return False, False
    if family in ("SU", "U"):
        return True, False
    if family == "Sp":
        return k == 1, False
    if family in ("Spin", "SO"):
        if k == 1:
            return None
        caveat = family == "SO" and k != 2
        if k == 3 or k % 2 == 0:
            return True, caveat
        return False, False
    raise AssertionError(family)


@pytest.mark.parametrize("n", [7, 8])
def test_orientability_lists(n):
    for family in ("SU", "U", "Sp", "Spin", "SO"):
        for k in range(1, 21):
            exp = expected_verdict(family, k)
            text = f"{family}({k})"
            if exp is None:
                with pytest.raises(RegistryError):
                    classify_orientability(text, n)
                continue
            v = classify_orientability(text, n)
            assert (v.orientable_all, v.simply_connected_only if v.orientable_all else False) == exp, text
            if not v.orientable_all:
                assert v.manifold == (COUNTEREXAMPLE_7 if n == 7 else COUNTEREXAMPLE_8)
    for family in ("E6", "E7", "E8", "G2", "F4"):
        assert classify_orientability(family, n).orientable_all == expected_verdict(family, None)[0]


def test_orientability_examples():
    v = classify_orientability("Sp(2)", 7)
    assert v.line() == f"COUNTEREXAMPLE: X = {COUNTEREXAMPLE_7}, P = X x G (factor Sp(2))"
    assert classify_orientability("SO(10)/K", 8).line() == "ORIENTABLE-ALL [simply-connected]"
    assert not classify_orientability("SO(9)", 7).orientable_all
    assert classify_orientability("SU(5) x E8", 8).line() == "ORIENTABLE-ALL"
    # one bad factor spoils the product
    assert not classify_orientability("SU(5) x F4", 8).orientable_all
    with pytest.raises(RegistryError):
        classify_orientability("SU(5)", 6)


def test_export_parses():
    doc = tomlkit.parse(export_toml()).unwrap()
    assert doc["point_bordism"]["Spin"][4] == "Z"
    assert len(doc["complex_type"]) == 13
    assert doc["BE8_homotopy"][4] == "Z"
