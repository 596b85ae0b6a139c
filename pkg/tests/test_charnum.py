"""Characteristic numbers, the index formula and Floer divisibility."""

from functools import reduce
from math import gcd

import pytest
import tomlkit
from hypothesis import given
from hypothesis import strategies as st

from bordcalc.charnum import (
    BundleData,
    CharnumError,
    IntegralityError,
    ManifoldModel,
    bundle_from_spec,
    floer_divisibility,
    generator_bundle,
    integrate,
    kz3_invariants,
    loop_invariant,
    stabilized_divisibility,
    su_invariants_low,
    su_loop_invariants,
    whitney_sum,
    xi_from_abc,
    xi_index,
    xi_of_bundle,
)


@pytest.mark.parametrize("i,blocks,expected", [
    (2, ["S3", "S1"], 1),
    (3, ["S5", "S1"], 1),
    (4, ["S7", "S1"], (1, 0, 0)),
])
def test_generators_map_to_one(i, blocks, expected):
    model = ManifoldModel.of(blocks)
    assert loop_invariant(model, generator_bundle(i, model)) == expected


def test_k3_and_s4_bundles():
    k3 = ManifoldModel.of(["K3", "S3", "S1"])
    b = BundleData.from_strings(k3, "SU", 2, {2: "u2*u3"})
    assert su_loop_invariants(k3, b) == (0, 1, 0)
    s4 = ManifoldModel.of(["S4", "S3", "S1"])
    e1 = BundleData.from_strings(s4, "SU", 2, {2: "u1"})
    e2 = BundleData.from_strings(s4, "SU", 2, {2: "u2*u3"})
    assert su_loop_invariants(s4, whitney_sum([e1, e2])) == (0, 0, 1)


@pytest.mark.parametrize("name,abc", [("s4s3s1", (0, 0, 1)), ("k3s3s1", (0, 1, 0)), ("trivial", (0, 0, 0))])
def test_bundle_fixtures(fixtures, name, abc):
    spec = tomlkit.parse((fixtures / f"{name}.bundle").read_text()).unwrap()
    model, bundle = bundle_from_spec(spec)
    assert su_loop_invariants(model, bundle) == abc


def test_bundle_spec_errors():
    with pytest.raises(CharnumError):
        bundle_from_spec({"blocks": ["S4", "S3", "S1"]})
    with pytest.raises(CharnumError):
        bundle_from_spec({"blocks": ["S4", "S3", "S1"], "rank": 2,
                          "summand": [{"rank": 2, "c2": "u1"}, {"rank": 2, "c2": "u1"}]})
    with pytest.raises(CharnumError):
        ManifoldModel.of(["T2"])


def test_p1_of_k3():
    model = ManifoldModel.of(["K3"])
    assert integrate(model.p1(), model) == 48


@given(st.integers(2, 10), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_index_identity(r, a, b, c):
    value = xi_index(r, 2 * c, 6 * a + c, 48 * b)
    assert value == xi_from_abc(r, (a, b, c)) == -2 * r * a + 4 * r * b + 2 * c
    assert value % 2 == 0


def test_index_of_bundle_matches_abc():
    model, bundle = bundle_from_spec({"blocks": ["K3", "S3", "S1"], "rank": 2,
                                      "summand": [{"rank": 2, "c2": "u2*u3"}]})
    for r in range(2, 8):
        assert xi_of_bundle(r, model, bundle) == xi_from_abc(r, su_loop_invariants(model, bundle))


def test_integrality_is_checked():
    with pytest.raises(IntegralityError):
        xi_index(5, 1, 0, 0)
    model = ManifoldModel.of(["S4", "S3", "S1"])
    # c2^2 = 2 u1 u2 u3 forces a = -1/6
    bad = BundleData.from_strings(model, "SU", 2, {2: "u1 + u2*u3"})
    with pytest.raises(IntegralityError):
        su_loop_invariants(model, bad)


def _random_bundle(model, draw_coeffs):
    u = [model.generator(i) for i in range(4)]
    c1 = model.ring.zero(2)
    for k, g in zip(draw_coeffs[:4], u):
        c1 = c1 + k * g
    c2 = model.ring.zero(4)
    for (i, j), k in zip([(0, 1), (0, 2), (1, 3), (2, 3)], draw_coeffs[4:]):
        c2 = c2 + k * (u[i] * u[j])
    return BundleData(model, "U", 2, {1: c1, 2: c2})


coeffs = st.lists(st.integers(-3, 3), min_size=8, max_size=8)


@given(coeffs, coeffs, coeffs)
def test_whitney_sum_is_associative_and_commutative(x, y, z):
    model = ManifoldModel.of(["S2", "S2", "S2", "S2"])
    a, b, c = (_random_bundle(model, v) for v in (x, y, z))
    left = whitney_sum([whitney_sum([a, b]), c])
    right = whitney_sum([a, whitney_sum([b, c])])
    assert left.chern == right.chern and left.rank == right.rank == 6
    assert whitney_sum([a, b]).chern == whitney_sum([b, a]).chern


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_integrate_is_linear(s, t):
    model = ManifoldModel.of(["S4", "S3", "S1"])
    x, y = model.cls("u1*u2*u3", 8), model.cls("u1*u2*u3", 8)
    assert integrate(s * x + t * y, model) == s + t


def floer_oracle(r):
    """gcd of the index over a box of realizable (a, b, c); below rank 4, c = -6a."""
    values = []
    for a in range(-3, 4):
        for b in range(-3, 4):
            cs = [-6 * a] if r < 4 else range(-3, 4)
            values.extend(xi_from_abc(r, (a, b, c)) for c in cs)
    return reduce(gcd, values, 0)


@pytest.mark.parametrize("r", range(2, 13))
def test_floer_divisibility(r):
    assert floer_divisibility(r) == floer_oracle(r)


def test_floer_values():
    assert [floer_divisibility(r) for r in range(2, 13)] == [8, 6] + [2] * 9
    assert stabilized_divisibility(6) == stabilized_divisibility(18) == 24
    with pytest.raises(CharnumError):
        stabilized_divisibility(3)


def test_low_degree_formulas():
    m3 = ManifoldModel.of(["S3"])
    assert su_invariants_low(m3, {"b2": m3.cls("u1", 3)}) == 1
    m5 = ManifoldModel.of(["S5"])
    assert su_invariants_low(m5, {"b3": m5.cls("2*u1", 5)}) == 1
    with pytest.raises(IntegralityError):
        su_invariants_low(m5, {"b3": m5.cls("u1", 5)})
    k3 = ManifoldModel.of(["K3", "S3"])
    assert kz3_invariants(k3, {"d3": k3.cls("u2", 3)}) == 6
