import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bordcalc.ahss import load_space
from bordcalc.graded import CohomologyClass, Generator, RingError, RingPresentation, dual_sq2, multiply, pair, sq1, sq2


def exterior_ring(modulus=0, cap=12):
    gens = (Generator("x", 1), Generator("y", 3), Generator("z", 2, "polynomial"), Generator("w", 5))
    return RingPresentation("toy", modulus, gens, cap)


def classes_of(ring, degrees=range(0, 7)):
    out = []
    for d in degrees:
        for m in ring.basis(d):
            out.append(CohomologyClass(ring, d, {m: 1}))
    return out


def test_exterior_square_vanishes():
    r = exterior_ring()
    x, y = r.gen("x"), r.gen("y")
    assert (x * x).is_zero() and (y * y).is_zero()
    assert not (r.gen("z") ** 3).is_zero()


def test_graded_commutativity():
    r = exterior_ring()
    cs = classes_of(r, range(1, 6))
    for a, b in itertools.product(cs, repeat=2):
        if a.degree + b.degree > r.cap:
            continue
        sign = -1 if a.degree * b.degree % 2 else 1
        assert a * b == sign * (b * a)


@given(st.lists(st.sampled_from(["x", "y", "z", "w"]), min_size=3, max_size=3))
def test_associativity(labels):
    r = exterior_ring()
    a, b, c = (r.gen(s) for s in labels)
    if a.degree + b.degree + c.degree > r.cap:
        return
    assert (a * b) * c == a * (b * c)


def test_cap_is_enforced():
    r = exterior_ring(cap=6)
    with pytest.raises(RingError):
        r.gen("w") * r.gen("y")


def test_parse_and_print_round_trip():
    r = exterior_ring()
    c = r.parse("x*y + 2*z^2", 4)
    assert c == r.gen("x") * r.gen("y") + 2 * r.gen("z") ** 2
    assert r.parse(str(c), 4) == c


@pytest.mark.parametrize("name", ["su", "bsu", "kz3", "kz4"])
def test_fixture_sq1_squares_to_zero(fixtures, name):
    space = load_space(fixtures / f"{name}.space")
    ring = space.ring
    for d in range(1, ring.cap - 1):
        for m in ring.basis(d):
            x = CohomologyClass(ring, d, {m: 1})
            assert sq1(sq1(x)).is_zero()


@pytest.mark.parametrize("name", ["su", "bsu", "kz4"])
def test_fixture_cartan_formula(fixtures, name):
    """``Sq^2(ab) = Sq^2 a b + Sq^1 a Sq^1 b + a Sq^2 b`` for every split of a monomial."""
    ring = load_space(fixtures / f"{name}.space").ring
    gens = [ring.gen(g.label) for g in ring.generators]
    for a, b in itertools.combinations_with_replacement(gens, 2):
        d = a.degree + b.degree
        if d + 2 > ring.cap:
            continue
        lhs = sq2(multiply(a, b))
        rhs = ring.zero(d + 2)
        for left, right in ((sq2(a), b), (sq1(a), sq1(b)), (a, sq2(b))):
            if not left.is_zero() and not right.is_zero():
                rhs = rhs + multiply(left, right)
        assert lhs == rhs


def test_wu_formula_on_bsu(fixtures):
    # Sq^2 c2 = c3 (mod 2): the Wu formula for Chern classes
    ring = load_space(fixtures / "bsu.space").ring
    assert sq2(ring.gen("c2")) == ring.gen("c3")


def test_dual_sq2_on_su(fixtures):
    space = load_space(fixtures / "su.space")
    f = dual_sq2(space.pairing, 5)
    assert f.matrix.to_rows() == [[1]]
    assert pair(space.ring.gen("b3"), "beta3bar", space.pairing) == 1


def test_kz3_pairing_is_not_the_identity(fixtures):
    space = load_space(fixtures / "kz3.space")
    ring = space.ring
    d3cube = ring.parse("d3^3", 9)
    assert pair(d3cube, "delta3cubebar", space.pairing) == 1
    assert pair(d3cube, "delta9pbar", space.pairing) == 0
