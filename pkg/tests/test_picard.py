"""Picard groupoid algebra: forms, the Alt/Skew/Hom sequence, functors and torsors.

``ses_check`` is compared with a brute-force enumeration of bilinear
generator tables on small groups, and with the closed-form orders on every
pair of groups of order at most 16.
"""

import itertools
from math import gcd, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bordcalc.abelian import FGAbelianGroup, GroupMorphism, IntMatrix
from bordcalc.picard import (
    GradedTorsor,
    PicardData,
    PicardError,
    QuadraticMap,
    SkewForm,
    check_quadratic,
    coherence_report,
    delta_star,
    functor_exists,
    hexagon_holds,
    involution_holds,
    is_linear_quadratic,
    is_quadratic,
    picard_from_bordism,
    plain_torsor_data,
    ses_check,
    super_torsor_data,
    torsor_symmetry,
    torsor_tensor,
)

Z2 = FGAbelianGroup.cyclic(2)


def groups_up_to(n):
    """Every finite abelian group of order at most ``n``, as invariant factors."""
    out = set()

    def chains(order, top):
        # invariant factor lists d_1 | d_2 | ... with the last one dividing ``top``
        if order == 1:
            yield []
            return
        for d in range(2, order + 1):
            if order % d == 0 and top % d == 0:
                for rest in chains(order // d, d):
                    yield rest + [d]

    for order in range(1, n + 1):
        for c in chains(order, order):
            out.add(FGAbelianGroup.from_orders(c))
    return sorted(out, key=lambda g: (g.order, g.orders))


def test_group_count():
    # 1,1,1,2,1,1,1,3,2,1,1,2,1,1,1,5 groups of orders 1..16
    assert len(groups_up_to(16)) == 25


def torsion_elements(g, d):
    """Elements of ``g`` killed by every nonzero entry of ``d``."""
    ds = [x for x in d if x]
    return [x for x in g.elements() if all(not any(g.reduce([k * a for a in x])) for k in ds)]


def brute_force_ses(pi0, pi1):
    n = pi0.ngens
    d = pi0.orders
    zero = tuple(0 for _ in pi1.orders)
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    choices = [torsion_elements(pi1, [d[i], d[j]]) for i, j in cells]
    skew = alt = 0
    images = set()
    for values in itertools.product(*choices):
        table = dict(zip(cells, values))
        ok = True
        for (i, j), v in table.items():
            if i == j and any(pi1.reduce([2 * a for a in v])):
                ok = False
        if not ok:
            continue
        skew += 1
        diag = tuple(table[i, i] for i in range(n))
        images.add(diag)
        if all(v == zero for v in diag):
            alt += 1
    hom = prod(len(torsion_elements(pi1, [gcd(2, di)])) for di in d)
    return alt, skew, hom, len(images) == hom


small_groups = [g for g in groups_up_to(8) if not g.is_zero]


@pytest.mark.parametrize("pi0", small_groups, ids=str)
@pytest.mark.parametrize("pi1", small_groups, ids=str)
def test_ses_against_enumeration(pi0, pi1):
    alt, skew, hom, onto = brute_force_ses(pi0, pi1)
    res = ses_check(pi0, pi1)
    assert (res.alt, res.skew, res.hom) == (alt, skew, hom)
    assert res.exact == (onto and skew == alt * hom)


def closed_form(pi0, pi1):
    def torsion(d):
        return prod(gcd(d, m) for m in pi1.orders)
    d = pi0.orders
    alt = prod(torsion(gcd(d[i], d[j])) for i in range(len(d)) for j in range(i + 1, len(d)))
    hom = prod(torsion(gcd(2, di)) for di in d)
    return alt, alt * hom, hom


def test_ses_exact_up_to_order_16():
    groups = groups_up_to(16)
    for pi0, pi1 in itertools.product(groups, repeat=2):
        res = ses_check(pi0, pi1)
        assert res.exact, (pi0, pi1)
        assert (res.alt, res.skew, res.hom) == closed_form(pi0, pi1)


def test_ses_examples():
    assert tuple(ses_check(Z2, Z2)) == (1, 2, 2, True)
    assert tuple(ses_check(FGAbelianGroup.cyclic(3), Z2)) == (1, 1, 1, True)
    with pytest.raises(PicardError):
        ses_check(FGAbelianGroup(1), Z2)


# -- quadratic maps ---------------------------------------------------------------

def test_square_is_quadratic_not_linear():
    z = FGAbelianGroup(1)
    q = QuadraticMap.from_function(z, z, lambda x: (x[0] ** 2,))
    assert is_quadratic(q) and not is_linear_quadratic(q)
    assert check_quadratic(q).sampled


def test_bilinear_alone_is_not_enough():
    # b_q = 0 is bilinear, yet q(2x) = 2 q(x) != 4 q(x)
    z = FGAbelianGroup(1)
    q = QuadraticMap.from_function(z, z, lambda x: (x[0],))
    result = check_quadratic(q)
    assert not result.ok and result.witness[0] == "homogeneity"


def test_exhaustive_on_small_domains():
    z4 = FGAbelianGroup.cyclic(4)
    q = QuadraticMap.from_function(Z2, z4, lambda x: (x[0] ** 2,))
    result = check_quadratic(q)
    assert result.ok and not result.sampled
    assert not is_linear_quadratic(q)


@st.composite
def skew_forms(draw):
    pi0 = FGAbelianGroup.from_orders(draw(st.lists(st.sampled_from([2, 3, 4]), min_size=1, max_size=2)))
    pi1 = FGAbelianGroup.from_orders(draw(st.lists(st.sampled_from([2, 4]), min_size=1, max_size=2)))
    n, d = pi0.ngens, pi0.orders
    table = [[None] * n for _ in range(n)]
    for i in range(n):
        diag = [x for x in torsion_elements(pi1, [d[i]]) if not any(pi1.reduce([2 * a for a in x]))]
        table[i][i] = draw(st.sampled_from(diag))
        for j in range(i + 1, n):
            v = draw(st.sampled_from(torsion_elements(pi1, [d[i], d[j]])))
            table[i][j] = v
            table[j][i] = pi1.reduce([-a for a in v])
    return SkewForm(pi0, pi1, tuple(tuple(r) for r in table))


@given(skew_forms())
def test_diagonal_of_skew_form_is_linear_quadratic(form):
    assert form.is_skew
    q = delta_star(form)
    assert is_linear_quadratic(q)
    for x in form.domain.elements():
        assert q(x) == form(x, x)


def test_delta_star_rejects_non_skew():
    z4 = FGAbelianGroup.cyclic(4)
    with pytest.raises(PicardError):
        delta_star(SkewForm(z4, z4, (((1,),),)))


# -- Picard data and functors -----------------------------------------------------

@st.composite
def picard_data(draw):
    pi0 = FGAbelianGroup.from_orders(draw(st.lists(st.sampled_from([0, 2, 4, 6]), min_size=1, max_size=2)))
    pi1 = FGAbelianGroup.from_orders(draw(st.lists(st.sampled_from([2, 4, 8]), min_size=1, max_size=2)))
    two_torsion = torsion_elements(pi1, [2])
    values = [draw(st.sampled_from(two_torsion)) for _ in range(pi0.ngens)]
    return PicardData.with_symmetry(pi0, pi1, values)


def identity(g):
    return GroupMorphism(g, g, IntMatrix.identity(g.ngens))


@given(picard_data())
def test_identity_is_symmetric_monoidal(p):
    assert functor_exists(p, p, identity(p.pi0), identity(p.pi1))


def test_forgetful_functor_is_rejected():
    sup, plain = super_torsor_data(), plain_torsor_data()
    assert not functor_exists(sup, plain, identity(Z2), identity(Z2))
    assert not functor_exists(plain, sup, identity(Z2), identity(Z2))
    # killing pi1 makes any q compatible
    zero = GroupMorphism(Z2, Z2, IntMatrix.zeros(1, 1))
    assert functor_exists(sup, plain, identity(Z2), zero)


def test_nonlinear_symmetry_is_rejected():
    z4 = FGAbelianGroup.cyclic(4)
    with pytest.raises(PicardError):
        PicardData.with_symmetry(Z2, z4, [(1,)])


def test_picard_from_bordism():
    p = picard_from_bordism(0)
    assert str(p.pi0) == "Z" and str(p.pi1) == "Z/2" and p.q is None
    with pytest.raises(PicardError):
        functor_exists(p, p, identity(p.pi0), identity(p.pi1))
    with pytest.raises(PicardError):
        picard_from_bordism(3, group="SU(2)")
    assert str(super_torsor_data()) == "(Z/2, Z/2, q=[1])"


# -- torsors ----------------------------------------------------------------------

def test_torsor_basics():
    t = GradedTorsor(("a", "b"), 1)
    assert t.action_is_free_transitive()
    with pytest.raises(PicardError):
        GradedTorsor(("a", "a"))
    tu = torsor_tensor(t, GradedTorsor(("c", "d"), 1))
    assert tu.grade == 0 and len(tu.points) == 2


def test_koszul_sign_only_for_odd_pairs():
    even, odd, odd2 = GradedTorsor(("a", "b"), 0), GradedTorsor(("c", "d"), 1), GradedTorsor(("e", "f"), 1)
    # on odd (x) odd the symmetry differs from the plain swap by the nontrivial element
    swap = torsor_symmetry(odd, odd2)
    assert swap["(c,e)"] == "(e,d)"
    assert torsor_symmetry(even, odd)["(a,c)"] == "(c,a)"


def test_coherence_over_all_grades():
    report = coherence_report()
    assert len(report) == 8
    assert all(inv and hexagon for inv, hexagon in report.values())


@given(st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1)))
def test_hexagon_and_involution(grades):
    x, y, z = (GradedTorsor(p, g) for p, g in zip((("p", "q"), ("r", "s"), ("t", "u")), grades))
    assert hexagon_holds(x, y, z)
    assert involution_holds(x, y)
