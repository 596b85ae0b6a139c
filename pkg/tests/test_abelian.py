"""Smith normal form and group arithmetic against independent oracles.

The determinantal-divisor oracle uses sympy for the minors; group orders of
Hom and tensor products are counted by brute force over elements.
"""

import itertools
from functools import reduce
from math import gcd, prod

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from bordcalc.abelian import (
    AbelianError,
    FGAbelianGroup,
    GroupMorphism,
    IntMatrix,
    Subquotient,
    cokernel,
    kernel_basis,
    parse_group,
    smith_normal_form,
    tensor_tor_hom_ext,
    uct_cohomology,
    uct_homology,
)

matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-12, 12), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def determinantal_divisors(rows):
    m = sympy.Matrix(rows)
    out = []
    for k in range(1, min(m.shape) + 1):
        minors = [m.extract(list(r), list(c)).det()
                  for r in itertools.combinations(range(m.rows), k)
                  for c in itertools.combinations(range(m.cols), k)]
        out.append(int(reduce(gcd, (abs(int(x)) for x in minors), 0)))
    return out


def det(m: IntMatrix) -> int:
    return int(sympy.Matrix(m.to_rows()).det())


@given(matrices)
def test_snf_matches_minors(rows):
    a = IntMatrix.from_rows(rows)
    u, d, v = smith_normal_form(a)
    assert (u @ a @ v).to_rows() == d.to_rows()
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [d[i, i] for i in range(min(d.rows, d.cols))]
    assert all(x >= 0 for x in diag)
    assert all(d[i, j] == 0 for i in range(d.rows) for j in range(d.cols) if i != j)
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    for k, dk in enumerate(determinantal_divisors(rows), start=1):
        assert prod(diag[:k]) == dk


@given(matrices)
def test_kernel_basis_is_kernel(rows):
    a = IntMatrix.from_rows(rows)
    k = kernel_basis(a)
    assert (a @ k).is_zero() if k.cols else True
    rank = sympy.Matrix(rows).rank()
    assert k.cols == a.cols - rank


def test_cokernel_examples():
    assert cokernel(IntMatrix.from_rows([[2, 0], [0, 3]])) == FGAbelianGroup(0, (6,))
    assert cokernel(IntMatrix.from_rows([[2], [0]])) == FGAbelianGroup(1, (2,))
    assert cokernel(IntMatrix.zeros(2, 0)) == FGAbelianGroup(2)


@pytest.mark.parametrize("text", ["0", "Z", "Z^3", "Z/2", "Z^2 + Z/2 + Z/4", "Z/3 + Z/3"])
def test_parse_round_trip(text):
    assert str(parse_group(text)) == text


def test_parse_normalizes():
    assert str(parse_group("Z/2 + Z/3")) == "Z/6"
    assert str(parse_group("Z/4 + Z + Z/6")) == "Z + Z/2 + Z/12"


@given(st.lists(st.integers(0, 12), max_size=5))
def test_normal_form_is_invariant_factor_chain(orders):
    g = FGAbelianGroup.from_orders(orders)
    assert g.free_rank == orders.count(0)
    assert g.torsion_order == prod(o for o in orders if o > 1)
    assert all(b % a == 0 for a, b in zip(g.torsion, g.torsion[1:]))


def test_bad_groups_rejected():
    with pytest.raises(AbelianError):
        FGAbelianGroup(0, (2, 3))
    with pytest.raises(AbelianError):
        FGAbelianGroup(0, (1,))


def count_hom(a: int, b: int) -> int:
    return sum(1 for x in range(b) if (a * x) % b == 0)


def count_tensor(a: int, b: int) -> int:
    # Z/a (x) Z/b = (Z/b) / a(Z/b)
    return b // len({(a * x) % b for x in range(b)})


@given(st.integers(2, 12), st.integers(2, 12))
def test_uct_parts_by_counting(a, b):
    parts = tensor_tor_hom_ext(FGAbelianGroup.cyclic(a), b)
    assert parts.hom.order == count_hom(a, b)
    assert parts.tensor.order == count_tensor(a, b)
    # Tor(Z/a, Z/b) is the b-torsion of Z/a
    assert parts.tor.order == sum(1 for x in range(a) if (b * x) % a == 0)
    assert parts.ext.order == parts.tensor.order


def test_uct_integral():
    h = {n: FGAbelianGroup() for n in range(6)}
    h.update({0: FGAbelianGroup(1), 3: FGAbelianGroup(1), 4: FGAbelianGroup(0, (2,))})
    assert uct_cohomology(h, 5, 0) == FGAbelianGroup(0, (2,))
    assert uct_cohomology(h, 4, 0) == FGAbelianGroup()
    assert uct_homology(h, 5, 2) == FGAbelianGroup(0, (2,))


def test_morphism_kernel_image_orders():
    z4, z2 = FGAbelianGroup.cyclic(4), FGAbelianGroup.cyclic(2)
    f = GroupMorphism(z4, z2, IntMatrix.from_rows([[1]]))
    assert f.kernel() == z2 and f.image() == z2 and f.is_surjective()
    with pytest.raises(AbelianError):
        GroupMorphism(z2, z4, IntMatrix.from_rows([[1]]))
    g = GroupMorphism(z2, z4, IntMatrix.from_rows([[2]]))
    assert g.is_injective() and not g.is_surjective()
    assert f.compose(g).is_zero()


@given(st.lists(st.integers(2, 6), min_size=1, max_size=2), st.lists(st.integers(2, 6), min_size=1, max_size=2),
       st.data())
def test_first_isomorphism_theorem(src_orders, tgt_orders, data):
    s, t = FGAbelianGroup.from_orders(src_orders), FGAbelianGroup.from_orders(tgt_orders)
    if s.is_zero or t.is_zero:
        return
    cols = []
    for d in s.orders:
        col = []
        for e in t.orders:
            # a generator of order d may map to multiples of e / gcd(d, e)
            step = e // gcd(d, e)
            col.append(step * data.draw(st.integers(0, gcd(d, e) - 1)))
        cols.append(col)
    f = GroupMorphism(s, t, IntMatrix.from_columns(cols, t.ngens))
    assert f.kernel().order * f.image().order == s.order
    assert f.image().order * f.cokernel().order == t.order
    image = {f(x) for x in s.elements()}
    assert len(image) == f.image().order


def test_subquotient_labels():
    sq = Subquotient.build(IntMatrix.from_rows([[2, 0], [0, 1]]), IntMatrix.from_rows([[4], [0]]), ["x", "y"])
    assert sq.group == FGAbelianGroup(1, (2,))
    assert set(sq.group.labels) == {"y", "2*x"}
