"""Algebra behind the classification of Picard groupoids.

A Picard groupoid is determined up to equivalence by ``(pi0, pi1, q)`` with
``q: pi0 -> pi1`` a linear quadratic map.  This module checks the relevant
properties of forms between finitely generated abelian groups, tests the
functor-existence criterion ``q' f0 = f1 q``, and models super Z/2-torsors
concretely so that the sign rule of their symmetry can be verified on
elements rather than asserted.

Group elements are coordinate tuples in the generators of an
:class:`~bordcalc.abelian.FGAbelianGroup`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .abelian import FGAbelianGroup, GroupMorphism, IntMatrix, Subquotient, kernel_basis

__all__ = [
    "PicardError",
    "QuadraticMap",
    "FormCheck",
    "check_quadratic",
    "is_quadratic",
    "is_linear_quadratic",
    "SkewForm",
    "delta_star",
    "SesResult",
    "ses_check",
    "PicardData",
    "functor_exists",
    "super_torsor_data",
    "plain_torsor_data",
    "GradedTorsor",
    "torsor_tensor",
    "torsor_symmetry",
    "associator",
    "hexagon_holds",
    "coherence_report",
    "picard_from_bordism",
]

Vec = tuple[int, ...]

#: ``ses_check`` refuses groups larger than this.
SES_ORDER_LIMIT = 2**12
#: finite domains up to this size are checked on every triple
EXHAUSTIVE_LIMIT = 32


class PicardError(ValueError):
    pass


def _add(g: FGAbelianGroup, *vs: Sequence[int]) -> Vec:
    return g.reduce([sum(c) for c in zip(*vs)])


def _scale(g: FGAbelianGroup, k: int, v: Sequence[int]) -> Vec:
    return g.reduce([k * x for x in v])


def _zero(g: FGAbelianGroup) -> Vec:
    return (0,) * g.ngens


def _basis(g: FGAbelianGroup, i: int) -> Vec:
    return tuple(int(j == i) for j in range(g.ngens))


# -- quadratic maps -----------------------------------------------------------

@dataclass(frozen=True)
class QuadraticMap:
    """A map ``pi0 -> pi1`` given by its generator values and cross terms.

    ``values[i]`` is ``q(e_i)`` and ``cross[(i, j)]`` for ``i < j`` is
    ``b_q(e_i, e_j)``; then ``q(sum x_i e_i) = sum x_i^2 q(e_i) + sum_{i<j}
    x_i x_j b_q(e_i, e_j)``.  A map built from an arbitrary function keeps
    the function so that the checks below test it rather than the formula.
    """

    domain: FGAbelianGroup
    codomain: FGAbelianGroup
    values: tuple[Vec, ...]
    cross: Mapping[tuple[int, int], Vec] = field(default_factory=dict)
    fn: Callable[[Vec], Sequence[int]] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.values) != self.domain.ngens:
            raise PicardError(f"{len(self.values)} generator values for {self.domain.ngens} generators")
        object.__setattr__(self, "values", tuple(self.codomain.reduce(v) for v in self.values))
        object.__setattr__(self, "cross", {k: self.codomain.reduce(v) for k, v in self.cross.items()
                                           if any(self.codomain.reduce(v))})

    @classmethod
    def from_function(cls, domain: FGAbelianGroup, codomain: FGAbelianGroup,
                      fn: Callable[[Vec], Sequence[int]]) -> QuadraticMap:
        values = tuple(codomain.reduce(fn(_basis(domain, i))) for i in range(domain.ngens))
        cross = {}
        for i, j in itertools.combinations(range(domain.ngens), 2):
            e_ij = domain.reduce([a + b for a, b in zip(_basis(domain, i), _basis(domain, j))])
            both = codomain.reduce(fn(e_ij))
            cross[(i, j)] = _add(codomain, both, _scale(codomain, -1, values[i]), _scale(codomain, -1, values[j]))
        return cls(domain, codomain, values, cross, fn)

    @classmethod
    def linear(cls, domain: FGAbelianGroup, codomain: FGAbelianGroup,
               values: Sequence[Sequence[int]]) -> QuadraticMap:
        return cls(domain, codomain, tuple(tuple(v) for v in values))

    @classmethod
    def zero(cls, domain: FGAbelianGroup, codomain: FGAbelianGroup) -> QuadraticMap:
        return cls(domain, codomain, (_zero(codomain),) * domain.ngens)

    def __call__(self, x: Sequence[int]) -> Vec:
        x = self.domain.reduce(x)
        if self.fn is not None:
            return self.codomain.reduce(self.fn(x))
        total = [0] * self.codomain.ngens
        for i, xi in enumerate(x):
            for k, c in enumerate(self.values[i]):
                total[k] += xi * xi * c
        for (i, j), v in self.cross.items():
            for k, c in enumerate(v):
                total[k] += x[i] * x[j] * c
        return self.codomain.reduce(total)

    def bilinear(self, x: Sequence[int], y: Sequence[int]) -> Vec:
        """``b_q(x, y) = q(x+y) - q(x) - q(y)``."""
        c = self.codomain
        s = self.domain.reduce([a + b for a, b in zip(x, y)])
        return _add(c, self(s), _scale(c, -1, self(x)), _scale(c, -1, self(y)))


class FormCheck(NamedTuple):
    ok: bool
    sampled: bool
    witness: tuple | None = None


def _sample(g: FGAbelianGroup, bound: int, count: int) -> list[Vec]:
    """Generator words with free coefficients in ``[-bound, bound]``."""
    ranges = [range(-bound, bound + 1) if o == 0 else range(o) for o in g.orders]
    box = prod(len(r) for r in ranges)
    if box <= count:
        return [tuple(v) for v in itertools.product(*ranges)]
    rng = random.Random(0)
    return [tuple(rng.choice(r) for r in ranges) for _ in range(count)]


def _domain_points(q: QuadraticMap, bound: int) -> tuple[list[Vec], bool]:
    g = q.domain
    if g.is_finite and g.order <= EXHAUSTIVE_LIMIT:
        return list(g.elements()), False
    return _sample(g, bound, 24), True


def check_quadratic(q: QuadraticMap, linear: bool = False, bound: int = 3) -> FormCheck:
    """Test that ``b_q`` is bilinear and ``q(lx) = l^2 q(x)``; with ``linear`` also additivity.

    Exhaustive when the domain is finite and small, otherwise on a fixed
    sample of generator words, in which case ``sampled`` is set.
    """
    pts, sampled = _domain_points(q, bound)
    c = q.codomain
    for x in pts:
        for lam in range(-3, 4):
            if q(_scale(q.domain, lam, x)) != _scale(c, lam * lam, q(x)):
                return FormCheck(False, sampled, ("homogeneity", x, lam))
        for y in pts:
            if linear and q.bilinear(x, y) != _zero(c):
                return FormCheck(False, sampled, ("additivity", x, y))
            for z in pts:
                s = q.domain.reduce([a + b for a, b in zip(x, y)])
                if q.bilinear(s, z) != _add(c, q.bilinear(x, z), q.bilinear(y, z)):
                    return FormCheck(False, sampled, ("bilinearity", x, y, z))
    return FormCheck(True, sampled)


def is_quadratic(q: QuadraticMap) -> bool:
    return check_quadratic(q).ok


def is_linear_quadratic(q: QuadraticMap) -> bool:
    return check_quadratic(q, linear=True).ok


# -- bilinear forms -----------------------------------------------------------

@dataclass(frozen=True)
class SkewForm:
    """Bilinear form ``pi0 x pi0 -> pi1`` given on pairs of generators."""

    domain: FGAbelianGroup
    codomain: FGAbelianGroup
    table: tuple[tuple[Vec, ...], ...]

    def __post_init__(self) -> None:
        n, c = self.domain.ngens, self.codomain
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise PicardError(f"form table must be {n}x{n}")
        table = tuple(tuple(c.reduce(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", table)
        orders = self.domain.orders
        for i, j in itertools.product(range(n), repeat=2):
            for d in {orders[i], orders[j]} - {0}:
                if any(_scale(c, d, table[i][j])):
                    raise PicardError(f"form value on generators ({i},{j}) is not killed by {d}")

    @classmethod
    def from_function(cls, domain: FGAbelianGroup, codomain: FGAbelianGroup,
                      fn: Callable[[Vec, Vec], Sequence[int]]) -> SkewForm:
        n = domain.ngens
        return cls(domain, codomain, tuple(
            tuple(tuple(fn(_basis(domain, i), _basis(domain, j))) for j in range(n)) for i in range(n)
        ))

    def __call__(self, x: Sequence[int], y: Sequence[int]) -> Vec:
        c = self.codomain
        total = [0] * c.ngens
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                for k, v in enumerate(self.table[i][j]):
                    total[k] += xi * yj * v
        return c.reduce(total)

    @property
    def is_skew(self) -> bool:
        n, c = self.domain.ngens, self.codomain
        return all(not any(_add(c, self.table[i][j], self.table[j][i]))
                   for i in range(n) for j in range(i, n))

    @property
    def is_alternating(self) -> bool:
        # a(x, x) = sum x_i^2 a(e_i, e_i) + sum_{i<j} x_i x_j (a_ij + a_ji)
        return self.is_skew and all(not any(self.table[i][i]) for i in range(self.domain.ngens))


def delta_star(form: SkewForm) -> QuadraticMap:
    """The diagonal ``q(x) = form(x, x)`` of a skew form; it is linear quadratic."""
    if not form.is_skew:
        raise PicardError("delta_star needs a skew-symmetric form")
    n = form.domain.ngens
    q = QuadraticMap(form.domain, form.codomain, tuple(form.table[i][i] for i in range(n)))
    if not is_linear_quadratic(q):
        raise AssertionError("diagonal of a skew form failed to be linear quadratic")
    return q


# -- the sequence Alt -> Skew -> Hom(pi0/2pi0, pi1) ---------------------------

class SesResult(NamedTuple):
    alt: int
    skew: int
    hom: int
    exact: bool

    def __str__(self) -> str:
        return f"|Alt|={self.alt} |Skew|={self.skew} |Hom|={self.hom} exact={str(self.exact).lower()}"


def _preimage(basis: IntMatrix, f: IntMatrix, target: IntMatrix) -> IntMatrix:
    """Columns spanning ``{basis t : f basis t in span(target)}``."""
    a = basis.cols
    if f.rows == 0:
        return basis
    big = (f @ basis).hstack(target)
    ker = kernel_basis(big)
    coeffs = IntMatrix.from_columns([c[:a] for c in ker.columns()], a) if ker.cols else IntMatrix.zeros(a, 0)
    return basis @ coeffs


def _quotient_order(lattice: IntMatrix, rel: IntMatrix) -> int:
    return Subquotient.build(lattice.hstack(rel), rel).group.order


def _contained(small: IntMatrix, big: IntMatrix) -> bool:
    sq = Subquotient.build(big, IntMatrix.zeros(big.rows, 0))
    return all(sq.contains(c) for c in small.columns())


def ses_check(pi0: FGAbelianGroup, pi1: FGAbelianGroup) -> SesResult:
    """Orders of ``Alt``, ``Skew`` and ``Hom(pi0/2pi0, pi1)`` and exactness of the sequence.

    ``Alt`` is computed as the kernel of the diagonal map on ``Skew``;
    exactness then amounts to the diagonal landing in ``Hom(pi0/2pi0, pi1)``
    and hitting all of it, which is checked by comparing orders.

    Bilinear forms are points of the lattice of generator tables ``a_ijk``
    (the ``k``-th coordinate of ``a(e_i, e_j)``); skewness, alternation and
    the diagonal map are linear conditions on that lattice, so each group is
    a subquotient computed by Smith normal form.
    """
    for g in (pi0, pi1):
        if not g.is_finite:
            raise PicardError(f"ses_check needs finite groups, got {g}")
        if g.order > SES_ORDER_LIMIT:
            raise PicardError(f"group of order {g.order} exceeds the limit {SES_ORDER_LIMIT}")
    d, m = pi0.orders, pi1.orders
    n0, n1 = len(d), len(m)
    if n0 == 0 or n1 == 0:
        return SesResult(1, 1, 1, True)
    idx = {(i, j, k): (i * n0 + j) * n1 + k for i in range(n0) for j in range(n0) for k in range(n1)}
    size = len(idx)
    # a_ijk ranges over the elements of Z/m_k killed by d_i and d_j
    steps = [0] * size
    for (i, j, k), pos in idx.items():
        steps[pos] = m[k] // gcd(gcd(d[i], d[j]), m[k])
    bil = IntMatrix.diagonal(steps, size, size)
    rel = IntMatrix.diagonal([m[k] for (_, _, k) in sorted(idx, key=idx.get)], size, size)

    pairs = [(i, j) for i in range(n0) for j in range(i, n0)]
    skew_rows, diag_rows = [], []
    for i, j in pairs:
        for k in range(n1):
            row = [0] * size
            row[idx[i, j, k]] += 1
            row[idx[j, i, k]] += 1
            skew_rows.append(row)
    for i in range(n0):
        for k in range(n1):
            row = [0] * size
            row[idx[i, i, k]] = 1
            diag_rows.append(row)
    skew_f = IntMatrix.from_rows(skew_rows, size)
    diag_f = IntMatrix.from_rows(diag_rows, size)
    skew_target = IntMatrix.diagonal([m[k] for _ in pairs for k in range(n1)])
    diag_target = IntMatrix.diagonal([m[k] for _ in range(n0) for k in range(n1)])

    skew = _preimage(bil, skew_f, skew_target)
    alt = _preimage(skew, diag_f, diag_target)
    skew_order = _quotient_order(skew, rel)
    alt_order = _quotient_order(alt, rel)
    hom_order = prod(gcd(gcd(2, di), mk) for di in d for mk in m)

    # the diagonal map Skew -> (pi1)^n0 lands in Hom(pi0/2pi0, pi1)
    image = diag_f @ skew if skew.cols else IntMatrix.zeros(diag_f.rows, 0)
    hom_lattice = IntMatrix.diagonal([m[k] // gcd(gcd(2, d[i]), m[k]) for i in range(n0) for k in range(n1)])
    image_order = _quotient_order(image, diag_target) if diag_f.rows else 1
    lands_in_hom = _contained(image, hom_lattice.hstack(diag_target)) if diag_f.rows else True
    exact = (
        skew_order == alt_order * hom_order
        and lands_in_hom
        and image_order == hom_order
    )
    return SesResult(alt_order, skew_order, hom_order, exact)


# -- Picard data --------------------------------------------------------------

@dataclass(frozen=True)
class PicardData:
    """``(pi0, pi1, q)``; ``q`` is ``None`` when the symmetry invariant is not known."""

    pi0: FGAbelianGroup
    pi1: FGAbelianGroup
    q: QuadraticMap | None = None
    name: str = ""

    def __post_init__(self) -> None:
        q = self.q
        if q is None:
            return
        if q.domain != self.pi0 or q.codomain != self.pi1:
            raise PicardError("symmetry invariant has the wrong domain or codomain")
        for i, v in enumerate(q.values):
            if any(_scale(self.pi1, 2, v)):
                raise PicardError(f"symmetry invariant is not linear: 2q(e_{i}) != 0")
        if q.cross:
            raise PicardError("symmetry invariant is not linear: nonzero cross terms")

    @classmethod
    def with_symmetry(cls, pi0: FGAbelianGroup, pi1: FGAbelianGroup,
                      values: Sequence[Sequence[int]], name: str = "") -> PicardData:
        return cls(pi0, pi1, QuadraticMap.linear(pi0, pi1, values), name)

    def __str__(self) -> str:
        def vec(v: Vec) -> str:
            return str(v[0]) if len(v) == 1 else "(" + ",".join(map(str, v)) + ")"

        q = "unknown" if self.q is None else "[" + ", ".join(vec(v) for v in self.q.values) + "]"
        return f"({self.pi0}, {self.pi1}, q={q})"


def functor_exists(src: PicardData, dst: PicardData, f0: GroupMorphism, f1: GroupMorphism) -> bool:
    """Whether ``(f0, f1)`` underlies a symmetric monoidal functor: ``q' f0 = f1 q``."""
    if src.q is None or dst.q is None:
        raise PicardError("functor_exists needs the symmetry invariant of both sides")
    if f0.source != src.pi0 or f0.target != dst.pi0:
        raise PicardError("f0 must map pi0 of the source to pi0 of the target")
    if f1.source != src.pi1 or f1.target != dst.pi1:
        raise PicardError("f1 must map pi1 of the source to pi1 of the target")
    # both sides are linear, so generators suffice
    return all(dst.q(f0(_basis(src.pi0, i))) == f1(src.q(_basis(src.pi0, i)))
               for i in range(src.pi0.ngens))


def super_torsor_data() -> PicardData:
    """Super Z/2-torsors: ``pi0 = pi1 = Z/2`` and the Koszul sign gives ``q = id``."""
    z2 = FGAbelianGroup.cyclic(2)
    return PicardData.with_symmetry(z2, z2, [(1,)], "super Z/2-torsors")


def plain_torsor_data() -> PicardData:
    """Graded Z/2-torsors with the unsigned swap, so ``q = 0``."""
    z2 = FGAbelianGroup.cyclic(2)
    return PicardData.with_symmetry(z2, z2, [(0,)], "Z/2-torsors, unsigned symmetry")


def picard_from_bordism(n: int, group: str = "trivial", structure: str = "Spin",
                        fixtures: Mapping[tuple[str, int], FGAbelianGroup] | None = None) -> PicardData:
    """``(Omega_n(BG), Omega_{n+1}(BG), unknown)`` from tabulated bordism groups.

    The trivial group uses the bordism of a point; any other group must be
    supplied in ``fixtures`` keyed by ``(group, degree)``.  The symmetry
    invariant is never derived from bordism data and stays unknown.
    """
    from . import registry

    def lookup(k: int) -> FGAbelianGroup:
        if fixtures and (group, k) in fixtures:
            return fixtures[group, k]
        if group in ("trivial", "1", "{1}"):
            return registry.lookup_point_bordism(structure, k)
        raise PicardError(f"no bordism fixture for B{group} in degree {k}")

    try:
        pi0, pi1 = lookup(n), lookup(n + 1)
    except registry.RegistryError as exc:
        raise PicardError(str(exc)) from None
    return PicardData(pi0.unlabeled(), pi1.unlabeled(), None, f"{structure} bordism of B{group}, degree {n}")


# -- graded torsors -----------------------------------------------------------

Point = str


@dataclass(frozen=True)
class GradedTorsor:
    """Two-point set with the free transitive Z/2-action and a Z/2 grade.

    A tensor product remembers, for each of its points, the orbit of pairs
    it stands for; that is what the associator and naturality checks use.
    """

    points: tuple[Point, Point]
    grade: int = 0
    parts: Mapping[Point, frozenset[tuple[Point, Point]]] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if len(self.points) != 2 or self.points[0] == self.points[1]:
            raise PicardError(f"a Z/2-torsor needs two distinct points, got {self.points}")
        if self.grade not in (0, 1):
            raise PicardError(f"grade must be 0 or 1, got {self.grade}")

    def act(self, g: int, s: Point) -> Point:
        a, b = self.points
        if s not in self.points:
            raise PicardError(f"{s!r} is not a point of {self.points}")
        if g % 2 == 0:
            return s
        return b if s == a else a

    def action_is_free_transitive(self) -> bool:
        table = {(g, s): self.act(g, s) for g in (0, 1) for s in self.points}
        free = all(table[1, s] != s for s in self.points)
        transitive = {table[g, self.points[0]] for g in (0, 1)} == set(self.points)
        return free and transitive


def _orbit(t: GradedTorsor, u: GradedTorsor, s: Point, v: Point) -> frozenset[tuple[Point, Point]]:
    # the antidiagonal action; Z/2 is its own inverse
    return frozenset({(s, v), (t.act(1, s), u.act(1, v))})


def _pair_label(orbit: frozenset[tuple[Point, Point]]) -> Point:
    s, v = min(orbit)
    return f"({s},{v})"


def torsor_tensor(t: GradedTorsor, u: GradedTorsor) -> GradedTorsor:
    """``(t x u)`` modulo the antidiagonal action, grades added."""
    orbits = {_orbit(t, u, s, v) for s in t.points for v in u.points}
    parts = {_pair_label(o): o for o in orbits}
    return GradedTorsor(tuple(sorted(parts)), (t.grade + u.grade) % 2, parts)


def _point_of(tensor: GradedTorsor, s: Point, v: Point) -> Point:
    for label, orbit in tensor.parts.items():
        if (s, v) in orbit:
            return label
    raise PicardError(f"({s},{v}) does not lie in {tensor.points}")


def _induced(source: GradedTorsor, target: GradedTorsor,
             f: Callable[[Point, Point], tuple[Point, Point]]) -> dict[Point, Point]:
    """Map of tensor points induced by a map of pairs; checks it is well defined."""
    out: dict[Point, Point] = {}
    for label, orbit in source.parts.items():
        images = {_point_of(target, *f(s, v)) for s, v in orbit}
        if len(images) != 1:
            raise PicardError(f"map is not well defined on the orbit {sorted(orbit)}")
        out[label] = images.pop()
    return out


def torsor_symmetry(t: GradedTorsor, u: GradedTorsor) -> dict[Point, Point]:
    """``t (x) u -> u (x) t``: the swap followed by the action of ``grade(t) * grade(u)``."""
    tu, ut = torsor_tensor(t, u), torsor_tensor(u, t)
    sign = t.grade * u.grade
    return _induced(tu, ut, lambda s, v: (u.act(sign, v), s))


def _tensor_maps(t: GradedTorsor, u: GradedTorsor, f: Mapping[Point, Point] | None,
                 g: Mapping[Point, Point] | None, t2: GradedTorsor, u2: GradedTorsor) -> dict[Point, Point]:
    f = f or {s: s for s in t.points}
    g = g or {s: s for s in u.points}
    return _induced(torsor_tensor(t, u), torsor_tensor(t2, u2), lambda s, v: (f[s], g[v]))


def associator(x: GradedTorsor, y: GradedTorsor, z: GradedTorsor) -> dict[Point, Point]:
    """``(x (x) y) (x) z -> x (x) (y (x) z)`` on points."""
    xy = torsor_tensor(x, y)
    yz = torsor_tensor(y, z)
    left, right = torsor_tensor(xy, z), torsor_tensor(x, yz)
    out: dict[Point, Point] = {}
    for label, orbit in left.parts.items():
        images = set()
        for a, s3 in orbit:
            for s1, s2 in xy.parts[a]:
                images.add(_point_of(right, s1, _point_of(yz, s2, s3)))
        if len(images) != 1:
            raise PicardError("associator is not well defined")
        out[label] = images.pop()
    return out


def _compose(*maps: Mapping[Point, Point]) -> dict[Point, Point]:
    """Apply ``maps`` left to right."""
    first = maps[0]
    out = {}
    for s in first:
        v = s
        for m in maps:
            v = m[v]
        out[s] = v
    return out


def _invert(m: Mapping[Point, Point]) -> dict[Point, Point]:
    return {v: k for k, v in m.items()}


def hexagon_holds(x: GradedTorsor, y: GradedTorsor, z: GradedTorsor) -> bool:
    """Compare both routes ``(x y) z -> y (z x)`` of the hexagon."""
    xy, yx, yz, zx, xz = (torsor_tensor(*p) for p in ((x, y), (y, x), (y, z), (z, x), (x, z)))
    # alpha, then sigma_{x, yz}, then alpha
    route1 = _compose(
        associator(x, y, z),
        torsor_symmetry(x, yz),
        associator(y, z, x),
    )
    # sigma_{x,y} (x) 1, then alpha, then 1 (x) sigma_{x,z}
    route2 = _compose(
        _tensor_maps(xy, z, torsor_symmetry(x, y), None, yx, z),
        associator(y, x, z),
        _tensor_maps(y, xz, None, torsor_symmetry(x, z), y, zx),
    )
    return route1 == route2


def involution_holds(x: GradedTorsor, y: GradedTorsor) -> bool:
    there = torsor_symmetry(x, y)
    back = torsor_symmetry(y, x)
    return all(back[there[s]] == s for s in there)


def coherence_report(names: Iterable[tuple[Point, Point]] = (("a", "b"), ("c", "d"), ("e", "f"))) -> dict[
        tuple[int, int, int], tuple[bool, bool]]:
    """(involution, hexagon) for every triple of grades on three fixed torsors."""
    p = list(names)
    out = {}
    for grades in itertools.product((0, 1), repeat=3):
        x, y, z = (GradedTorsor(tuple(p[i]), grades[i]) for i in range(3))
        inv = involution_holds(x, y) and involution_holds(y, z) and involution_holds(x, z)
        out[grades] = (inv, hexagon_holds(x, y, z))
    return out
