"""Characteristic numbers on product manifolds and Floer-grading divisibility.

Manifolds are products of spheres, circles and a K3 surface.  Each factor
contributes one generator ``u<i>`` (its fundamental dual, square zero) to a
truncated integral cohomology ring; the orientation class is the product of
the generators in factor order.  Only the K3 factor has nonzero ``p_1``,
namely ``48 u``.  Poincaré duals of coordinate sub-products are products of
the complementary generators.

All divisions are done in exact rationals and a non-integral result raises
:class:`IntegralityError`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd
from typing import Mapping, NamedTuple, Sequence

from .graded import CohomologyClass, Generator, RingPresentation, multiply, sq2

__all__ = [
    "CharnumError",
    "IntegralityError",
    "Block",
    "ManifoldModel",
    "BundleData",
    "SuLoopInvariants",
    "integrate",
    "whitney_sum",
    "su_loop_invariants",
    "loop_invariant",
    "generator_bundle",
    "xi_index",
    "xi_from_abc",
    "xi_of_bundle",
    "floer_divisibility",
    "stabilized_divisibility",
    "bundle_from_spec",
    "su_invariants_low",
    "kz3_invariants",
]

K3_P1 = 48
RING_CAP = 64


class CharnumError(ValueError):
    """Malformed model, bundle or formula input."""


class IntegralityError(ArithmeticError):
    """A formula that must give an integer did not."""


def _exact(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise IntegralityError(f"{what} = {x} is not an integer")
    return int(x)


@dataclass(frozen=True)
class Block:
    """One factor: ``S<n>``, ``S1`` or ``K3``."""

    name: str
    dim: int
    p1: int = 0

    @classmethod
    def parse(cls, text: str) -> Block:
        text = text.strip()
        if text == "K3":
            return cls("K3", 4, K3_P1)
        m = re.fullmatch(r"S\^?(\d+)", text)
        if not m or int(m.group(1)) < 1:
            raise CharnumError(f"unknown block {text!r} (expected S<n>, S1 or K3)")
        n = int(m.group(1))
        return cls(f"S{n}", n)


@dataclass(frozen=True, eq=False)
class ManifoldModel:
    blocks: tuple[Block, ...]
    ring: RingPresentation
    mod2: RingPresentation

    @classmethod
    def of(cls, blocks: Sequence[Block | str]) -> ManifoldModel:
        bs = tuple(b if isinstance(b, Block) else Block.parse(b) for b in blocks)
        if not bs:
            raise CharnumError("a model needs at least one block")
        if len(bs) > 9:
            raise CharnumError("at most 9 blocks are supported")
        gens = tuple(Generator(f"u{i + 1}", b.dim, "exterior") for i, b in enumerate(bs))
        ring = RingPresentation("+".join(b.name for b in bs), 0, gens, RING_CAP)
        mod2 = RingPresentation(ring.name + "/Z2", 2, gens, RING_CAP,
                                sq2={g.label: "0" for g in gens})
        return cls(bs, ring, mod2)

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    def generator(self, i: int, mod2: bool = False) -> CohomologyClass:
        """Fundamental dual of factor ``i`` (0-based)."""
        return (self.mod2 if mod2 else self.ring).gen(f"u{i + 1}")

    def top(self) -> CohomologyClass:
        out = self.ring.one()
        for i in range(len(self.blocks)):
            out = out * self.generator(i)
        return out

    def pd(self, point_factors: Sequence[int]) -> CohomologyClass:
        """Poincaré dual of the sub-product that is a point in ``point_factors``, everything else whole."""
        out = self.ring.one()
        for i in sorted(set(point_factors)):
            out = out * self.generator(i)
        return out

    def p1(self) -> CohomologyClass:
        total = self.ring.zero(4)
        for i, b in enumerate(self.blocks):
            if b.p1:
                total = total + b.p1 * self.generator(i)
        return total

    def cls(self, text: str, degree: int | None = None) -> CohomologyClass:
        return self.ring.parse(text, degree)


def integrate(x: CohomologyClass, model: ManifoldModel) -> int:
    """Pair ``x`` with the fundamental class."""
    if x.ring is model.mod2:
        if x.degree != model.dim and not x.is_zero():
            raise CharnumError(f"cannot integrate a degree-{x.degree} class over a {model.dim}-manifold")
        return x.terms.get((1,) * len(model.blocks), 0) % 2
    if x.ring is not model.ring:
        raise CharnumError("class does not live on this model")
    if x.is_zero():
        return 0
    if x.degree != model.dim:
        raise CharnumError(f"cannot integrate a degree-{x.degree} class over a {model.dim}-manifold")
    return x.terms.get((1,) * len(model.blocks), 0)


@dataclass(frozen=True)
class BundleData:
    """Chern classes ``c_1 .. c_rank`` of an ``SU(r)`` or ``U(m)`` bundle on ``model``."""

    model: ManifoldModel
    group: str
    rank: int
    chern: Mapping[int, CohomologyClass] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.group not in ("SU", "U"):
            raise CharnumError(f"structure group must be SU or U, got {self.group!r}")
        if self.rank < 0:
            raise CharnumError("negative rank")
        clean = {}
        for i, c in self.chern.items():
            if c.ring is not self.model.ring:
                raise CharnumError(f"c{i} does not live on the model")
            if not c.is_zero() and c.degree != 2 * i:
                raise CharnumError(f"c{i} has degree {c.degree}, expected {2 * i}")
            if i > self.rank and not c.is_zero():
                raise CharnumError(f"c{i} must vanish on a rank-{self.rank} bundle")
            if not c.is_zero():
                clean[i] = c
        if self.group == "SU" and 1 in clean:
            raise CharnumError("an SU bundle has c1 = 0")
        object.__setattr__(self, "chern", clean)

    def c(self, i: int) -> CohomologyClass:
        if i == 0:
            return self.model.ring.one()
        return self.chern.get(i, self.model.ring.zero(2 * i))

    @classmethod
    def from_strings(cls, model: ManifoldModel, group: str, rank: int,
                     classes: Mapping[int, str]) -> BundleData:
        return cls(model, group, rank, {i: model.cls(t, 2 * i) for i, t in classes.items()})

    @classmethod
    def trivial(cls, model: ManifoldModel, rank: int = 0, group: str = "SU") -> BundleData:
        return cls(model, group, rank)


def bundle_from_spec(spec: Mapping) -> tuple[ManifoldModel, BundleData]:
    """Model and bundle from a mapping like a ``.bundle`` file.

    Keys: ``blocks`` (list of block names), ``group``, ``rank`` and a list
    ``summand`` of tables with a ``rank`` and Chern classes ``c2 = "u1"``
    etc.  Summands are added by the Whitney formula and padded with a
    trivial bundle up to ``rank``.
    """
    try:
        model = ManifoldModel.of(list(spec["blocks"]))
        group = str(spec.get("group", "SU"))
        rank = int(spec["rank"])
        parts = []
        for sm in spec.get("summand", []):
            classes = {int(k[1:]): str(v) for k, v in sm.items() if re.fullmatch(r"c\d+", k)}
            parts.append(BundleData.from_strings(model, str(sm.get("group", group)), int(sm["rank"]), classes))
    except KeyError as exc:
        raise CharnumError(f"bundle spec is missing {exc}") from None
    used = sum(b.rank for b in parts)
    if used > rank:
        raise CharnumError(f"summands have total rank {used} > {rank}")
    parts.append(BundleData.trivial(model, rank - used, group))
    total = whitney_sum(parts)
    return model, BundleData(model, group, rank, total.chern)


def whitney_sum(bundles: Sequence[BundleData]) -> BundleData:
    """Direct sum: total Chern classes multiply, ranks add."""
    if not bundles:
        raise CharnumError("whitney_sum needs at least one bundle")
    model = bundles[0].model
    if any(b.model is not model for b in bundles):
        raise CharnumError("bundles live on different models")
    rank = sum(b.rank for b in bundles)
    total = {0: model.ring.one()}
    for b in bundles:
        nxt: dict[int, CohomologyClass] = {}
        for i, x in total.items():
            for j in range(b.rank + 1):
                y = b.c(j)
                if x.is_zero() or y.is_zero() or 2 * (i + j) > model.dim:
                    continue
                term = multiply(x, y)
                nxt[i + j] = nxt[i + j] + term if i + j in nxt else term
        total = nxt
    group = "SU" if all(b.group == "SU" for b in bundles) else "U"
    chern = {i: c for i, c in total.items() if i > 0 and not c.is_zero()}
    return BundleData(model, group, rank, chern)


def generator_bundle(i: int, base: ManifoldModel, group_rank: int | None = None) -> BundleData:
    """Bundle pulled back from the clutching bundle of the generator of ``pi_{2i-1}(SU)``.

    ``base`` has dimension ``2i`` (a sphere, or a ``(2i-1)``-sphere times a
    circle mapped by a degree-one collapse); ``c_i`` is ``(i-1)!`` times the
    orientation class and all other Chern classes vanish.
    """
    if not 2 <= i <= 5:
        raise CharnumError(f"generator_bundle needs 2 <= i <= 5, got {i}")
    if base.dim != 2 * i:
        raise CharnumError(f"the base must have dimension {2 * i}, got {base.dim}")
    rank = group_rank if group_rank is not None else i
    return BundleData(base, "SU", rank, {i: factorial(i - 1) * base.top()})


class SuLoopInvariants(NamedTuple):
    a: int
    b: int
    c: int

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def _loop_check(model: ManifoldModel, bundle: BundleData) -> None:
    if bundle.model is not model:
        raise CharnumError("bundle lives on a different model")
    if bundle.group != "SU":
        raise CharnumError("loop invariants need an SU bundle")
    if model.blocks[-1].name != "S1":
        raise CharnumError("the model must end in an S1 factor (X x S1)")


def su_loop_invariants(model: ManifoldModel, bundle: BundleData) -> SuLoopInvariants:
    """``(a, b, c)`` of a bundle on ``X x S1`` with ``X`` a 7-manifold.

    ``a = (c4 - c2^2/2)/6``, ``b = p1 c2 / 48`` and ``c = c2^2 / 2``, all
    integrated over ``X x S1``.
    """
    _loop_check(model, bundle)
    if model.dim != 8:
        raise CharnumError(f"(a,b,c) needs an 8-dimensional X x S1, got dimension {model.dim}")
    c2, c4 = bundle.c(2), bundle.c(4)
    i22 = integrate(multiply(c2, c2), model) if not c2.is_zero() else 0
    i4 = integrate(c4, model) if not c4.is_zero() else 0
    ip = integrate(multiply(model.p1(), c2), model) if not c2.is_zero() else 0
    a = _exact(Fraction(i4, 6) - Fraction(i22, 12), "a")
    b = _exact(Fraction(ip, 48), "b")
    c = _exact(Fraction(i22, 2), "c")
    return SuLoopInvariants(a, b, c)


def loop_invariant(model: ManifoldModel, bundle: BundleData) -> int | SuLoopInvariants:
    """The isomorphism onto ``Z`` or ``Z^3`` for ``X x S1`` of dimension 4, 6 or 8."""
    _loop_check(model, bundle)
    if model.dim == 4:
        c2 = bundle.c(2)
        return integrate(c2, model) if not c2.is_zero() else 0
    if model.dim == 6:
        c3 = bundle.c(3)
        return _exact(Fraction(integrate(c3, model) if not c3.is_zero() else 0, 2), "c3/2")
    if model.dim == 8:
        return su_loop_invariants(model, bundle)
    raise CharnumError(f"no loop invariant in dimension {model.dim - 1}")


def xi_index(r: int, i22: int, i4: int, ip: int) -> int:
    """``((r+6)/6) I2 - (r/3) I4 + (r/12) Ip`` for ``I2 = ∫c2^2``, ``I4 = ∫c4``, ``Ip = ∫p1 c2``."""
    if r < 2:
        raise CharnumError(f"rank must be at least 2, got {r}")
    value = Fraction(r + 6, 6) * i22 - Fraction(r, 3) * i4 + Fraction(r, 12) * ip
    return _exact(value, f"index for r={r}")


def xi_from_abc(r: int, inv: SuLoopInvariants | Sequence[int]) -> int:
    if r < 2:
        raise CharnumError(f"rank must be at least 2, got {r}")
    a, b, c = inv
    return -2 * r * a + 4 * r * b + 2 * c


def xi_of_bundle(r: int, model: ManifoldModel, bundle: BundleData) -> int:
    """The index evaluated directly from the integrals of the bundle."""
    _loop_check(model, bundle)
    c2, c4 = bundle.c(2), bundle.c(4)
    i22 = integrate(multiply(c2, c2), model) if not c2.is_zero() else 0
    i4 = integrate(c4, model) if not c4.is_zero() else 0
    ip = integrate(multiply(model.p1(), c2), model) if not c2.is_zero() else 0
    return xi_index(r, i22, i4, ip)


def floer_divisibility(r: int) -> int:
    """Largest ``k`` with every index value divisible by ``k`` for ``SU(r)``.

    Below rank 4 the class ``c4`` vanishes, so ``c = -6a`` and the index is
    ``-(2r+12)a + 4rb``; otherwise ``-2ra + 4rb + 2c`` has gcd 2.
    """
    if r < 2:
        raise CharnumError(f"rank must be at least 2, got {r}")
    if r < 4:
        return gcd(2 * r + 12, 4 * r)
    return gcd(gcd(2 * r, 4 * r), 2)


def stabilized_divisibility(r_prime: int) -> int:
    """Divisibility after stabilizing a rank-2 or rank-3 bundle to ``SU(r')``; ``c4`` stays zero."""
    if r_prime < 4:
        raise CharnumError(f"stabilization target must have rank at least 4, got {r_prime}")
    return gcd(2 * r_prime + 12, 4 * r_prime)


def _need(classes: Mapping[str, CohomologyClass], name: str, degree: int) -> CohomologyClass:
    if name not in classes:
        raise CharnumError(f"missing pulled-back class {name}")
    x = classes[name]
    if not x.is_zero() and x.degree != degree:
        raise CharnumError(f"{name} must have degree {degree}, got {x.degree}")
    return x


def _int(x: CohomologyClass, model: ManifoldModel) -> int:
    return 0 if x.is_zero() else integrate(x, model)


def su_invariants_low(model: ManifoldModel, classes: Mapping[str, CohomologyClass]) -> int | tuple[int, int]:
    """Reduced spin bordism of SU in degrees 3, 5, 7, 8 as integers.

    ``classes`` holds the pullbacks of ``b2, b3, b4`` (degrees 3, 5, 7).
    """
    n = model.dim
    if n == 3:
        return _int(_need(classes, "b2", 3), model)
    if n == 5:
        return _exact(Fraction(_int(_need(classes, "b3", 5), model), 2), "b3/2")
    if n == 7:
        b4 = _need(classes, "b4", 7)
        b2 = _need(classes, "b2", 3)
        ip = 0 if b2.is_zero() else _int(multiply(model.p1(), b2), model)
        return (_int(b4, model), _exact(Fraction(ip, 24), "p1 b2 / 24"))
    if n == 8:
        b2, b3 = _need(classes, "b2", 3), _need(classes, "b3", 5)
        return 0 if b2.is_zero() or b3.is_zero() else _int(multiply(b2, b3), model)
    raise CharnumError(f"no formula in dimension {n}")


def kz3_invariants(model: ManifoldModel, classes: Mapping[str, CohomologyClass]) -> int:
    """Reduced spin bordism of K(Z,3) in degrees 3, 7 (integers) and 8 (mod 2).

    ``classes["d3"]`` is the pulled-back integral class; degree 8 uses its
    reduction ``d3 Sq^2(d3)`` in the model's mod-2 ring.
    """
    n = model.dim
    d3 = _need(classes, "d3", 3)
    if n == 3:
        return _int(d3, model)
    if n == 7:
        ip = 0 if d3.is_zero() else _int(multiply(model.p1(), d3), model)
        return _exact(Fraction(ip, 8), "p1 d3 / 8")
    if n == 8:
        bar = CohomologyClass(model.mod2, 3, d3.terms) if not d3.is_zero() else model.mod2.zero(3)
        if bar.is_zero():
            return 0
        return integrate(multiply(bar, sq2(bar)), model)
    raise CharnumError(f"no formula in dimension {n}")
