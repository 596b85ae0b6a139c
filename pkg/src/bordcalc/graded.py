"""Truncated graded-commutative rings over Z or Z/2 with Sq^1 and Sq^2.

Monomials are exponent tuples over the generators, which are kept sorted by
label.  Within a degree the basis is the ascending lexicographic order of
those tuples, so ``c4`` comes before ``c2^2`` in degree 8 of BSU.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .abelian import FGAbelianGroup, GroupMorphism, IntMatrix, smith_normal_form

__all__ = [
    "RingError",
    "Generator",
    "RingPresentation",
    "CohomologyClass",
    "PairingBlock",
    "PairingTable",
    "dualize",
    "pair",
]

EXTERIOR = "exterior"
POLYNOMIAL = "polynomial"

Monomial = tuple[int, ...]


class RingError(ValueError):
    """Raised for invalid ring data or out-of-range degrees."""


@dataclass(frozen=True)
class Generator:
    label: str
    degree: int
    kind: str = EXTERIOR

    def __post_init__(self) -> None:
        if self.kind not in (EXTERIOR, POLYNOMIAL):
            raise RingError(f"unknown generator kind {self.kind!r}")
        if self.degree <= 0:
            raise RingError(f"generator {self.label} needs positive degree")
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_']*", self.label):
            raise RingError(f"bad generator label {self.label!r}")


@dataclass(frozen=True, eq=False)
class RingPresentation:
    """A graded-commutative ring truncated above ``cap``.

    ``modulus`` is 0 for Z and 2 for Z/2.  ``sq1`` and ``sq2`` map generator
    labels to class expressions; generators absent from ``sq1`` have
    ``Sq^1 = 0``, generators absent from ``sq2`` raise on use.
    """

    name: str
    modulus: int
    generators: tuple[Generator, ...]
    cap: int = 10
    sq1: Mapping[str, str] = field(default_factory=dict)
    sq2: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.modulus not in (0, 2):
            raise RingError("coefficient ring must be Z (0) or Z/2 (2)")
        gens = tuple(sorted(self.generators, key=lambda g: g.label))
        if len({g.label for g in gens}) != len(gens):
            raise RingError("duplicate generator labels")
        if self.modulus == 0:
            for g in gens:
                if g.degree % 2 and g.kind == POLYNOMIAL:
                    raise RingError(f"odd generator {g.label} over Z must be exterior")
        if (self.sq1 or self.sq2) and self.modulus != 2:
            raise RingError("Steenrod squares need a Z/2 ring")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "sq1", dict(self.sq1))
        object.__setattr__(self, "sq2", dict(self.sq2))
        for table in (self.sq1, self.sq2):
            for lab in table:
                self.index(lab)

    def __eq__(self, other: object) -> bool:
        return self is other

    def __hash__(self) -> int:
        return id(self)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {g.label: i for i, g in enumerate(self.generators)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise RingError(f"{self.name}: unknown generator {label!r}") from None

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(m, self.generators))

    def basis(self, degree: int) -> list[Monomial]:
        if degree > self.cap:
            raise RingError(f"{self.name}: degree {degree} exceeds cap {self.cap}")
        return self._basis_cache.get(degree, [])

    @cached_property
    def _basis_cache(self) -> dict[int, list[Monomial]]:
        out: dict[int, list[Monomial]] = {}
        gens = self.generators

        def walk(i: int, deg: int, acc: list[int]) -> None:
            if i == len(gens):
                out.setdefault(deg, []).append(tuple(acc))
                return
            g = gens[i]
            top = 1 if g.kind == EXTERIOR else (self.cap - deg) // g.degree
            for e in range(top + 1):
                if deg + e * g.degree > self.cap:
                    break
                walk(i + 1, deg + e * g.degree, acc + [e])

        walk(0, 0, [])
        for d in out:
            out[d].sort()
        return out

    def basis_labels(self, degree: int) -> list[str]:
        return [self.render_monomial(m) for m in self.basis(degree)]

    def rank(self, degree: int) -> int:
        return len(self.basis(degree))

    def render_monomial(self, m: Monomial) -> str:
        parts = []
        for e, g in zip(m, self.generators):
            if e == 1:
                parts.append(g.label)
            elif e > 1:
                parts.append(f"{g.label}^{e}")
        return "*".join(parts) if parts else "1"

    def reduce_coeff(self, c: int) -> int:
        return c % self.modulus if self.modulus else c

    # -- construction -------------------------------------------------
    def one(self) -> CohomologyClass:
        return CohomologyClass(self, 0, {(0,) * len(self.generators): 1})

    def zero(self, degree: int) -> CohomologyClass:
        return CohomologyClass(self, degree, {})

    def gen(self, label: str) -> CohomologyClass:
        i = self.index(label)
        m = tuple(int(j == i) for j in range(len(self.generators)))
        return CohomologyClass(self, self.generators[i].degree, {m: 1})

    def from_vector(self, degree: int, v: Sequence[int]) -> CohomologyClass:
        basis = self.basis(degree)
        if len(v) != len(basis):
            raise RingError("vector length does not match basis")
        return CohomologyClass(self, degree, dict(zip(basis, v)))

    def parse(self, text: str, degree: int | None = None) -> CohomologyClass:
        """Parse sums like ``"d3^2 + 2*b2*b3"``; ``"0"`` needs ``degree``."""
        return _parse_class(self, text, degree)

    # -- monomial arithmetic ------------------------------------------
    def _mul_monomials(self, a: Monomial, b: Monomial) -> tuple[int, Monomial] | None:
        sign = 1
        out = []
        for i, (x, y, g) in enumerate(zip(a, b, self.generators)):
            if g.kind == EXTERIOR and x and y:
                return None
            out.append(x + y)
        if self.modulus != 2:
            # moving each generator of b left past the later generators of a
            for j, y in enumerate(b):
                if not y or self.generators[j].degree % 2 == 0:
                    continue
                passed = sum(
                    a[i] * self.generators[i].degree for i in range(j + 1, len(a))
                )
                if (y * self.generators[j].degree * passed) % 2:
                    sign = -sign
        m = tuple(out)
        if self.monomial_degree(m) > self.cap:
            raise RingError(f"{self.name}: product degree exceeds cap {self.cap}")
        return sign, m

    def _sq_generator(self, which: int, i: int) -> CohomologyClass:
        g = self.generators[i]
        table = self.sq1 if which == 1 else self.sq2
        if g.label not in table:
            if which == 1:
                return self.zero(g.degree + 1)
            raise RingError(f"{self.name}: no Sq^2 data for {g.label}")
        target_degree = g.degree + which
        if target_degree > self.cap:
            raise RingError(f"{self.name}: Sq^{which}({g.label}) exceeds cap")
        val = self.parse(table[g.label], target_degree)
        if val.degree != target_degree:
            raise RingError(f"{self.name}: Sq^{which}({g.label}) has wrong degree")
        return val

    def sq_monomial(self, which: int, m: Monomial) -> CohomologyClass:
        deg = self.monomial_degree(m)
        if which == 0:
            return CohomologyClass(self, deg, {m: 1})
        if deg + which > self.cap:
            raise RingError(f"{self.name}: Sq^{which} of degree {deg} exceeds cap {self.cap}")
        if not any(m):
            return self.zero(which)
        i = next(k for k, e in enumerate(m) if e)
        if sum(m) == 1:
            return self._sq_generator(which, i)
        first = self.gen(self.generators[i].label)
        rest_m = tuple(e - (k == i) for k, e in enumerate(m))
        rest = CohomologyClass(self, deg - self.generators[i].degree, {rest_m: 1})
        total = self.zero(deg + which)
        # Cartan formula
        for j in range(which + 1):
            left = first.sq(j) if j else first
            right = rest.sq(which - j) if which - j else rest
            if left.is_zero() or right.is_zero():
                continue
            total = total + left * right
        return total


class CohomologyClass:
    """A homogeneous element: monomial -> nonzero reduced coefficient."""

    __slots__ = ("ring", "degree", "terms")

    def __init__(self, ring: RingPresentation, degree: int, terms: Mapping[Monomial, int]):
        clean = {}
        for m, c in terms.items():
            c = ring.reduce_coeff(int(c))
            if c == 0:
                continue
            if ring.monomial_degree(m) != degree:
                raise RingError(f"monomial {ring.render_monomial(m)} is not in degree {degree}")
            clean[m] = c
        if degree > ring.cap:
            raise RingError(f"{ring.name}: degree {degree} exceeds cap {ring.cap}")
        self.ring = ring
        self.degree = degree
        self.terms = clean

    def _check(self, other: CohomologyClass) -> None:
        if other.ring is not self.ring:
            raise RingError("classes live in different rings")

    def __add__(self, other: CohomologyClass) -> CohomologyClass:
        self._check(other)
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise RingError("cannot add classes of different degrees")
        if self.is_zero():
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return CohomologyClass(self.ring, self.degree, terms)

    def __neg__(self) -> CohomologyClass:
        return CohomologyClass(self.ring, self.degree, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: CohomologyClass) -> CohomologyClass:
        return self + (-other)

    def __rmul__(self, k: int) -> CohomologyClass:
        return CohomologyClass(self.ring, self.degree, {m: k * c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        return multiply(self, other)

    def __pow__(self, k: int) -> CohomologyClass:
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        if self.ring is not other.ring:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.degree, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def vector(self) -> list[int]:
        return [self.terms.get(m, 0) for m in self.ring.basis(self.degree)]

    def sq(self, which: int) -> CohomologyClass:
        if self.ring.modulus != 2:
            raise RingError("Steenrod squares need a Z/2 ring")
        total = self.ring.zero(self.degree + which)
        for m, c in self.terms.items():
            total = total + c * self.ring.sq_monomial(which, m)
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m in self.ring.basis(self.degree):
            c = self.terms.get(m)
            if not c:
                continue
            lab = self.ring.render_monomial(m)
            term = lab if c == 1 else f"-{lab}" if c == -1 else f"{c}*{lab}"
            out.append(term)
        s = out[0]
        for t in out[1:]:
            s += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return s

    __repr__ = __str__


def multiply(x: CohomologyClass, y: CohomologyClass) -> CohomologyClass:
    """Graded-commutative product with Koszul signs; exterior squares vanish."""
    x._check(y)
    ring = x.ring
    if x.degree + y.degree > ring.cap:
        raise RingError(f"{ring.name}: product degree {x.degree + y.degree} exceeds cap {ring.cap}")
    terms: dict[Monomial, int] = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            r = ring._mul_monomials(a, b)
            if r is None:
                continue
            sign, m = r
            terms[m] = terms.get(m, 0) + sign * ca * cb
    return CohomologyClass(ring, x.degree + y.degree, terms)


def sq2(x: CohomologyClass) -> CohomologyClass:
    return x.sq(2)


def sq1(x: CohomologyClass) -> CohomologyClass:
    return x.sq(1)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_']*)|(\^)|(\*)|([+-]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    kinds = ("int", "name", "pow", "mul", "sign")
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise RingError(f"cannot parse {text!r} at offset {pos}")
        out.append((kinds[m.lastindex - 1], m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    return out


def _parse_class(ring: RingPresentation, text: str, degree: int | None) -> CohomologyClass:
    # expr := [sign] term {sign term};  term := factor {'*' factor};  factor := INT | NAME ['^' INT]
    tokens = _tokenize(text)
    i = 0

    def peek() -> tuple[str, str, int] | None:
        return tokens[i] if i < len(tokens) else None

    def fail(msg: str) -> RingError:
        tok = peek()
        where = tok[2] if tok else len(text)
        return RingError(f"{msg} at offset {where} in {text!r}")

    def factor() -> tuple[int, CohomologyClass | None]:
        nonlocal i
        tok = peek()
        if tok is None:
            raise fail("factor expected")
        if tok[0] == "int":
            i += 1
            return int(tok[1]), None
        if tok[0] == "name":
            i += 1
            g = ring.gen(tok[1])
            if peek() and peek()[0] == "pow":
                i += 1
                tok = peek()
                if tok is None or tok[0] != "int":
                    raise fail("exponent expected")
                i += 1
                g = g ** int(tok[1])
            return 1, g
        raise fail(f"unexpected {tok[1]!r}")

    def term(sign: int) -> CohomologyClass | int:
        nonlocal i
        coeff, cls = sign, None
        while True:
            c, g = factor()
            coeff *= c
            if g is not None:
                cls = g if cls is None else cls * g
            if peek() and peek()[0] == "mul":
                i += 1
                continue
            return coeff if cls is None else coeff * cls

    pieces: list[CohomologyClass | int] = []
    sign = 1
    if peek() and peek()[0] == "sign":
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    pieces.append(term(sign))
    while peek():
        tok = peek()
        if tok[0] != "sign":
            raise fail(f"unexpected {tok[1]!r}")
        i += 1
        pieces.append(term(-1 if tok[1] == "-" else 1))

    classes = [p for p in pieces if isinstance(p, CohomologyClass) and not p.is_zero()]
    scalars = [p for p in pieces if isinstance(p, int) and p != 0]
    if scalars:
        classes.append(sum(scalars) * ring.one())
    classes = [c for c in classes if not c.is_zero()]
    if not classes:
        if degree is None:
            raise RingError(f"cannot infer the degree of {text!r}")
        return ring.zero(degree)
    total = classes[0]
    for c in classes[1:]:
        total = total + c
    if total.is_zero():
        return ring.zero(degree if degree is not None else total.degree)
    if degree is not None and total.degree != degree:
        raise RingError(f"{text!r} has degree {total.degree}, expected {degree}")
    return total


# -- pairings ------------------------------------------------------------

@dataclass(frozen=True)
class PairingBlock:
    """Pairing of one degree: ``matrix[i][j] = <cohomology_i, homology_j>``."""

    cohomology: tuple[str, ...]
    homology: tuple[str, ...]
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if self.matrix.rows != len(self.cohomology) or self.matrix.cols != len(self.homology):
            raise RingError("pairing matrix shape does not match its labels")


@dataclass(frozen=True)
class PairingTable:
    ring: RingPresentation
    blocks: Mapping[int, PairingBlock]

    @classmethod
    def identity(cls, ring: RingPresentation, homology: Mapping[int, Sequence[str]]) -> PairingTable:
        blocks = {}
        for n, labels in homology.items():
            coh = ring.basis_labels(n)
            if len(coh) != len(labels):
                raise RingError(
                    f"{ring.name}: degree {n} has {len(coh)} cohomology and {len(labels)} homology generators"
                )
            blocks[n] = PairingBlock(tuple(coh), tuple(labels), IntMatrix.identity(len(coh)))
        return cls(ring, blocks)

    def block(self, n: int) -> PairingBlock:
        if n in self.blocks:
            return self.blocks[n]
        if self.ring.rank(n) == 0:
            return PairingBlock((), (), IntMatrix.zeros(0, 0))
        raise RingError(f"no pairing stored in degree {n}")

    def inverse(self, n: int) -> IntMatrix:
        """Inverse of the degree-``n`` pairing matrix over the coefficient ring."""
        m = self.block(n).matrix
        if m.rows != m.cols:
            raise RingError(f"degree {n} pairing is not square")
        if self.ring.modulus == 2:
            return _inverse_mod2(m)
        u, d, v = smith_normal_form(m)
        if any(d[i, i] != 1 for i in range(d.rows)):
            raise RingError(f"degree {n} pairing is not unimodular")
        return v @ u


def _inverse_mod2(m: IntMatrix) -> IntMatrix:
    n = m.rows
    a = [[x % 2 for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(m.to_rows())]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            raise RingError("pairing is singular mod 2")
        a[c], a[piv] = a[piv], a[c]
        for r in range(n):
            if r != c and a[r][c]:
                a[r] = [(x + y) % 2 for x, y in zip(a[r], a[c])]
    return IntMatrix.from_rows([row[n:] for row in a], n)


def cohomology_map_matrix(images: Sequence[CohomologyClass], target_degree: int) -> IntMatrix:
    """Columns are the basis coordinates of ``images``."""
    if not images:
        return IntMatrix.zeros(0, 0)
    ring = images[0].ring
    cols = []
    for x in images:
        if not x.is_zero() and x.degree != target_degree:
            raise RingError("image class in the wrong degree")
        cols.append(x.vector() if not x.is_zero() else [0] * ring.rank(target_degree))
    return IntMatrix.from_columns(cols, ring.rank(target_degree))


def dualize(f: IntMatrix, pairing: PairingTable, source_degree: int, target_degree: int) -> GroupMorphism:
    """Homology map dual to a cohomology map ``H^a -> H^b`` given by matrix ``f``.

    The result goes ``H_b -> H_a`` and is characterized by
    ``<x, f_* h> = <f x, h>``, i.e. ``f_* = P_a^{-1} f^T P_b``.
    """
    ring = pairing.ring
    a, b = source_degree, target_degree
    if f.rows != ring.rank(b) or f.cols != ring.rank(a):
        raise RingError(f"map shape {f.rows}x{f.cols} does not match bases of degrees {a}, {b}")
    pa = pairing.inverse(a) if ring.rank(a) else IntMatrix.zeros(0, 0)
    pb = pairing.block(b).matrix
    if f.cols == 0 or f.rows == 0:
        mat = IntMatrix.zeros(f.cols, f.rows)
    else:
        mat = pa @ f.T @ pb
    m = ring.modulus
    src = FGAbelianGroup.from_orders([m] * ring.rank(b)).with_labels(pairing.block(b).homology)
    tgt = FGAbelianGroup.from_orders([m] * ring.rank(a)).with_labels(pairing.block(a).homology)
    return GroupMorphism(src, tgt, mat)


def dual_sq2(pairing: PairingTable, p: int) -> GroupMorphism:
    """Homology map ``H_p -> H_{p-2}`` dual to ``Sq^2: H^{p-2} -> H^p``."""
    ring = pairing.ring
    images = [ring.sq_monomial(2, mono) for mono in ring.basis(p - 2)]
    mat = cohomology_map_matrix(images, p) if images else IntMatrix.zeros(ring.rank(p), 0)
    return dualize(mat, pairing, p - 2, p)


def pair(x: CohomologyClass, homology_label: str, pairing: PairingTable) -> int:
    """Evaluate ``x`` on a homology basis element named by its label."""
    block = pairing.blocks.get(x.degree)
    if block is None or homology_label not in block.homology:
        owner = next((n for n, b in pairing.blocks.items() if homology_label in b.homology), None)
        if owner is None:
            raise RingError(f"unknown homology label {homology_label!r}")
        raise RingError(f"degree mismatch: class in degree {x.degree}, {homology_label} in degree {owner}")
    j = block.homology.index(homology_label)
    coh = [x.terms.get(m, 0) for m in x.ring.basis(x.degree)]
    value = sum(c * block.matrix[i, j] for i, c in enumerate(coh))
    return x.ring.reduce_coeff(value)


def reduction_check(integral: RingPresentation, mod2: RingPresentation, degrees: Iterable[int]) -> list[int]:
    """Degrees where the mod-2 reduction of the integral basis differs from the stored Z/2 basis."""
    return [n for n in degrees if integral.basis_labels(n) != mod2.basis_labels(n)]
