"""Page-by-page engine for first-quadrant homological spectral sequences.

Every entry keeps its E^2 ambient group ``(+) Z/o_i`` together with two
lattices in ``Z^k``: the cycles that survived all outgoing differentials so
far and the boundaries hit by incoming ones.  ``E^r = cycles / boundaries``.
Working in fixed E^2 coordinates keeps differentials, naturality maps and
labels comparable across pages.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence

from ..abelian import (
    FGAbelianGroup,
    GroupMorphism,
    IntMatrix,
    Subquotient,
    format_vector,
    kernel_basis,
    lattice_basis,
    solve_in_lattice,
)
from ..graded import dual_sq2
from .descriptor import CoefficientRow, DescriptorError, SpaceDescriptor, Summand

__all__ = [
    "Pos",
    "SSError",
    "Entry",
    "SSPage",
    "Differential",
    "DifferentialHint",
    "build_e2",
    "d2",
    "turn_page",
    "hom_is_zero",
    "combine_labels",
]

Pos = tuple[int, int]


class SSError(ValueError):
    """The data handed to the engine is inconsistent (d∘d ≠ 0, contradicting hints, ...)."""


def combine_labels(coeff: str, hom: str) -> str:
    """E^2 generator name ``coeff*hom``; the unit label ``1`` is dropped."""
    parts = []
    for lab in (coeff, hom):
        if lab == "1":
            continue
        parts.append(f"({lab})" if ("*" in lab or "+" in lab) and lab is coeff else lab)
    return "*".join(parts) if parts else "1"


def _contained(lattice: IntMatrix, vectors: IntMatrix) -> bool:
    if vectors.cols == 0:
        return True
    if lattice.cols == 0:
        return vectors.is_zero()
    return solve_in_lattice(lattice_basis(lattice), vectors) is not None


def _basis(m: IntMatrix) -> IntMatrix:
    return lattice_basis(m) if m.cols else m


@dataclass(frozen=True)
class Entry:
    """One position of a page.

    ``params`` name unknown differentials whose images were divided out;
    ``kernel_params`` name unknown differentials leaving this entry.
    """

    pos: Pos
    summands: tuple[Summand, ...]
    cycles: IntMatrix
    boundaries: IntMatrix
    truncated: bool = False
    params: tuple[str, ...] = ()
    kernel_params: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        return len(self.summands)

    @property
    def labels(self) -> list[str]:
        return [lab for _, lab in self.summands]

    @property
    def orders(self) -> list[int]:
        return [o for o, _ in self.summands]

    @property
    def relations(self) -> IntMatrix:
        return IntMatrix.diagonal(self.orders) if self.summands else IntMatrix.zeros(0, 0)

    @property
    def parametric(self) -> bool:
        return bool(self.params or self.kernel_params)

    @property
    def subquotient(self) -> Subquotient:
        return _subquotient(self.cycles, self.boundaries, tuple(self.labels))

    @property
    def group(self) -> FGAbelianGroup:
        if not self.summands:
            return FGAbelianGroup()
        return self.subquotient.group

    @property
    def is_zero(self) -> bool:
        return self.group.is_zero and not self.parametric

    def render_group(self) -> str:
        text = str(self.group)
        if self.kernel_params:
            text = f"ker[{','.join(self.kernel_params)}]({text})"
        if self.params:
            text = f"({text})/{'+'.join(self.params)}" if len(self.params) == 1 else \
                f"({text})/({'+'.join(self.params)})"
        return text


_SQ_CACHE: dict = {}


def _subquotient(cycles: IntMatrix, boundaries: IntMatrix, labels: tuple[str, ...]) -> Subquotient:
    key = (cycles, boundaries, labels)
    hit = _SQ_CACHE.get(key)
    if hit is None:
        hit = Subquotient.build(cycles, boundaries, labels)
        if len(_SQ_CACHE) > 4096:
            _SQ_CACHE.clear()
        _SQ_CACHE[key] = hit
    return hit


@dataclass(frozen=True)
class SSPage:
    """Page ``E^r``: entries for every position with ``p + q <= upto + 1``.

    Entries on the line ``p + q = upto + 1`` are marked truncated: their
    incoming differentials are not tracked, so they are only used as sources.
    """

    r: int
    entries: Mapping[Pos, Entry]
    upto: int
    pmin: int

    def __getitem__(self, pos: Pos) -> Entry:
        return self.entries[pos]

    def get(self, pos: Pos) -> Entry | None:
        return self.entries.get(pos)

    def group(self, p: int, q: int) -> FGAbelianGroup:
        e = self.entries.get((p, q))
        return e.group if e else FGAbelianGroup()

    def visible(self) -> list[Entry]:
        """Nonzero entries with ``p + q <= upto`` sorted by ``(p, q)``."""
        return [
            e for pos, e in sorted(self.entries.items())
            if not e.truncated and (not e.group.is_zero or e.parametric)
        ]

    def antidiagonal(self, n: int) -> list[Entry]:
        return [e for (p, q), e in sorted(self.entries.items()) if p + q == n]


@dataclass(frozen=True)
class Differential:
    """``d^r`` from ``source`` to ``target``.

    ``matrix`` acts on E^2 ambient coordinates; ``morphism`` is the induced
    map on the E^r groups.  ``status`` is one of ``computed``,
    ``asserted-zero``, ``asserted-value`` or ``unknown``.
    """

    r: int
    source: Pos
    target: Pos
    status: str
    matrix: IntMatrix | None
    morphism: GroupMorphism | None = None
    param: str | None = None
    justification: str = ""

    def is_zero(self) -> bool:
        return self.status != "unknown" and (self.morphism is None or self.morphism.is_zero())

    def describe(self) -> str:
        if self.status == "unknown":
            return f"unknown, parameter {self.param}"
        if self.morphism is None or self.morphism.is_zero():
            return "0"
        src = self.morphism.source
        tgt_labels = self.morphism.target.labels or tuple(
            f"g{i}" for i in range(self.morphism.target.ngens)
        )
        parts = []
        for j, lab in enumerate(src.labels or ()):
            image = format_vector(self.morphism.matrix.column(j), tgt_labels)
            if image != "0":
                parts.append(f"{lab} -> {image}")
        return ", ".join(parts)


@dataclass(frozen=True)
class DifferentialHint:
    r: int
    p: int
    q: int
    assertion: str
    via: str | None = None
    images: Mapping[str, Mapping[str, int]] | None = None
    param: str | None = None
    justification: str = ""

    def __post_init__(self) -> None:
        if self.assertion not in ("zero", "value", "unknown"):
            raise DescriptorError(f"hint d{self.r}({self.p},{self.q}): unknown assertion {self.assertion!r}")
        if self.assertion == "value" and not self.images:
            raise DescriptorError(f"hint d{self.r}({self.p},{self.q}): value assertion needs images")
        if self.assertion == "unknown" and not self.param:
            raise DescriptorError(f"hint d{self.r}({self.p},{self.q}): unknown assertion needs a param name")


# -- E^2 --------------------------------------------------------------------

@dataclass(frozen=True)
class E2Cell:
    """Where an E^2 summand comes from: coefficient ``coeff`` paired with ``hom``.

    ``kind`` is ``Z`` (integral homology), ``Z/2`` (mod-2 homology),
    ``tensor`` or ``tor`` (torsion coefficients other than Z/2).
    """

    order: int
    label: str
    coeff: str
    hom: str
    kind: str


def e2_layout(space: SpaceDescriptor, coeffs: CoefficientRow, p: int, q: int) -> tuple[E2Cell, ...]:
    """``H_p(space; coeffs(q))`` as labelled cyclic summands with their provenance."""
    out: list[E2Cell] = []
    for c, a in coeffs.row(q):
        if c == 0:
            out.extend(E2Cell(d, combine_labels(a, h), a, h, "Z") for d, h in space.homology(p, 0))
        elif c == 2:
            out.extend(E2Cell(2, combine_labels(a, h), a, h, "Z/2") for _, h in space.homology(p, 2))
        else:
            for d, h in space.homology(p, 0):
                o = c if d == 0 else gcd(d, c)
                if o > 1:
                    out.append(E2Cell(o, combine_labels(a, h), a, h, "tensor"))
            for d, h in space.homology(p - 1, 0):
                o = gcd(d, c) if d else 1
                if o > 1:
                    out.append(E2Cell(o, combine_labels(a, f"tor({h})"), a, h, "tor"))
    return tuple(out)


def e2_summands(space: SpaceDescriptor, coeffs: CoefficientRow, p: int, q: int) -> tuple[Summand, ...]:
    return tuple((c.order, c.label) for c in e2_layout(space, coeffs, p, q))


def build_e2(space: SpaceDescriptor, coeffs: CoefficientRow, upto: int, reduced: bool = True) -> SSPage:
    """E^2 page ``E_{p,q} = H_p(space; coeffs(q))`` for ``p + q <= upto + 1``."""
    if upto < 0:
        raise DescriptorError("upto must be nonnegative")
    if space.cap < upto + 1:
        raise DescriptorError(
            f"{space.name} is tabulated up to degree {space.cap}; upto={upto} needs {upto + 1}"
        )
    if coeffs.cap < upto:
        raise DescriptorError(f"coefficient row {coeffs.name} stops at q={coeffs.cap} < upto={upto}")
    if not reduced:
        space = space.with_basepoint()
    pmin = 0 if not reduced else 1
    entries = {}
    for n in range(upto + 2):
        for p in range(pmin, n + 1):
            q = n - p
            if q > coeffs.cap:
                continue
            summands = e2_summands(space, coeffs, p, q)
            k = len(summands)
            entry = Entry(
                (p, q), summands, IntMatrix.identity(k),
                IntMatrix.diagonal([o for o, _ in summands]) if k else IntMatrix.zeros(0, 0),
                truncated=(n == upto + 1),
            )
            entries[(p, q)] = entry
    return SSPage(2, entries, upto, pmin)


# -- differentials ------------------------------------------------------------

def hom_is_zero(g: FGAbelianGroup, h: FGAbelianGroup) -> bool:
    """``Hom(g, h) = 0``: finite into free, or coprime orders."""
    for a in g.orders:
        for b in h.orders:
            if a == 0:
                return False
            if b != 0 and gcd(a, b) > 1:
                return False
    return True


def d2(space: SpaceDescriptor, page: SSPage, p: int, q: int) -> Differential:
    """The spin-bordism ``d^2`` on rows 0 and 1.

    Row 1 is the dual of ``Sq^2: H^{p-2} -> H^p``; row 0 first reduces mod 2.
    Coefficient labels move from ``1`` to ``a1`` and from ``a1`` to ``a1^2``.
    """
    if q not in (0, 1):
        raise SSError(f"d2 is only computed on rows 0 and 1, got q={q}")
    src = page[(p, q)]
    tgt = page[(p - 2, q + 1)]
    dual = dual_sq2(space.pairing, p).matrix
    mat = dual @ space.reduction(p) if q == 0 else dual
    if mat.rows != tgt.size or mat.cols != src.size:
        raise SSError(f"d2 at ({p},{q}): shape {mat.rows}x{mat.cols} vs entries {tgt.size}x{src.size}")
    return _make_differential(2, page, (p, q), (p - 2, q + 1), mat, "computed",
                              justification="dual Sq^2" + (" after reduction" if q == 0 else ""))


def _make_differential(r: int, page: SSPage, s: Pos, t: Pos, mat: IntMatrix, status: str,
                       param: str | None = None, justification: str = "") -> Differential:
    src, tgt = page[s], page[t]
    _check_ambient_map(mat, src, tgt, f"d{r} {s}")
    if not _contained(tgt.boundaries, mat @ src.boundaries if src.boundaries.cols else IntMatrix.zeros(tgt.size, 0)):
        raise SSError(f"d{r} {s}: boundaries do not map to boundaries")
    if not _contained(tgt.cycles, mat @ src.cycles if src.cycles.cols else IntMatrix.zeros(tgt.size, 0)):
        raise SSError(f"d{r} {s}: image is not in the cycles of {t}")
    morphism = None
    if src.summands and tgt.summands:
        ssq, tsq = src.subquotient, tgt.subquotient
        cols = [tsq.coordinates(mat.apply(v)) for v in ssq.generators.columns()]
        morphism = GroupMorphism(ssq.group, tsq.group, IntMatrix.from_columns(cols, tsq.group.ngens))
    return Differential(r, s, t, status, mat, morphism, param, justification)


def _check_ambient_map(mat: IntMatrix, src: Entry, tgt: Entry, what: str) -> None:
    for j, d in enumerate(src.orders):
        if d == 0:
            continue
        for i, e in enumerate(tgt.orders):
            x = d * mat[i, j]
            if (e == 0 and x) or (e and x % e):
                raise SSError(f"{what}: generator {src.labels[j]} of order {d} cannot hit {tgt.labels[i]}")


def value_matrix(hint: DifferentialHint, src: Entry, tgt: Entry) -> IntMatrix:
    cols = []
    tindex = {lab: i for i, lab in enumerate(tgt.labels)}
    known = set(src.labels)
    for name in hint.images or {}:
        if name not in known:
            raise DescriptorError(f"hint d{hint.r}({hint.p},{hint.q}): no E2 generator {name!r}; have {src.labels}")
    for lab in src.labels:
        col = [0] * tgt.size
        for name, coeff in (hint.images or {}).get(lab, {}).items():
            if name not in tindex:
                raise DescriptorError(
                    f"hint d{hint.r}({hint.p},{hint.q}): target has no E2 generator {name!r}; have {tgt.labels}"
                )
            col[tindex[name]] += int(coeff)
        cols.append(col)
    return IntMatrix.from_columns(cols, tgt.size)


NaturalityCheck = Callable[[str, int, Pos, SSPage], bool]


def decide_differential(
    r: int,
    s: Pos,
    page: SSPage,
    space: SpaceDescriptor,
    spin_rows: bool,
    hint: DifferentialHint | None,
    naturality: NaturalityCheck | None,
) -> Differential | None:
    """Return the differential ``d^r`` leaving ``s``, or ``None`` when it is automatically zero."""
    p, q = s
    t = (p - r, q + r - 1)
    src, tgt = page.get(s), page.get(t)
    if src is None or tgt is None:
        return None
    if (src.group.is_zero and not src.parametric) or (tgt.group.is_zero and not tgt.params):
        if hint and hint.assertion == "value":
            mat = value_matrix(hint, src, tgt)
            if not (mat @ src.cycles).is_zero() and not _contained(tgt.boundaries, mat @ src.cycles):
                raise SSError(f"hint asserts a nonzero d{r} at {s} but an end is zero")
        return None
    if r == 2 and spin_rows and q in (0, 1):
        d = d2(space, page, p, q)
        if hint:
            _check_hint_against(hint, d, page)
        return d
    homzero = not tgt.params and hom_is_zero(src.group, tgt.group)
    if hint is None:
        if homzero:
            return None
        return Differential(r, s, t, "unknown", None, param=f"?d{r}_{p}_{q}",
                            justification="no rule determines this differential")
    if hint.assertion == "zero":
        if hint.via:
            if naturality is None or not naturality(hint.via, r, s, page):
                raise SSError(f"naturality via {hint.via} does not force d{r} at {s} to vanish")
            just = f"naturality: {hint.via}"
        else:
            just = hint.justification or "asserted"
        mat = IntMatrix.zeros(tgt.size, src.size)
        return _make_differential(r, page, s, t, mat, "asserted-zero", justification=just)
    if hint.assertion == "value":
        mat = value_matrix(hint, src, tgt)
        d = _make_differential(r, page, s, t, mat, "asserted-value", justification=hint.justification)
        if homzero and not d.is_zero():
            raise SSError(f"hint gives a nonzero d{r} at {s} but Hom between the entries is zero")
        return d
    if homzero:
        return None
    return Differential(r, s, t, "unknown", None, param=hint.param, justification=hint.justification)


def _check_hint_against(hint: DifferentialHint, d: Differential, page: SSPage) -> None:
    if hint.assertion == "zero" and not d.is_zero():
        raise SSError(f"hint says d2 at {d.source} vanishes but it is computed as {d.describe()}")
    if hint.assertion == "value":
        want = value_matrix(hint, page[d.source], page[d.target])
        diff = IntMatrix(want.rows, want.cols, tuple(a - b for a, b in zip(want.entries, d.matrix.entries)))
        tgt = page[d.target]
        if not _contained(tgt.boundaries, diff @ page[d.source].cycles):
            raise SSError(f"hint value for d2 at {d.source} disagrees with the computed map")


# -- page turning ------------------------------------------------------------

def turn_page(page: SSPage, diffs: Iterable[Differential]) -> SSPage:
    """``E^{r+1} = ker / im`` for the given differentials of page ``r``."""
    diffs = list(diffs)
    by_source = {d.source: d for d in diffs}
    by_target = {d.target: d for d in diffs}
    if len(by_source) != len(diffs) or len(by_target) != len(diffs):
        raise SSError("two differentials share a source or a target")
    for d in diffs:
        if d.r != page.r:
            raise SSError(f"d{d.r} handed to page {page.r}")
        out = by_source.get(d.target)
        if d.matrix is None or out is None or out.matrix is None:
            continue
        mid, end = page[d.target], page[out.target]
        comp = out.matrix @ d.matrix @ page[d.source].cycles
        if not _contained(end.boundaries, comp):
            raise SSError(f"d{page.r}∘d{page.r} is nonzero through {d.target}")
    entries = dict(page.entries)
    for d in diffs:
        src, tgt = entries[d.source], entries[d.target]
        if d.status == "unknown":
            entries[d.source] = replace(src, kernel_params=src.kernel_params + (d.param,))
            if d.param not in tgt.params:
                entries[d.target] = replace(tgt, params=tgt.params + (d.param,))
            continue
        if d.is_zero() and (d.matrix is None or _contained(page[d.target].boundaries, d.matrix @ page[d.source].cycles)):
            continue
        src0, tgt0 = page[d.source], page[d.target]
        image = d.matrix @ src0.cycles
        # new cycles: {c in Z_s : D c in B_t}
        stacked = image.hstack(_neg(tgt0.boundaries)) if tgt0.boundaries.cols else image
        ker = kernel_basis(stacked)
        coeffs = IntMatrix.from_columns([c[: src0.cycles.cols] for c in ker.columns()], src0.cycles.cols)
        new_cycles = src0.cycles @ coeffs if coeffs.cols else IntMatrix.zeros(src0.size, 0)
        new_cycles = _basis(new_cycles.hstack(src0.boundaries))
        entries[d.source] = replace(entries[d.source], cycles=new_cycles)
        cur_t = entries[d.target]
        entries[d.target] = replace(cur_t, boundaries=_basis(cur_t.boundaries.hstack(image)))
    return SSPage(page.r + 1, entries, page.upto, page.pmin)


def _neg(m: IntMatrix) -> IntMatrix:
    return IntMatrix(m.rows, m.cols, tuple(-x for x in m.entries))
