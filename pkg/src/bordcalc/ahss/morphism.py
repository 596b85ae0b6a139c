"""Maps between spectral sequences and what naturality forces.

A map of spaces ``f: X -> Y`` (possibly through a suspension, recorded as a
degree ``shift``) induces a map of E^2 pages ``(p, q) -> (p + shift, q)``
that commutes with every differential.  Its E^2 component is assembled from
the homology maps ``f_*`` in integral and mod-2 coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..abelian import GroupMorphism, IntMatrix, kernel_basis, lattice_basis, solve_in_lattice
from .descriptor import DescriptorError, _linear_terms
from .engine import Differential, E2Cell, Entry, Pos, SSError, SSPage, e2_layout
from .sequence import SSRun

__all__ = ["SSMorphism", "deduce_vanishing", "forces_zero", "induced_map", "MapFlag"]

MapFlag = str  # iso | zero | injective | other | unknown


@dataclass
class SSMorphism:
    """E^2-level map from ``source`` to ``target`` raising ``p`` by ``shift``.

    ``integral[p]`` and ``mod2[p]`` send homology labels in degree ``p`` to
    linear expressions in the target's labels of degree ``p + shift``.  A
    degree missing from the table makes every entry in that column unknown,
    unless the source homology there is zero.
    """

    name: str
    source: SSRun
    target: SSRun
    shift: int
    integral: Mapping[int, Mapping[str, str]] = field(default_factory=dict)
    mod2: Mapping[int, Mapping[str, str]] = field(default_factory=dict)
    justification: str = ""

    def _hom_map(self, kind: str, p: int, label: str) -> dict[str, int] | None:
        table = self.mod2 if kind == "Z/2" else self.integral
        modulus = 2 if kind == "Z/2" else 0
        if not self.source.space.homology(p, modulus):
            return {}
        if p not in table:
            return None
        row = table[p]
        if label not in row:
            raise DescriptorError(f"morphism {self.name}: degree {p} does not say where {label!r} goes")
        out: dict[str, int] = {}
        for coeff, name in _linear_terms(row[label]):
            out[name] = out.get(name, 0) + coeff
        return out

    def ambient_map(self, p: int, q: int) -> IntMatrix | None:
        """Matrix from E^2 ambient coordinates at ``(p, q)`` to those at ``(p + shift, q)``.

        ``None`` when some needed homology map is not supplied.
        """
        src = e2_layout(self.source.space, self.source.coeffs, p, q)
        tp = p + self.shift
        if tp > self.target.space.cap:
            return None
        tgt = e2_layout(self.target.space, self.target.coeffs, tp, q)
        index = {(c.coeff, c.hom, c.kind): i for i, c in enumerate(tgt)}
        cols = []
        for cell in src:
            hp = p - 1 if cell.kind == "tor" else p
            kind = "Z" if cell.kind in ("tensor", "tor") else cell.kind
            image = self._hom_map(kind, hp, cell.hom)
            if image is None:
                return None
            col = [0] * len(tgt)
            for name, coeff in image.items():
                key = (cell.coeff, name, cell.kind)
                if key not in index:
                    if self._vanishes_in(cell, name, tp):
                        continue
                    raise DescriptorError(
                        f"morphism {self.name}: image {name!r} of {cell.label} has no E2 summand at ({tp},{q})"
                    )
                col[index[key]] += coeff
            cols.append(col)
        mat = IntMatrix.from_columns(cols, len(tgt))
        for j, cell in enumerate(src):
            if cell.order == 0:
                continue
            for i, t in enumerate(tgt):
                x = cell.order * mat[i, j]
                if (t.order == 0 and x) or (t.order and x % t.order):
                    raise SSError(f"morphism {self.name} at ({p},{q}): {cell.label} cannot map to {t.label}")
        return mat

    def _vanishes_in(self, cell: E2Cell, name: str, tp: int) -> bool:
        # the target summand was dropped from E^2 because its order is prime to the coefficient
        if cell.kind not in ("tensor", "tor"):
            return False
        degree = tp - 1 if cell.kind == "tor" else tp
        return any(lab == name for _, lab in self.target.space.homology(degree, 0))

    def flag(self, p: int, q: int, r: int = 2) -> MapFlag:
        """Classify the induced map ``E^r_{p,q} -> E^r_{p+shift,q}``."""
        f = self.page_map(p, q, r)
        if f is None:
            return "unknown"
        if f.is_zero():
            return "zero"
        if f.is_iso():
            return "iso"
        if f.is_injective():
            return "injective"
        return "other"

    def page_map(self, p: int, q: int, r: int) -> GroupMorphism | None:
        """Induced map on ``E^r`` groups (``r`` past the end means E-infinity)."""
        mat = self.ambient_map(p, q)
        if mat is None:
            return None
        s = self.source.page(r).get((p, q))
        t = self.target.page(r).get((p + self.shift, q))
        if s is None or t is None or s.truncated or t.truncated or s.parametric or t.parametric:
            return None
        return induced_map(mat, s, t)

    def check_d2(self) -> None:
        """Verify ``f d^2 = d^2 f`` wherever both runs computed d^2 and the maps are known."""
        for d in self.source.differentials:
            if d.r != 2 or d.matrix is None:
                continue
            ms = self.ambient_map(*d.source)
            mt = self.ambient_map(*d.target)
            if ms is None or mt is None:
                continue
            sp, tp = (d.source[0] + self.shift, d.source[1]), (d.target[0] + self.shift, d.target[1])
            other = self.target.differential(2, sp)
            tgt_entry = self.target.page(2).get(tp)
            if tgt_entry is None:
                continue
            lhs = mt @ d.matrix
            if other is None or other.matrix is None:
                if other is not None:
                    continue
                rhs = IntMatrix.zeros(lhs.rows, lhs.cols)
            else:
                rhs = other.matrix @ ms
            diff = IntMatrix(lhs.rows, lhs.cols, tuple(a - b for a, b in zip(lhs.entries, rhs.entries)))
            if not _inside(tgt_entry.relations, diff):
                raise SSError(f"morphism {self.name} does not commute with d2 at {d.source}")


def induced_map(mat: IntMatrix, s: Entry, t: Entry) -> GroupMorphism:
    ssq, tsq = s.subquotient, t.subquotient
    image = mat @ ssq.generators if ssq.generators.cols else IntMatrix.zeros(t.size, 0)
    if not _inside(t.cycles, image):
        raise SSError(f"map into {t.pos} does not land in the cycles")
    cols = [tsq.coordinates(v) for v in image.columns()]
    return GroupMorphism(ssq.group, tsq.group, IntMatrix.from_columns(cols, tsq.group.ngens))


def _inside(lattice: IntMatrix, vectors: IntMatrix) -> bool:
    if vectors.cols == 0 or vectors.is_zero():
        return True
    if lattice.cols == 0:
        return False
    return solve_in_lattice(lattice_basis(lattice), vectors) is not None


def deduce_vanishing(morphism: SSMorphism, r: int, p: int, q: int,
                     page: SSPage | None = None) -> Differential | None:
    """Asserted-zero ``d^r_{p,q}`` when naturality forces it, ``None`` when inconclusive.

    ``page`` defaults to the source run's ``E^r``.
    """
    page = page if page is not None else morphism.source.page(r)
    if not forces_zero(morphism, r, (p, q), page):
        return None
    s, t = page.get((p, q)), page.get((p - r, q + r - 1))
    rows = t.size if t else 0
    cols = s.size if s else 0
    return Differential(r, (p, q), (p - r, q + r - 1), "asserted-zero", IntMatrix.zeros(rows, cols),
                        justification=f"naturality: {morphism.name}")


def forces_zero(morphism: SSMorphism, r: int, source: Pos, page: SSPage) -> bool:
    """Whether naturality forces ``d^r`` leaving ``source`` to vanish on ``page``.

    With ``t`` the target of the differential and primes for the other run,
    ``f d = d' f``.  It suffices that ``f`` is injective on ``E^r_t`` and that
    ``f d`` is zero, either because ``f`` kills ``E^r_source`` or because
    ``d'`` leaving ``f(source)`` vanishes.
    """
    p, q = source
    t = (p - r, q + r - 1)
    shift = morphism.shift
    other = morphism.target
    s_entry, t_entry = page.get(source), page.get(t)
    if s_entry is None or t_entry is None or s_entry.is_zero or t_entry.is_zero:
        return True
    mt = morphism.ambient_map(*t)
    ms = morphism.ambient_map(*source)
    if mt is None or ms is None:
        return False
    opage = other.page(r)
    s2, t2 = opage.get((p + shift, q)), opage.get((t[0] + shift, t[1]))
    if t2 is None or t2.params or t2.truncated:
        return False
    # injective on E^r_t: {z in Z_t : f z in B'} must lie in B_t
    image = mt @ t_entry.cycles
    stacked = image.hstack(_neg(t2.boundaries)) if t2.boundaries.cols else image
    ker = kernel_basis(stacked)
    k = t_entry.cycles.cols
    coeffs = IntMatrix.from_columns([c[:k] for c in ker.columns()], k)
    preimage = t_entry.cycles @ coeffs if coeffs.cols else IntMatrix.zeros(t_entry.size, 0)
    if not _inside(t_entry.boundaries, preimage):
        return False
    if (ms @ s_entry.cycles).is_zero():
        return True
    if s2 is None:
        return False
    if _inside(s2.boundaries, ms @ s_entry.cycles):
        return True
    if s2.truncated or s2.kernel_params:
        return False
    d_other = other.differential(r, (p + shift, q))
    if d_other is None:
        # nothing recorded: that differential vanished automatically
        return True
    return d_other.is_zero()


def _neg(m: IntMatrix) -> IntMatrix:
    return IntMatrix(m.rows, m.cols, tuple(-x for x in m.entries))
