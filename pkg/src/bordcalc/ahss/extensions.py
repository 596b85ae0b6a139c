"""Assembling E-infinity into the abutment.

The pieces of degree ``n`` are ``E^inf_{p, n-p}`` in increasing ``p``; each
step of the filtration is a short exact sequence
``0 -> F_{p'} -> F_p -> E^inf_{p,n-p} -> 0``.  A step is settled by one of:

* ``forced``: ``Ext(piece, F_{p'}) = 0``;
* ``asserted``: the hints say the step splits or name the result;
* ``naturality``: a map to another run whose filtration level is torsion
  free, with torsion-free kernel on the piece, forces ``F_p`` torsion free;
* ``total``: a known abutment leaves exactly one isomorphism type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd, prod
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from ..abelian import FGAbelianGroup, IntMatrix, cokernel
from .descriptor import summands_group
from .engine import Entry, SSError

if TYPE_CHECKING:
    from .morphism import SSMorphism
    from .sequence import SSRun

__all__ = [
    "ExtensionStep",
    "FiltrationReport",
    "assemble",
    "extension_candidates",
    "ext_vanishes",
    "resolve_extension_via_map",
    "resolve_extensions_from_total",
    "resolve_split",
    "report_from_groups",
]

ENUMERATION_LIMIT = 50_000


@dataclass
class ExtensionStep:
    """``0 -> sub -> result -> quotient -> 0`` at filtration ``p``."""

    p: int
    quotient: FGAbelianGroup
    result: FGAbelianGroup | None = None
    method: str = "open"
    justification: str = ""
    split: bool | None = None

    @property
    def resolved(self) -> bool:
        return self.result is not None


@dataclass
class FiltrationReport:
    """Pieces of ``E^inf`` in total degree ``n`` and how they assemble."""

    n: int
    pieces: list[Entry]
    first: FGAbelianGroup | None
    steps: list[ExtensionStep] = field(default_factory=list)
    total_override: FGAbelianGroup | None = None

    @property
    def parametric(self) -> bool:
        return any(e.parametric for e in self.pieces)

    @property
    def params(self) -> list[str]:
        out: list[str] = []
        for e in self.pieces:
            for k in e.params + e.kernel_params:
                if k not in out:
                    out.append(k)
        return out

    def sub(self, i: int) -> FGAbelianGroup | None:
        """Filtration level just below step ``i``."""
        return self.first if i == 0 else self.steps[i - 1].result

    def level(self, p: int) -> FGAbelianGroup | None:
        """``F_p``: the part of the abutment with filtration at most ``p``."""
        if self.parametric:
            return None
        if not self.pieces or p < self.pieces[0].pos[0]:
            return FGAbelianGroup()
        current = self.first
        for step in self.steps:
            if step.p > p:
                break
            current = step.result
        return current

    @property
    def resolved(self) -> bool:
        return not self.parametric and all(s.resolved for s in self.steps)

    @property
    def total(self) -> FGAbelianGroup | None:
        if not self.resolved:
            return None
        if not self.pieces:
            return FGAbelianGroup()
        if all(s.split for s in self.steps):
            g = summands_group([(o, lab) for e in self.pieces for o, lab in _summands(e.group)])
            if g.labels is not None:
                return g
        result = self.first if not self.steps else self.steps[-1].result
        g = result.unlabeled()
        return g.with_labels([f"x{self.n}_{i}" for i in range(g.ngens)])

    def render_total(self) -> str:
        if self.parametric:
            if len(self.pieces) == 1:
                return self.pieces[0].render_group()
            return "ext(" + ", ".join(e.render_group() for e in self.pieces) + ")"
        t = self.total
        if t is not None:
            return str(t)
        return "unresolved(" + ", ".join(str(e.group) for e in self.pieces) + ")"


def report_from_groups(n: int, groups: Sequence[FGAbelianGroup],
                       filtrations: Sequence[int] | None = None) -> FiltrationReport:
    """A report built directly from piece groups (filtrations default to 0, 1, 2, ...)."""
    ps = list(filtrations) if filtrations is not None else list(range(len(groups)))
    pieces = []
    for p, g in zip(ps, groups):
        labels = g.labels or tuple(f"g{p}_{i}" for i in range(g.ngens))
        summands = tuple(zip(g.orders, labels))
        pieces.append(Entry((p, n - p), summands, IntMatrix.identity(len(summands)),
                            IntMatrix.diagonal(g.orders) if summands else IntMatrix.zeros(0, 0)))
    pieces = [e for e in pieces if e.summands]
    if not pieces:
        return FiltrationReport(n, [], FGAbelianGroup())
    report = FiltrationReport(n, pieces, pieces[0].group, [ExtensionStep(e.pos[0], e.group) for e in pieces[1:]])
    resolve_forced(report)
    return report


def _summands(g: FGAbelianGroup) -> list[tuple[int, str]]:
    labels = g.labels or tuple(f"g{i}" for i in range(g.ngens))
    return list(zip(g.orders, labels))


def assemble(run: SSRun, n: int) -> FiltrationReport:
    """Filtration report for degree ``n`` with the forced steps already settled."""
    if n > run.upto:
        raise SSError(f"degree {n} is past upto={run.upto}")
    pieces = [e for e in run.einf.antidiagonal(n) if not e.group.is_zero or e.parametric]
    if not pieces:
        return FiltrationReport(n, [], FGAbelianGroup())
    first = None if pieces[0].parametric else pieces[0].group
    steps = [ExtensionStep(e.pos[0], e.group) for e in pieces[1:]]
    report = FiltrationReport(n, pieces, first, steps)
    resolve_forced(report)
    return report


def ext_vanishes(quotient: FGAbelianGroup, sub: FGAbelianGroup) -> bool:
    """``Ext(quotient, sub) = 0``."""
    for b in quotient.orders:
        if b == 0:
            continue
        for a in sub.orders:
            if a == 0 or gcd(a, b) > 1:
                return False
    return True


def _direct_sum(a: FGAbelianGroup, b: FGAbelianGroup) -> FGAbelianGroup:
    return FGAbelianGroup.from_orders(list(a.orders) + list(b.orders))


def resolve_forced(report: FiltrationReport) -> bool:
    progress = False
    for i, step in enumerate(report.steps):
        a = report.sub(i)
        if step.resolved or a is None:
            continue
        if ext_vanishes(step.quotient, a):
            step.result = _direct_sum(a, step.quotient)
            step.method, step.split = "forced", True
            step.justification = f"Ext({step.quotient}, {a}) = 0"
            progress = True
    return progress


def resolve_split(report: FiltrationReport, p: int, group: FGAbelianGroup | None,
                  justification: str) -> bool:
    """Apply an asserted step: split when ``group`` is ``None``, otherwise the named result."""
    for i, step in enumerate(report.steps):
        if step.p != p:
            continue
        if step.resolved:
            return False
        a = report.sub(i)
        if group is None:
            if a is None:
                return False
            step.result, step.split = _direct_sum(a, step.quotient), True
        else:
            _check_compatible(a, step.quotient, group, report.n, p)
            step.result = group.unlabeled()
            step.split = a is not None and step.result == _direct_sum(a, step.quotient)
        step.method, step.justification = "asserted", justification
        return True
    raise SSError(f"degree {report.n} has no extension step at p={p}")


def _check_compatible(a: FGAbelianGroup | None, b: FGAbelianGroup, g: FGAbelianGroup, n: int, p: int) -> None:
    if a is None:
        return
    if g.free_rank != a.free_rank + b.free_rank:
        raise SSError(f"degree {n}, p={p}: {g} cannot extend {b} by {a} (rank)")
    if (a.torsion_order * b.torsion_order) % g.torsion_order:
        raise SSError(f"degree {n}, p={p}: {g} cannot extend {b} by {a} (torsion)")


def resolve_extension_via_map(report: FiltrationReport, p: int, morphism: SSMorphism,
                              target: FiltrationReport) -> bool:
    """Settle the step at ``p`` using ``morphism`` into a run whose report ``target`` is known.

    If ``F_{p'}`` and the target level ``F'_{p+shift}`` are torsion free and
    the induced map on the piece has torsion-free kernel, any torsion element
    of ``F_p`` would map to zero in the piece and hence lie in ``F_{p'}``.
    """
    for i, step in enumerate(report.steps):
        if step.p != p:
            continue
        if step.resolved:
            return False
        a = report.sub(i)
        if a is None or not a.is_torsion_free:
            return False
        level = target.level(p + morphism.shift)
        if level is None or not level.is_torsion_free:
            return False
        piece = report.pieces[i + 1]
        q = piece.pos[1]
        other = morphism.target.einf.get((p + morphism.shift, q))
        if other is None or other.group.is_zero:
            kernel = piece.group
        else:
            f = morphism.page_map(p, q, 10**6)
            if f is None:
                return False
            kernel = f.kernel()
        if not kernel.is_torsion_free:
            return False
        step.result = FGAbelianGroup(a.free_rank + step.quotient.free_rank)
        step.split = step.result == _direct_sum(a, step.quotient)
        step.method = "naturality"
        step.justification = f"map {morphism.name} into a torsion-free level"
        return True
    raise SSError(f"degree {report.n} has no extension step at p={p}")


def extension_candidates(sub: FGAbelianGroup, quotient: FGAbelianGroup) -> list[FGAbelianGroup]:
    """Isomorphism types of all extensions ``0 -> sub -> G -> quotient -> 0``.

    Each torsion generator ``e`` of order ``d`` in the quotient lifts with
    ``d e = x`` for some ``x`` in ``sub / d sub``; running over all choices
    of ``x`` produces every extension class.
    """
    a_orders = list(sub.orders)
    b_orders = list(quotient.orders)
    k, m = len(a_orders), len(b_orders)
    choice_ranges = []
    for d in b_orders:
        if d == 0:
            continue
        choice_ranges.append([range(d if a == 0 else gcd(a, d)) for a in a_orders])
    total = prod(len(r) for rs in choice_ranges for r in rs)
    if total > ENUMERATION_LIMIT:
        raise SSError(f"too many extensions of {quotient} by {sub} to enumerate ({total})")
    seen: list[FGAbelianGroup] = []
    flat = [r for rs in choice_ranges for r in rs]
    for choice in product(*flat):
        cols = []
        for i, a in enumerate(a_orders):
            if a:
                col = [0] * (k + m)
                col[i] = a
                cols.append(col)
        c = 0
        for j, d in enumerate(b_orders):
            if d == 0:
                continue
            col = [0] * (k + m)
            col[k + j] = d
            for i in range(k):
                col[i] = -choice[c + i]
            c += k
            cols.append(col)
        g = cokernel(IntMatrix.from_columns(cols, k + m)) if cols else FGAbelianGroup(k + m)
        if g not in seen:
            seen.append(g)
    return seen


def resolve_extensions_from_total(report: FiltrationReport, total: FGAbelianGroup,
                                  justification: str = "known total") -> bool:
    """Settle every step that only one chain of extensions ending at ``total`` allows."""
    if report.parametric:
        return False
    total = total.unlabeled()
    pieces = [e.group for e in report.pieces]
    if not pieces:
        if not total.is_zero:
            raise SSError(f"degree {report.n}: E-infinity vanishes but the total is {total}")
        return False
    rank = sum(g.free_rank for g in pieces)
    if total.free_rank != rank:
        raise SSError(f"degree {report.n}: total {total} has rank {total.free_rank}, pieces give {rank}")
    if prod(g.torsion_order for g in pieces) % total.torsion_order:
        raise SSError(f"degree {report.n}: torsion of {total} does not divide that of the pieces")
    layers: list[dict[FGAbelianGroup, set[FGAbelianGroup]]] = [{pieces[0].unlabeled(): set()}]
    for i, step in enumerate(report.steps):
        nxt: dict[FGAbelianGroup, set[FGAbelianGroup]] = {}
        for a in layers[-1]:
            options = [step.result.unlabeled()] if step.resolved else extension_candidates(a, step.quotient)
            for g in options:
                if step.resolved and not _possible(a, step.quotient, g):
                    continue
                nxt.setdefault(g, set()).add(a)
        layers.append(nxt)
    if total not in layers[-1]:
        raise SSError(f"degree {report.n}: no chain of extensions of the pieces gives {total}")
    alive = [set() for _ in layers]
    alive[-1] = {total}
    for i in range(len(layers) - 1, 0, -1):
        for g in alive[i]:
            alive[i - 1] |= layers[i][g]
    progress = False
    for i, step in enumerate(report.steps):
        options = alive[i + 1]
        if step.resolved or len(options) != 1:
            continue
        (g,) = options
        subs = alive[i]
        step.result = g
        step.split = all(g == _direct_sum(a, step.quotient) for a in subs)
        step.method = "total"
        step.justification = justification
        progress = True
    return progress


def _possible(a: FGAbelianGroup, b: FGAbelianGroup, g: FGAbelianGroup) -> bool:
    return g in extension_candidates(a, b)
