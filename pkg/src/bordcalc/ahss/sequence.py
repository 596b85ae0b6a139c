"""Running a spectral sequence to E-infinity."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .descriptor import CoefficientRow, SpaceDescriptor
from .engine import (
    Differential,
    DifferentialHint,
    NaturalityCheck,
    Pos,
    SSPage,
    build_e2,
    decide_differential,
    turn_page,
)

__all__ = ["SSRun", "run_sequence"]


@dataclass
class SSRun:
    """A finished run: every page, every nontrivial differential, and E-infinity.

    ``pages[i]`` is ``E^{i+2}``; the last page is E-infinity.
    """

    name: str
    space: SpaceDescriptor
    coeffs: CoefficientRow
    upto: int
    reduced: bool
    pages: list[SSPage]
    differentials: list[Differential]
    reports: dict = field(default_factory=dict)

    @property
    def e2(self) -> SSPage:
        return self.pages[0]

    @property
    def einf(self) -> SSPage:
        return self.pages[-1]

    def page(self, r: int) -> SSPage:
        """``E^r``; pages past the last computed one equal E-infinity."""
        i = r - 2
        return self.pages[i] if i < len(self.pages) else self.pages[-1]

    def differential(self, r: int, source: Pos) -> Differential | None:
        for d in self.differentials:
            if d.r == r and d.source == source:
                return d
        return None

    @property
    def params(self) -> list[str]:
        seen: list[str] = []
        for d in self.differentials:
            if d.status == "unknown" and d.param not in seen:
                seen.append(d.param)
        return seen


def run_sequence(
    space: SpaceDescriptor,
    coeffs: CoefficientRow,
    upto: int,
    reduced: bool = True,
    hints: Mapping[tuple[int, int, int], DifferentialHint] | None = None,
    naturality: NaturalityCheck | None = None,
    name: str | None = None,
) -> SSRun:
    """Turn pages until no differential can be nonzero.

    ``hints`` is keyed by ``(r, p, q)``.  Differentials that are neither
    computed, forced to vanish, nor hinted become parameters named
    ``?d{r}_{p}_{q}``.
    """
    hints = dict(hints or {})
    page = build_e2(space, coeffs, upto, reduced)
    used_space = space if reduced else space.with_basepoint()
    spin_rows = coeffs.name == "spin" and reduced
    pages = [page]
    diffs: list[Differential] = []
    pmax = max((p for p, _ in page.entries), default=0)
    for r in range(2, pmax - page.pmin + 1):
        current = []
        for s in sorted(page.entries):
            d = decide_differential(r, s, page, used_space, spin_rows, hints.pop((r, *s), None), naturality)
            if d is not None:
                current.append(d)
        page = turn_page(page, current)
        pages.append(page)
        diffs.extend(current)
    if hints:
        (r, p, q), _ = next(iter(hints.items()))
        raise ValueError(f"hint for d{r} at ({p},{q}) does not match any differential in range")
    return SSRun(name or space.name, used_space, coeffs, upto, reduced, pages, diffs)
