"""Space descriptors and coefficient rows, with their text format.

A descriptor is a TOML document.  Homology tables are written as labelled
sums of cyclic groups, e.g. ``8 = "Z<eps4sq> + Z/3<eps8>"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping, Sequence

import tomlkit

from ..abelian import AbelianError, FGAbelianGroup, IntMatrix, uct_cohomology, uct_homology
from ..graded import Generator, PairingBlock, PairingTable, RingError, RingPresentation

__all__ = [
    "Summand",
    "DescriptorError",
    "SpaceDescriptor",
    "CoefficientRow",
    "parse_summands",
    "format_summands",
    "spin_row",
    "load_space",
    "load_toml",
]

Summand = tuple[int, str]
"""A cyclic group ``Z`` (order 0) or ``Z/d`` together with its generator label."""


class DescriptorError(ValueError):
    """Malformed descriptor, coefficient row or hint data."""


_TERM = re.compile(r"^Z(?:\^(\d+))?(?:/(\d+))?\s*<([^>]*)>$")


def parse_summands(text: str) -> list[Summand]:
    """Parse ``"Z<a> + Z/2<b> + Z^2<c, d>"``; ``"0"`` is the empty list."""
    text = text.strip()
    if text in ("", "0"):
        return []
    out: list[Summand] = []
    for term in text.split("+"):
        term = term.strip()
        m = _TERM.match(term)
        if not m:
            raise DescriptorError(f"cannot read group term {term!r} (expected e.g. Z/2<label>)")
        count = int(m.group(1) or 1)
        order = int(m.group(2) or 0)
        if order == 1 or count < 1:
            raise DescriptorError(f"bad cyclic group in {term!r}")
        labels = [s.strip() for s in m.group(3).split(",")]
        if len(labels) != count or not all(labels):
            raise DescriptorError(f"{term!r} needs exactly {count} labels")
        out.extend((order, lab) for lab in labels)
    return out


def format_summands(summands: Sequence[Summand]) -> str:
    if not summands:
        return "0"
    return " + ".join(f"Z<{lab}>" if o == 0 else f"Z/{o}<{lab}>" for o, lab in summands)


def summands_group(summands: Sequence[Summand]) -> FGAbelianGroup:
    """Normal form, keeping labels when the summands are already in that form."""
    g = FGAbelianGroup.from_orders(o for o, _ in summands)
    ordered = sorted(summands, key=lambda s: (s[0] != 0, s[0]))
    if tuple(o for o, _ in ordered) == g.orders:
        return g.with_labels([lab for _, lab in ordered])
    return g


def group_summands(g: FGAbelianGroup, prefix: str) -> list[Summand]:
    labels = g.labels or tuple(f"{prefix}_{i + 1}" for i in range(g.ngens))
    return list(zip(g.orders, labels))


def load_toml(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DescriptorError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return tomlkit.parse(text).unwrap()
    except Exception as exc:  # tomlkit raises several parse error types
        raise DescriptorError(f"{path}: {exc}") from None


@dataclass(frozen=True)
class CoefficientRow:
    """Coefficient groups by row ``q``, each a list of labelled cyclic summands."""

    name: str
    rows: Mapping[int, tuple[Summand, ...]]
    cap: int

    def row(self, q: int) -> tuple[Summand, ...]:
        if q > self.cap:
            raise DescriptorError(f"coefficient row {self.name} stops at q={self.cap}, asked for {q}")
        return self.rows.get(q, ())

    def group(self, q: int) -> FGAbelianGroup:
        return summands_group(self.row(q))


def spin_row() -> CoefficientRow:
    """Spin bordism of a point for q <= 9, with the generator names a1, a1^2, a2."""
    rows = {
        0: ((0, "1"),),
        1: ((2, "a1"),),
        2: ((2, "a1^2"),),
        4: ((0, "a2"),),
        8: ((0, "s8_1"), (0, "s8_2")),
        9: ((2, "s9_1"), (2, "s9_2")),
    }
    return CoefficientRow("spin", rows, 9)


@dataclass(frozen=True)
class SpaceDescriptor:
    """Reduced homology of a space up to ``cap`` plus its mod-2 cohomology ring."""

    name: str
    cap: int
    integral: Mapping[int, tuple[Summand, ...]]
    mod2: Mapping[int, tuple[Summand, ...]]
    ring: RingPresentation
    pairing: PairingTable
    reduction_overrides: Mapping[int, Mapping[str, str]] = field(default_factory=dict)
    integral_cohomology: Mapping[int, tuple[Summand, ...]] | None = None
    integral_ring: RingPresentation | None = None
    unreduced: bool = False

    def homology(self, n: int, modulus: int = 0) -> tuple[Summand, ...]:
        if n < 0:
            return ()
        if n > self.cap:
            raise DescriptorError(f"{self.name}: homology in degree {n} is beyond the cap {self.cap}")
        table = self.integral if modulus == 0 else self.mod2
        return tuple(table.get(n, ()))

    def group(self, n: int, modulus: int = 0) -> FGAbelianGroup:
        return summands_group(self.homology(n, modulus))

    def groups(self, modulus: int = 0) -> dict[int, FGAbelianGroup]:
        return {n: self.group(n, modulus) for n in range(self.cap + 1)}

    def with_basepoint(self) -> SpaceDescriptor:
        """Unreduced version: adds ``H_0 = Z<1>`` (and ``Z/2<1>`` mod 2)."""
        if self.unreduced:
            return self
        integral = dict(self.integral)
        mod2 = dict(self.mod2)
        integral[0] = ((0, "1"),)
        mod2[0] = ((2, "1"),)
        return replace(self, integral=integral, mod2=mod2, unreduced=True)

    def reduction(self, n: int) -> IntMatrix:
        """Mod-2 reduction ``H_n(Z) -> H_n(Z/2)`` on the stored generators.

        By default a free or even-order generator ``x`` maps to ``xbar`` and an
        odd-order generator maps to zero; ``[reduction]`` entries override this.
        """
        src = self.homology(n, 0)
        tgt = self.homology(n, 2)
        tgt_index = {lab: i for i, (_, lab) in enumerate(tgt)}
        overrides = self.reduction_overrides.get(n, {})
        cols = []
        for order, lab in src:
            col = [0] * len(tgt)
            if lab in overrides:
                for term in _linear_terms(overrides[lab]):
                    coeff, name = term
                    if name not in tgt_index:
                        raise DescriptorError(f"{self.name}: reduction of {lab} names unknown {name!r}")
                    col[tgt_index[name]] += coeff
            elif order == 0 or order % 2 == 0:
                name = lab + "bar"
                if name not in tgt_index:
                    raise DescriptorError(
                        f"{self.name}: no mod-2 generator {name!r} for the reduction of {lab}; "
                        "add a [reduction] entry"
                    )
                col[tgt_index[name]] = 1
            cols.append([c % 2 for c in col])
        return IntMatrix.from_columns(cols, len(tgt))

    def validate(self) -> list[str]:
        """Consistency problems (empty when the descriptor is sound)."""
        problems: list[str] = []
        h = self.groups(0)
        for n in range(self.cap + 1):
            expected = uct_homology(h, n, 2)
            if self.group(n, 2) != expected:
                problems.append(f"H_{n}(;Z/2) = {self.group(n, 2)} but UCT gives {expected}")
            if n == 0:
                continue
            if self.ring.rank(n) != self.group(n, 2).ngens:
                problems.append(
                    f"H^{n}(;Z/2) ring has rank {self.ring.rank(n)}, homology has {self.group(n, 2).ngens}"
                )
            if self.integral_cohomology is not None:
                stored = summands_group(self.integral_cohomology.get(n, ()))
                expected = uct_cohomology(h, n, 0)
                if stored != expected:
                    problems.append(f"H^{n}(;Z) = {stored} but UCT gives {expected}")
            red = self.reduction(n)
            rank = _rank_mod2(red)
            want = sum(1 for o, _ in self.homology(n, 0) if o == 0 or o % 2 == 0)
            if rank != want:
                problems.append(f"reduction in degree {n} has rank {rank}, expected {want}")
        for n, block in self.pairing.blocks.items():
            labels = tuple(lab for _, lab in self.homology(n, 2))
            if block.homology != labels:
                problems.append(f"pairing in degree {n} names {block.homology}, homology has {labels}")
        return problems


def _rank_mod2(m: IntMatrix) -> int:
    rows = [[x % 2 for x in r] for r in m.to_rows()]
    rank = 0
    cols = m.cols
    for c in range(cols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                rows[r] = [(a + b) % 2 for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


_LINEAR = re.compile(r"^\s*(?:(-?\d+)\s*\*\s*)?([A-Za-z0-9_'^*]+)\s*$")


def _linear_terms(text: str) -> list[tuple[int, str]]:
    """Parse ``"x + 2*y - z"`` into ``[(1, 'x'), (2, 'y'), (-1, 'z')]``; ``"0"`` is empty."""
    text = text.strip()
    if text == "0":
        return []
    out = []
    for chunk in re.split(r"\s+(?=[+-])|^(?=[+-])", text):
        chunk = chunk.strip()
        if not chunk:
            continue
        sign = 1
        if chunk[0] in "+-":
            sign = -1 if chunk[0] == "-" else 1
            chunk = chunk[1:].strip()
        m = _LINEAR.match(chunk)
        if not m:
            raise DescriptorError(f"cannot read linear term {chunk!r}")
        out.append((sign * int(m.group(1) or 1), m.group(2)))
    return out


linear_terms = _linear_terms


def _degree_table(raw: Mapping[str, str] | None, what: str) -> dict[int, tuple[Summand, ...]]:
    out = {}
    for key, val in (raw or {}).items():
        try:
            n = int(key)
        except ValueError:
            raise DescriptorError(f"{what}: degree key {key!r} is not an integer") from None
        out[n] = tuple(parse_summands(val))
    return out


def _ring_from(raw: Mapping[str, Any], name: str, modulus: int, cap: int) -> RingPresentation:
    gens = []
    for g in raw.get("generators", []):
        gens.append(Generator(g["label"], int(g["degree"]), g.get("kind", "exterior")))
    return RingPresentation(
        name, modulus, tuple(gens), int(raw.get("cap", cap)),
        dict(raw.get("sq1", {})), dict(raw.get("sq2", {})),
    )


def space_from_dict(data: Mapping[str, Any], origin: str = "<memory>") -> SpaceDescriptor:
    try:
        name = data["name"]
        cap = int(data.get("cap", 10))
        integral = _degree_table(data.get("integral_homology"), "integral_homology")
        mod2 = _degree_table(data.get("mod2_homology"), "mod2_homology")
        coh = data.get("integral_cohomology")
        integral_coh = _degree_table(coh, "integral_cohomology") if coh is not None else None
        ring = _ring_from(data.get("mod2_ring", {}), f"{name}/Z2", 2, cap)
        integral_ring = None
        if "integral_ring" in data:
            integral_ring = _ring_from(data["integral_ring"], f"{name}/Z", 0, cap)
        homology_labels = {n: [lab for _, lab in s] for n, s in mod2.items()}
        blocks = dict(PairingTable.identity(ring, {
            n: labs for n, labs in homology_labels.items()
            if n not in {int(p["degree"]) for p in data.get("pairing", [])}
        }).blocks)
        for p in data.get("pairing", []):
            n = int(p["degree"])
            blocks[n] = PairingBlock(
                tuple(p["cohomology"]), tuple(p["homology"]),
                IntMatrix.from_rows(p["matrix"], len(p["homology"])),
            )
            if list(blocks[n].cohomology) != ring.basis_labels(n):
                raise DescriptorError(
                    f"{origin}: pairing in degree {n} lists {list(blocks[n].cohomology)}, "
                    f"ring basis is {ring.basis_labels(n)}"
                )
        reduction = {}
        for key, table in (data.get("reduction") or {}).items():
            reduction[int(key)] = dict(table)
    except (KeyError, TypeError) as exc:
        raise DescriptorError(f"{origin}: missing or malformed field {exc}") from None
    except (RingError, AbelianError) as exc:
        raise DescriptorError(f"{origin}: {exc}") from None
    for n in list(integral) + list(mod2):
        if n > cap:
            raise DescriptorError(f"{origin}: degree {n} listed beyond cap {cap}")
    desc = SpaceDescriptor(
        name, cap, integral, mod2, ring, PairingTable(ring, blocks), reduction,
        integral_coh, integral_ring,
    )
    problems = desc.validate()
    if problems:
        raise DescriptorError(f"{origin}: inconsistent descriptor: " + "; ".join(problems))
    return desc


def load_space(path: str | Path) -> SpaceDescriptor:
    return space_from_dict(load_toml(path), str(path))
