"""Hint files and the top-level driver.

A hint file is TOML naming a space, its coefficients and everything the
engine cannot derive on its own::

    space = "su.space"
    coefficients = "spin"          # or "bordism:other.hints"
    reduced = true

    [[morphism]]                   # map of spectral sequences
    name = "xi"
    target = "bsu.hints"
    shift = 1
    [morphism.integral]
    3 = { beta2 = "gamma2" }

    [[differential]]
    r = 3
    p = 8
    q = 0
    assertion = "zero"             # zero | value | unknown
    via = "xi"                     # or images = {...} / param = "k"

    [[extension]]
    n = 7
    p = 5
    via = "lambda"                 # or split = true / group = "Z"

    [[total]]
    n = 8
    group = "Z^2"

Relative paths are resolved against the hint file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from ..abelian import AbelianError, FGAbelianGroup, parse_group
from .descriptor import (
    CoefficientRow,
    DescriptorError,
    SpaceDescriptor,
    load_space,
    load_toml,
    spin_row,
)
from .engine import DifferentialHint, Pos, SSError, SSPage
from .extensions import (
    FiltrationReport,
    assemble,
    resolve_extension_via_map,
    resolve_extensions_from_total,
    resolve_forced,
    resolve_split,
)
from .morphism import SSMorphism, forces_zero
from .sequence import SSRun, run_sequence

__all__ = [
    "MorphismHint",
    "ExtensionHint",
    "HintsFile",
    "load_hints",
    "compute",
    "compute_from_hints",
    "bordism_row",
]


@dataclass(frozen=True)
class MorphismHint:
    name: str
    target: Path
    shift: int
    integral: Mapping[int, Mapping[str, str]]
    mod2: Mapping[int, Mapping[str, str]]
    justification: str = ""


@dataclass(frozen=True)
class ExtensionHint:
    n: int
    p: int
    via: str | None = None
    split: bool = False
    group: FGAbelianGroup | None = None
    justification: str = ""


@dataclass
class HintsFile:
    path: Path | None
    space: Path | None = None
    coefficients: str | None = None
    reduced: bool = True
    morphisms: dict[str, MorphismHint] = field(default_factory=dict)
    differentials: dict[tuple[int, int, int], DifferentialHint] = field(default_factory=dict)
    extensions: dict[tuple[int, int], ExtensionHint] = field(default_factory=dict)
    totals: dict[int, tuple[FGAbelianGroup, str]] = field(default_factory=dict)

    def resolve(self, rel: str) -> Path:
        base = self.path.parent if self.path else Path.cwd()
        return (base / rel).resolve()


def _degree_map(raw: Mapping[str, Any] | None, what: str) -> dict[int, dict[str, str]]:
    out = {}
    for key, table in (raw or {}).items():
        try:
            out[int(key)] = {str(k): str(v) for k, v in table.items()}
        except (ValueError, AttributeError):
            raise DescriptorError(f"{what}: bad degree entry {key!r}") from None
    return out


def _group(text: str, what: str) -> FGAbelianGroup:
    try:
        return parse_group(text)
    except AbelianError as exc:
        raise DescriptorError(f"{what}: {exc}") from None


def hints_from_dict(data: Mapping[str, Any], path: Path | None = None) -> HintsFile:
    where = str(path) if path else "<hints>"
    h = HintsFile(path.resolve() if path else None)
    try:
        if "space" in data:
            h.space = h.resolve(data["space"])
        h.coefficients = data.get("coefficients")
        h.reduced = bool(data.get("reduced", True))
        for m in data.get("morphism", []):
            name = m["name"]
            if name in h.morphisms:
                raise DescriptorError(f"{where}: morphism {name!r} defined twice")
            h.morphisms[name] = MorphismHint(
                name, h.resolve(m["target"]), int(m.get("shift", 0)),
                _degree_map(m.get("integral"), f"{where} morphism {name}"),
                _degree_map(m.get("mod2"), f"{where} morphism {name}"),
                m.get("justification", ""),
            )
        for d in data.get("differential", []):
            key = (int(d["r"]), int(d["p"]), int(d["q"]))
            if key in h.differentials:
                raise DescriptorError(f"{where}: two hints for d{key[0]} at ({key[1]},{key[2]})")
            images = d.get("images")
            if images is not None:
                images = {str(k): {str(a): int(b) for a, b in v.items()} for k, v in images.items()}
            via = d.get("via")
            if via is not None and via not in h.morphisms:
                raise DescriptorError(f"{where}: d{key[0]} at ({key[1]},{key[2]}) uses unknown morphism {via!r}")
            h.differentials[key] = DifferentialHint(
                *key, assertion=d.get("assertion", "zero"), via=via, images=images,
                param=d.get("param"), justification=d.get("justification", ""),
            )
        for e in data.get("extension", []):
            key = (int(e["n"]), int(e["p"]))
            via = e.get("via")
            if via is not None and via not in h.morphisms:
                raise DescriptorError(f"{where}: extension at n={key[0]}, p={key[1]} uses unknown morphism {via!r}")
            group = _group(e["group"], where) if "group" in e else None
            if via is None and group is None and not e.get("split", False):
                raise DescriptorError(f"{where}: extension at n={key[0]}, p={key[1]} needs via, split or group")
            h.extensions[key] = ExtensionHint(*key, via, bool(e.get("split", False)), group,
                                              e.get("justification", ""))
        for t in data.get("total", []):
            h.totals[int(t["n"])] = (_group(t["group"], where), t.get("justification", "known total"))
    except (KeyError, TypeError) as exc:
        raise DescriptorError(f"{where}: missing or malformed field {exc}") from None
    return h


def load_hints(path: str | Path) -> HintsFile:
    path = Path(path)
    return hints_from_dict(load_toml(path), path)


# -- driver -------------------------------------------------------------------

class _Context:
    """Cache of finished runs shared by the morphism targets of one computation."""

    def __init__(self) -> None:
        self.cache: dict[tuple, SSRun] = {}
        self.stack: list[Path] = []


def bordism_row(hints_path: Path, upto: int, ctx: _Context | None = None) -> CoefficientRow:
    """Coefficient row whose ``q``-th entry is the abutment of another run in degree ``q``."""
    ctx = ctx or _Context()
    run = _run_hints_file(hints_path, upto, ctx)
    rows = {}
    for q in range(upto + 1):
        report = run.reports[q]
        total = report.total
        if total is None:
            raise DescriptorError(
                f"coefficients from {hints_path.name}: degree {q} is {report.render_total()}, not a known group"
            )
        labels = total.labels or tuple(f"x{q}_{i}" for i in range(total.ngens))
        rows[q] = tuple(zip(total.orders, labels))
    return CoefficientRow(f"bordism({run.name})", rows, upto)


def _coefficients(spec: str | None, hints: HintsFile | None, upto: int, ctx: _Context) -> CoefficientRow:
    spec = spec or "spin"
    if spec == "spin":
        return spin_row()
    if spec.startswith("bordism:"):
        rel = spec.split(":", 1)[1]
        path = hints.resolve(rel) if hints and hints.path else Path(rel).resolve()
        return bordism_row(path, upto, ctx)
    raise DescriptorError(f"unknown coefficients {spec!r}; use 'spin' or 'bordism:<hints file>'")


def _run_hints_file(path: Path, upto: int, ctx: _Context) -> SSRun:
    path = Path(path).resolve()
    if path in ctx.stack:
        chain = " -> ".join(p.name for p in ctx.stack + [path])
        raise DescriptorError(f"hint files refer to each other in a cycle: {chain}")
    hints = load_hints(path)
    if hints.space is None:
        raise DescriptorError(f"{path}: a hint file used as a target must name its space")
    key = (path, upto)
    if key in ctx.cache:
        return ctx.cache[key]
    ctx.stack.append(path)
    try:
        space = load_space(hints.space)
        run = _compute(space, hints.coefficients, upto, hints.reduced, hints, ctx)
    finally:
        ctx.stack.pop()
    ctx.cache[key] = run
    return run


def compute(
    space: SpaceDescriptor,
    coefficients: str | None = "spin",
    upto: int = 8,
    reduced: bool | None = None,
    hints: HintsFile | None = None,
) -> SSRun:
    """Run the spectral sequence of ``space`` and assemble every degree up to ``upto``."""
    ctx = _Context()
    if hints and hints.path:
        ctx.stack.append(hints.path)
    if coefficients is None and hints is not None:
        coefficients = hints.coefficients
    if reduced is None:
        reduced = hints.reduced if hints else True
    return _compute(space, coefficients, upto, reduced, hints, ctx)


def compute_from_hints(path: str | Path, upto: int) -> SSRun:
    return _run_hints_file(Path(path), upto, _Context())


def _compute(space: SpaceDescriptor, coefficients: str | None, upto: int, reduced: bool,
             hints: HintsFile | None, ctx: _Context) -> SSRun:
    hints = hints or HintsFile(None)
    coeffs = _coefficients(coefficients, hints, upto, ctx)
    used_space = space if reduced else space.with_basepoint()
    shell = SSRun(space.name, used_space, coeffs, upto, reduced, [], [])
    morphisms: dict[str, SSMorphism] = {}

    def morphism(name: str) -> SSMorphism:
        if name not in morphisms:
            mh = hints.morphisms[name]
            target_hints = load_hints(mh.target)
            if target_hints.space is None:
                raise DescriptorError(f"morphism {name}: {mh.target.name} does not name a space")
            cap = load_space(target_hints.space).cap
            target = _run_hints_file(mh.target, min(upto + mh.shift, cap - 1), ctx)
            morphisms[name] = SSMorphism(name, shell, target, mh.shift, mh.integral, mh.mod2, mh.justification)
        return morphisms[name]

    def naturality(name: str, r: int, source: Pos, page: SSPage) -> bool:
        return forces_zero(morphism(name), r, source, page)

    done = run_sequence(space, coeffs, upto, reduced, hints.differentials, naturality, space.name)
    shell.pages, shell.differentials = done.pages, done.differentials
    for m in morphisms.values():
        m.check_d2()
    shell.reports = {n: assemble(shell, n) for n in range(upto + 1)}
    _resolve_all(shell, hints, morphism)
    return shell


def _resolve_all(run: SSRun, hints: HintsFile, morphism) -> None:
    for (n, p), e in hints.extensions.items():
        if n > run.upto:
            continue
        report = run.reports[n]
        if not any(s.p == p for s in report.steps) and not report.parametric:
            raise SSError(f"extension hint at n={n}, p={p}: no such step (pieces at "
                          f"{[x.pos for x in report.pieces]})")
    progress = True
    while progress:
        progress = False
        for n, report in run.reports.items():
            if report.parametric:
                continue
            progress |= resolve_forced(report)
            for (hn, p), e in hints.extensions.items():
                if hn != n:
                    continue
                if e.via is None:
                    progress |= resolve_split(report, p, e.group, e.justification or "asserted")
                    continue
                m = morphism(e.via)
                target_n = n + m.shift
                if target_n > m.target.upto:
                    raise SSError(f"extension via {e.via} needs degree {target_n}, past the target run")
                progress |= resolve_extension_via_map(report, p, m, m.target.reports[target_n])
            if n in hints.totals and not report.resolved:
                group, why = hints.totals[n]
                progress |= resolve_extensions_from_total(report, group, why)
    for n, (group, _) in hints.totals.items():
        if n <= run.upto and run.reports[n].resolved:
            got = run.reports[n].total
            if got != group:
                raise SSError(f"degree {n}: computed {got} but the hints give the total {group}")
