"""Canonical text output for a finished run.

Every output line is built as a record of ordered fields; the text form and
the ``key=value`` form are two spellings of the same records, so the
machine-readable output mirrors the table line for line.
"""

from __future__ import annotations

from .engine import Entry, SSPage
from .extensions import FiltrationReport
from .sequence import SSRun

__all__ = ["records", "render_text", "render_kv", "is_resolved"]

Record = tuple[str, dict[str, str]]


def _entry_record(section: str, e: Entry) -> Record:
    p, q = e.pos
    group = e.render_group()
    labels = ", ".join(e.group.labels or ())
    text = f"({p},{q}): {group}" + (f" [{labels}]" if labels else "")
    return text, {"section": section, "p": str(p), "q": str(q), "group": group, "labels": labels}


def _page_records(name: str, page: SSPage) -> list[Record]:
    out: list[Record] = [(f"[{name}]", {"section": name})]
    out.extend(_entry_record(name, e) for e in page.visible())
    return out


def _signature(page: SSPage) -> list[tuple]:
    return [(e.pos, e.render_group(), e.group.labels) for e in page.visible()]


def is_resolved(run: SSRun) -> bool:
    return all(r.resolved for r in run.reports.values())


def records(run: SSRun) -> list[Record]:
    coeffs = run.coeffs.name
    kind = "reduced" if run.reduced else "unreduced"
    out: list[Record] = [(
        f"# {run.name}, coefficients {coeffs}, {kind}, upto {run.upto}",
        {"section": "header", "space": run.name, "coefficients": coeffs, "kind": kind, "upto": str(run.upto)},
    )]
    out.extend(_page_records("E2", run.e2))
    out.append(("[differentials]", {"section": "differentials"}))
    for d in sorted(run.differentials, key=lambda d: (d.r, d.source)):
        if d.status == "computed" and d.is_zero():
            continue
        (p, q), (tp, tq) = d.source, d.target
        desc = d.describe()
        why = d.justification or d.status
        out.append((
            f"d{d.r} ({p},{q}) -> ({tp},{tq}): {desc}  ({d.status}; {why})",
            {"section": "differentials", "r": str(d.r), "p": str(p), "q": str(q),
             "status": d.status, "value": desc, "why": why},
        ))
    shown = _signature(run.e2)
    for i, page in enumerate(run.pages[1:-1], start=3):
        sig = _signature(page)
        if i == 3 or sig != shown:
            out.extend(_page_records(f"E{i}", page))
            shown = sig
    out.extend(_page_records("Einf", run.einf))
    out.append(("[abutment]", {"section": "abutment"}))
    for n in range(run.upto + 1):
        total = run.reports[n].render_total()
        out.append((f"n={n}: {total}", {"section": "abutment", "n": str(n), "group": total}))
    for n in range(run.upto + 1):
        report = run.reports[n]
        if len(report.pieces) >= 2:
            out.extend(_filtration_records(report))
    return out


def _filtration_records(report: FiltrationReport) -> list[Record]:
    n = report.n
    out: list[Record] = [(f"[filtration n={n}]", {"section": "filtration", "n": str(n)})]
    first = report.pieces[0]
    out.append((
        f"p={first.pos[0]}: {first.render_group()}",
        {"section": "filtration", "n": str(n), "p": str(first.pos[0]), "piece": first.render_group()},
    ))
    for piece, step in zip(report.pieces[1:], report.steps):
        result = str(step.result) if step.result is not None else "?"
        kind = step.method
        if step.resolved and step.method != "forced":
            kind += ", split" if step.split else ", nontrivial"
        why = f"; {step.justification}" if step.justification else ""
        out.append((
            f"p={step.p}: {piece.render_group()} -> F={result} ({kind}{why})",
            {"section": "filtration", "n": str(n), "p": str(step.p), "piece": piece.render_group(),
             "level": result, "method": step.method, "why": step.justification},
        ))
    total = report.render_total()
    out.append((f"n={n}: {total}", {"section": "filtration", "n": str(n), "group": total}))
    return out


def render_text(run: SSRun) -> str:
    return "\n".join(text for text, _ in records(run)) + "\n"


def _kv_value(v: str) -> str:
    if v == "" or any(c in v for c in " =\"\\"):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return v


def render_kv(run: SSRun) -> str:
    lines = []
    for _, fields in records(run):
        lines.append(" ".join(f"{k}={_kv_value(v)}" for k, v in fields.items()))
    return "\n".join(lines) + "\n"
