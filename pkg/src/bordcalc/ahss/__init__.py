"""Atiyah-Hirzebruch style spectral sequence engine for spin bordism."""

from .descriptor import (
    CoefficientRow,
    DescriptorError,
    SpaceDescriptor,
    load_space,
    parse_summands,
    space_from_dict,
    spin_row,
)
from .engine import (
    Differential,
    DifferentialHint,
    Entry,
    SSError,
    SSPage,
    build_e2,
    d2,
    hom_is_zero,
    turn_page,
)
from .extensions import (
    ExtensionStep,
    FiltrationReport,
    assemble,
    extension_candidates,
    report_from_groups,
    resolve_extension_via_map,
    resolve_extensions_from_total,
)
from .hints import HintsFile, bordism_row, compute, compute_from_hints, load_hints
from .morphism import SSMorphism, deduce_vanishing
from .render import render_kv, render_text
from .sequence import SSRun, run_sequence

__all__ = [
    "CoefficientRow",
    "DescriptorError",
    "SpaceDescriptor",
    "load_space",
    "parse_summands",
    "space_from_dict",
    "spin_row",
    "Differential",
    "DifferentialHint",
    "Entry",
    "SSError",
    "SSPage",
    "build_e2",
    "d2",
    "hom_is_zero",
    "turn_page",
    "ExtensionStep",
    "FiltrationReport",
    "assemble",
    "extension_candidates",
    "report_from_groups",
    "resolve_extension_via_map",
    "resolve_extensions_from_total",
    "HintsFile",
    "bordism_row",
    "compute",
    "compute_from_hints",
    "load_hints",
    "SSMorphism",
    "deduce_vanishing",
    "render_kv",
    "render_text",
    "SSRun",
    "run_sequence",
]
