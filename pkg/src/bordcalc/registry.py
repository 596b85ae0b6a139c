"""Tabulated data and a small language of compact Lie groups.

Holds bordism groups of a point for the classical tangential structures,
the low homotopy of BE8, the list of complex type morphisms, and the
orientability classification for 7- and 8-manifolds.  Group expressions
such as ``SU(5) x E8`` or ``SO(10)/K`` are parsed by recursive descent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, NamedTuple

import tomlkit

from .abelian import FGAbelianGroup, parse_group

__all__ = [
    "RegistryError",
    "ParseError",
    "Atom",
    "GroupExpr",
    "parse",
    "lookup_point_bordism",
    "lookup_e8_homotopy",
    "ComplexTypeRecord",
    "complex_type",
    "Verdict",
    "classify_orientability",
    "normalize_atom",
    "COUNTEREXAMPLE_7",
    "COUNTEREXAMPLE_8",
    "export_toml",
]


class RegistryError(ValueError):
    pass


class ParseError(RegistryError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


# -- bordism of a point -------------------------------------------------------

_POINT_BORDISM = {
    "SO": ["Z", "0", "0", "0", "Z", "Z/2", "0", "0", "Z^2"],
    "O": ["Z/2", "0", "Z/2", "0", "Z/2^2", "Z/2", "Z/2^3", "Z/2", "Z/2^5"],
    "Spin": ["Z", "Z/2", "Z/2", "0", "Z", "0", "0", "0", "Z^2", "Z/2^2"],
    "Spinc": ["Z", "0", "Z", "0", "Z^2", "0", "Z^2", "0", "Z^4", "0"],
    "U": ["Z", "0", "Z", "0", "Z^2", "0", "Z^3", "0", "Z^5"],
    "SU": ["Z", "Z/2", "Z/2", "0", "Z", "0", "Z", "0", "Z^2"],
}

# named generators of low spin bordism: a1 is the circle with the
# non-bounding spin structure, a2 the K3 surface
_SPIN_LABELS = {0: ("1",), 1: ("a1",), 2: ("a1^2",), 4: ("a2",)}

_STRUCTURE_ALIASES = {
    "so": "SO", "o": "O", "spin": "Spin", "spinc": "Spinc", "spin^c": "Spinc",
    "spinᶜ": "Spinc", "u": "U", "su": "SU",
}


def _group(text: str) -> FGAbelianGroup:
    # "Z/2^3" is shorthand for three copies of Z/2
    m = re.fullmatch(r"Z/(\d+)\^(\d+)", text)
    if m:
        return FGAbelianGroup.from_orders([int(m.group(1))] * int(m.group(2)))
    return parse_group(text)


def _structure(name: str) -> str:
    key = name.strip().lower()
    if key.startswith("b") and key[1:] in _STRUCTURE_ALIASES:
        key = key[1:]
    if key not in _STRUCTURE_ALIASES:
        raise RegistryError(f"unknown tangential structure {name!r}; known: {', '.join(_POINT_BORDISM)}")
    return _STRUCTURE_ALIASES[key]


def lookup_point_bordism(structure: str, n: int) -> FGAbelianGroup:
    """Bordism group of a point in degree ``n``, with generator names where known."""
    s = _structure(structure)
    row = _POINT_BORDISM[s]
    if not 0 <= n < len(row):
        raise RegistryError(f"{s} bordism of a point is tabulated for 0 <= n <= {len(row) - 1}, not {n}")
    g = _group(row[n])
    if s == "Spin" and n in _SPIN_LABELS:
        g = g.with_labels(_SPIN_LABELS[n])
    return g


def lookup_e8_homotopy(d: int, classifying: bool = True) -> FGAbelianGroup:
    """``pi_d(BE8)`` for ``0 <= d <= 15`` (Z in degree 4, else 0); ``pi_d(E8)`` is a shift."""
    shift = 0 if classifying else 1
    lo, hi = 0, 15 - shift
    if not lo <= d <= hi:
        raise RegistryError(f"homotopy of {'BE8' if classifying else 'E8'} is tabulated for {lo} <= d <= {hi}")
    return FGAbelianGroup(1) if d + shift == 4 else FGAbelianGroup()


# -- group expressions --------------------------------------------------------

_PARAMETRIC = {"SU": 1, "U": 1, "Sp": 1, "Spin": 1, "SO": 1}
_EXCEPTIONAL = ("E6", "E7", "E8", "F4", "G2")


@dataclass(frozen=True)
class Atom:
    family: str
    param: int | None = None

    def __str__(self) -> str:
        return self.family if self.param is None else f"{self.family}({self.param})"


@dataclass(frozen=True)
class GroupExpr:
    """Product of atoms, possibly divided by an unspecified finite normal subgroup."""

    atoms: tuple[Atom, ...]
    quotient: bool = False

    def __str__(self) -> str:
        return " x ".join(map(str, self.atoms)) + ("/K" if self.quotient else "")


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos:self.pos + 1]

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise ParseError(f"expected {ch!r}, found {found}", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            raise ParseError("expected an integer", self.pos)
        self.pos = m.end()
        return int(m.group())

    def atom(self) -> Atom:
        self.skip()
        start = self.pos
        m = re.compile(r"[A-Za-z][A-Za-z0-9]*").match(self.text, self.pos)
        if not m:
            raise ParseError("expected a group name", self.pos)
        name = m.group()
        if name in _EXCEPTIONAL:
            self.pos = m.end()
            if self.peek() == "(":
                raise ParseError(f"{name} takes no parameter", self.pos)
            return Atom(name)
        if name not in _PARAMETRIC:
            raise ParseError(f"unknown group {name!r}", start)
        self.pos = m.end()
        self.expect("(")
        at = self.pos
        k = self.integer()
        if k < _PARAMETRIC[name]:
            raise ParseError(f"{name}({k}) needs a parameter >= {_PARAMETRIC[name]}", at)
        self.expect(")")
        return Atom(name, k)

    def expr(self) -> GroupExpr:
        atoms = [self.atom()]
        quotient = False
        while True:
            ch = self.peek()
            if ch in ("x", "×", "*"):
                self.pos += 1
                atoms.append(self.atom())
            elif ch == "/":
                self.pos += 1
                self.expect("K")
                quotient = True
                break
            else:
                break
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.pos)
        return GroupExpr(tuple(atoms), quotient)


def parse(text: str) -> GroupExpr:
    """Parse ``ATOM {x ATOM} [/K]`` where ``ATOM := NAME [(INT)]``."""
    return _Parser(text).expr()


# -- complex type morphisms ---------------------------------------------------

class ComplexTypeRecord(NamedTuple):
    source: str
    target: str
    p: int | None


_Rule = tuple[str, str, Callable[[int], int] | None]

# patterns with the letter m stand for the whole family m >= 1
_COMPLEX_TYPE: tuple[_Rule, ...] = (
    ("E7 x U(1)", "E8", None),
    ("E6 x U(1) x U(1)", "E8", None),
    ("Spin(14) x U(1)", "E8", None),
    ("SU(8) x U(1)", "E8", None),
    ("Sp(3) x U(1)", "F4", None),
    ("Spin(7) x U(1)", "F4", None),
    ("G2", "Spin(8)", None),
    ("U(m)", "SU(m+1)", None),
    ("Spin(m)", "SO(m)", None),
    ("SU(m) x U(1)", "SU(m+1)", lambda m: 2 * m),
    ("Sp(m) x U(1)", "Sp(m+1)", lambda m: 4 * m + 2),
    ("SO(m) x U(1)", "SO(m+2)", lambda m: m - 1),
    ("Spin(m) x U(1)", "Spin(m+2)", lambda m: m - 1),
)


def _instantiate(pattern: str, m: int) -> str:
    return re.sub(r"\(m(?:\+(\d+))?\)", lambda g: f"({m + int(g.group(1) or 0)})", pattern)


def _key(e: GroupExpr) -> tuple:
    return tuple(sorted((a.family, a.param or 0) for a in e.atoms)), e.quotient


def complex_type(source: GroupExpr | str, target: GroupExpr | str) -> ComplexTypeRecord | None:
    """The listed complex type morphism ``source -> target``, if any.

    Factors may appear in any order; no isomorphisms between families are
    applied, so ``Spin(6) -> SO(6)`` is found but ``SU(4) -> SO(6)`` is not.
    """
    s = parse(source) if isinstance(source, str) else source
    t = parse(target) if isinstance(target, str) else target
    params = {a.param for a in s.atoms + t.atoms if a.param is not None}
    for src_pat, tgt_pat, p in _COMPLEX_TYPE:
        candidates = sorted(params) if "m" in src_pat else [0]
        for m in candidates:
            if m < 1 and "m" in src_pat:
                continue
            sp, tp = _instantiate(src_pat, m), _instantiate(tgt_pat, m)
            try:
                if _key(parse(sp)) == _key(s) and _key(parse(tp)) == _key(t):
                    return ComplexTypeRecord(sp, tp, p(m) if p else None)
            except ParseError:
                continue
    return None


# -- orientability ------------------------------------------------------------

COUNTEREXAMPLE_7 = "Sp(2) ×_{Sp(1)×Sp(1)} Sp(1)"
COUNTEREXAMPLE_8 = f"({COUNTEREXAMPLE_7}) × S^1"


class Verdict(NamedTuple):
    orientable_all: bool
    simply_connected_only: bool
    manifold: str | None
    culprit: Atom | None
    normalized: tuple[Atom, ...]

    def line(self) -> str:
        if not self.orientable_all:
            return f"COUNTEREXAMPLE: X = {self.manifold}, P = X x G (factor {self.culprit})"
        return "ORIENTABLE-ALL [simply-connected]" if self.simply_connected_only else "ORIENTABLE-ALL"


def normalize_atom(atom: Atom) -> tuple[Atom, bool]:
    """Simply-connected form of an atom, and whether a finite quotient was involved."""
    fam, k = atom.family, atom.param
    quotient = False
    if fam == "SO":
        if k == 1:
            raise RegistryError("SO(1) is the trivial group")
        fam, quotient = "Spin", True
        if k == 2:
            # SO(2) = U(1) itself, no cover needed
            return Atom("U", 1), False
    if fam == "Spin":
        iso = {2: Atom("U", 1), 3: Atom("SU", 2), 4: None, 5: Atom("Sp", 2), 6: Atom("SU", 4)}
        if k == 1:
            raise RegistryError("Spin(1) is not connected")
        if k in iso and iso[k] is not None:
            return iso[k], quotient
        return Atom("Spin", k), quotient
    if fam == "Sp" and k == 1:
        return Atom("SU", 2), False
    return Atom(fam, k), False


def _good(a: Atom) -> bool:
    if a.family in ("E8", "E7", "E6", "G2", "SU", "U"):
        return True
    return a.family == "Spin" and a.param % 2 == 0


def _bad(a: Atom) -> bool:
    if a.family == "F4":
        return True
    if a.family == "Sp":
        return a.param >= 2
    return a.family == "Spin" and a.param % 2 == 1 and a.param >= 5


def classify_orientability(g: GroupExpr | str, n: int) -> Verdict:
    """Orientability of gauge moduli spaces for all principal G-bundles over spin n-manifolds.

    A factor of type F4, Sp(k>=2) or Spin(odd>=5) gives the named
    counterexample; otherwise every factor is of type E8, E7, E6, G2, SU,
    U or Spin(even) and all moduli spaces are orientable, over
    simply-connected bases only when a finite quotient is involved.
    """
    if n not in (7, 8):
        raise RegistryError(f"the classification covers n = 7 and 8, not {n}")
    g = parse(g) if isinstance(g, str) else g
    normalized = []
    quotient = g.quotient
    for a in g.atoms:
        b, q = normalize_atom(a)
        quotient |= q
        normalized.append(b)
    for a, b in zip(g.atoms, normalized):
        if _bad(b):
            return Verdict(False, False, COUNTEREXAMPLE_7 if n == 7 else COUNTEREXAMPLE_8, a, tuple(normalized))
    for a, b in zip(g.atoms, normalized):
        if not _good(b):
            raise RegistryError(f"{a} is not on either classification list")
    return Verdict(True, quotient, None, None, tuple(normalized))


# -- export -------------------------------------------------------------------

def export_toml() -> str:
    """All tables as TOML, for inspection or reuse outside Python."""
    doc = tomlkit.document()
    point = tomlkit.table()
    for s, row in _POINT_BORDISM.items():
        point[s] = [str(lookup_point_bordism(s, n)) for n in range(len(row))]
    doc["point_bordism"] = point
    doc["spin_generators"] = {str(k): list(v) for k, v in _SPIN_LABELS.items()}
    doc["BE8_homotopy"] = [str(lookup_e8_homotopy(d)) for d in range(16)]
    rows = tomlkit.aot()
    for src, tgt, p in _COMPLEX_TYPE:
        t = tomlkit.table()
        t["source"], t["target"] = src, tgt
        if p is not None:
            t["p"] = {"SU": "2m", "Sp": "4m+2", "SO": "m-1", "Spin": "m-1"}[src.split("(")[0]]
        rows.append(t)
    doc["complex_type"] = rows
    doc["orientability"] = {
        "orientable": ["E8", "E7", "E6", "G2", "Spin(3)", "SU(m)", "U(m)", "Spin(2m)"],
        "counterexample": ["F4", "Sp(m+1)", "Spin(2m+3)"],
        "manifold_7": COUNTEREXAMPLE_7,
        "manifold_8": COUNTEREXAMPLE_8,
    }
    return tomlkit.dumps(doc)
