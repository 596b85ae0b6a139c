"""Exact arithmetic for finitely generated abelian groups.

Everything is built on a deterministic Smith normal form over Python
integers.  Groups are stored in invariant-factor form ``Z^r + Z/d1 + ...``
with optional generator labels; subquotients of lattices are the workhorse
used by the spectral-sequence engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterable, Mapping, NamedTuple, Sequence

__all__ = [
    "IntMatrix",
    "FGAbelianGroup",
    "GroupMorphism",
    "Subquotient",
    "AbelianError",
    "smith_normal_form",
    "cokernel",
    "lattice_basis",
    "kernel_basis",
    "solve_in_lattice",
    "direct_sum",
    "tensor_tor_hom_ext",
    "uct_cohomology",
    "uct_homology",
    "parse_group",
    "format_vector",
]


class AbelianError(ValueError):
    """Raised for inconsistent group data."""


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise AbelianError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise AbelianError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise AbelianError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        cols = [list(c) for c in columns]
        if any(len(c) != rows for c in cols):
            raise AbelianError("column length mismatch")
        return cls(rows, len(cols), tuple(cols[j][i] for i in range(rows) for j in range(len(cols))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = v
        return cls.from_rows(out, cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise AbelianError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        a, b = self.to_rows(), other.to_rows()
        out = [
            [sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntMatrix.from_rows(out, other.cols)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise AbelianError("vector length mismatch")
        return tuple(sum(self[i, j] * v[j] for j in range(self.cols)) for i in range(self.rows))

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise AbelianError("hstack row mismatch")
        return IntMatrix.from_columns(self.columns() + other.columns(), self.rows)

    def is_zero(self) -> bool:
        return not any(self.entries)


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D`` and ``U``, ``V`` unimodular.

    Pivots are the smallest nonzero absolute value in the active block,
    ties going to the lowest (row, column) index.
    """
    u, d, v, _, _ = _snf_full(m)
    return u, d, v


def _snf_full(m: IntMatrix):
    rows, cols = m.rows, m.cols
    a = m.to_rows()
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    u_inv = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]
    v_inv = [[int(i == j) for j in range(cols)] for i in range(cols)]

    # row op: row_i += c * row_k   (U <- E U, U_inv <- U_inv E^-1)
    def add_row(i: int, k: int, c: int) -> None:
        if c == 0:
            return
        a[i] = [x + c * y for x, y in zip(a[i], a[k])]
        u[i] = [x + c * y for x, y in zip(u[i], u[k])]
        for r in u_inv:
            r[k] -= c * r[i]

    def swap_rows(i: int, k: int) -> None:
        if i == k:
            return
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]
        for r in u_inv:
            r[i], r[k] = r[k], r[i]

    def neg_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in u_inv:
            r[i] = -r[i]

    # column op: col_j += c * col_k   (V <- V E, V_inv <- E^-1 V_inv)
    def add_col(j: int, k: int, c: int) -> None:
        if c == 0:
            return
        for r in a:
            r[j] += c * r[k]
        for r in v:
            r[j] += c * r[k]
        v_inv[k] = [x - c * y for x, y in zip(v_inv[k], v_inv[j])]

    def swap_cols(j: int, k: int) -> None:
        if j == k:
            return
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]
        v_inv[j], v_inv[k] = v_inv[k], v_inv[j]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = abs(a[i][j])
                    if x and (best is None or x < best[0]):
                        best = (x, i, j)
            if best is None:
                return _pack(u, a, v, u_inv, v_inv, rows, cols)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            if p < 0:
                neg_row(t)
            break
    return _pack(u, a, v, u_inv, v_inv, rows, cols)


def _pack(u, a, v, u_inv, v_inv, rows, cols):
    return (
        IntMatrix.from_rows(u, rows),
        IntMatrix.from_rows(a, cols),
        IntMatrix.from_rows(v, cols),
        IntMatrix.from_rows(u_inv, rows),
        IntMatrix.from_rows(v_inv, cols),
    )


def _diagonal(d: IntMatrix) -> list[int]:
    return [d[i, i] for i in range(min(d.rows, d.cols))]


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """A basis (as columns) of the lattice spanned by the columns of ``gens``."""
    u, d, _, u_inv, _ = _snf_full(gens)
    diag = [x for x in _diagonal(d) if x]
    cols = [[u_inv[i, k] * diag[k] for i in range(gens.rows)] for k in range(len(diag))]
    cols = [_canonical_sign(c) for c in cols]
    return IntMatrix.from_columns(cols, gens.rows)


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Basis (as columns) of ``{x : m x = 0}``."""
    _, d, v, _, _ = _snf_full(m)
    rank = sum(1 for x in _diagonal(d) if x)
    cols = [_canonical_sign(list(v.column(j))) for j in range(rank, m.cols)]
    return IntMatrix.from_columns(cols, m.cols)


def solve_in_lattice(basis: IntMatrix, target: IntMatrix) -> IntMatrix | None:
    """Solve ``basis @ X == target`` exactly; ``None`` when some column is outside the lattice.

    ``basis`` must have independent columns.
    """
    u, d, v, _, _ = _snf_full(basis)
    diag = _diagonal(d)
    out_cols = []
    for col in target.columns():
        y = u.apply(col)
        z = []
        for i, yi in enumerate(y):
            di = diag[i] if i < len(diag) else 0
            if di == 0:
                if yi != 0:
                    return None
                if i < basis.cols:
                    z.append(0)
                continue
            if yi % di:
                return None
            z.append(yi // di)
        z = z[: basis.cols] + [0] * (basis.cols - len(z))
        out_cols.append(v.apply(z))
    return IntMatrix.from_columns(out_cols, basis.cols)


def _canonical_sign(col: list[int]) -> list[int]:
    for x in col:
        if x:
            return col if x > 0 else [-y for y in col]
    return col


def _normalize_orders(orders: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    orders = [abs(int(o)) for o in orders]
    free = sum(1 for o in orders if o == 0)
    finite = [o for o in orders if o > 1]
    if not finite:
        return free, ()
    _, d, _ = smith_normal_form(IntMatrix.diagonal(finite))
    return free, tuple(x for x in _diagonal(d) if x > 1)


@dataclass(frozen=True)
class FGAbelianGroup:
    """``Z^free_rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk``.

    ``labels`` names the generators (free ones first); it does not take part
    in equality, which is isomorphism of the underlying groups.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise AbelianError("negative free rank")
        if any(t < 2 for t in self.torsion):
            raise AbelianError(f"torsion entries must be >= 2, got {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise AbelianError(f"divisibility chain fails for {self.torsion}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.ngens:
                raise AbelianError(f"{len(self.labels)} labels for {self.ngens} generators")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> FGAbelianGroup:
        """Normalize an arbitrary direct sum of cyclic groups (0 means ``Z``)."""
        free, torsion = _normalize_orders(orders)
        return cls(free, torsion)

    @classmethod
    def cyclic(cls, order: int, label: str | None = None) -> FGAbelianGroup:
        labels = None if label is None else (label,)
        if order == 0:
            return cls(1, (), labels)
        if order == 1:
            return cls()
        return cls(0, (order,), labels)

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def orders(self) -> tuple[int, ...]:
        return (0,) * self.free_rank + self.torsion

    @property
    def is_zero(self) -> bool:
        return self.ngens == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_torsion_free(self) -> bool:
        return not self.torsion

    @property
    def order(self) -> int:
        if self.free_rank:
            raise AbelianError("infinite group has no finite order")
        return prod(self.torsion)

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    def normalized(self) -> FGAbelianGroup:
        return FGAbelianGroup(self.free_rank, _normalize_orders(self.torsion)[1], self.labels)

    def with_labels(self, labels: Sequence[str] | None) -> FGAbelianGroup:
        return FGAbelianGroup(self.free_rank, self.torsion, None if labels is None else tuple(labels))

    def unlabeled(self) -> FGAbelianGroup:
        return FGAbelianGroup(self.free_rank, self.torsion)

    def relations(self) -> IntMatrix:
        """Relation lattice generators (columns) in generator coordinates."""
        return IntMatrix.diagonal(self.orders)

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % o if o else x for x, o in zip(v, self.orders))

    def elements(self) -> Iterable[tuple[int, ...]]:
        if self.free_rank:
            raise AbelianError("cannot enumerate an infinite group")
        from itertools import product

        return product(*(range(d) for d in self.torsion))

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def describe(self) -> str:
        """Group with labels, e.g. ``Z/2 [a1*beta3bar]``."""
        if self.labels and self.ngens:
            return f"{self} [{', '.join(self.labels)}]"
        return str(self)


def parse_group(text: str) -> FGAbelianGroup:
    """Inverse of ``str(FGAbelianGroup)``; also accepts unnormalized sums like ``Z/2 + Z/3``."""
    text = text.strip()
    if text in ("0", ""):
        return FGAbelianGroup()
    orders: list[int] = []
    for part in text.split("+"):
        part = part.strip().replace(" ", "")
        if part == "Z":
            orders.append(0)
        elif part.startswith("Z^"):
            orders.extend([0] * int(part[2:]))
        elif part.startswith("Z/"):
            body = part[2:]
            if "^" in body:
                d, k = body.split("^")
                orders.extend([int(d)] * int(k))
            else:
                orders.append(int(body))
        else:
            raise AbelianError(f"cannot parse group term {part!r}")
    if any(o < 0 or o == 1 for o in orders):
        raise AbelianError(f"bad cyclic order in {text!r}")
    return FGAbelianGroup.from_orders(orders)


def cokernel(m: IntMatrix) -> FGAbelianGroup:
    """Cokernel of ``m: Z^cols -> Z^rows`` (columns are relations on the row generators)."""
    _, d, _ = smith_normal_form(m)
    diag = _diagonal(d)
    diag = diag + [0] * (m.rows - len(diag))
    return FGAbelianGroup.from_orders(x for x in diag if x != 1)


def direct_sum(*groups: FGAbelianGroup) -> FGAbelianGroup:
    return FGAbelianGroup.from_orders(o for g in groups for o in g.orders)


def format_vector(v: Sequence[int], labels: Sequence[str]) -> str:
    """Render an integer combination of labelled generators, ``0`` if empty."""
    terms = []
    for c, lab in zip(v, labels):
        if c == 0:
            continue
        if "+" in lab or (lab.startswith("-")):
            lab = f"({lab})"
        coeff = "" if c == 1 else "-" if c == -1 else f"{c}*"
        terms.append(f"{coeff}{lab}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


@dataclass(frozen=True)
class Subquotient:
    """The group ``L / B`` for lattices ``B <= L <= Z^n``.

    ``generators`` holds ambient vectors of normalized generators (free ones
    first, then torsion by increasing order) matching ``group``.
    """

    lattice: IntMatrix
    boundaries: IntMatrix
    group: FGAbelianGroup
    generators: IntMatrix
    _u: IntMatrix
    _keep: tuple[int, ...]

    @classmethod
    def build(cls, lattice_gens: IntMatrix, boundary_gens: IntMatrix,
              ambient_labels: Sequence[str] | None = None) -> Subquotient:
        n = lattice_gens.rows
        if boundary_gens.rows != n:
            raise AbelianError("ambient dimension mismatch")
        basis = lattice_basis(lattice_gens)
        bnd = lattice_basis(boundary_gens) if boundary_gens.cols else IntMatrix.zeros(n, 0)
        coords = solve_in_lattice(basis, bnd) if bnd.cols else IntMatrix.zeros(basis.cols, 0)
        if coords is None:
            raise AbelianError("boundary lattice is not contained in the cycle lattice")
        k = basis.cols
        if coords.cols == 0:
            coords = IntMatrix.zeros(k, 0)
        u, d, _, u_inv, _ = _snf_full(coords)
        diag = _diagonal(d)
        diag = diag + [0] * (k - len(diag))
        free_idx = [i for i in range(k) if diag[i] == 0]
        tors_idx = [i for i in range(k) if diag[i] > 1]
        keep = tuple(free_idx + tors_idx)
        gens_cols = []
        for i in keep:
            col = basis.apply(u_inv.column(i))
            gens_cols.append(list(col))
        gens = IntMatrix.from_columns(gens_cols, n)
        labels = None
        if ambient_labels is not None:
            labels = tuple(format_vector(c, ambient_labels) for c in gens.columns())
        group = FGAbelianGroup(len(free_idx), tuple(diag[i] for i in tors_idx), labels)
        return cls(basis, bnd, group, gens, u, keep)

    def contains(self, v: Sequence[int]) -> bool:
        return solve_in_lattice(self.lattice, IntMatrix.from_columns([list(v)], self.lattice.rows)) is not None

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of the class of ``v`` in the normalized generators."""
        sol = solve_in_lattice(self.lattice, IntMatrix.from_columns([list(v)], self.lattice.rows))
        if sol is None:
            raise AbelianError(f"vector {tuple(v)} is not in the lattice")
        y = self._u.apply(sol.column(0))
        return self.group.reduce([y[i] for i in self._keep])

    def coordinate_matrix(self, vectors: IntMatrix) -> IntMatrix:
        return IntMatrix.from_columns([self.coordinates(c) for c in vectors.columns()], self.group.ngens)


@dataclass(frozen=True)
class GroupMorphism:
    """Homomorphism between groups given on their generators.

    Column ``j`` of ``matrix`` is the image of source generator ``j`` in
    target generator coordinates.
    """

    source: FGAbelianGroup
    target: FGAbelianGroup
    matrix: IntMatrix

    def __post_init__(self) -> None:
        m = self.matrix
        if m.rows != self.target.ngens or m.cols != self.source.ngens:
            raise AbelianError(
                f"matrix is {m.rows}x{m.cols}, expected {self.target.ngens}x{self.source.ngens}"
            )
        reduced = [self.target.reduce(c) for c in m.columns()]
        object.__setattr__(self, "matrix", IntMatrix.from_columns(reduced, m.rows))
        for j, d in enumerate(self.source.orders):
            if d == 0:
                continue
            for i, e in enumerate(self.target.orders):
                x = d * self.matrix[i, j]
                if (e == 0 and x != 0) or (e and x % e):
                    raise AbelianError(
                        f"generator {j} of order {d} cannot map to coefficient "
                        f"{self.matrix[i, j]} on a generator of order {e or 'inf'}"
                    )

    @classmethod
    def zero(cls, source: FGAbelianGroup, target: FGAbelianGroup) -> GroupMorphism:
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens))

    @classmethod
    def identity(cls, group: FGAbelianGroup) -> GroupMorphism:
        return cls(group, group, IntMatrix.identity(group.ngens))

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(self.matrix.apply(v))

    def compose(self, first: GroupMorphism) -> GroupMorphism:
        """``self`` after ``first``."""
        if first.target != self.target and first.target.ngens != self.source.ngens:
            raise AbelianError("composition shape mismatch")
        return GroupMorphism(first.source, self.target, self.matrix @ first.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def kernel(self) -> FGAbelianGroup:
        return self._kernel_subquotient().group

    def _kernel_subquotient(self) -> Subquotient:
        s, t = self.source.ngens, self.target.ngens
        big = self.matrix.hstack(self.target.relations()) if t else IntMatrix.zeros(0, s)
        if t:
            ker = kernel_basis(big)
            proj = IntMatrix.from_columns([c[:s] for c in ker.columns()], s)
        else:
            proj = IntMatrix.identity(s)
        return Subquotient.build(proj.hstack(self.source.relations()), self.source.relations())

    def image(self) -> FGAbelianGroup:
        t = self.target.ngens
        return Subquotient.build(
            self.matrix.hstack(self.target.relations()), self.target.relations()
        ).group if t else FGAbelianGroup()

    def cokernel(self) -> FGAbelianGroup:
        return cokernel(self.matrix.hstack(self.target.relations())) if self.target.ngens else FGAbelianGroup()

    def is_injective(self) -> bool:
        return self.kernel().is_zero

    def is_surjective(self) -> bool:
        return self.cokernel().is_zero

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()


class UCTParts(NamedTuple):
    tensor: FGAbelianGroup
    tor: FGAbelianGroup
    hom: FGAbelianGroup
    ext: FGAbelianGroup


def tensor_tor_hom_ext(g: FGAbelianGroup, m: int) -> UCTParts:
    """``G (x) A``, ``Tor(G, A)``, ``Hom(G, A)``, ``Ext(G, A)`` for ``A = Z`` (m=0) or ``Z/m``."""
    if m < 0 or m == 1:
        raise AbelianError("coefficient must be Z (0) or Z/m with m >= 2")
    tensor, tor, hom, ext = [], [], [], []
    for d in g.orders:
        if d == 0:
            tensor.append(m)
            hom.append(m)
        elif m == 0:
            tensor.append(d)
            ext.append(d)
        else:
            c = gcd(d, m)
            tensor.append(c)
            tor.append(c)
            hom.append(c)
            ext.append(c)
    f = FGAbelianGroup.from_orders
    return UCTParts(f(x for x in tensor if x != 1), f(x for x in tor if x != 1),
                    f(x for x in hom if x != 1), f(x for x in ext if x != 1))


def _degree(h: Mapping[int, FGAbelianGroup], n: int) -> FGAbelianGroup:
    if n < 0:
        return FGAbelianGroup()
    if n not in h:
        raise AbelianError(f"homology in degree {n} is missing")
    return h[n]


def uct_cohomology(h: Mapping[int, FGAbelianGroup], n: int, m: int = 0) -> FGAbelianGroup:
    """``H^n(-; A) = Hom(H_n, A) + Ext(H_{n-1}, A)`` from integral homology."""
    top = tensor_tor_hom_ext(_degree(h, n), m).hom
    low = tensor_tor_hom_ext(_degree(h, n - 1), m).ext
    return direct_sum(top, low)


def uct_homology(h: Mapping[int, FGAbelianGroup], n: int, m: int) -> FGAbelianGroup:
    """``H_n(-; A) = H_n (x) A + Tor(H_{n-1}, A)`` from integral homology."""
    top = tensor_tor_hom_ext(_degree(h, n), m).tensor
    low = tensor_tor_hom_ext(_degree(h, n - 1), m).tor
    return direct_sum(top, low)
