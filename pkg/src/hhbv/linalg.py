"""Exact linear algebra over Z, prime fields and Q.

Everything here works on small dense matrices of Python integers (or
``Fraction`` over Q).  The central routine is :func:`smith_normal_form`, which
returns the transforms as well as the invariant factors, so homology classes
can be lifted to explicit cycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CompositionNonZero, NotAChainMap
from .rings import INTEGERS, Ring


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix.  ``ncols`` is explicit so 0-row matrices keep a shape."""

    entries: tuple[tuple, ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], ncols: int | None = None) -> "Matrix":
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(rows, ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        return cls(tuple(tuple(c[i] for c in columns) for i in range(nrows)), len(columns))

    @classmethod
    def diagonal(cls, values: Sequence, nrows: int | None = None, ncols: int | None = None) -> "Matrix":
        nrows = len(values) if nrows is None else nrows
        ncols = len(values) if ncols is None else ncols
        return cls(
            tuple(tuple(values[i] if i == j and i < len(values) else 0 for j in range(ncols))
                  for i in range(nrows)),
            ncols,
        )

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix(tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return Matrix(
                tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries),
                other.ncols,
            )
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector({len(vec)})")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.entries)

    def __mul__(self, scalar):
        return Matrix(tuple(tuple(scalar * a for a in r) for r in self.entries), self.ncols)

    __rmul__ = __mul__

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.ncols,
        )

    def __neg__(self):
        return self * -1

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def reduce(self, ring: Ring) -> "Matrix":
        return Matrix(tuple(tuple(ring.reduce(a) for a in r) for r in self.entries), self.ncols)

    def is_zero(self, ring: Ring = INTEGERS) -> bool:
        return all(ring.reduce(a) == 0 for r in self.entries for a in r)

    def select_rows(self, idx: Iterable[int]) -> "Matrix":
        return Matrix(tuple(self.entries[i] for i in idx), self.ncols)

    def select_columns(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        return Matrix(tuple(tuple(r[j] for j in idx) for r in self.entries), len(idx))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix(
            tuple(r + s for r, s in zip(self.entries, other.entries)), self.ncols + other.ncols
        )

    def tolist(self) -> list[list]:
        return [list(r) for r in self.entries]

    def __repr__(self):
        if not self.entries:
            return f"Matrix(0x{self.ncols})"
        body = "; ".join(" ".join(str(a) for a in r) for r in self.entries)
        return f"Matrix([{body}])"


IntMatrix = Matrix


@dataclass(frozen=True)
class SNFResult:
    """``U @ m @ V == diag(invariant_factors, 0, ...)`` with U, V invertible over the ring."""

    invariant_factors: tuple
    U: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix
    diagonal: Matrix

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


class _Eliminator:
    """Mutable workspace that records every row/column operation on both sides."""

    def __init__(self, m: Matrix, ring: Ring):
        self.ring = ring
        self.A = [[ring.reduce(a) for a in r] for r in m.entries]
        self.R, self.C = m.nrows, m.ncols
        self.U = _eye(self.R)
        self.Ui = _eye(self.R)
        self.V = _eye(self.C)
        self.Vi = _eye(self.C)

    def _red(self, x):
        return self.ring.reduce(x)

    def row_add(self, i, j, q):
        """row_i += q * row_j."""
        if q == 0:
            return
        red = self._red
        for M in (self.A, self.U):
            Mi, Mj = M[i], M[j]
            for k in range(len(Mi)):
                Mi[k] = red(Mi[k] + q * Mj[k])
        for r in self.Ui:
            r[j] = red(r[j] - q * r[i])

    def row_swap(self, i, j):
        if i == j:
            return
        for M in (self.A, self.U):
            M[i], M[j] = M[j], M[i]
        for r in self.Ui:
            r[i], r[j] = r[j], r[i]

    def row_scale(self, i, s):
        red = self._red
        si = self.ring.inverse(s)
        for M in (self.A, self.U):
            M[i] = [red(s * a) for a in M[i]]
        for r in self.Ui:
            r[i] = red(r[i] * si)

    def col_add(self, i, j, q):
        """col_i += q * col_j."""
        if q == 0:
            return
        red = self._red
        for M in (self.A, self.V):
            for r in M:
                r[i] = red(r[i] + q * r[j])
        Vi_i, Vi_j = self.Vi[i], self.Vi[j]
        for k in range(len(Vi_j)):
            Vi_j[k] = red(Vi_j[k] - q * Vi_i[k])

    def col_swap(self, i, j):
        if i == j:
            return
        for M in (self.A, self.V):
            for r in M:
                r[i], r[j] = r[j], r[i]
        self.Vi[i], self.Vi[j] = self.Vi[j], self.Vi[i]

    def col_scale(self, i, s):
        red = self._red
        si = self.ring.inverse(s)
        for M in (self.A, self.V):
            for r in M:
                r[i] = red(r[i] * s)
        self.Vi[i] = [red(a * si) for a in self.Vi[i]]

    def result(self, factors) -> SNFResult:
        def mk(rows, n):
            return Matrix(tuple(tuple(r) for r in rows), n)

        return SNFResult(
            tuple(factors),
            mk(self.U, self.R),
            mk(self.V, self.C),
            mk(self.Ui, self.R),
            mk(self.Vi, self.C),
            mk(self.A, self.C),
        )


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _snf_integers(E: _Eliminator) -> list[int]:
    A, R, C = E.A, E.R, E.C
    factors = []
    for t in range(min(R, C)):
        while True:
            best = None
            for i in range(t, R):
                for j in range(t, C):
                    a = A[i][j]
                    if a and (best is None or abs(a) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return factors
            E.row_swap(t, best[0])
            E.col_swap(t, best[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, R):
                if A[i][t]:
                    E.row_add(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, C):
                if A[t][j]:
                    E.col_add(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, R) for j in range(t + 1, C) if A[i][j] % p), None
            )
            if bad is not None:
                E.row_add(t, bad, 1)
                continue
            break
        if A[t][t] < 0:
            E.row_scale(t, -1)
        factors.append(A[t][t])
    return factors


def _snf_field(E: _Eliminator) -> list:
    A, R, C = E.A, E.R, E.C
    ring = E.ring
    factors = []
    for t in range(min(R, C)):
        piv = next(((i, j) for j in range(t, C) for i in range(t, R) if A[i][j] != 0), None)
        if piv is None:
            break
        E.row_swap(t, piv[0])
        E.col_swap(t, piv[1])
        if A[t][t] != 1:
            E.row_scale(t, ring.inverse(A[t][t]))
        for i in range(t + 1, R):
            if A[i][t] != 0:
                E.row_add(i, t, -A[i][t])
        for j in range(t + 1, C):
            if A[t][j] != 0:
                E.col_add(j, t, -A[t][j])
        factors.append(ring.reduce(1))
    return factors


def smith_normal_form(m: Matrix, ring: Ring = INTEGERS) -> SNFResult:
    """Smith normal form with unimodular (over Z) or invertible (over a field) transforms.

    Over a field every invariant factor is 1 and the result is a rank-revealing
    two-sided elimination.
    """
    E = _Eliminator(m, ring)
    factors = _snf_integers(E) if ring.kind == "Z" else _snf_field(E)
    return E.result(factors)


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated module: free rank plus invariant factors (all > 1)."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def group_from_relations(relations: Matrix, ngens: int) -> AbelianGroup:
    """The group Z^ngens / (column span of ``relations``)."""
    if relations.ncols == 0:
        return AbelianGroup(ngens)
    snf = smith_normal_form(relations)
    torsion = tuple(d for d in snf.invariant_factors if d != 1)
    return AbelianGroup(ngens - snf.rank, torsion)


@dataclass(frozen=True)
class HomologyGroup:
    """``ker(d_out) / im(d_in)`` with explicit cycle representatives.

    ``orders[i]`` is the order of ``representatives[i]`` (0 for a free
    generator).  Torsion generators come first.
    """

    ring: Ring
    free_rank: int
    torsion: tuple[int, ...]
    representatives: tuple[tuple, ...]
    orders: tuple[int, ...]
    d_in: Matrix
    d_out: Matrix
    cycle_basis: Matrix = field(repr=False)
    _projector: Matrix = field(repr=False)

    @property
    def dimension(self) -> int:
        """Dimension over a field (equals the free rank there)."""
        return self.free_rank

    @property
    def ngens(self) -> int:
        return len(self.representatives)

    @property
    def group(self) -> AbelianGroup:
        return AbelianGroup(self.free_rank, self.torsion)

    def is_cycle(self, z) -> bool:
        return all(self.ring.reduce(a) == 0 for a in self.d_out @ z)

    def coordinates(self, z) -> tuple:
        """Coordinates of the class of the cycle ``z`` in the representative basis."""
        if not self.is_cycle(z):
            raise ValueError("vector is not a cycle")
        c = self._projector @ z
        return tuple(self._reduce_coord(a, o) for a, o in zip(c, self.orders))

    def _reduce_coord(self, a, order):
        a = self.ring.reduce(a)
        return a % order if order else a


def homology(d_in: Matrix, d_out: Matrix, ring: Ring = INTEGERS) -> HomologyGroup:
    """Homology at the middle term of ``C_{m+1} --d_in--> C_m --d_out--> C_{m-1}``."""
    n = d_out.ncols
    if d_in.nrows != n:
        raise ValueError(f"d_in has {d_in.nrows} rows, d_out has {n} columns")
    d_in = d_in.reduce(ring)
    d_out = d_out.reduce(ring)
    if not (d_out @ d_in).is_zero(ring):
        raise CompositionNonZero("d_out @ d_in != 0")

    out = smith_normal_form(d_out, ring)
    r = out.rank
    kernel = out.V.select_columns(range(r, n))
    to_kernel = out.V_inv.select_rows(range(r, n))
    s = n - r
    # im(d_in) is inside ker(d_out), so its V-coordinates vanish in the first r rows
    M = (to_kernel @ d_in).reduce(ring) if s else Matrix.zeros(0, d_in.ncols)
    inner = smith_normal_form(M, ring)
    e = inner.invariant_factors
    new_basis = (kernel @ inner.U_inv).reduce(ring) if s else kernel
    projector = (inner.U @ to_kernel).reduce(ring) if s else to_kernel

    keep, orders = [], []
    for i, d in enumerate(e):
        if not ring.is_unit(d):
            keep.append(i)
            orders.append(int(d))
    for i in range(len(e), s):
        keep.append(i)
        orders.append(0)
    torsion = tuple(o for o in orders if o)
    reps = tuple(new_basis.column(i) for i in keep)
    return HomologyGroup(
        ring=ring,
        free_rank=s - len(e),
        torsion=torsion,
        representatives=reps,
        orders=tuple(orders),
        d_in=d_in,
        d_out=d_out,
        cycle_basis=kernel,
        _projector=projector.select_rows(keep) if keep else Matrix.zeros(0, n),
    )


def induced_map_on_homology(op: Matrix, source: HomologyGroup, target: HomologyGroup) -> Matrix:
    """Matrix of the map induced by ``op`` in the representative bases.

    Column j holds the target coordinates of ``op`` applied to the j-th source
    representative, reduced modulo the target orders.
    """
    ring = target.ring
    n_src = source.d_out.ncols
    n_tgt = target.d_out.ncols
    if op.shape != (n_tgt, n_src):
        raise ValueError(f"operator shape {op.shape} does not match ({n_tgt}, {n_src})")
    op = op.reduce(ring)
    if source.cycle_basis.ncols and not (target.d_out @ (op @ source.cycle_basis)).is_zero(ring):
        raise NotAChainMap("operator does not send cycles to cycles")
    for col in (op @ source.d_in).columns() if source.d_in.ncols else []:
        if any(target.coordinates(col)):
            raise NotAChainMap("operator does not send boundaries to boundaries")
    cols = [target.coordinates(op @ rep) for rep in source.representatives]
    return Matrix.from_columns(cols, target.ngens)


def cokernel(induced: Matrix, target: HomologyGroup) -> AbelianGroup:
    """Cokernel of a map into ``target`` given in representative coordinates (Z only)."""
    g = target.ngens
    rel = Matrix.diagonal(list(target.orders), g, g).hstack(induced)
    return group_from_relations(rel, g)


def rank(m: Matrix, ring: Ring) -> int:
    return smith_normal_form(m, ring).rank


def inverse(m: Matrix, ring: Ring) -> Matrix:
    """Inverse of a square matrix; raises ValueError if it is not invertible over ``ring``."""
    n = m.nrows
    if m.ncols != n:
        raise ValueError("only square matrices can be inverted")
    if n == 0:
        return Matrix.zeros(0, 0)
    snf = smith_normal_form(m, ring)
    if snf.rank < n or not all(ring.is_unit(d) for d in snf.invariant_factors):
        raise ValueError("matrix is not invertible")
    dinv = Matrix.diagonal([ring.inverse(d) for d in snf.invariant_factors])
    return (snf.V @ dinv @ snf.U).reduce(ring)
