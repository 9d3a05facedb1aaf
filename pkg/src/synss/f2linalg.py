"""Exact linear algebra over the two-element field.

Matrices store one Python int per row, bit ``j`` holding the entry in
column ``j``; all row operations are word-level XOR.  Everything here is
deterministic: pivots are always chosen at the lowest-index unused
column, so reduced forms, kernels and preimages are reproducible
bit-for-bit across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


def _mask_parity(x: int) -> int:
    return bin(x).count("1") & 1


@dataclass(frozen=True)
class F2Vector:
    """A vector over GF(2); bit ``i`` of ``bits`` is entry ``i``."""

    length: int
    bits: int

    @classmethod
    def from_entries(cls, entries: Iterable[int]) -> "F2Vector":
        entries = list(entries)
        bits = 0
        for i, e in enumerate(entries):
            if e & 1:
                bits |= 1 << i
        return cls(len(entries), bits)

    @classmethod
    def zero(cls, length: int) -> "F2Vector":
        return cls(length, 0)

    def entry(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"entry {i} out of range for length {self.length}")
        return (self.bits >> i) & 1

    def entries(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]

    def is_zero(self) -> bool:
        return self.bits == 0

    def __add__(self, other: "F2Vector") -> "F2Vector":
        if self.length != other.length:
            raise ValueError("vector length mismatch")
        return F2Vector(self.length, self.bits ^ other.bits)


@dataclass(frozen=True)
class F2Matrix:
    """A rows x cols matrix over GF(2), bit-packed one int per row."""

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != self.rows:
            raise ValueError("row count does not match bit rows")
        mask = (1 << self.cols) - 1
        for r in self.bits:
            if r & ~mask:
                raise ValueError("row has bits outside column range")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "F2Matrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        bits = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            b = 0
            for j, e in enumerate(row):
                if e & 1:
                    b |= 1 << j
            bits.append(b)
        return cls(len(rows), cols, tuple(bits))

    @classmethod
    def from_row_bits(cls, bits: Sequence[int], rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols, tuple(bits))

    @classmethod
    def from_columns(cls, columns: Sequence[int], rows: int) -> "F2Matrix":
        out = [0] * rows
        for j, c in enumerate(columns):
            i = 0
            while c:
                if c & 1:
                    out[i] |= 1 << j
                c >>= 1
                i += 1
        return cls(rows, len(columns), tuple(out))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i},{j}) out of range for {self.rows}x{self.cols}")
        return (self.bits[i] >> j) & 1

    def row(self, i: int) -> F2Vector:
        return F2Vector(self.cols, self.bits[i])

    def column_bits(self, j: int) -> int:
        out = 0
        for i, r in enumerate(self.bits):
            if (r >> j) & 1:
                out |= 1 << i
        return out

    def columns(self) -> list[int]:
        return [self.column_bits(j) for j in range(self.cols)]

    def transpose(self) -> "F2Matrix":
        return F2Matrix.from_columns(list(self.bits), self.cols)

    def mul_vec(self, v: F2Vector) -> F2Vector:
        if v.length != self.cols:
            raise ValueError(f"matrix has {self.cols} columns, vector length {v.length}")
        out = 0
        for i, r in enumerate(self.bits):
            if _mask_parity(r & v.bits):
                out |= 1 << i
        return F2Vector(self.rows, out)

    def mul_bits(self, vbits: int) -> int:
        out = 0
        for i, r in enumerate(self.bits):
            if _mask_parity(r & vbits):
                out |= 1 << i
        return out

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise ValueError("inner dimension mismatch")
        cols = [self.mul_bits(c) for c in other.columns()]
        return F2Matrix.from_columns(cols, self.rows)

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.bits)


def rref(m: F2Matrix) -> tuple[F2Matrix, tuple[int, ...]]:
    """Reduced row-echelon form and the ordered pivot columns.

    Pivot tie-breaking is always the lowest-index unused column; the row
    space is preserved and the pivot count equals the rank.
    """
    rows = list(m.bits)
    pivots = []
    r = 0
    for c in range(m.cols):
        bit = 1 << c
        pivot = None
        for i in range(r, m.rows):
            if rows[i] & bit:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(m.rows):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return F2Matrix(m.rows, m.cols, tuple(rows)), tuple(pivots)


def rank(m: F2Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: F2Matrix) -> list[F2Vector]:
    """A deterministic basis of the right kernel {v : m v = 0}.

    Returns cols - rank(m) independent vectors, one per free column, in
    ascending free-column order.
    """
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        bits = 1 << f
        for r_idx, p in enumerate(pivots):
            if (reduced.bits[r_idx] >> f) & 1:
                bits |= 1 << p
        basis.append(F2Vector(m.cols, bits))
    return basis


def solve_preimage(m: F2Matrix, b: F2Vector) -> Optional[F2Vector]:
    """One solution x of m x = b, or None when b is not in the column span."""
    if b.length != m.rows:
        raise ValueError(f"matrix has {m.rows} rows, vector length {b.length}")
    solver = ColumnSolver(m.columns(), m.rows)
    x = solver.solve(b.bits)
    if x is None:
        return None
    return F2Vector(m.cols, x)


class BitBasis:
    """Incremental row-echelon span of int-packed vectors.

    add() inserts a vector unless dependent; reduce() returns the residue
    of a vector modulo the span.  Used for image accumulation, membership
    tests and canonical subspace bases.
    """

    def __init__(self, vectors: Iterable[int] = ()):  # noqa: D401
        self._rows: dict[int, int] = {}  # pivot bit -> reduced row
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        while v:
            p = v & -v
            row = self._rows.get(p)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v == 0:
            return False
        p = v & -v
        # keep rows fully reduced against each other
        for q, row in list(self._rows.items()):
            if row & p:
                self._rows[q] = row ^ v
        self._rows[p] = v
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def basis(self) -> list[int]:
        return [self._rows[p] for p in sorted(self._rows)]

    @property
    def dim(self) -> int:
        return len(self._rows)

    def copy(self) -> "BitBasis":
        out = BitBasis()
        out._rows = dict(self._rows)
        return out


class ColumnSolver:
    """Cached elimination for repeated solves of M x = b with fixed M.

    M is given by its columns (ints over row positions).  Each solve costs
    one sweep over the cached echelon rows.
    """

    def __init__(self, columns: Sequence[int], nrows: int):
        self.ncols = len(columns)
        self.nrows = nrows
        self._rows: dict[int, tuple[int, int]] = {}  # pivot -> (col part, combo part)
        self._kernel: list[int] = []
        for j, col in enumerate(columns):
            v, combo = col, 1 << j
            while v:
                p = v & -v
                row = self._rows.get(p)
                if row is None:
                    break
                v ^= row[0]
                combo ^= row[1]
            if v:
                self._rows[v & -v] = (v, combo)
            else:
                self._kernel.append(combo)

    def solve(self, b: int) -> Optional[int]:
        combo = 0
        while b:
            p = b & -b
            row = self._rows.get(p)
            if row is None:
                return None
            b ^= row[0]
            combo ^= row[1]
        return combo

    def in_image(self, b: int) -> bool:
        return self.solve(b) is not None

    def kernel_combos(self) -> list[int]:
        """Combinations of columns that sum to zero (right kernel of M)."""
        return list(self._kernel)

    @property
    def rank(self) -> int:
        return len(self._rows)
