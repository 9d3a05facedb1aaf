"""The 64-dimensional subalgebra of the mod-2 Steenrod algebra generated
by Sq^1, Sq^2, Sq^4, in the Milnor basis.

A basis monomial Sq(r1,r2,r3) is kept inside the profile r1 < 8, r2 < 4,
r3 < 2 and has degree r1 + 3 r2 + 7 r3 (top degree 23).  Products use
Milnor's matrix formula; the subalgebra is closed under multiplication,
and the product routine raises if a term ever escapes the profile.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .f2linalg import F2Matrix

PROFILE_BOUNDS = (8, 4, 2)  # exclusive bounds on (r1, r2, r3)
BASIS_DEGREES = (1, 3, 7)  # degree of xi_1, xi_2, xi_3 duals
TOP_DEGREE = 23
ALGEBRA_DIM = 64


class MilnorMonomial(NamedTuple):
    r1: int
    r2: int
    r3: int

    @property
    def degree(self) -> int:
        return self.r1 + 3 * self.r2 + 7 * self.r3

    def in_profile(self) -> bool:
        return (
            0 <= self.r1 < PROFILE_BOUNDS[0]
            and 0 <= self.r2 < PROFILE_BOUNDS[1]
            and 0 <= self.r3 < PROFILE_BOUNDS[2]
        )

    def __str__(self) -> str:
        return f"Sq({self.r1},{self.r2},{self.r3})"


UNIT_MONOMIAL = MilnorMonomial(0, 0, 0)


@dataclass(frozen=True)
class MilnorElement:
    """An F2-sum of profile monomials; presence in ``terms`` means coefficient 1."""

    terms: frozenset[MilnorMonomial]

    @classmethod
    def from_monomials(cls, monos: Iterable[MilnorMonomial]) -> "MilnorElement":
        acc: set[MilnorMonomial] = set()
        for m in monos:
            if m in acc:
                acc.remove(m)
            else:
                acc.add(m)
        return cls(frozenset(acc))

    @classmethod
    def sq(cls, r1: int, r2: int = 0, r3: int = 0) -> "MilnorElement":
        m = MilnorMonomial(r1, r2, r3)
        if not m.in_profile():
            raise ValueError(f"{m} outside the (8,4,2) profile")
        return cls(frozenset([m]))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int | None:
        """Common degree of the terms; None for zero, error if inhomogeneous."""
        if not self.terms:
            return None
        degs = {m.degree for m in self.terms}
        if len(degs) != 1:
            raise ValueError(f"inhomogeneous element with degrees {sorted(degs)}")
        return degs.pop()

    def __add__(self, other: "MilnorElement") -> "MilnorElement":
        return MilnorElement(self.terms ^ other.terms)

    def __mul__(self, other: "MilnorElement") -> "MilnorElement":
        return product(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(m) for m in sorted(self.terms))


ZERO = MilnorElement(frozenset())
UNIT = MilnorElement(frozenset([UNIT_MONOMIAL]))


@lru_cache(maxsize=None)
def basis_in_degree(d: int) -> tuple[MilnorMonomial, ...]:
    """Profile monomials of degree d in lexicographic (r1,r2,r3) order."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    out = []
    for r1 in range(PROFILE_BOUNDS[0]):
        for r2 in range(PROFILE_BOUNDS[1]):
            for r3 in range(PROFILE_BOUNDS[2]):
                m = MilnorMonomial(r1, r2, r3)
                if m.degree == d:
                    out.append(m)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _basis_index(d: int) -> dict[MilnorMonomial, int]:
    return {m: i for i, m in enumerate(basis_in_degree(d))}


def dim_in_degree(d: int) -> int:
    return len(basis_in_degree(d))


def monomial_index(m: MilnorMonomial) -> int:
    return _basis_index(m.degree)[m]


def _multinomial_is_odd(parts: Iterable[int]) -> bool:
    # multinomial(a1,...,ak) is odd iff the binary digits are disjoint
    acc = 0
    for p in parts:
        if acc & p:
            return False
        acc |= p
    return True


@lru_cache(maxsize=None)
def _row_decompositions(r: int) -> tuple[tuple[int, int, int, int], ...]:
    """All (x0,x1,x2,x3) with x0 + 2 x1 + 4 x2 + 8 x3 = r."""
    out = []
    for x3 in range(r // 8 + 1):
        for x2 in range((r - 8 * x3) // 4 + 1):
            for x1 in range((r - 8 * x3 - 4 * x2) // 2 + 1):
                x0 = r - 8 * x3 - 4 * x2 - 2 * x1
                out.append((x0, x1, x2, x3))
    return tuple(out)


@lru_cache(maxsize=None)
def product_monomials(a: MilnorMonomial, b: MilnorMonomial) -> frozenset[MilnorMonomial]:
    """Milnor's product formula for Sq(a) * Sq(b), summed over 3x3 matrices.

    Matrix entries x[i][j] (i row for a, j column for b) satisfy
    sum_j 2^j x[i][j] = a_i and sum_i x[i][j] = b_j; the coefficient is the
    product of diagonal multinomials mod 2 and the resulting monomial has
    t_n = sum of the n-th antidiagonal.
    """
    ra = (a.r1, a.r2, a.r3)
    sb = (b.r1, b.r2, b.r3)
    acc: set[MilnorMonomial] = set()
    for row1 in _row_decompositions(ra[0]):
        for row2 in _row_decompositions(ra[1]):
            for row3 in _row_decompositions(ra[2]):
                x = (row1, row2, row3)  # x[i-1][j], j = 0..3
                # top row from the column conditions
                x0 = [0, 0, 0, 0]
                ok = True
                for j in (1, 2, 3):
                    used = x[0][j] + x[1][j] + x[2][j]
                    x0[j] = sb[j - 1] - used
                    if x0[j] < 0:
                        ok = False
                        break
                if not ok:
                    continue
                # antidiagonal n: entries x[i][j] with i + j = n (including x0)
                full = (tuple(x0), row1, row2, row3)
                coeff_odd = True
                t = [0] * 7
                for n in range(1, 7):
                    diag = [
                        full[i][n - i]
                        for i in range(0, 4)
                        if 0 <= n - i <= 3
                    ]
                    if not _multinomial_is_odd(diag):
                        coeff_odd = False
                        break
                    t[n] = sum(diag)
                if not coeff_odd:
                    continue
                if t[4] or t[5] or t[6]:
                    raise ArithmeticError(
                        f"product {a} * {b} left the subalgebra (t={t[1:]})"
                    )
                result = MilnorMonomial(t[1], t[2], t[3])
                if not result.in_profile():
                    raise ArithmeticError(f"product {a} * {b} escaped the profile")
                if result in acc:
                    acc.remove(result)
                else:
                    acc.add(result)
    return frozenset(acc)


def product(a: MilnorElement, b: MilnorElement) -> MilnorElement:
    """Bilinear extension of the monomial product."""
    acc: set[MilnorMonomial] = set()
    for ma in a.terms:
        for mb in b.terms:
            for m in product_monomials(ma, mb):
                if m in acc:
                    acc.remove(m)
                else:
                    acc.add(m)
    return MilnorElement(frozenset(acc))


def act_matrix(d_source: int, d_target: int, x: MilnorElement) -> F2Matrix:
    """Matrix of left multiplication by x from degree d_source to d_target.

    Column j is x * basis_in_degree(d_source)[j] in the target basis.
    """
    if not x.is_zero() and x.degree() != d_target - d_source:
        raise ValueError(
            f"element degree {x.degree()} does not match {d_target} - {d_source}"
        )
    src = basis_in_degree(d_source)
    tgt_index = _basis_index(d_target)
    cols = []
    for m in src:
        bits = 0
        for xm in x.terms:
            for res in product_monomials(xm, m):
                bits ^= 1 << tgt_index[res]
        cols.append(bits)
    return F2Matrix.from_columns(cols, len(basis_in_degree(d_target)))


@lru_cache(maxsize=None)
def left_mult_columns(u: MilnorMonomial, d_source: int) -> tuple[int, ...]:
    """Columns of left multiplication by the monomial u on degree d_source.

    Entry j is the bit-packed expansion of u * basis[j] over the basis in
    degree d_source + deg(u); this is the hot path for building boundary
    matrices, so results are cached per (monomial, degree).
    """
    tgt_index = _basis_index(d_source + u.degree)
    cols = []
    for m in basis_in_degree(d_source):
        bits = 0
        for res in product_monomials(u, m):
            bits ^= 1 << tgt_index[res]
        cols.append(bits)
    return tuple(cols)


@lru_cache(maxsize=None)
def right_mult_columns(u: MilnorMonomial, d_source: int) -> tuple[int, ...]:
    """Columns of right multiplication (m -> m * u) on degree d_source."""
    tgt_index = _basis_index(d_source + u.degree)
    cols = []
    for m in basis_in_degree(d_source):
        bits = 0
        for res in product_monomials(m, u):
            bits ^= 1 << tgt_index[res]
        cols.append(bits)
    return tuple(cols)


def element_to_bits(x: MilnorElement) -> int:
    """Bit-pack a homogeneous element over the basis of its degree."""
    if x.is_zero():
        return 0
    idx = _basis_index(x.degree())
    bits = 0
    for m in x.terms:
        bits |= 1 << idx[m]
    return bits


def bits_to_element(bits: int, d: int) -> MilnorElement:
    basis = basis_in_degree(d)
    return MilnorElement(
        frozenset(basis[i] for i in range(len(basis)) if (bits >> i) & 1)
    )
