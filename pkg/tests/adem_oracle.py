"""Independent multiplication oracle for the Steenrod algebra at p=2.

This model never touches the shipped Milnor product formula.  It works in
the admissible basis with Adem-relation rewriting, and converts between
the admissible and Milnor bases through the faithful action on a
polynomial algebra F2[x1..xn] (Cartan formula only).  Keeping every path
distinct from the production code is the whole point: agreement between
the two multiplications is evidence, not tautology.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from synss.f2linalg import ColumnSolver


def binom_odd(n: int, k: int) -> bool:
    if k < 0 or k > n:
        return False
    return (k & (n - k)) == 0


# ---------------------------------------------------------------------------
# admissible words and Adem rewriting

Word = tuple[int, ...]  # Sq^{i1} Sq^{i2} ... with all ik >= 1


def is_admissible(word: Word) -> bool:
    return all(word[i] >= 2 * word[i + 1] for i in range(len(word) - 1))


def _xor_into(acc: set, items) -> None:
    for it in items:
        if it in acc:
            acc.remove(it)
        else:
            acc.add(it)


@lru_cache(maxsize=None)
def adem_normalize(word: Word) -> frozenset[Word]:
    """Rewrite a word of Sq's as an F2-sum of admissible words."""
    word = tuple(i for i in word if i != 0)
    if is_admissible(word):
        return frozenset([word]) if word or True else frozenset()
    for pos in range(len(word) - 1):
        a, b = word[pos], word[pos + 1]
        if a < 2 * b:
            acc: set[Word] = set()
            for c in range(0, a // 2 + 1):
                if binom_odd(b - c - 1, a - 2 * c):
                    middle = (a + b - c, c) if c else (a + b - c,)
                    _xor_into(
                        acc,
                        adem_normalize(word[:pos] + middle + word[pos + 2 :]),
                    )
            return frozenset(acc)
    raise AssertionError("unreachable")


def adem_product(u: frozenset[Word], v: frozenset[Word]) -> frozenset[Word]:
    acc: set[Word] = set()
    for wu in u:
        for wv in v:
            _xor_into(acc, adem_normalize(wu + wv))
    return frozenset(acc)


@lru_cache(maxsize=None)
def admissible_words(degree: int) -> tuple[Word, ...]:
    if degree == 0:
        return ((),)
    out = []

    def extend(acc: Word, last: int, remaining: int):
        if remaining == 0:
            out.append(acc)
            return
        for nxt in range(1, min(last // 2, remaining) + 1):
            extend(acc + (nxt,), nxt, remaining - nxt)

    for first in range(1, degree + 1):
        extend((first,), first, degree - first)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# action on F2[x1..xn]; monomials are exponent tuples, coefficients in F2

Poly = frozenset  # of exponent tuples


def sq_on_poly(k: int, poly: Poly) -> Poly:
    """Total Cartan expansion of Sq^k on a polynomial.

    All exponents in play are powers of two (the action starts from
    x1...xn and binom(2^m, j) is odd only for j in {0, 2^m}), so Sq^k
    doubles the exponents of a sub-multiset summing to k.
    """
    acc: set[tuple[int, ...]] = set()
    for mono in poly:
        n = len(mono)

        def distribute(pos: int, remaining: int, current: tuple[int, ...]):
            if remaining == 0:
                rest = current + mono[pos:]
                if rest in acc:
                    acc.remove(rest)
                else:
                    acc.add(rest)
                return
            if pos == n:
                return
            e = mono[pos]
            distribute(pos + 1, remaining, current + (e,))
            if 0 < e <= remaining:
                distribute(pos + 1, remaining - e, current + (2 * e,))

        distribute(0, k, ())
    return frozenset(acc)


def word_action_on_product(word: Word, n: int) -> Poly:
    """Apply Sq^{i1}...Sq^{ik} to x1 x2 ... xn, rightmost factor first."""
    poly: Poly = frozenset([(1,) * n])
    for k in reversed(word):
        poly = sq_on_poly(k, poly)
    return poly


MilnorTuple = tuple[int, ...]  # (r1, r2, ...) with trailing zeros stripped


@lru_cache(maxsize=None)
def milnor_tuples(degree: int) -> tuple[MilnorTuple, ...]:
    """All Milnor monomials of the full Steenrod algebra in this degree."""
    weights = [1]
    w = 2
    while 2**w - 1 <= degree:
        weights.append(2**w - 1)
        w += 1
    out = []

    def build(idx: int, remaining: int, acc: tuple[int, ...]):
        if idx == len(weights):
            if remaining == 0:
                t = acc
                while t and t[-1] == 0:
                    t = t[:-1]
                out.append(t)
            return
        wgt = weights[idx]
        for r in range(remaining // wgt + 1):
            build(idx + 1, remaining - r * wgt, acc + (r,))

    build(0, degree, ())
    return tuple(sorted(set(out)))


def canonical_monomial(r: MilnorTuple, n: int) -> tuple[int, ...]:
    """The descending-exponent representative of the orbit of Sq(r)(x1..xn)."""
    exps = []
    for j in range(len(r), 0, -1):
        exps.extend([1 << j] * r[j - 1])
    exps.extend([1] * (n - sum(r)))
    return tuple(exps)


def admissible_to_milnor(word: Word) -> frozenset[MilnorTuple]:
    """Milnor-basis expansion of an admissible word via the polynomial action."""
    n = sum(word)
    if n == 0:
        return frozenset([()])
    poly = word_action_on_product(word, n)
    out = set()
    for r in milnor_tuples(n):
        if sum(r) <= n and canonical_monomial(r, n) in poly:
            out.add(r)
    return frozenset(out)


@lru_cache(maxsize=None)
def _conversion(degree: int):
    """Per-degree basis-change data between admissible words and Milnor tuples."""
    words = admissible_words(degree)
    tuples = milnor_tuples(degree)
    assert len(words) == len(tuples), (degree, len(words), len(tuples))
    t_index = {t: i for i, t in enumerate(tuples)}
    # column j = Milnor expansion of word j, bit-packed over tuples
    cols = []
    for w in words:
        bits = 0
        for t in admissible_to_milnor(w):
            bits |= 1 << t_index[t]
        cols.append(bits)
    solver = ColumnSolver(cols, len(tuples))
    return words, tuples, t_index, solver


def milnor_to_admissible(r: MilnorTuple) -> frozenset[Word]:
    degree = sum(ri * (2 ** (i + 1) - 1) for i, ri in enumerate(r))
    words, tuples, t_index, solver = _conversion(degree)
    combo = solver.solve(1 << t_index[r])
    assert combo is not None, f"Milnor tuple {r} not matched in degree {degree}"
    return frozenset(words[j] for j in range(len(words)) if (combo >> j) & 1)


def oracle_product(a: MilnorTuple, b: MilnorTuple) -> frozenset[MilnorTuple]:
    """Product of two Milnor monomials computed entirely on the Adem side."""
    ua = milnor_to_admissible(a)
    ub = milnor_to_admissible(b)
    prod = adem_product(ua, ub)
    acc: set[MilnorTuple] = set()
    for w in prod:
        _xor_into(acc, admissible_to_milnor(w))
    return frozenset(acc)
