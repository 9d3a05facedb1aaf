import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synss import steenrod
from synss.steenrod import (
    ALGEBRA_DIM,
    TOP_DEGREE,
    UNIT,
    ZERO,
    MilnorElement,
    MilnorMonomial,
    act_matrix,
    basis_in_degree,
    dim_in_degree,
    product,
    product_monomials,
)

import adem_oracle


def all_monomials():
    out = []
    for d in range(TOP_DEGREE + 1):
        out.extend(basis_in_degree(d))
    return out


def to_tuple(m: MilnorMonomial):
    t = (m.r1, m.r2, m.r3)
    while t and t[-1] == 0:
        t = t[:-1]
    return t


class TestBasis:
    def test_degree_zero_is_unit(self):
        assert basis_in_degree(0) == (MilnorMonomial(0, 0, 0),)

    def test_total_dimension(self):
        assert sum(dim_in_degree(d) for d in range(TOP_DEGREE + 1)) == ALGEBRA_DIM

    def test_degree_three(self):
        assert set(basis_in_degree(3)) == {
            MilnorMonomial(3, 0, 0),
            MilnorMonomial(0, 1, 0),
        }

    def test_empty_above_top_degree(self):
        assert basis_in_degree(24) == ()
        assert basis_in_degree(35) == ()

    def test_poincare_symmetry(self):
        for d in range(TOP_DEGREE + 1):
            assert dim_in_degree(d) == dim_in_degree(TOP_DEGREE - d)

    def test_lex_order(self):
        b = basis_in_degree(7)
        assert list(b) == sorted(b)


class TestProduct:
    def test_unit_left_right(self):
        for m in all_monomials():
            e = MilnorElement(frozenset([m]))
            assert product(UNIT, e) == e
            assert product(e, UNIT) == e

    def test_sq1_squared_is_zero(self):
        # matches the Adem relation Sq^1 Sq^1 = 0
        sq1 = MilnorElement.sq(1)
        assert product(sq1, sq1).is_zero()

    def test_commutator_of_sq1_sq2(self):
        # Sq^1 Sq^2 + Sq^2 Sq^1 = Q_1 = Sq(0,1), frozen from the Adem oracle
        sq1, sq2 = MilnorElement.sq(1), MilnorElement.sq(2)
        comm = product(sq1, sq2) + product(sq2, sq1)
        assert comm == MilnorElement.sq(0, 1)
        assert adem_oracle.oracle_product((1,), (2,)) ^ adem_oracle.oracle_product(
            (2,), (1,)
        ) == frozenset({(0, 1)})

    def test_closure_over_all_pairs(self):
        # the profile check inside product_monomials never fires
        monos = all_monomials()
        for a in monos:
            for b in monos:
                if a.degree + b.degree > TOP_DEGREE:
                    continue
                product_monomials(a, b)

    def test_degree_additivity(self):
        rng = random.Random(11)
        monos = all_monomials()
        for _ in range(200):
            a, b = rng.choice(monos), rng.choice(monos)
            if a.degree + b.degree > TOP_DEGREE:
                continue
            res = product_monomials(a, b)
            for m in res:
                assert m.degree == a.degree + b.degree

    def test_bilinearity(self):
        a = MilnorElement.sq(1) + MilnorElement.sq(0, 1)
        b = MilnorElement.sq(2)
        lhs = product(a, b)
        rhs = product(MilnorElement.sq(1), b) + product(MilnorElement.sq(0, 1), b)
        assert lhs == rhs

    def test_zero_annihilates(self):
        assert product(ZERO, UNIT).is_zero()
        assert product(UNIT, ZERO).is_zero()


class TestAssociativity:
    @given(st.data())
    @settings(max_examples=150, deadline=None)
    def test_random_homogeneous_triples(self, data):
        monos = all_monomials()
        a = data.draw(st.sampled_from(monos))
        b = data.draw(st.sampled_from([m for m in monos if m.degree + a.degree <= TOP_DEGREE]))
        rest = TOP_DEGREE - a.degree - b.degree
        c = data.draw(st.sampled_from([m for m in monos if m.degree <= rest]))
        ea, eb, ec = (MilnorElement(frozenset([m])) for m in (a, b, c))
        assert product(product(ea, eb), ec) == product(ea, product(eb, ec))


class TestAdemOracleAgreement:
    def test_generator_pairs(self):
        # all pairs drawn from Sq^1, Sq^2, Sq^4
        gens = [(1,), (2,), (4,)]
        for ta, tb in itertools.product(gens, gens):
            a = MilnorMonomial(ta[0], 0, 0)
            b = MilnorMonomial(tb[0], 0, 0)
            ours = {to_tuple(m) for m in product_monomials(a, b)}
            assert ours == set(adem_oracle.oracle_product(ta, tb)), (ta, tb)

    def test_hundred_random_pairs(self):
        # pairs bounded in total degree to keep the polynomial-action
        # conversion in the oracle tractable
        rng = random.Random(421)
        monos = [m for m in all_monomials() if 0 < m.degree <= 9]
        checked = 0
        while checked < 100:
            a = rng.choice(monos)
            b = rng.choice(monos)
            if a.degree + b.degree > 10:
                continue
            ours = {to_tuple(m) for m in product_monomials(a, b)}
            oracle = set(adem_oracle.oracle_product(to_tuple(a), to_tuple(b)))
            assert ours == oracle, (a, b)
            checked += 1


class TestActMatrix:
    def test_unit_gives_identity(self):
        for d in (0, 3, 7, 11):
            m = act_matrix(d, d, UNIT)
            n = dim_in_degree(d)
            assert m.rows == m.cols == n
            for i in range(n):
                for j in range(n):
                    assert m.entry(i, j) == (1 if i == j else 0)

    def test_zero_gives_zero(self):
        m = act_matrix(3, 8, ZERO)
        assert m.is_zero()
        assert m.rows == dim_in_degree(8) and m.cols == dim_in_degree(3)

    def test_sq1_from_degree_zero(self):
        m = act_matrix(0, 1, MilnorElement.sq(1))
        assert m.cols == 1 and m.rows == 1
        assert m.entry(0, 0) == 1

    def test_degree_mismatch_rejected(self):
        with pytest.raises(ValueError):
            act_matrix(0, 3, MilnorElement.sq(1))

    def test_matches_product(self):
        x = MilnorElement.sq(2)
        m = act_matrix(3, 5, x)
        src = basis_in_degree(3)
        tgt = basis_in_degree(5)
        for j, mono in enumerate(src):
            expected = product(x, MilnorElement(frozenset([mono])))
            got = {tgt[i] for i in range(len(tgt)) if m.entry(i, j)}
            assert got == expected.terms


class TestOracleSelfChecks:
    def test_adem_sq1sq1(self):
        assert adem_oracle.adem_normalize((1, 1)) == frozenset()

    def test_adem_sq1sq2(self):
        assert adem_oracle.adem_normalize((1, 2)) == frozenset({(3,)})

    def test_sq_0_1_expansion(self):
        # Sq(0,1) = Sq^3 + Sq^2 Sq^1, a standard identity
        assert adem_oracle.milnor_to_admissible((0, 1)) == frozenset({(3,), (2, 1)})

    def test_basis_counts_agree(self):
        for d in range(0, 11):
            assert len(adem_oracle.admissible_words(d)) == len(
                adem_oracle.milnor_tuples(d)
            )
