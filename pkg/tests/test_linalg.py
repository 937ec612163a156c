from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.polys.matrices import DomainMatrix

from catseq.linalg import GF, QQ, Echelon, Field, FieldError, in_span, rank, row_reduce
from oracles import naive_rank

PRIMES = [2, 3, 5, 7]


def sympy_rank(rows, p):
    dom = sympy.QQ if p is None else sympy.GF(p)
    if not rows:
        return 0
    return DomainMatrix.from_list([[int(x) if p else Fraction(x) for x in r] for r in rows], dom).rank()


@st.composite
def matrices(draw, p=None):
    m = draw(st.integers(1, 6))
    n = draw(st.integers(1, 6))
    if p is None:
        entry = st.fractions(min_value=-5, max_value=5, max_denominator=6)
    else:
        entry = st.integers(0, p - 1)
    rows = draw(st.lists(st.lists(entry, min_size=n, max_size=n), min_size=m, max_size=m))
    # sparse-ish inputs hit more rank deficiency
    return [[x if draw(st.booleans()) else 0 for x in r] for r in rows]


def test_field_basics():
    assert QQ("-3/2") == Fraction(-3, 2)
    assert QQ("−3/2") == Fraction(-3, 2)
    assert GF(5)(Fraction(1, 2)) == 3
    assert GF(2).sign(3) == 1
    assert QQ.sign(3) == -1
    assert GF(7).inv(3) * 3 % 7 == 1
    with pytest.raises(FieldError):
        Field(4)
    with pytest.raises(FieldError):
        GF(3)(Fraction(1, 3))
    assert QQ.to_json() == "Q" and GF(3).to_json() == {"Fp": 3}


@settings(max_examples=150)
@given(matrices())
def test_rank_over_q_matches_oracles(rows):
    r = rank(rows, QQ)
    assert r == naive_rank(rows) == sympy_rank(rows, None)


@settings(max_examples=150)
@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), matrices(p))))
def test_rank_over_fp_matches_oracles(case):
    p, rows = case
    assert rank(rows, GF(p)) == naive_rank(rows, p) == sympy_rank(rows, p)


@settings(max_examples=100)
@given(matrices())
def test_rref_is_reduced_and_spans(rows):
    basis = row_reduce(rows, QQ)
    pivots = [min(r) for r in basis]
    assert pivots == sorted(pivots)
    for r, c in zip(basis, pivots):
        assert r[c] == 1
        for other in basis:
            if other is not r:
                assert c not in other
    for row in rows:
        assert in_span(row, basis, QQ)
    assert len(basis) == rank(rows, QQ)


@settings(max_examples=100)
@given(matrices())
def test_exact_over_q_by_clearing_denominators(rows):
    # scaling each row by its common denominator gives an integer matrix of the same rank,
    # and each reduced row times the lcm of its denominators is an integer combination
    ints = []
    for r in rows:
        den = 1
        for x in r:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
        ints.append([int(Fraction(x) * den) for x in r])
    assert rank(ints, QQ) == rank(rows, QQ)
    for b in row_reduce(rows, QQ):
        assert all(isinstance(x, Fraction) for x in b.values())
        den = 1
        for x in b.values():
            den = den * x.denominator // _gcd(den, x.denominator)
        scaled = {c: x * den for c, x in b.items()}
        assert all(x.denominator == 1 for x in scaled.values())
        assert in_span(scaled, ints, QQ)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def test_echelon_incremental():
    e = Echelon(QQ)
    assert e.add({0: 1, 1: 2})
    assert e.add({1: 1})
    assert not e.add({0: 3, 1: 5})
    assert e.contains({0: 1})
    assert len(e) == 2
    e2 = Echelon(GF(2), [{0: 1, 1: 1}, {1: 1, 2: 1}])
    assert e2.contains({0: 1, 2: 1})
    assert not e2.contains({2: 1})


def test_sparse_and_dense_inputs_agree():
    dense = [[1, 0, 2], [0, 0, 0], [2, 0, 4]]
    sparse = [{0: 1, 2: 2}, {}, {0: 2, 2: 4}]
    assert rank(dense, QQ) == rank(sparse, QQ) == 1
