from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from catseq.algebra import nilpotency, product_length_sequence
from catseq.linalg import GF, QQ
from catseq.realization import (
    HasUnknowns,
    NotFormal,
    SphereProduct,
    WedgeOfSphereProducts,
    cohomology_of_wedge,
    product_cohomology,
    realize_formal,
    sequence_of_product,
    sequence_of_wedge,
    sphere_cohomology,
    stage_product,
)
from catseq.sequences import Sequence, is_formal, optimal_sequence
from oracles import all_formal, product_dims_sequence

W = WedgeOfSphereProducts.of


def test_sphere_product_validation():
    assert SphereProduct((4, 3)).dims == (3, 4)
    with pytest.raises(ValueError):
        SphereProduct(())
    with pytest.raises(ValueError):
        SphereProduct((1, 3))
    with pytest.raises(ValueError):
        WedgeOfSphereProducts(())


def test_sequence_of_product():
    assert sequence_of_product(SphereProduct((3, 4))) == Sequence((0, 3, 7))
    assert sequence_of_product(SphereProduct((2,) * 5)) == Sequence((0, 2, 4, 6, 8, 10))
    assert sequence_of_product(SphereProduct((5,))) == Sequence((0, 5))


def test_sequence_of_wedge():
    assert sequence_of_wedge(W([3], [3, 4])) == Sequence((0, 3, 7))
    assert sequence_of_wedge(W([2, 2], [3, 3])) == Sequence((0, 2, 4))
    assert sequence_of_wedge(W([3, 4])) == Sequence((0, 3, 7))


def test_realize_examples():
    assert realize_formal(Sequence((0, 3, 7))) == W([3], [3, 4])
    assert realize_formal(Sequence((0, 9))) == W([9])
    assert realize_formal(Sequence((0, 2, 4, 6))) == W([2], [2, 2], [2, 2, 2])
    assert str(W([3], [3, 4])) == "S^3 ∨ (S^3×S^4)"
    assert W([3], [3, 4]).to_json() == {"summands": [[3], [3, 4]]}


def test_realize_errors():
    with pytest.raises(NotFormal):
        realize_formal(Sequence((0, 3, 8, 11)))
    with pytest.raises(NotFormal):
        realize_formal(Sequence((0,)))
    with pytest.raises(HasUnknowns):
        realize_formal(Sequence((0, 2, 4), cap_note=5))


def test_cohomology_of_spheres():
    S3 = sphere_cohomology(QQ, 3)
    assert S3.names == ("1", "x3")
    assert sphere_cohomology(QQ, 4).names == ("1", "x4")
    P = product_cohomology(SphereProduct((3, 4)), QQ)
    assert P.mul(P.element("x3"), P.element("x4")) == {P.index["x3x4"]: 1}
    Wc = cohomology_of_wedge(W([3], [3, 4]), QQ)
    assert [Wc.dim(d) for d in range(Wc.top_degree + 1)] == [1, 0, 0, 2, 1, 0, 0, 1]
    assert Wc.mul(Wc.element("x3@1"), Wc.element("x4@2")) == {}


@given(st.lists(st.integers(2, 9), min_size=1, max_size=5))
def test_product_sequence_matches_algebra(dims):
    p = SphereProduct(tuple(dims))
    s = sequence_of_product(p)
    assert s.values == product_dims_sequence(dims)
    assert is_formal(s)
    for F in (QQ, GF(2)):
        assert product_length_sequence(product_cohomology(p, F)) == s


@given(st.lists(st.lists(st.integers(2, 7), min_size=1, max_size=3), min_size=1, max_size=3))
def test_wedge_sequence_matches_algebra(summands):
    w = W(*summands)
    A = cohomology_of_wedge(w, QQ)
    assert product_length_sequence(A) == sequence_of_wedge(w)
    assert nilpotency(A) == max(len(s) for s in summands)


def test_realize_round_trip_exhaustive_small():
    # the full length <= 5, values <= 30 sweep runs in the acceptance suite
    for vals in all_formal(4, 18):
        s = Sequence(vals)
        w = realize_formal(s)
        assert sequence_of_wedge(w) == s
        assert product_length_sequence(cohomology_of_wedge(w, QQ)) == s
        for k, p in enumerate(w.summands, start=1):
            assert sequence_of_product(p) == optimal_sequence(k, vals[k])
            assert p == stage_product(k, vals[k])
