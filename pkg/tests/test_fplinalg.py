import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cosetposet import fplinalg as fl
from cosetposet.fplinalg import FieldSpec, Subspace

from oracles import all_subspace_sets, span_set


def test_canonicalize_empty_is_zero():
    s = fl.canonicalize([], 2, 4)
    assert s.basis == () and s.dim == 0 and s.n == 4


def test_canonicalize_f2_example():
    s = fl.canonicalize([(1, 1, 0, 0), (0, 1, 1, 0)], 2)
    assert s.basis == ((1, 0, 1, 0), (0, 1, 1, 0))


def test_canonicalize_collapses_multiples():
    assert fl.canonicalize([(1, 0), (2, 0)], 3).basis == ((1, 0),)


def test_non_prime_and_mismatch_rejected():
    with pytest.raises(ValueError):
        fl.canonicalize([(1, 0)], 4)
    with pytest.raises(ValueError):
        fl.canonicalize([(1, 0), (1, 0, 0)], 2)
    with pytest.raises(ValueError):
        fl.subspace_sum(fl.full_space(2, 2), fl.full_space(2, 3))
    with pytest.raises(ValueError):
        FieldSpec(1)


def test_subspace_algebra_examples():
    e = lambda i, n=4: fl.unit(i, n)
    assert fl.subspace_algebra(fl.span([e(0, 2)], 2), fl.span([e(1, 2)], 2), "sum") == fl.full_space(2, 2)
    a = fl.span([e(0), e(1)], 2)
    b = fl.span([e(1), e(2)], 2)
    assert fl.subspace_algebra(a, b, "intersection") == fl.span([e(1)], 2)
    assert fl.subspace_algebra((1, 1), fl.span([(1, 1)], 3), "member")
    assert fl.subspace_algebra(a, fl.span([e(0)], 2), "contains")
    assert not fl.subspace_algebra(fl.span([e(0)], 2), a, "contains")


def test_reduce_mod_examples():
    assert fl.reduce_mod((1, 0, 1, 0), fl.span([(1, 0, 1, 0)], 2)) == (0, 0, 0, 0)
    assert fl.reduce_mod((1, 1, 0, 0), fl.span([(1, 0, 0, 0)], 2)) == (0, 1, 0, 0)
    assert fl.reduce_mod((2, 1), fl.zero_subspace(3, 2)) == (2, 1)


def test_quotient_examples():
    q = fl.quotient_coords(fl.zero_subspace(3, 3))
    assert all(q(v) == v for v in fl.all_vectors(3, 3))
    q = fl.quotient_coords(fl.span([(1, 0)], 2))
    assert q.target_dim == 1 and q((0, 1)) == (1,)
    assert q.image(fl.span([(1, 1)], 2)) == fl.full_space(2, 1)


def test_quotient_kernel_is_exactly_a():
    for a in fl.all_subspaces(3, 3):
        q = fl.quotient_coords(a)
        kernel = {v for v in fl.all_vectors(3, 3) if not any(q(v))}
        assert kernel == set(a.elements())
        assert len({q(v) for v in fl.all_vectors(3, 3)}) == 3 ** (3 - a.dim)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 3), (2, 4)])
def test_all_subspaces_matches_bruteforce(p, n):
    mine = {frozenset(s.elements()) for s in fl.all_subspaces(p, n)}
    assert len(mine) == len(fl.all_subspaces(p, n))
    assert mine == all_subspace_sets(p, n)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)])
def test_dimension_formula_exhaustive(p, n):
    subs = fl.all_subspaces(p, n)
    for a, b in itertools.product(subs, repeat=2):
        s, i = fl.subspace_sum(a, b), fl.intersection(a, b)
        assert s.dim + i.dim == a.dim + b.dim


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (3, 3)])
def test_intersection_and_sum_against_sets(p, n):
    subs = fl.all_subspaces(p, n)
    for a, b in itertools.product(subs, repeat=2):
        ea, eb = set(a.elements()), set(b.elements())
        assert set(fl.intersection(a, b).elements()) == ea & eb
        assert set(fl.subspace_sum(a, b).elements()) == span_set(a.basis + b.basis, p, n)
        assert fl.contains(a, b) == (eb <= ea)


@st.composite
def generating_sets(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 6))
    k = draw(st.integers(0, 6))
    vecs = draw(st.lists(st.tuples(*[st.integers(0, p - 1)] * n), min_size=k, max_size=k))
    return p, n, vecs


@settings(max_examples=200, deadline=None)
@given(generating_sets(), st.randoms(use_true_random=False))
def test_canonicalize_idempotent_and_unique(data, rnd):
    p, n, vecs = data
    s = fl.canonicalize(vecs, p, n)
    assert fl.canonicalize(s.basis, p, n) == s
    # a random invertible recombination spans the same space
    if vecs:
        mixed = list(vecs)
        for _ in range(5):
            i, j = rnd.randrange(len(mixed)), rnd.randrange(len(mixed))
            c = rnd.randrange(1, p)
            if i != j:
                mixed[i] = fl.add(mixed[i], fl.scale(c, mixed[j], p), p)
            else:
                mixed[i] = fl.scale(c, mixed[i], p)
        rnd.shuffle(mixed)
        assert fl.canonicalize(mixed, p, n) == s
    for row in s.basis:
        piv = row.index(next(x for x in row if x))
        assert row[piv] == 1
        assert all(other[piv] == 0 for other in s.basis if other is not row)


@settings(max_examples=100, deadline=None)
@given(generating_sets())
def test_reduce_mod_bijection(data):
    p, n, vecs = data
    a = fl.canonicalize(vecs, p, n)
    reps = {fl.reduce_mod(v, a) for v in fl.all_vectors(p, n)}
    assert len(reps) == p ** (n - a.dim)
    for v in itertools.islice(fl.all_vectors(p, n), 50):
        for w in a.elements()[:5]:
            assert fl.reduce_mod(fl.add(v, w, p), a) == fl.reduce_mod(v, a)


def test_text_roundtrip():
    for a in fl.all_subspaces(3, 3):
        assert fl.parse_subspace(fl.format_subspace(a), 3, 3) == a
    with pytest.raises(ValueError):
        fl.parse_subspace("120\n", 2, 3)
