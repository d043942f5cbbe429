import math

import pytest
from hypothesis import given, strategies as st

from cosetposet.formulas import (
    isotropic_table,
    n_isotropic,
    steinberg_dim,
    to_csv,
    wedge_count,
)
from cosetposet.maps import heisenberg_poset
from cosetposet.posets import order_complex
from cosetposet.symgeom import standard_space


@pytest.mark.parametrize("p,r,d", [(2, 1, 5), (3, 1, 46), (2, 2, 151), (3, 2, 11042)])
def test_wedge_counts(p, r, d):
    w = wedge_count(p, r)
    assert w.d == d and w.euler == 1 + (-1) ** r * d


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (5, 1), (2, 2)])
def test_wedge_count_matches_order_complex(p, r):
    _, cp = heisenberg_poset(standard_space(p, r))
    assert order_complex(cp).euler_characteristic() == wedge_count(p, r).euler


def test_euler_from_chain_counts_3_2():
    _, cp = heisenberg_poset(standard_space(3, 2))
    counts = cp.chain_counts()
    assert counts == [4563, 32400, 38880]
    assert sum((-1) ** k * n for k, n in enumerate(counts)) == wedge_count(3, 2).euler == 11043


primes = st.sampled_from([2, 3, 5, 7, 11])


@given(primes, st.integers(1, 6))
def test_isotropic_count_identities(p, r):
    assert n_isotropic(p, r, 0) == 1
    assert n_isotropic(p, r, 1) == (p ** (2 * r) - 1) // (p - 1)
    assert n_isotropic(p, r, r) == math.prod(p ** i + 1 for i in range(1, r + 1))


@given(primes, st.integers(1, 5))
def test_wedge_count_positive(p, r):
    assert wedge_count(p, r).d > 0


def test_steinberg():
    assert [steinberg_dim(2, m) for m in range(4)] == [1, 2, 16, 512]
    with pytest.raises(ValueError):
        steinberg_dim(2, -1)


def test_errors():
    with pytest.raises(ValueError):
        n_isotropic(4, 1, 1)
    with pytest.raises(ValueError):
        n_isotropic(2, 1, 2)
    with pytest.raises(ValueError):
        wedge_count(2, 0)


def test_table_and_csv():
    rows = isotropic_table(3, 2)
    assert rows == [(3, 2, 0, 1, 81), (3, 2, 1, 40, 3), (3, 2, 2, 40, 1)]
    text = to_csv(["p", "r", "j", "N_j", "D_j"], rows)
    assert text.splitlines()[0] == "p,r,j,N_j,D_j"
    assert text.splitlines()[2] == "3,2,1,40,3"
