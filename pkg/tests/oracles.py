"""Slow, direct reference implementations used only to cross-check the library."""

from __future__ import annotations

import itertools

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors


def span_set(vectors, p, n):
    """All F_p-combinations of the given vectors, as a frozenset."""
    vectors = [tuple(v) for v in vectors]
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        out.add(tuple(sum(c * v[i] for c, v in zip(coeffs, vectors)) % p for i in range(n)))
    if not vectors:
        out.add((0,) * n)
    return frozenset(out)


def all_subspace_sets(p, n):
    """Every subspace of F_p^n as a set of vectors: spans of all <= n-element subsets."""
    vecs = list(itertools.product(range(p), repeat=n))
    found = set()
    for k in range(n + 1):
        for combo in itertools.combinations(vecs, k):
            found.add(span_set(combo, p, n))
    return found


def snf_factors(dense):
    """Nonzero invariant factors via sympy (dense, no sparsity tricks)."""
    if not dense or not dense[0]:
        return []
    m = Matrix(dense)
    return [abs(int(x)) for x in invariant_factors(m, domain=ZZ) if x != 0]


def boundary_dense(simplices_by_dim, k):
    """Dense d_k with rows indexed by (k-1)-simplices, built by brute force."""
    rows = simplices_by_dim[k - 1]
    cols = simplices_by_dim[k]
    pos = {s: i for i, s in enumerate(rows)}
    out = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        for i in range(len(s)):
            out[pos[s[:i] + s[i + 1:]]][j] += (-1) ** i
    return out


def reduced_homology_oracle(simplices_by_dim):
    """[(degree, betti, torsion)] for degrees -1..top using dense SNF only."""
    dims = {-1: 1}
    for k, layer in enumerate(simplices_by_dim):
        dims[k] = len(layer)
    top = len(simplices_by_dim) - 1
    ranks, tors = {}, {}
    for k in range(0, top + 1):
        if k == 0:
            dense = [[1] * dims[0]] if dims[0] else []
        else:
            dense = boundary_dense(simplices_by_dim, k)
        f = snf_factors(dense)
        ranks[k] = len(f)
        tors[k - 1] = sorted(x for x in f if x > 1)
    out = []
    for k in range(-1, top + 1):
        out.append((k, dims[k] - ranks.get(k, 0) - ranks.get(k + 1, 0), tuple(tors.get(k, []))))
    return out


def chains_bruteforce(elements, leq):
    """All strict chains of a finite poset given by a leq predicate, grouped by length.

    Chains are tuples of element positions, listed in increasing order.
    """
    n = len(elements)
    less = [[i != j and leq(elements[i], elements[j]) for j in range(n)] for i in range(n)]
    result = []
    level = [(i,) for i in range(n)]
    while level:
        result.append(sorted(level))
        level = [c + (j,) for c in level for j in range(n) if less[c[-1]][j]]
    return result
