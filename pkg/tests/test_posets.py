import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from cosetposet import fplinalg as fl
from cosetposet.groups import build_group, vector_group
from cosetposet.maps import abelian_coset_poset, heisenberg_poset, isotropic_coset_poset
from cosetposet.posets import (
    GuardExceeded,
    Poset,
    PosetError,
    PosetMap,
    PosetMapError,
    SimplicialComplex,
    antichain,
    barycentric,
    chain_poset,
    coset_poset,
    collection_vee,
    fiber,
    has_initial,
    has_terminal,
    join,
    order_complex,
    proper_subspaces,
    sphere_J,
    subspace_coset_poset,
    subspace_poset,
    suspension,
)
from cosetposet.symgeom import enumerate_isotropic, standard_space

from oracles import chains_bruteforce


def test_coset_poset_sizes():
    assert len(isotropic_coset_poset(standard_space(2, 1))) == 10
    assert len(heisenberg_poset(standard_space(2, 2))[1]) == 392
    assert len(abelian_coset_poset(build_group("q8"))) == 18


def _check_inclusion(cp):
    sets = [cp.elements_of(i) for i in range(len(cp))]
    assert len(set(sets)) == len(sets)
    for i in range(len(cp)):
        assert set(cp.up[i]) == {j for j in range(len(cp)) if sets[i] < sets[j]}


@pytest.mark.parametrize("make", [
    lambda: isotropic_coset_poset(standard_space(3, 1)),
    lambda: abelian_coset_poset(build_group("q8")),
    lambda: abelian_coset_poset(build_group("d8")),
    lambda: heisenberg_poset(standard_space(3, 1))[1],
    lambda: subspace_coset_poset(2, 3, proper_subspaces(2, 3)),
])
def test_coset_order_is_inclusion(make):
    _check_inclusion(make())


def test_coset_index_and_reps_are_minimal():
    cp = abelian_coset_poset(build_group("d8"))
    g = cp.group
    for i, lab in enumerate(cp.labels):
        assert lab.rep == min(cp.elements_of(i))
        for x in cp.elements_of(i):
            assert cp.coset_index(x, lab.subgroup) == i


def test_relative_mode():
    p, n = 2, 3
    w = fl.span([fl.unit(0, 3), fl.unit(1, 3)], p)
    full = subspace_coset_poset(p, n, proper_subspaces(p, n))
    rel = subspace_coset_poset(p, n, proper_subspaces(p, n), restrict_to=w)
    meets = [i for i in range(len(full)) if any(fl.member(full.group.to_V[x], w) for x in full.elements_of(i))]
    assert len(rel) == len(meets)
    shifted = subspace_coset_poset(p, n, proper_subspaces(p, n), restrict_to=(fl.unit(2, 3), w))
    assert len(shifted) == len(rel)


def _chain_sets(c):
    return [sorted(tuple(sorted(map(str, (c.vertex_labels[v] for v in s)))) for s in layer)
            for layer in c.simplices_by_dim]


@pytest.mark.parametrize("make", [
    lambda: isotropic_coset_poset(standard_space(2, 1)),
    lambda: abelian_coset_poset(build_group("q8")),
    lambda: subspace_coset_poset(2, 3, proper_subspaces(2, 3, nonzero=True)),
])
def test_order_complex_matches_bruteforce_chains(make):
    cp = make()
    sets = [cp.elements_of(i) for i in range(len(cp))]
    brute = chains_bruteforce(list(range(len(cp))), lambda a, b: sets[a] <= sets[b])
    mine = order_complex(cp)
    assert [sorted(layer) for layer in mine.simplices_by_dim] == brute
    assert mine.f_vector == [len(b) for b in brute]
    assert cp.chain_counts() == mine.f_vector


@st.composite
def random_posets(draw):
    n = draw(st.integers(0, 9))
    edges = draw(st.sets(st.tuples(st.integers(0, 8), st.integers(0, 8)), max_size=20))
    rel = [[False] * n for _ in range(n)]
    for a, b in edges:
        if a < b < n:
            rel[a][b] = True
    for k, i, j in itertools.product(range(n), repeat=3):
        if rel[i][k] and rel[k][j]:
            rel[i][j] = True
    perm = draw(st.permutations(list(range(n))))
    labels = [f"v{perm[i]}" for i in range(n)]
    less = {(labels[i], labels[j]) for i in range(n) for j in range(n) if rel[i][j]}
    return labels, less


@settings(max_examples=150, deadline=None)
@given(random_posets())
def test_random_poset_chains(data):
    labels, less = data
    p = Poset.from_relation(labels, lambda a, b: (a, b) in less)
    for i, u in enumerate(p.up):
        assert all(j > i for j in u)
        assert {p.labels[j] for j in u} == {b for (a, b) in less if a == p.labels[i]}
    brute = chains_bruteforce(p.labels, lambda a, b: a == b or (a, b) in less)
    counts = [len(b) for b in brute]
    assert p.chain_counts() == counts
    assert order_complex(p).f_vector == counts
    assert p.opposite().chain_counts() == counts
    if len(p):
        assert has_terminal(p) == (len([x for x in p.labels if not any(a == x for a, _ in less)]) == 1)


def test_poset_validation():
    with pytest.raises(PosetError):
        Poset(["a", "b"], [[1], [0]])
    with pytest.raises(PosetError):
        Poset(["a", "b", "c"], [[1], [2], []])  # not transitively closed
    with pytest.raises(PosetError):
        Poset(["a"], [[], []])


def test_collection_vee():
    p, n = 2, 2
    h = fl.span([fl.unit(0, 2)], p)
    vee = collection_vee(proper_subspaces(p, n), h, None)
    assert vee == [fl.span([(0, 1)], 2), fl.span([(1, 1)], 2)]
    g = vector_group(p, n)
    subs = [g.subgroup_from_labels(a.elements()) for a in proper_subspaces(p, n)]
    hh = g.subgroup_from_labels(h.elements())
    assert [a.order for a in collection_vee(subs, hh, g)] == [2, 2]


def test_collection_vee_symplectic_example():
    s = standard_space(2, 2)
    h = fl.span([s.x(1), s.x(2), s.xbar(2)], 2)  # x1-perp
    vee = collection_vee(enumerate_isotropic(s), h, None)
    assert all(not fl.contains(h, a) for a in vee)
    # 8 lines outside h, and the 12 Lagrangians not containing x1
    assert len(vee) == 8 + 12


def test_join_suspension_counts():
    a, b = antichain("ab"), chain_poset(3)
    j = join(a, b)
    assert len(j) == 5 and j.chain_counts() == [5, 2 * 3 + 3, 2 * 3 + 1, 2]
    s = suspension(antichain([1, 2]))
    assert order_complex(s).euler_characteristic() == 0
    assert len(join(antichain("ab"), antichain("ab"))) == 4


@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 2), (2, 3)])
def test_sphere_J(p, r):
    j = sphere_J(standard_space(p, r))
    assert len(j) == 2 * (r + 1)
    counts = j.chain_counts()
    assert counts == [comb(r + 1, k + 1) * 2 ** (k + 1) for k in range(r + 1)]
    assert order_complex(j).euler_characteristic() == 1 + (-1) ** r


def test_fibers_and_terminal_objects():
    src = chain_poset(3)
    tgt = chain_poset(2)
    f = PosetMap(src, tgt, [0, 0, 1])
    sub, idx = fiber(f, 0)
    assert idx == [0, 1] and has_terminal(sub)
    assert f.fibers_have_terminal("under") == []
    assert f.fibers_have_terminal("over") == []
    g = PosetMap(antichain("ab"), chain_poset(1), [0, 0])
    assert g.fibers_have_terminal("under") == [0]
    assert not has_initial(antichain("ab"))
    with pytest.raises(PosetError):
        fiber(f, 5)


def test_map_errors():
    with pytest.raises(PosetMapError):
        PosetMap(chain_poset(2), chain_poset(2), [1, 0])
    with pytest.raises(PosetMapError):
        PosetMap(chain_poset(2), chain_poset(2), [0])
    mid = chain_poset(3)
    f = PosetMap(chain_poset(2), mid, [0, 2])
    g = PosetMap(mid, chain_poset(1), [0, 0, 0])
    assert g.compose(f).image == [0, 0]
    with pytest.raises(PosetMapError):
        f.compose(f)


def test_text_roundtrip_and_face_closure():
    c = order_complex(abelian_coset_poset(build_group("q8")))
    assert SimplicialComplex.from_text(c.to_text()).simplices_by_dim == c.simplices_by_dim
    with pytest.raises(PosetError):
        SimplicialComplex.from_text("1 0 1\n")
    with pytest.raises(PosetError):
        SimplicialComplex.from_text("1 0\n")


def test_barycentric():
    tri = SimplicialComplex.from_facets([(0, 1), (1, 2), (0, 2)])
    b = barycentric(tri)
    assert len(b) == 6
    assert order_complex(b).euler_characteristic() == 0
    assert barycentric(chain_poset(2)).chain_counts() == [3, 2]


def test_subspace_poset():
    p = subspace_poset(fl.all_subspaces(2, 3))
    assert len(p) == 16 and has_terminal(p) and has_initial(p)


def test_guards():
    g = vector_group(2, 3)
    subs = [g.subgroup_from_labels(a.elements()) for a in proper_subspaces(2, 3)]
    with pytest.raises(GuardExceeded):
        coset_poset(g, subs, guard=10)
    with pytest.raises(GuardExceeded):
        order_complex(chain_poset(10), guard=100)
    with pytest.raises(PosetError):
        coset_poset(g, subs + subs[:1])
