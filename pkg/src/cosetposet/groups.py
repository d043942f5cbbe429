"""Finite group models held as dense multiplication tables.

Elements are indices ``0..|G|-1`` into a label list; the table is a numpy
array so that products, cosets and exhaustive checks vectorise.  The
central extensions used here (Heisenberg and extraspecial groups) carry a
projection ``to_V`` onto the vector space V and a coordinate on the
central kernel identifying it with Z/p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import fplinalg as fl
from .fplinalg import Subspace, Vector
from .symgeom import AlternatingForm, SymplecticSpace, space_from_form, standard_space

MAX_ORDER = 3 ** 6
FULL_AXIOM_CHECK = 3 ** 5


class GroupError(ValueError):
    pass


class GroupModel:
    def __init__(
        self,
        name: str,
        labels: Sequence[Hashable],
        table: np.ndarray,
        *,
        to_V: Sequence[Vector] | None = None,
        space: SymplecticSpace | None = None,
        central_coord: dict[int, int] | None = None,
        check: bool = True,
    ):
        self.name = name
        self.labels = list(labels)
        self.table = np.asarray(table, dtype=np.int32)
        n = len(self.labels)
        if self.table.shape != (n, n):
            raise GroupError(f"table shape {self.table.shape} does not match {n} elements")
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        ident = [i for i in range(n) if np.array_equal(self.table[i], np.arange(n))]
        if len(ident) != 1:
            raise GroupError("no unique left identity")
        self.identity = ident[0]
        inv = np.argmax(self.table == self.identity, axis=1)
        if not np.all(self.table[np.arange(n), inv] == self.identity):
            raise GroupError("some element has no inverse")
        self.inverse = inv.astype(np.int32)
        self.to_V = None if to_V is None else [tuple(v) for v in to_V]
        self.space = space
        self.central_coord = central_coord
        if check:
            self.check_axioms()

    @classmethod
    def from_function(cls, name: str, labels: Sequence[Hashable], mul: Callable, **kw) -> GroupModel:
        idx = {lab: i for i, lab in enumerate(labels)}
        table = np.array([[idx[mul(a, b)] for b in labels] for a in labels], dtype=np.int32)
        return cls(name, labels, table, **kw)

    def __repr__(self) -> str:
        return f"GroupModel({self.name}, order={self.order})"

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a b a^-1 b^-1."""
        t = self.table
        return int(t[t[t[a, b], self.inverse[a]], self.inverse[b]])

    def power(self, a: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = int(self.table[out, a])
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def check_axioms(self, samples: int = 200_000, seed: int = 0) -> None:
        """Associativity on all triples up to order 3^5, sampled above."""
        t = self.table
        n = self.order
        if n <= FULL_AXIOM_CHECK:
            for a in range(n):
                lhs = t[t[a][:, None], np.arange(n)[None, :]]
                rhs = t[a][t]
                if not np.array_equal(lhs, rhs):
                    raise GroupError(f"{self.name}: multiplication is not associative")
        else:
            rng = np.random.default_rng(seed)
            a, b, c = rng.integers(0, n, size=(3, samples))
            if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
                raise GroupError(f"{self.name}: multiplication is not associative")

    @cached_property
    def center(self) -> SubgroupSet:
        comm = self.table == self.table.T
        return self.subgroup(np.flatnonzero(comm.all(axis=1)).tolist())

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def subgroup(self, members: Iterable[int], check: bool = True) -> SubgroupSet:
        s = SubgroupSet(frozenset(int(m) for m in members), parent=self)
        if check:
            s.check_closed()
        return s

    def subgroup_from_labels(self, labels: Iterable[Hashable]) -> SubgroupSet:
        return self.subgroup(self.index[lab] for lab in labels)

    def generated(self, gens: Iterable[int]) -> SubgroupSet:
        elems = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        return self.subgroup(elems, check=False)

    @cached_property
    def derived_subgroup(self) -> SubgroupSet:
        t, inv = self.table, self.inverse
        n = self.order
        a = np.arange(n)
        comms = t[t[t[a[:, None], a[None, :]], inv[a][:, None]], inv[a][None, :]]
        return self.generated(np.unique(comms).tolist())

    def kernel_of_to_V(self) -> SubgroupSet:
        if self.to_V is None:
            raise GroupError(f"{self.name} has no projection to V")
        zero = fl.zero(len(self.to_V[0]))
        return self.subgroup(i for i, v in enumerate(self.to_V) if v == zero)


@dataclass(frozen=True)
class SubgroupSet:
    members: frozenset[int]
    parent: GroupModel = field(compare=False, repr=False, hash=False)

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def sorted_members(self) -> np.ndarray:
        return np.array(sorted(self.members), dtype=np.int64)

    def __contains__(self, g: int) -> bool:
        return g in self.members

    def __le__(self, other: SubgroupSet) -> bool:
        return self.members <= other.members

    def __lt__(self, other: SubgroupSet) -> bool:
        return self.members < other.members

    def check_closed(self) -> None:
        g = self.parent
        if g.identity not in self.members:
            raise GroupError("subgroup misses the identity")
        m = self.sorted_members
        prods = g.table[np.ix_(m, m)]
        if not set(np.unique(prods).tolist()) <= self.members:
            raise GroupError("subset is not closed under multiplication")

    def is_abelian(self) -> bool:
        m = self.sorted_members
        sub = self.parent.table[np.ix_(m, m)]
        return bool(np.array_equal(sub, sub.T))

    def coset_reps(self) -> np.ndarray:
        """For every g, the minimal element index of gA."""
        return self.parent.table[:, self.sorted_members].min(axis=1)


@dataclass(frozen=True)
class GroupCoset:
    subgroup: SubgroupSet
    rep: int

    @property
    def elements(self) -> frozenset[int]:
        g = self.subgroup.parent
        return frozenset(int(x) for x in g.table[self.rep, self.subgroup.sorted_members])

    def __contains__(self, g: int) -> bool:
        grp = self.subgroup.parent
        return int(grp.table[g, self.subgroup.sorted_members].min()) == self.rep


def coset(g: int, a: SubgroupSet) -> GroupCoset:
    """Left coset gA, keyed by its minimal element."""
    grp = a.parent
    return GroupCoset(a, int(grp.table[g, a.sorted_members].min()))


def coset_inclusion(c1: GroupCoset, c2: GroupCoset) -> bool:
    if c1.subgroup.parent is not c2.subgroup.parent:
        raise GroupError("cosets of different groups")
    return c1.subgroup <= c2.subgroup and c1.rep in c2


# -- concrete models ---------------------------------------------------------


def _vector_arrays(p: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    vecs = np.array(list(fl.all_vectors(p, n)), dtype=np.int64).reshape(-1, n)
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    add = ((vecs[:, None, :] + vecs[None, :, :]) % p) @ weights
    return vecs, add


def vector_group(p: int, n: int) -> GroupModel:
    """The additive group of F_p^n, labelled by vectors."""
    fl.check_prime(p)
    vecs, add = _vector_arrays(p, n)
    labels = [tuple(int(c) for c in v) for v in vecs]
    return GroupModel(f"F_{p}^{n}", labels, add, to_V=labels, check=len(labels) <= FULL_AXIOM_CHECK)


def subspace_subgroup(g: GroupModel, a: Subspace) -> SubgroupSet:
    """A subspace as a subgroup of a vector group."""
    return g.subgroup_from_labels(a.elements())


def central_extension(
    name: str, p: int, n: int, cocycle: Sequence[Sequence[int]], space: SymplecticSpace | None
) -> GroupModel:
    """Pairs (v, t) in F_p^n x Z/p with (v1, t1)(v2, t2) = (v1 + v2, c(v1, v2) + t1 + t2)
    for the bilinear cocycle c given by its matrix."""
    vecs, add = _vector_arrays(p, n)
    c = np.array(cocycle, dtype=np.int64).reshape(n, n)
    coc = (vecs @ c @ vecs.T) % p
    N = len(vecs)
    t = np.arange(p)
    vi = np.repeat(np.arange(N), p)
    ti = np.tile(t, N)
    table = add[vi[:, None], vi[None, :]] * p + (coc[vi[:, None], vi[None, :]] + ti[:, None] + ti[None, :]) % p
    vlabels = [tuple(int(x) for x in v) for v in vecs]
    labels = [(vlabels[i], int(s)) for i, s in zip(vi, ti)]
    to_V = [vlabels[i] for i in vi]
    zero = fl.zero(n)
    central = {k: lab[1] for k, lab in enumerate(labels) if lab[0] == zero}
    order = N * p
    if order > MAX_ORDER:
        raise GroupError(f"group order {order} above the desk-scale bound {MAX_ORDER}")
    return GroupModel(name, labels, table, to_V=to_V, space=space, central_coord=central)


def heisenberg(space: SymplecticSpace) -> GroupModel:
    """H(V): V x Z/p with (v1, t1)(v2, t2) = (v1 + v2, b(v1, v2) + t1 + t2)."""
    name = f"H(F_{space.p}^{space.dim})"
    return central_extension(name, space.p, space.dim, space.form.gram, space)


def _extraspecial_cocycle(p: int, r: int, variant: str) -> list[list[int]]:
    n = 2 * r
    c = [[0] * n for _ in range(n)]
    for i in range(r):
        c[i][r + i] = 1
    if variant == "minus":
        c[r - 1][r - 1] = 1
        c[2 * r - 1][2 * r - 1] = 1
    return c


def extraspecial(p: int, r: int, variant: str) -> GroupModel:
    """Extraspecial group of order p^(2r+1) from an upper-triangular cocycle.

    ``exponent_p`` (odd p), ``plus`` (p = 2, central product of D8's) or
    ``minus`` (p = 2, one Q8 factor).  The commutator form is the standard
    symplectic form in every case.
    """
    variant = variant.replace("-", "_")
    if variant == "exponent_p":
        if p == 2:
            raise GroupError("exponent_p extraspecial groups need odd p")
    elif variant in ("plus", "minus"):
        if p != 2:
            raise GroupError(f"variant {variant} is only defined for p = 2")
    else:
        raise GroupError(f"unknown extraspecial variant {variant!r}")
    if r < 1:
        raise GroupError("extraspecial groups need r >= 1")
    tag = {"exponent_p": "", "plus": "+", "minus": "-"}[variant]
    name = f"E{tag}({p}^{2 * r + 1})"
    return central_extension(name, p, 2 * r, _extraspecial_cocycle(p, r, variant), standard_space(p, r))


def commutator_form(e: GroupModel) -> AlternatingForm:
    """The form b(v, w) = [lift v, lift w] on V, checked on every pair of lifts."""
    if e.to_V is None or e.central_coord is None:
        raise GroupError(f"{e.name} has no central extension data")
    n = len(e.to_V[0])
    p = e.space.p if e.space is not None else None
    if p is None:
        raise GroupError("cannot infer p")
    lift = {}
    for i, v in enumerate(e.to_V):
        lift.setdefault(v, i)
    gram = []
    for i in range(n):
        row = []
        for j in range(n):
            c = e.commutator(lift[fl.unit(i, n)], lift[fl.unit(j, n)])
            if c not in e.central_coord:
                raise GroupError("commutator outside the central kernel")
            row.append(e.central_coord[c])
        gram.append(tuple(row))
    t, inv = e.table, e.inverse
    a = np.arange(e.order)
    comm = t[t[t[a[:, None], a[None, :]], inv[a][:, None]], inv[a][None, :]]
    coord = np.full(e.order, -1, dtype=np.int64)
    for k, s in e.central_coord.items():
        coord[k] = s
    vecs = np.array(e.to_V, dtype=np.int64)
    expected = (vecs @ np.array(gram, dtype=np.int64) @ vecs.T) % p
    if not np.array_equal(coord[comm], expected):
        raise GroupError(f"{e.name}: commutator depends on the choice of lifts")
    return AlternatingForm(p, tuple(gram))


def element_order_counts(g: GroupModel) -> dict[int, int]:
    counts: dict[int, int] = {}
    for a in range(g.order):
        k = g.element_order(a)
        counts[k] = counts.get(k, 0) + 1
    return dict(sorted(counts.items()))


def _mask(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits.astype(np.uint8), bitorder="little").tobytes(), "little")


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def abelian_subgroups(g: GroupModel) -> list[SubgroupSet]:
    """Every abelian subgroup, trivial one included, sorted by (order, members)."""
    if g.order > MAX_ORDER:
        raise GroupError(f"group order {g.order} above the desk-scale bound {MAX_ORDER}")
    t = g.table
    commute = t == t.T
    cent = [_mask(commute[a]) for a in range(g.order)]
    start = frozenset([g.identity])
    seen: dict[frozenset[int], int] = {start: cent[g.identity]}
    queue = [start]
    while queue:
        a = queue.pop()
        c = seen[a]
        amask = sum(1 << x for x in a)
        todo = c & ~amask
        members = list(a)
        while todo:
            x = (todo & -todo).bit_length() - 1
            elems = set(members)
            y = x
            while y not in a:
                elems.update(int(t[y, m]) for m in members)
                y = int(t[y, x])
            b = frozenset(elems)
            todo &= ~sum(1 << e for e in b)
            if b not in seen:
                cb = c
                for e in b - a:
                    cb &= cent[e]
                seen[b] = cb
                queue.append(b)
    subs = sorted(seen, key=lambda s: (len(s), sorted(s)))
    return [SubgroupSet(s, parent=g) for s in subs]


# -- the group pi and the map to H(V) ---------------------------------------


@dataclass
class PiModel:
    """pi = {(e, e') in E x E : e e' in [E, E]} with the embedding of subgroups of E."""

    group: GroupModel
    base: GroupModel
    pairs: np.ndarray

    def embed(self, a: SubgroupSet) -> SubgroupSet:
        e = self.base
        return self.group.subgroup_from_labels((x, int(e.inverse[x])) for x in a.members)


def make_pi(e: GroupModel) -> PiModel:
    derived = e.derived_subgroup
    n = e.order
    t = e.table
    pairs = [(a, b) for a in range(n) for b in range(n) if int(t[a, b]) in derived.members]
    arr = np.array(pairs, dtype=np.int64)
    lookup = np.full((n, n), -1, dtype=np.int64)
    lookup[arr[:, 0], arr[:, 1]] = np.arange(len(pairs))
    first = t[arr[:, 0][:, None], arr[:, 0][None, :]]
    second = t[arr[:, 1][:, None], arr[:, 1][None, :]]
    table = lookup[first, second]
    if np.any(table < 0):
        raise GroupError("pi is not closed under multiplication")
    grp = GroupModel(f"pi({e.name})", [tuple(map(int, q)) for q in pairs], table,
                     check=len(pairs) <= FULL_AXIOM_CHECK)
    return PiModel(grp, e, arr)


@dataclass
class PhiReport:
    images: np.ndarray
    target: GroupModel
    homomorphism_failures: int
    surjective: bool
    kernel: frozenset[int]
    expected_kernel: frozenset[int]

    @property
    def ok(self) -> bool:
        return (
            self.homomorphism_failures == 0
            and self.surjective
            and self.kernel == self.expected_kernel
        )


def heisenberg_of(e: GroupModel) -> GroupModel:
    """H(V) for V carrying the commutator form of ``e``."""
    return heisenberg(space_from_form(commutator_form(e)))


def phi_map(pi: PiModel, h: GroupModel | None = None, strict: bool = True) -> PhiReport:
    """(e, e') -> (nu(e), e e'), checked exhaustively."""
    e = pi.base
    if h is None:
        h = heisenberg_of(e)
    t = e.table
    images = np.empty(pi.group.order, dtype=np.int64)
    for k, (a, b) in enumerate(pi.pairs):
        z = int(t[a, b])
        images[k] = h.index[(e.to_V[a], e.central_coord[z])]
    lhs = images[pi.group.table]
    rhs = h.table[images[:, None], images[None, :]]
    failures = int(np.count_nonzero(lhs != rhs))
    kernel = frozenset(np.flatnonzero(images == h.identity).tolist())
    center = e.center.members
    expected = frozenset(pi.group.index[(z, int(e.inverse[z]))] for z in center)
    report = PhiReport(images, h, failures, len(set(images.tolist())) == h.order, kernel, expected)
    if strict and failures:
        raise GroupError(f"phi fails to be a homomorphism on {failures} pairs")
    return report


def isotropic_subgroup(h: GroupModel, a: Subspace) -> SubgroupSet:
    """An isotropic subspace I as the subgroup {(a, 0)} of H(V)."""
    return h.subgroup_from_labels((v, 0) for v in a.elements())


def build_group(kind: str, p: int = 2, r: int = 1, variant: str | None = None, radical_dim: int = 0) -> GroupModel:
    """Group from a config descriptor {kind, p, r, variant, radical_dim}."""
    kind = kind.lower()
    if kind == "heisenberg":
        return heisenberg(standard_space(p, r, radical_dim))
    if kind == "extraspecial":
        return extraspecial(p, r, variant or ("exponent_p" if p > 2 else "plus"))
    if kind in ("plus", "minus", "exponent_p", "exponent-p"):
        return extraspecial(p, r, kind)
    if kind == "q8":
        return extraspecial(2, 1, "minus")
    if kind == "d8":
        return extraspecial(2, 1, "plus")
    if kind == "pi":
        return make_pi(extraspecial(p, r, variant or ("exponent_p" if p > 2 else "plus"))).group
    raise GroupError(f"unknown group kind {kind!r}")
