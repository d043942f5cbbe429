"""Finite posets, coset posets and order complexes.

Every :class:`Poset` keeps its elements in a linear extension: if x < y
then index(x) < index(y).  Chains therefore come out as increasing index
tuples, which is also the vertex order used for simplices and boundary
signs downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import fplinalg as fl
from .fplinalg import Subspace
from .groups import GroupCoset, GroupModel, SubgroupSet, vector_group
from .symgeom import SymplecticSpace

MAX_ELEMENTS = 10 ** 5
MAX_SIMPLICES = 5 * 10 ** 6


class PosetError(ValueError):
    pass


class GuardExceeded(PosetError):
    pass


class Poset:
    """A finite poset given by strict, transitively closed up-sets.

    ``up[i]`` lists every j with x_i < x_j, in increasing order.
    """

    def __init__(self, labels: Sequence[Hashable], up: Sequence[Iterable[int]], check: bool = True):
        self.labels = list(labels)
        self.up = [tuple(sorted(set(u))) for u in up]
        if len(self.up) != len(self.labels):
            raise PosetError("one up-set per element required")
        if check:
            self._check()

    @classmethod
    def from_relation(cls, labels: Sequence[Hashable], less: Callable[[Hashable, Hashable], bool]) -> Poset:
        """Build from a strict order predicate, reindexing into a linear extension."""
        n = len(labels)
        rel = [[j for j in range(n) if j != i and less(labels[i], labels[j])] for i in range(n)]
        return cls._from_unsorted(labels, rel)

    @classmethod
    def _from_unsorted(cls, labels: Sequence[Hashable], rel: Sequence[Sequence[int]]) -> Poset:
        n = len(labels)
        below = [0] * n
        for i in range(n):
            for j in rel[i]:
                below[j] += 1
        order = sorted(range(n), key=lambda i: (below[i], i))
        pos = {old: new for new, old in enumerate(order)}
        return cls([labels[i] for i in order], [[pos[j] for j in rel[i]] for i in order])

    def _check(self) -> None:
        ups = self.upsets
        for i, u in enumerate(self.up):
            for j in u:
                if j <= i:
                    raise PosetError("element order is not a linear extension")
                if not ups[j] <= ups[i]:
                    raise PosetError("up-sets are not transitively closed")

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self)} elements)"

    @cached_property
    def upsets(self) -> list[frozenset[int]]:
        return [frozenset(u) for u in self.up]

    @cached_property
    def down(self) -> list[tuple[int, ...]]:
        d: list[list[int]] = [[] for _ in self.labels]
        for i, u in enumerate(self.up):
            for j in u:
                d[j].append(i)
        return [tuple(x) for x in d]

    @cached_property
    def index(self) -> dict[Hashable, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def leq(self, i: int, j: int) -> bool:
        return i == j or j in self.upsets[i]

    def less(self, i: int, j: int) -> bool:
        return j in self.upsets[i]

    def maximal(self) -> list[int]:
        return [i for i, u in enumerate(self.up) if not u]

    def minimal(self) -> list[int]:
        return [i for i, d in enumerate(self.down) if not d]

    def subposet(self, indices: Iterable[int]) -> Poset:
        keep = sorted(set(indices))
        pos = {old: new for new, old in enumerate(keep)}
        return Poset(
            [self.labels[i] for i in keep],
            [[pos[j] for j in self.up[i] if j in pos] for i in keep],
            check=False,
        )

    def opposite(self) -> Poset:
        n = len(self)
        return Poset(
            [self.labels[n - 1 - i] for i in range(n)],
            [[n - 1 - j for j in self.down[n - 1 - i]] for i in range(n)],
            check=False,
        )

    @cached_property
    def dimension(self) -> int:
        """Length of the longest chain (-1 for the empty poset)."""
        height = [0] * len(self)
        for i in range(len(self) - 1, -1, -1):
            height[i] = 1 + max((height[j] for j in self.up[i]), default=0)
        return max(height, default=0) - 1

    def chain_counts(self) -> list[int]:
        """f-vector of the order complex, by dynamic programming."""
        n = len(self)
        if n == 0:
            return []
        dim = self.dimension
        cnt = np.zeros((n, dim + 1), dtype=object)
        for i in range(n - 1, -1, -1):
            cnt[i, 0] = 1
            for j in self.up[i]:
                cnt[i, 1:] += cnt[j, :-1]
        return [int(x) for x in cnt.sum(axis=0)]


def has_terminal(p: Poset) -> bool:
    return len(p) > 0 and len(p.maximal()) == 1


def has_initial(p: Poset) -> bool:
    return len(p) > 0 and len(p.minimal()) == 1


def subspace_poset(subspaces: Iterable[Subspace]) -> Poset:
    """Subspaces ordered by inclusion."""
    subs = sorted(set(subspaces), key=lambda s: (s.dim, s.basis))
    up = []
    for i, a in enumerate(subs):
        up.append([j for j in range(i + 1, len(subs)) if subs[j].dim > a.dim and fl.contains(subs[j], a)])
    return Poset(subs, up, check=False)


def antichain(labels: Sequence[Hashable]) -> Poset:
    return Poset(labels, [[] for _ in labels], check=False)


def chain_poset(n: int) -> Poset:
    """The totally ordered set 0 < 1 < ... < n-1."""
    return Poset(list(range(n)), [range(i + 1, n) for i in range(n)], check=False)


def join(p: Poset, q: Poset) -> Poset:
    """Disjoint union with every element of p below every element of q."""
    if set(p.labels) & set(q.labels):
        plab = [(0, x) for x in p.labels]
        qlab = [(1, x) for x in q.labels]
    else:
        plab, qlab = p.labels, q.labels
    m, n = len(p), len(q)
    up = [list(u) + list(range(m, m + n)) for u in p.up]
    up += [[m + j for j in u] for u in q.up]
    return Poset(plab + qlab, up, check=False)


def suspension(p: Poset) -> Poset:
    return join(antichain(["S-", "S+"]), p)


@dataclass(frozen=True)
class JVertex:
    factor: int
    side: int
    name: str
    vector: tuple[int, ...]


def sphere_J(space: SymplecticSpace, x: Sequence[int] | None = None) -> Poset:
    """{x, xbar} * {x_1, xbar_1} * ... * {x_r, xbar_r} with xbar = 0.

    ``x`` defaults to the sum of all x_i and xbar_i.
    """
    p, r, n = space.p, space.r, space.dim
    if x is None:
        x = tuple(1 if i < 2 * r else 0 for i in range(n))
    x = fl.vec(x, p)
    out = antichain([JVertex(0, 0, "x", x), JVertex(0, 1, "xbar", fl.zero(n))])
    for i in range(1, r + 1):
        out = join(out, antichain([JVertex(i, 0, f"x{i}", space.x(i)), JVertex(i, 1, f"xbar{i}", space.xbar(i))]))
    return out


# -- coset posets ------------------------------------------------------------


@dataclass(frozen=True)
class CosetLabel:
    subgroup: int
    rep: int


class CosetPoset(Poset):
    """Left cosets gA (A in a collection) ordered by inclusion.

    Elements are sorted by (|A|, position of A, minimal element of gA),
    which is a linear extension.  ``keys`` holds an optional descriptive
    key per subgroup (for example the Subspace it came from).
    """

    def __init__(self, group: GroupModel, subgroups: Sequence[SubgroupSet], keys: Sequence[Hashable],
                 labels, up, reps: list[np.ndarray]):
        super().__init__(labels, up, check=False)
        self.group = group
        self.subgroups = list(subgroups)
        self.keys = list(keys)
        self.key_index = {k: i for i, k in enumerate(self.keys)}
        self.reps = reps

    def coset_index(self, g: int, subgroup: int) -> int:
        return self.index[CosetLabel(subgroup, int(self.reps[subgroup][g]))]

    def coset_of(self, i: int) -> GroupCoset:
        lab = self.labels[i]
        return GroupCoset(self.subgroups[lab.subgroup], lab.rep)

    def elements_of(self, i: int) -> frozenset[int]:
        return self.coset_of(i).elements

    def describe(self, i: int) -> str:
        lab = self.labels[i]
        return f"{self.group.labels[lab.rep]}*{self.keys[lab.subgroup]}"


def coset_poset(
    group: GroupModel,
    collection: Sequence[SubgroupSet],
    keys: Sequence[Hashable] | None = None,
    restrict_to: Iterable[int] | None = None,
    guard: int = MAX_ELEMENTS,
) -> CosetPoset:
    """C_G F, or C_{gH} F when ``restrict_to`` lists the elements of gH.

    In relative mode only cosets meeting ``restrict_to`` are kept.
    """
    if keys is None:
        keys = list(collection)
    if len(set(s.members for s in collection)) != len(collection):
        raise PosetError("collection members are not pairwise distinct")
    for s in collection:
        if s.parent is not group:
            raise PosetError("collection member is not a subgroup of the given group")
    order = sorted(range(len(collection)), key=lambda i: (collection[i].order, sorted(collection[i].members)))
    subs = [collection[i] for i in order]
    keys = [keys[i] for i in order]
    reps = [s.coset_reps() for s in subs]
    restrict = None if restrict_to is None else np.array(sorted(set(restrict_to)), dtype=np.int64)
    total = 0
    per_sub = []
    for r in reps:
        rr = np.unique(r if restrict is None else r[restrict])
        per_sub.append(rr)
        total += len(rr)
    if total > guard:
        raise GuardExceeded(f"coset poset would have {total} elements (guard {guard})")
    labels = [CosetLabel(a, int(rep)) for a, rr in enumerate(per_sub) for rep in rr]
    idx = {lab: i for i, lab in enumerate(labels)}
    supers = [[b for b in range(len(subs)) if subs[a].order < subs[b].order and subs[a].members < subs[b].members]
              for a in range(len(subs))]
    up = []
    for lab in labels:
        up.append([idx[CosetLabel(b, int(reps[b][lab.rep]))] for b in supers[lab.subgroup]])
    return CosetPoset(group, subs, keys, labels, up, reps)


def subspace_coset_poset(
    p: int,
    n: int,
    subspaces: Sequence[Subspace],
    restrict_to: Subspace | tuple[Sequence[int], Subspace] | None = None,
    group: GroupModel | None = None,
) -> CosetPoset:
    """Vector-space mode: cosets v + A of subspaces of F_p^n.

    ``restrict_to`` is a subspace H or a pair (g, H) standing for g + H.
    """
    g = group if group is not None else _vector_group(p, n)
    coll = [g.subgroup_from_labels(a.elements()) for a in subspaces]
    restrict = None
    if restrict_to is not None:
        if isinstance(restrict_to, Subspace):
            shift, h = fl.zero(n), restrict_to
        else:
            shift, h = restrict_to
        restrict = [g.index[fl.add(shift, w, p)] for w in h.elements()]
    return coset_poset(g, coll, keys=list(subspaces), restrict_to=restrict)


_VG_CACHE: dict[tuple[int, int], GroupModel] = {}


def _vector_group(p: int, n: int) -> GroupModel:
    if (p, n) not in _VG_CACHE:
        _VG_CACHE[(p, n)] = vector_group(p, n)
    return _VG_CACHE[(p, n)]


def collection_vee(collection: Sequence, h, ambient) -> list:
    """Members A with A H = G.

    Subgroup mode: ``ambient`` is the GroupModel and ``h`` a SubgroupSet
    (assumed normal).  Vector mode: ``h`` is a Subspace and ``ambient`` the
    full space (or anything, it is recomputed); the test is A + H = V.
    """
    if isinstance(h, Subspace):
        full = fl.full_space(h.p, h.n)
        return [a for a in collection if fl.subspace_sum(a, h) == full]
    out = []
    for a in collection:
        inter = len(a.members & h.members)
        if a.order * h.order == ambient.order * inter:
            out.append(a)
    return out


def proper_subspaces(p: int, n: int, nonzero: bool = False) -> list[Subspace]:
    """T(V), or T°(V) with ``nonzero``."""
    lo = 1 if nonzero else 0
    return [s for s in fl.all_subspaces(p, n) if lo <= s.dim < n]


# -- fibers ------------------------------------------------------------------


def fiber(f, y: int, side: str = "under") -> tuple[Poset, list[int]]:
    """{x : f(x) <= y} (``under``) or {x : f(x) >= y} (``over``), with source indices."""
    if not 0 <= y < len(f.target):
        raise PosetError(f"{y} is not an element of the target")
    if side == "under":
        keep = [i for i, fx in enumerate(f.image) if f.target.leq(fx, y)]
    elif side == "over":
        keep = [i for i, fx in enumerate(f.image) if f.target.leq(y, fx)]
    else:
        raise PosetError(f"unknown fiber side {side!r}")
    return f.source.subposet(keep), keep


# -- simplicial complexes ------------------------------------------------------


@dataclass
class SimplicialComplex:
    """Simplices as strictly increasing vertex tuples, grouped by dimension."""

    simplices_by_dim: list[list[tuple[int, ...]]]
    vertex_labels: list | None = field(default=None, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.simplices_by_dim) - 1

    @property
    def f_vector(self) -> list[int]:
        return [len(s) for s in self.simplices_by_dim]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    def index(self, k: int) -> dict[tuple[int, ...], int]:
        cache = self.__dict__.setdefault("_index", {})
        if k not in cache:
            cache[k] = {s: i for i, s in enumerate(self.simplices_by_dim[k])}
        return cache[k]

    def check_face_closed(self) -> None:
        for k in range(1, len(self.simplices_by_dim)):
            lower = self.index(k - 1)
            for s in self.simplices_by_dim[k]:
                for i in range(len(s)):
                    if s[:i] + s[i + 1:] not in lower:
                        raise PosetError(f"face of {s} missing from the complex")

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[int]]) -> SimplicialComplex:
        faces: set[tuple[int, ...]] = set()
        for f in facets:
            f = tuple(sorted(set(f)))
            for k in range(1, len(f) + 1):
                faces.update(itertools.combinations(f, k))
        top = max((len(s) for s in faces), default=0)
        by_dim = [sorted(s for s in faces if len(s) == k + 1) for k in range(top)]
        return cls(by_dim)

    def to_text(self) -> str:
        """One simplex per line: the dimension, then its vertices."""
        lines = []
        for k, simplices in enumerate(self.simplices_by_dim):
            for s in simplices:
                lines.append(f"{k} " + " ".join(map(str, s)))
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> SimplicialComplex:
        by_dim: list[list[tuple[int, ...]]] = []
        for line in text.splitlines():
            if not line.strip():
                continue
            k, *verts = map(int, line.split())
            if len(verts) != k + 1:
                raise PosetError(f"line {line!r}: {len(verts)} vertices for dimension {k}")
            while len(by_dim) <= k:
                by_dim.append([])
            by_dim[k].append(tuple(verts))
        out = cls([sorted(s) for s in by_dim])
        out.check_face_closed()
        return out


def order_complex(p: Poset, guard: int = MAX_SIMPLICES) -> SimplicialComplex:
    """Nerve of ``p``: k-simplices are chains x_0 < ... < x_k."""
    total = sum(p.chain_counts())
    if total > guard:
        raise GuardExceeded(f"order complex would have {total} simplices (guard {guard})")
    by_dim: list[list[tuple[int, ...]]] = [[] for _ in range(p.dimension + 1)]
    up = p.up

    def extend(chain: tuple[int, ...], top: int) -> None:
        for w in up[top]:
            c = chain + (w,)
            by_dim[len(c) - 1].append(c)
            if up[w]:
                extend(c, w)

    for v in range(len(p)):
        by_dim[0].append((v,))
        extend((v,), v)
    return SimplicialComplex(by_dim, vertex_labels=p.labels)


def barycentric(obj: Poset | SimplicialComplex) -> Poset:
    """Poset of simplices ordered by the face relation.

    Labels are the simplices themselves (vertex tuples of the input).
    """
    c = order_complex(obj) if isinstance(obj, Poset) else obj
    simplices = [s for layer in c.simplices_by_dim for s in layer]
    idx = {s: i for i, s in enumerate(simplices)}
    up: list[list[int]] = [[] for _ in simplices]
    for i, s in enumerate(simplices):
        # every face of s lies below s
        for k in range(1, len(s)):
            for face in itertools.combinations(s, k):
                up[idx[face]].append(i)
    return Poset(simplices, up, check=False)


# -- maps ----------------------------------------------------------------------


class PosetMapError(PosetError):
    pass


class PosetMap:
    """A total assignment source -> target, checked to preserve order."""

    def __init__(self, source: Poset, target: Poset, image: Sequence[int], name: str = "", check: bool = True):
        self.source = source
        self.target = target
        self.image = [int(y) for y in image]
        self.name = name
        if len(self.image) != len(source):
            raise PosetMapError("image must assign every source element")
        if check:
            self.check_order()

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __repr__(self) -> str:
        return f"PosetMap({self.name or '?'}: {len(self.source)} -> {len(self.target)})"

    def check_order(self) -> None:
        ups = self.target.upsets
        for i, u in enumerate(self.source.up):
            fi = self.image[i]
            for j in u:
                fj = self.image[j]
                if fj != fi and fj not in ups[fi]:
                    raise PosetMapError(f"{self.name or 'map'} is not order preserving at {i} < {j}")

    def compose(self, first: PosetMap) -> PosetMap:
        """self after first."""
        if first.target is not self.source:
            raise PosetMapError("maps are not composable")
        return PosetMap(first.source, self.target, [self.image[y] for y in first.image],
                        name=f"{self.name}*{first.name}", check=False)

    def fibers_have_terminal(self, side: str = "under") -> list[int]:
        """Target elements whose fiber lacks a terminal (``under``) or initial (``over``) object."""
        bad = []
        for y in range(len(self.target)):
            sub, _ = fiber(self, y, side)
            ok = has_terminal(sub) if side == "under" else has_initial(sub)
            if not ok:
                bad.append(y)
        return bad
