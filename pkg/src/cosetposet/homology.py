"""Integral simplicial homology by sparse elimination plus Smith normal form.

The reduction works on the whole chain complex at once.  Whenever a
boundary matrix has an entry +-1 joining a k-cell tau to a (k-1)-cell
sigma, the pair is cancelled: the other columns of tau's degree get a rank
one correction, and the row of tau and the column of sigma in the adjacent
matrices are dropped.  This preserves integral homology exactly.  Pairs
whose row or column is a singleton are cancelled first since they cause no
fill-in.  What survives (usually very little) goes through a dense Smith
normal form with Python integers.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

from .posets import PosetError, PosetMap, SimplicialComplex, barycentric, order_complex


class HomologyError(ValueError):
    pass


# -- matrices ------------------------------------------------------------------


@dataclass
class SparseMatrix:
    """Column-major sparse integer matrix: ``cols[j]`` maps row -> value."""

    nrows: int
    ncols: int
    cols: list[dict[int, int]]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> SparseMatrix:
        m = len(rows)
        n = len(rows[0]) if m else 0
        cols = [{i: int(rows[i][j]) for i in range(m) if rows[i][j]} for j in range(n)]
        return cls(m, n, cols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def to_coordinate_text(self) -> str:
        """``row col value`` per line, 0-based, column-major."""
        lines = [f"{i} {j} {v}" for j, col in enumerate(self.cols) for i, v in sorted(col.items())]
        return "\n".join(lines) + ("\n" if lines else "")

    def matmul(self, other: SparseMatrix) -> SparseMatrix:
        if self.ncols != other.nrows:
            raise HomologyError("shape mismatch")
        out = []
        for col in other.cols:
            acc: dict[int, int] = {}
            for k, v in col.items():
                for i, w in self.cols[k].items():
                    acc[i] = acc.get(i, 0) + v * w
            out.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, out)

    def apply(self, vec: dict[int, int]) -> dict[int, int]:
        acc: dict[int, int] = {}
        for k, v in vec.items():
            for i, w in self.cols[k].items():
                acc[i] = acc.get(i, 0) + v * w
        return {i: v for i, v in acc.items() if v}


@dataclass
class ChainComplex:
    """``boundary[k]`` is d_k: C_k -> C_{k-1} for k >= 1."""

    dims: list[int]
    boundary: dict[int, SparseMatrix]
    complex: SimplicialComplex | None = field(default=None, repr=False)

    def check(self) -> None:
        for k, d in self.boundary.items():
            if d.ncols != self.dims[k] or d.nrows != self.dims[k - 1]:
                raise HomologyError(f"d_{k} has shape {d.nrows}x{d.ncols}")
        for k in self.boundary:
            if k - 1 in self.boundary:
                if self.boundary[k - 1].matmul(self.boundary[k]).nnz():
                    raise HomologyError(f"d_{k - 1} d_{k} != 0")


def chain_complex(c: SimplicialComplex, check: bool = True) -> ChainComplex:
    """Simplicial boundary with sign (-1)^i for dropping the i-th vertex."""
    boundary = {}
    for k in range(1, len(c.simplices_by_dim)):
        lower = c.index(k - 1)
        cols = []
        for s in c.simplices_by_dim[k]:
            col = {}
            for i in range(k + 1):
                face = s[:i] + s[i + 1:]
                try:
                    col[lower[face]] = -1 if i % 2 else 1
                except KeyError:
                    raise HomologyError(f"face {face} of {s} missing from the complex") from None
            cols.append(col)
        boundary[k] = SparseMatrix(len(c.simplices_by_dim[k - 1]), len(cols), cols)
    cc = ChainComplex(c.f_vector, boundary, c)
    if check:
        cc.check()
    return cc


# -- dense Smith normal form ---------------------------------------------------------


def _dense_snf(a: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of a dense integer matrix (modified in place)."""
    m = len(a)
    n = len(a[0]) if m else 0
    factors = []
    t = 0
    while t < m and t < n:
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
        while True:
            piv = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // piv
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            if rt[j]:
                                ri[j] -= q * rt[j]
                    if a[i][t]:
                        done = False
            rt = a[t]
            for j in range(t + 1, n):
                if rt[j]:
                    q = rt[j] // piv
                    if q:
                        for i in range(t, m):
                            if a[i][t]:
                                a[i][j] -= q * a[i][t]
                    if rt[j]:
                        done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % piv), None)
                if bad is None:
                    break
                i = bad[0]
                for j in range(t, n):
                    a[t][j] += a[i][j]
                continue
            # move the smallest nonzero entry of row t / column t to the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(cand)
            a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        factors.append(abs(a[t][t]))
        t += 1
    return factors


# -- sparse reduction ------------------------------------------------------------


class _Reducer:
    """Unit-pivot cancellation across all boundary matrices of a complex.

    ``cols[k][tau]`` and ``rows[k][sigma]`` mirror the entries of d_k.
    """

    def __init__(self, dims: dict[int, int], boundary: dict[int, SparseMatrix]):
        self.degrees = sorted(dims)
        self.alive = {k: set(range(dims[k])) for k in self.degrees}
        self.cols: dict[int, dict[int, dict[int, int]]] = {}
        self.rows: dict[int, dict[int, dict[int, int]]] = {}
        for k, d in boundary.items():
            cols = {j: dict(c) for j, c in enumerate(d.cols)}
            rows: dict[int, dict[int, int]] = {i: {} for i in range(d.nrows)}
            for j, c in cols.items():
                for i, v in c.items():
                    rows[i][j] = v
            self.cols[k] = cols
            self.rows[k] = rows
        self.queue: deque[tuple[int, int, int]] = deque()
        self.cancelled = {k: 0 for k in boundary}

    def _push_col(self, k: int, tau: int) -> None:
        if len(self.cols[k][tau]) == 1:
            self.queue.append((k, 0, tau))

    def _push_row(self, k: int, sigma: int) -> None:
        if len(self.rows[k][sigma]) == 1:
            self.queue.append((k, 1, sigma))

    def cancel(self, k: int, sigma: int, tau: int) -> None:
        cols, rows = self.cols[k], self.rows[k]
        a = cols[tau][sigma]
        col_t = cols.pop(tau)
        row_s = rows.pop(sigma)
        for s2 in col_t:
            if s2 != sigma:
                del rows[s2][tau]
        for t2 in row_s:
            if t2 != tau:
                del cols[t2][sigma]
        others = [(s2, v) for s2, v in col_t.items() if s2 != sigma]
        for t2, u in row_s.items():
            if t2 == tau:
                continue
            f = u * a
            c2 = cols[t2]
            for s2, v in others:
                nv = c2.get(s2, 0) - v * f
                if nv:
                    c2[s2] = nv
                    rows[s2][t2] = nv
                else:
                    del c2[s2]
                    del rows[s2][t2]
            self._push_col(k, t2)
        for s2, _ in others:
            self._push_row(k, s2)
        if k + 1 in self.rows:
            up_c, up_r = self.cols[k + 1], self.rows[k + 1]
            for rho in up_r.pop(tau):
                del up_c[rho][tau]
                self._push_col(k + 1, rho)
        if k - 1 in self.cols:
            lo_c, lo_r = self.cols[k - 1], self.rows[k - 1]
            for phi in lo_c.pop(sigma):
                del lo_r[phi][sigma]
                self._push_row(k - 1, phi)
        self.alive[k].discard(tau)
        self.alive[k - 1].discard(sigma)
        self.cancelled[k] += 1

    def _drain(self) -> None:
        while self.queue:
            k, kind, cell = self.queue.popleft()
            if kind == 0:
                col = self.cols[k].get(cell)
                if col is None or len(col) != 1:
                    continue
                ((sigma, v),) = col.items()
                if v in (1, -1):
                    self.cancel(k, sigma, cell)
            else:
                row = self.rows[k].get(cell)
                if row is None or len(row) != 1:
                    continue
                ((tau, v),) = row.items()
                if v in (1, -1):
                    self.cancel(k, cell, tau)

    def run(self) -> None:
        for k in self.cols:
            for tau in self.cols[k]:
                self._push_col(k, tau)
            for sigma in self.rows[k]:
                self._push_row(k, sigma)
        self._drain()
        while True:
            cand = []
            for k in self.cols:
                rows = self.rows[k]
                for tau, col in self.cols[k].items():
                    lc = len(col) - 1
                    for sigma, v in col.items():
                        if v == 1 or v == -1:
                            cand.append((lc * (len(rows[sigma]) - 1), k, sigma, tau))
            if not cand:
                return
            cand.sort()
            budget = max(64, len(cand) // 8)
            done = 0
            for cost, k, sigma, tau in cand:
                col = self.cols[k].get(tau)
                if col is None or col.get(sigma) not in (1, -1):
                    continue
                if (len(col) - 1) * (len(self.rows[k][sigma]) - 1) > 2 * cost + 4:
                    continue
                self.cancel(k, sigma, tau)
                self._drain()
                done += 1
                if done >= budget:
                    break

    def remainder(self, k: int) -> tuple[list[list[int]], int, int]:
        """Dense d_k restricted to surviving cells."""
        rows = sorted(self.alive[k - 1])
        cols = sorted(self.alive[k])
        pos = {s: i for i, s in enumerate(rows)}
        dense = [[0] * len(cols) for _ in rows]
        for j, tau in enumerate(cols):
            for sigma, v in self.cols[k][tau].items():
                dense[pos[sigma]][j] = v
        return dense, len(rows), len(cols)


@dataclass
class SNFResult:
    factors: list[int]

    @property
    def rank(self) -> int:
        return len(self.factors)


def smith_normal_form(m: SparseMatrix | Sequence[Sequence[int]]) -> SNFResult:
    """Nonzero invariant factors d_1 | d_2 | ... (transforms are not returned)."""
    if not isinstance(m, SparseMatrix):
        m = SparseMatrix.from_dense(m) if len(m) else SparseMatrix(0, 0, [])
    red = _Reducer({0: m.nrows, 1: m.ncols}, {1: m})
    red.run()
    dense, _, _ = red.remainder(1)
    rest = _dense_snf(dense) if dense and dense[0] else []
    return SNFResult([1] * red.cancelled[1] + sorted(rest))


# -- homology -------------------------------------------------------------------


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def as_record(self) -> dict:
        return {"degree": self.degree, "betti": self.betti, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def homology(cc: ChainComplex | SimplicialComplex, reduced: bool = False) -> list[HomologyGroup]:
    """H_k for k = 0..top (k = -1 included in reduced mode).

    Reduced homology adds the augmentation C_0 -> Z as d_0, so the empty
    complex has reduced H_{-1} = Z.
    """
    if isinstance(cc, SimplicialComplex):
        cc = chain_complex(cc)
    dims = {k: n for k, n in enumerate(cc.dims)}
    boundary = dict(cc.boundary)
    if reduced:
        dims[-1] = 1
        n0 = dims.setdefault(0, 0)
        boundary[0] = SparseMatrix(1, n0, [{0: 1} for _ in range(n0)])
    red = _Reducer(dims, boundary)
    red.run()
    rank: dict[int, int] = {}
    tors: dict[int, list[int]] = {}
    for k in boundary:
        dense, nr, nc = red.remainder(k)
        f = _dense_snf(dense) if nr and nc else []
        rank[k] = len(f)
        tors[k - 1] = sorted(x for x in f if x > 1)
    out = []
    for k in sorted(dims):
        b = len(red.alive[k]) - rank.get(k, 0) - rank.get(k + 1, 0)
        out.append(HomologyGroup(k, b, tuple(tors.get(k, []))))
    return out


def reduced_homology(c: SimplicialComplex | ChainComplex) -> list[HomologyGroup]:
    return homology(c, reduced=True)


def homology_of_poset(p, reduced: bool = True) -> list[HomologyGroup]:
    return homology(order_complex(p), reduced=reduced)


def euler_characteristic(c: SimplicialComplex) -> int:
    return c.euler_characteristic()


def betti_euler(groups: Iterable[HomologyGroup]) -> int:
    """Alternating Betti sum; on reduced groups this is chi - 1."""
    return sum((-1) ** g.degree * g.betti for g in groups)


def concentrated_in(groups: Sequence[HomologyGroup], top: int) -> bool:
    """Reduced homology zero below ``top`` and free in degree ``top``."""
    return all(g.is_zero() for g in groups if g.degree != top) and all(
        not g.torsion for g in groups if g.degree == top
    )


# -- cycles -------------------------------------------------------------------------


@dataclass
class Cycle:
    """Integer chain on k-simplices (vertex tuples)."""

    degree: int
    coeffs: dict[tuple[int, ...], int]

    def boundary(self) -> dict[tuple[int, ...], int]:
        acc: dict[tuple[int, ...], int] = {}
        for s, c in self.coeffs.items():
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                acc[f] = acc.get(f, 0) + (-c if i % 2 else c)
        return {f: v for f, v in acc.items() if v}

    def is_cycle(self) -> bool:
        return self.degree == 0 or not self.boundary()

    def __bool__(self) -> bool:
        return bool(self.coeffs)


def pushforward(f: PosetMap, z: Cycle) -> Cycle:
    """Image chain under the simplicial map of ``f``; collapsed simplices drop out."""
    if not z.is_cycle():
        raise HomologyError("pushforward expects a cycle")
    acc: dict[tuple[int, ...], int] = {}
    for s, c in z.coeffs.items():
        img = tuple(f.image[v] for v in s)
        if len(set(img)) < len(img):
            continue
        if any(img[i] >= img[i + 1] for i in range(len(img) - 1)):
            raise HomologyError("image chain is not increasing; map is not order preserving")
        acc[img] = acc.get(img, 0) + c
    return Cycle(z.degree, {s: v for s, v in acc.items() if v})


@dataclass
class BoundaryCertificate:
    is_boundary: bool
    rank_without: int
    rank_with: int
    integral: bool | None = None


def boundary_test(z: Cycle, c: SimplicialComplex, integral: bool = False) -> BoundaryCertificate:
    """Compare rank d_{k+1} with rank [d_{k+1} | z].

    Over Q, z is a boundary iff the ranks agree.  With ``integral`` the
    products of invariant factors are compared as well, which decides
    solvability over Z once the ranks agree.
    """
    if not z.is_cycle():
        raise HomologyError("not a cycle")
    k = z.degree
    idx = c.index(k) if k < len(c.simplices_by_dim) else {}
    missing = [s for s in z.coeffs if s not in idx]
    if missing:
        raise HomologyError(f"simplex {missing[0]} is not in the complex")
    zcol = {idx[s]: v for s, v in z.coeffs.items()}
    if k + 1 < len(c.simplices_by_dim):
        d = chain_complex(c, check=False).boundary[k + 1]
        cols = d.cols
    else:
        cols = []
    nrows = len(c.simplices_by_dim[k])
    a = smith_normal_form(SparseMatrix(nrows, len(cols), [dict(x) for x in cols]))
    b = smith_normal_form(SparseMatrix(nrows, len(cols) + 1, [dict(x) for x in cols] + [zcol]))
    cert = BoundaryCertificate(a.rank == b.rank, a.rank, b.rank)
    if integral:
        cert.integral = cert.is_boundary and prod(a.factors) == prod(b.factors)
    return cert


def is_boundary(z: Cycle, c: SimplicialComplex, integral: bool = False) -> bool:
    cert = boundary_test(z, c, integral)
    return bool(cert.integral) if integral else cert.is_boundary


def fundamental_cycle(J, sd=None) -> tuple[Cycle, object]:
    """Signed sum of the maximal simplices of the subdivided join sphere.

    A maximal simplex of sd J is a flag built by adding one vertex per join
    factor; its sign is the parity of that order times (-1) for every
    factor where the second point was used.  Returns (cycle on the order
    complex of sd J, sd J).
    """
    if sd is None:
        sd = barycentric(J)
    factors: dict[int, list[int]] = {}
    for i, lab in enumerate(J.labels):
        factors.setdefault(lab.factor, []).append(i)
    groups = [sorted(factors[f], key=lambda i: J.labels[i].side) for f in sorted(factors)]
    if any(len(g) != 2 for g in groups):
        raise HomologyError("fundamental_cycle expects a join of 2-point antichains")
    m = len(groups)
    coeffs: dict[tuple[int, ...], int] = {}
    for sides in itertools.product((0, 1), repeat=m):
        verts = [groups[f][s] for f, s in enumerate(sides)]
        eps = (-1) ** sum(sides)
        for perm in itertools.permutations(range(m)):
            sign = eps * _parity(perm)
            flag = tuple(sd.index[tuple(sorted(verts[q] for q in perm[: t + 1]))] for t in range(m))
            coeffs[flag] = sign
    z = Cycle(m - 1, coeffs)
    if not z.is_cycle():
        raise HomologyError("orientation of the join sphere is inconsistent")
    return z, sd


def _parity(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


# -- fundamental group report -------------------------------------------------------


TIETZE_BUDGET = 10 ** 6


@dataclass
class Pi1Report:
    status: str
    abelianization: HomologyGroup
    generators: int
    relators: int
    remaining_generators: int

    def as_record(self) -> dict:
        return {
            "status": self.status,
            "abelianization": str(self.abelianization),
            "generators": self.generators,
            "relators": self.relators,
            "remaining_generators": self.remaining_generators,
        }


def _free_reduce(word: list[int]) -> list[int]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    while len(out) > 1 and out[0] == -out[-1]:
        out = out[1:-1]
    return out


def pi1_report(c: SimplicialComplex, budget: int = TIETZE_BUDGET) -> Pi1Report:
    """Edge-path presentation plus greedy Tietze elimination.

    Generators are non-tree edges of a BFS spanning tree; each triangle
    gives a relator.  A relator in which some generator occurs exactly once
    eliminates that generator.  ``trivial`` means every generator was
    eliminated; ``nontrivial`` that H_1 is nonzero; else ``unknown``.
    """
    verts = len(c.simplices_by_dim[0]) if c.simplices_by_dim else 0
    h = homology(c, reduced=True)
    h1 = next((g for g in h if g.degree == 1), HomologyGroup(1, 0))
    h0 = next((g for g in h if g.degree == 0), HomologyGroup(0, 0))
    if verts == 0 or not h0.is_zero():
        raise HomologyError("pi1_report needs a non-empty connected complex")
    edges = c.simplices_by_dim[1] if len(c.simplices_by_dim) > 1 else []
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(verts)}
    for e, (a, b) in enumerate(edges):
        adj[a].append((b, e))
        adj[b].append((a, e))
    tree = set()
    seen = {0}
    q = deque([0])
    while q:
        v = q.popleft()
        for w, e in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(e)
                q.append(w)
    gen = {}
    for e in range(len(edges)):
        if e not in tree:
            gen[edges[e]] = len(gen) + 1

    def letter(a: int, b: int) -> list[int]:
        if a < b:
            g = gen.get((a, b))
            return [g] if g else []
        g = gen.get((b, a))
        return [-g] if g else []

    relators = []
    if len(c.simplices_by_dim) > 2:
        for a, b, cc in c.simplices_by_dim[2]:
            w = _free_reduce(letter(a, b) + letter(b, cc) + letter(cc, a))
            if w:
                relators.append(w)
    n_rel = len(relators)
    alive = set(gen.values())
    rels = dict(enumerate(relators))
    occ: dict[int, set[int]] = {g: set() for g in alive}
    for rid, r in rels.items():
        for x in r:
            occ[abs(x)].add(rid)
    heap = [(len(r), rid) for rid, r in rels.items()]
    heapq.heapify(heap)
    steps = 0
    while heap and alive and steps < budget:
        length, rid = heapq.heappop(heap)
        r = rels.get(rid)
        if r is None or len(r) != length:
            continue
        counts: dict[int, int] = {}
        for x in r:
            counts[abs(x)] = counts.get(abs(x), 0) + 1
        g = next((x for x in r if counts[abs(x)] == 1), None)
        if g is None:
            continue
        # r = u g v  =>  g = u^-1 v^-1
        i = r.index(g)
        u, v = r[:i], r[i + 1:]
        repl = [-x for x in reversed(u)] + [-x for x in reversed(v)]
        if g < 0:
            repl = [-x for x in reversed(repl)]
        gid = abs(g)
        del rels[rid]
        for x in set(map(abs, r)):
            occ[x].discard(rid)
        inv_repl = [-y for y in reversed(repl)]
        for rid2 in sorted(occ.pop(gid)):
            old = rels[rid2]
            out: list[int] = []
            for x in old:
                if x == gid:
                    out.extend(repl)
                elif x == -gid:
                    out.extend(inv_repl)
                else:
                    out.append(x)
            steps += len(out)
            out = _free_reduce(out)
            for x in set(map(abs, old)) - {gid}:
                occ[x].discard(rid2)
            for x in out:
                occ[abs(x)].add(rid2)
            rels[rid2] = out
            heapq.heappush(heap, (len(out), rid2))
        alive.discard(gid)
    if not alive:
        status = "trivial"
    elif not h1.is_zero():
        status = "nontrivial"
    else:
        status = "unknown"
    return Pi1Report(status, h1, len(gen), n_rel, len(alive))


__all__ = [
    "BoundaryCertificate",
    "ChainComplex",
    "Cycle",
    "HomologyError",
    "HomologyGroup",
    "Pi1Report",
    "PosetError",
    "SNFResult",
    "SparseMatrix",
    "betti_euler",
    "boundary_test",
    "chain_complex",
    "concentrated_in",
    "euler_characteristic",
    "fundamental_cycle",
    "homology",
    "homology_of_poset",
    "is_boundary",
    "pi1_report",
    "pushforward",
    "reduced_homology",
    "smith_normal_form",
]
