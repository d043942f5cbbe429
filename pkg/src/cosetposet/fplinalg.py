"""Exact linear algebra over prime fields F_p.

Vectors are plain tuples of residues.  Subspaces are stored by their
reduced row-echelon basis (leftmost pivots), so two subspaces are equal
exactly when their representations are equal, and they can be used as
dictionary keys everywhere else in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Vector = tuple[int, ...]

MAX_PRIME = 97


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if self.p > MAX_PRIME:
            raise ValueError(f"prime {self.p} exceeds the supported bound {MAX_PRIME}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return pow(a, -1, self.p)


def check_prime(p: int) -> None:
    FieldSpec(p)


def vec(coords: Iterable[int], p: int) -> Vector:
    return tuple(c % p for c in coords)


def add(u: Sequence[int], v: Sequence[int], p: int) -> Vector:
    return tuple((a + b) % p for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int], p: int) -> Vector:
    return tuple((a - b) % p for a, b in zip(u, v))


def scale(c: int, v: Sequence[int], p: int) -> Vector:
    return tuple((c * a) % p for a in v)


def unit(i: int, n: int) -> Vector:
    return tuple(1 if k == i else 0 for k in range(n))


def zero(n: int) -> Vector:
    return (0,) * n


def all_vectors(p: int, n: int) -> Iterator[Vector]:
    """All of F_p^n in lexicographic order (matches :func:`encode`)."""
    return itertools.product(range(p), repeat=n)


def encode(v: Sequence[int], p: int) -> int:
    """Base-p integer of ``v`` (first coordinate most significant)."""
    k = 0
    for c in v:
        k = k * p + c
    return k


def decode(k: int, p: int, n: int) -> Vector:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        k, out[i] = divmod(k, p)
    return tuple(out)


def rref(rows: Iterable[Sequence[int]], p: int, n: int) -> tuple[Vector, ...]:
    """Reduced row-echelon form with zero rows dropped."""
    m = [list(r) for r in rows]
    for r in m:
        if len(r) != n:
            raise ValueError(f"vector of length {len(r)} in ambient dimension {n}")
    m = [[c % p for c in r] for r in m]
    out: list[list[int]] = []
    col = 0
    while m and col < n:
        piv = next((i for i, r in enumerate(m) if r[col]), None)
        if piv is None:
            col += 1
            continue
        row = m.pop(piv)
        s = pow(row[col], -1, p)
        row = [(s * c) % p for c in row]
        for r in itertools.chain(m, out):
            f = r[col]
            if f:
                for j in range(col, n):
                    r[j] = (r[j] - f * row[j]) % p
        m = [r for r in m if any(r)]
        out.append(row)
        col += 1
    out.sort(key=_pivot)
    return tuple(tuple(r) for r in out)


def _pivot(row: Sequence[int]) -> int:
    for i, c in enumerate(row):
        if c:
            return i
    return len(row)


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n held in canonical RREF."""

    p: int
    n: int
    basis: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(_pivot(r) for r in self.basis)

    @property
    def size(self) -> int:
        return self.p ** self.dim

    def __contains__(self, v: Sequence[int]) -> bool:
        return member(v, self)

    def __le__(self, other: Subspace) -> bool:
        return contains(other, self)

    def __lt__(self, other: Subspace) -> bool:
        return self.dim < other.dim and contains(other, self)

    def elements(self) -> list[Vector]:
        """All p^dim vectors of the subspace, sorted."""
        out = []
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            v = [0] * self.n
            for c, row in zip(coeffs, self.basis):
                if c:
                    for j, x in enumerate(row):
                        v[j] += c * x
            out.append(tuple(x % self.p for x in v))
        out.sort()
        return out

    def __repr__(self) -> str:
        rows = ",".join("".join(map(str, r)) for r in self.basis)
        return f"<{rows}>_{self.p}^{self.n}" if rows else f"<0>_{self.p}^{self.n}"


def canonicalize(vectors: Iterable[Sequence[int]], p: int, n: int | None = None) -> Subspace:
    """Span of ``vectors`` as a canonical :class:`Subspace`.

    An empty input gives the zero subspace; ``n`` is then required.
    """
    check_prime(p)
    vectors = [tuple(v) for v in vectors]
    if n is None:
        if not vectors:
            raise ValueError("ambient dimension needed for an empty generating set")
        n = len(vectors[0])
    return Subspace(p, n, rref(vectors, p, n))


def span(vectors: Iterable[Sequence[int]], p: int, n: int | None = None) -> Subspace:
    return canonicalize(vectors, p, n)


def zero_subspace(p: int, n: int) -> Subspace:
    return Subspace(p, n, ())


def full_space(p: int, n: int) -> Subspace:
    return Subspace(p, n, tuple(unit(i, n) for i in range(n)))


def _same_ambient(a: Subspace, b: Subspace) -> None:
    if a.p != b.p or a.n != b.n:
        raise ValueError(f"ambient mismatch: F_{a.p}^{a.n} vs F_{b.p}^{b.n}")


def reduce_mod(v: Sequence[int], a: Subspace) -> Vector:
    """Canonical representative of the coset ``v + a``.

    Coordinates at the pivot columns of ``a`` are cleared, so two vectors
    reduce to the same result exactly when their difference lies in ``a``.
    """
    if len(v) != a.n:
        raise ValueError(f"vector of length {len(v)} in ambient dimension {a.n}")
    p = a.p
    w = [c % p for c in v]
    for row in a.basis:
        j = _pivot(row)
        f = w[j]
        if f:
            for k in range(j, a.n):
                w[k] = (w[k] - f * row[k]) % p
    return tuple(w)


def member(v: Sequence[int], a: Subspace) -> bool:
    return not any(reduce_mod(v, a))


def contains(a: Subspace, b: Subspace) -> bool:
    """True iff ``b`` is a subspace of ``a``."""
    _same_ambient(a, b)
    return b.dim <= a.dim and all(member(r, a) for r in b.basis)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    return Subspace(a.p, a.n, rref(a.basis + b.basis, a.p, a.n))


def intersection(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus: reduce [[a, a], [b, 0]]; rows with empty left half span a ∩ b."""
    _same_ambient(a, b)
    n, p = a.n, a.p
    z = zero(n)
    rows = [r + r for r in a.basis] + [r + z for r in b.basis]
    red = rref(rows, p, 2 * n)
    return Subspace(p, n, rref((r[n:] for r in red if not any(r[:n])), p, n))


def subspace_algebra(a: Subspace, b: Subspace, kind: str):
    """Dispatch for sum / intersection / contains / member.

    For ``member`` the first argument is read as a vector (a 1-row
    subspace or a plain tuple).
    """
    if kind == "sum":
        return subspace_sum(a, b)
    if kind == "intersection":
        return intersection(a, b)
    if kind == "contains":
        return contains(a, b)
    if kind == "member":
        v = a.basis[0] if isinstance(a, Subspace) else a
        return member(v, b)
    raise ValueError(f"unknown subspace operation {kind!r}")


def nullspace(rows: Iterable[Sequence[int]], p: int, n: int) -> Subspace:
    """All x in F_p^n with r·x = 0 for every given row."""
    red = rref(rows, p, n)
    piv = [_pivot(r) for r in red]
    free = [j for j in range(n) if j not in set(piv)]
    basis = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for r, j in zip(red, piv):
            x[j] = (-r[f]) % p
        basis.append(x)
    return Subspace(p, n, rref(basis, p, n))


def dot_complement(a: Subspace) -> Subspace:
    """Orthogonal complement under the standard dot product."""
    return nullspace(a.basis, a.p, a.n)


@dataclass(frozen=True)
class QuotientMap:
    """Coordinates on V/a: read off the non-pivot columns of ``reduce_mod``."""

    kernel: Subspace
    columns: tuple[int, ...]

    @property
    def target_dim(self) -> int:
        return len(self.columns)

    def __call__(self, v: Sequence[int]) -> Vector:
        w = reduce_mod(v, self.kernel)
        return tuple(w[j] for j in self.columns)

    def image(self, b: Subspace) -> Subspace:
        """The subspace (b + a)/a, in quotient coordinates."""
        return canonicalize([self(r) for r in b.basis], self.kernel.p, self.target_dim)

    def lift(self, u: Sequence[int]) -> Vector:
        v = [0] * self.kernel.n
        for j, c in zip(self.columns, u):
            v[j] = c % self.kernel.p
        return tuple(v)


def quotient_coords(a: Subspace) -> QuotientMap:
    piv = set(a.pivots)
    return QuotientMap(a, tuple(j for j in range(a.n) if j not in piv))


def all_subspaces(p: int, n: int, k: int | None = None) -> list[Subspace]:
    """Every subspace of F_p^n (of dimension ``k`` if given), enumerated
    through RREF shapes and sorted by (dim, basis)."""
    check_prime(p)
    dims = range(n + 1) if k is None else [k]
    out = []
    for d in dims:
        for pivots in itertools.combinations(range(n), d):
            slots = [
                (i, j)
                for i, pc in enumerate(pivots)
                for j in range(pc + 1, n)
                if j not in pivots
            ]
            for fill in itertools.product(range(p), repeat=len(slots)):
                rows = [[0] * n for _ in range(d)]
                for i, pc in enumerate(pivots):
                    rows[i][pc] = 1
                for (i, j), c in zip(slots, fill):
                    rows[i][j] = c
                out.append(Subspace(p, n, tuple(tuple(r) for r in rows)))
    out.sort(key=lambda s: (s.dim, s.basis))
    return out


def format_subspace(a: Subspace) -> str:
    """One basis row per line followed by a blank line."""
    sep = "" if a.p <= 10 else " "
    return "".join(sep.join(str(c) for c in r) + "\n" for r in a.basis) + "\n"


def parse_subspace(text: str, p: int, n: int | None = None) -> Subspace:
    """Inverse of :func:`format_subspace`; reading stops at the first blank line."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            break
        parts = line.split() if (" " in line or p > 10) else list(line)
        rows.append(tuple(int(c) for c in parts))
    if n is None:
        if not rows:
            raise ValueError("ambient dimension needed for an empty subspace")
        n = len(rows[0])
    for r in rows:
        if any(not 0 <= c < p for c in r):
            raise ValueError(f"entry out of range for F_{p}: {r}")
    return canonicalize(rows, p, n)
