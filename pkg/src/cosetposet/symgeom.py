"""Alternating forms over F_p, orthogonal complements and isotropic subspaces.

Degenerate forms are allowed: a space may carry a radical, which is how
the almost extraspecial case is modelled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import fplinalg as fl
from .fplinalg import FieldSpec, Subspace, Vector


@dataclass(frozen=True)
class AlternatingForm:
    p: int
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.gram)
        g = self.gram
        for i in range(n):
            if len(g[i]) != n:
                raise ValueError("gram matrix is not square")
            if g[i][i] % self.p:
                raise ValueError("alternating form needs a zero diagonal")
            for j in range(i):
                if (g[i][j] + g[j][i]) % self.p:
                    raise ValueError(f"gram matrix is not skew-symmetric at ({i},{j})")

    @property
    def n(self) -> int:
        return len(self.gram)

    def __call__(self, u: Sequence[int], v: Sequence[int]) -> int:
        g = self.gram
        s = 0
        for i, a in enumerate(u):
            if a:
                row = g[i]
                for j, b in enumerate(v):
                    if b:
                        s += a * row[j] * b
        return s % self.p

    def functional(self, a: Sequence[int]) -> Vector:
        """Coefficients c with c·w = b(w, a)."""
        return tuple(sum(self.gram[k][l] * a[l] for l in range(self.n)) % self.p for k in range(self.n))

    @property
    def radical(self) -> Subspace:
        return fl.nullspace(self.gram, self.p, self.n)

    @property
    def rank_radical(self) -> int:
        return self.radical.dim

    def scaled(self, c: int) -> AlternatingForm:
        return AlternatingForm(self.p, tuple(tuple((c * x) % self.p for x in row) for row in self.gram))

    def rows(self) -> list[str]:
        sep = "" if self.p <= 10 else " "
        return [sep.join(str(x) for x in row) for row in self.gram]


@dataclass(frozen=True)
class SymplecticSpace:
    """F_p^n with an alternating form; ``r`` hyperbolic pairs plus a radical.

    Basis order is x_1..x_r, xbar_1..xbar_r, then the radical vectors.
    """

    field: FieldSpec
    r: int
    radical_dim: int
    form: AlternatingForm
    basis_labels: tuple[str, ...] = field(compare=False)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def dim(self) -> int:
        return self.form.n

    def x(self, i: int) -> Vector:
        """x_i, 1-based."""
        return fl.unit(i - 1, self.dim)

    def xbar(self, i: int) -> Vector:
        return fl.unit(self.r + i - 1, self.dim)

    def b(self, u: Sequence[int], v: Sequence[int]) -> int:
        return self.form(u, v)

    def vectors(self):
        return fl.all_vectors(self.p, self.dim)

    def zero(self) -> Subspace:
        return fl.zero_subspace(self.p, self.dim)

    def full(self) -> Subspace:
        return fl.full_space(self.p, self.dim)

    def span(self, vectors) -> Subspace:
        return fl.canonicalize(vectors, self.p, self.dim)


def standard_space(p: int, r: int, radical_dim: int = 0) -> SymplecticSpace:
    """Symplectic basis with b(x_i, xbar_i) = 1 and b(xbar_i, x_i) = -1."""
    fs = FieldSpec(p)
    if r < 0 or radical_dim < 0:
        raise ValueError("r and radical_dim must be non-negative")
    n = 2 * r + radical_dim
    g = [[0] * n for _ in range(n)]
    for i in range(r):
        g[i][r + i] = 1
        g[r + i][i] = p - 1
    labels = tuple(
        [f"x{i + 1}" for i in range(r)]
        + [f"xbar{i + 1}" for i in range(r)]
        + [f"z{i + 1}" for i in range(radical_dim)]
    )
    form = AlternatingForm(p, tuple(tuple(row) for row in g))
    return SymplecticSpace(fs, r, radical_dim, form, labels)


def space_from_form(form: AlternatingForm) -> SymplecticSpace:
    """Wrap an arbitrary alternating form.

    ``r`` is half the rank of the form; the basis labels are generic since
    the form need not be in standard shape.
    """
    rad = form.rank_radical
    r = (form.n - rad) // 2
    labels = tuple(f"e{i + 1}" for i in range(form.n))
    return SymplecticSpace(FieldSpec(form.p), r, rad, form, labels)


def perp(space: SymplecticSpace, a: Subspace) -> Subspace:
    return fl.nullspace([space.form.functional(v) for v in a.basis], space.p, space.dim)


def is_isotropic(space: SymplecticSpace, a: Subspace) -> bool:
    rows = a.basis
    return all(space.b(u, w) == 0 for i, u in enumerate(rows) for w in rows[i + 1:])


def enumerate_isotropic(space: SymplecticSpace, j: int | None = None) -> list[Subspace]:
    """All isotropic subspaces (of dimension ``j`` if given), sorted by (dim, basis).

    Grows isotropic subspaces one vector at a time: I extends by any
    v in I^perp outside I.
    """
    top = space.r + space.radical_dim
    if j is not None and not 0 <= j <= top:
        raise ValueError(f"isotropic dimension {j} outside [0, {top}]")
    stop = top if j is None else j
    level = [space.zero()]
    found = list(level) if j in (None, 0) else []
    for d in range(stop):
        nxt: set[Subspace] = set()
        for sub in level:
            for v in perp(space, sub).elements():
                if not fl.member(v, sub):
                    nxt.add(fl.Subspace(space.p, space.dim, fl.rref(sub.basis + (v,), space.p, space.dim)))
        level = sorted(nxt, key=lambda s: s.basis)
        if j is None or d + 1 == j:
            found.extend(level)
    return found
