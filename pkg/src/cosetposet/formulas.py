"""Closed-form counts: isotropic subspaces, Steinberg ranks and the wedge count."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .fplinalg import check_prime


class FormulaError(ArithmeticError):
    pass


def _exact_div(a: int, b: int) -> int:
    q, rem = divmod(a, b)
    if rem:
        raise FormulaError(f"{a} is not divisible by {b}")
    return q


def n_isotropic(p: int, r: int, j: int) -> int:
    """Number of j-dimensional isotropic subspaces of a 2r-dimensional symplectic space."""
    check_prime(p)
    if not 0 <= j <= r:
        raise ValueError(f"need 0 <= j <= r, got j={j}, r={r}")
    num = den = 1
    for t in range(j):
        num *= p ** (2 * r - t) - p ** t
        den *= p ** j - p ** t
    return _exact_div(num, den)


def steinberg_dim(p: int, m: int) -> int:
    """Rank of the top homology of the building of Sp_{2m}(p)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return p ** (m * m)


def _closed_form(p: int, r: int) -> int:
    """(-1)^r d + 1 as the closed display with the product written out."""
    total = (-1) ** r * p ** (2 * r + 1 + r * r)
    for j in range(1, r + 1):
        prodv = 1
        den = 1
        for t in range(j):
            prodv *= p ** (2 * r - t) - p ** t
            den *= p ** j - p ** t
        total += (-1) ** (r - j) * p ** (2 * r + 1 - j + (r - j) ** 2) * _exact_div(prodv, den)
    return total


def _alternating_sum(p: int, r: int) -> int:
    """sum_j (-1)^(r-j) |H(V)/I_j| N_j D_j."""
    return sum(
        (-1) ** (r - j) * p ** (2 * r + 1 - j) * n_isotropic(p, r, j) * steinberg_dim(p, r - j)
        for j in range(r + 1)
    )


@dataclass(frozen=True)
class WedgeCount:
    p: int
    r: int
    d: int

    @property
    def euler(self) -> int:
        return 1 + (-1) ** self.r * self.d


def wedge_count(p: int, r: int) -> WedgeCount:
    """Number of r-spheres in the wedge; both expressions are evaluated and compared."""
    check_prime(p)
    if r < 1:
        raise ValueError("r must be at least 1")
    a, b = _closed_form(p, r), _alternating_sum(p, r)
    if a != b:
        raise FormulaError(f"closed form {a} and alternating sum {b} disagree for p={p}, r={r}")
    d = (-1) ** r * (a - 1)
    if d < 0:
        raise FormulaError(f"negative wedge count {d}")
    return WedgeCount(p, r, d)


def isotropic_table(p: int, r: int) -> list[tuple[int, int, int, int, int]]:
    """Rows (p, r, j, N_j, D_j)."""
    return [(p, r, j, n_isotropic(p, r, j), steinberg_dim(p, r - j)) for j in range(r + 1)]


def to_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()
