"""Explicit poset maps between subspace posets and coset posets.

* ``theta_v`` / ``s_v``: subspaces A with A + W = V versus affine cosets in W.
* ``thetabar`` / ``sbar``: isotropic subgroups of H(V) not inside H(x^perp)
  versus cosets in the Heisenberg group of a symplectic space two
  dimensions smaller.  They are mutually inverse.
* ``tau_tilde``: the subdivided join sphere into C_{H(V)} I(V).
* ``nu_hat`` / ``q_hat``: projections induced by group or space quotients.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import fplinalg as fl
from .fplinalg import Subspace, Vector
from .groups import GroupModel, abelian_subgroups, commutator_form, heisenberg, isotropic_subgroup, make_pi
from .posets import (
    CosetPoset,
    JVertex,
    Poset,
    PosetError,
    PosetMap,
    barycentric,
    coset_poset,
    proper_subspaces,
    sphere_J,
    subspace_coset_poset,
    subspace_poset,
)
from .symgeom import SymplecticSpace, enumerate_isotropic, is_isotropic, perp, space_from_form, standard_space


class MapError(ValueError):
    pass


# -- standard coset posets ----------------------------------------------------


@lru_cache(maxsize=16)
def heisenberg_poset(space: SymplecticSpace) -> tuple[GroupModel, CosetPoset]:
    """H(V) together with C_{H(V)} I(V)."""
    h = heisenberg(space)
    iso = enumerate_isotropic(space)
    cp = coset_poset(h, [isotropic_subgroup(h, a) for a in iso], keys=iso)
    return h, cp


def isotropic_coset_poset(space: SymplecticSpace) -> CosetPoset:
    """C_V I(V) in vector mode."""
    return subspace_coset_poset(space.p, space.dim, enumerate_isotropic(space))


def abelian_coset_poset(e: GroupModel) -> CosetPoset:
    """C_E A(E)."""
    subs = abelian_subgroups(e)
    return coset_poset(e, subs, keys=[tuple(sorted(s.members)) for s in subs])


# -- theta_v and s_v ------------------------------------------------------------


@dataclass
class AffinePair:
    """theta_v: T(V)^{vee W} -> C_W T(W) and s_v back (optionally restricted by U)."""

    subspaces: Poset
    cosets: CosetPoset
    theta: PosetMap
    s: PosetMap

    def comparability_failures(self) -> list[str]:
        out = []
        d, c = self.subspaces, self.cosets
        for i in range(len(c)):
            if not c.leq(i, self.theta.image[self.s.image[i]]):
                out.append(f"coset {c.describe(i)} not below theta(s(.))")
        for a in range(len(d)):
            if not d.leq(self.s.image[self.theta.image[a]], a):
                out.append(f"subspace {d.labels[a]} not above s(theta(.))")
        return out


def vee_T(p: int, n: int, w: Subspace, u: Subspace | None = None) -> list[Subspace]:
    """Proper A with A + W = V (and A ∩ U = 0 when U is given)."""
    full = fl.full_space(p, n)
    out = [a for a in proper_subspaces(p, n) if fl.subspace_sum(a, w) == full]
    if u is not None:
        out = [a for a in out if fl.intersection(a, u).dim == 0]
    return out


def affine_posets(p: int, n: int, w: Subspace, u: Subspace | None = None) -> tuple[Poset, CosetPoset]:
    """T(V)^{vee W} (or T(V)^W_U) and C_W T(W) (or C_W T(W)_{wedge U})."""
    if w.dim != n - 1:
        raise MapError("W must be a hyperplane")
    if u is not None and not fl.contains(w, u):
        raise MapError("U must lie inside W")
    dom = subspace_poset(vee_T(p, n, w, u))
    subs_w = [b for b in fl.all_subspaces(p, n) if b.dim < w.dim and fl.contains(w, b)]
    if u is not None:
        subs_w = [b for b in subs_w if fl.intersection(b, u).dim == 0]
    return dom, subspace_coset_poset(p, n, subs_w, restrict_to=w)


def affine_pair(
    p: int, n: int, w: Subspace, v: Sequence[int], u: Subspace | None = None,
    posets: tuple[Poset, CosetPoset] | None = None,
) -> AffinePair:
    """theta_v(A) = (-v + A) ∩ W and s_v(w + B) = <v + w, B>.

    ``posets`` may carry the output of :func:`affine_posets` for the same
    (W, U) so that several v can share it.
    """
    v = fl.vec(v, p)
    if fl.member(v, w):
        raise MapError("v must lie outside W")
    dom, cos = posets if posets is not None else affine_posets(p, n, w, u)
    vg = cos.group
    (f,) = fl.dot_complement(w).basis
    dot = lambda x: sum(a * b for a, b in zip(f, x)) % p
    fv = dot(v)

    theta = []
    for a in dom.labels:
        # the unique coset of A ∩ W inside -v + A
        row = next(r for r in a.basis if dot(r))
        lift = fl.scale(fv * pow(dot(row), -1, p), row, p)
        w0 = fl.sub(lift, v, p)
        b = fl.intersection(a, w)
        theta.append(cos.coset_index(vg.index[w0], cos.key_index[b]))

    s = []
    for lab in cos.labels:
        w0 = vg.labels[lab.rep]
        b = cos.keys[lab.subgroup]
        a = fl.canonicalize(b.basis + (fl.add(v, w0, p),), p, n)
        s.append(dom.index[a])
    return AffinePair(dom, cos, PosetMap(dom, cos, theta, "theta_v"), PosetMap(cos, dom, s, "s_v"))


# -- thetabar and sbar ----------------------------------------------------------


def _drop_pair(space: SymplecticSpace, k: int):
    """Coordinates of V with x_k, xbar_k removed, and the matching insertion."""
    r = space.r
    gone = {k - 1, r + k - 1}
    keep = [i for i in range(space.dim) if i not in gone]

    def drop(v: Sequence[int]) -> Vector:
        return tuple(v[i] for i in keep)

    def insert(z: Sequence[int]) -> Vector:
        out = [0] * space.dim
        for i, c in zip(keep, z):
            out[i] = c
        return tuple(out)

    return drop, insert


@dataclass
class HeisenbergPair:
    """thetabar: I(V)^{vee H(x^perp)} -> C_{H(Z)} I(Z) and sbar back."""

    space: SymplecticSpace
    small: SymplecticSpace
    subspaces: Poset
    cosets: CosetPoset
    theta: PosetMap
    s: PosetMap
    identity_failures: list[str]

    def inverse_failures(self) -> list[str]:
        out = []
        for i, j in enumerate(self.theta.image):
            if self.s.image[j] != i:
                out.append(f"sbar(thetabar(A)) != A for A = {self.subspaces.labels[i]}")
        for i, j in enumerate(self.s.image):
            if self.theta.image[j] != i:
                out.append(f"thetabar(sbar(c)) != c for c = {self.cosets.describe(i)}")
        return out


def heisenberg_pair(space: SymplecticSpace, pair: int | None = None) -> HeisenbergPair:
    """Build thetabar and sbar for the hyperbolic pair (x, xbar) = (x_k, xbar_k), k = ``pair`` (default r)."""
    p, r, n = space.p, space.r, space.dim
    if r < 2:
        raise MapError("thetabar/sbar need r >= 2")
    if space.radical_dim:
        raise MapError("thetabar/sbar need a non-degenerate form")
    k = r if pair is None else pair
    x, xbar = space.x(k), space.xbar(k)
    drop, insert = _drop_pair(space, k)
    small = standard_space(p, r - 1)
    h = heisenberg(space)
    hz, target = heisenberg_poset(small)
    xperp = perp(space, space.span([x]))
    dom_subs = [a for a in enumerate_isotropic(space) if not fl.contains(xperp, a)]
    dom = subspace_poset(dom_subs)
    neg_xbar = h.index[(fl.scale(-1, xbar, p), 0)]
    b = space.b

    theta = []
    ident_fail = []
    for a in dom.labels:
        # {(-xbar, 0)(a, 0)} ∩ H(x^perp), projected to H(Z)
        image = set()
        for v in a.elements():
            g = h.labels[h.mul(neg_xbar, h.index[(v, 0)])]
            if fl.member(g[0], xperp):
                image.add((drop(g[0]), g[1]))
        kz = fl.canonicalize([drop(v) for v in fl.intersection(a, xperp).basis], p, small.dim)
        rep = next(iter(image))
        j = target.coset_index(hz.index[rep], target.key_index[kz])
        if {hz.labels[e] for e in target.elements_of(j)} != image:
            raise MapError(f"thetabar({a}) is not a coset")
        theta.append(j)
        # thetabar_H: intersect with H(x^perp) without translating
        k_set = {(drop(v), 0) for v in a.elements() if fl.member(v, xperp)}
        if (fl.zero(small.dim), 0) not in k_set:
            ident_fail.append(f"thetabar_H({a}) misses the identity")

    s = []
    for lab in target.labels:
        wz, t = hz.labels[lab.rep]
        kz = target.keys[lab.subgroup]
        w = insert(wz)
        gens = [fl.add(fl.add(xbar, fl.scale(t, x, p), p), w, p)]
        for az in kz.basis:
            a = insert(az)
            gens.append(fl.add(fl.scale(b(w, a), x, p), a, p))
        sub = space.span(gens)
        if not is_isotropic(space, sub):
            raise MapError(f"sbar produced a non-isotropic subspace {sub}")
        s.append(dom.index[sub])
    return HeisenbergPair(
        space, small, dom, target,
        PosetMap(dom, target, theta, "thetabar"),
        PosetMap(target, dom, s, "sbar"),
        ident_fail,
    )


# -- tau tilde ------------------------------------------------------------------


def corrected_x(space: SymplecticSpace) -> Vector:
    """sum (x_i - xbar_i): keeps every vertex difference of J isotropic for all p."""
    r = space.r
    return tuple((1 if i < r else (-1 if i < 2 * r else 0)) % space.p for i in range(space.dim))


def _lift_x(space: SymplecticSpace, x: Vector) -> int:
    """Central coordinate t with (x, t)(j - x, 0) = (j, 0) for every j = x_i, xbar_i.

    This forces t = -b(x, j), which must not depend on j.
    """
    vals = {(-space.b(x, j)) % space.p for i in range(1, space.r + 1) for j in (space.x(i), space.xbar(i))}
    if len(vals) != 1:
        raise MapError(f"no consistent central lift for x = {x}")
    return vals.pop()


@dataclass
class TauData:
    J: Poset
    sd: Poset
    heis: GroupModel
    target: CosetPoset
    map: PosetMap
    x: Vector
    x_lift: int


def tau_tilde(space: SymplecticSpace, x: Sequence[int] | None = None) -> TauData:
    """sd J -> C_{H(V)} I(V): a chain j_1 < ... < j_s goes to the coset of
    <j_2 - j_1, ..., j_s - j_1> through the lift of j_1.

    Vertices other than x lift with central coordinate 0; x lifts with the
    coordinate from :func:`_lift_x`, which is what makes the map order
    preserving.
    """
    if space.r < 1:
        raise MapError("tau_tilde needs r >= 1")
    p, n = space.p, space.dim
    J = sphere_J(space, x)
    xv = J.labels[0].vector
    tx = _lift_x(space, xv)
    sd = barycentric(J)
    h, target = heisenberg_poset(space)
    image = []
    for chain in sd.labels:
        verts: list[JVertex] = [J.labels[i] for i in chain]
        base = verts[0]
        diffs = [fl.sub(u.vector, base.vector, p) for u in verts[1:]]
        sub = space.span(diffs) if diffs else space.zero()
        if not is_isotropic(space, sub):
            raise MapError(f"chain {[v.name for v in verts]} spans a non-isotropic subspace")
        t = tx if base.factor == 0 and base.side == 0 else 0
        g = h.index[(base.vector, t)]
        image.append(target.coset_index(g, target.key_index[sub]))
    return TauData(J, sd, h, target, PosetMap(sd, target, image, "tau_tilde"), xv, tx)


# -- projections ---------------------------------------------------------------


@dataclass
class Projection:
    source: CosetPoset
    target: CosetPoset
    map: PosetMap


def nu_hat(e: GroupModel, source: CosetPoset | None = None) -> Projection:
    """C_E A(E) -> C_V I(V), gA -> nu(g) + nu(A), V carrying the commutator form."""
    src = source if source is not None else abelian_coset_poset(e)
    vspace = space_from_form(commutator_form(e))
    tgt = isotropic_coset_poset(vspace)
    vg = tgt.group
    p, n = vspace.p, vspace.dim
    image = []
    for lab in src.labels:
        sub = src.subgroups[lab.subgroup]
        img = fl.canonicalize([e.to_V[m] for m in sub.members], p, n)
        if img not in tgt.key_index:
            raise MapError(f"nu({sorted(sub.members)}) is not isotropic")
        image.append(tgt.coset_index(vg.index[e.to_V[lab.rep]], tgt.key_index[img]))
    return Projection(src, tgt, PosetMap(src, tgt, image, "nu_hat"))


def q_hat(big: SymplecticSpace, heis: bool = False) -> Projection:
    """Quotient by the radical: C_{V'} I(V') -> C_V I(V) (or the Heisenberg version).

    ``big`` must be a standard space with a radical; V is the standard space
    with the same r.
    """
    if big.radical_dim == 0:
        raise MapError("q_hat needs a form with a radical")
    p, r = big.p, big.r
    small = standard_space(p, r)
    m = small.dim

    def q(v):
        return tuple(v[:m])

    if heis:
        _, src = heisenberg_poset(big)
        _, tgt = heisenberg_poset(small)
    else:
        src = isotropic_coset_poset(big)
        tgt = isotropic_coset_poset(small)
    g, gt = src.group, tgt.group
    image = []
    for lab in src.labels:
        key = src.keys[lab.subgroup]
        sub = fl.canonicalize([q(v) for v in key.basis], p, m)
        lab_g = g.labels[lab.rep]
        rep = (q(lab_g[0]), lab_g[1]) if heis else q(lab_g)
        image.append(tgt.coset_index(gt.index[rep], tgt.key_index[sub]))
    return Projection(src, tgt, PosetMap(src, tgt, image, "q_hat"))


def pi_coset_poset(e: GroupModel):
    """C_pi A(E) with the abelian subgroups embedded diagonally as {(a, a^-1)}."""
    pi = make_pi(e)
    subs = abelian_subgroups(e)
    emb = [pi.embed(a) for a in subs]
    return pi, coset_poset(pi.group, emb, keys=[tuple(sorted(a.members)) for a in subs])
