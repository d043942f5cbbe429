"""Verification scenarios behind the command line.

Each scenario takes validated parameters and returns a list of named
checks with expected and measured values.  Guard violations raise
:class:`Skip`, which the runner turns into a skipped report.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

from . import fplinalg as fl
from . import maps as M
from .formulas import isotropic_table, n_isotropic, wedge_count
from .groups import (
    GroupError,
    GroupModel,
    SubgroupSet,
    build_group,
    commutator_form,
    extraspecial,
    heisenberg,
    isotropic_subgroup,
    make_pi,
    phi_map,
    vector_group,
)
from .homology import HomologyGroup, boundary_test, concentrated_in, fundamental_cycle, homology, pi1_report, pushforward
from .posets import (
    GuardExceeded,
    Poset,
    coset_poset,
    order_complex,
    proper_subspaces,
    subspace_coset_poset,
    subspace_poset,
)
from .symgeom import enumerate_isotropic, perp, space_from_form, standard_space

MAX_P = 5
MAX_R = 2
LONG_R = 3


class Skip(Exception):
    """Raised when parameters fall outside the desk-scale guards."""


class HypothesisError(Skip):
    """Raised when the inputs do not satisfy the hypotheses of the statement checked."""


@dataclass
class Check:
    name: str
    status: str
    expected: Any
    actual: Any


@dataclass
class Report:
    scenario: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    elapsed_ms: int | None = None
    reason: str | None = None

    @property
    def exit_code(self) -> int:
        if any(c.status == "fail" for c in self.checks):
            return 1
        if self.reason is not None or any(c.status == "skipped" for c in self.checks):
            return 2
        return 0

    def as_dict(self, timing: bool = True) -> dict:
        out = {"scenario": self.scenario, "params": self.params, "checks": [asdict(c) for c in self.checks]}
        if self.reason is not None:
            out["reason"] = self.reason
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out


def check(name: str, ok: bool, expected, actual) -> Check:
    return Check(name, "pass" if ok else "fail", expected, actual)


def records(groups: list[HomologyGroup]) -> list[dict]:
    return [g.as_record() for g in groups]


def reduced(poset: Poset) -> list[HomologyGroup]:
    return homology(order_complex(poset), reduced=True)


def _heavy(p: int, r: int) -> bool:
    """Heisenberg groups of order >= 3^5 get homology only with --long."""
    return p ** (2 * r + 1) >= 3 ** 5


def _guard_pr(p: int, r: int, long: bool) -> None:
    if not fl.is_prime(p):
        raise Skip(f"p = {p} is not prime")
    if p > MAX_P:
        raise Skip(f"p = {p} above the guard p <= {MAX_P}")
    if r < 1:
        raise Skip("r must be at least 1")
    top = LONG_R if long else MAX_R
    if r > top:
        raise Skip(f"r = {r} needs --long" if r <= LONG_R else f"r = {r} above the guard r <= {LONG_R}")


# -- sphericity -------------------------------------------------------------------------


def sphericity(p: int, r: int, long: bool = False) -> list[Check]:
    """C_{H(V)} I(V) is a wedge of d(p, r) spheres of dimension r."""
    _guard_pr(p, r, long)
    wc = wedge_count(p, r)
    try:
        _, cp = M.heisenberg_poset(standard_space(p, r))
    except (GroupError, GuardExceeded) as exc:
        raise Skip(str(exc)) from None
    c = order_complex(cp)
    chi = c.euler_characteristic()
    out = [
        check("f_vector", True, None, c.f_vector),
        check("euler", chi == wc.euler, wc.euler, chi),
    ]
    if _heavy(p, r) and not long:
        out.append(Check("homology", "skipped", f"Z^{wc.d} in degree {r}", "needs --long"))
        return out
    h = homology(c, reduced=True)
    top = next((g for g in h if g.degree == r), HomologyGroup(r, 0))
    out.append(check("homology", concentrated_in(h, r) and top.betti == wc.d,
                     f"0 below degree {r}, Z^{wc.d} in degree {r}", records(h)))
    if r >= 2:
        rep = pi1_report(c)
        ok = rep.status == "trivial" or (rep.status == "unknown" and rep.abelianization.is_zero())
        out.append(Check("pi1", "pass" if ok else ("unknown" if rep.status == "unknown" else "fail"),
                         "trivial", rep.as_record()))
    return out


# -- reduction ------------------------------------------------------------------------------


GROUP_CHOICES = ("heisenberg", "plus", "minus", "exponent-p", "Q8", "D8")


def make_group(kind: str, p: int, r: int) -> GroupModel:
    kind_l = kind.lower().replace("_", "-")
    try:
        if kind_l == "q8":
            return build_group("q8")
        if kind_l == "d8":
            return build_group("d8")
        if kind_l in ("plus", "minus"):
            if p != 2:
                raise HypothesisError(f"variant {kind} needs p = 2")
            return extraspecial(2, r, kind_l)
        if kind_l == "exponent-p":
            if p == 2:
                raise HypothesisError("exponent-p needs odd p")
            return extraspecial(p, r, "exponent_p")
        if kind_l == "heisenberg":
            return heisenberg(standard_space(p, r))
    except GroupError as exc:
        raise Skip(str(exc)) from None
    raise Skip(f"unknown group {kind!r}")


def _require_extraspecial(e: GroupModel) -> None:
    if len(e.center.members) != e.space.p or e.derived_subgroup.members != e.center.members:
        raise HypothesisError(f"{e.name} is not extraspecial")


def reduction(group: str, p: int = 2, r: int = 1, long: bool = False) -> list[Check]:
    """nu_hat: C_E A(E) -> C_V I(V) has fibers with terminal objects and equal homology."""
    _guard_pr(p, r, long)
    e = make_group(group, p, r)
    _require_extraspecial(e)
    try:
        pr = M.nu_hat(e)
    except GuardExceeded as exc:
        raise Skip(str(exc)) from None
    bad = pr.map.fibers_have_terminal()
    h_e, h_v = reduced(pr.source), reduced(pr.target)
    return [
        check("sizes", True, None, {"C_E A(E)": len(pr.source), "C_V I(V)": len(pr.target)}),
        check("fibers_terminal", not bad, 0, len(bad)),
        check("homology_equal", _same_homology(h_e, h_v), records(h_v), records(h_e)),
    ]


def _same_homology(a: list[HomologyGroup], b: list[HomologyGroup]) -> bool:
    def nz(h):
        return {g.degree: (g.betti, g.torsion) for g in h if not g.is_zero()}

    return nz(a) == nz(b)


# -- split sequence ------------------------------------------------------------------------


@dataclass
class SplitInstance:
    """G = <g> H with |G/H| = p and a collection F of subgroups of G."""

    group: GroupModel
    collection: list[SubgroupSet]
    keys: list
    h: SubgroupSet
    g: int
    p: int


def validate_split(inst: SplitInstance) -> None:
    grp, h, g, p = inst.group, inst.h, inst.g, inst.p
    if not any(s.order == 1 for s in inst.collection):
        raise HypothesisError("the collection must contain the trivial subgroup")
    if all(s.members <= h.members for s in inst.collection):
        raise HypothesisError("the collection needs a subgroup not contained in H")
    if grp.order != p * h.order:
        raise HypothesisError("H must have index p")
    t = grp.table
    for x in h.members:
        for y in range(grp.order):
            if int(t[t[y, x], grp.inverse[y]]) not in h.members:
                raise HypothesisError("H is not normal")
    if g in h.members or grp.power(g, p) not in h.members:
        raise HypothesisError("g must generate G/H")


def split_ranks(inst: SplitInstance) -> dict:
    """Reduced ranks of C_G F, C_G F^{vee H} and C_{g^k H} F for k = 1..p."""
    grp = inst.group
    vee = [(s, k) for s, k in zip(inst.collection, inst.keys)
           if s.order * inst.h.order == grp.order * len(s.members & inst.h.members)]
    full = coset_poset(grp, inst.collection, keys=inst.keys)
    vee_p = coset_poset(grp, [s for s, _ in vee], keys=[k for _, k in vee])
    rel = []
    gk = grp.identity
    for _ in range(inst.p):
        gk = grp.mul(gk, inst.g)
        elems = [grp.mul(gk, x) for x in inst.h.members]
        rel.append(coset_poset(grp, inst.collection, keys=inst.keys, restrict_to=elems))

    def ranks(poset):
        return {g.degree: g.betti for g in reduced(poset)}

    return {"full": ranks(full), "vee": ranks(vee_p), "relative": [ranks(x) for x in rel],
            "torsion": any(g.torsion for x in [full, vee_p] for g in reduced(x))}


def split_identity(inst: SplitInstance) -> tuple[bool, list[dict]]:
    validate_split(inst)
    data = split_ranks(inst)
    top = max(data["full"]) + 1
    rows = []
    ok = True
    for i in range(1, top + 1):
        lhs = data["full"].get(i, 0)
        rhs = (inst.p - 1) * data["vee"].get(i - 1, 0) - sum(rk.get(i - 1, 0) for rk in data["relative"])
        rows.append({"degree": i, "lhs": lhs, "rhs": rhs})
        ok &= lhs == rhs
    return ok, rows


def split_instance_T(p: int, n: int) -> SplitInstance:
    """F = T(V), H = a hyperplane W, g outside W."""
    vg = vector_group(p, n)
    subs = proper_subspaces(p, n)
    coll = [vg.subgroup_from_labels(a.elements()) for a in subs]
    w = fl.span([fl.unit(i, n) for i in range(n - 1)], p, n)
    return SplitInstance(vg, coll, subs, vg.subgroup_from_labels(w.elements()), vg.index[fl.unit(n - 1, n)], p)


def split_instance_I(p: int, r: int) -> SplitInstance:
    """F = I(V) inside H(V), H = H(x_r^perp), g = (xbar_r, 0)."""
    space = standard_space(p, r)
    h, _ = M.heisenberg_poset(space)
    iso = enumerate_isotropic(space)
    coll = [isotropic_subgroup(h, a) for a in iso]
    xperp = perp(space, space.span([space.x(r)]))
    hsub = h.subgroup_from_labels((v, t) for v in xperp.elements() for t in range(p))
    return SplitInstance(h, coll, iso, hsub, h.index[(space.xbar(r), 0)], p)


def split_seq(collection: str, p: int, n_or_r: int, long: bool = False) -> list[Check]:
    if not fl.is_prime(p) or p > MAX_P:
        raise Skip(f"p = {p} outside the guard")
    if collection == "T":
        if not 1 <= n_or_r <= 4 or (n_or_r == 4 and p > 3):
            raise Skip("T(V) split sequence is limited to dim V <= 4 (p <= 3 in dimension 4)")
        inst = split_instance_T(p, n_or_r)
    elif collection == "I":
        _guard_pr(p, n_or_r, long)
        if _heavy(p, n_or_r) and not long:
            raise Skip(f"({p}, {n_or_r}) split sequence needs --long")
    else:
        raise Skip(f"unknown collection {collection!r}")
    try:
        if collection == "I":
            inst = split_instance_I(p, n_or_r)
        ok, rows = split_identity(inst)
    except (GroupError, GuardExceeded) as exc:
        raise Skip(str(exc)) from None
    return [check("rank_identity", ok, "lhs == rhs in every degree", rows)]


# -- maps -------------------------------------------------------------------------------------


def affine_sweep(p: int, n: int) -> dict:
    """theta_v / s_v comparabilities: every hyperplane W and every v outside W;
    the U-restricted maps for every line U in W with one v per W."""
    pairs = failures = 0
    for w in fl.all_subspaces(p, n, n - 1):
        ps = M.affine_posets(p, n, w)
        outside = [v for v in fl.all_vectors(p, n) if not fl.member(v, w)]
        for v in outside:
            failures += len(M.affine_pair(p, n, w, v, posets=ps).comparability_failures())
            pairs += 1
        if n >= 2:
            for u in fl.all_subspaces(p, n, 1):
                if fl.contains(w, u):
                    failures += len(M.affine_pair(p, n, w, outside[0], u).comparability_failures())
                    pairs += 1
    return {"pairs": pairs, "failures": failures}


def maps(p: int, r: int, dim: int | None = None, long: bool = False) -> list[Check]:
    _guard_pr(p, r, long)
    n = 2 * r if dim is None else dim
    if not 1 <= n <= 4 or (n == 4 and p > 3):
        raise Skip("affine maps are limited to dim V <= 4 (p <= 3 in dimension 4)")
    sweep = affine_sweep(p, n)
    out = [check("theta_v_s_v", sweep["failures"] == 0, 0, sweep)]
    if r < 2:
        out.append(Check("thetabar_sbar", "skipped", "two-sided inverses", "needs r >= 2"))
        return out
    try:
        hp = M.heisenberg_pair(standard_space(p, r))
    except (GroupError, GuardExceeded) as exc:
        raise Skip(str(exc)) from None
    inv = hp.inverse_failures()
    out.append(check("thetabar_sbar", not inv, 0, {"elements": len(hp.subspaces), "failures": len(inv)}))
    out.append(check("thetabar_H_identity", not hp.identity_failures, 0, len(hp.identity_failures)))
    return out


# -- tau ----------------------------------------------------------------------------------------


def tau(p: int, r: int, long: bool = False) -> list[Check]:
    """The class of the subdivided join sphere under tau_tilde is not a boundary."""
    _guard_pr(p, r, long)
    space = standard_space(p, r)
    x = None if p == 2 else M.corrected_x(space)
    try:
        td = M.tau_tilde(space, x)
    except (GroupError, GuardExceeded) as exc:
        raise Skip(str(exc)) from None
    z, _ = fundamental_cycle(td.J, td.sd)
    pz = pushforward(td.map, z)
    c = order_complex(td.target)
    cert = boundary_test(pz, c, integral=True)
    return [
        check("x_lift", True, None, {"x": list(td.x), "t": td.x_lift}),
        check("fundamental_cycle", z.is_cycle(), "closed", {"simplices": len(z.coeffs)}),
        check("pushforward_cycle", pz.is_cycle() and bool(pz), "nonzero cycle", {"simplices": len(pz.coeffs)}),
        check("non_boundary", not cert.is_boundary, "rank grows by 1",
              {"rank_d": cert.rank_without, "rank_d_with_z": cert.rank_with}),
    ]


# -- formulas ---------------------------------------------------------------------------------


def formulas(p: int, r: int, long: bool = False) -> list[Check]:
    _guard_pr(p, r, long)
    wc = wedge_count(p, r)
    out = [check("wedge_count", True, "closed form == alternating sum", {"d": wc.d, "euler": wc.euler})]
    space = standard_space(p, r)
    counts = [len(enumerate_isotropic(space, j)) for j in range(r + 1)]
    expected = [n_isotropic(p, r, j) for j in range(r + 1)]
    out.append(check("n_isotropic", counts == expected, expected, counts))
    return out


def formula_tables(p: int, r: int) -> tuple[list[tuple], list[tuple]]:
    wc = wedge_count(p, r)
    return isotropic_table(p, r), [(p, r, wc.d, wc.euler)]


# -- pi and phi ------------------------------------------------------------------------------


def pi_phi(group: str, p: int = 2, r: int = 1, long: bool = False) -> list[Check]:
    _guard_pr(p, r, long)
    e = make_group(group, p, r)
    _require_extraspecial(e)
    try:
        pi, cp = M.pi_coset_poset(e)
    except (GroupError, GuardExceeded) as exc:
        raise Skip(str(exc)) from None
    rep = phi_map(pi, strict=False)
    pe = e.space.p
    out = [
        check("pi_order", pi.group.order == pe ** (len(e.to_V[0]) + 2), pe ** (len(e.to_V[0]) + 2), pi.group.order),
        check("phi_homomorphism", rep.homomorphism_failures == 0, 0, rep.homomorphism_failures),
        check("phi_surjective", rep.surjective, True, rep.surjective),
        check("phi_kernel", rep.kernel == rep.expected_kernel and len(rep.kernel) == pe, pe, len(rep.kernel)),
    ]
    space = space_from_form(commutator_form(e))
    _, hv = M.heisenberg_poset(space)
    h_pi, h_hv = reduced(cp), reduced(hv)
    out.append(check("pi_cover_homology", _same_homology(h_pi, h_hv), records(h_hv), records(h_pi)))
    if space.r >= 2:
        h_e = reduced(M.abelian_coset_poset(e))
        h1 = next((g for g in h_e if g.degree == 1), HomologyGroup(1, 0))
        out.append(check("H1_C_E_A(E)", h1.betti == 0 and h1.torsion == (pe,), f"Z/{pe}", str(h1)))
    return out


# -- almost extraspecial -------------------------------------------------------------------


def almost(r: int, long: bool = False) -> list[Check]:
    """The radical quotient C_{V'} I(V') -> C_V I(V) (and its Heisenberg version)."""
    _guard_pr(2, r, long)
    big = standard_space(2, r, radical_dim=1)
    out = []
    for heis in (False, True):
        tag = "heisenberg" if heis else "vector"
        try:
            q = M.q_hat(big, heis=heis)
        except (GroupError, GuardExceeded) as exc:
            out.append(Check(f"{tag}_fibers_terminal", "skipped", 0, str(exc)))
            continue
        bad = q.map.fibers_have_terminal()
        out.append(check(f"{tag}_fibers_terminal", not bad, 0, len(bad)))
        if heis and r >= 2 and not long:
            out.append(Check(f"{tag}_homology_equal", "skipped", None, "needs --long"))
            continue
        try:
            hs, ht = reduced(q.source), reduced(q.target)
        except GuardExceeded as exc:
            out.append(Check(f"{tag}_homology_equal", "skipped", None, str(exc)))
            continue
        out.append(check(f"{tag}_homology_equal", _same_homology(hs, ht), records(ht), records(hs)))
    return out


# -- classical sphericity ------------------------------------------------------------------


def classical(p: int, n: int) -> list[Check]:
    """Solomon-Tits for T°(V), the affine poset C_V T(V) and T(V)^W_U for every (U, W)."""
    if not fl.is_prime(p) or p > 3 or not 1 <= n <= 4:
        raise Skip("classical regressions cover dim V <= 4 and p <= 3")
    out = []
    building = subspace_poset(proper_subspaces(p, n, nonzero=True))
    h = reduced(building)
    out.append(check("solomon_tits", concentrated_in(h, n - 2), f"free, concentrated in degree {n - 2}", records(h)))
    aff = subspace_coset_poset(p, n, proper_subspaces(p, n))
    h = reduced(aff)
    out.append(check("affine", concentrated_in(h, n - 1), f"free, concentrated in degree {n - 1}", records(h)))
    if n >= 2:
        bad, tried = [], 0
        for w in fl.all_subspaces(p, n, n - 1):
            for u in fl.all_subspaces(p, n, 1):
                if not fl.contains(w, u):
                    continue
                tried += 1
                hh = reduced(subspace_poset(M.vee_T(p, n, w, u)))
                if not concentrated_in(hh, n - 2):
                    bad.append(repr((w, u)))
        out.append(check("relative_T", not bad, f"{tried} pairs concentrated in degree {n - 2}",
                         {"pairs": tried, "failures": bad}))
    return out


# -- runner -----------------------------------------------------------------------------------


SCENARIOS: dict[str, Callable[..., list[Check]]] = {
    "sphericity": sphericity,
    "reduction": reduction,
    "split-seq": split_seq,
    "maps": maps,
    "tau": tau,
    "formulas": formulas,
    "pi-phi": pi_phi,
    "almost": almost,
    "classical": classical,
}


def run(name: str, **params) -> Report:
    fn = SCENARIOS[name]
    rep = Report(name, {k: v for k, v in params.items() if k != "long"})
    start = time.perf_counter()
    try:
        rep.checks = fn(**params)
    except Skip as exc:
        rep.reason = str(exc)
    rep.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return rep
