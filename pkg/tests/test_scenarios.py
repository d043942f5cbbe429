import dataclasses

import pytest

from cosetposet import scenarios as S


def _statuses(checks):
    return {c.name: c.status for c in checks}


def test_split_refuses_missing_trivial_subgroup():
    inst = S.split_instance_T(2, 2)
    bad = dataclasses.replace(inst, collection=[s for s in inst.collection if s.order > 1])
    with pytest.raises(S.HypothesisError):
        S.validate_split(bad)


def test_split_refuses_collection_inside_h():
    inst = S.split_instance_T(2, 2)
    inside = [s for s in inst.collection if s.members <= inst.h.members]
    with pytest.raises(S.HypothesisError):
        S.validate_split(dataclasses.replace(inst, collection=inside))


def test_split_refuses_bad_generator():
    inst = S.split_instance_T(3, 2)
    with pytest.raises(S.HypothesisError):
        S.validate_split(dataclasses.replace(inst, g=inst.group.identity))


def test_split_refuses_wrong_index():
    inst = S.split_instance_T(2, 3)
    trivial = next(s for s in inst.collection if s.order == 1)
    with pytest.raises(S.HypothesisError):
        S.validate_split(dataclasses.replace(inst, h=trivial))


def test_split_ranks_small():
    ok, rows = S.split_identity(S.split_instance_T(2, 2))
    assert ok and all(row["lhs"] == row["rhs"] for row in rows)


def test_report_exit_codes():
    rep = S.run("formulas", p=2, r=1)
    assert rep.exit_code == 0
    rep = S.run("sphericity", p=4, r=1)
    assert rep.reason and rep.exit_code == 2
    rep.reason = None
    rep.checks = [S.Check("x", "skipped", None, None)]
    assert rep.exit_code == 2
    rep.checks.append(S.Check("y", "fail", 1, 2))
    assert rep.exit_code == 1


def test_default_heavy_case_skips_homology_only():
    checks = S.sphericity(3, 2)
    assert _statuses(checks) == {"f_vector": "pass", "euler": "pass", "homology": "skipped"}


def test_tau_odd_prime():
    assert all(c.status == "pass" for c in S.tau(3, 1))


def test_almost_r1():
    assert all(c.status == "pass" for c in S.almost(1))


def test_reduction_refuses_p2_heisenberg():
    rep = S.run("reduction", group="heisenberg", p=2, r=1)
    assert rep.exit_code == 2 and "p" in rep.reason


@pytest.mark.long
@pytest.mark.parametrize("name,params", [
    ("sphericity", {"p": 3, "r": 2}),
    ("tau", {"p": 3, "r": 2}),
    ("split-seq", {"collection": "I", "p": 3, "n_or_r": 2}),
    ("split-seq", {"collection": "T", "p": 3, "n_or_r": 4}),
    ("almost", {"r": 2}),
    ("maps", {"p": 3, "r": 2, "dim": 4}),
])
def test_long_scenarios(name, params):
    rep = S.run(name, long=True, **params)
    assert rep.exit_code == 0, rep.as_dict()
