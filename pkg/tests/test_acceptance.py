"""Acceptance gate: one test per acceptance criterion, in order.

Run with ``pytest -v tests/test_acceptance.py`` to get one pass/fail line
per criterion.  The heavier campaigns (criteria 6, 7, 10) take minutes.
"""

import time

import pytest

from bruhatlab import (
    CampaignSpec,
    audit_p_family,
    audit_r_family,
    bruhat_leq,
    build_interval,
    build_system,
    coset_slice,
    default_campaign_spec,
    deodhar_p_sum,
    deodhar_r_sum,
    atoms_in_quotient,
    lower_interval_elements,
    non_dominated_set,
    p_poly,
    parabolic_p_poly,
    parabolic_r_poly,
    r_poly,
    reproduce_remark,
    run_campaign,
    w0_dual_r_check,
)
from bruhatlab.harness import report_to_json


@pytest.fixture(scope="module")
def systems():
    return {name: build_system(name) for name in ("A3", "A4", "B3")}


def _all_subsets(sys):
    from itertools import combinations

    for r in range(sys.rank + 1):
        for J in combinations(range(sys.rank), r):
            yield frozenset(J)


def _comparable_pairs(sys):
    for v in sys.elements():
        for u in lower_interval_elements(v):
            yield u, v


def _quotient_pairs(sys, J):
    quotient = [w for w in sys.elements() if sys.is_min_coset_rep(w, J)]
    for u in quotient:
        for v in quotient:
            if bruhat_leq(u, v):
                yield u, v


def test_criterion_01_remark_reproduction():
    started = time.monotonic()
    record = reproduce_remark()
    elapsed = time.monotonic() - started
    assert record["p_J1_xminus1"] == [1]
    assert record["p_J2_xminus1"] == [1, 1]
    assert record["interval_sizes"] == [8, 8]
    assert record["rank_vectors"] == [[1, 3, 3, 1]] * 2
    assert record["atom_counts"] == [2, 2]
    assert record["atom_respecting_iso_found"] is True
    assert record["p_J1_xq"] == record["p_J2_xq"]
    assert elapsed < 1.0


def test_criterion_02_deodhar_oracle_equivalence(systems):
    checked = 0
    for sys in systems.values():
        for J in _all_subsets(sys):
            for u, v in _quotient_pairs(sys, J):
                for x in ("-1", "q"):
                    assert parabolic_r_poly(u, v, J, x) == deodhar_r_sum(u, v, J, x)
                assert parabolic_p_poly(u, v, J, "q") == deodhar_p_sum(u, v, J)
                checked += 1
    assert checked == (896 + 19724 + 3416) // 2


def test_criterion_03_coset_slice_equivalence(systems):
    checked = 0
    for sys in systems.values():
        for J in _all_subsets(sys):
            for u, v in _quotient_pairs(sys, J):
                interval = build_interval(u, v)
                atoms = atoms_in_quotient(u, v, J)
                assert coset_slice(u, v, J) == non_dominated_set(interval, atoms)
                checked += 1
    assert checked == 448 + 9862 + 1708


def test_criterion_04_projection_monotonicity(systems):
    for name in ("A4", "B3"):
        sys = systems[name]
        for J in _all_subsets(sys):
            for u, v in _comparable_pairs(sys):
                uj, _ = sys.parabolic_decompose(u, J)
                vj, _ = sys.parabolic_decompose(v, J)
                assert bruhat_leq(uj, vj)


def test_criterion_05_definition_audits(systems):
    for name in ("A3", "B3"):
        sys = systems[name]
        corpus = sys.elements()
        for J in _all_subsets(sys):
            for x in ("-1", "q"):
                assert audit_r_family(sys, J, x, corpus) == []
                assert audit_p_family(sys, J, x, corpus) == []


def test_criterion_06_lower_interval_campaign():
    spec = CampaignSpec(
        systems=({"type": "A3"}, {"type": "A4"}, {"type": "B3"}),
        checks=("lower-intervals",),
        parallelism=4,
    )
    report = run_campaign(spec)
    assert report["total_violations"] == 0
    assert sum(r["examined"] for r in report["results"]) == 75 + 541 + 147


def test_criterion_07_short_edge_campaign():
    spec = CampaignSpec(
        systems=({"type": "A3"}, {"type": "A4"}, {"type": "B3"}),
        checks=("short-edge-intervals",),
        parallelism=4,
    )
    report = run_campaign(spec)
    assert report["total_violations"] == 0
    assert sum(r["examined"] for r in report["results"]) == 448 + 9862 + 1708


def test_criterion_08_w0_duality(systems):
    for sys in systems.values():
        for u, v in _comparable_pairs(sys):
            assert w0_dual_r_check(u, v)


def test_criterion_09_x_independence_and_classical_sanity(systems):
    none = frozenset()
    for name in ("A3", "B3"):
        sys = systems[name]
        for u, v in _comparable_pairs(sys):
            p = p_poly(u, v)
            assert parabolic_p_poly(u, v, none, "-1") == p
            assert parabolic_p_poly(u, v, none, "q") == p
            r = r_poly(u, v)
            h = v.length - u.length
            assert r.degree == h and r.coeff(h) == 1
            assert r.coeff(0) == (-1) ** h
            assert p.coeff(0) == 1
            if u != v:
                assert 2 * p.degree <= h - 1


def test_criterion_10_default_campaign_determinism():
    serial = default_campaign_spec(parallelism=1)
    parallel = default_campaign_spec(parallelism=8)
    report_serial = run_campaign(serial)
    report_parallel = run_campaign(parallel)
    assert report_to_json(report_serial) == report_to_json(report_parallel)
    assert report_serial["total_violations"] == 0
