import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracle import _filter, all_tables
from ssdlab.derivations import check_full_additivity, check_mult_generalized_ssd, check_mult_skew_semi_derivation
from ssdlab.maps import enumerate_automorphisms, identity_map, make_tabulated, zero_map
from ssdlab.ring_core import ResourceLimitError, RingSpec, make_ring
from ssdlab.search import (SearchConfig, SearchError, counterexample_hunt, enumerate_generalized, enumerate_mssd,
                           mssd_problem, reproduce_worked_examples, verify_additivity_theorem,
                           verify_generalized_theorem)

from conftest import F2

UT2 = RingSpec.ut2(F2)
P22 = RingSpec.product(F2, F2)


def brute(ring, g, alpha, d=None, drop_r2=False, commute=True):
    """Every table of ``ring`` filtered by the (possibly relaxed) identities, via numpy."""
    A, M = np.array(ring.add_table), np.array(ring.mul_table)
    gt, at = np.array(g.table), np.array(alpha.table)
    if d is None:
        clauses = [(None, gt, at, None)] + ([] if drop_r2 else [(None, at, gt, None)])
    else:
        dt = np.array(d.table)
        clauses = [(None, gt, at, dt)] + ([] if drop_r2 else [(dt, at, gt, None)])
    T = _filter(all_tables(ring.order).astype(np.int64), A, M, clauses)
    if commute:
        T = T[np.all(T[:, gt] == gt[T], axis=1)]
    return sorted(tuple(int(v) for v in row) for row in T)


def tables(maps):
    return [m.table for m in maps]


def test_zn2_only_zero_map():
    ring = make_ring(RingSpec.zn(2))
    found, stats = enumerate_mssd(ring, identity_map(ring), identity_map(ring))
    assert tables(found) == [(0, 0)]
    assert not stats.partial


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=3, max_size=3), st.sampled_from([0, 1]),
       st.sampled_from([(False, True), (True, True), (True, False)]))
def test_engine_matches_brute_force_on_product(g_images, which_alpha, relax):
    ring = make_ring(P22)
    g = make_tabulated(ring, [0] + g_images)
    alpha = enumerate_automorphisms(ring)[which_alpha]
    drop_r2, commute = relax
    rels = set()
    if drop_r2:
        rels.add("drop_clause_r2")
    if not commute:
        rels.add("drop_commute_clause")
    found, stats = enumerate_mssd(ring, g, alpha, SearchConfig(P22, relaxations=rels))
    assert tables(found) == brute(ring, g, alpha, drop_r2=drop_r2, commute=commute)
    assert (0, 0, 0, 0) in tables(found)  # the zero map always satisfies the identities
    assert not stats.partial


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(range(6)), st.integers(0, 5))
def test_engine_matches_brute_force_order_six(seed_g, seed_d):
    ring = make_ring(RingSpec.product(F2, RingSpec.zn(3)))
    rnd = np.random.default_rng(seed_g)
    g = make_tabulated(ring, [0] + [int(v) for v in rnd.integers(0, 6, 5)])
    alpha = identity_map(ring)
    found, _ = enumerate_mssd(ring, g, alpha)
    assert tables(found) == brute(ring, g, alpha)
    d = found[seed_d % len(found)]
    gen, _ = enumerate_generalized(ring, d, g, alpha)
    assert tables(gen) == brute(ring, g, alpha, d=d)
    assert d.table in tables(gen)  # every skew semi-derivation is generalized over itself


def test_solutions_re_pass_the_identity_checks(ut2):
    ident = identity_map(ut2)
    for alpha in enumerate_automorphisms(ut2):
        found, _ = enumerate_mssd(ut2, ident, alpha)
        assert found
        for d in found:
            assert check_mult_skew_semi_derivation(d, ident, alpha).holds
            gen, _ = enumerate_generalized(ut2, d, ident, alpha)
            assert d.table in tables(gen)
            for f in gen:
                assert check_mult_generalized_ssd(f, d, ident, alpha).holds


def test_assignment_order_starts_with_pinned_elements(ut2):
    problem = mssd_problem(ut2, identity_map(ut2), identity_map(ut2))
    assert sorted(problem.var_order) == list(range(8))
    assert problem.var_order[:2] == (ut2.zero_index, ut2.one_index)


def test_worker_count_does_not_change_results(m2):
    ident = identity_map(m2)
    runs = [enumerate_mssd(m2, ident, ident, SearchConfig(m2.spec, worker_count=w)) for w in (1, 2, 4)]
    base_tables, base_stats = tables(runs[0][0]), runs[0][1]
    for found, stats in runs[1:]:
        assert tables(found) == base_tables and stats == base_stats


def test_budget_exhaustion_is_flagged(m2):
    ident = identity_map(m2)
    for budget in (1, 50, 500, 5000):
        found, stats = enumerate_mssd(m2, ident, ident, SearchConfig(m2.spec, node_budget=budget))
        assert stats.partial
        full, _ = enumerate_mssd(m2, ident, ident)
        assert set(tables(found)) <= set(tables(full))
    found, stats = enumerate_mssd(m2, ident, ident, SearchConfig(m2.spec, node_budget=10 ** 8))
    assert not stats.partial and len(found) == 8


def test_budget_identical_across_workers(m2):
    ident = identity_map(m2)
    a = enumerate_mssd(m2, ident, ident, SearchConfig(m2.spec, node_budget=3000, worker_count=1))
    b = enumerate_mssd(m2, ident, ident, SearchConfig(m2.spec, node_budget=3000, worker_count=4))
    assert tables(a[0]) == tables(b[0]) and a[1] == b[1]


def test_order_bound():
    ring = make_ring(RingSpec.matrix2(RingSpec.zn(3)))
    with pytest.raises(ResourceLimitError):
        enumerate_mssd(ring, identity_map(ring), identity_map(ring))


@pytest.mark.parametrize("kwargs", [dict(node_budget=0), dict(worker_count=0), dict(relaxations={"drop_all"}),
                                    dict(target="other"), dict(hypothesis="nope")])
def test_config_validation(kwargs):
    with pytest.raises(SearchError):
        SearchConfig(UT2, **kwargs)


def test_all_tables_gate():
    with pytest.raises(ResourceLimitError):
        verify_additivity_theorem(SearchConfig(UT2, g_family="all-tables"))


def test_theorem_confirmed_with_fidelity():
    rep = verify_additivity_theorem(SearchConfig(UT2, alpha_family="all-automorphisms"))
    assert rep.verdict == "confirmed"
    assert len(rep.runs) == 2 and all(r.admissible for r in rep.runs)
    for m in rep.maps_found:
        assert m.passes_identities and m.additive and all(m.partial_additivity.values())


def test_vacuous_is_not_confirmed():
    rep = verify_additivity_theorem(SearchConfig(P22, idempotent="(1,0)", g_family="all-tables"))
    assert rep.verdict == "vacuous"
    assert len(rep.rejected) == 256 and not rep.runs
    assert all(not r["overall"] for r in rep.rejected)


def test_hypothesis_gate_rejects_failing_g(ut2):
    rep = verify_additivity_theorem(SearchConfig(UT2, g_family="zero"))
    assert rep.verdict == "vacuous"
    relaxed = verify_additivity_theorem(SearchConfig(UT2, g_family="zero", relaxations={"drop_assumption"}))
    assert relaxed.runs and relaxed.verdict in ("confirmed", "counterexample")


def test_generalized_theorem():
    rep = verify_generalized_theorem(SearchConfig(UT2))
    assert rep.verdict == "confirmed"
    assert rep.maps_found and all(m.additive for m in rep.maps_found)


def test_hunt_requires_a_relaxation():
    with pytest.raises(SearchError):
        counterexample_hunt(SearchConfig(P22))


def test_hunt_counterexamples_are_genuine():
    cfg = SearchConfig(P22, idempotent="(1,0)", g_family="all-tables", relaxations={"drop_assumption"})
    rep = counterexample_hunt(cfg)
    assert rep.verdict == "counterexample"
    ring = make_ring(P22)
    ce = rep.counterexample
    d = make_tabulated(ring, ce["table"])
    g = make_tabulated(ring, [int(v) for v in ce["g"][len("table:["):-1].split(",")])
    alpha = make_tabulated(ring, [int(v) for v in ce["alpha"][len("table:["):-1].split(",")])
    assert check_mult_skew_semi_derivation(d, g, alpha).holds
    add = check_full_additivity(d)
    assert not add.holds
    w = add.witnesses[0]
    assert d(w.x + w.y) != d(w.x) + d(w.y)
    assert ce["first_failing_pattern"] is not None


def test_hunt_none_found_wording():
    rep = counterexample_hunt(SearchConfig(UT2, relaxations={"drop_clause_r2"}))
    assert rep.verdict == "none-found"


def test_hunt_on_product_with_zero_g():
    ring = make_ring(P22)
    cfg = SearchConfig(P22, idempotent="(1,0)", g_family="zero", relaxations={"drop_assumption"})
    rep = counterexample_hunt(cfg)
    # identities reduce to d(xy) = alpha(x)d(y) = d(x)alpha(y); compare with the table scan
    expected = set()
    for alpha in enumerate_automorphisms(ring):
        expected |= {(alpha.table, t) for t in brute(ring, zero_map(ring), alpha)}
    got = {(tuple(int(v) for v in r.alpha[len("table:["):-1].split(",")), m.table)
           for r in rep.runs for m in r.maps}
    assert got == expected


def test_reports_are_deterministic():
    a = verify_additivity_theorem(SearchConfig(UT2)).to_dict()
    b = verify_additivity_theorem(SearchConfig(UT2)).to_dict()
    assert a == b and "elapsed" not in a


def test_reproduce_examples():
    rep = reproduce_worked_examples()
    assert rep["all_match"]
    assert len(rep["witnesses"]) == 3 and all(w["differ"] for w in rep["witnesses"])
