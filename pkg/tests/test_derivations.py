import pytest
from hypothesis import given, settings, strategies as st

from ssdlab.derivations import (ALL_CELL_PAIRS, LEMMA_PATTERNS, IdentityDomain, check_full_additivity,
                                check_mult_derivation, check_mult_generalized_ssd, check_mult_semi_derivation,
                                check_mult_skew_derivation, check_mult_skew_semi_derivation,
                                check_partial_additivity, first_failing_pattern, parse_pattern,
                                partial_additivity_verdicts, ssd_defect)
from ssdlab.maps import BuiltinMap, TableMap, enumerate_automorphisms, identity_map, make_tabulated, zero_map
from ssdlab.peirce import make_frame
from ssdlab.ring_core import RationalMatrix2Ring, RingSpec, make_ring

from conftest import F2

Q = RationalMatrix2Ring()
E = Q.unit


def inner_derivation(ring, a):
    return TableMap(ring, [(a * x - x * a).value for x in ring])


def test_grid_domain_size():
    pairs = IdentityDomain.grid().pairs(Q)
    assert len(pairs) >= 10_000


def test_scaled_flip_example_defects():
    d, g, alpha = BuiltinMap(Q, "scaled_flip", 2), BuiltinMap(Q, "zero"), BuiltinMap(Q, "flip_conj")
    assert ssd_defect(d, g, alpha, E(1, 1), E(1, 2)) == (Q.zero, Q.zero, Q.zero)
    semi = check_mult_semi_derivation(d, g, IdentityDomain.grid())
    assert not semi.holds
    w = semi.witnesses[0]
    assert w.lhs != w.rhs


def test_identity_is_not_a_derivation_on_zn():
    # h(1) = h(1*1) = 2 h(1) forces h(1) = 0
    ring = make_ring(RingSpec.zn(5))
    assert not check_mult_derivation(identity_map(ring)).holds
    assert check_mult_derivation(zero_map(ring)).holds


def test_inner_derivations(m2):
    ident = identity_map(m2)
    for a in m2:
        h = inner_derivation(m2, a)
        assert check_mult_derivation(h).holds
        assert check_mult_skew_semi_derivation(h, ident, ident).holds
        assert check_mult_skew_derivation(h, ident).holds


def test_precondition_failures(ut2):
    ident = identity_map(ut2)
    rep = check_mult_skew_semi_derivation(zero_map(ut2), ident, zero_map(ut2))
    assert rep.verdict == "precondition-failed" and rep.notes
    shifted = make_tabulated(ut2, [1] * 8)
    rep = check_mult_skew_semi_derivation(zero_map(ut2), shifted, ident)
    assert rep.verdict == "precondition-failed"


def test_generalized_needs_an_inner_ssd(ut2):
    ident = identity_map(ut2)
    bad_d = make_tabulated(ut2, list(range(8)))  # identity is not an SSD for g = alpha = identity
    rep = check_mult_generalized_ssd(zero_map(ut2), bad_d, ident, ident)
    assert rep.verdict == "precondition-failed"
    assert any("d(" in n for n in rep.notes)


def test_every_ssd_is_generalized_over_itself(ut2):
    ident = identity_map(ut2)
    for a in ut2:
        d = inner_derivation(ut2, a)
        assert check_mult_generalized_ssd(d, d, ident, ident).holds


def test_witness_cap(ut2):
    ident = identity_map(ut2)
    rep = check_mult_derivation(ident, cap=2)
    assert not rep.holds
    assert len([w for w in rep.witnesses if w.identity == rep.witnesses[0].identity]) <= 2


@pytest.mark.parametrize("pattern, shape", [("11+12", "pair"), ("12+12*22", "product"),
                                            ("11+12+21+22", "full")])
def test_parse_pattern(pattern, shape):
    assert parse_pattern(pattern)[0] == shape


@pytest.mark.parametrize("pattern", ["13+12", "11-12", "", "11+12*"])
def test_parse_pattern_rejects(pattern):
    with pytest.raises(ValueError):
        parse_pattern(pattern)


def test_additive_maps_pass_every_pattern(m2):
    frame = make_frame(m2, m2.element("[[1,0],[0,0]]"))
    for aut in enumerate_automorphisms(m2):
        verdicts = partial_additivity_verdicts(aut, frame, LEMMA_PATTERNS + ALL_CELL_PAIRS)
        assert all(verdicts.values())
        assert first_failing_pattern(aut, frame) is None


def test_cross_cell_defect_is_localized(f2xf2):
    # d = indicator of (1,1): additive inside each cell, not across R11 + R22
    frame = make_frame(f2xf2, f2xf2.element("(1,0)"))
    d = make_tabulated(f2xf2, [0, 0, 0, 1])
    assert first_failing_pattern(d, frame) == "11+22"
    rep = check_partial_additivity(d, frame, "11+22")
    w = rep.witnesses[0]
    assert d(w.x + w.y) != d(w.x) + d(w.y)
    assert not check_full_additivity(d).holds


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 7), min_size=8, max_size=8))
def test_full_pattern_is_implied_by_additivity(images):
    ring = make_ring(RingSpec.ut2(F2))
    frame = make_frame(ring, ring.element("[[1,0],[0,0]]"))
    m = make_tabulated(ring, images)
    add = check_full_additivity(m).holds
    verdicts = partial_additivity_verdicts(m, frame, LEMMA_PATTERNS + ALL_CELL_PAIRS)
    if add:
        assert all(verdicts.values())
    else:
        assert not all(verdicts.values())


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=4, max_size=4), st.sampled_from([0, 1]))
def test_ssd_check_matches_naive_definition(images, which_alpha):
    ring = make_ring(RingSpec.product(F2, F2))
    d = make_tabulated(ring, images)
    g = identity_map(ring)
    alpha = enumerate_automorphisms(ring)[which_alpha]
    naive = all(d(x * y) == d(x) * g(y) + alpha(x) * d(y) and d(x * y) == d(x) * alpha(y) + g(x) * d(y)
                for x in ring for y in ring) and all(d(g(x)) == g(d(x)) for x in ring)
    assert check_mult_skew_semi_derivation(d, g, alpha).holds is naive


q = st.fractions(min_value=-9, max_value=9, max_denominator=7)


@settings(max_examples=60, deadline=None)
@given(st.tuples(q, q, q, q), st.tuples(q, q, q, q))
def test_generalized_example_on_random_rationals(a, b):
    f, g = BuiltinMap(Q, "scaled_flip", 3), BuiltinMap(Q, "flip_conj")
    x, y = Q.element(a), Q.element(b)
    # d = 0, so both generalized identities reduce to f(xy) = f(x)g(y) = g(x)f(y)
    assert f(x * y) == f(x) * g(y)
    assert f(x * y) == g(x) * f(y)
    assert f(g(x)) == g(f(x))
