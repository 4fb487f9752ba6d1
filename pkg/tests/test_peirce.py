import math
import pytest
from hypothesis import given, settings, strategies as st

from ssdlab.peirce import (CELLS, FrameError, TrivialIdempotentError, cell_product_check, independence_check,
                           make_frame, project, reconstruct, round_trip_check)
from ssdlab.ring_core import RationalMatrix2Ring, nontrivial_idempotents


def frames(ring):
    return [make_frame(ring, e) for e in nontrivial_idempotents(ring)]


def test_invariants_on_every_frame(fixture_ring):
    for frame in frames(fixture_ring):
        assert round_trip_check(frame).holds
        assert independence_check(frame).holds
        assert cell_product_check(frame).holds


def test_cells_multiply_to_the_order(fixture_ring):
    # direct sum: |R| = product of the four cell sizes
    for frame in frames(fixture_ring):
        assert math.prod(frame.cell_sizes().values()) == fixture_ring.order


def test_upper_triangular_cells(ut2):
    frame = make_frame(ut2, ut2.element("[[1,0],[0,0]]"))
    assert frame.cell_sizes() == {(1, 1): 2, (1, 2): 2, (2, 1): 1, (2, 2): 2}


def test_central_idempotent_has_empty_off_diagonal(f2xf2):
    frame = make_frame(f2xf2, f2xf2.element("(1,0)"))
    assert frame.cells[(1, 2)] == (f2xf2.zero,)
    assert frame.cells[(2, 1)] == (f2xf2.zero,)
    assert frame.cells[(1, 1)] == (f2xf2.zero, f2xf2.element("(1,0)"))


def test_matrix_cells(m2):
    frame = make_frame(m2, m2.element("[[1,0],[0,0]]"))
    assert frame.cell_sizes() == {c: 2 for c in CELLS}
    assert str(frame.e2) == "[[0,0],[0,1]]"


def test_trivial_idempotents_rejected(ut2):
    for e in (ut2.zero, ut2.one):
        with pytest.raises(TrivialIdempotentError):
            make_frame(ut2, e)


def test_non_idempotent_rejected(ut2):
    with pytest.raises(FrameError, match=r"e\*e"):
        make_frame(ut2, ut2.element("[[0,1],[0,0]]"))


def test_reconstruct_checks_cell_membership(ut2):
    frame = make_frame(ut2, ut2.element("[[1,0],[0,0]]"))
    coords = frame.project(ut2.element("[[1,1],[0,1]]"))
    bad = type(coords)(coords.c12, coords.c12, coords.c21, coords.c22)
    with pytest.raises(FrameError):
        frame.reconstruct(bad)


def test_structural_suite():
    Q = RationalMatrix2Ring()
    frame = make_frame(Q, Q.unit(1, 1))
    for check in (round_trip_check, independence_check, cell_product_check):
        rep = check(frame)
        assert rep.holds and not rep.exhaustive and rep.pairs_checked > 0


q = st.fractions(min_value=-50, max_value=50, max_denominator=20)


@settings(max_examples=80, deadline=None)
@given(q, q, q, q)
def test_qm2_projection_picks_entries(a, b, c, d):
    Q = RationalMatrix2Ring()
    frame = make_frame(Q, Q.unit(1, 1))
    x = Q.element((a, b, c, d))
    coords = project(frame, x)
    assert coords[(1, 1)] == Q.element((a, 0, 0, 0))
    assert coords[(1, 2)] == Q.element((0, b, 0, 0))
    assert coords[(2, 1)] == Q.element((0, 0, c, 0))
    assert coords[(2, 2)] == Q.element((0, 0, 0, d))
    assert reconstruct(frame, coords) == x


@settings(max_examples=40, deadline=None)
@given(q, q, q, q)
def test_qm2_projection_under_an_oblique_idempotent(a, b, c, d):
    # e = [[1,1],[0,0]] is idempotent but not a matrix unit
    Q = RationalMatrix2Ring()
    frame = make_frame(Q, Q.element((1, 1, 0, 0)))
    x = Q.element((a, b, c, d))
    coords = frame.project(x)
    assert reconstruct(frame, coords) == x
    for cell in CELLS:
        assert frame.in_cell(coords[cell], *cell)
    assert frame.project(coords[(1, 2)])[(1, 2)] == coords[(1, 2)]
