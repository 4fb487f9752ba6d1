"""Two-sided Peirce decomposition relative to a non-trivial idempotent."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property

from .reports import DefectReport, Witness
from .ring_core import Element, Ring, RingError, RingMismatchError

CELLS = ((1, 1), (1, 2), (2, 1), (2, 2))


class FrameError(RingError):
    """The chosen element cannot anchor a Peirce frame."""


class TrivialIdempotentError(FrameError):
    pass


@dataclass(frozen=True)
class PeirceCoords:
    c11: Element
    c12: Element
    c21: Element
    c22: Element

    def __getitem__(self, cell: tuple[int, int]) -> Element:
        return getattr(self, f"c{cell[0]}{cell[1]}")

    def __iter__(self):
        return iter((self.c11, self.c12, self.c21, self.c22))


class PeirceFrame:
    """``e1 = e``, ``e2 = 1 - e`` and the projections ``x -> e_i x e_j``."""

    def __init__(self, ring: Ring, e: Element):
        ring._check(e)
        ee = ring.mul(e, e)
        if ee != e:
            raise FrameError(f"{e} is not idempotent: e*e = {ee}")
        if e == ring.zero or e == ring.one:
            raise TrivialIdempotentError(f"{e} is a trivial idempotent; a frame needs e not in {{0, 1}}")
        self.ring = ring
        self.e1 = e
        self.e2 = ring.sub(ring.one, e)
        z = ring.zero
        assert ring.mul(self.e2, self.e2) == self.e2
        assert ring.mul(self.e1, self.e2) == z and ring.mul(self.e2, self.e1) == z

    def idem(self, i: int) -> Element:
        return self.e1 if i == 1 else self.e2

    def component(self, x: Element, i: int, j: int) -> Element:
        m = self.ring.mul
        return m(m(self.idem(i), x), self.idem(j))

    def project(self, x: Element) -> PeirceCoords:
        if x.ring is not self.ring:
            raise RingMismatchError(f"{x!r} is not in the frame's ring {self.ring}")
        return PeirceCoords(*(self.component(x, i, j) for i, j in CELLS))

    def in_cell(self, z: Element, i: int, j: int) -> bool:
        return self.component(z, i, j) == z

    def reconstruct(self, coords: PeirceCoords) -> Element:
        for cell in CELLS:
            c = coords[cell]
            if c.ring is not self.ring:
                raise RingMismatchError(f"coordinate {cell} is not in the frame's ring")
            if not self.in_cell(c, *cell):
                raise FrameError(f"coordinate {c} does not lie in cell R{cell[0]}{cell[1]}")
        add = self.ring.add
        return add(add(coords.c11, coords.c12), add(coords.c21, coords.c22))

    # -- tabulated helpers ---------------------------------------------------

    @cached_property
    def cells(self) -> dict[tuple[int, int], tuple[Element, ...]]:
        """Members of each ``R_ij`` in index order (tabulated rings only)."""
        if not self.ring.tabulated:
            raise RingError("cell listing needs a tabulated ring")
        return {cell: tuple(x for x in self.ring if self.in_cell(x, *cell)) for cell in CELLS}

    @cached_property
    def cell_indices(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return {cell: tuple(x.value for x in xs) for cell, xs in self.cells.items()}

    def cell_sizes(self) -> dict[tuple[int, int], int]:
        return {cell: len(xs) for cell, xs in self.cells.items()}

    def __repr__(self):
        return f"PeirceFrame({self.ring}, e={self.e1})"


def make_frame(ring: Ring, e: Element) -> PeirceFrame:
    return PeirceFrame(ring, e)


def project(frame: PeirceFrame, x: Element) -> PeirceCoords:
    return frame.project(x)


def reconstruct(frame: PeirceFrame, coords: PeirceCoords) -> Element:
    return frame.reconstruct(coords)


def _structural_sample(frame: PeirceFrame, budget: int, seed: int) -> list[Element]:
    ring = frame.ring
    rnd = random.Random(seed)
    base = ring.grid(1) + [ring.random_element(rnd) for _ in range(budget)]
    return base


def cell_product_check(frame: PeirceFrame, sample_budget: int = 40, seed: int = 0) -> DefectReport:
    """Verify ``R_ij R_kl`` lies in ``R_il`` when ``j == k`` and is zero otherwise.

    Exhaustive on tabulated rings.  On the structural ring, cell members are the
    projections of a grid (entries in ``-1..1``) plus seeded random matrices, so
    the check is one-sided there.
    """
    ring = frame.ring
    report = DefectReport(name="cell-products", exhaustive=ring.tabulated)
    if ring.tabulated:
        cells = frame.cells
    else:
        sample = _structural_sample(frame, sample_budget, seed)
        cells = {cell: tuple(dict.fromkeys(frame.component(x, *cell) for x in sample)) for cell in CELLS}
    for (i, j) in CELLS:
        for (k, l) in CELLS:
            for a in cells[(i, j)]:
                for b in cells[(k, l)]:
                    report.pairs_checked += 1
                    p = ring.mul(a, b)
                    if j == k:
                        if not frame.in_cell(p, i, l):
                            report.add_witness(Witness(f"R{i}{j}*R{k}{l} in R{i}{l}", a, b, p,
                                                       frame.component(p, i, l)))
                    elif p != ring.zero:
                        report.add_witness(Witness(f"R{i}{j}*R{k}{l} = 0", a, b, p, ring.zero))
    return report


def round_trip_check(frame: PeirceFrame, sample_budget: int = 40, seed: int = 0) -> DefectReport:
    """``reconstruct(project(x)) == x`` and every component lies in its cell."""
    ring = frame.ring
    report = DefectReport(name="round-trip", exhaustive=ring.tabulated)
    points = ring.elements() if ring.tabulated else _structural_sample(frame, sample_budget, seed)
    for x in points:
        report.pairs_checked += 1
        coords = frame.project(x)
        for cell in CELLS:
            if not frame.in_cell(coords[cell], *cell):
                report.add_witness(Witness(f"x_{cell[0]}{cell[1]} in R{cell[0]}{cell[1]}", x, None,
                                           coords[cell], frame.component(coords[cell], *cell)))
        back = ring.add(ring.add(coords.c11, coords.c12), ring.add(coords.c21, coords.c22))
        if back != x:
            report.add_witness(Witness("x11+x12+x21+x22 = x", x, None, back, x))
    return report


def independence_check(frame: PeirceFrame, sample_budget: int = 40, seed: int = 0,
                       per_cell: int = 7) -> DefectReport:
    """Direct-sum independence: cell elements summing to ``s`` are recovered by projecting ``s``.

    On tabulated rings every tuple of cell elements is tried; in particular a
    zero sum forces all four parts to vanish.  On the structural ring each cell
    contributes at most ``per_cell`` sampled members.
    """
    ring = frame.ring
    report = DefectReport(name="direct-sum-independence", exhaustive=ring.tabulated)
    if ring.tabulated:
        cells = frame.cells
    else:
        sample = _structural_sample(frame, sample_budget, seed)
        cells = {cell: tuple(dict.fromkeys(frame.component(x, *cell) for x in sample))[:per_cell]
                 for cell in CELLS}
    for parts in itertools.product(*(cells[c] for c in CELLS)):
        report.pairs_checked += 1
        s = ring.add(ring.add(parts[0], parts[1]), ring.add(parts[2], parts[3]))
        got = frame.project(s)
        for cell, part in zip(CELLS, parts):
            if got[cell] != part:
                report.add_witness(Witness(f"component {cell[0]}{cell[1]} of a direct sum", part, s,
                                           got[cell], part))
                break
    return report
