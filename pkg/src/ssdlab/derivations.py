"""Executable predicates for derivation-like identities.

All multiplicative checks here go through the generic ``Element``/``RingMap``
API.  That is deliberate: the search engine works on raw index tables, and these
functions are the independent route used to re-check whatever it finds.

On the structural ring every check is one-sided: ``holds`` means no
counterexample was found among the pairs of the domain.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Optional

from .maps import RingMap, is_automorphism, sample_pairs
from .peirce import CELLS, PeirceFrame
from .reports import DEFAULT_WITNESS_CAP, DefectReport, Witness
from .ring_core import Element, Ring, RingError, RingMismatchError, UnsupportedOperation


@dataclass(frozen=True)
class IdentityDomain:
    """How "for all x, y" is realized: every pair, or grid plus random pairs."""

    kind: str = "exhaustive"
    grid_bound: int = 2
    grid_pairs: int = 10_000
    random_budget: int = 200
    seed: int = 0

    @classmethod
    def exhaustive(cls) -> "IdentityDomain":
        return cls("exhaustive")

    @classmethod
    def grid(cls, grid_bound: int = 2, random_budget: int = 200, seed: int = 0,
             grid_pairs: int = 10_000) -> "IdentityDomain":
        return cls("grid_and_random", grid_bound, grid_pairs, random_budget, seed)

    @classmethod
    def default_for(cls, ring: Ring, seed: int = 0, budget: int = 200) -> "IdentityDomain":
        return cls.exhaustive() if ring.tabulated else cls.grid(seed=seed, random_budget=budget)

    def pairs(self, ring: Ring) -> list[tuple[Element, Element]]:
        if self.kind == "exhaustive":
            if not ring.tabulated:
                raise UnsupportedOperation("an exhaustive domain needs a tabulated ring")
            return sample_pairs(ring)
        if self.kind != "grid_and_random":
            raise RingError(f"unknown domain kind {self.kind!r}")
        if ring.tabulated:
            return sample_pairs(ring)
        return sample_pairs(ring, self.random_budget, self.seed, self.grid_bound, self.grid_pairs)

    def points(self, ring: Ring) -> list[Element]:
        if ring.tabulated:
            return list(ring.elements())
        seen = dict.fromkeys(x for pair in self.pairs(ring) for x in pair)
        return list(seen)


def _same_ring(*maps: RingMap) -> Ring:
    ring = maps[0].ring
    for m in maps[1:]:
        if m.ring is not ring:
            raise RingMismatchError(f"map {m} is defined on {m.ring}, expected {ring}")
    return ring


PairClauses = Callable[[Element, Element], Iterable[tuple[str, Element, Element]]]
PointClauses = Callable[[Element], Iterable[tuple[str, Element, Element]]]


def _scan(report: DefectReport, ring: Ring, dom: IdentityDomain, pair_fn: Optional[PairClauses],
          point_fn: Optional[PointClauses] = None, cap: int = DEFAULT_WITNESS_CAP) -> DefectReport:
    report.exhaustive = ring.tabulated
    if pair_fn is not None:
        for x, y in dom.pairs(ring):
            report.pairs_checked += 1
            for name, lhs, rhs in pair_fn(x, y):
                if lhs != rhs:
                    report.add_witness(Witness(name, x, y, lhs, rhs), cap)
    if point_fn is not None:
        for x in dom.points(ring):
            for name, lhs, rhs in point_fn(x):
                if lhs != rhs:
                    report.add_witness(Witness(name, x, None, lhs, rhs), cap)
    return report


# --------------------------------------------------------------------------
# residuals


def ssd_defect(d: RingMap, g: RingMap, alpha: RingMap, x: Element, y: Element) -> tuple[Element, Element, Element]:
    """Residuals of the three skew semi-derivation clauses at ``(x, y)``.

    ``r1 = d(xy) - d(x)g(y) - alpha(x)d(y)``, ``r2 = d(xy) - d(x)alpha(y) - g(x)d(y)``,
    ``r3 = d(g(x)) - g(d(x))``.
    """
    ring = _same_ring(d, g, alpha)
    ring._check(x, y)
    add, mul, sub = ring.add, ring.mul, ring.sub
    dxy, dx, dy = d(mul(x, y)), d(x), d(y)
    r1 = sub(dxy, add(mul(dx, g(y)), mul(alpha(x), dy)))
    r2 = sub(dxy, add(mul(dx, alpha(y)), mul(g(x), dy)))
    r3 = sub(d(g(x)), g(dx))
    return r1, r2, r3


def _ssd_clauses(d, g, alpha, ring, with_r2=True):
    add, mul = ring.add, ring.mul

    def pair_fn(x, y):
        dxy, dx, dy = d(mul(x, y)), d(x), d(y)
        yield "d(xy)=d(x)g(y)+alpha(x)d(y)", dxy, add(mul(dx, g(y)), mul(alpha(x), dy))
        if with_r2:
            yield "d(xy)=d(x)alpha(y)+g(x)d(y)", dxy, add(mul(dx, alpha(y)), mul(g(x), dy))

    def point_fn(x):
        yield "d(g(x))=g(d(x))", d(g(x)), g(d(x))

    return pair_fn, point_fn


def _alpha_precondition(report: DefectReport, alpha: RingMap, dom: IdentityDomain) -> None:
    kind = is_automorphism(alpha, dom.random_budget, dom.seed)
    if kind.automorphism is False:
        report.verdict = "precondition-failed"
        report.notes.append(f"alpha = {alpha} is not an automorphism")
    elif kind.automorphism is None:
        report.notes.append(f"alpha = {alpha}: bijectivity unknown, endomorphism checks passed")


def _g_zero_precondition(report: DefectReport, g: RingMap) -> None:
    ring = g.ring
    if g(ring.zero) != ring.zero:
        report.verdict = "precondition-failed"
        report.notes.append(f"g(0) != 0: g(0) = {g(ring.zero)}")


def check_mult_skew_semi_derivation(d: RingMap, g: RingMap, alpha: RingMap,
                                    dom: Optional[IdentityDomain] = None,
                                    cap: int = DEFAULT_WITNESS_CAP) -> DefectReport:
    ring = _same_ring(d, g, alpha)
    dom = dom or IdentityDomain.default_for(ring)
    report = DefectReport(name="multiplicative-skew-semi-derivation")
    _alpha_precondition(report, alpha, dom)
    _g_zero_precondition(report, g)
    pair_fn, point_fn = _ssd_clauses(d, g, alpha, ring)
    report = _scan(report, ring, dom, pair_fn, point_fn, cap)
    return report


def check_mult_generalized_ssd(f: RingMap, d: RingMap, g: RingMap, alpha: RingMap,
                               dom: Optional[IdentityDomain] = None,
                               cap: int = DEFAULT_WITNESS_CAP) -> DefectReport:
    """``f(xy) = f(x)g(y) + alpha(x)d(y) = d(x)alpha(y) + g(x)f(y)`` and ``f(g(x)) = g(f(x))``.

    The inner ``d`` must itself pass the skew semi-derivation check with the
    same ``g`` and ``alpha``; otherwise the verdict is ``precondition-failed``.
    """
    ring = _same_ring(f, d, g, alpha)
    dom = dom or IdentityDomain.default_for(ring)
    report = DefectReport(name="multiplicative-generalized-skew-semi-derivation")
    inner = check_mult_skew_semi_derivation(d, g, alpha, dom, cap=1)
    if not inner.holds:
        report.verdict = "precondition-failed"
        failed = sorted({w.identity for w in inner.witnesses}) or inner.notes
        report.notes.append("inner d is not a multiplicative skew semi-derivation: " + "; ".join(failed))
        report.notes.extend(n for n in inner.notes if n not in report.notes)
    add, mul = ring.add, ring.mul

    def pair_fn(x, y):
        fxy = f(mul(x, y))
        yield "f(xy)=f(x)g(y)+alpha(x)d(y)", fxy, add(mul(f(x), g(y)), mul(alpha(x), d(y)))
        yield "f(xy)=d(x)alpha(y)+g(x)f(y)", fxy, add(mul(d(x), alpha(y)), mul(g(x), f(y)))

    def point_fn(x):
        yield "f(g(x))=g(f(x))", f(g(x)), g(f(x))

    return _scan(report, ring, dom, pair_fn, point_fn, cap)


def check_mult_semi_derivation(D: RingMap, g: RingMap, dom: Optional[IdentityDomain] = None,
                               cap: int = DEFAULT_WITNESS_CAP) -> DefectReport:
    ring = _same_ring(D, g)
    dom = dom or IdentityDomain.default_for(ring)
    add, mul = ring.add, ring.mul
    report = DefectReport(name="multiplicative-semi-derivation")

    def pair_fn(x, y):
        Dxy, Dx, Dy = D(mul(x, y)), D(x), D(y)
        yield "D(xy)=D(x)g(y)+xD(y)", Dxy, add(mul(Dx, g(y)), mul(x, Dy))
        yield "D(xy)=D(x)y+g(x)D(y)", Dxy, add(mul(Dx, y), mul(g(x), Dy))

    def point_fn(x):
        yield "D(g(x))=g(D(x))", D(g(x)), g(D(x))

    return _scan(report, ring, dom, pair_fn, point_fn, cap)


def check_mult_skew_derivation(delta: RingMap, alpha: RingMap, dom: Optional[IdentityDomain] = None,
                               cap: int = DEFAULT_WITNESS_CAP) -> DefectReport:
    ring = _same_ring(delta, alpha)
    dom = dom or IdentityDomain.default_for(ring)
    add, mul = ring.add, ring.mul
    report = DefectReport(name="multiplicative-skew-derivation")
    _alpha_precondition(report, alpha, dom)

    def pair_fn(x, y):
        yield "delta(xy)=delta(x)y+alpha(x)delta(y)", delta(mul(x, y)), add(mul(delta(x), y), mul(alpha(x), delta(y)))

    return _scan(report, ring, dom, pair_fn, None, cap)


def check_mult_derivation(h: RingMap, dom: Optional[IdentityDomain] = None,
                          cap: int = DEFAULT_WITNESS_CAP) -> DefectReport:
    ring = h.ring
    dom = dom or IdentityDomain.default_for(ring)
    add, mul = ring.add, ring.mul
    report = DefectReport(name="multiplicative-derivation")

    def pair_fn(x, y):
        yield "h(xy)=h(x)y+xh(y)", h(mul(x, y)), add(mul(h(x), y), mul(x, h(y)))

    return _scan(report, ring, dom, pair_fn, None, cap)


# --------------------------------------------------------------------------
# additivity, full and partial

# additivity shapes used by the lemma chain, in the order the chain proves them
LEMMA_PATTERNS = (
    "11+12", "11+21", "22+12", "22+21", "11+22",
    "12+12*22", "21+22*21",
    "12+12", "21+21",
    "11+11", "22+22",
    "11+12+21+22",
)
# every cross-cell and same-cell pair, for the exhaustive chain cross-check
ALL_CELL_PAIRS = tuple(f"{a[0]}{a[1]}+{b[0]}{b[1]}" for k, a in enumerate(CELLS) for b in CELLS[k:])

_PATTERN_RE = re.compile(r"^([12])([12])\+([12])([12])(?:\*([12])([12]))?$")


def parse_pattern(pattern: str) -> tuple[str, tuple]:
    """``"ij+kl"`` (pair), ``"ij+kl*mn"`` (product form) or ``"11+12+21+22"``."""
    if pattern == "11+12+21+22":
        return "full", ()
    m = _PATTERN_RE.match(pattern)
    if not m:
        raise ValueError(f"unknown additivity pattern {pattern!r}")
    v = [int(c) for c in m.groups() if c is not None]
    cells = tuple((v[i], v[i + 1]) for i in range(0, len(v), 2))
    return ("product" if len(cells) == 3 else "pair"), cells


def check_partial_additivity(m: RingMap, frame: PeirceFrame, pattern: str,
                             cap: int = DEFAULT_WITNESS_CAP) -> DefectReport:
    """Exhaustively check one cell-restricted additivity equation for ``m``.

    ``"11+12"`` checks ``m(a + b) = m(a) + m(b)`` for ``a in R11, b in R12``;
    ``"12+12*22"`` checks ``m(a + bc) = m(a) + m(bc)`` for ``a, b in R12, c in R22``
    (iterating the product ``bc`` as written, not all of ``R12``);
    ``"11+12+21+22"`` checks ``m(x) = sum of m(e_i x e_j)``.
    """
    ring = frame.ring
    if m.ring is not ring:
        raise RingMismatchError("map and frame are on different rings")
    if not ring.tabulated:
        raise UnsupportedOperation("partial additivity checks need a tabulated ring")
    shape, cells = parse_pattern(pattern)
    report = DefectReport(name=f"additivity:{pattern}")
    add, mul = ring.add, ring.mul
    C = frame.cells
    if shape == "full":
        for x in ring:
            parts = frame.project(x)
            rhs = ring.zero
            for c in parts:
                rhs = add(rhs, m(c))
            report.pairs_checked += 1
            if m(x) != rhs:
                report.add_witness(Witness(pattern, x, None, m(x), rhs), cap)
        return report
    if shape == "pair":
        (c1, c2) = cells
        triples = ((a, b) for a, b in product(C[c1], C[c2]))
    else:
        (c1, c2, c3) = cells
        seen = set()
        triples = []
        for a in C[c1]:
            for b, c in product(C[c2], C[c3]):
                bc = mul(b, c)
                if (a, bc) not in seen:
                    seen.add((a, bc))
                    triples.append((a, bc))
    for a, b in triples:
        report.pairs_checked += 1
        lhs, rhs = m(add(a, b)), add(m(a), m(b))
        if lhs != rhs:
            report.add_witness(Witness(pattern, a, b, lhs, rhs), cap)
    return report


def partial_additivity_verdicts(m: RingMap, frame: PeirceFrame,
                                patterns: Iterable[str] = LEMMA_PATTERNS) -> dict[str, bool]:
    return {p: check_partial_additivity(m, frame, p, cap=1).holds for p in patterns}


def first_failing_pattern(m: RingMap, frame: PeirceFrame,
                          patterns: Iterable[str] = LEMMA_PATTERNS) -> Optional[str]:
    for p in patterns:
        if not check_partial_additivity(m, frame, p, cap=1).holds:
            return p
    return None


def check_full_additivity(m: RingMap, dom: Optional[IdentityDomain] = None,
                          cap: int = DEFAULT_WITNESS_CAP) -> DefectReport:
    """``m(x + y) = m(x) + m(y)`` over the domain (exhaustive on tabulated rings)."""
    ring = m.ring
    dom = dom or IdentityDomain.default_for(ring)
    add = ring.add
    report = DefectReport(name="additivity")

    def pair_fn(x, y):
        yield "m(x+y)=m(x)+m(y)", m(add(x, y)), add(m(x), m(y))

    return _scan(report, ring, dom, pair_fn, None, cap)
