"""Checkers for the hypothesis sets attached to the additivity theorems.

Every implication of the form "if (a + b) g(x) = 0 for all x in X then ..." is
read with the for-all on ``x`` inside the hypothesis; ``a`` and ``b`` range over
their cells and the conclusion constrains them.  All scans are exhaustive over
cells, so these checkers need tabulated rings.

Several hypothesis families quantify ``x`` over ``R_ii`` "for i = 1, 2".  By
default ``x`` ranges over ``R11`` and ``R22`` together in a single hypothesis
(``joint=True``).  ``joint=False`` treats each ``i`` as a separate case, a
strictly stronger requirement that already fails on the 2x2 matrix ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .maps import RingMap, is_endomorphism, tabulate
from .peirce import PeirceFrame, make_frame
from .ring_core import Element, Ring, RingMismatchError, UnsupportedOperation, prime_witness


@dataclass
class ClauseResult:
    clause_id: str
    holds: bool
    description: str = ""
    witness: Optional[dict] = None
    cases_checked: int = 0

    def to_dict(self) -> dict:
        return {"clause": self.clause_id, "holds": self.holds, "description": self.description,
                "cases_checked": self.cases_checked, "witness": self.witness}


@dataclass
class AssumptionReport:
    family: str
    clauses: list[ClauseResult] = field(default_factory=list)
    threshold: Optional[int] = None  # set when only `threshold` of the counted clauses are required
    counted: tuple[str, ...] = ()

    @property
    def satisfied(self) -> int:
        ids = self.counted or tuple(c.clause_id for c in self.clauses)
        return sum(1 for c in self.clauses if c.clause_id in ids and c.holds)

    @property
    def overall(self) -> bool:
        if self.threshold is None:
            return all(c.holds for c in self.clauses)
        required = [c for c in self.clauses if c.clause_id not in self.counted]
        return all(c.holds for c in required) and self.satisfied >= self.threshold

    def clause(self, clause_id: str) -> ClauseResult:
        for c in self.clauses:
            if c.clause_id == clause_id:
                return c
        raise KeyError(clause_id)

    def to_dict(self) -> dict:
        return {"report": "assumption", "family": self.family, "overall": self.overall,
                "satisfied": self.satisfied, "threshold": self.threshold,
                "clauses": [c.to_dict() for c in self.clauses]}


class _Cells:
    """Index-level view of a frame: tables plus cell member lists."""

    def __init__(self, frame: PeirceFrame, g: RingMap):
        ring = frame.ring
        if not ring.tabulated:
            raise UnsupportedOperation("hypothesis checks need exhaustive cell scans (tabulated ring)")
        if g.ring is not ring:
            raise RingMismatchError("map and frame are on different rings")
        self.ring = ring
        self.A, self.M = ring.add_table, ring.mul_table
        self.z = ring.zero_index
        self.g = tabulate(g).table
        self.R = frame.cell_indices

    def lab(self, v: int) -> str:
        return self.ring.labels[v]


def _x_ranges(spec, joint):
    # spec: list of (case_key, cells) where cells is the tuple of R_ii feeding x
    return spec if not joint else [(tuple(k for k, _ in spec), tuple(c for _, cs in spec for c in cs))]


def _implication(C: _Cells, clause: ClauseResult, case, a_cell, b_cell, x_cells, side, conclusion, gmap=None):
    """Scan ``a in R[a_cell], b in R[b_cell]``; hypothesis ``(a+b)g(x)=0`` (side 'left')
    or ``g(x)(a+b)=0`` (side 'right') for all ``x`` in the union of ``x_cells``."""
    A, M, z = C.A, C.M, C.z
    gt = gmap if gmap is not None else C.g
    gx = sorted({gt[x] for cell in x_cells for x in C.R[cell]})
    for a in C.R[a_cell]:
        for b in C.R[b_cell]:
            clause.cases_checked += 1
            s = A[a][b]
            if side == "left":
                hyp = all(M[s][v] == z for v in gx)
            else:
                hyp = all(M[v][s] == z for v in gx)
            if hyp and not conclusion(a, b, s):
                clause.holds = False
                if clause.witness is None:
                    clause.witness = {
                        "case": list(case) if isinstance(case, tuple) else case,
                        "a": C.lab(a), "b": C.lab(b),
                        "a_cell": f"R{a_cell[0]}{a_cell[1]}", "b_cell": f"R{b_cell[0]}{b_cell[1]}",
                        "x_range": "+".join(f"R{c[0]}{c[1]}" for c in x_cells),
                        "side": side,
                    }
                return


def _g_zero(C: _Cells) -> ClauseResult:
    g0 = C.g[C.z]
    res = ClauseResult("0", g0 == C.z, "g(0)=0", cases_checked=1)
    if not res.holds:
        res.witness = {"g(0)": C.lab(g0)}
    return res


def _cell_additivity(C: _Cells, clause_id: str, c1, c2) -> ClauseResult:
    A, g = C.A, C.g
    res = ClauseResult(clause_id, True, f"g(a+b)=g(a)+g(b), a in R{c1[0]}{c1[1]}, b in R{c2[0]}{c2[1]}")
    for a in C.R[c1]:
        for b in C.R[c2]:
            res.cases_checked += 1
            if g[A[a][b]] != A[g[a]][g[b]]:
                res.holds = False
                res.witness = {"a": C.lab(a), "b": C.lab(b), "lhs": C.lab(g[A[a][b]]),
                               "rhs": C.lab(A[g[a]][g[b]])}
                return res
    return res


def _clause_i(C: _Cells) -> ClauseResult:
    res = ClauseResult("i", True, "(a_k1+b_k2)g(x_ij)=0 for all x_ij, i<=j  =>  a_k1=0 (i=1) / b_k2=0 (i=2)")
    z = C.z
    for k in (1, 2):
        for (i, j) in ((1, 1), (1, 2), (2, 2)):
            concl = (lambda a, b, s: a == z) if i == 1 else (lambda a, b, s: b == z)
            _implication(C, res, (k, i, j), (k, 1), (k, 2), [(i, j)], "left", concl)
    return res


def _clause_ii(C: _Cells, clause_id="ii", gmap=None, name="g") -> ClauseResult:
    res = ClauseResult(clause_id, True,
                       f"{name}(x_ii)(a_1j+b_2j)=0 for all x_ii  =>  a_1j=0 (i=1) / b_2j=0 (i=2)")
    z = C.z
    for j in (1, 2):
        for i in (1, 2):
            concl = (lambda a, b, s: a == z) if i == 1 else (lambda a, b, s: b == z)
            _implication(C, res, (i, j), (1, j), (2, j), [(i, i)], "right", concl, gmap)
    return res


def check_standing_assumption(g: RingMap, frame: PeirceFrame) -> AssumptionReport:
    """Standing assumption on ``g`` for the first additivity theorem: clauses 0, i-iv."""
    C = _Cells(frame, g)
    return AssumptionReport("standing", [
        _g_zero(C), _clause_i(C), _clause_ii(C),
        _cell_additivity(C, "iii", (1, 1), (1, 2)),
        _cell_additivity(C, "iv", (1, 1), (2, 1)),
    ])


def check_sum_conditions(g: RingMap, frame: PeirceFrame, joint: bool = True) -> AssumptionReport:
    """Conditions of the second additivity theorem (sums must vanish, not summands)."""
    C = _Cells(frame, g)
    zero = C.z
    concl = lambda a, b, s: s == zero  # noqa: E731
    ci = ClauseResult("i", True, "(a_j1+b_j2)g(x_ii)=0 for all x_ii  =>  a_j1+b_j2=0")
    for j in (1, 2):
        for key, xc in _x_ranges([((j, i), [(i, i)]) for i in (1, 2)], joint):
            _implication(C, ci, key, (j, 1), (j, 2), xc, "left", concl)
    cii = ClauseResult("ii", True, "g(x_ii)(a_11+a_21)=0 for all x_ii  =>  a_11+a_21=0")
    for key, xc in _x_ranges([((i,), [(i, i)]) for i in (1, 2)], joint):
        _implication(C, cii, key, (1, 1), (2, 1), xc, "right", concl)
    name = "sum-conditions" + ("" if joint else "(per-i)")
    return AssumptionReport(name, [_g_zero(C), ci, cii])


def check_d_conditions(d: RingMap, g: RingMap, frame: PeirceFrame) -> AssumptionReport:
    """Clauses i-ii as in the standing assumption; clause iii puts ``d`` in place of ``g``."""
    C = _Cells(frame, g)
    if d.ring is not frame.ring:
        raise RingMismatchError("map and frame are on different rings")
    dt = tabulate(d).table
    return AssumptionReport("d-conditions", [
        _g_zero(C), _clause_i(C), _clause_ii(C), _clause_ii(C, "iii", gmap=dt, name="d"),
    ])


def check_four_conditions(g: RingMap, frame: PeirceFrame, joint: bool = True) -> AssumptionReport:
    """Four independent conditions; the report counts how many hold.

    ``overall`` is true when ``g(0) = 0`` and at least three of the four hold.
    """
    C = _Cells(frame, g)
    zero = C.z
    concl = lambda a, b, s: s == zero  # noqa: E731
    specs = (
        ("i", (1, 1), (1, 2), "left", "(a_11+b_12)g(x_ii)=0  =>  a_11+b_12=0"),
        ("ii", (2, 1), (2, 2), "left", "(a_21+b_22)g(x_ii)=0  =>  a_21+b_22=0"),
        ("iii", (1, 1), (2, 1), "right", "g(x_ii)(a_11+b_21)=0  =>  a_11+b_21=0"),
        ("iv", (1, 2), (2, 2), "right", "g(x_ii)(a_12+b_22)=0  =>  a_12+b_22=0"),
    )
    clauses = [_g_zero(C)]
    for cid, ca, cb, side, desc in specs:
        res = ClauseResult(cid, True, desc)
        for key, xc in _x_ranges([((i,), [(i, i)]) for i in (1, 2)], joint):
            _implication(C, res, key, ca, cb, xc, side, concl)
        clauses.append(res)
    name = "four-conditions" + ("" if joint else "(per-i)")
    return AssumptionReport(name, clauses, threshold=3, counted=("i", "ii", "iii", "iv"))


def check_prime_premise(ring: Ring, e: Element, g: RingMap) -> AssumptionReport:
    """Premise of the prime-ring corollaries: prime ring, ``1 != 0``, ``e`` non-trivial
    idempotent, ``g`` a (unital) endomorphism with ``g(e) = e``."""
    if not ring.tabulated:
        raise UnsupportedOperation("primeness test needs a tabulated ring")
    ring._check(e)
    clauses = []
    pw = prime_witness(ring)
    clauses.append(ClauseResult("prime", pw is None, "aRb=0 => a=0 or b=0",
                                witness=None if pw is None else {"a": str(pw[0]), "b": str(pw[1])}))
    clauses.append(ClauseResult("1!=0", ring.one != ring.zero, "1 != 0"))
    idem = ring.mul(e, e) == e and e not in (ring.zero, ring.one)
    clauses.append(ClauseResult("e-nontrivial-idempotent", idem, "e*e=e, e not in {0,1}",
                                witness=None if idem else {"e": str(e), "e*e": str(ring.mul(e, e))}))
    kind = is_endomorphism(g)
    w = None
    if not kind.endomorphism:
        w = {"additive_witness": [str(v) for v in kind.additive_witness] if kind.additive_witness else None,
             "multiplicative_witness": ([str(v) for v in kind.multiplicative_witness]
                                        if kind.multiplicative_witness else None),
             "g(1)": str(g(ring.one))}
    clauses.append(ClauseResult("g-endomorphism", kind.endomorphism, "g additive, multiplicative, g(1)=1",
                                witness=w))
    ge = g(e)
    clauses.append(ClauseResult("g(e)=e", ge == e, "g(e)=e", witness=None if ge == e else {"g(e)": str(ge)}))
    return AssumptionReport("prime-premise", clauses)


HYPOTHESIS_FAMILIES = {
    "standing": check_standing_assumption,
    "sum-conditions": check_sum_conditions,
    "four-conditions": check_four_conditions,
}


def check_family(family: str, g: RingMap, frame: PeirceFrame, d: Optional[RingMap] = None) -> AssumptionReport:
    if family == "d-conditions":
        if d is None:
            raise ValueError("d-conditions needs d")
        return check_d_conditions(d, g, frame)
    if family == "prime-premise":
        return check_prime_premise(frame.ring, frame.e1, g)
    if family.endswith("(per-i)") and family[:-7] in ("sum-conditions", "four-conditions"):
        return HYPOTHESIS_FAMILIES[family[:-7]](g, frame, joint=False)
    try:
        fn = HYPOTHESIS_FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown hypothesis family {family!r}") from None
    return fn(g, frame)


__all__ = [
    "AssumptionReport", "ClauseResult", "check_standing_assumption", "check_sum_conditions",
    "check_d_conditions", "check_four_conditions", "check_prime_premise",
    "check_family", "make_frame",
]
