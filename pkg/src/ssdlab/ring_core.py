"""Finite (tabulated) rings and the exact-rational 2x2 matrix ring.

A tabulated ring stores its full Cayley tables as tuples of tuples of element
indices; all hot loops in the package are plain table lookups.  The structural
ring ``RationalMatrix2Ring`` carries 2x2 matrices whose entries are exact
rationals (``int`` when integral, ``fractions.Fraction`` otherwise).
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .reports import DefectReport, Witness

MAX_TABULATED_ORDER = 256


class RingError(ValueError):
    """Malformed ring construction or invalid element."""


class RingMismatchError(RingError):
    """Operands (elements or maps) belong to different rings."""


class UnsupportedOperation(RingError):
    """The operation needs a tabulated ring but got a structural one."""


class ResourceLimitError(RingError):
    """An order or size bound of an exhaustive procedure was exceeded."""


# --------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class RingSpec:
    kind: str
    n: Optional[int] = None
    base: Optional["RingSpec"] = None
    left: Optional["RingSpec"] = None
    right: Optional["RingSpec"] = None

    KINDS = ("zn", "matrix2", "product", "rational_matrix2", "ut2")

    @classmethod
    def zn(cls, n: int) -> "RingSpec":
        return cls("zn", n=n)

    @classmethod
    def matrix2(cls, base: "RingSpec") -> "RingSpec":
        return cls("matrix2", base=base)

    @classmethod
    def ut2(cls, base: "RingSpec") -> "RingSpec":
        return cls("ut2", base=base)

    @classmethod
    def product(cls, left: "RingSpec", right: "RingSpec") -> "RingSpec":
        return cls("product", left=left, right=right)

    @classmethod
    def rational_matrix2(cls) -> "RingSpec":
        return cls("rational_matrix2")

    @property
    def is_finite(self) -> bool:
        return self.kind != "rational_matrix2"

    def __str__(self) -> str:
        if self.kind == "zn":
            return f"zn:{self.n}"
        if self.kind == "matrix2":
            return f"m2:{self.base}"
        if self.kind == "ut2":
            return f"ut2:{self.base}"
        if self.kind == "product":
            return f"prod({self.left},{self.right})"
        return "qm2"


# --------------------------------------------------------------------------
# elements and rings


class Element:
    """A value of a specific ring.  Comparison includes ring identity."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: "Ring", value):
        self.ring = ring
        self.value = value

    def __eq__(self, other):
        return isinstance(other, Element) and other.ring is self.ring and other.value == self.value

    def __hash__(self):
        return hash((id(self.ring), self.value))

    def __add__(self, other):
        return self.ring.add(self, other)

    def __sub__(self, other):
        return self.ring.sub(self, other)

    def __mul__(self, other):
        return self.ring.mul(self, other)

    def __neg__(self):
        return self.ring.neg(self)

    def __repr__(self):
        return f"Element({self.ring.label(self.value)})"

    def __str__(self):
        return self.ring.label(self.value)

    def __lt__(self, other):
        # only meaningful for tabulated rings; used for deterministic sorting
        return self.value < other.value


class Ring:
    spec: RingSpec
    tabulated: bool = False

    def _check(self, *xs: Element) -> None:
        for x in xs:
            if not isinstance(x, Element) or x.ring is not self:
                raise RingMismatchError(f"{x!r} is not an element of {self}")

    def element(self, value) -> Element:
        raise NotImplementedError

    def label(self, value) -> str:
        raise NotImplementedError

    def add(self, x: Element, y: Element) -> Element:
        raise NotImplementedError

    def mul(self, x: Element, y: Element) -> Element:
        raise NotImplementedError

    def neg(self, x: Element) -> Element:
        raise NotImplementedError

    def sub(self, x: Element, y: Element) -> Element:
        return self.add(x, self.neg(y))

    def eq(self, x: Element, y: Element) -> bool:
        self._check(x, y)
        return x.value == y.value

    def __str__(self) -> str:
        return str(self.spec)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec}>"


class TabulatedRing(Ring):
    """A finite unital ring given by full addition, multiplication and negation tables."""

    tabulated = True

    def __init__(self, spec, add_table, mul_table, zero: int, one: int, labels: Sequence[str]):
        order = len(labels)
        if not 1 <= order <= MAX_TABULATED_ORDER:
            raise RingError(f"order must be in 1..{MAX_TABULATED_ORDER}, got {order}")
        self.spec = spec
        self.order = order
        self.add_table = tuple(tuple(int(v) for v in row) for row in add_table)
        self.mul_table = tuple(tuple(int(v) for v in row) for row in mul_table)
        for name, table in (("add_table", self.add_table), ("mul_table", self.mul_table)):
            if len(table) != order or any(len(r) != order for r in table):
                raise RingError(f"{name} must be {order}x{order}")
            if any(not 0 <= v < order for r in table for v in r):
                raise RingError(f"{name} has an entry outside 0..{order - 1}")
        self.zero_index = zero
        self.one_index = one
        self.labels = tuple(labels)
        neg = []
        for x in range(order):
            inv = [y for y in range(order) if self.add_table[x][y] == zero]
            if len(inv) != 1:
                raise RingError(f"element {labels[x]} has {len(inv)} additive inverses")
            neg.append(inv[0])
        self.neg_table = tuple(neg)
        self._elements = tuple(Element(self, i) for i in range(order))
        self.zero = self._elements[zero]
        self.one = self._elements[one]

    def element(self, value) -> Element:
        if isinstance(value, str):
            try:
                value = self.labels.index(value)
            except ValueError:
                raise RingError(f"no element labelled {value!r} in {self}") from None
        if not isinstance(value, (int, np.integer)) or not 0 <= value < self.order:
            raise RingError(f"index {value!r} out of range for ring of order {self.order}")
        return self._elements[int(value)]

    __getitem__ = element

    def elements(self) -> tuple[Element, ...]:
        return self._elements

    def __iter__(self) -> Iterator[Element]:
        return iter(self._elements)

    def __len__(self) -> int:
        return self.order

    def label(self, value) -> str:
        return self.labels[value]

    def add(self, x, y):
        self._check(x, y)
        return self._elements[self.add_table[x.value][y.value]]

    def mul(self, x, y):
        self._check(x, y)
        return self._elements[self.mul_table[x.value][y.value]]

    def neg(self, x):
        self._check(x)
        return self._elements[self.neg_table[x.value]]

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Tables as numpy arrays (add, mul, neg)."""
        return (np.array(self.add_table, dtype=np.int64), np.array(self.mul_table, dtype=np.int64),
                np.array(self.neg_table, dtype=np.int64))

    def with_tables(self, add_table=None, mul_table=None) -> "TabulatedRing":
        """Copy with replaced tables; used to build corrupted fixtures."""
        return TabulatedRing(self.spec, add_table or self.add_table, mul_table or self.mul_table,
                             self.zero_index, self.one_index, self.labels)


def _norm(q):
    if isinstance(q, Fraction):
        return q.numerator if q.denominator == 1 else q
    if isinstance(q, int) and not isinstance(q, bool):
        return q
    if isinstance(q, str):
        return _norm(Fraction(q))
    if isinstance(q, float):
        raise RingError("matrix entries must be exact rationals, not floats")
    raise RingError(f"matrix entries must be exact rationals, got {q!r}")


def _fmt(q) -> str:
    return str(q)


class RationalMatrix2Ring(Ring):
    """2x2 matrices over the rationals; the entry tuple is ``(a11, a12, a21, a22)``."""

    def __init__(self):
        self.spec = RingSpec.rational_matrix2()
        self.zero = Element(self, (0, 0, 0, 0))
        self.one = Element(self, (1, 0, 0, 1))

    def element(self, value) -> Element:
        try:
            if len(value) == 2:
                value = (value[0][0], value[0][1], value[1][0], value[1][1])
            a, b, c, d = value
        except (TypeError, ValueError):
            raise RingError(f"expected a 2x2 matrix, got {value!r}") from None
        return Element(self, (_norm(a), _norm(b), _norm(c), _norm(d)))

    def matrix(self, a, b, c, d) -> Element:
        return self.element((a, b, c, d))

    def unit(self, i: int, j: int) -> Element:
        """Matrix unit E_ij (1-based indices)."""
        v = [0, 0, 0, 0]
        v[2 * (i - 1) + (j - 1)] = 1
        return Element(self, tuple(v))

    def label(self, value) -> str:
        a, b, c, d = value
        return f"[[{_fmt(a)},{_fmt(b)}],[{_fmt(c)},{_fmt(d)}]]"

    def add(self, x, y):
        self._check(x, y)
        a, b, c, d = x.value
        p, q, r, s = y.value
        return Element(self, (_norm(a + p), _norm(b + q), _norm(c + r), _norm(d + s)))

    def mul(self, x, y):
        self._check(x, y)
        a, b, c, d = x.value
        p, q, r, s = y.value
        return Element(self, (_norm(a * p + b * r), _norm(a * q + b * s),
                              _norm(c * p + d * r), _norm(c * q + d * s)))

    def neg(self, x):
        self._check(x)
        return Element(self, tuple(-v for v in x.value))

    def scale(self, k, x: Element) -> Element:
        self._check(x)
        k = _norm(k)
        return Element(self, tuple(_norm(k * v) for v in x.value))

    def grid(self, bound: int = 2) -> list[Element]:
        """All matrices with integer entries in ``-bound..bound``, lexicographic."""
        rng = range(-bound, bound + 1)
        return [Element(self, v) for v in itertools.product(rng, repeat=4)]

    def random_element(self, rnd: random.Random, max_num: int = 9, max_den: int = 7) -> Element:
        return Element(self, tuple(_norm(Fraction(rnd.randint(-max_num, max_num), rnd.randint(1, max_den)))
                                   for _ in range(4)))


# --------------------------------------------------------------------------
# construction


def _zn(spec: RingSpec) -> TabulatedRing:
    n = spec.n
    if not isinstance(n, int) or n < 2:
        raise RingError(f"zn: n >= 2 required (field 'n' = {n!r})")
    if n > MAX_TABULATED_ORDER:
        raise RingError(f"zn: n <= {MAX_TABULATED_ORDER} required (field 'n' = {n})")
    add = [[(x + y) % n for y in range(n)] for x in range(n)]
    mul = [[(x * y) % n for y in range(n)] for x in range(n)]
    return TabulatedRing(spec, add, mul, 0, 1 % n, [str(i) for i in range(n)])


def _product(spec: RingSpec) -> TabulatedRing:
    if spec.left is None or spec.right is None:
        raise RingError("product: both 'left' and 'right' are required")
    if not spec.left.is_finite or not spec.right.is_finite:
        raise RingError("product: 'left' and 'right' must be finite rings")
    L, R = make_ring(spec.left), make_ring(spec.right)
    m = R.order
    order = L.order * m
    if order > MAX_TABULATED_ORDER:
        raise RingError(f"product: order {order} exceeds {MAX_TABULATED_ORDER}")

    def idx(i, j):
        return i * m + j

    pairs = [(i, j) for i in range(L.order) for j in range(m)]
    add = [[idx(L.add_table[a][c], R.add_table[b][d]) for (c, d) in pairs] for (a, b) in pairs]
    mul = [[idx(L.mul_table[a][c], R.mul_table[b][d]) for (c, d) in pairs] for (a, b) in pairs]
    labels = [f"({L.labels[i]},{R.labels[j]})" for (i, j) in pairs]
    return TabulatedRing(spec, add, mul, idx(L.zero_index, R.zero_index), idx(L.one_index, R.one_index), labels)


def _matrix2(spec: RingSpec, upper: bool = False) -> TabulatedRing:
    field_name = "ut2" if upper else "matrix2"
    if spec.base is None:
        raise RingError(f"{field_name}: 'base' is required")
    if not spec.base.is_finite:
        raise RingError(f"{field_name}: 'base' must be a finite ring, got {spec.base}")
    B = make_ring(spec.base)
    n = B.order
    if upper:
        entries = [(a, b, B.zero_index, d) for a in range(n) for b in range(n) for d in range(n)]
    else:
        entries = list(itertools.product(range(n), repeat=4))
    if len(entries) > MAX_TABULATED_ORDER:
        raise RingError(f"{field_name}: order {len(entries)} exceeds {MAX_TABULATED_ORDER} (base order {n})")
    index = {v: i for i, v in enumerate(entries)}
    A, M = B.add_table, B.mul_table

    def madd(x, y):
        return tuple(A[p][q] for p, q in zip(x, y))

    def mmul(x, y):
        a, b, c, d = x
        p, q, r, s = y
        return (A[M[a][p]][M[b][r]], A[M[a][q]][M[b][s]], A[M[c][p]][M[d][r]], A[M[c][q]][M[d][s]])

    add = [[index[madd(x, y)] for y in entries] for x in entries]
    mul = [[index[mmul(x, y)] for y in entries] for x in entries]
    z, o = B.zero_index, B.one_index
    lab = B.labels
    labels = [f"[[{lab[a]},{lab[b]}],[{lab[c]},{lab[d]}]]" for (a, b, c, d) in entries]
    return TabulatedRing(spec, add, mul, index[(z, z, z, z)], index[(o, z, z, o)], labels)


@functools.lru_cache(maxsize=64)
def make_ring(spec: RingSpec) -> Ring:
    """Build the ring described by ``spec``.

    Rings are immutable, so equal specs share one instance; maps built on a
    ring therefore stay valid for any later ``make_ring`` of the same spec.

    Raises ``RingError`` naming the offending field for malformed specs.
    """
    if not isinstance(spec, RingSpec) or spec.kind not in RingSpec.KINDS:
        raise RingError(f"unknown ring kind: {getattr(spec, 'kind', spec)!r}")
    if spec.kind == "zn":
        return _zn(spec)
    if spec.kind == "product":
        return _product(spec)
    if spec.kind == "matrix2":
        return _matrix2(spec)
    if spec.kind == "ut2":
        return _matrix2(spec, upper=True)
    return RationalMatrix2Ring()


def subring(ring: TabulatedRing, generators: Iterable[Element], spec: Optional[RingSpec] = None) -> TabulatedRing:
    """The unital subring generated by ``generators``, re-indexed in parent order."""
    _require_tabulated(ring, "subring")
    members = {ring.zero_index, ring.one_index}
    for g in generators:
        ring._check(g)
        members.add(g.value)
    A, M = ring.add_table, ring.mul_table
    grew = True
    while grew:
        grew = False
        current = sorted(members)
        for x in current:
            for y in current:
                for z in (A[x][y], M[x][y]):
                    if z not in members:
                        members.add(z)
                        grew = True
    keep = sorted(members)
    pos = {v: i for i, v in enumerate(keep)}
    add = [[pos[A[x][y]] for y in keep] for x in keep]
    mul = [[pos[M[x][y]] for y in keep] for x in keep]
    return TabulatedRing(spec or ring.spec, add, mul, pos[ring.zero_index], pos[ring.one_index],
                         [ring.labels[v] for v in keep])


def _require_tabulated(ring: Ring, what: str) -> None:
    if not ring.tabulated:
        raise UnsupportedOperation(f"{what} needs a tabulated ring; {ring} is structural")


# --------------------------------------------------------------------------
# checks


def validate_axioms(ring: Ring, sample_budget: int = 200, seed: int = 0, grid_cap: int = 4000) -> DefectReport:
    """Check the unital ring axioms.

    Tabulated rings are scanned exhaustively.  The structural ring is checked on a
    deterministic strided sample of integer-grid triples (entries in ``-2..2``)
    plus ``sample_budget`` seeded random rational triples; this is one-sided.
    """
    if ring.tabulated:
        return _validate_tabulated(ring)
    report = DefectReport(name="ring-axioms", exhaustive=False)
    grid = ring.grid(2)
    triples = list(_strided_triples(grid, grid_cap))
    rnd = random.Random(seed)
    for _ in range(sample_budget):
        triples.append((ring.random_element(rnd), ring.random_element(rnd), ring.random_element(rnd)))
    for x, y, z in triples:
        _check_triple(ring, report, x, y, z)
        if not report.holds:
            break
    return report


def _check_triple(ring, report, x, y, z):
    add, mul = ring.add, ring.mul
    report.pairs_checked += 1
    checks = (
        ("additive-associativity", add(add(x, y), z), add(x, add(y, z))),
        ("multiplicative-associativity", mul(mul(x, y), z), mul(x, mul(y, z))),
        ("left-distributivity", mul(x, add(y, z)), add(mul(x, y), mul(x, z))),
        ("right-distributivity", mul(add(x, y), z), add(mul(x, z), mul(y, z))),
        ("additive-commutativity", add(x, y), add(y, x)),
        ("additive-identity", add(x, ring.zero), x),
        ("additive-inverse", add(x, ring.neg(x)), ring.zero),
        ("left-unit", mul(ring.one, x), x),
        ("right-unit", mul(x, ring.one), x),
    )
    for name, lhs, rhs in checks:
        if lhs != rhs:
            report.add_witness(Witness(name, x, y, lhs, rhs, z=z))
            return


def _strided_triples(grid, cap):
    n = len(grid)
    total = n ** 3
    stride = max(1, total // cap)
    while math.gcd(stride, n) != 1:
        stride += 1
    for k in range(min(cap, total)):
        t = (k * stride) % total
        yield grid[t // (n * n)], grid[(t // n) % n], grid[t % n]


def _validate_tabulated(ring: TabulatedRing) -> DefectReport:
    A, M, N = ring.arrays()
    n = ring.order
    report = DefectReport(name="ring-axioms", pairs_checked=n ** 3)
    el = ring.elements()
    z, o = ring.zero_index, ring.one_index
    idx = np.arange(n)

    def first(mask):
        hit = np.argwhere(mask)
        return tuple(int(v) for v in hit[0]) if len(hit) else None

    # pointwise / pairwise axioms first: they give the clearest witnesses
    for name, lhs, rhs in (
        ("additive-identity", A[:, z], idx),
        ("left-unit", M[o, :], idx),
        ("right-unit", M[:, o], idx),
        ("additive-inverse", A[idx, N], np.full(n, z)),
    ):
        hit = first(lhs != rhs)
        if hit is not None:
            x = hit[0]
            report.add_witness(Witness(name, el[x], el[x], el[int(lhs[x])], el[int(rhs[x])]))
            return report
    hit = first(A != A.T)
    if hit is not None:
        x, y = hit
        report.add_witness(Witness("additive-commutativity", el[x], el[y], el[A[x, y]], el[A[y, x]]))
        return report
    Y, Z = np.meshgrid(idx, idx, indexing="ij")
    AYZ, MYZ = A[Y, Z], M[Y, Z]
    for x in range(n):
        for name, lhs, rhs in (
            ("additive-associativity", A[A[x, Y], Z], A[x, AYZ]),
            ("multiplicative-associativity", M[M[x, Y], Z], M[x, MYZ]),
            ("left-distributivity", M[x, AYZ], A[M[x, Y], M[x, Z]]),
            ("right-distributivity", M[A[x, Y], Z], A[M[x, Z], MYZ]),
        ):
            hit = first(lhs != rhs)
            if hit is not None:
                y, zz = hit
                report.add_witness(Witness(name, el[x], el[y], el[int(lhs[hit])], el[int(rhs[hit])], z=el[zz]))
                return report
    return report


def find_idempotents(ring: Ring) -> list[tuple[Element, bool]]:
    """All ``e`` with ``e*e == e`` in index order, each paired with ``trivial`` (e in {0, 1})."""
    _require_tabulated(ring, "find_idempotents")
    M = ring.mul_table
    return [(ring[e], e in (ring.zero_index, ring.one_index)) for e in range(ring.order) if M[e][e] == e]


def nontrivial_idempotents(ring: Ring) -> list[Element]:
    return [e for e, trivial in find_idempotents(ring) if not trivial]


def is_prime(ring: Ring) -> bool:
    """True iff ``a R b != 0`` for all nonzero ``a, b`` (triple scan)."""
    return prime_witness(ring) is None


def prime_witness(ring: Ring) -> Optional[tuple[Element, Element]]:
    """A pair of nonzero ``(a, b)`` with ``a r b = 0`` for every ``r``, or ``None``."""
    _require_tabulated(ring, "is_prime")
    M = ring.mul_table
    z = ring.zero_index
    nonzero = [a for a in range(ring.order) if a != z]
    for a in nonzero:
        ar = {M[a][r] for r in range(ring.order)}
        for b in nonzero:
            if all(M[x][b] == z for x in ar):
                return ring[a], ring[b]
    return None
