"""Self-maps of a ring and their structural predicates.

Maps hold a reference to their ring and refuse elements of any other ring.
Tabulated maps carry ``table``, a tuple of image indices, which the search and
hypothesis code reads directly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .ring_core import (Element, RationalMatrix2Ring, ResourceLimitError, Ring, RingError,
                        RingMismatchError, TabulatedRing, UnsupportedOperation)

BUILTINS = ("zero", "identity", "flip_conj", "scaled_flip", "sign_conj")
# builtins known to be bijective on the structural ring (involutions or identity)
_BIJECTIVE_BUILTINS = {"identity", "flip_conj", "sign_conj"}
MAX_AUTOMORPHISM_ORDER = 64
MAX_ENDOMORPHISM_ORDER = 16


class MapError(RingError):
    pass


class RingMap:
    ring: Ring

    def __call__(self, x: Element) -> Element:
        return self.eval(x)

    def eval(self, x: Element) -> Element:
        if not isinstance(x, Element) or x.ring is not self.ring:
            raise RingMismatchError(f"{x!r} is not in the domain ring {self.ring} of {self}")
        return self._eval(x)

    def _eval(self, x: Element) -> Element:
        raise NotImplementedError

    @property
    def literal(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.literal

    def __repr__(self):
        return f"<{type(self).__name__} {self.literal} on {self.ring}>"


class TableMap(RingMap):
    def __init__(self, ring: TabulatedRing, table: Sequence[int]):
        self.ring = ring
        self.table = tuple(int(v) for v in table)
        if len(self.table) != ring.order:
            raise MapError(f"image table has {len(self.table)} entries, ring order is {ring.order}")
        if any(not 0 <= v < ring.order for v in self.table):
            raise MapError("image table entry out of range")

    def _eval(self, x):
        return self.ring[self.table[x.value]]

    @property
    def literal(self):
        return "table:[" + ",".join(map(str, self.table)) + "]"

    def __eq__(self, other):
        return isinstance(other, TableMap) and other.ring is self.ring and other.table == self.table

    def __hash__(self):
        return hash((id(self.ring), self.table))


class BuiltinMap(RingMap):
    """Structural maps on 2x2 rational matrices (``J = E12 + E21``, ``D = diag(1, -1)``)."""

    def __init__(self, ring: Ring, name: str, k=None):
        if name not in BUILTINS:
            raise MapError(f"unknown builtin map {name!r}")
        if name in ("zero", "identity"):
            pass
        elif not isinstance(ring, RationalMatrix2Ring):
            raise MapError(f"builtin {name} is only defined on the rational 2x2 matrix ring")
        self.ring = ring
        self.name = name
        self.k = None
        if name == "scaled_flip":
            if k is None:
                raise MapError("scaled_flip needs a scale factor k")
            self.k = ring.element((k, 0, 0, 0)).value[0]

    def _eval(self, x):
        ring = self.ring
        if self.name == "zero":
            return ring.zero
        if self.name == "identity":
            return x
        a, b, c, d = x.value
        if self.name == "flip_conj":
            return Element(ring, (d, c, b, a))
        if self.name == "sign_conj":
            return Element(ring, (a, -b, -c, d))
        return ring.scale(self.k, Element(ring, (d, c, b, a)))

    @property
    def literal(self):
        return {"zero": "zero", "identity": "identity", "flip_conj": "flip", "sign_conj": "signconj",
                "scaled_flip": f"scaledflip:{self.k}"}[self.name]

    @property
    def known_bijective(self) -> bool:
        return self.name in _BIJECTIVE_BUILTINS or (self.name == "scaled_flip" and self.k != 0)


class CompositeMap(RingMap):
    def __init__(self, outer: RingMap, inner: RingMap):
        if outer.ring is not inner.ring:
            raise RingMismatchError("composite maps must share a ring")
        self.ring = outer.ring
        self.outer = outer
        self.inner = inner

    def _eval(self, x):
        return self.outer.eval(self.inner.eval(x))

    @property
    def literal(self):
        return f"compose({self.outer.literal},{self.inner.literal})"


def make_tabulated(ring: TabulatedRing, images: Sequence) -> TableMap:
    """Tabulated map from a list of image Elements (or raw indices)."""
    if not ring.tabulated:
        raise UnsupportedOperation("make_tabulated needs a tabulated ring")
    table = []
    for im in images:
        if isinstance(im, Element):
            if im.ring is not ring:
                raise RingMismatchError(f"image {im!r} belongs to a different ring")
            table.append(im.value)
        else:
            table.append(ring.element(im).value)
    return TableMap(ring, table)


def tabulate(m: RingMap) -> TableMap:
    if isinstance(m, TableMap):
        return m
    if not m.ring.tabulated:
        raise UnsupportedOperation("tabulate needs a tabulated ring")
    return TableMap(m.ring, [m.eval(x).value for x in m.ring])


def zero_map(ring: Ring) -> RingMap:
    if ring.tabulated:
        return TableMap(ring, [ring.zero_index] * ring.order)
    return BuiltinMap(ring, "zero")


def identity_map(ring: Ring) -> RingMap:
    if ring.tabulated:
        return TableMap(ring, range(ring.order))
    return BuiltinMap(ring, "identity")


# --------------------------------------------------------------------------
# predicates


@dataclass
class MapKindReport:
    """Structural verdicts for one map.  ``automorphism`` is ``None`` when unknown."""

    map: str
    additive: bool = True
    additive_witness: Optional[tuple[Element, Element]] = None
    zero_preserving: bool = True
    multiplicative: bool = True
    multiplicative_witness: Optional[tuple[Element, Element]] = None
    unit_preserving: bool = True
    endomorphism: bool = True
    bijective: Optional[bool] = None
    automorphism: Optional[bool] = None
    pairs_checked: int = 0
    exhaustive: bool = True

    def to_dict(self) -> dict:
        def pair(p):
            return None if p is None else [str(p[0]), str(p[1])]
        return {
            "report": "map-kind",
            "map": self.map,
            "additive": self.additive,
            "additive_witness": pair(self.additive_witness),
            "zero_preserving": self.zero_preserving,
            "multiplicative": self.multiplicative,
            "multiplicative_witness": pair(self.multiplicative_witness),
            "unit_preserving": self.unit_preserving,
            "endomorphism": self.endomorphism,
            "bijective": self.bijective,
            "automorphism": self.automorphism,
            "pairs_checked": self.pairs_checked,
            "exhaustive": self.exhaustive,
        }


def sample_pairs(ring: Ring, budget: int = 200, seed: int = 0, grid_bound: int = 2,
                 grid_pairs: int = 4000) -> list[tuple[Element, Element]]:
    """Pairs a quantified check runs over.

    Tabulated rings: all ``n**2`` pairs.  Structural ring: every pair from
    ``1``, the matrix units and ``0`` (starting with ``(1, 1)``), a deterministic strided sample of ``grid_pairs`` pairs from the
    integer grid, then ``budget`` seeded random rational pairs.
    """
    if ring.tabulated:
        els = ring.elements()
        return [(x, y) for x in els for y in els]
    units = [ring.one] + [ring.unit(i, j) for i in (1, 2) for j in (1, 2)] + [ring.zero]
    pairs = [(x, y) for x in units for y in units]
    grid = ring.grid(grid_bound)
    n = len(grid)
    total = n * n
    stride = max(1, total // max(grid_pairs, 1))
    while stride > 1 and (stride % 2 == 0 or stride % 5 == 0 or stride % n == 0):
        stride += 1
    pairs += [(grid[(k * stride % total) // n], grid[k * stride % n]) for k in range(min(grid_pairs, total))]
    rnd = random.Random(seed)
    pairs += [(ring.random_element(rnd), ring.random_element(rnd)) for _ in range(budget)]
    return pairs


def _additivity(m: RingMap, pairs, rep: MapKindReport) -> None:
    ring = m.ring
    for x, y in pairs:
        if m.eval(ring.add(x, y)) != ring.add(m.eval(x), m.eval(y)):
            rep.additive = False
            rep.additive_witness = (x, y)
            return


def is_additive(m: RingMap, budget: int = 200, seed: int = 0) -> MapKindReport:
    ring = m.ring
    rep = MapKindReport(map=m.literal, exhaustive=ring.tabulated)
    pairs = sample_pairs(ring, budget, seed)
    rep.pairs_checked = len(pairs)
    _additivity(m, pairs, rep)
    rep.zero_preserving = m.eval(ring.zero) == ring.zero
    return rep


def is_endomorphism(m: RingMap, budget: int = 200, seed: int = 0) -> MapKindReport:
    """Additivity, multiplicativity and ``f(1) = 1``, each reported separately."""
    ring = m.ring
    rep = is_additive(m, budget, seed)
    for x, y in sample_pairs(ring, budget, seed):
        if m.eval(ring.mul(x, y)) != ring.mul(m.eval(x), m.eval(y)):
            rep.multiplicative = False
            rep.multiplicative_witness = (x, y)
            break
    rep.unit_preserving = m.eval(ring.one) == ring.one
    rep.endomorphism = rep.additive and rep.multiplicative and rep.unit_preserving
    return rep


def _known_bijective(m: RingMap) -> Optional[bool]:
    if isinstance(m, BuiltinMap):
        return True if m.known_bijective else (False if m.name == "zero" else None)
    if isinstance(m, CompositeMap):
        a, b = _known_bijective(m.outer), _known_bijective(m.inner)
        return True if (a and b) else None
    return None


def is_automorphism(m: RingMap, budget: int = 200, seed: int = 0) -> MapKindReport:
    """Endomorphism plus bijectivity.

    Bijectivity is decided exhaustively on tabulated rings.  On the structural ring
    it is only established for builtins known to be bijective (and composites of
    them); otherwise ``automorphism`` is ``None`` unless the map already fails to
    be an endomorphism.
    """
    rep = is_endomorphism(m, budget, seed)
    if m.ring.tabulated:
        t = tabulate(m).table
        rep.bijective = len(set(t)) == len(t)
    else:
        rep.bijective = _known_bijective(m)
    if not rep.endomorphism or rep.bijective is False:
        rep.automorphism = False
    elif rep.bijective:
        rep.automorphism = True
    else:
        rep.automorphism = None
    return rep


# --------------------------------------------------------------------------
# enumeration of unital endomorphisms


def generating_sequence(ring: TabulatedRing) -> list[int]:
    """A small generating set of ``ring`` (as a unital ring), chosen greedily.

    Each step adds the element whose inclusion grows the generated subring most;
    ties go to the smallest index.
    """
    A, M = ring.add_table, ring.mul_table

    def closure(gens):
        members = {ring.zero_index, ring.one_index, *gens}
        frontier = list(members)
        while frontier:
            new = []
            cur = list(members)
            for x in frontier:
                for y in cur:
                    for z in (A[x][y], A[y][x], M[x][y], M[y][x]):
                        if z not in members:
                            members.add(z)
                            new.append(z)
            frontier = new
        return members

    gens: list[int] = []
    covered = closure(gens)
    while len(covered) < ring.order:
        best, best_size = None, -1
        for v in range(ring.order):
            if v in covered:
                continue
            size = len(closure(gens + [v]))
            if size > best_size:
                best, best_size = v, size
        gens.append(best)
        covered = closure(gens)
    return gens


def _enumerate_unital_endomorphisms(ring: TabulatedRing, bijective: bool) -> list[TableMap]:
    n = ring.order
    A, M = ring.add_table, ring.mul_table
    gens = generating_sequence(ring)
    found: list[tuple[int, ...]] = []
    phi = [-1] * n

    def assign(v, w, trail):
        # propagate phi(a+b) = phi(a)+phi(b), phi(ab) = phi(a)phi(b); False on conflict
        queue = [(v, w)]
        while queue:
            a, img = queue.pop()
            if phi[a] >= 0:
                if phi[a] != img:
                    return False
                continue
            phi[a] = img
            trail.append(a)
            for b in range(n):
                pb = phi[b]
                if pb < 0:
                    continue
                for target, value in ((A[a][b], A[img][pb]), (M[a][b], M[img][pb]), (M[b][a], M[pb][img])):
                    cur = phi[target]
                    if cur < 0:
                        queue.append((target, value))
                    elif cur != value:
                        return False
        if bijective:
            assigned = [p for p in phi if p >= 0]
            if len(set(assigned)) != len(assigned):
                return False
        return True

    def undo(trail):
        for a in trail:
            phi[a] = -1

    def rec(k):
        if k == len(gens):
            if all(p >= 0 for p in phi):
                found.append(tuple(phi))
            return
        v = gens[k]
        if phi[v] >= 0:
            rec(k + 1)
            return
        for w in range(n):
            trail: list[int] = []
            if assign(v, w, trail):
                rec(k + 1)
            undo(trail)

    root: list[int] = []
    ok = assign(ring.zero_index, ring.zero_index, root) and assign(ring.one_index, ring.one_index, root)
    if ok:
        rec(0)
    return [TableMap(ring, t) for t in sorted(found)]


def enumerate_automorphisms(ring: Ring) -> list[TableMap]:
    """All ring automorphisms, sorted by image table."""
    if not ring.tabulated:
        raise UnsupportedOperation("enumerate_automorphisms needs a tabulated ring")
    if ring.order > MAX_AUTOMORPHISM_ORDER:
        raise ResourceLimitError(f"automorphism enumeration is limited to order <= {MAX_AUTOMORPHISM_ORDER}")
    return _enumerate_unital_endomorphisms(ring, bijective=True)


def enumerate_endomorphisms(ring: Ring) -> list[TableMap]:
    """All unital ring endomorphisms, sorted by image table."""
    if not ring.tabulated:
        raise UnsupportedOperation("enumerate_endomorphisms needs a tabulated ring")
    if ring.order > MAX_ENDOMORPHISM_ORDER:
        raise ResourceLimitError(f"endomorphism enumeration is limited to order <= {MAX_ENDOMORPHISM_ORDER}")
    return _enumerate_unital_endomorphisms(ring, bijective=False)


def all_tables(ring: TabulatedRing, max_order: int = 4) -> list[TableMap]:
    """Every self-map of a tiny ring, in lexicographic order of image tables."""
    if ring.order > max_order:
        raise ResourceLimitError(f"all-tables family is limited to order <= {max_order}")
    return [TableMap(ring, t) for t in itertools.product(range(ring.order), repeat=ring.order)]
