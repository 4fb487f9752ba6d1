"""Backtracking solver for product identities over an unknown function table.

The unknown map ``u`` is assigned one element at a time.  Every identity has the
shape ``u(xy) = P(x)Q(y) + S(x)T(y)`` where each factor is either ``u`` or a
fixed table, plus optional commutation identities ``u(g(x)) = g(u(x))``.  An
instance is evaluated as soon as the ``u``-values it reads are known; it then
either confirms ``u(xy)``, forces it (when unassigned), or prunes the branch.

The budget is counted in evaluated identity instances.
"""

from __future__ import annotations

import multiprocessing as mp
from dataclasses import dataclass
from typing import Sequence

U = None  # marker for "the unknown map" inside a clause factor


@dataclass(frozen=True)
class ProductClause:
    """``u(xy) = L1(x) R1(y) + L2(x) R2(y)``; a factor is ``None`` for ``u``."""

    name: str
    terms: tuple  # ((L1, R1), (L2, R2)) with tables or None

    @property
    def needs_x(self) -> bool:
        return any(left is None for left, _ in self.terms)

    @property
    def needs_y(self) -> bool:
        return any(right is None for _, right in self.terms)


@dataclass(frozen=True)
class Problem:
    add: tuple
    mul: tuple
    order: int
    zero: int
    clauses: tuple  # ProductClause
    commute: tuple = ()  # tables g with u(g(x)) = g(u(x))
    var_order: tuple = ()


@dataclass
class Stats:
    nodes_expanded: int = 0
    pruned: int = 0
    instances: int = 0
    partial: bool = False

    def absorb(self, other: "Stats") -> None:
        self.nodes_expanded += other.nodes_expanded
        self.pruned += other.pruned
        self.instances += other.instances
        self.partial = self.partial or other.partial


class _Budget(Exception):
    pass


class _Solver:
    def __init__(self, p: Problem, budget: int):
        self.p = p
        self.n = p.order
        self.A, self.M = p.add, p.mul
        self.budget = budget
        self.stats = Stats()
        self.solutions: list[tuple[int, ...]] = []
        self.u = [-1] * self.n
        self.assigned: list[int] = []
        self.pair_clauses = [c for c in p.clauses if c.needs_x and c.needs_y]
        self.x_clauses = [c for c in p.clauses if c.needs_x and not c.needs_y]
        self.y_clauses = [c for c in p.clauses if c.needs_y and not c.needs_x]
        self.fixed_clauses = [c for c in p.clauses if not c.needs_x and not c.needs_y]
        self.ginv = []
        for g in p.commute:
            inv = [[] for _ in range(self.n)]
            for x, gx in enumerate(g):
                inv[gx].append(x)
            self.ginv.append(inv)

    # -- evaluation ---------------------------------------------------------

    def _rhs(self, clause: ProductClause, x: int, y: int) -> int:
        u, M, A = self.u, self.M, self.A
        (l1, r1), (l2, r2) = clause.terms
        a = M[u[x] if l1 is None else l1[x]][u[y] if r1 is None else r1[y]]
        b = M[u[x] if l2 is None else l2[x]][u[y] if r2 is None else r2[y]]
        return A[a][b]

    def _tick(self, k: int = 1) -> None:
        self.stats.instances += k
        if self.stats.instances > self.budget:
            raise _Budget

    def propagate(self, v: int, val: int, trail: list[int]) -> bool:
        u, M = self.u, self.M
        queue = [(v, val)]
        while queue:
            a, img = queue.pop()
            cur = u[a]
            if cur >= 0:
                if cur != img:
                    return False
                continue
            u[a] = img
            trail.append(a)
            self.assigned.append(a)
            for clause in self.pair_clauses:
                for w in self.assigned:
                    for x, y in ((a, w), (w, a)) if w != a else ((a, a),):
                        self._tick()
                        t = M[x][y]
                        r = self._rhs(clause, x, y)
                        ct = u[t]
                        if ct < 0:
                            queue.append((t, r))
                        elif ct != r:
                            return False
            for clause in self.x_clauses:
                row = M[a]
                for y in range(self.n):
                    self._tick()
                    t = row[y]
                    r = self._rhs(clause, a, y)
                    ct = u[t]
                    if ct < 0:
                        queue.append((t, r))
                    elif ct != r:
                        return False
            for clause in self.y_clauses:
                for x in range(self.n):
                    self._tick()
                    t = M[x][a]
                    r = self._rhs(clause, x, a)
                    ct = u[t]
                    if ct < 0:
                        queue.append((t, r))
                    elif ct != r:
                        return False
            for g, inv in zip(self.p.commute, self.ginv):
                self._tick()
                t, r = g[a], g[img]
                ct = u[t]
                if ct < 0:
                    queue.append((t, r))
                elif ct != r:
                    return False
                for x in inv[a]:
                    if u[x] >= 0:
                        self._tick()
                        if g[u[x]] != img:
                            return False
        return True

    def undo(self, trail: list[int]) -> None:
        u = self.u
        for a in trail:
            u[a] = -1
        del self.assigned[len(self.assigned) - len(trail):]

    def root(self) -> bool:
        """Evaluate identities whose right side does not read ``u`` (forcing ``u(xy)``)."""
        trail: list[int] = []
        for clause in self.fixed_clauses:
            for x in range(self.n):
                for y in range(self.n):
                    self._tick()
                    if not self.propagate(self.M[x][y], self._rhs(clause, x, y), trail):
                        return False
        return True

    def next_var(self, k: int) -> int:
        order = self.p.var_order
        while k < len(order) and self.u[order[k]] >= 0:
            k += 1
        return k

    def dfs(self, k: int) -> None:
        k = self.next_var(k)
        if k == len(self.p.var_order):
            self.solutions.append(tuple(self.u))
            return
        v = self.p.var_order[k]
        for val in range(self.n):
            self.stats.nodes_expanded += 1
            trail: list[int] = []
            if self.propagate(v, val, trail):
                self.dfs(k + 1)
            else:
                self.stats.pruned += 1
            self.undo(trail)

    def children(self, k: int) -> list[tuple[int, tuple[int, ...], tuple[int, ...]]]:
        """Surviving children of the branch point at ``k`` as snapshots."""
        k = self.next_var(k)
        v = self.p.var_order[k]
        out = []
        for val in range(self.n):
            self.stats.nodes_expanded += 1
            trail: list[int] = []
            if self.propagate(v, val, trail):
                out.append((k + 1, tuple(self.u), tuple(self.assigned)))
            else:
                self.stats.pruned += 1
            self.undo(trail)
        return out

    def load(self, snapshot) -> int:
        k, u, assigned = snapshot
        self.u = list(u)
        self.assigned = list(assigned)
        return k


def _run_task(args):
    problem, snapshot, budget = args
    s = _Solver(problem, budget)
    k = s.load(snapshot)
    try:
        s.dfs(k)
    except _Budget:
        s.stats.partial = True
    return s.stats, s.solutions


def solve(problem: Problem, budget: int, workers: int = 1) -> tuple[list[tuple[int, ...]], Stats]:
    """All complete tables satisfying ``problem``, sorted; plus search statistics.

    The tree is split at the first branch point with two or more surviving
    children.  Each child is a task; tasks are merged in branch order, so the
    result does not depend on ``workers``.  A task starts only while the
    cumulative instance count is below ``budget``; the report is flagged
    partial otherwise, or when a task exhausts its own cap.
    """
    s = _Solver(problem, budget)
    total = Stats()
    try:
        if not s.root():
            return [], s.stats
        k = 0
        tasks = []
        while True:
            k = s.next_var(k)
            if k == len(problem.var_order):
                s.solutions.append(tuple(s.u))
                break
            kids = s.children(k)
            if len(kids) != 1:
                tasks = kids
                break
            k = s.load(kids[0])
    except _Budget:
        s.stats.partial = True
        return sorted(s.solutions), s.stats
    total.absorb(s.stats)
    solutions = list(s.solutions)
    remaining = budget - total.instances
    jobs = [(problem, snap, remaining) for snap in tasks]
    results = None
    if workers > 1 and len(jobs) > 1:
        ctx = mp.get_context("fork")
        with ctx.Pool(min(workers, len(jobs))) as pool:
            results = pool.map(_run_task, jobs, chunksize=1)
    for i, job in enumerate(jobs):
        if total.instances >= budget:
            total.partial = True
            break
        st, sols = results[i] if results is not None else _run_task(job)
        total.absorb(st)
        solutions.extend(sols)
        if total.instances > budget:
            total.partial = True
    return sorted(solutions), total


def assignment_order(add: Sequence, mul: Sequence, order: int, first: Sequence[int]) -> tuple[int, ...]:
    """``first`` (deduplicated), then greedily the element closing the most instances.

    An instance ``(x, y)`` is closed by ``v`` when ``v`` is one of ``x, y`` and
    ``x, y, xy`` all lie in the prefix extended by ``v``.  Ties go to the smaller
    index.
    """
    prefix: list[int] = []
    for v in first:
        if v not in prefix:
            prefix.append(v)
    inside = [False] * order
    for v in prefix:
        inside[v] = True
    while len(prefix) < order:
        best, best_score = -1, -1
        for v in range(order):
            if inside[v]:
                continue
            inside[v] = True
            score = 0
            for w in prefix + [v]:
                if inside[mul[v][w]]:
                    score += 1
                if w != v and inside[mul[w][v]]:
                    score += 1
            inside[v] = False
            if score > best_score:
                best, best_score = v, score
        prefix.append(best)
        inside[best] = True
    return tuple(prefix)
