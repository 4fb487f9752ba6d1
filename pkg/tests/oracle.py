"""Brute-force oracle: filter every function table of a small ring by the product identities.

Independent of the search engine: the upper-triangular ring over F2 is rebuilt
here from bit triples, every one of the 8**8 tables is generated, and each
identity instance is tested with numpy row masks.  Run as a script to refresh
the cached golden file::

    python tests/oracle.py
"""

from __future__ import annotations

import itertools
import json
import pathlib
import sys
import time

import numpy as np

DATA = pathlib.Path(__file__).parent / "data" / "oracle_ut2_f2.json"


def ut2_f2_tables():
    """Elements (a, b, d) for [[a,b],[0,d]]; index order is lexicographic in (a, b, d)."""
    elems = list(itertools.product((0, 1), repeat=3))
    index = {e: i for i, e in enumerate(elems)}
    add = [[index[tuple((u + v) % 2 for u, v in zip(x, y))] for y in elems] for x in elems]
    mul = [[index[(x[0] * y[0] % 2, (x[0] * y[1] + x[1] * y[2]) % 2, x[2] * y[2] % 2)] for y in elems]
           for x in elems]
    labels = [f"[[{a},{b}],[0,{d}]]" for a, b, d in elems]
    return np.array(add), np.array(mul), labels


def all_tables(n: int, fixed_prefix: tuple = ()) -> np.ndarray:
    free = n - len(fixed_prefix)
    grids = np.indices((n,) * free).reshape(free, -1).T
    if fixed_prefix:
        head = np.broadcast_to(np.array(fixed_prefix), (grids.shape[0], len(fixed_prefix)))
        grids = np.hstack([head, grids])
    return grids.astype(np.int8)


def _filter(T, A, M, clauses):
    """Keep rows of ``T`` satisfying every clause at every (x, y).

    A clause is ``(left1, right1, left2, right2)``: each entry is ``None`` for
    the unknown table or a fixed image array, giving
    ``u(xy) = L1(x) R1(y) + L2(x) R2(y)``.
    """
    n = A.shape[0]

    def val(f, rows, v):
        return rows[:, v] if f is None else np.full(rows.shape[0], f[v], dtype=np.int64)

    for x in range(n):
        for y in range(n):
            for l1, r1, l2, r2 in clauses:
                if T.shape[0] == 0:
                    return T
                a = M[val(l1, T, x), val(r1, T, y)]
                b = M[val(l2, T, x), val(r2, T, y)]
                T = T[T[:, M[x, y]] == A[a, b]]
    return T


def brute_force(clauses, commute=None):
    """All 8-element tables satisfying ``clauses`` (and ``u(g(x)) = g(u(x))`` for ``commute``)."""
    A, M, labels = ut2_f2_tables()
    n = A.shape[0]
    survivors = []
    for head in itertools.product(range(n), repeat=2):
        T = _filter(all_tables(n, head).astype(np.int64), A, M, clauses)
        if commute is not None and T.shape[0]:
            g = np.asarray(commute)
            T = T[np.all(T[:, g] == g[T], axis=1)]
        survivors.extend(tuple(int(v) for v in row) for row in T)
    return sorted(survivors), labels


def run_oracle() -> dict:
    A, M, labels = ut2_f2_tables()
    ident = np.arange(A.shape[0])
    zero = np.zeros(A.shape[0], dtype=np.int64)
    t0 = time.perf_counter()
    # skew semi-derivation identities with g = alpha = identity
    mssd, _ = brute_force([(None, ident, ident, None), (None, ident, ident, None)], commute=ident)
    # generalized identities with d = 0, g = alpha = identity
    gen, _ = brute_force([(None, ident, ident, zero), (zero, ident, ident, None)], commute=ident)
    return {
        "ring": "ut2:zn:2",
        "labels": labels,
        "tables_scanned": int(A.shape[0] ** A.shape[0]),
        "mssd_identity_identity": {"count": len(mssd), "tables": [[labels[v] for v in t] for t in mssd]},
        "generalized_zero_identity_identity": {"count": len(gen), "tables": [[labels[v] for v in t] for t in gen]},
        "seconds": round(time.perf_counter() - t0, 1),
    }


def load_cached() -> dict:
    return json.loads(DATA.read_text(encoding="utf-8"))


if __name__ == "__main__":
    result = run_oracle()
    DATA.parent.mkdir(parents=True, exist_ok=True)
    DATA.write_text(json.dumps(result, indent=1) + "\n", encoding="utf-8")
    print(f"mssd: {result['mssd_identity_identity']['count']}, "
          f"generalized: {result['generalized_zero_identity_identity']['count']}, {result['seconds']} s",
          file=sys.stderr)
