"""Independent reference computations used to freeze expected values.

Nothing here imports the package's linear algebra: persistence pairs come
from column reduction over the rationals, components from breadth-first
search and Möbius inverses from an exact zeta-matrix solve.
"""

from collections import defaultdict, deque
from fractions import Fraction

import sympy

INF = "inf"


def _sign_boundary(simplex):
    return [((-1) ** k, simplex[:k] + simplex[k + 1:]) for k in range(len(simplex))]


def persistence_pairs(entry):
    """Barcode of a filtration given as ``{sorted vertex tuple: entry index}``.

    Returns ``{degree: {(b, d): multiplicity}}`` with ``d = "inf"`` for
    essential classes. Pairs born and killed at the same index are kept.
    """
    order = sorted(entry, key=lambda s: (entry[s], len(s), s))
    pos = {s: k for k, s in enumerate(order)}
    columns = []
    for s in order:
        col = {}
        if len(s) > 1:
            for sign, f in _sign_boundary(s):
                col[pos[f]] = Fraction(sign)
        columns.append(col)
    low_of = {}
    paired = set()
    out = defaultdict(lambda: defaultdict(int))
    for k, col in enumerate(columns):
        while col:
            low = max(col)
            if low not in low_of:
                break
            other = columns[low_of[low]]
            factor = col[low] / other[low]
            for r, v in other.items():
                nv = col.get(r, 0) - factor * v
                if nv == 0:
                    col.pop(r, None)
                else:
                    col[r] = nv
        if col:
            low = max(col)
            low_of[low] = k
            paired.update((low, k))
            sigma = order[low]
            out[len(sigma) - 1][(entry[sigma], entry[order[k]])] += 1
    for k, s in enumerate(order):
        if k not in paired and not columns[k]:
            out[len(s) - 1][(entry[s], INF)] += 1
    return {q: dict(v) for q, v in out.items()}


def components(vertices, edges):
    """Connected components by breadth-first search, as sorted tuples."""
    adj = defaultdict(set)
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, comps = set(), []
    for v in sorted(vertices):
        if v in seen:
            continue
        comp, todo = [], deque([v])
        seen.add(v)
        while todo:
            u = todo.popleft()
            comp.append(u)
            for w in adj[u]:
                if w in vertices and w not in seen:
                    seen.add(w)
                    todo.append(w)
        comps.append(tuple(sorted(comp)))
    return sorted(comps)


def treegram_events(entry, n):
    """``[(index, alive vertices, blocks)]`` at every index where the partition changes."""
    events, last = [], None
    for i in range(1, n + 1):
        alive = {s[0] for s, k in entry.items() if len(s) == 1 and k <= i}
        edges = [s for s, k in entry.items() if len(s) == 2 and k <= i]
        blocks = components(alive, edges)
        if alive and blocks != last:
            events.append((i, sorted(alive), [list(b) for b in blocks]))
            last = blocks
    return events


def segments(n):
    return [(i, j) for i in range(1, n + 1) for j in list(range(i, n + 1)) + [INF]]


def _leq_product(s, t):
    return s[0] <= t[0] and (t[1] == INF or (s[1] != INF and s[1] <= t[1]))


def mobius_inverse(m, n):
    """Exact Möbius inverse on segments of ``{1..n}`` under the product order."""
    segs = segments(n)
    Z = sympy.Matrix(len(segs), len(segs), lambda r, c: int(_leq_product(segs[c], segs[r])))
    x = Z.LUsolve(sympy.Matrix([m.get(s, 0) for s in segs]))
    return {s: int(v) for s, v in zip(segs, x) if v != 0}


def zeta_transform(f, n):
    return {t: sum(v for s, v in f.items() if _leq_product(s, t)) for t in segments(n)}


def exact_betti(entry, q, i, j):
    """Rank of ``H_q(K_i) -> H_q(K_j)`` by exact sympy ranks."""
    def chains(k, dim):
        return sorted(s for s, e in entry.items() if len(s) == dim + 1 and e <= k)

    def bd(k, dim):
        rows, cols = chains(k, dim - 1), chains(k, dim)
        idx = {s: r for r, s in enumerate(rows)}
        M = sympy.zeros(len(rows), len(cols))
        for c, s in enumerate(cols):
            for sign, f in _sign_boundary(s):
                M[idx[f], c] = sign
        return M

    rows = chains(j, q)
    Zi = chains(i, q)
    if not Zi:
        return 0
    embed = sympy.zeros(len(rows), len(Zi))
    for c, s in enumerate(Zi):
        embed[rows.index(s), c] = 1
    null = bd(i, q).nullspace() if q > 0 else list(sympy.eye(len(Zi)).columnspace())
    Z = embed * sympy.Matrix.hstack(*null) if null else sympy.zeros(len(rows), 0)
    B = bd(j, q + 1) if chains(j, q + 1) else sympy.zeros(len(rows), 0)
    both = sympy.Matrix.hstack(Z, B)
    return both.rank() - B.rank()
