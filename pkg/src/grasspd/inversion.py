"""Orthogonal inversion of subspace-valued functions and integer Möbius inversion.

``prhi`` inverts an intersection-monotone diagram over the product order,
``rhi`` inverts a diagram over the reverse inclusion order and ``goi`` works
on any finite poset. The integer formulas are the closed-form alternating
sums on segments; ``generic_mobius_inverse`` solves the zeta system on an
arbitrary finite poset and serves as their oracle.
"""

from __future__ import annotations

from typing import Mapping

from ._parallel import parallel_map
from .filtration import (
    INF,
    PRODUCT,
    REVERSE_INCLUSION,
    FinitePoset,
    SegmentPoset,
    seg,
    segments,
)
from .invariants import SegmentDiagram, intersection_monotone_violations
from .subspace import Subspace, ominus, sum_, sum_all


class NotIntersectionMonotone(ValueError):
    pass


def prhi(D: SegmentDiagram, literal=False, check=True, n_jobs=None):
    """×-linear orthogonal inverse of an intersection-monotone diagram.

    The default evaluates ``D(i,j) ⊖ (D(i-1,j) + D(i,j-1))``, which agrees
    with the four-term definition on intersection-monotone input;
    ``literal=True`` evaluates the four-term definition with its edge cases.
    """
    if D.order != PRODUCT:
        raise ValueError("prhi needs a product-order diagram")
    if check:
        bad = intersection_monotone_violations(D)
        if bad:
            kind, s = bad[0]
            raise NotIntersectionMonotone(f"{kind} condition fails at {s}")
    step = _prhi_literal if literal else _prhi_simplified
    segs = D.segments
    vals = parallel_map(lambda s: step(D, s), segs, n_jobs)
    return SegmentDiagram(D.poset, PRODUCT, D.ambient_dim, dict(zip(segs, vals)), tol=D.tol,
                          labels=D.labels, degree=D.degree, kind="gpd")


def _prhi_simplified(D, s):
    i, n = s.b, D.n
    if s.is_diagonal():
        return ominus(D[s], D.get(i - 1, i))
    j = n + 1 if s.d == INF else int(s.d)
    # missing neighbours are {0}: (0, ·) on the left, (i, i-1) below the diagonal
    return ominus(D[s], sum_(D.get(i - 1, j), D.get(i, j - 1)))


def _prhi_literal(D, s):
    i, n = s.b, D.n
    if s.is_diagonal():
        # (i, i): D(i,i) ⊖ D(i-1,i); for i = 1 this is D(1,1)
        return ominus(D[s], D.get(i - 1, i)) if i > 1 else D[s]
    if s.d == INF:
        if i == 1:
            return ominus(D[s], D.get(1, n))
        return ominus(ominus(D[s], D.get(i, n)), ominus(D.get(i - 1, n + 1), D.get(i - 1, n)))
    j = int(s.d)
    if i == 1:
        return ominus(D[s], D.get(1, j - 1))
    return ominus(ominus(D[s], D.get(i, j - 1)), ominus(D.get(i - 1, j), D.get(i - 1, j - 1)))


def rhi(L: SegmentDiagram, n_jobs=None):
    """⊇-linear orthogonal inverse over non-diagonal segments.

    Entries are ``(L(i,j) ⊖ L(i,j+1)) ⊖ (L(i-1,j) ⊖ L(i-1,j+1))`` with
    ``(i, n+1) = (i, ∞)``, ``L(1, ∞)`` at ``(1, ∞)``, ``L(i,∞) ⊖ L(i-1,∞)``
    on the rest of the ``∞`` column and ``L(1,j) ⊖ L(1,j+1)`` on the first row.
    """
    if L.order != REVERSE_INCLUSION:
        raise ValueError("rhi needs a reverse-inclusion diagram")
    n = L.n

    def step(s):
        i = s.b
        if s.d == INF:
            return L[s] if i == 1 else ominus(L[s], L.get(i - 1, n + 1))
        j = int(s.d)
        first = ominus(L[s], L.get(i, j + 1))
        if i == 1:
            return first
        return ominus(first, ominus(L.get(i - 1, j), L.get(i - 1, j + 1)))

    segs = L.segments
    vals = parallel_map(step, segs, n_jobs)
    return SegmentDiagram(L.poset, REVERSE_INCLUSION, L.ambient_dim, dict(zip(segs, vals)),
                          tol=L.tol, labels=L.labels, degree=L.degree, kind="gpd")


def goi(F: Mapping, poset: FinitePoset, check=True):
    """Orthogonal inversion ``r -> F(r) ⊖ sum_{r' < r} F(r')`` on a finite poset."""
    if check:
        for r in poset:
            for t in poset.strict_downset(r):
                if not F[t].issubspace(F[r]):
                    raise ValueError(f"not order-preserving: F({t!r}) is not inside F({r!r})")
    out = {}
    for r in poset:
        below = [F[t] for t in poset.strict_downset(r)]
        out[r] = ominus(F[r], sum_all(below, d=F[r].ambient_dim, tol=F[r].tol))
    return out


def goi_diagram(D: SegmentDiagram, check=True):
    """``goi`` applied to a diagram over its segment poset."""
    poset = SegmentPoset(D.n, D.order)
    out = goi({s: D[s] for s in poset}, poset, check)
    return SegmentDiagram(D.poset, D.order, D.ambient_dim, out, tol=D.tol, labels=D.labels,
                          degree=D.degree, kind="gpd")


# -- integer Möbius inversion ------------------------------------------------------


def mobius_inverse_int(m: Mapping, n, order=PRODUCT):
    """Closed-form Möbius inverse of an integer function on segments of ``{1..n}``.

    ``m`` maps segments to integers; missing segments count as 0, as does
    any ``(0, ·)``.
    """

    def val(i, j):
        if i < 1:
            return 0
        return int(m.get(seg(i, j, n), 0))

    out = {}
    for s in segments(n, order):
        i = s.b
        if order == PRODUCT:
            if s.is_diagonal():
                v = val(i, i) - val(i - 1, i)
            elif s.d == INF:
                v = val(i, n + 1) - val(i, n) + val(i - 1, n) - val(i - 1, n + 1)
            else:
                j = int(s.d)
                v = val(i, j) - val(i, j - 1) + val(i - 1, j - 1) - val(i - 1, j)
        else:
            if s.d == INF:
                v = val(i, n + 1) - val(i - 1, n + 1)
            else:
                j = int(s.d)
                v = val(i, j) - val(i, j + 1) + val(i - 1, j + 1) - val(i - 1, j)
        out[s] = v
    return out


def generic_mobius_inverse(m: Mapping, poset: FinitePoset):
    """Unique ``∂m`` with ``sum_{p' <= p} ∂m(p') = m(p)``, by forward substitution."""
    out = {}
    for p in poset.linear_extension():
        out[p] = int(m.get(p, 0)) - sum(out[r] for r in poset.strict_downset(p))
    return out


def zeta(f: Mapping, poset: FinitePoset, zero=0, add=None):
    """Downset sums ``p -> sum_{p' <= p} f(p')`` in any commutative monoid."""
    add = add or (lambda a, b: a + b)
    out = {}
    for p in poset:
        acc = zero
        for r in poset.downset(p):
            if r in f:
                acc = add(acc, f[r])
        out[p] = acc
    return out


def _subspace_zeta(f: Mapping, poset: FinitePoset, d, tol):
    return {p: sum_all([f[r] for r in poset.downset(p) if r in f], d=d, tol=tol) for p in poset}


def _as_function(x):
    if isinstance(x, SegmentDiagram):
        return {s: x[s] for s in x.segments}, SegmentPoset(x.n, x.order), x.ambient_dim, x.tol
    raise TypeError("expected a SegmentDiagram")


def is_monoidal_inverse(mprime, m, poset: FinitePoset | None = None, tol=None):
    """Whether ``sum_{p' <= p} mprime(p') == m(p)`` for every ``p``.

    Accepts two diagrams on the same segment poset, or two subspace-valued
    mappings together with ``poset``.
    """
    if poset is None:
        f, poset, d, t = _as_function(mprime)
        g, poset2, d2, _ = _as_function(m)
        if set(poset2) != set(poset) or d != d2:
            raise ValueError("diagrams live on different posets")
    else:
        f, g = dict(mprime), dict(m)
        some = next(iter(g.values()))
        d, t = some.ambient_dim, some.tol
    tol = t if tol is None else tol
    sums = _subspace_zeta(f, poset, d, tol)
    return all(sums[p].equals(g.get(p, Subspace.zero(d, tol)), tol) for p in poset)


def mobius_equivalent(m1, m2, poset: FinitePoset | None = None, tol=None):
    """Equal downset sums everywhere."""
    if poset is None:
        f, poset, d, t = _as_function(m1)
        g, poset2, d2, _ = _as_function(m2)
        if set(poset2) != set(poset) or d != d2:
            raise ValueError("diagrams live on different posets")
    else:
        f, g = dict(m1), dict(m2)
        some = next(iter(list(f.values()) + list(g.values())))
        d, t = some.ambient_dim, some.tol
    tol = t if tol is None else tol
    a = _subspace_zeta(f, poset, d, tol)
    b = _subspace_zeta(g, poset, d, tol)
    return all(a[p].equals(b[p], tol) for p in poset)


def dims(D: SegmentDiagram):
    """``dim ∘ D`` as an integer segment function (zeros included)."""
    return {s: D[s].dim for s in D.segments}


__all__ = [
    "NotIntersectionMonotone",
    "dims",
    "generic_mobius_inverse",
    "goi",
    "goi_diagram",
    "is_monoidal_inverse",
    "mobius_equivalent",
    "mobius_inverse_int",
    "prhi",
    "rhi",
    "zeta",
]
