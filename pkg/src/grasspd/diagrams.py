"""Grassmannian persistence diagrams and classical persistence diagrams."""

from __future__ import annotations

import numpy as np

from .filtration import (
    INF,
    PRODUCT,
    Filtration,
    GaloisConnection,
    Segment,
    SegmentPoset,
    check_galois,
    pushforward,
    segments,
)
from .invariants import (
    SegmentDiagram,
    birth_death_space,
    lk_diagram,
    persistent_betti,
    zb_diagram,
)
from .inversion import dims, mobius_equivalent, mobius_inverse_int, prhi, rhi
from .subspace import DEFAULT_TOL, Subspace, families_transversal, sum_, sum_all


class NumericalRankError(ArithmeticError):
    """A rank decision produced an impossible (negative) multiplicity."""

    def __init__(self, segment, value, detail=""):
        self.segment = segment
        self.value = value
        super().__init__(f"negative multiplicity {value} at segment {segment}{detail}")


def gpd_birth_death(F: Filtration, q, tol=DEFAULT_TOL, n_jobs=None, literal=False):
    """Degree-q diagram from birth-death spaces by ×-linear orthogonal inversion."""
    return prhi(zb_diagram(F, q, tol, n_jobs), literal=literal, n_jobs=n_jobs)


def gpd_laplacian(F: Filtration, q, tol=DEFAULT_TOL, n_jobs=None, method="intersection"):
    """Degree-q diagram from Laplacian kernels by ⊇-linear orthogonal inversion.

    Diagonal segments are {0}.
    """
    return rhi(lk_diagram(F, q, tol, n_jobs, method), n_jobs=n_jobs)


def classical_pd(F: Filtration, q, method="dims", tol=DEFAULT_TOL):
    """Persistence diagram as ``{segment: multiplicity}`` (nonzero entries only).

    ``method="dims"`` inverts ``dim ∘ ZB`` and keeps ephemeral multiplicities on
    the diagonal. ``method="betti"`` uses persistent Betti numbers and is zero
    on the diagonal by definition.
    """
    n = F.n
    if method == "dims":
        zb = zb_diagram(F, q, tol)
        raw = mobius_inverse_int(dims(zb), n, PRODUCT)
    elif method == "betti":
        beta = {}

        def b(i, j):
            if i == 0:
                return 0
            if (i, j) not in beta:
                beta[i, j] = persistent_betti(F, q, i, j, tol)
            return beta[i, j]

        raw = {}
        for s in segments(n, PRODUCT):
            i = s.b
            if s.is_diagonal():
                raw[s] = 0
            elif s.d == INF:
                raw[s] = b(i, n) - b(i - 1, n)
            else:
                j = int(s.d)
                raw[s] = b(i, j - 1) - b(i - 1, j - 1) + b(i - 1, j) - b(i, j)
    else:
        raise ValueError(f"unknown method {method!r}")
    for s, v in raw.items():
        if v < 0:
            raise NumericalRankError(s, v)
    return {s: v for s, v in raw.items() if v}


def diagram_dims(G: SegmentDiagram, off_diagonal=False):
    return {s: d for s, d in G.dims().items() if not (off_diagonal and s.is_diagonal())}


def lifetime_check(z, F: Filtration, q, s, tol=DEFAULT_TOL):
    """Whether the cycle ``z`` is born exactly at ``b`` and dies exactly at ``d``.

    True iff ``z`` lies in ``ZB((b, d))`` but not in the sum of the birth-death
    spaces of all strictly smaller segments.
    """
    z = np.asarray(getattr(z, "coefficients", z), dtype=float).ravel()
    if not np.any(np.abs(z) > 0):
        raise ValueError("lifetime of the zero chain is undefined")
    s = Segment(*s)
    if not _zb_contains(F, q, s, z, tol):
        return False
    smaller = [t for t in segments(F.n, PRODUCT) if t != s and t.b <= s.b and t.d <= s.d]
    below = sum_all([birth_death_space(F, q, t, tol) for t in smaller],
                    d=F.complex.n_simplices(q), tol=tol)
    return not below.contains(z, tol)


def _zb_contains(F, q, s, z, tol=DEFAULT_TOL):
    return birth_death_space(F, q, s, tol).contains(z, tol)


def check_transversity_morphism(M: SegmentDiagram, N: SegmentDiagram, conn: GaloisConnection,
                                zeta: SegmentDiagram | None = None, tol=None):
    """Check that ``(f, zeta)`` is a transversity-preserving morphism ``M -> N``.

    ``zeta`` must be supported on the diagonal of ``N``'s poset. The family
    ``zeta`` must be transversal to the family ``N`` and the pushforward of
    ``M`` along the segment map of the left adjoint must be Möbius
    equivalent to ``N + zeta``.
    """
    if not check_galois(conn):
        raise ValueError("not a Galois connection")
    if M.poset.values != conn.source.values or N.poset.values != conn.target.values:
        raise ValueError("diagrams do not live on the connection's posets")
    if M.ambient_dim != N.ambient_dim:
        raise ValueError("ambient dimensions differ")
    d = N.ambient_dim
    tol = N.tol if tol is None else tol
    if zeta is None:
        zeta = SegmentDiagram(N.poset, PRODUCT, d, {}, tol=tol)
    if any(not s.is_diagonal() for s in zeta.support()):
        raise ValueError("zeta must be supported on the diagonal")
    if not families_transversal([S for _, S in zeta.items()], [S for _, S in N.items()], tol):
        return False
    target = segments(N.n, PRODUCT)
    pushed = pushforward(conn.left_segment, {s: M[s] for s in M.segments}, target,
                         Subspace.zero(d, tol), sum_)
    shifted = {s: sum_(N[s], zeta[s]) for s in target}
    poset = SegmentPoset(N.n, PRODUCT)
    return mobius_equivalent(pushed, shifted, poset, tol)


def pushforward_diagram(M: SegmentDiagram, conn: GaloisConnection):
    """Pushforward of a product-order diagram along the left adjoint's segment map."""
    target = segments(conn.target.n, PRODUCT)
    d = M.ambient_dim
    pushed = pushforward(conn.left_segment, {s: M[s] for s in M.segments}, target,
                         Subspace.zero(d, M.tol), sum_)
    return SegmentDiagram(conn.target, PRODUCT, d, pushed, tol=M.tol)


def pullback_diagram(D: SegmentDiagram, conn: GaloisConnection):
    """Pullback ``D ∘ f̄^♦`` of a source-poset diagram to the target poset."""
    source = segments(conn.target.n, PRODUCT)
    vals = {s: D[conn.right_segment(s)] for s in source}
    return SegmentDiagram(conn.target, PRODUCT, D.ambient_dim, vals, tol=D.tol)
