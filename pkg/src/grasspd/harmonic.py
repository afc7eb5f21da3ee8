"""Harmonic homology, harmonic barcodes and their link to Grassmannian diagrams."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .complex import SimplicialComplex, boundaries, cycles
from .filtration import INF, REVERSE_INCLUSION, Filtration, Segment, segments
from .invariants import chain_spaces
from .subspace import DEFAULT_TOL, Subspace, matrix_rank, null_space, ominus, sum_


def harmonic_space(K: SimplicialComplex, q, tol=DEFAULT_TOL):
    """``H_q(K) = Z_q(K) ∩ B_q(K)⊥`` inside the ambient chain space."""
    return ominus(cycles(K, q, tol), boundaries(K, q, tol))


class HarmonicMap(NamedTuple):
    """``γ : H_q(K_i) -> H_q(K_j)`` as a matrix in orthonormal bases."""

    source: Subspace
    target: Subspace
    matrix: np.ndarray

    def image(self):
        return Subspace.from_columns(self.target.basis @ self.matrix, self.target.tol)

    def rank(self):
        return matrix_rank(self.matrix, self.target.tol)


def _is_subcomplex(Ki, Kj):
    return all(s in Kj for s in Ki.all_simplices())


def harmonic_transition(Ki: SimplicialComplex, Kj: SimplicialComplex, q, tol=DEFAULT_TOL):
    """Projection of ``H_q(K_i)`` onto ``B_q(K_j)⊥``, in harmonic bases."""
    if Ki.root is not Kj.root and Ki.root.vertices != Kj.root.vertices:
        raise ValueError("complexes live in different ambient complexes")
    if not _is_subcomplex(Ki, Kj):
        raise ValueError("the first complex is not contained in the second")
    Hi = harmonic_space(Ki, q, tol)
    Hj = harmonic_space(Kj, q, tol)
    Bj = boundaries(Kj, q, tol)
    image = Hi.basis - Bj.basis @ (Bj.basis.T @ Hi.basis)
    return HarmonicMap(Hi, Hj, Hj.basis.T @ image)


@dataclass(frozen=True)
class HarmonicCell:
    segment: Segment
    Mtilde: Subspace
    Ntilde: Subspace
    calM: Subspace
    calN: Subspace
    calP: Subspace


class _Harmonic:
    """Harmonic spaces and γ images along a filtration, with caching."""

    def __init__(self, F, q, tol, k0):
        self.F, self.q, self.tol = F, q, tol
        Z, B = chain_spaces(F, q, tol)
        self.Z, self.B = Z, B
        d = F.complex.n_simplices(q)
        self.d = d
        self.H = [ominus(Z[i], B[i]) for i in range(F.n + 1)]
        if k0 == "first":
            self.H[0] = self.H[1]
        elif k0 != "empty":
            raise ValueError(f"unknown K0 convention {k0!r}")
        self._img = {}

    def gamma(self, i, j):
        """Ambient-coordinate image vectors of ``H(K_i)`` under ``γ^{i,j}``.

        ``j = ∞`` is the zero map: every class dies eventually there.
        """
        Hi = self.H[i].basis
        if j == INF:
            return np.zeros_like(Hi)
        Bj = self.B[j].basis
        return Hi - Bj @ (Bj.T @ Hi)

    def image(self, i, j):
        if (i, j) not in self._img:
            self._img[i, j] = Subspace.from_columns(self.gamma(i, j), self.tol)
        return self._img[i, j]

    def preimage(self, i, j, target):
        """``{h in H(K_i) : γ^{i,j}(h) in target}``."""
        G = self.gamma(i, j)
        if G.shape[1] == 0:
            return Subspace.zero(self.d, self.tol)
        T = target.basis
        R = G - T @ (T.T @ G)
        N = null_space(R, self.tol)
        return Subspace.from_columns(self.H[i].basis @ N, self.tol)

    def M(self, i, j):
        return self.preimage(i, j, self.image(i - 1, j))

    def N(self, i, j):
        jj = self.F.n if j == INF else j - 1
        return self.M(i, jj)


def harmonic_barcode(F: Filtration, q, tol=DEFAULT_TOL, k0="empty"):
    """Harmonic persistent subquotients for every non-diagonal segment.

    ``k0`` fixes the complex before the first index: ``"empty"`` (default) or
    ``"first"`` to reuse ``K_1``. For ``j = ∞`` the map ``γ^{i,∞}`` is zero, so
    ``M^{i,∞}`` is all of ``H(K_i)`` and ``N^{i,∞} = M^{i,n}``.
    """
    hm = _Harmonic(F, q, tol, k0)
    cells = {}
    for s in segments(F.n, REVERSE_INCLUSION):
        i, j = s.b, s.d if s.d == INF else int(s.d)
        calM = hm.M(i, j)
        calN = hm.N(i, j)
        calP = ominus(calM, calN)
        Bi = hm.B[i]
        cells[s] = HarmonicCell(s, sum_(calM, Bi), sum_(calN, Bi), calM, calN, calP)
    return cells


def check_projection_isomorphism(gpd_entry: Subspace, cell: HarmonicCell, tol=None):
    """Whether projecting the entry onto ``N⊥`` is an isomorphism onto ``P``.

    The image must have full rank equal to both dimensions and lie in ``P``.
    The projection is not expected to preserve lengths.
    """
    tol = gpd_entry.tol if tol is None else tol
    P = cell.calP
    if gpd_entry.dim != P.dim:
        return False
    if gpd_entry.dim == 0:
        return True
    Nb = cell.calN.basis
    G = gpd_entry.basis
    Y = G - Nb @ (Nb.T @ G)
    if matrix_rank(Y, tol) != P.dim:
        return False
    return P.residual(Y) <= max(tol, 1e-9) * max(1.0, float(np.max(np.linalg.norm(Y, axis=0))))


def projection_isomorphism_report(F: Filtration, q, gpd=None, tol=DEFAULT_TOL, k0="empty"):
    """``{segment: bool}`` over all non-diagonal segments."""
    from .diagrams import gpd_birth_death

    G = gpd_birth_death(F, q, tol) if gpd is None else gpd
    cells = harmonic_barcode(F, q, tol, k0)
    return {s: check_projection_isomorphism(G[s], c, tol) for s, c in cells.items()}


def homology_to_harmonic(K: SimplicialComplex, q, z, tol=DEFAULT_TOL):
    """``z + B ↦ proj_{B⊥}(z)`` for a cycle (or columns of cycles) of ``K``."""
    B = boundaries(K, q, tol)
    z = np.asarray(z, dtype=float)
    return z - B.basis @ (B.basis.T @ z)


__all__ = [
    "HarmonicCell",
    "HarmonicMap",
    "check_projection_isomorphism",
    "harmonic_barcode",
    "harmonic_space",
    "harmonic_transition",
    "homology_to_harmonic",
    "projection_isomorphism_report",
]
