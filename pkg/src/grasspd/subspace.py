"""Floating-point subspace arithmetic over orthonormal bases.

Every :class:`Subspace` carries a ``d x r`` matrix with orthonormal columns
and the tolerance used for the rank decisions that produced it. The zero
subspace is a ``d x 0`` matrix, so all operations accept it without special
casing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9


def _as_matrix(vectors, d=None):
    """Stack ``vectors`` as columns of a float matrix."""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        M = np.asarray(vectors, dtype=float)
        if d is not None and M.shape[0] != d:
            raise ValueError(f"expected vectors of length {d}, got {M.shape[0]}")
        return M
    cols = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if not cols:
        if d is None:
            raise ValueError("cannot infer ambient dimension from an empty list")
        return np.zeros((d, 0))
    lengths = {len(c) for c in cols}
    if len(lengths) != 1:
        raise ValueError(f"dimension mismatch among input vectors: {sorted(lengths)}")
    if d is not None and cols[0].shape[0] != d:
        raise ValueError(f"expected vectors of length {d}, got {cols[0].shape[0]}")
    return np.column_stack(cols)


def null_space(M, tol=DEFAULT_TOL):
    """Orthonormal basis of ``ker M`` (columns).

    Singular values at most ``tol * max(1, s_max)`` count as zero.
    """
    M = np.asarray(M, dtype=float)
    m, k = M.shape
    if k == 0:
        return np.zeros((0, 0))
    if m == 0:
        return np.eye(k)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    cutoff = tol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.count_nonzero(s > cutoff))
    return vh[rank:].T.copy()


def column_space(M, tol=DEFAULT_TOL):
    """Orthonormal basis of the column space of ``M`` via SVD."""
    M = np.asarray(M, dtype=float)
    m, k = M.shape
    if k == 0 or m == 0:
        return np.zeros((m, 0))
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    cutoff = tol * max(1.0, s[0])
    rank = int(np.count_nonzero(s > cutoff))
    return u[:, :rank].copy()


def matrix_rank(M, tol=DEFAULT_TOL):
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.count_nonzero(s > tol * max(1.0, s[0])))


def _gram_schmidt(V, tol, Q=None):
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Columns of ``V`` are appended to the orthonormal columns of ``Q``. A
    column is dropped when its residual norm is at most ``tol * (1 + |v|)``.
    """
    d = V.shape[0]
    accepted = [] if Q is None else [Q[:, k] for k in range(Q.shape[1])]
    for k in range(V.shape[1]):
        v = V[:, k]
        norm = float(np.linalg.norm(v))
        w = v.copy()
        for _ in range(2):
            for q in accepted:
                w -= (q @ w) * q
        r = float(np.linalg.norm(w))
        if r <= tol * (1.0 + norm):
            continue
        accepted.append(w / r)
    if not accepted:
        return np.zeros((d, 0))
    return np.column_stack(accepted)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of ``R^d`` held as an orthonormal basis.

    Equality is representation independent: two subspaces are equal when
    they have the same rank and each basis lies within ``tol`` of its
    projection onto the other.
    """

    basis: np.ndarray
    tol: float = field(default=DEFAULT_TOL)

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=float)
        if B.ndim != 2:
            raise ValueError("basis must be a 2-d array")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, d, tol=DEFAULT_TOL):
        return cls(np.zeros((d, 0)), tol)

    @classmethod
    def full(cls, d, tol=DEFAULT_TOL):
        return cls(np.eye(d), tol)

    @classmethod
    def span(cls, vectors, d=None, tol=DEFAULT_TOL):
        """Span of arbitrary vectors (rows of a list or columns of a matrix)."""
        return orthonormalize(vectors, tol=tol, d=d)

    @classmethod
    def from_columns(cls, M, tol=DEFAULT_TOL):
        """Column space of ``M``, orthonormalized with an SVD."""
        return cls(column_space(M, tol), tol)

    # -- basic properties --------------------------------------------------
    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    rank = dim

    def is_zero(self):
        return self.dim == 0

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"

    def projector(self):
        return self.basis @ self.basis.T

    def project(self, v):
        return project(v, self)

    def residual(self, vectors):
        """Largest distance from a column of ``vectors`` to this subspace."""
        V = _as_matrix(vectors, self.ambient_dim) if not isinstance(vectors, Subspace) else vectors.basis
        if V.shape[1] == 0:
            return 0.0
        R = V - self.basis @ (self.basis.T @ V)
        return float(np.max(np.linalg.norm(R, axis=0)))

    def contains(self, v, tol=None):
        """Whether ``v`` lies in the subspace, relative to its norm."""
        tol = self.tol if tol is None else tol
        v = np.asarray(v, dtype=float).ravel()
        return self.residual(v[:, None]) <= tol * max(1.0, float(np.linalg.norm(v)))

    def issubspace(self, other, tol=None):
        tol = self.tol if tol is None else tol
        _check_ambient(self, other)
        return other.residual(self.basis) <= tol

    def equals(self, other, tol=None):
        tol = self.tol if tol is None else tol
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim or self.dim != other.dim:
            return False
        return other.residual(self.basis) <= tol and self.residual(other.basis) <= tol

    def __eq__(self, other):
        return self.equals(other)

    __hash__ = None

    # -- arithmetic sugar ---------------------------------------------------
    def __add__(self, other):
        return sum_(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def ominus(self, other):
        return ominus(self, other)

    def perp(self):
        return orthocomplement(self)

    # -- serialization -----------------------------------------------------
    def canonical_basis(self):
        """Basis with each column's first significant entry made positive."""
        B = np.array(self.basis)
        for k in range(B.shape[1]):
            col = B[:, k]
            big = np.flatnonzero(np.abs(col) > 1e-12)
            if big.size and col[big[0]] < 0:
                B[:, k] = -col
        B[B == 0.0] = 0.0  # drop negative zeros
        return B

    def to_json(self):
        return {
            "ambient": self.ambient_dim,
            "basis": [list(map(float, c)) for c in self.canonical_basis().T],
        }

    @classmethod
    def from_json(cls, obj, tol=DEFAULT_TOL):
        d = int(obj["ambient"])
        cols = obj.get("basis", [])
        if not cols:
            return cls.zero(d, tol)
        M = _as_matrix(cols, d)
        Q = _gram_schmidt(M, tol)
        if Q.shape[1] != M.shape[1] or not np.allclose(Q, M, atol=max(tol, 1e-12) * 10):
            # not orthonormal as given; keep the span
            return cls(Q, tol)
        return cls(M, tol)


def _check_ambient(*spaces):
    dims = {S.ambient_dim for S in spaces}
    if len(dims) > 1:
        raise ValueError(f"ambient dimension mismatch: {sorted(dims)}")


def _tol_of(*spaces):
    return max(S.tol for S in spaces)


def orthonormalize(vectors, tol=DEFAULT_TOL, d=None):
    """Span of ``vectors`` with an orthonormal basis built by Gram-Schmidt.

    ``vectors`` may be a sequence of length-``d`` vectors or a matrix whose
    columns are the vectors.
    """
    M = _as_matrix(vectors, d)
    return Subspace(_gram_schmidt(M, tol), tol)


def sum_(A, B):
    """``A + B``; the basis of ``A`` is kept and extended."""
    _check_ambient(A, B)
    tol = _tol_of(A, B)
    if B.dim == 0:
        return Subspace(A.basis, tol)
    if A.dim == 0:
        return Subspace(B.basis, tol)
    return Subspace(_gram_schmidt(B.basis, tol, Q=A.basis), tol)


def sum_all(spaces: Iterable[Subspace], d=None, tol=DEFAULT_TOL):
    """Sum of a family; ``d`` is required when the family may be empty."""
    spaces = list(spaces)
    if not spaces:
        if d is None:
            raise ValueError("ambient dimension needed for an empty sum")
        return Subspace.zero(d, tol)
    _check_ambient(*spaces)
    blocks = [S.basis for S in spaces if S.dim]
    tol = _tol_of(*spaces)
    if not blocks:
        return Subspace.zero(spaces[0].ambient_dim, tol)
    return Subspace.from_columns(np.hstack(blocks), tol)


def intersect(A, B):
    """``A ∩ B`` read off the null space of the block matrix ``[A | B]``."""
    _check_ambient(A, B)
    tol = _tol_of(A, B)
    d = A.ambient_dim
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(d, tol)
    N = null_space(np.hstack([A.basis, B.basis]), tol)
    if N.shape[1] == 0:
        return Subspace.zero(d, tol)
    return Subspace.from_columns(A.basis @ N[: A.dim], tol)


def ominus(A, B):
    """Orthogonal difference ``A ⊖ B = A ∩ B⊥``.

    Computed as ``A`` applied to the null space of ``Bᵀ A``; ``B`` need not
    be contained in ``A``.
    """
    _check_ambient(A, B)
    tol = _tol_of(A, B)
    if A.dim == 0 or B.dim == 0:
        return Subspace(A.basis, tol)
    N = null_space(B.basis.T @ A.basis, tol)
    if N.shape[1] == 0:
        return Subspace.zero(A.ambient_dim, tol)
    # A has orthonormal columns and so does N, hence A @ N is orthonormal
    return Subspace(A.basis @ N, tol)


def orthocomplement(A):
    d, r = A.basis.shape
    if r == 0:
        return Subspace.full(d, A.tol)
    if r == d:
        return Subspace.zero(d, A.tol)
    Q, _ = np.linalg.qr(A.basis, mode="complete")
    return Subspace(Q[:, r:].copy(), A.tol)


def project(v, A):
    """Orthogonal projection of a vector (or the columns of a matrix) onto ``A``."""
    v = np.asarray(v, dtype=float)
    if v.shape[0] != A.ambient_dim:
        raise ValueError(f"expected length {A.ambient_dim}, got {v.shape[0]}")
    return A.basis @ (A.basis.T @ v)


def project_subspace(W, A):
    """Image of ``W`` under the orthogonal projection onto ``A``."""
    _check_ambient(W, A)
    return Subspace.from_columns(project(W.basis, A), _tol_of(W, A))


def is_transverse(family: Sequence[Subspace], tol=None):
    """True iff ``dim(sum W_i) == sum dim W_i``."""
    family = list(family)
    if not family:
        return True
    _check_ambient(*family)
    tol = _tol_of(*family) if tol is None else tol
    blocks = [S.basis for S in family if S.dim]
    total = sum(b.shape[1] for b in blocks)
    if total == 0:
        return True
    if total > family[0].ambient_dim:
        return False
    return matrix_rank(np.hstack(blocks), tol) == total


def families_transversal(F: Sequence[Subspace], G: Sequence[Subspace], tol=None):
    """Two families are transversal to each other when their union is transverse."""
    return is_transverse(list(F) + list(G), tol)


def are_orthogonal(A, B, tol=None):
    _check_ambient(A, B)
    tol = _tol_of(A, B) if tol is None else tol
    if A.dim == 0 or B.dim == 0:
        return True
    return float(np.max(np.abs(A.basis.T @ B.basis))) <= tol
