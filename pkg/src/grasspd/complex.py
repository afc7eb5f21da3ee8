"""Finite simplicial complexes, boundary operators, cycles and boundaries.

Vertices are identified by their position in a global order. A simplex is a
strictly increasing tuple of vertex indices, which fixes its orientation.
Subcomplexes remember the complex they live in, and their cycle and boundary
spaces are zero-padded into the chain spaces of that ambient complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .subspace import DEFAULT_TOL, Subspace, column_space, null_space


def faces(simplex):
    """Codimension-one faces in the order of the alternating sum."""
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


def closure(simplices):
    """All faces of the given simplices (as sorted tuples), including themselves."""
    out = set()
    for s in simplices:
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return out


class SimplicialComplex:
    """A simplicial complex over an ordered vertex set.

    Parameters
    ----------
    vertices : sequence of hashable
        Vertex names in their global order.
    simplices : iterable of tuples of vertex indices
        Must be closed under taking faces. Isolated vertices must be listed as
        1-tuples.
    ambient : SimplicialComplex, optional
        Complex this one is a subcomplex of. Chains are then expressed in the
        ambient chain spaces.
    """

    def __init__(self, vertices: Sequence[Hashable], simplices: Iterable[Sequence[int]], ambient=None):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        by_dim = {}
        for s in simplices:
            t = tuple(int(v) for v in s)
            if not t:
                continue
            if any(t[k] >= t[k + 1] for k in range(len(t) - 1)):
                t = tuple(sorted(set(t)))
                if len(t) != len(s):
                    raise ValueError(f"simplex {s} repeats a vertex")
            if t[0] < 0 or t[-1] >= len(self.vertices):
                raise ValueError(f"simplex {s} uses an unknown vertex index")
            by_dim.setdefault(len(t) - 1, set()).add(t)
        self._simplices = {q: sorted(v) for q, v in by_dim.items()}
        self._index = {q: {s: k for k, s in enumerate(v)} for q, v in self._simplices.items()}
        for q, simplices_q in self._simplices.items():
            if q == 0:
                continue
            lower = self._index.get(q - 1, {})
            for s in simplices_q:
                for f in faces(s):
                    if f not in lower:
                        raise ValueError(f"complex is not closed: face {f} of {s} missing")
        self.ambient = ambient
        if ambient is not None:
            if ambient.vertices != self.vertices:
                raise ValueError("subcomplex must share the ambient vertex order")
            self._embed = {}
            for q, simplices_q in self._simplices.items():
                idx = ambient._index.get(q, {})
                try:
                    self._embed[q] = np.array([idx[s] for s in simplices_q], dtype=int)
                except KeyError as exc:
                    raise ValueError(f"simplex {exc.args[0]} is not in the ambient complex") from None

    # -- construction helpers ----------------------------------------------
    @classmethod
    def from_simplices(cls, simplices, vertices=None):
        """Build the closure of ``simplices`` given by vertex names."""
        simplices = [tuple(s) for s in simplices]
        if vertices is None:
            seen = {}
            for s in simplices:
                for v in s:
                    seen.setdefault(v, len(seen))
            vertices = list(seen)
        pos = {v: k for k, v in enumerate(vertices)}
        try:
            idx = [tuple(sorted(pos[v] for v in s)) for s in simplices]
        except KeyError as exc:
            raise ValueError(f"unknown vertex {exc.args[0]!r}") from None
        return cls(vertices, closure(idx))

    def subcomplex(self, simplices):
        """Subcomplex spanned by the given index tuples (must be closed)."""
        return SimplicialComplex(self.vertices, simplices, ambient=self)

    # -- queries -------------------------------------------------------------
    @property
    def dim(self):
        return max(self._simplices, default=-1)

    def simplices(self, q):
        return list(self._simplices.get(q, []))

    def all_simplices(self):
        return [s for q in sorted(self._simplices) for s in self._simplices[q]]

    def n_simplices(self, q):
        return len(self._simplices.get(q, ()))

    def index(self, q, simplex):
        return self._index[q][tuple(simplex)]

    def __contains__(self, simplex):
        t = tuple(simplex)
        return t in self._index.get(len(t) - 1, {})

    def __len__(self):
        return sum(len(v) for v in self._simplices.values())

    def __repr__(self):
        counts = [self.n_simplices(q) for q in range(self.dim + 1)]
        return f"SimplicialComplex(vertices={len(self.vertices)}, simplices_by_dim={counts})"

    def name(self, simplex):
        """Human-readable label such as ``"ab"`` or ``"a,b"`` for longer names."""
        names = [str(self.vertices[v]) for v in simplex]
        sep = "" if all(len(n) == 1 for n in names) else ","
        return sep.join(names)

    def labels(self, q):
        base = self.ambient if self.ambient is not None else self
        return [base.name(s) for s in base.simplices(q)]

    @property
    def root(self):
        return self.ambient if self.ambient is not None else self

    def chain_dim(self, q):
        """Dimension of the ambient chain space ``C_q``."""
        return self.root.n_simplices(q)

    def embedding(self, q):
        """Positions of this complex's q-simplices inside the ambient list."""
        if self.ambient is None:
            return np.arange(self.n_simplices(q))
        return self._embed.get(q, np.zeros(0, dtype=int))

    def chain(self, q, coefficients: Mapping):
        """Ambient q-chain from a mapping ``simplex names -> coefficient``.

        Keys may be strings of single-character vertex names (``"ab"``) or
        sequences of names. The orientation sign of unsorted keys is applied.
        """
        root = self.root
        pos = {v: k for k, v in enumerate(root.vertices)}
        out = np.zeros(root.n_simplices(q))
        for key, c in coefficients.items():
            names = list(key)
            idx = [pos[v] for v in names]
            if len(idx) != q + 1:
                raise ValueError(f"{key!r} is not a {q}-simplex")
            order = np.argsort(idx)
            sign = _permutation_sign(order)
            out[root.index(q, tuple(sorted(idx)))] += sign * c
        return out


def _permutation_sign(perm):
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class Chain:
    """A q-chain of an ambient complex as a coefficient vector."""

    degree: int
    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coefficients", np.asarray(self.coefficients, dtype=float))

    @classmethod
    def from_dict(cls, K, q, coefficients):
        return cls(q, K.chain(q, coefficients))

    def check(self, K):
        if self.coefficients.shape != (K.chain_dim(self.degree),):
            raise ValueError("chain length does not match the complex")
        return self


def boundary_matrix(K: SimplicialComplex, q: int):
    """Matrix of ``∂_q : C_q(K) -> C_{q-1}(K)`` in the lex-sorted simplex bases."""
    if q < 0:
        raise ValueError("degree must be nonnegative")
    cols = K.simplices(q)
    if q == 0:
        return np.zeros((0, len(cols)))
    rows = K._index.get(q - 1, {})
    D = np.zeros((len(rows), len(cols)))
    for j, s in enumerate(cols):
        for i, f in enumerate(faces(s)):
            D[rows[f], j] = (-1) ** i
    return D


def adjoint_boundary(K: SimplicialComplex, q: int):
    return boundary_matrix(K, q).T


def _pad(K, q, local):
    """Zero-pad local coordinates of ``K``'s q-chains into the ambient space."""
    if K.ambient is None:
        return local
    out = np.zeros((K.chain_dim(q), local.shape[1]))
    out[K.embedding(q)] = local
    return out


def cycles(K: SimplicialComplex, q: int, tol=DEFAULT_TOL) -> Subspace:
    """``Z_q(K) = ker ∂_q`` inside the ambient chain space."""
    n = K.n_simplices(q)
    if n == 0:
        return Subspace.zero(K.chain_dim(q), tol)
    N = null_space(boundary_matrix(K, q), tol) if q > 0 else np.eye(n)
    return Subspace(_pad(K, q, N), tol)


def boundaries(K: SimplicialComplex, q: int, tol=DEFAULT_TOL) -> Subspace:
    """``B_q(K) = im ∂_{q+1}`` inside the ambient chain space."""
    if K.n_simplices(q + 1) == 0 or K.n_simplices(q) == 0:
        return Subspace.zero(K.chain_dim(q), tol)
    return Subspace(_pad(K, q, column_space(boundary_matrix(K, q + 1), tol)), tol)


def betti(K: SimplicialComplex, q: int, tol=DEFAULT_TOL) -> int:
    return cycles(K, q, tol).dim - boundaries(K, q, tol).dim
