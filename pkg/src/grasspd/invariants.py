"""Subspace invariants of a filtration.

Birth-death spaces, persistent Betti numbers, persistent Laplacians with
their kernels, and the :class:`SegmentDiagram` container that holds a
subspace per segment.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from ._parallel import parallel_map
from .complex import boundaries, boundary_matrix, cycles
from .filtration import (
    INF,
    ORDERS,
    PRODUCT,
    REVERSE_INCLUSION,
    Filtration,
    LinearMetricPoset,
    Segment,
    seg,
    segments,
)
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    column_space,
    intersect,
    is_transverse,
    null_space,
    ominus,
)


class SegmentDiagram:
    """A subspace of ``R^ambient_dim`` for every segment of a linear poset.

    Only nonzero entries are stored; looking up any other segment of the
    domain returns the zero subspace.
    """

    def __init__(self, poset, order, ambient_dim, entries: Mapping | None = None,
                 tol=DEFAULT_TOL, labels=None, degree=None, kind=None):
        if order not in ORDERS:
            raise ValueError(f"unknown order {order!r}")
        self.poset = poset if isinstance(poset, LinearMetricPoset) else LinearMetricPoset(tuple(poset))
        self.order = order
        self.ambient_dim = int(ambient_dim)
        self.tol = tol
        self.labels = list(labels) if labels is not None else None
        self.degree = degree
        self.kind = kind
        self._domain = set(segments(self.poset.n, order))
        self._entries = {}
        for s, S in (entries or {}).items():
            s = Segment(*s)
            if s not in self._domain:
                raise ValueError(f"segment {s} is outside the {order} domain")
            if S.ambient_dim != self.ambient_dim:
                raise ValueError(f"entry {s} has ambient dimension {S.ambient_dim}")
            if S.dim:
                self._entries[s] = S

    @property
    def n(self):
        return self.poset.n

    @property
    def segments(self):
        return segments(self.n, self.order)

    def __getitem__(self, s):
        s = Segment(*s)
        if s in self._entries:
            return self._entries[s]
        if s not in self._domain and not (self.order == REVERSE_INCLUSION and s.is_diagonal()):
            raise KeyError(s)
        return Subspace.zero(self.ambient_dim, self.tol)

    def get(self, i, j):
        """Entry at ``(i, j)`` using the conventions ``(0, ·) = {0}`` and
        ``(i, n + 1) = (i, ∞)``."""
        if i < 1:
            return Subspace.zero(self.ambient_dim, self.tol)
        return self[seg(i, j, self.n)]

    def items(self):
        return sorted(self._entries.items())

    def __iter__(self):
        return iter(self.segments)

    def __len__(self):
        return len(self._entries)

    def dims(self):
        return {s: S.dim for s, S in sorted(self._entries.items())}

    def support(self):
        return sorted(self._entries)

    def is_transverse(self):
        return is_transverse([S for _, S in self.items()])

    def equals(self, other, tol=None, off_diagonal=False):
        return not self.differences(other, tol, off_diagonal)

    def differences(self, other, tol=None, off_diagonal=False):
        """Segments at which two diagrams disagree."""
        tol = self.tol if tol is None else tol
        keys = set(self._entries) | set(other._entries)
        bad = []
        for s in sorted(keys):
            if off_diagonal and s.is_diagonal():
                continue
            if not self[s].equals(other[s], tol):
                bad.append(s)
        return bad

    def __repr__(self):
        return (f"SegmentDiagram(order={self.order!r}, n={self.n}, ambient_dim={self.ambient_dim}, "
                f"nonzero={len(self._entries)})")

    def to_json(self):
        out = {
            "order": self.order,
            "ambient": self.ambient_dim,
            "values": [float(v) for v in self.poset.values],
        }
        if self.kind is not None:
            out["kind"] = self.kind
        if self.degree is not None:
            out["degree"] = int(self.degree)
        if self.labels is not None:
            out["labels"] = [str(x) for x in self.labels]
        entries = []
        for s, S in self.items():
            rec = s.to_json()
            rec["dim"] = S.dim
            rec["basis"] = S.to_json()["basis"]
            entries.append(rec)
        out["entries"] = entries
        return out

    @classmethod
    def from_json(cls, obj, tol=DEFAULT_TOL):
        try:
            order = obj["order"]
            d = int(obj["ambient"])
            raw = obj["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"diagram JSON is missing {exc}") from None
        entries = {}
        n = 0
        for rec in raw:
            s = Segment.parse(rec["b"], rec["d"])
            basis = rec.get("basis", [])
            S = Subspace.from_json({"ambient": d, "basis": basis}, tol)
            if "dim" in rec and int(rec["dim"]) != len(basis):
                raise ValueError(f"entry {s}: 'dim' disagrees with the basis length")
            if s in entries:
                raise ValueError(f"segment {s} listed twice")
            entries[s] = S
            n = max(n, s.b, 0 if s.d == INF else int(s.d))
        values = obj.get("values") or list(range(1, max(n, 1) + 1))
        return cls(values, order, d, entries, tol=tol, labels=obj.get("labels"),
                   degree=obj.get("degree"), kind=obj.get("kind"))


# -- chain spaces along a filtration ----------------------------------------------


def chain_spaces(F: Filtration, q, tol=DEFAULT_TOL):
    """Cached lists ``Z[i]``, ``B[i]`` of cycle and boundary spaces for i = 0..n."""
    cache = F.__dict__.setdefault("_chain_spaces", {})
    key = (q, tol)
    if key not in cache:
        Z = [cycles(F[i], q, tol) for i in range(F.n + 1)]
        B = [boundaries(F[i], q, tol) for i in range(F.n + 1)]
        cache[key] = (Z, B)
    return cache[key]


def birth_death_space(F: Filtration, q, s, tol=DEFAULT_TOL):
    """``ZB_q((b, d)) = Z_q(K_b) ∩ B_q(K_d)``, and ``Z_q(K_b)`` when ``d = ∞``."""
    s = Segment(*s)
    _check_segment(F, s)
    Z, B = chain_spaces(F, q, tol)
    if s.d == INF:
        return Z[s.b]
    return intersect(Z[s.b], B[int(s.d)])


def persistent_betti(F: Filtration, q, i, j, tol=DEFAULT_TOL):
    """Rank of ``H_q(K_i) -> H_q(K_j)``; ``i = 0`` gives 0."""
    if i == 0:
        return 0
    if not 1 <= i <= j <= F.n:
        raise ValueError(f"need 1 <= i <= j <= {F.n}, got ({i}, {j})")
    Z, B = chain_spaces(F, q, tol)
    return Z[i].dim - intersect(Z[i], B[j]).dim


def _restricted_boundary(F, q, i, j, tol):
    """``∂_{q+1}`` restricted to ``C^{K_j,K_i}_{q+1}``, rows in ``K_i``'s q-chains."""
    Ki, Kj = F[i], F[j]
    n_i = Ki.n_simplices(q)
    if Kj.n_simplices(q + 1) == 0 or n_i == 0:
        return np.zeros((n_i, 0))
    D = boundary_matrix(Kj, q + 1)
    inside = np.isin(Kj.embedding(q), Ki.embedding(q))
    outside = D[~inside]
    W = null_space(outside, tol) if outside.shape[0] else np.eye(D.shape[1])
    return D[inside] @ W


def persistent_laplacian(F: Filtration, q, i, j, tol=DEFAULT_TOL):
    """``Δ_q^{K_i,K_j}`` on the q-chains of ``K_i`` (local coordinates)."""
    if not 1 <= i <= j <= F.n:
        raise ValueError(f"need 1 <= i <= j <= {F.n}, got ({i}, {j})")
    Ki = F[i]
    up = _restricted_boundary(F, q, i, j, tol)
    L = up @ up.T
    if q > 0 and Ki.n_simplices(q):
        down = boundary_matrix(Ki, q)
        L = L + down.T @ down
    return L


def _pad(F, q, i, local):
    out = np.zeros((F.complex.n_simplices(q), local.shape[1]))
    out[F[i].embedding(q)] = local
    return out


def laplacian_kernel(F: Filtration, q, s, tol=DEFAULT_TOL, method="intersection", check=False):
    """``LK_q((i, j)) = ker Δ_q^{K_i, K_{j-1}}`` (``K_n`` when ``j = ∞``).

    The default ``method="intersection"`` uses ``Z_q(K_i) ⊖ im ∂^{K_j,K_i}``;
    ``method="eigen"`` thresholds the spectrum with :func:`kernel_cutoff`. ``check=True`` computes both and
    raises if they disagree.
    """
    s = Segment(*s)
    _check_segment(F, s)
    if s.is_diagonal():
        raise ValueError(f"Laplacian kernels are defined off the diagonal, got {s}")
    i = s.b
    j = F.n if s.d == INF else int(s.d) - 1
    if method == "intersection":
        out = _kernel_by_intersection(F, q, i, j, tol)
        if check:
            other = _kernel_by_eigen(F, q, i, j, tol)
            if not out.equals(other, tol=max(tol, 1e-6)):
                raise ArithmeticError(f"Laplacian kernel routes disagree at {s}")
        return out
    if method == "eigen":
        return _kernel_by_eigen(F, q, i, j, tol)
    raise ValueError(f"unknown method {method!r}")


def _kernel_by_intersection(F, q, i, j, tol):
    Z, _ = chain_spaces(F, q, tol)
    image = column_space(_restricted_boundary(F, q, i, j, tol), tol)
    return ominus(Z[i], Subspace(_pad(F, q, i, image), tol))


def _kernel_by_eigen(F, q, i, j, tol):
    L = persistent_laplacian(F, q, i, j, tol)
    if L.shape[0] == 0:
        return Subspace.zero(F.complex.n_simplices(q), tol)
    w, V = np.linalg.eigh(L)
    return Subspace(_pad(F, q, i, V[:, np.abs(w) <= kernel_cutoff(w, tol)]), tol)


def kernel_cutoff(eigenvalues, tol=DEFAULT_TOL):
    """Zero threshold for a PSD spectrum: ``tol * max(1, largest eigenvalue)``.

    A floor of 1 keeps an all-zero spectrum, whose entries are only zero up
    to rounding, from producing a threshold below the rounding noise.
    """
    w = np.abs(np.asarray(eigenvalues))
    return tol * max(1.0, float(w.max()) if w.size else 0.0)


def laplacian_nullity(F: Filtration, q, i, j, tol=DEFAULT_TOL):
    """Number of eigenvalues of ``Δ_q^{K_i,K_j}`` below :func:`kernel_cutoff`."""
    L = persistent_laplacian(F, q, i, j, tol)
    if L.size == 0:
        return 0
    w = np.linalg.eigvalsh(L)
    return int(np.count_nonzero(np.abs(w) <= kernel_cutoff(w, tol)))


def _check_segment(F, s):
    if not (1 <= s.b <= F.n and (s.d == INF or s.b <= s.d <= F.n)):
        raise ValueError(f"{s} is not a segment of a poset with {F.n} elements")


def zb_diagram(F: Filtration, q, tol=DEFAULT_TOL, n_jobs=None):
    """All birth-death spaces, under the product order."""
    chain_spaces(F, q, tol)  # fill the cache before any threads start
    segs = segments(F.n, PRODUCT)
    vals = parallel_map(lambda s: birth_death_space(F, q, s, tol), segs, n_jobs)
    return SegmentDiagram(F.poset, PRODUCT, F.complex.n_simplices(q), dict(zip(segs, vals)),
                          tol=tol, labels=F.complex.labels(q), degree=q, kind="zb")


def lk_diagram(F: Filtration, q, tol=DEFAULT_TOL, n_jobs=None, method="intersection"):
    """All Laplacian kernels, under the reverse inclusion order."""
    chain_spaces(F, q, tol)
    for i in range(F.n + 1):
        F[i]
    segs = segments(F.n, REVERSE_INCLUSION)
    vals = parallel_map(lambda s: laplacian_kernel(F, q, s, tol, method), segs, n_jobs)
    return SegmentDiagram(F.poset, REVERSE_INCLUSION, F.complex.n_simplices(q),
                          dict(zip(segs, vals)), tol=tol, labels=F.complex.labels(q), degree=q, kind="zb")


def intersection_monotone_violations(D: SegmentDiagram, tol=None):
    """Names of failed conditions, as ``(kind, segment)`` pairs.

    Order preservation is checked on covering pairs, which implies it for all
    comparable pairs; the intersection condition is checked at every ``i < j``.
    """
    if D.order != PRODUCT:
        raise ValueError("intersection-monotone functions live on the product order")
    tol = D.tol if tol is None else tol
    n = D.n
    bad = []
    for s in D.segments:
        ups = []
        if s.d != INF:
            ups.append(seg(s.b, int(s.d) + 1, n))
            if s.b + 1 <= s.d:
                ups.append(Segment(s.b + 1, s.d))
        elif s.b + 1 <= n:
            ups.append(Segment(s.b + 1, INF))
        for t in ups:
            if not D[s].issubspace(D[t], tol):
                bad.append(("monotone", s))
                break
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            lhs = intersect(D.get(i + 1, j), D.get(i, j + 1))
            if not lhs.equals(D.get(i, j), tol):
                bad.append(("intersection", Segment(i, j)))
    return bad


def check_intersection_monotone(D: SegmentDiagram, tol=None):
    return not intersection_monotone_violations(D, tol)
