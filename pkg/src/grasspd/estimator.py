"""scikit-learn style wrappers around the functional core."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .diagrams import classical_pd, gpd_birth_death, gpd_laplacian
from .filtration import (
    Filtration,
    check_distance_matrix,
    check_filtration,
    vietoris_rips,
)
from .subspace import DEFAULT_TOL
from .treegram import treegram_of_filtration


def _to_filtration(X, max_dim):
    if isinstance(X, (Filtration, dict)):
        return check_filtration(X)
    return vietoris_rips(check_distance_matrix(X), max_dim=max_dim)


class GrassmannianPersistence(BaseEstimator, TransformerMixin):
    """Degree-q Grassmannian persistence diagrams.

    ``fit`` accepts a :class:`Filtration`, its JSON form, or a distance
    matrix (turned into a Vietoris-Rips filtration of dimension
    ``degree + 1``). ``transform`` maps a list of such inputs to diagrams.

    Parameters
    ----------
    degree : int
    method : {"birth-death", "laplacian"}
    tol : float
        Relative tolerance of every rank decision.
    n_jobs : int or None
        Threads over segments; ``-1`` uses every core.
    """

    def __init__(self, degree=0, method="birth-death", tol=DEFAULT_TOL, n_jobs=None):
        self.degree = degree
        self.method = method
        self.tol = tol
        self.n_jobs = n_jobs

    def _diagram(self, F):
        if self.method == "birth-death":
            return gpd_birth_death(F, self.degree, self.tol, self.n_jobs)
        if self.method == "laplacian":
            return gpd_laplacian(F, self.degree, self.tol, self.n_jobs)
        raise ValueError(f"unknown method {self.method!r}")

    def fit(self, X, y=None):
        F = _to_filtration(X, self.degree + 1)
        self.filtration_ = F
        self.diagram_ = self._diagram(F)
        self.persistence_diagram_ = classical_pd(F, self.degree, "betti", self.tol)
        return self

    def transform(self, X):
        if not hasattr(self, "diagram_"):
            raise NotFittedError("call fit first")
        return [self._diagram(_to_filtration(x, self.degree + 1)) for x in X]

    def fit_transform(self, X, y=None):
        items = list(X)
        if not items:
            raise ValueError("no inputs")
        self.fit(items[0])
        return [self.diagram_] + self.transform(items[1:])


class TreegramClustering(BaseEstimator):
    """Treegram of a connected filtration and the merge-height matrix it induces.

    Fitted attributes: ``treegram_`` and ``merge_heights_`` (the first time two
    vertices share a block; vertices never together give ``inf``).
    """

    def __init__(self, max_dim=1):
        self.max_dim = max_dim

    def fit(self, X, y=None):
        F = _to_filtration(X, self.max_dim)
        self.treegram_ = treegram_of_filtration(F)
        m = len(F.vertices)
        H = np.full((m, m), np.inf)
        np.fill_diagonal(H, 0.0)
        for ev in self.treegram_.events:
            for b in ev.blocks:
                for a in b:
                    for c in b:
                        if H[a, c] == np.inf:
                            H[a, c] = ev.time
        self.merge_heights_ = H
        return self

    def predict(self, height):
        """Cluster labels of the vertices alive at ``height`` (``-1`` if not yet born)."""
        if not hasattr(self, "treegram_"):
            raise NotFittedError("call fit first")
        labels = np.full(len(self.treegram_.vertices), -1)
        current = None
        for ev in self.treegram_.events:
            if ev.time <= height:
                current = ev
        if current is not None:
            for k, b in enumerate(current.blocks):
                labels[list(b)] = k
        return labels
