"""Treegrams, their equivalence with degree-0 diagrams, and ultrametrics."""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .filtration import (
    INF,
    PRODUCT,
    Filtration,
    LinearMetricPoset,
    Segment,
    SegmentPoset,
    vietoris_rips,
)
from .invariants import SegmentDiagram
from .subspace import DEFAULT_TOL, orthonormalize, sum_all


@dataclass(frozen=True)
class Event:
    time: float
    alive: tuple
    blocks: tuple  # tuple of sorted tuples of vertex indices


class Treegram:
    """A finite sequence of sub-partitions of a vertex set.

    Each event gives the alive vertices and their partition into blocks at
    a time, and holds until the next event. Alive sets grow, partitions
    coarsen, and the last event has a single block holding every vertex.
    """

    def __init__(self, vertices: Sequence, events: Sequence[tuple]):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        pos = {v: k for k, v in enumerate(self.vertices)}
        evs = []
        for t, alive, blocks in events:
            try:
                a = tuple(sorted(pos[v] for v in alive))
                bl = tuple(sorted(tuple(sorted(pos[v] for v in b)) for b in blocks))
            except KeyError as exc:
                raise ValueError(f"unknown vertex {exc.args[0]!r}") from None
            evs.append(Event(float(t), a, bl))
        self.events = tuple(evs)
        self._validate()

    def _validate(self):
        if not self.events:
            raise ValueError("a treegram needs at least one event")
        prev = None
        for ev in self.events:
            flat = [v for b in ev.blocks for v in b]
            if any(len(b) == 0 for b in ev.blocks):
                raise ValueError(f"empty block at t={ev.time}")
            if sorted(flat) != list(ev.alive) or len(set(flat)) != len(flat):
                raise ValueError(f"blocks at t={ev.time} do not partition the alive vertices")
            if prev is not None:
                if ev.time <= prev.time:
                    raise ValueError("event times must increase")
                if not set(prev.alive) <= set(ev.alive):
                    raise ValueError(f"vertices disappear at t={ev.time}")
                owner = {v: k for k, b in enumerate(ev.blocks) for v in b}
                for b in prev.blocks:
                    if len({owner[v] for v in b}) != 1:
                        raise ValueError(f"block {self._names(b)} splits at t={ev.time}")
            prev = ev
        last = self.events[-1]
        if len(last.blocks) != 1 or len(last.alive) != len(self.vertices):
            raise ValueError("the last event must have a single block holding every vertex")

    def _names(self, block):
        return [self.vertices[v] for v in block]

    @property
    def times(self):
        return tuple(ev.time for ev in self.events)

    @property
    def n(self):
        return len(self.events)

    def birth_index(self):
        """1-based index of the first event at which each vertex is alive."""
        out = {}
        for k, ev in enumerate(self.events, start=1):
            for v in ev.alive:
                out.setdefault(v, k)
        return out

    def birth_times(self):
        return {self.vertices[v]: self.events[k - 1].time for v, k in self.birth_index().items()}

    def is_dendrogram(self):
        return len(self.events[0].alive) == len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, Treegram):
            return NotImplemented
        return self.vertices == other.vertices and self.events == other.events

    def __repr__(self):
        return f"Treegram(vertices={len(self.vertices)}, events={len(self.events)})"

    def to_json(self):
        return {
            "vertices": [str(v) for v in self.vertices],
            "events": [
                {
                    "t": ev.time,
                    "alive": [str(self.vertices[v]) for v in ev.alive],
                    "blocks": [[str(self.vertices[v]) for v in b] for b in ev.blocks],
                }
                for ev in self.events
            ],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            vertices = [str(v) for v in obj["vertices"]]
            events = [
                (ev["t"], [str(v) for v in ev["alive"]], [[str(v) for v in b] for b in ev["blocks"]])
                for ev in obj["events"]
            ]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed treegram JSON: {exc}") from None
        return cls(vertices, events)


def _components(n_vertices, alive, edges):
    """Partition of ``alive`` into connected components of the given edges."""
    if not alive:
        return ()
    if edges:
        r, c = zip(*edges)
        g = coo_matrix((np.ones(len(edges)), (r, c)), shape=(n_vertices, n_vertices))
    else:
        g = coo_matrix((n_vertices, n_vertices))
    _, labels = connected_components(g, directed=False)
    groups = {}
    for v in alive:
        groups.setdefault(labels[v], []).append(v)
    return tuple(sorted(tuple(sorted(b)) for b in groups.values()))


def treegram_of_filtration(F: Filtration):
    """Vertex sets and connected components of every ``K_i``, at the poset values."""
    K = F.complex
    m = len(K.vertices)
    events = []
    for i in range(1, F.n + 1):
        alive = sorted(s[0] for s, k in F.entry.items() if len(s) == 1 and k <= i)
        edges = [s for s, k in F.entry.items() if len(s) == 2 and k <= i]
        blocks = _components(m, alive, edges)
        events.append((F.poset.value(i), [K.vertices[v] for v in alive],
                       [[K.vertices[v] for v in b] for b in blocks]))
    last = events[-1]
    if len(last[2]) != 1 or len(last[1]) != m:
        raise ValueError(f"the final complex is disconnected ({len(last[2])} components)")
    return Treegram(K.vertices, events)


def gpd_to_treegram(G: SegmentDiagram, vertices: Sequence | None = None, tol=None):
    """Recover the treegram from a degree-0 diagram.

    Downset sums give back ``Z_0(K_i) = ZB((i, ∞))`` and ``B_0(K_i) = ZB((i, i))``;
    vertex ``v`` is alive when ``e_v`` lies in ``Z_0(K_i)`` and two alive
    vertices share a block when their difference lies in ``B_0(K_i)``.
    """
    if G.order != PRODUCT:
        raise ValueError("expected a product-order diagram")
    tol = G.tol if tol is None else tol
    m = G.ambient_dim
    if vertices is None:
        vertices = G.labels if G.labels is not None else list(range(m))
    vertices = list(vertices)
    if len(vertices) != m:
        raise ValueError("vertex list does not match the ambient dimension")
    if not G.is_transverse():
        raise ValueError("diagram entries are not transverse")
    poset = SegmentPoset(G.n, PRODUCT)
    eye = np.eye(m)
    events = []
    for i in range(1, G.n + 1):
        Z = sum_all([G[s] for s in poset.downset(Segment(i, INF))], d=m, tol=tol)
        B = sum_all([G[s] for s in poset.downset(Segment(i, i))], d=m, tol=tol)
        if not B.issubspace(Z, max(tol, 1e-9)):
            raise ValueError(f"inconsistent diagram: boundaries escape cycles at index {i}")
        alive = [v for v in range(m) if Z.contains(eye[v], max(tol, 1e-9))]
        if Z.dim != len(alive):
            raise ValueError(f"inconsistent diagram: cycle space at index {i} is not spanned by vertices")
        edges = [(a, b) for k, a in enumerate(alive) for b in alive[k + 1:]
                 if B.contains(eye[a] - eye[b], max(tol, 1e-9))]
        blocks = _components(m, alive, edges)
        if B.dim != len(alive) - len(blocks):
            raise ValueError(f"inconsistent diagram: boundary space at index {i} is not a block partition")
        events.append((G.poset.value(i), [vertices[v] for v in alive],
                       [[vertices[v] for v in b] for b in blocks]))
    return Treegram(vertices, events)


def _indicator(m, vertices):
    out = np.zeros(m)
    out[list(vertices)] = 1.0 / len(vertices)
    return out


def treegram_to_gpd(T: Treegram, tol=DEFAULT_TOL):
    """Degree-0 diagram assembled from centroids of blocks of the treegram.

    For each index ``d > 1`` and each block ``B`` at ``d``, the blocks at
    ``d - 1`` inside ``B`` are ordered by their birth (earliest vertex birth,
    then smallest vertex). The earliest ones contribute differences of the
    centroids of their earliest-born vertices at ``(b_1, d)``; every later
    block contributes the centroid of its earliest-born vertices minus the
    centroid of the older vertices in the older blocks, at ``(b, d)``; and
    each vertex new at ``d`` contributes its offset from the centroid of the
    older part at ``(d, d)``. Blocks with no older part (including every block
    at the first index) contribute all their centred vertices at ``(d, d)``.
    The only infinite segment is the first index with an alive vertex, where
    the entry is the centroid of the vertices alive then.
    """
    m = len(T.vertices)
    birth = T.birth_index()
    spans = {}

    def add(s, vec):
        spans.setdefault(s, []).append(vec)

    for d in range(1, T.n + 1):
        ev = T.events[d - 1]
        prev_blocks = T.events[d - 2].blocks if d > 1 else ()
        for block in ev.blocks:
            members = set(block)
            subs = [b for b in prev_blocks if b[0] in members]
            older = {v for b in subs for v in b}
            fresh = sorted(members - older)
            if not subs:
                centre = _indicator(m, block)
                for v in block:
                    add(Segment(d, d), np.eye(m)[v] - centre)
                continue
            centre = _indicator(m, sorted(older))
            for v in fresh:
                add(Segment(d, d), np.eye(m)[v] - centre)
            if len(subs) < 2:
                continue
            keyed = sorted(subs, key=lambda b: (min(birth[v] for v in b), b[0]))
            sub_birth = [min(birth[v] for v in b) for b in keyed]
            earliest = [tuple(v for v in b if birth[v] == bb) for b, bb in zip(keyed, sub_birth)]
            first = sub_birth[0]
            k = sum(1 for bb in sub_birth if bb == first)
            c1 = _indicator(m, earliest[0])
            for idx in range(1, k):
                add(Segment(first, d), _indicator(m, earliest[idx]) - c1)
            for idx in range(k, len(keyed)):
                bb = sub_birth[idx]
                rprime = [v for b, b_birth in zip(keyed, sub_birth) if b_birth < bb
                          for v in b if birth[v] <= bb]
                add(Segment(bb, d), _indicator(m, earliest[idx]) - _indicator(m, rprime))
    first_alive = next(k for k, ev in enumerate(T.events, start=1) if ev.alive)
    add(Segment(first_alive, INF), _indicator(m, T.events[first_alive - 1].alive))
    entries = {s: orthonormalize(vs, tol=tol, d=m) for s, vs in spans.items()}
    return SegmentDiagram(LinearMetricPoset(T.times), PRODUCT, m, entries, tol=tol,
                          labels=[str(v) for v in T.vertices], degree=0, kind="gpd")


# -- ultrametrics ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Ultrametric:
    names: tuple
    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "names", tuple(self.names))
        if M.shape != (len(self.names), len(self.names)):
            raise ValueError("matrix shape does not match the names")

    def is_ultrametric(self, tol=1e-12):
        U = self.matrix
        if not np.allclose(U, U.T, atol=tol) or np.any(np.abs(np.diag(U)) > tol) or np.any(U < -tol):
            return False
        # u(x,z) <= max(u(x,y), u(y,z)) for all triples
        bound = np.min(np.maximum(U[:, :, None], U[None, :, :]), axis=1)
        return bool(np.all(U <= bound + tol))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([str(x) for x in self.names])
        for row in self.matrix:
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        names, M = read_matrix_csv(text)
        return cls(names, M)


def read_matrix_csv(text):
    """Square matrix CSV with a header row of point names."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ValueError("empty CSV")
    names = [c.strip() for c in rows[0]]
    body = rows[1:]
    if len(body) != len(names) or any(len(r) != len(names) for r in body):
        raise ValueError("CSV matrix must be square with one header row")
    try:
        M = np.array([[float(c) for c in r] for r in body])
    except ValueError as exc:
        raise ValueError(f"non-numeric CSV entry: {exc}") from None
    return names, M


def ultrametric_from_treegram(T: Treegram):
    """``u(x, y)`` is the first event time at which ``x`` and ``y`` share a block."""
    if not T.is_dendrogram():
        warnings.warn("treegram is not a dendrogram; vertices born late are not recoverable "
                      "as points of an ultrametric", stacklevel=2)
    m = len(T.vertices)
    U = np.full((m, m), np.inf)
    for ev in T.events:
        for b in ev.blocks:
            for a in b:
                for c in b:
                    if U[a, c] == np.inf:
                        U[a, c] = 0.0 if a == c else ev.time
    return Ultrametric(T.vertices, U)


def vr_of_ultrametric(u: Ultrametric, max_dim=1):
    if not u.is_ultrametric():
        raise ValueError("matrix is not an ultrametric")
    return vietoris_rips(u.matrix, max_dim=max_dim, names=u.names)


def random_ultrametric(rng, n_points, heights=None):
    """Random ultrametric from a random agglomerative merge sequence."""
    rng = np.random.default_rng(rng)
    if heights is None:
        heights = np.sort(rng.choice(np.arange(1, 4 * n_points + 1), size=max(n_points - 1, 0), replace=False)) / 2.0
    clusters = [[k] for k in range(n_points)]
    U = np.zeros((n_points, n_points))
    for h in heights[: n_points - 1]:
        a, b = sorted(rng.choice(len(clusters), size=2, replace=False))
        for x in clusters[a]:
            for y in clusters[b]:
                U[x, y] = U[y, x] = h
        clusters[a] = clusters[a] + clusters[b]
        del clusters[b]
    names = [f"p{k}" for k in range(n_points)]
    return Ultrametric(names, U)
