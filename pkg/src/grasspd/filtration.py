"""Linear metric posets, segment posets, Galois connections and filtrations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .complex import SimplicialComplex, closure, faces

INF = math.inf

PRODUCT = "product"
REVERSE_INCLUSION = "reverse_inclusion"
ORDERS = (PRODUCT, REVERSE_INCLUSION)


class Segment(NamedTuple):
    """Segment ``(b, d)`` of 1-based poset indices; ``d`` may be ``INF``."""

    b: int
    d: float

    def is_diagonal(self):
        return self.b == self.d

    def __str__(self):
        d = "inf" if self.d == INF else str(int(self.d))
        return f"({self.b},{d})"

    def to_json(self):
        return {"b": int(self.b), "d": "inf" if self.d == INF else int(self.d)}

    @classmethod
    def parse(cls, b, d):
        """Segment from JSON fields; ``d`` may be ``"inf"`` or ``None``."""
        b = int(b)
        if b < 1:
            raise ValueError(f"birth index must be at least 1, got {b}")
        if d is None:
            return cls(b, INF)
        if isinstance(d, str):
            if d.lower() not in ("inf", "infinity", "∞"):
                raise ValueError(f"bad death index {d!r}")
            return cls(b, INF)
        if int(d) < b:
            raise ValueError(f"death index {d} precedes birth index {b}")
        return cls(b, int(d))


def seg(i, j, n):
    """Segment ``(i, j)`` with the convention ``(i, n + 1) == (i, ∞)``."""
    return Segment(i, INF if (j == INF or j == n + 1) else j)


def leq_product(s, t):
    return s.b <= t.b and s.d <= t.d


def leq_reverse_inclusion(s, t):
    return s.b <= t.b and s.d >= t.d


@dataclass(frozen=True)
class LinearMetricPoset:
    """Finite subset ``ℓ_1 < ... < ℓ_n`` of the real line."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("a poset needs at least one value")
        if any(not math.isfinite(v) for v in vals):
            raise ValueError("poset values must be finite")
        if any(a >= b for a, b in zip(vals, vals[1:])):
            raise ValueError("poset values must be strictly increasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def range(cls, n):
        return cls(tuple(range(1, n + 1)))

    def __len__(self):
        return len(self.values)

    @property
    def n(self):
        return len(self.values)

    def value(self, i):
        """Value of 1-based index ``i``; ``INF`` maps to ``inf``."""
        return INF if i == INF else self.values[i - 1]

    def index(self, value, tol=1e-12):
        for k, v in enumerate(self.values):
            if abs(v - value) <= tol * max(1.0, abs(v)):
                return k + 1
        raise KeyError(value)

    def distance(self, a, b):
        """Metric between two poset values (not indices)."""
        return abs(a - b)


class FinitePoset:
    """A finite poset given by its elements and a ``leq`` predicate."""

    def __init__(self, elements: Iterable[Hashable], leq: Callable):
        self.elements = list(elements)
        self.leq = leq
        self._down = {p: [r for r in self.elements if leq(r, p)] for p in self.elements}

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, p):
        return p in self._down

    def downset(self, p):
        return list(self._down[p])

    def strict_downset(self, p):
        return [r for r in self._down[p] if r != p]

    def linear_extension(self):
        return sorted(self.elements, key=lambda p: len(self._down[p]))

    @classmethod
    def chain(cls, elements):
        pos = {p: k for k, p in enumerate(elements)}
        return cls(elements, lambda a, b: pos[a] <= pos[b])


def segments(n, order=PRODUCT):
    """All segments of ``{1..n}`` for the given order.

    The product order includes the diagonal; the reverse inclusion order is
    defined on non-diagonal segments only.
    """
    if order not in ORDERS:
        raise ValueError(f"unknown order {order!r}")
    out = []
    for i in range(1, n + 1):
        start = i if order == PRODUCT else i + 1
        out.extend(Segment(i, j) for j in range(start, n + 1))
        out.append(Segment(i, INF))
    return out


class SegmentPoset(FinitePoset):
    """Segments of a linear poset with the product or reverse inclusion order."""

    def __init__(self, n, order=PRODUCT):
        self.n = n
        self.order = order
        leq = leq_product if order == PRODUCT else leq_reverse_inclusion
        super().__init__(segments(n, order), leq)


# -- filtrations -----------------------------------------------------------------


class Filtration:
    """A monotone map from a linear poset into subcomplexes of ``K``.

    ``entry`` maps each simplex of ``K`` (index tuple) to the 1-based poset
    index at which it appears. Every simplex of ``K`` is present at the last
    index.
    """

    def __init__(self, poset: LinearMetricPoset, complex: SimplicialComplex, entry: Mapping):
        self.poset = poset if isinstance(poset, LinearMetricPoset) else LinearMetricPoset(tuple(poset))
        self.complex = complex
        n = self.poset.n
        self.entry = {}
        for s in complex.all_simplices():
            if s not in entry:
                raise ValueError(f"simplex {complex.name(s)} has no entry index")
            i = int(entry[s])
            if not 1 <= i <= n:
                raise ValueError(f"entry index {i} of {complex.name(s)} outside 1..{n}")
            self.entry[s] = i
        for s, i in self.entry.items():
            for f in faces(s) if len(s) > 1 else ():
                if self.entry[f] > i:
                    raise ValueError(
                        f"face {complex.name(f)} enters after its coface {complex.name(s)}"
                    )
        self._steps = {}

    @property
    def n(self):
        return self.poset.n

    @property
    def vertices(self):
        return self.complex.vertices

    def __getitem__(self, i):
        """Subcomplex ``K_i`` (1-based; index 0 is the empty complex)."""
        if i not in self._steps:
            if not 0 <= i <= self.n:
                raise IndexError(i)
            self._steps[i] = self.complex.subcomplex([s for s, k in self.entry.items() if k <= i])
        return self._steps[i]

    def __repr__(self):
        return f"Filtration(n={self.n}, {self.complex!r})"

    # -- constructors ---------------------------------------------------------
    @classmethod
    def from_simplices(cls, values, simplices, vertices=None):
        """Build from ``values`` and ``(t, names)`` pairs.

        ``t`` is matched against ``values``; when no value matches and ``t`` is
        an integer in ``1..n`` it is read as a 1-based index. Faces missing from
        the input are added at the entry time of their earliest coface.
        """
        poset = LinearMetricPoset(tuple(values))
        items = []
        for t, names in simplices:
            items.append((_resolve_time(poset, t), tuple(names)))
        if vertices is None:
            seen = {}
            for _, names in items:
                for v in names:
                    seen.setdefault(v, len(seen))
            vertices = list(seen)
        pos = {v: k for k, v in enumerate(vertices)}
        given = {}
        for i, names in items:
            if len(set(names)) != len(names) or not names:
                raise ValueError(f"malformed simplex {list(names)}")
            try:
                s = tuple(sorted(pos[v] for v in names))
            except KeyError as exc:
                raise ValueError(f"unknown vertex {exc.args[0]!r}") from None
            if s in given and given[s] != i:
                raise ValueError(f"simplex {list(names)} listed twice with different times")
            given[s] = i
        entry = {}
        for s in sorted(given, key=len, reverse=True):
            for f in closure([s]):
                if f in given and f != s:
                    continue
                entry[f] = min(entry.get(f, given[s]), given[s])
        for s, i in given.items():
            entry[s] = i
        unused = [v for k, v in enumerate(vertices) if (k,) not in entry]
        if unused:
            raise ValueError(f"vertices {unused} appear in no simplex")
        K = SimplicialComplex(vertices, entry.keys())
        return cls(poset, K, entry)

    def to_json(self):
        names = self.complex.vertices
        simplices = sorted(self.entry.items(), key=lambda kv: (kv[1], len(kv[0]), kv[0]))
        return {
            "values": [float(v) for v in self.poset.values],
            "vertices": [str(v) for v in names],
            "simplices": [
                {"t": float(self.poset.value(i)), "verts": [str(names[v]) for v in s]}
                for s, i in simplices
            ],
        }

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict) or "values" not in obj or "simplices" not in obj:
            raise ValueError("filtration JSON needs 'values' and 'simplices'")
        pairs = []
        for rec in obj["simplices"]:
            if "i" in rec:
                t = ("index", int(rec["i"]))
            elif "t" in rec:
                t = rec["t"]
            else:
                raise ValueError("each simplex needs 't' or 'i'")
            pairs.append((t, [str(v) for v in rec["verts"]]))
        vertices = obj.get("vertices")
        if vertices is not None:
            vertices = [str(v) for v in vertices]
        return cls.from_simplices(obj["values"], pairs, vertices)


def _resolve_time(poset, t):
    if isinstance(t, tuple) and t[0] == "index":
        i = t[1]
        if not 1 <= i <= poset.n:
            raise ValueError(f"index {i} outside 1..{poset.n}")
        return i
    if isinstance(t, bool) or not isinstance(t, (int, float)):
        raise ValueError(f"bad time {t!r}")
    try:
        return poset.index(float(t))
    except KeyError:
        pass
    if float(t).is_integer() and 1 <= int(t) <= poset.n:
        return int(t)
    raise ValueError(f"time {t!r} is neither a poset value nor an index")


def check_distance_matrix(dist, tol=1e-12):
    """Validate and return a symmetric nonnegative matrix with zero diagonal."""
    D = np.asarray(dist, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValueError("distance matrix must be square")
    if not np.all(np.isfinite(D)):
        raise ValueError("distance matrix has non-finite entries")
    if np.any(D < 0):
        raise ValueError("distance matrix has negative entries")
    if not np.allclose(D, D.T, atol=tol, rtol=0):
        raise ValueError("distance matrix is not symmetric")
    if np.any(np.abs(np.diag(D)) > tol):
        raise ValueError("distance matrix has a nonzero diagonal")
    return D


def vietoris_rips(dist, max_dim=1, names=None):
    """Vietoris-Rips filtration of a finite metric space.

    A simplex enters at the largest pairwise distance among its vertices, and
    the poset is the sorted list of distinct entry values.
    """
    D = check_distance_matrix(dist)
    m = D.shape[0]
    if m == 0:
        raise ValueError("empty distance matrix")
    names = list(range(m)) if names is None else list(names)
    if len(names) != m:
        raise ValueError("number of names does not match the matrix")
    birth = {}
    for k in range(1, min(max_dim + 1, m) + 1):
        for s in combinations(range(m), k):
            birth[s] = 0.0 if k == 1 else max(D[a, b] for a, b in combinations(s, 2))
    values = sorted(set(birth.values()))
    index = {v: k + 1 for k, v in enumerate(values)}
    K = SimplicialComplex(names, birth.keys())
    return Filtration(LinearMetricPoset(tuple(values)), K, {s: index[v] for s, v in birth.items()})


def check_filtration(F):
    """Input validation helper: accept a Filtration or its JSON form."""
    if isinstance(F, Filtration):
        return F
    if isinstance(F, dict):
        return Filtration.from_json(F)
    raise TypeError(f"expected a Filtration, got {type(F).__name__}")


def random_filtration(rng, n_vertices=6, n_steps=4, max_dim=2, density=0.6, connected=False):
    """Random filtration for testing and benchmarking.

    Simplices of the full ``max_dim``-skeleton on ``n_vertices`` vertices are
    kept with probability ``density`` (faces forced in), each gets a random
    entry step, and entry steps are made monotone along faces.
    """
    rng = np.random.default_rng(rng)
    kept = {(v,) for v in range(n_vertices)}
    if connected:
        perm = rng.permutation(n_vertices)
        kept.update(tuple(sorted((int(a), int(b)))) for a, b in zip(perm, perm[1:]))
    for k in range(2, max_dim + 2):
        for s in combinations(range(n_vertices), k):
            if rng.random() < density and all(f in kept for f in faces(s)):
                kept.add(s)
    kept = closure(kept)
    entry = {}
    for s in sorted(kept, key=len):
        lo = max((entry[f] for f in faces(s)), default=1) if len(s) > 1 else 1
        entry[s] = int(rng.integers(lo, n_steps + 1))
    values = np.sort(rng.choice(np.arange(1, 10 * n_steps + 1), size=n_steps, replace=False)) / 10
    names = [chr(ord("a") + v) if n_vertices <= 26 else f"v{v}" for v in range(n_vertices)]
    K = SimplicialComplex(names, kept)
    return Filtration(LinearMetricPoset(tuple(values)), K, entry)


# -- Galois connections ------------------------------------------------------------


def _as_map(f):
    if callable(f) and not isinstance(f, Mapping):
        return f
    table = dict(f)
    return lambda p: table[p]


def check_monotone(f, source: Sequence, leq_source=None, leq_target=None):
    leq_s = leq_source or (lambda a, b: a <= b)
    leq_t = leq_target or (lambda a, b: a <= b)
    g = _as_map(f)
    return all(leq_t(g(a), g(b)) for a in source for b in source if leq_s(a, b))


def distortion(f, source: Sequence, metric_source=None, metric_target=None):
    """``max |d_P(p1, p2) - d_Q(f p1, f p2)|`` over all pairs of ``source``."""
    ds = metric_source or (lambda a, b: abs(a - b))
    dt = metric_target or (lambda a, b: abs(a - b))
    g = _as_map(f)
    pts = list(source)
    if not check_monotone(g, pts):
        raise ValueError("map is not monotone")
    return max((abs(ds(a, b) - dt(g(a), g(b))) for a in pts for b in pts), default=0.0)


@dataclass(frozen=True)
class GaloisConnection:
    """Adjoint pair ``left: L1 -> L2`` and ``right: L2 -> L1`` of linear posets.

    Maps are given as dictionaries between poset values.
    """

    source: LinearMetricPoset
    target: LinearMetricPoset
    left: Mapping = field(hash=False)
    right: Mapping = field(hash=False)

    def __post_init__(self):
        for name, pos in (("source", self.source), ("target", self.target)):
            if not isinstance(pos, LinearMetricPoset):
                object.__setattr__(self, name, LinearMetricPoset(tuple(pos)))
        object.__setattr__(self, "left", {float(k): float(v) for k, v in dict(self.left).items()})
        object.__setattr__(self, "right", {float(k): float(v) for k, v in dict(self.right).items()})
        if set(self.left) != set(self.source.values) or set(self.right) != set(self.target.values):
            raise ValueError("maps must be defined on every poset value")
        if not set(self.left.values()) <= set(self.target.values):
            raise ValueError("left adjoint leaves the target poset")
        if not set(self.right.values()) <= set(self.source.values):
            raise ValueError("right adjoint leaves the source poset")

    @classmethod
    def identity(cls, poset):
        m = {v: v for v in poset.values}
        return cls(poset, poset, m, m)

    @classmethod
    def from_left(cls, source, target, left):
        """Complete a monotone left map with its right adjoint, if one exists."""
        source = source if isinstance(source, LinearMetricPoset) else LinearMetricPoset(tuple(source))
        target = target if isinstance(target, LinearMetricPoset) else LinearMetricPoset(tuple(target))
        left = {float(k): float(v) for k, v in dict(left).items()}
        right = {}
        for q in target.values:
            below = [p for p in source.values if left[p] <= q]
            if not below:
                raise ValueError(f"no right adjoint: nothing maps below {q}")
            right[q] = max(below)
        return cls(source, target, left, right)

    def is_valid(self):
        return check_galois(self)

    @property
    def cost(self):
        return distortion(self.left, self.source.values)

    # index-level views used on segments
    def left_index(self, i):
        if i == INF:
            return INF
        return self.target.index(self.left[self.source.value(i)])

    def right_index(self, i):
        if i == INF:
            return INF
        return self.source.index(self.right[self.target.value(i)])

    def left_segment(self, s):
        return Segment(self.left_index(s.b), self.left_index(s.d))

    def right_segment(self, s):
        return Segment(self.right_index(s.b), self.right_index(s.d))


def check_galois(conn: GaloisConnection):
    """Exhaustive check of monotonicity and ``left(p) <= q  <=>  p <= right(q)``."""
    P, Q = conn.source.values, conn.target.values
    if not check_monotone(conn.left, P) or not check_monotone(conn.right, Q):
        return False
    return all((conn.left[p] <= q) == (p <= conn.right[q]) for p in P for q in Q)


def path_cost(path):
    """Cost of an edit path: the sum of the left adjoints' distortions.

    Steps may be :class:`GaloisConnection` objects or precomputed costs.
    """
    total = 0.0
    for step in path:
        if isinstance(step, GaloisConnection):
            if not check_galois(step):
                raise ValueError("path step is not a Galois connection")
            total += step.cost
        else:
            c = float(step)
            if c < 0 or not math.isfinite(c):
                raise ValueError(f"invalid step cost {step!r}")
            total += c
    return total


def pushforward(f, m: Mapping, codomain: Iterable, zero, add=None):
    """``f_# m (q) = sum of m(p) over the fiber f^{-1}(q)``.

    ``zero`` is the monoid identity and ``add`` its operation (``+`` by default).
    Elements of ``codomain`` with empty fibers receive ``zero``.
    """
    g = _as_map(f)
    add = add or (lambda a, b: a + b)
    out = {q: zero for q in codomain}
    for p, v in m.items():
        q = g(p)
        if q not in out:
            raise ValueError(f"{p!r} maps to {q!r}, outside the codomain")
        out[q] = add(out[q], v)
    return out


def pullback(f, h: Mapping, domain: Iterable, default=None):
    """``f^# h = h ∘ f`` on ``domain``; missing values of ``h`` use ``default``."""
    g = _as_map(f)
    out = {}
    for p in domain:
        q = g(p)
        if q in h:
            out[p] = h[q]
        elif default is not None:
            out[p] = default
        else:
            raise ValueError(f"{q!r} is not in the domain of the pulled-back map")
    return out
