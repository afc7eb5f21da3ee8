import json
import math
from pathlib import Path

import numpy as np
import pytest

from grasspd import Filtration, Subspace

DATA = Path(__file__).with_name("data")

# One line per acceptance criterion, filled in by test_acceptance.py.
ACCEPTANCE = {}


def record(criterion, ok, detail=""):
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def load_corpus():
    return [Filtration.from_json(obj) for obj in json.loads((DATA / "corpus.json").read_text())]


def load_frozen():
    return json.loads((DATA / "frozen.json").read_text())


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def frozen():
    return load_frozen()


def pd_records(pd):
    """Sort ``{Segment: count}`` into the frozen ``[b, d, count]`` layout."""
    out = [[s.b, "inf" if s.d == math.inf else int(s.d), int(v)] for s, v in pd.items() if v]
    return sorted(out, key=lambda r: (r[0], float(r[1])))


def fig6():
    """Four vertices, two triangles, indices 1..7 (values 0..6)."""
    return Filtration.from_simplices(
        range(7),
        [(0, "a"), (1, "b"), (1, "ab"), (1, "c"), (2, "ac"), (2, "bc"), (2, "abc"),
         (3, "d"), (4, "bd"), (5, "cd"), (6, "bcd")],
    )


def fig12():
    """Sixteen vertices whose degree-0 diagram exercises every reconstruction rule."""
    births = {1: "y v w g k", 2: "x z h", 3: "l n p q r", 4: "u m", 6: "a1 a2"}
    edges = {2: "x-y y-z g-h", 4: "y-u l-m", 1: "v-w", 3: "l-n p-q q-r",
             6: "y-v y-g y-k y-l y-p y-a1 y-a2"}
    simplices = [(t, [v]) for t, vs in births.items() for v in vs.split()]
    simplices += [(t, e.split("-")) for t, es in edges.items() for e in es.split()]
    order = "y v w g k x z h l n p q r u m a1 a2".split()
    order.remove("y")
    return Filtration.from_simplices(range(1, 7), simplices, ["y"] + order)


def span(vectors, d):
    return Subspace.span(np.asarray(vectors, dtype=float).reshape(-1, d).T, d=d)


def cosine_match(S, v):
    """|cos| of the angle between ``v`` and its projection onto ``S``."""
    v = np.asarray(v, dtype=float)
    return float(np.linalg.norm(S.project(v)) / np.linalg.norm(v))
