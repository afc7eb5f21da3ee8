"""Regenerate tests/data/corpus.json and tests/data/frozen.json.

The corpus is drawn once with a fixed seed and stored, so the frozen
expectations do not depend on future changes to the random generator.
Expected values come only from ``oracles``.

    python tests/freeze.py [--corpus]
"""

import json
import sys
from pathlib import Path

import numpy as np
import oracles

DATA = Path(__file__).with_name("data")
N_CORPUS = 60
DEGREES = (0, 1, 2)


def draw_corpus(seed=20240601):
    from grasspd.filtration import random_filtration

    rng = np.random.default_rng(seed)
    out = []
    for _ in range(N_CORPUS):
        F = random_filtration(
            rng,
            n_vertices=int(rng.integers(3, 9)),
            n_steps=int(rng.integers(2, 7)),
            max_dim=3,
            density=float(rng.uniform(0.35, 0.85)),
            connected=True,
        )
        out.append(F.to_json())
    return out


def entry_of(obj):
    """``{vertex index tuple: 1-based entry index}`` straight from the JSON."""
    values = [float(v) for v in obj["values"]]
    pos = {v: k for k, v in enumerate(obj["vertices"])}
    return {
        tuple(sorted(pos[v] for v in rec["verts"])): values.index(float(rec["t"])) + 1
        for rec in obj["simplices"]
    }


def _key(seg):
    return [seg[0], seg[1]]


def _sorted(records):
    return sorted(records, key=lambda r: (r[0], float(r[1])))


def expectations(obj):
    entry = entry_of(obj)
    n = len(obj["values"])
    pairs = oracles.persistence_pairs(entry)
    rec = {"n": n, "pd": {}, "pd_offdiag": {}}
    for q in DEGREES:
        full = pairs.get(q, {})
        rec["pd"][q] = _sorted([*_key(s), m] for s, m in full.items())
        rec["pd_offdiag"][q] = _sorted([*_key(s), m] for s, m in full.items() if s[0] != s[1])
    rec["treegram"] = oracles.treegram_events(entry, n)
    return rec


def main(argv):
    DATA.mkdir(exist_ok=True)
    corpus_path = DATA / "corpus.json"
    if "--corpus" in argv or not corpus_path.exists():
        corpus_path.write_text(json.dumps(draw_corpus()) + "\n")
    corpus = json.loads(corpus_path.read_text())
    frozen = [expectations(obj) for obj in corpus]
    (DATA / "frozen.json").write_text(json.dumps(frozen, indent=1) + "\n")
    print(f"froze {len(frozen)} filtrations")


if __name__ == "__main__":
    main(sys.argv[1:])
