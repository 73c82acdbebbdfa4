"""Bundled synthetic classifier for the end-to-end report workflow.

A seeded 17-input / 4-output logistic network plus a binary-ish stimulus set,
standing in for a feature-based classifier whose typicality properties are
summarized as a counts-per-threshold table.  Everything is generated from
fixed seeds, so the emitted files and reports are reproducible.
"""

from __future__ import annotations

import random

from .activations import Logistic
from .network import Edge, Network, Unit

N_FEATURES = 17
N_CLASSES = 4
N_HIDDEN = 10

FEATURES = [f"feat{i:02d}" for i in range(1, N_FEATURES + 1)]
CLASSES = [f"class{j}" for j in range(1, N_CLASSES + 1)]


def emotion_network(seed: int = 7) -> Network:
    rng = random.Random(seed)
    units = [Unit(name, name=name) for name in FEATURES]
    edges: list[Edge] = []
    hidden = [f"hid{i:02d}" for i in range(1, N_HIDDEN + 1)]
    for uid in hidden:
        units.append(Unit(uid, activation=Logistic(),
                          bias=rng.uniform(-0.5, 0.5), name=uid))
        for src in FEATURES:
            edges.append(Edge(src, uid, rng.uniform(-1.0, 1.0)))
    for uid in CLASSES:
        units.append(Unit(uid, activation=Logistic(),
                          bias=rng.uniform(-0.5, 0.5), name=uid))
        for src in hidden:
            edges.append(Edge(src, uid, rng.uniform(-1.5, 1.5)))
    return Network(units=units, edges=edges, inputs=FEATURES)


def emotion_stimuli(seed: int = 7, count: int = 1000, n: int = 5) -> list[list[float]]:
    """Mostly-crisp feature rows on the 1/n scale."""
    rng = random.Random(seed ^ 0x5711)
    rows = []
    for _ in range(count):
        row = []
        for _ in range(N_FEATURES):
            r = rng.random()
            if r < 0.45:
                row.append(0.0)
            elif r < 0.85:
                row.append(1.0)
            else:
                row.append(rng.randint(1, n - 1) / n)
        rows.append(row)
    return rows


def emotion_axioms(seed: int = 7) -> list[str]:
    """One typicality inclusion per output class over a few feature disjuncts."""
    rng = random.Random(seed ^ 0xA11)
    axioms = []
    for cls in CLASSES:
        feats = rng.sample(FEATURES, 3)
        axioms.append(f"T({cls}) <: {feats[0]} or {feats[1]} or {feats[2]}")
    axioms.append(f"T({CLASSES[0]}) <: {FEATURES[0]} and {FEATURES[1]}")
    return axioms
