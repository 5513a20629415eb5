from __future__ import annotations

import random

import pytest

from dgonlab import corpus
from dgonlab.algebra import Path, PathSum
from dgonlab.qsp import build_qsp

CORPUS_NAMES = ["FIX-A3", "FIX-ANN4", "FIX-PENT5", "FIX-DISK4", "FIX-SELF4"]
EXTRA_NAMES = ["FIX-SQ3", "FIX-ANN3", "FIX-TORUS3"]


@pytest.fixture(scope="session")
def qsp_cache():
    cache = {}
    for name in CORPUS_NAMES + EXTRA_NAMES:
        cache[name] = build_qsp(corpus.load(name))
    return cache


def random_path(rng: random.Random, quiver, max_len: int = 4) -> Path:
    vertex = rng.choice(sorted(quiver.vertices))
    arrows = []
    current = vertex
    for _ in range(rng.randint(0, max_len)):
        outs = quiver.arrows_from(current)
        if not outs:
            break
        arr = rng.choice(outs)
        arrows.append(arr.id)
        current = arr.target
    return Path(vertex, tuple(arrows))


def random_pathsum(rng: random.Random, quiver, terms: int = 3, max_len: int = 4) -> PathSum:
    out = PathSum()
    for _ in range(rng.randint(1, terms)):
        out = out + PathSum.of(random_path(rng, quiver, max_len), rng.choice([1, -1, 2]))
    return out


def random_cycle(rng: random.Random, quiver, tries: int = 60, max_len: int = 5):
    for _ in range(tries):
        p = random_path(rng, quiver, max_len)
        if p.arrows and quiver.path_target(p) == p.source:
            return p
    return None
