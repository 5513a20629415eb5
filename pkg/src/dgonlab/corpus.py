"""The worked-example surfaces and hand-built dg algebras used throughout
the test suite and shipped as JSON next to the package."""

from __future__ import annotations

import json
from importlib import resources

from .algebra import Arrow, DgQuiverAlgebra, GradedQuiver, Path, PathSum
from .surface import MarkedSurfaceComplex, surface_from_json


def _face(*sides: str) -> list[dict]:
    out = []
    for s in sides:
        if s.endswith("+") or s.endswith("-"):
            out.append({"label": s[:-1], "kind": "arc", "side": s[-1]})
        else:
            out.append({"label": s, "kind": "boundary"})
    return out


# Annulus with 3+3 marked points, one self-folded arc, d=4.
FIX_ANN4 = {
    "d": 4,
    "faces": [
        _face("1+", "2+", "1-", "3+"),
        _face("2-", "o1", "o2", "o3"),
        _face("3-", "i1", "i2", "i3"),
    ],
}

# Hexagon disk, central triangle, d=3 (type A3).
FIX_A3 = {
    "d": 3,
    "faces": [
        _face("3+", "1+", "2+"),
        _face("1-", "b1", "b2"),
        _face("2-", "b3", "b4"),
        _face("3-", "b5", "b6"),
    ],
}

# Annulus with one arc and a single pentagon face, d=5.
FIX_PENT5 = {
    "d": 5,
    "faces": [
        _face("1+", "i1", "1-", "o1", "o2"),
    ],
}

# Disk with twelve marked points, inner square plus four flaps, d=4.
FIX_DISK4 = {
    "d": 4,
    "faces": [
        _face("1+", "3+", "4+", "2+"),
        _face("1-", "b1", "b2", "b3"),
        _face("3-", "b4", "b5", "b6"),
        _face("4-", "b7", "b8", "b9"),
        _face("2-", "b10", "b11", "b12"),
    ],
}

# Annulus with 4+5 marked points and a self-folded arc, d=5; the single
# pentagon holding both sides of arc 1 also carries one boundary edge.
FIX_SELF4 = {
    "d": 5,
    "faces": [
        _face("2+", "1+", "3+", "b0", "1-"),
        _face("2-", "o1", "o2", "o3", "o4"),
        _face("3-", "i1", "i2", "i3", "i4"),
    ],
}

# Square disk, one diagonal, d=3: the |A| = 0 flip.
FIX_SQ3 = {
    "d": 3,
    "faces": [
        _face("1+", "b1", "b2"),
        _face("1-", "b3", "b4"),
    ],
}

# One-holed torus with a single marked point, d=3: the genus case.
FIX_TORUS3 = {
    "d": 3,
    "faces": [
        _face("a-", "d+", "c-"),
        _face("a+", "b+", "c+"),
        _face("e1", "d-", "b-"),
    ],
}

# Annulus with 3+3 marked points, zigzag 3-angulation (6 arcs, 6 faces).
FIX_ANN3 = {
    "d": 3,
    "faces": [
        _face("z1+", "z2+", "o1"),
        _face("z2-", "z3+", "i1"),
        _face("z3-", "z4+", "o2"),
        _face("z4-", "z5+", "i2"),
        _face("z5-", "z6+", "o3"),
        _face("i3", "z1-", "z6-"),
    ],
}


def disk_without_arcs(d: int) -> dict:
    """A single d-gon whose sides are all boundary: the empty quiver case."""
    return {"d": d, "faces": [_face(*[f"b{k}" for k in range(1, d + 1)])]}


CORPUS: dict[str, dict] = {
    "FIX-A3": FIX_A3,
    "FIX-ANN4": FIX_ANN4,
    "FIX-PENT5": FIX_PENT5,
    "FIX-DISK4": FIX_DISK4,
    "FIX-SELF4": FIX_SELF4,
}

EXTRA: dict[str, dict] = {
    "FIX-SQ3": FIX_SQ3,
    "FIX-ANN3": FIX_ANN3,
    "FIX-TORUS3": FIX_TORUS3,
}


def load(name: str) -> MarkedSurfaceComplex:
    data = CORPUS.get(name) or EXTRA.get(name)
    if data is None:
        raise KeyError(f"unknown corpus surface {name!r}")
    return surface_from_json(data)


def corpus_path(name: str):
    return resources.files("dgonlab").joinpath(f"corpus/{name}.json")


def write_corpus_files(directory) -> None:
    from pathlib import Path as FsPath

    root = FsPath(directory)
    root.mkdir(parents=True, exist_ok=True)
    for name, data in {**CORPUS, **EXTRA}.items():
        (root / f"{name}.json").write_text(
            json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


# -- hand-built dg quiver algebras for the cancellation engine -----------------


def counterexample_chain() -> DgQuiverAlgebra:
    """1 -> 2 -> 3 -> 4 with d(alpha) = ab: no single-arrow leading term."""
    q = GradedQuiver(3, ["1", "2", "3", "4"])
    q.add_arrow(Arrow("a", "1", "2", 0))
    q.add_arrow(Arrow("b", "2", "3", 0))
    q.add_arrow(Arrow("c", "3", "4", 0))
    q.add_arrow(Arrow("alpha", "1", "3", -1))
    diff = {"alpha": PathSum.of(Path("1", ("a", "b")))}
    return DgQuiverAlgebra(q, diff, verified=True)


def counterexample_two_cycle() -> DgQuiverAlgebra:
    """1 <-> 2 with d(alpha) = aba: degree-0 cycle breaks the corollary."""
    q = GradedQuiver(3, ["1", "2"])
    q.add_arrow(Arrow("a", "1", "2", 0))
    q.add_arrow(Arrow("b", "2", "1", 0))
    q.add_arrow(Arrow("alpha", "1", "2", -1))
    diff = {"alpha": PathSum.of(Path("1", ("a", "b", "a")))}
    return DgQuiverAlgebra(q, diff, verified=True)


def cancellable_triangle() -> DgQuiverAlgebra:
    """a, alpha: 1->2, b: 1->3, c: 3->2 with d(alpha) = bc - a."""
    q = GradedQuiver(3, ["1", "2", "3"])
    q.add_arrow(Arrow("a", "1", "2", 0))
    q.add_arrow(Arrow("alpha", "1", "2", -1))
    q.add_arrow(Arrow("b", "1", "3", 0))
    q.add_arrow(Arrow("c", "3", "2", 0))
    diff = {
        "alpha": PathSum.of(Path("1", ("b", "c"))) - PathSum.of(Path("1", ("a",)))
    }
    return DgQuiverAlgebra(q, diff, verified=True)
