"""Marked surfaces with d-angulations: validation, counts, flips.

A complex is a polygon-gluing encoding: each face is a cyclic list of
edge sides in clockwise order.  Each arc label owns exactly one "+" and
one "-" side globally; gluing the two sides with opposite boundary
orientations recovers the oriented surface.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable

from .errors import CapExceeded, ParseError, SurfaceError

ARC = "arc"
BOUNDARY = "boundary"

_CANONICAL_SEARCH_CAP = 200_000


@dataclass(frozen=True, order=True)
class EdgeSide:
    label: str
    kind: str
    side: str | None = None  # "+" or "-" for arcs, None for boundary

    @property
    def occ(self) -> str:
        """Occurrence name used by the pre-quiver, e.g. '1+'."""
        if self.kind != ARC:
            raise SurfaceError(f"boundary edge {self.label!r} has no occurrence name")
        return f"{self.label}{self.side}"


Face = tuple[EdgeSide, ...]


@dataclass(frozen=True)
class TopologyReport:
    g: int
    b: int
    c: int
    m: int
    n: int
    self_folded: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "b": self.b,
            "c": self.c,
            "m": self.m,
            "n": self.n,
            "self_folded": list(self.self_folded),
        }


@dataclass(frozen=True)
class MarkedSurfaceComplex:
    d: int
    faces: tuple[Face, ...]

    # -- basic indexes -----------------------------------------------------

    def arc_labels(self) -> list[str]:
        return sorted({s.label for f in self.faces for s in f if s.kind == ARC})

    def arc_sides(self, label: str) -> list[tuple[int, int]]:
        out = [
            (fi, pi)
            for fi, face in enumerate(self.faces)
            for pi, s in enumerate(face)
            if s.kind == ARC and s.label == label
        ]
        if not out:
            raise SurfaceError(f"unknown arc {label!r}", arc=label)
        return out

    def side_at(self, pos: tuple[int, int]) -> EdgeSide:
        fi, pi = pos
        return self.faces[fi][pi]

    def boundary_side_count(self) -> int:
        return sum(1 for f in self.faces for s in f if s.kind == BOUNDARY)


def structural_check(d: int, faces: list[list[EdgeSide]]) -> None:
    if d < 3:
        raise ParseError(f"d must be >= 3, got {d}", d=d)
    arc_seen: dict[str, list[str]] = {}
    boundary_seen: set[str] = set()
    for fi, face in enumerate(faces):
        if len(face) != d:
            raise ParseError(
                f"face {fi} has {len(face)} sides, expected d={d}", face=fi
            )
        for pi, s in enumerate(face):
            where = f"faces[{fi}][{pi}]"
            if s.kind == ARC:
                if s.side not in ("+", "-"):
                    raise ParseError(f"{where}: arc side must be '+' or '-'", field=where)
                arc_seen.setdefault(s.label, []).append(s.side)
            elif s.kind == BOUNDARY:
                if s.label in boundary_seen:
                    raise ParseError(
                        f"{where}: duplicate boundary label {s.label!r}", field=where
                    )
                boundary_seen.add(s.label)
            else:
                raise ParseError(f"{where}: unknown kind {s.kind!r}", field=where)
    for label, sides in sorted(arc_seen.items()):
        if sorted(sides) != ["+", "-"]:
            raise ParseError(
                f"arc side count: arc {label!r} has sides {sides}, "
                "expected exactly one '+' and one '-'",
                arc=label,
            )
        if label in boundary_seen:
            raise ParseError(f"label {label!r} used for both arc and boundary", arc=label)


def parse_surface(text: str) -> MarkedSurfaceComplex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}", line=exc.lineno)
    return surface_from_json(data)


def surface_from_json(data: object) -> MarkedSurfaceComplex:
    if not isinstance(data, dict):
        raise ParseError("surface file must be a JSON object")
    if "d" not in data or "faces" not in data:
        raise ParseError("surface file needs 'd' and 'faces' fields")
    d = data["d"]
    if not isinstance(d, int):
        raise ParseError("'d' must be an integer", field="d")
    raw_faces = data["faces"]
    if not isinstance(raw_faces, list) or not raw_faces:
        raise ParseError("'faces' must be a non-empty list", field="faces")
    faces: list[list[EdgeSide]] = []
    for fi, raw in enumerate(raw_faces):
        face: list[EdgeSide] = []
        if not isinstance(raw, list):
            raise ParseError(f"faces[{fi}] must be a list", field=f"faces[{fi}]")
        for pi, item in enumerate(raw):
            where = f"faces[{fi}][{pi}]"
            if not isinstance(item, dict) or "label" not in item or "kind" not in item:
                raise ParseError(f"{where}: need 'label' and 'kind'", field=where)
            face.append(
                EdgeSide(str(item["label"]), str(item["kind"]), item.get("side"))
            )
        faces.append(face)
    structural_check(d, faces)
    return MarkedSurfaceComplex(d, tuple(tuple(f) for f in faces))


def surface_to_json(surface: MarkedSurfaceComplex) -> dict:
    surface = canonical_form(surface)
    faces = []
    for face in surface.faces:
        row = []
        for s in face:
            item: dict = {"label": s.label, "kind": s.kind}
            if s.kind == ARC:
                item["side"] = s.side
            row.append(item)
        faces.append(row)
    return {"d": surface.d, "faces": faces}


def serialize_surface(surface: MarkedSurfaceComplex) -> str:
    return json.dumps(surface_to_json(surface), indent=2, sort_keys=True) + "\n"


# -- counting formulas -------------------------------------------------------


def counts(g: int, b: int, c: int, d: int) -> tuple[int, int]:
    """Number of d-gons and arcs forced by (g, b, c)."""
    if d < 3:
        raise SurfaceError(f"d must be >= 3, got {d}", d=d)
    m_num = 4 * g + 2 * b + c - 4
    n_num = 2 * d * g + d * b + c - 2 * d
    if m_num % (d - 2) or n_num % (d - 2):
        raise SurfaceError(
            f"no d-angulation: counts ({m_num}, {n_num}) not divisible by d-2={d - 2}",
            g=g, b=b, c=c, d=d,
        )
    m, n = m_num // (d - 2), n_num // (d - 2)
    if m < 1 or n < 0:
        raise SurfaceError(f"no d-angulation: m={m}, n={n}", g=g, b=b, c=c, d=d)
    return m, n


# -- corner tracing and validation -------------------------------------------


class _UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def _corner_classes(surface: MarkedSurfaceComplex) -> _UnionFind:
    corners = [
        (fi, pi) for fi, face in enumerate(surface.faces) for pi in range(len(face))
    ]
    uf = _UnionFind(corners)
    for label in surface.arc_labels():
        (f1, p1), (f2, p2) = surface.arc_sides(label)
        n1, n2 = len(surface.faces[f1]), len(surface.faces[f2])
        # opposite gluing: start of one side meets end of the other
        uf.union((f1, p1), (f2, (p2 + 1) % n2))
        uf.union((f1, (p1 + 1) % n1), (f2, p2))
    return uf


def validate(surface: MarkedSurfaceComplex) -> TopologyReport:
    structural_check(surface.d, [list(f) for f in surface.faces])

    # connectivity of the face-gluing graph
    if len(surface.faces) > 1:
        adj: dict[int, set[int]] = {fi: set() for fi in range(len(surface.faces))}
        for label in surface.arc_labels():
            (f1, _), (f2, _) = surface.arc_sides(label)
            adj[f1].add(f2)
            adj[f2].add(f1)
        seen = {0}
        stack = [0]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(seen) != len(surface.faces):
            raise SurfaceError(
                f"disconnected surface: reached {len(seen)} of {len(surface.faces)} faces"
            )

    uf = _corner_classes(surface)
    classes = uf.classes()

    boundary_touch: set = set()
    boundary_sides = []
    for fi, face in enumerate(surface.faces):
        n = len(face)
        for pi, s in enumerate(face):
            if s.kind == BOUNDARY:
                boundary_sides.append((fi, pi))
                boundary_touch.add(uf.find((fi, pi)))
                boundary_touch.add(uf.find((fi, (pi + 1) % n)))
    for root, members in sorted(classes.items()):
        if root not in boundary_touch:
            raise SurfaceError(
                "marked point in the interior (punctured surfaces unsupported)",
                corner=members[0],
            )

    c = len(classes)
    n_arcs = len(surface.arc_labels())
    n_bnd = len(boundary_sides)
    m = len(surface.faces)
    if n_bnd == 0:
        raise SurfaceError("surface has empty boundary")

    # boundary components via start-corner matching
    start_of: dict = {}
    for fi, pi in boundary_sides:
        v = uf.find((fi, pi))
        if v in start_of:
            raise SurfaceError(
                "orientation inconsistency: two boundary segments leave one marked point",
                corner=(fi, pi),
            )
        start_of[v] = (fi, pi)
    visited: set = set()
    b = 0
    for side in boundary_sides:
        if side in visited:
            continue
        b += 1
        cur = side
        while cur not in visited:
            visited.add(cur)
            fi, pi = cur
            end_v = uf.find((fi, (pi + 1) % len(surface.faces[fi])))
            if end_v not in start_of:
                raise SurfaceError(
                    "orientation inconsistency: boundary walk left the boundary",
                    corner=cur,
                )
            cur = start_of[end_v]
        if cur != side:
            raise SurfaceError("orientation inconsistency: boundary walk is not closed")

    euler = c - (n_arcs + n_bnd) + m
    if (2 - b - euler) % 2:
        raise SurfaceError(f"orientation inconsistency: odd Euler defect {2 - b - euler}")
    g = (2 - b - euler) // 2
    if g < 0:
        raise SurfaceError(f"orientation inconsistency: negative genus {g}")

    m_formula, n_formula = counts(g, b, c, surface.d)
    if (m_formula, n_formula) != (m, n_arcs):
        raise SurfaceError(
            f"formula mismatch: counted (m={m}, n={n_arcs}), "
            f"formulas give ({m_formula}, {n_formula})"
        )

    self_folded = tuple(
        sorted(
            label
            for label in surface.arc_labels()
            if surface.arc_sides(label)[0][0] == surface.arc_sides(label)[1][0]
        )
    )
    return TopologyReport(g=g, b=b, c=c, m=m, n=n_arcs, self_folded=self_folded)


def is_self_folded(surface: MarkedSurfaceComplex, arc: str) -> bool:
    sides = surface.arc_sides(arc)
    return sides[0][0] == sides[1][0]


# -- flip --------------------------------------------------------------------


def _rotate(face: Face, start: int) -> list[EdgeSide]:
    return list(face[start:]) + list(face[:start])


def _fresh_label(surface: MarkedSurfaceComplex, arc: str) -> str:
    base, _, gen = arc.partition("@")
    nxt = int(gen) + 1 if gen else 1
    labels = {s.label for f in surface.faces for s in f}
    label = f"{base}@{nxt}"
    while label in labels:
        nxt += 1
        label = f"{base}@{nxt}"
    return label


def flip(surface: MarkedSurfaceComplex, arc: str) -> MarkedSurfaceComplex:
    """Replace arc by the one sliding both endpoints anticlockwise.

    Non-self-folded, with F1 = [i, e1..e_{d-1}] and F2 = [i', f1..f_{d-1}]:
        X = [i*, e_{d-1}, f1..f_{d-2}],  Y = [i*', f_{d-1}, e1..e_{d-2}].
    Self-folded, with F = [i, e1..e_p, i', g1..g_q]:
        [i*', g_q, g1..g_{q-1}, i*, e_p, e1..e_{p-1}].
    """
    d = surface.d
    sides = surface.arc_sides(arc)
    plus = next(pos for pos in sides if surface.side_at(pos).side == "+")
    minus = next(pos for pos in sides if surface.side_at(pos).side == "-")
    new_label = _fresh_label(surface, arc)
    new_plus = EdgeSide(new_label, ARC, "+")
    new_minus = EdgeSide(new_label, ARC, "-")

    faces = [list(f) for f in surface.faces]
    if plus[0] == minus[0]:
        if d == 3:
            raise SurfaceError(
                f"cannot flip self-folded arc {arc!r} when d=3", arc=arc
            )
        fi = plus[0]
        rotated = _rotate(surface.faces[fi], plus[1])
        split = rotated.index(EdgeSide(arc, ARC, "-"))
        es, gs = rotated[1:split], rotated[split + 1 :]
        if not es or not gs:
            raise SurfaceError(
                f"degenerate self-folded arc {arc!r}: sides are adjacent", arc=arc
            )
        new_face = [new_minus, gs[-1], *gs[:-1], new_plus, es[-1], *es[:-1]]
        faces[fi] = new_face
    else:
        (pf, pp), (mf, mp) = plus, minus
        es = _rotate(surface.faces[pf], pp)[1:]
        fs = _rotate(surface.faces[mf], mp)[1:]
        faces[pf] = [new_plus, es[-1], *fs[:-1]]
        faces[mf] = [new_minus, fs[-1], *es[:-1]]

    result = MarkedSurfaceComplex(d, tuple(tuple(f) for f in faces))
    validate(result)
    return result


def rename_arc(
    surface: MarkedSurfaceComplex, old: str, new: str
) -> MarkedSurfaceComplex:
    labels = {s.label for f in surface.faces for s in f}
    if new in labels and new != old:
        raise SurfaceError(f"label {new!r} already in use", arc=new)
    faces = tuple(
        tuple(
            EdgeSide(new, s.kind, s.side) if (s.kind == ARC and s.label == old) else s
            for s in face
        )
        for face in surface.faces
    )
    return MarkedSurfaceComplex(surface.d, faces)


def flip_orbit(
    surface: MarkedSurfaceComplex, arc: str, max_steps: int
) -> dict:
    """Iterate flips of the freshly created arc; detect return to start."""
    if max_steps < 1:
        raise SurfaceError(f"max_steps must be >= 1, got {max_steps}")
    key0 = canonical_key(surface)
    current, cur_arc = surface, arc
    for step in range(1, max_steps + 1):
        before = {s.label for f in current.faces for s in f if s.kind == ARC}
        current = flip(current, cur_arc)
        after = {s.label for f in current.faces for s in f if s.kind == ARC}
        (cur_arc,) = after - before
        if canonical_key(rename_arc(current, cur_arc, arc)) == key0:
            return {"period": step}
    return {"no_return_within": max_steps}


# -- canonical form -----------------------------------------------------------


def _face_shape(face: Face) -> tuple:
    return tuple((s.label, s.kind) for s in face)


def _min_rotations(face: Face) -> list[int]:
    shape = _face_shape(face)
    n = len(shape)
    rots = [(tuple(shape[r:] + shape[:r]), r) for r in range(n)]
    best = min(t for t, _ in rots)
    return [r for t, r in rots if t == best]


def canonical_form(surface: MarkedSurfaceComplex) -> MarkedSurfaceComplex:
    """Faces sorted by minimal rotation; arc sides renamed first-hit = '+'."""
    per_face = [_min_rotations(f) for f in surface.faces]
    keys = [
        min(tuple(_face_shape(f)[r:] + _face_shape(f)[:r]) for r in _min_rotations(f))
        for f in surface.faces
    ]
    order = sorted(range(len(surface.faces)), key=lambda i: (keys[i], i))

    # group indices with equal keys: their relative order may need a search
    groups: list[list[int]] = []
    for i in order:
        if groups and keys[groups[-1][0]] == keys[i]:
            groups[-1].append(i)
        else:
            groups.append([i])

    def encode(face_order: list[int], rot_choice: dict[int, int]) -> tuple:
        sides: dict[str, str] = {}
        encoded = []
        for fi in face_order:
            face = _rotate(surface.faces[fi], rot_choice[fi])
            row = []
            for s in face:
                if s.kind == ARC:
                    if s.label not in sides:
                        sides[s.label] = s.side or "+"
                        row.append((s.label, s.kind, "+"))
                    else:
                        row.append((s.label, s.kind, "-"))
                else:
                    row.append((s.label, s.kind, None))
            encoded.append(tuple(row))
        return tuple(encoded)

    combos = 1
    for g in groups:
        perms = 1
        for k in range(2, len(g) + 1):
            perms *= k
        combos *= perms
        for fi in g:
            combos *= len(per_face[fi])
    if combos > _CANONICAL_SEARCH_CAP:
        raise CapExceeded(f"canonical-form search space {combos} exceeds cap")

    best_enc: tuple | None = None
    best_pair: tuple[list[int], dict[int, int]] | None = None
    group_perms = [list(itertools.permutations(g)) for g in groups]
    for perm_choice in itertools.product(*group_perms):
        face_order = [fi for grp in perm_choice for fi in grp]
        for rots in itertools.product(*[per_face[fi] for fi in face_order]):
            rot_choice = dict(zip(face_order, rots))
            enc = encode(face_order, rot_choice)
            if best_enc is None or enc < best_enc:
                best_enc = enc
                best_pair = (face_order, rot_choice)

    assert best_enc is not None and best_pair is not None
    faces = tuple(
        tuple(EdgeSide(label, kind, side) for (label, kind, side) in row)
        for row in best_enc
    )
    return MarkedSurfaceComplex(surface.d, faces)


def canonical_key(surface: MarkedSurfaceComplex) -> tuple:
    canon = canonical_form(surface)
    return (canon.d, tuple(tuple((s.label, s.kind, s.side) for s in f) for f in canon.faces))
