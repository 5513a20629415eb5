"""Quiver with superpotential of a d-angulation.

Per face: a complete directed graph on its internal edge occurrences,
degrees from the clockwise sandwich count.  Gluing identifies the two
occurrences of each arc.  The superpotential is the signed sum of all
3-cycles per face; signs are found by brute force against d^2 = 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    Arrow,
    DgQuiverAlgebra,
    GradedQuiver,
    Path,
    Potential,
    check_d_squared,
    ginzburg,
)
from .errors import AlgebraError, SurfaceError
from .surface import ARC, MarkedSurfaceComplex, validate


def arrow_id(src_occ: str, tgt_occ: str) -> str:
    return f"a({src_occ},{tgt_occ})"


@dataclass(frozen=True)
class PreArrow:
    id: str
    source_occ: str
    target_occ: str
    degree: int
    face: int


@dataclass(frozen=True)
class PreQuiver:
    d: int
    # per face: (position-in-face, occurrence name) of each internal side
    face_occurrences: tuple[tuple[tuple[int, str], ...], ...]
    arrows: tuple[PreArrow, ...]
    occ_to_arc: dict[str, str]

    def arrows_of_face(self, face: int) -> list[PreArrow]:
        return [a for a in self.arrows if a.face == face]


def build_prequiver(surface: MarkedSurfaceComplex) -> PreQuiver:
    d = surface.d
    face_occs: list[tuple[tuple[int, str], ...]] = []
    arrows: list[PreArrow] = []
    occ_to_arc: dict[str, str] = {}
    for fi, face in enumerate(surface.faces):
        occs = [(pi, s.occ) for pi, s in enumerate(face) if s.kind == ARC]
        face_occs.append(tuple(occs))
        for pi, s in enumerate(face):
            if s.kind == ARC:
                occ_to_arc[s.occ] = s.label
        for (ps, so), (pt, to) in itertools.permutations(occs, 2):
            sandwiched = (pt - ps) % d - 1
            arrows.append(PreArrow(arrow_id(so, to), so, to, -sandwiched, fi))
    return PreQuiver(d, tuple(face_occs), tuple(arrows), occ_to_arc)


def glue_prequiver(pre: PreQuiver) -> GradedQuiver:
    """Vertices become arcs; arrows are unchanged (loops at self-folded arcs)."""
    vertices = sorted(set(pre.occ_to_arc.values()))
    quiver = GradedQuiver(pre.d, vertices)
    for a in sorted(pre.arrows, key=lambda x: x.id):
        quiver.add_arrow(
            Arrow(
                a.id,
                pre.occ_to_arc[a.source_occ],
                pre.occ_to_arc[a.target_occ],
                a.degree,
                source_occ=a.source_occ,
                target_occ=a.target_occ,
            )
        )
    paired: set[str] = set()
    for a in sorted(pre.arrows, key=lambda x: x.id):
        if a.id in paired:
            continue
        partner = arrow_id(a.target_occ, a.source_occ)
        paired.update({a.id, partner})
        pa = quiver.arrow(partner)
        # designate the higher-degree arrow; ties break on id
        if a.degree > pa.degree or (a.degree == pa.degree and a.id < partner):
            quiver.set_pair(a.id, partner)
        else:
            quiver.set_pair(partner, a.id)
    return quiver


def enumerate_potential_cycles(pre: PreQuiver) -> list[tuple[int, tuple[str, str, str]]]:
    """All per-face 3-subsets of occurrences as clockwise 3-cycles."""
    out: list[tuple[int, tuple[str, str, str]]] = []
    for fi, occs in enumerate(pre.face_occurrences):
        for (p1, o1), (p2, o2), (p3, o3) in itertools.combinations(occs, 3):
            assert p1 < p2 < p3
            out.append((fi, (arrow_id(o1, o2), arrow_id(o2, o3), arrow_id(o3, o1))))
    for fi, cyc in out:
        deg = sum(a.degree for a in pre.arrows if a.id in cyc and a.face == fi)
        if deg != 3 - pre.d:
            raise AlgebraError(
                f"potential cycle {cyc} has degree {deg}, expected {3 - pre.d}"
            )
    return sorted(out, key=lambda t: (t[0], t[1]))


@dataclass(frozen=True)
class SignAssignment:
    signs: tuple[tuple[int, tuple[str, str, str], int], ...]  # (face, cycle, +-1)

    def as_dict(self) -> dict[tuple[int, tuple[str, str, str]], int]:
        return {(f, c): s for f, c, s in self.signs}


def _face_subquiver(quiver: GradedQuiver, pre: PreQuiver, face: int) -> GradedQuiver:
    arr = [quiver.arrow(a.id) for a in pre.arrows_of_face(face)]
    vertices = sorted({a.source for a in arr} | {a.target for a in arr})
    sub = GradedQuiver(pre.d, vertices)
    for a in arr:
        sub.add_arrow(a)
    for a in arr:
        if a.id in quiver.op_designated and quiver.op_partner[a.id] in sub.arrows:
            sub.set_pair(a.id, quiver.op_partner[a.id])
    return sub


def _face_sign_search(
    quiver: GradedQuiver, pre: PreQuiver, face: int, cycles: list[tuple[str, str, str]]
) -> list[int]:
    """Lexicographically first sign vector making the face-local d^2 vanish."""
    sub = _face_subquiver(quiver, pre, face)
    for signs in itertools.product((1, -1), repeat=len(cycles)):
        w = Potential()
        for cyc, sign in zip(cycles, signs):
            w.add(sub, sub.path(cyc), Fraction(sign))
        algebra = ginzburg(sub, w, verify=False)
        if check_d_squared(algebra) is None:
            return list(signs)
    raise AlgebraError(
        f"no valid sign assignment for face {face} with cycles {cycles}",
        face=face,
    )


def solve_signs(
    quiver: GradedQuiver,
    pre: PreQuiver,
    cycles: list[tuple[int, tuple[str, str, str]]],
) -> SignAssignment:
    by_face: dict[int, list[tuple[str, str, str]]] = {}
    for fi, cyc in cycles:
        by_face.setdefault(fi, []).append(cyc)
    rows: list[tuple[int, tuple[str, str, str], int]] = []
    for fi in sorted(by_face):
        face_cycles = sorted(by_face[fi])
        signs = _face_sign_search(quiver, pre, fi, face_cycles)
        rows.extend((fi, cyc, s) for cyc, s in zip(face_cycles, signs))
    return SignAssignment(tuple(rows))


def potential_from_signs(
    quiver: GradedQuiver,
    cycles: list[tuple[int, tuple[str, str, str]]],
    assignment: SignAssignment,
) -> Potential:
    signs = assignment.as_dict()
    w = Potential()
    for fi, cyc in cycles:
        w.add(quiver, quiver.path(cyc), Fraction(signs[(fi, cyc)]))
    return w


def check_assignment(
    quiver: GradedQuiver,
    cycles: list[tuple[int, tuple[str, str, str]]],
    signs: dict[tuple[str, str, str], int],
) -> tuple[str, object] | None:
    """d^2 witness for an explicit global sign choice (None when valid)."""
    w = Potential()
    for _, cyc in cycles:
        w.add(quiver, quiver.path(cyc), Fraction(signs[cyc]))
    algebra = ginzburg(quiver, w, verify=False)
    return check_d_squared(algebra)


def build_qsp(surface: MarkedSurfaceComplex) -> tuple[GradedQuiver, Potential]:
    validate(surface)
    pre = build_prequiver(surface)
    quiver = glue_prequiver(pre)
    cycles = enumerate_potential_cycles(pre)
    assignment = solve_signs(quiver, pre, cycles)
    w = potential_from_signs(quiver, cycles, assignment)
    ginzburg(quiver, w, verify=True)  # raises if d^2 != 0
    return quiver, w


def all_sign_assignments(
    quiver: GradedQuiver,
    pre: PreQuiver,
    cycles: list[tuple[int, tuple[str, str, str]]],
    limit: int = 16,
) -> list[SignAssignment]:
    """Every valid assignment (per-face product), capped for stress runs."""
    by_face: dict[int, list[tuple[str, str, str]]] = {}
    for fi, cyc in cycles:
        by_face.setdefault(fi, []).append(cyc)
    per_face: list[list[tuple[int, list[int]]]] = []
    for fi in sorted(by_face):
        face_cycles = sorted(by_face[fi])
        sub = _face_subquiver(quiver, pre, fi)
        valid = []
        for signs in itertools.product((1, -1), repeat=len(face_cycles)):
            w = Potential()
            for cyc, sign in zip(face_cycles, signs):
                w.add(sub, sub.path(cyc), Fraction(sign))
            if check_d_squared(ginzburg(sub, w, verify=False)) is None:
                valid.append((fi, list(signs)))
        per_face.append(valid)
    out = []
    for combo in itertools.islice(itertools.product(*per_face), limit):
        rows = []
        for fi, signs in combo:
            for cyc, s in zip(sorted(by_face[fi]), signs):
                rows.append((fi, cyc, s))
        out.append(SignAssignment(tuple(rows)))
    return out


def degree_zero_incoming(quiver: GradedQuiver, vertex: str) -> list[str]:
    """The set A(i) of degree-0 arrows ending at the vertex."""
    return [a.id for a in quiver.arrows_into(vertex) if a.degree == 0]


def qsp_to_json(quiver: GradedQuiver, w: Potential) -> dict:
    arrows = []
    for aid in quiver.sorted_arrow_ids():
        a = quiver.arrow(aid)
        item = {"id": a.id, "src": a.source, "tgt": a.target, "deg": a.degree}
        if aid in quiver.op_partner:
            item["op"] = quiver.op_partner[aid]
            item["designated"] = aid in quiver.op_designated
        arrows.append(item)
    potential = [
        {"cycle": list(path.arrows), "coeff": str(coeff)} for path, coeff in w.items()
    ]
    return {
        "d": quiver.d,
        "vertices": sorted(quiver.vertices),
        "arrows": arrows,
        "potential": potential,
    }


def qsp_from_json(data: dict) -> tuple[GradedQuiver, Potential]:
    quiver = GradedQuiver(int(data["d"]), [str(v) for v in data["vertices"]])
    for item in data["arrows"]:
        quiver.add_arrow(
            Arrow(str(item["id"]), str(item["src"]), str(item["tgt"]), int(item["deg"]))
        )
    for item in data["arrows"]:
        if item.get("designated"):
            quiver.set_pair(str(item["id"]), str(item["op"]))
    w = Potential()
    for term in data.get("potential", []):
        cycle = [str(x) for x in term["cycle"]]
        w.add(quiver, quiver.path(cycle), Fraction(term["coeff"]))
    return quiver, w


def algebra_to_json(algebra: DgQuiverAlgebra) -> dict:
    quiver = algebra.quiver
    arrows = []
    for aid in quiver.sorted_arrow_ids():
        a = quiver.arrow(aid)
        item = {"id": a.id, "src": a.source, "tgt": a.target, "deg": a.degree}
        if aid in quiver.op_partner:
            item["op"] = quiver.op_partner[aid]
            item["designated"] = aid in quiver.op_designated
        arrows.append(item)
    diff = {}
    for aid in sorted(algebra.differential):
        ps = algebra.differential[aid]
        if ps.is_zero():
            continue
        diff[aid] = [
            {"path": list(p.arrows), "coeff": str(c), "source": p.source}
            for p, c in ps.items()
        ]
    return {
        "d": quiver.d,
        "vertices": sorted(quiver.vertices),
        "arrows": arrows,
        "differential": diff,
    }
