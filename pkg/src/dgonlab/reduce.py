"""Cancellation of arrow pairs in dg quiver algebras, brute-force
dg isomorphism search, and the flip/mutation commutativity check.

A pair (a, b) with d(a) = k1 b + p and no b inside p can be removed;
b is replaced by -(1/k1) p everywhere and a is set to zero.  Iterating
to a fixpoint produces the minimal model within the same quasi-iso class.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    DgQuiverAlgebra,
    GradedQuiver,
    Path,
    PathSum,
    check_d_squared,
    differential_degree_ok,
    ginzburg,
)
from .errors import CapExceeded, ReductionError
from .mutation import mutated_differential, surface_mutate
from .qsp import build_qsp
from .surface import MarkedSurfaceComplex, flip, validate

DEFAULT_ARROW_CAP = 40


def arrow_cap() -> int:
    raw = os.environ.get("DGONLAB_CAP_ARROWS", "")
    return int(raw) if raw.isdigit() else DEFAULT_ARROW_CAP


@dataclass(frozen=True)
class CancellablePair:
    a: str
    b: str
    k1: Fraction
    p: PathSum

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "k1": str(self.k1),
            "p": [
                {"path": list(pp.arrows), "coeff": str(c), "source": pp.source}
                for pp, c in self.p.items()
            ],
        }


def reduction_preconditions(algebra: DgQuiverAlgebra) -> dict:
    """Diagnostics for the corollary-level preconditions."""
    in_ideal = all(
        all(p.arrows for p in ps.terms) for ps in algebra.differential.values()
    )
    quiver = algebra.quiver
    zero_arrows = [a for a in quiver.sorted_arrow_ids() if quiver.degree(a) == 0]
    adj: dict[str, list[str]] = {}
    acyclic = True
    for aid in zero_arrows:
        arr = quiver.arrow(aid)
        if arr.source == arr.target:
            acyclic = False
        adj.setdefault(arr.source, []).append(arr.target)
    if acyclic:
        state: dict[str, int] = {}

        def visit(v: str) -> bool:
            state[v] = 1
            for nxt in adj.get(v, []):
                mark = state.get(nxt, 0)
                if mark == 1 or (mark == 0 and visit(nxt)):
                    return True
            state[v] = 2
            return False

        for v in quiver.vertices:
            if state.get(v, 0) == 0 and visit(v):
                acyclic = False
                break
    return {"differential_in_arrow_ideal": in_ideal, "degree_zero_acyclic": acyclic}


def find_cancellable(algebra: DgQuiverAlgebra) -> list[CancellablePair]:
    """All pairs (a, b) with d(a) = k1 b + p and b absent from p.

    When some differential leaves the arrow ideal the lemma does not
    apply at all and no pairs are returned; the degree-zero acyclicity
    of the corollary is reported by reduction_preconditions but the
    per-pair condition above is what is actually checked.
    """
    pre = reduction_preconditions(algebra)
    if not pre["differential_in_arrow_ideal"]:
        return []
    pairs = []
    for a in algebra.quiver.sorted_arrow_ids():
        da = algebra.d_of(a)
        if da.is_zero():
            continue
        for path, coeff in da.items():
            if path.length != 1:
                continue
            b = path.arrows[0]
            p = da - PathSum.of(path, coeff)
            if any(b in q.arrows for q in p.terms):
                continue
            pairs.append(CancellablePair(a=a, b=b, k1=coeff, p=p))
    return pairs


def _substitute(quiver: GradedQuiver, path: Path, b: str, repl: PathSum) -> PathSum:
    if b not in path.arrows:
        return PathSum.of(path)
    slots = [j for j, x in enumerate(path.arrows) if x == b]
    out = PathSum()
    for combo in itertools.product(repl.items(), repeat=len(slots)):
        coeff = Fraction(1)
        word: list[str] = []
        prev = 0
        for (mid, cm), j in zip(combo, slots):
            word.extend(path.arrows[prev:j])
            word.extend(mid.arrows)
            coeff *= cm
            prev = j + 1
        word.extend(path.arrows[prev:])
        out = out + PathSum.of(Path(path.source, tuple(word)), coeff)
    return out


def cancel_pair(algebra: DgQuiverAlgebra, pair: CancellablePair) -> DgQuiverAlgebra:
    """Remove arrows a, b; substitute b -> -(1/k1) p and drop a-terms."""
    if pair.a not in algebra.quiver.arrows or pair.b not in algebra.quiver.arrows:
        raise ReductionError(
            f"stale pair ({pair.a!r}, {pair.b!r}): arrow already removed",
            a=pair.a, b=pair.b,
        )
    current = algebra.d_of(pair.a)
    expected = PathSum.of(Path(algebra.quiver.arrow(pair.b).source, (pair.b,)), pair.k1) + pair.p
    if current != expected or any(pair.b in q.arrows for q in pair.p.terms):
        raise ReductionError(
            f"stale pair ({pair.a!r}, {pair.b!r}): differential changed",
            a=pair.a, b=pair.b,
        )

    old = algebra.quiver
    quiver = GradedQuiver(old.d, old.vertices)
    for aid in old.sorted_arrow_ids():
        if aid not in (pair.a, pair.b):
            quiver.add_arrow(old.arrows[aid])
    for aid in old.sorted_arrow_ids():
        if aid in (pair.a, pair.b) or aid not in old.op_designated:
            continue
        partner = old.op_partner[aid]
        if partner in quiver.arrows and aid in quiver.arrows:
            quiver.set_pair(aid, partner)

    repl = pair.p.scale(Fraction(-1) / pair.k1)
    diff: dict[str, PathSum] = {}
    for aid in old.sorted_arrow_ids():
        if aid in (pair.a, pair.b):
            continue
        new = PathSum()
        for path, coeff in algebra.d_of(aid).items():
            if pair.a in path.arrows:
                continue
            new = new + _substitute(quiver, path, pair.b, repl).scale(coeff)
        if not new.is_zero():
            diff[aid] = new

    out = DgQuiverAlgebra(quiver, diff)
    if not differential_degree_ok(out):
        raise ReductionError("internal error: non-homogeneous differential after cancel")
    witness = check_d_squared(out)
    if witness is not None:
        raise ReductionError(
            f"internal error: d^2 != 0 after cancelling ({pair.a!r}, {pair.b!r})",
            arrow=witness[0],
        )
    out.verified = True
    return out


@dataclass
class ReductionTrace:
    steps: list[CancellablePair] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]


def reduce_to_fixpoint(
    algebra: DgQuiverAlgebra, strategy: str = "smallest"
) -> tuple[DgQuiverAlgebra, ReductionTrace]:
    """Cancel pairs until none remain, smallest-(degree, id) first."""
    if strategy not in ("smallest", "largest"):
        raise ReductionError(f"unknown strategy {strategy!r}")
    trace = ReductionTrace()
    current = algebra
    for _ in range(len(algebra.quiver.arrows) // 2 + 1):
        pairs = find_cancellable(current)
        if not pairs:
            break
        chooser = max if strategy == "largest" else min
        pick = chooser(pairs, key=lambda pr: (current.quiver.degree(pr.a), pr.a, pr.b))
        current = cancel_pair(current, pick)
        trace.steps.append(pick)
    return current, trace


def replay_trace(algebra: DgQuiverAlgebra, trace: ReductionTrace) -> DgQuiverAlgebra:
    current = algebra
    for step in trace.steps:
        current = cancel_pair(current, step)
    return current


def is_minimal(algebra: DgQuiverAlgebra) -> bool:
    return all(
        all(p.length >= 2 for p in ps.terms) for ps in algebra.differential.values()
    )


# -- isomorphism search --------------------------------------------------------


def _vertex_invariant(algebra: DgQuiverAlgebra, v: str) -> tuple:
    q = algebra.quiver
    outs = sorted(a.degree for a in q.arrows_from(v))
    ins = sorted(a.degree for a in q.arrows_into(v))
    return tuple(outs), tuple(ins)


def _arrow_groups(algebra: DgQuiverAlgebra) -> dict[tuple, list[str]]:
    q = algebra.quiver
    groups: dict[tuple, list[str]] = {}
    for aid in q.sorted_arrow_ids():
        a = q.arrows[aid]
        groups.setdefault((a.source, a.target, a.degree), []).append(aid)
    return groups


def _solve_scalars(
    a1: DgQuiverAlgebra,
    a2: DgQuiverAlgebra,
    arrow_map: dict[str, str],
    mode: str,
) -> dict[str, Fraction] | None:
    """Scalars eps with eps_x sigma(x) intertwining the differentials."""
    arrows = sorted(arrow_map)
    index = {x: k for k, x in enumerate(arrows)}
    constraints: list[tuple[dict[int, int], Fraction]] = []
    for x in arrows:
        d1 = a1.d_of(x)
        d2 = a2.d_of(arrow_map[x])
        mapped = {}
        for p, c in d1.items():
            q = Path(
                a2.quiver.arrow(arrow_map[p.arrows[0]]).source if p.arrows else p.source,
                tuple(arrow_map[w] for w in p.arrows),
            )
            mapped[q] = (p, c)
        if set(mapped) != set(d2.terms):
            return None
        if mode == "support":
            continue
        for q, (p, c1) in mapped.items():
            c2 = d2.terms[q]
            vec: dict[int, int] = {index[x]: -1}
            for w in p.arrows:
                vec[index[w]] = vec.get(index[w], 0) + 1
            ratio = c2 / c1
            constraints.append(({k: e for k, e in vec.items() if e}, ratio))
    if mode == "support":
        return {}

    all_units = all(abs(ratio) == 1 for _, ratio in constraints)
    if mode == "strict" or all_units:
        # For unit ratios, sign projection makes {+-1} solutions complete
        # even in sign-relaxed mode, so GF(2) elimination decides both.
        if not all_units:
            return None
        assign = _solve_signs_gf2(constraints, len(arrows))
        if assign is None:
            return None
        eps = {arrows[k]: Fraction(-1 if assign[k] else 1) for k in range(len(arrows))}
    else:  # non-unit ratios: substitution with bounded sign branching
        solved = _solve_multiplicative(constraints, len(arrows))
        if solved is None:
            return None
        eps = {arrows[k]: solved.get(k, Fraction(1)) for k in range(len(arrows))}

    for vec, ratio in constraints:
        lhs = Fraction(1)
        for k, e in vec.items():
            lhs *= eps[arrows[k]] ** e
        if lhs != ratio:
            return None
    return eps


def _solve_signs_gf2(
    constraints: list[tuple[dict[int, int], Fraction]], nvars: int
) -> list[int] | None:
    """Solve prod_k x_k^{e_k} = +-1 over {+-1} by GF(2) elimination."""
    piv: dict[int, tuple[list[int], int]] = {}
    for vec, ratio in constraints:
        bits = [0] * nvars
        for k, e in vec.items():
            bits[k] = e % 2
        rhs = 0 if ratio == 1 else 1
        for col, (rbits, rrhs) in piv.items():
            if bits[col]:
                bits = [b ^ rb for b, rb in zip(bits, rbits)]
                rhs ^= rrhs
        nz = next((k for k, b in enumerate(bits) if b), None)
        if nz is None:
            if rhs:
                return None
        else:
            piv[nz] = (bits, rhs)
    assign = [0] * nvars
    for col in sorted(piv, reverse=True):
        bits, rhs = piv[col]
        acc = rhs
        for j in range(col + 1, nvars):
            acc ^= assign[j] & bits[j]
        assign[col] = acc
    return assign


def _fraction_root(value: Fraction, n: int) -> Fraction | None:
    if n == 1:
        return value
    if value <= 0 and n % 2 == 0:
        return None
    sign = -1 if value < 0 else 1
    num, den = abs(value.numerator), abs(value.denominator)

    def iroot(k: int) -> int | None:
        r = round(k ** (1.0 / n))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** n == k:
                return cand
        return None

    rn, rd = iroot(num), iroot(den)
    if rn is None or rd is None:
        return None
    return Fraction(sign * rn, rd)


def _solve_multiplicative(
    constraints: list[tuple[dict[int, int], Fraction]],
    nvars: int,
    depth: int | None = None,
) -> dict[int, Fraction] | None:
    """Solve prod_k x_k^{e_k} = r over nonzero rationals.

    Substitution on single-variable rows; if stalled, branch a variable
    of a shortest row over +-1 (differential coefficients are units in
    every pipeline this sees, so the branching factor stays tiny).
    """
    if depth is None:
        depth = 2 * nvars + 4

    def run(solved: dict[int, Fraction], rows, depth: int):
        rows = [({k: e for k, e in vec.items() if e}, val) for vec, val in rows]
        progress = True
        while progress:
            progress = False
            remaining = []
            for vec, val in rows:
                vec = dict(vec)
                for k in list(vec):
                    if k in solved:
                        val = val / (solved[k] ** vec.pop(k))
                if not vec:
                    if val != 1:
                        return None
                    continue
                if len(vec) == 1:
                    k, e = next(iter(vec.items()))
                    root = _fraction_root(val if e > 0 else 1 / val, abs(e))
                    if root is None:
                        return None
                    solved[k] = root
                    progress = True
                else:
                    remaining.append((vec, val))
            rows = remaining
        if not rows:
            return solved
        if depth <= 0:
            return None
        vec, _ = min(rows, key=lambda rv: len(rv[0]))
        k = next(iter(vec))
        for guess in (Fraction(1), Fraction(-1)):
            attempt = run({**solved, k: guess}, rows, depth - 1)
            if attempt is not None:
                return attempt
        return None

    return run({}, constraints, depth)


def iso_check(
    a1: DgQuiverAlgebra, a2: DgQuiverAlgebra, mode: str = "strict"
) -> dict | None:
    """Search a dg isomorphism a1 -> a2 of the requested granularity.

    strict: per-arrow scalars limited to +-1; sign-relaxed: any nonzero
    rational scalars; support: monomial supports of differentials only.
    """
    if mode not in ("strict", "sign-relaxed", "support"):
        raise ReductionError(f"unknown iso mode {mode!r}")
    cap = arrow_cap()
    if len(a1.quiver.arrows) > cap or len(a2.quiver.arrows) > cap:
        raise CapExceeded(
            f"size cap exceeded: {len(a1.quiver.arrows)}/{len(a2.quiver.arrows)} arrows "
            f"vs cap {cap} (set DGONLAB_CAP_ARROWS to raise)"
        )
    q1, q2 = a1.quiver, a2.quiver
    if len(q1.vertices) != len(q2.vertices) or len(q1.arrows) != len(q2.arrows):
        return None
    if sorted(a.degree for a in q1.arrows.values()) != sorted(
        a.degree for a in q2.arrows.values()
    ):
        return None

    inv1 = {v: _vertex_invariant(a1, v) for v in q1.vertices}
    inv2 = {v: _vertex_invariant(a2, v) for v in q2.vertices}
    candidates = {
        v: [u for u in q2.vertices if inv2[u] == inv1[v]] for v in q1.vertices
    }
    order = sorted(q1.vertices, key=lambda v: len(candidates[v]))

    groups1 = _arrow_groups(a1)

    def try_vertex_map(vmap: dict[str, str]) -> dict | None:
        group_pairs = []
        for (src, tgt, deg), ids in sorted(groups1.items()):
            target_ids = [
                aid
                for aid in q2.sorted_arrow_ids()
                if (
                    q2.arrows[aid].source == vmap[src]
                    and q2.arrows[aid].target == vmap[tgt]
                    and q2.arrows[aid].degree == deg
                )
            ]
            if len(target_ids) != len(ids):
                return None
            group_pairs.append((ids, target_ids))

        def arrow_backtrack(k: int, amap: dict[str, str]) -> dict | None:
            if k == len(group_pairs):
                eps = _solve_scalars(a1, a2, amap, mode)
                if eps is None:
                    return None
                return {
                    "vertices": dict(vmap),
                    "arrows": dict(amap),
                    "scalars": {x: str(c) for x, c in eps.items()},
                }
            ids, target_ids = group_pairs[k]
            for perm in itertools.permutations(target_ids):
                for x, y in zip(ids, perm):
                    amap[x] = y
                found = arrow_backtrack(k + 1, amap)
                if found:
                    return found
                for x in ids:
                    amap.pop(x, None)
            return None

        return arrow_backtrack(0, {})

    def vertex_backtrack(k: int, vmap: dict[str, str], used: set) -> dict | None:
        if k == len(order):
            return try_vertex_map(vmap)
        v = order[k]
        for u in candidates[v]:
            if u in used:
                continue
            vmap[v] = u
            found = vertex_backtrack(k + 1, vmap, used | {u})
            if found:
                return found
            del vmap[v]
        return None

    return vertex_backtrack(0, {}, set())


# -- the commutativity verifier ------------------------------------------------


def verify_commute(
    surface: MarkedSurfaceComplex, arc: str, mode: str = "sign-relaxed"
) -> dict:
    """Check that flip and mutation land in the same quasi-iso class.

    gamma1  = Ginzburg of the Oppermann mutation, then reduced;
    gamma2  = Ginzburg of the surface mutation (superfluous pairs removed);
    gamma3  = Ginzburg of the QsP of the flipped surface.
    """
    report: dict = {"arc": arc, "mode": mode, "stages": {}}
    validate(surface)
    quiver, w = build_qsp(surface)
    report["stages"]["qsp"] = {"arrows": len(quiver.arrows), "terms": len(w.terms)}

    gamma1 = mutated_differential(quiver, w, arc)
    report["stages"]["mutation"] = {"arrows": len(gamma1.quiver.arrows)}

    reduced, trace = reduce_to_fixpoint(gamma1)
    report["stages"]["reduction"] = {
        "arrows": len(reduced.quiver.arrows),
        "steps": len(trace),
    }
    report["trace"] = trace.to_json()

    q_prime, w_prime, pairs = surface_mutate(quiver, w, arc)
    gamma2 = ginzburg(q_prime, w_prime)
    report["stages"]["surface_mutation"] = {
        "arrows": len(gamma2.quiver.arrows),
        "superfluous_pairs": [list(p) for p in pairs],
    }

    flipped = flip(surface, arc)
    q_flip, w_flip = build_qsp(flipped)
    gamma3 = ginzburg(q_flip, w_flip)
    report["stages"]["flip"] = {"arrows": len(gamma3.quiver.arrows)}

    iso1 = iso_check(reduced, gamma2, mode)
    iso2 = iso_check(gamma2, gamma3, mode)
    report["iso_reduced_vs_surface_mutation"] = iso1
    report["iso_surface_mutation_vs_flip"] = iso2
    report["pass"] = iso1 is not None and iso2 is not None
    return report
