"""Mutation of a quiver with superpotential at a vertex, and the surface
variant that removes superfluous arrow pairs.

The decoration operator inserts Delta = 1 - sum_a a^{-1}a at every
interior passage through the mutated vertex whose incoming arrow is not
in A, then rewrites each chunk into an arrow of the mutated quiver:

    a phi        -> the formal composite  [a phi]
    psi a^{-1}   -> -(1/sign) [(a xi)^op]   with xi the op partner of psi
    a phi b^{-1} -> the sandwich composite (loops phi only)

Unmatched chunks raise; they indicate input outside the construction's
domain rather than something to guess at.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    Arrow,
    DgQuiverAlgebra,
    GradedQuiver,
    Path,
    PathSum,
    Potential,
    _rotation_sign,
    check_d_squared,
    differential_degree_ok,
    cyclic_derivative,
    loop_id,
    op_apply,
)
from .errors import MutationError

Token = tuple[str, str]  # ("arr", old arrow) | ("inv", A-arrow) | ("qm", new arrow)


def star_id(alpha: str) -> str:
    return f"{alpha}*"


def comp_id(alpha: str, phi: str) -> str:
    return f"{alpha}{phi}"


def comp_op_id(quiver: GradedQuiver, alpha: str, phi: str) -> str:
    return f"{quiver.op_arrow(phi)}{alpha}^-1"


def sandwich_expr_id(alpha: str, phi: str, beta: str) -> str:
    return f"{alpha}{phi}{beta}^-1"


@dataclass
class MutationContext:
    base: GradedQuiver
    w: Potential
    vertex: str
    a_arrows: list[str]
    mutated: GradedQuiver
    base_diff: dict[str, PathSum]
    kept: set[str] = field(default_factory=set)
    comp_pairs: list[tuple[str, str]] = field(default_factory=list)  # (alpha, phi)
    sandwich_triples: list[tuple[str, str, str]] = field(default_factory=list)

    def chi(self, vertex: str) -> int:
        return 1 if vertex == self.vertex else 0


def mutation_context(quiver: GradedQuiver, w: Potential, vertex: str) -> MutationContext:
    if vertex not in quiver.vertices:
        raise MutationError(f"unknown vertex {vertex!r}", vertex=vertex)
    d = quiver.d
    for arr in quiver.arrows_from(vertex):
        if arr.target == vertex and arr.degree == 0:
            raise MutationError(
                f"vertex {vertex!r} carries a degree-0 loop {arr.id!r}", vertex=vertex
            )
    a_arrows = [a.id for a in quiver.arrows_into(vertex) if a.degree == 0]
    replaced = set(a_arrows) | {quiver.op_arrow(a) for a in a_arrows}

    mutated = GradedQuiver(d, quiver.vertices)
    kept: set[str] = set()
    for aid in quiver.sorted_arrow_ids():
        if aid in replaced:
            continue
        arr = quiver.arrow(aid)
        deg = arr.degree
        if arr.source == vertex:
            deg -= 1
        if arr.target == vertex:
            deg += 1
        mutated.add_arrow(
            Arrow(aid, arr.source, arr.target, deg, arr.source_occ, arr.target_occ)
        )
        kept.add(aid)
    for aid in quiver.sorted_arrow_ids():
        if aid in replaced or aid not in quiver.op_designated:
            continue
        partner = quiver.op_partner[aid]
        if partner in kept:
            mutated.set_pair(aid, partner)

    for alpha in a_arrows:
        a = quiver.arrow(alpha)
        # alpha* runs along alpha^op: vertex -> source of alpha, degree 0;
        # the return orientation (alpha*)^opM carries the designated sign
        mutated.add_arrow(Arrow(star_id(alpha), vertex, a.source, 0))
        mutated.add_arrow(Arrow(star_id(quiver.op_arrow(alpha)), a.source, vertex, 2 - d))
        mutated.set_pair(star_id(quiver.op_arrow(alpha)), star_id(alpha))

    comp_pairs: list[tuple[str, str]] = []
    for alpha in a_arrows:
        a = quiver.arrow(alpha)
        for phi_arr in quiver.arrows_from(vertex):
            phi = phi_arr.id
            if phi in replaced or phi_arr.degree < 3 - d:
                continue
            is_loop = phi_arr.target == vertex
            deg = phi_arr.degree + (1 if is_loop else 0)
            mutated.add_arrow(Arrow(comp_id(alpha, phi), a.source, phi_arr.target, deg))
            mutated.add_arrow(
                Arrow(comp_op_id(quiver, alpha, phi), phi_arr.target, a.source, 2 - d - deg)
            )
            mutated.set_pair(comp_id(alpha, phi), comp_op_id(quiver, alpha, phi))
            comp_pairs.append((alpha, phi))

    sandwich_triples: list[tuple[str, str, str]] = []
    for phi_arr in quiver.arrows_from(vertex):
        phi = phi_arr.id
        if phi_arr.target != vertex or phi in replaced:
            continue
        if phi not in quiver.op_designated:
            continue  # one sandwich pair per loop op-pair
        partner = quiver.op_arrow(phi)
        for alpha, beta in itertools.product(a_arrows, repeat=2):
            sa = quiver.arrow(alpha).source
            sb = quiver.arrow(beta).source
            mutated.add_arrow(
                Arrow(sandwich_expr_id(alpha, phi, beta), sa, sb, phi_arr.degree)
            )
            mutated.add_arrow(
                Arrow(
                    sandwich_expr_id(beta, partner, alpha),
                    sb,
                    sa,
                    2 - d - phi_arr.degree,
                )
            )
            mutated.set_pair(
                sandwich_expr_id(alpha, phi, beta), sandwich_expr_id(beta, partner, alpha)
            )
            sandwich_triples.append((alpha, phi, beta))

    base_diff: dict[str, PathSum] = {}
    for aid in quiver.sorted_arrow_ids():
        partner, sign = op_apply(quiver, aid)
        base_diff[aid] = cyclic_derivative(quiver, w, partner).scale(sign)

    return MutationContext(
        base=quiver,
        w=w,
        vertex=vertex,
        a_arrows=sorted(a_arrows),
        mutated=mutated,
        base_diff=base_diff,
        kept=kept,
        comp_pairs=comp_pairs,
        sandwich_triples=sandwich_triples,
    )


# -- red / slash ---------------------------------------------------------------


def red(x: PathSum, a_arrows: list[str] | set[str]) -> PathSum:
    """Drop every path whose last arrow lies in A."""
    aset = set(a_arrows)
    return PathSum(
        {p: c for p, c in x.terms.items() if not (p.arrows and p.arrows[-1] in aset)}
    )


def slash(x: PathSum, alpha: str) -> PathSum:
    """Keep paths ending with alpha, stripped of that alpha."""
    out = PathSum()
    for p, c in x.terms.items():
        if p.arrows and p.arrows[-1] == alpha:
            out = out + PathSum.of(Path(p.source, p.arrows[:-1]), c)
    return out


# -- token expansion and bracketing --------------------------------------------


def _expand(ctx: MutationContext, tokens: list[Token]) -> list[tuple[Fraction, list[Token]]]:
    """Insert Delta at interior i-visits not preceded by an A-arrow."""
    quiver, i, aset = ctx.base, ctx.vertex, set(ctx.a_arrows)
    spots = []
    for j in range(len(tokens) - 1):
        t, u = tokens[j], tokens[j + 1]
        if t[0] == "arr" and u[0] == "arr":
            if (
                quiver.arrow(t[1]).target == i
                and quiver.arrow(u[1]).source == i
                and t[1] not in aset
            ):
                spots.append(j)
    results: list[tuple[Fraction, list[Token]]] = []
    choices: list[list[str | None]] = [[None, *ctx.a_arrows] for _ in spots]
    for combo in itertools.product(*choices):
        coef = Fraction(1)
        out: list[Token] = []
        k = 0
        for j, tok in enumerate(tokens):
            out.append(tok)
            if k < len(spots) and spots[k] == j:
                alpha = combo[k]
                if alpha is not None:
                    coef *= -1
                    out.append(("inv", alpha))
                    out.append(("arr", alpha))
                k += 1
        results.append((coef, out))
    return results


def _bracket(ctx: MutationContext, tokens: list[Token]) -> tuple[Fraction, Path]:
    """Rewrite an expanded token stream into a path of the mutated quiver."""
    quiver, mut, i = ctx.base, ctx.mutated, ctx.vertex
    aset = set(ctx.a_arrows)
    coef = Fraction(1)
    out: list[str] = []
    empty_vertex: str | None = None
    k = 0

    def fail(msg: str) -> MutationError:
        return MutationError(f"{msg} in token stream {tokens!r}", vertex=i)

    def resolve_sandwich(alpha: str, phi: str, beta: str) -> str:
        sid = sandwich_expr_id(alpha, phi, beta)
        if sid not in mut.arrows:
            raise fail(f"sandwich {sid!r} missing")
        return sid

    while k < len(tokens):
        kind, val = tokens[k]
        if kind == "bar":  # insertion barrier, no content
            k += 1
        elif kind == "qm":
            out.append(val)
            k += 1
        elif kind == "inv":
            # an inverse marker may merge with a frozen loop composite
            if out and out[-1] in mut.arrows:
                prev = out[-1]
                merged = None
                for alpha, phi in ctx.comp_pairs:
                    if comp_id(alpha, phi) == prev and quiver.arrow(phi).target == i:
                        merged = resolve_sandwich(alpha, phi, val)
                        break
                if merged is not None:
                    out[-1] = merged
                    k += 1
                    continue
            raise fail(f"unattached inverse marker {val!r}")
        elif kind == "arr":
            nxt = tokens[k + 1] if k + 1 < len(tokens) else None
            if val in aset:
                if nxt is not None and nxt[0] == "arr" and quiver.arrow(nxt[1]).source == i:
                    phi = nxt[1]
                    third = tokens[k + 2] if k + 2 < len(tokens) else None
                    if (
                        quiver.arrow(phi).target == i
                        and third is not None
                        and third[0] == "inv"
                    ):
                        out.append(resolve_sandwich(val, phi, third[1]))
                        k += 3
                    else:
                        cid = comp_id(val, phi)
                        if cid not in mut.arrows:
                            raise fail(f"composite {cid!r} missing (|phi| < 3-d)")
                        out.append(cid)
                        k += 2
                elif nxt is not None and nxt[0] == "inv":
                    if nxt[1] != val:
                        raise fail(f"chunk {val!r}{nxt[1]!r}^-1 is inexpressible")
                    empty_vertex = quiver.arrow(val).source
                    k += 2
                else:
                    raise fail(f"dangling A-arrow {val!r}")
            else:
                if nxt is not None and nxt[0] == "inv":
                    beta = nxt[1]
                    xi = quiver.op_arrow(val)
                    cid = comp_id(beta, xi)
                    if cid not in mut.arrows:
                        raise fail(f"chunk {val!r}{beta!r}^-1 has no composite")
                    coef *= Fraction(-1) / quiver.op_sign(xi)
                    out.append(comp_op_id(quiver, beta, xi))
                    k += 2
                else:
                    if val not in mut.arrows:
                        raise fail(f"arrow {val!r} was removed by the mutation")
                    out.append(val)
                    k += 1
        else:  # pragma: no cover
            raise fail(f"unknown token kind {kind!r}")

    if not out:
        if empty_vertex is None:
            raise fail("empty token stream")
        return coef, Path(empty_vertex, ())
    return coef, mut.path(out)


def _stream_sum(
    ctx: MutationContext, streams: list[tuple[Fraction, list[Token]]]
) -> PathSum:
    total = PathSum()
    for coeff, tokens in streams:
        for ecoef, expanded in _expand(ctx, tokens):
            bcoef, path = _bracket(ctx, expanded)
            total = total + PathSum.of(path, coeff * ecoef * bcoef)
    return total


def _arr_tokens(path: Path) -> list[Token]:
    return [("arr", a) for a in path.arrows]


def dec(x: PathSum, ctx: MutationContext) -> PathSum:
    """Decoration of a path sum, rewritten over the mutated quiver."""
    return _stream_sum(ctx, [(c, _arr_tokens(p)) for p, c in x.items()])


def dec_cyc(ctx: MutationContext, cycle: Path, coeff: Fraction) -> Potential:
    """Two-case cyclic decoration; the cycle is rotated to avoid ending in A."""
    quiver, i = ctx.base, ctx.vertex
    aset = set(ctx.a_arrows)
    word = cycle.arrows
    n = len(word)
    candidates = [r for r in range(n) if word[(r - 1) % n] not in aset]
    if not candidates:
        raise MutationError(f"cycle {cycle!r} consists of A-arrows only", vertex=i)

    def rotated(r: int) -> tuple[str, ...]:
        return word[r:] + word[:r]

    case1 = [r for r in candidates if quiver.arrow(word[r]).source != i]
    pool = case1 if case1 else candidates
    r = min(pool, key=rotated)
    sign = _rotation_sign(quiver, word, r)
    w = rotated(r)
    eff = coeff * sign
    src = quiver.arrow(w[0]).source

    out = Potential()
    if src != i:
        for bcoef, path in _collect(ctx, [("arr", a) for a in w]):
            out.add(ctx.mutated, path, eff * bcoef)
    else:
        # (-1)^d dec c  -  sum_alpha alpha (dec c) alpha^{-1}
        for bcoef, path in _collect(ctx, [("arr", a) for a in w]):
            out.add(ctx.mutated, path, eff * bcoef * (-1) ** quiver.d)
        for alpha in ctx.a_arrows:
            tokens = [("arr", alpha), *[("arr", a) for a in w], ("inv", alpha)]
            for bcoef, path in _collect(ctx, tokens):
                out.add(ctx.mutated, path, -eff * bcoef)
    return out


def _collect(ctx: MutationContext, tokens: list[Token]) -> list[tuple[Fraction, Path]]:
    out = []
    for ecoef, expanded in _expand(ctx, tokens):
        bcoef, path = _bracket(ctx, expanded)
        out.append((ecoef * bcoef, path))
    return out


# -- the mutated superpotential -------------------------------------------------


def _part_two_streams(ctx: MutationContext, with_star: bool, only_alpha: str | None = None):
    """Streams for sum_{alpha,phi} alpha dec(phi phi^opM) [alpha*].

    The phi phi^op coefficient is the base pairing sign corrected by
    (-1)^{|phi|(d+1)}.  When phi is a loop, dec sees an interior visit;
    its undecorated branch must carry the antisymmetric pairing sign
    (+1 designated, -1 otherwise) instead, so that branch is emitted
    separately behind a no-insertion barrier.  This is the unique local
    completion under which d^2 = 0 survives mutation on the corpus.
    """
    quiver, i = ctx.base, ctx.vertex
    d = quiver.d
    streams: list[tuple[Fraction, list[Token]]] = []
    for alpha in ctx.a_arrows:
        if only_alpha is not None and alpha != only_alpha:
            continue
        for phi_arr in quiver.arrows_from(i):
            phi = phi_arr.id
            if phi not in ctx.kept or phi_arr.degree < 3 - d:
                continue
            partner = quiver.op_arrow(phi)
            base = quiver.op_sign(phi) * (-1) ** (phi_arr.degree * (d + 1))
            star: list[Token] = [("qm", star_id(alpha))] if with_star else []
            if phi_arr.target != i:
                streams.append(
                    (base, [("arr", alpha), ("arr", phi), ("arr", partner), *star])
                )
                continue
            tau = Fraction(1) if phi in quiver.op_designated else Fraction(-1)
            streams.append(
                (
                    tau * (-1) ** (phi_arr.degree * (d + 1)),
                    [("arr", alpha), ("arr", phi), ("bar", ""), ("arr", partner), *star],
                )
            )
            for other in ctx.a_arrows:
                streams.append(
                    (
                        -base,
                        [
                            ("arr", alpha),
                            ("arr", phi),
                            ("inv", other),
                            ("arr", other),
                            ("arr", partner),
                            *star,
                        ],
                    )
                )
    return streams


def mutate_qsp(
    quiver: GradedQuiver, w: Potential, vertex: str
) -> tuple[GradedQuiver, Potential]:
    ctx = mutation_context(quiver, w, vertex)
    return ctx.mutated, mutated_potential(ctx)


def mutated_potential(ctx: MutationContext) -> Potential:
    out = Potential()
    for cycle, coeff in ctx.w.items():
        part = dec_cyc(ctx, cycle, coeff)
        for p, c in part.items():
            out.add(ctx.mutated, p, c)
    for coeff, tokens in _part_two_streams(ctx, with_star=True):
        for bcoef, path in _collect(ctx, tokens):
            out.add(ctx.mutated, path, coeff * bcoef)
    deg = out.homogeneous_degree(ctx.mutated)
    if deg is not None and deg != 3 - ctx.base.d:
        raise MutationError(
            f"mutated superpotential has degree {deg}, expected {3 - ctx.base.d}"
        )
    return out


# -- the mutated differential (six formulas) ------------------------------------


def _kept_diff_streams(ctx: MutationContext, phi: str) -> list[tuple[Fraction, list[Token]]]:
    """Streams computing d_M(phi) for a kept arrow."""
    quiver, i = ctx.base, ctx.vertex
    dphi = red(ctx.base_diff[phi], ctx.a_arrows)
    if quiver.arrow(phi).source != i:
        return [(c, _arr_tokens(p)) for p, c in dphi.items()]
    streams: list[tuple[Fraction, list[Token]]] = [
        (-c, _arr_tokens(p)) for p, c in dphi.items()
    ]
    for alpha in ctx.a_arrows:
        streams.append(
            (Fraction(1), [("qm", star_id(alpha)), ("qm", comp_id(alpha, phi))])
        )
    return streams


def _sandwich_formula_streams(
    ctx: MutationContext, alpha: str, phi: str, beta: str
) -> list[tuple[Fraction, list[Token]]]:
    """d_M(alpha phi beta^{-1}) for a loop phi at the vertex."""
    streams: list[tuple[Fraction, list[Token]]] = []
    dphi = ctx.base_diff[phi]
    for p, c in red(dphi, ctx.a_arrows).items():
        streams.append((c, [("arr", alpha), *_arr_tokens(p), ("inv", beta)]))
    comp_deg = ctx.mutated.degree(comp_id(alpha, phi))
    streams.append(
        (
            Fraction((-1) ** comp_deg),
            [("qm", comp_id(alpha, phi)), ("qm", star_id(beta))],
        )
    )
    for p, c in slash(dphi, beta).items():
        streams.append((-c, [("arr", alpha), *_arr_tokens(p)]))
    return streams


def mutated_differential(
    quiver: GradedQuiver, w: Potential, vertex: str, *, verify: bool = True
) -> DgQuiverAlgebra:
    """Ginzburg algebra of the mutated QsP (cyclic derivatives of W_M).

    The displayed red/dec/slash formulas for the same differential are
    kept in mutated_differential_formulas; the two routes agree exactly
    on monomial supports, and on coefficients up to the fuzzy-sign
    convention the source text computes with.
    """
    from .algebra import ginzburg as _ginzburg

    ctx = mutation_context(quiver, w, vertex)
    wm = mutated_potential(ctx)
    return _ginzburg(ctx.mutated, wm, verify=verify)


def mutated_differential_formulas(
    quiver: GradedQuiver, w: Potential, vertex: str
) -> DgQuiverAlgebra:
    """The six displayed formulas (dec(red(d phi)) etc.), unverified."""
    ctx = mutation_context(quiver, w, vertex)
    return _mutated_differential(ctx, verify=False)


def _mutated_differential(ctx: MutationContext, *, verify: bool = True) -> DgQuiverAlgebra:
    base, mut, i = ctx.base, ctx.mutated, ctx.vertex
    d = base.d
    bar = mut.clone()
    for v in mut.vertices:
        bar.add_arrow(Arrow(loop_id(v), v, v, 1 - d))

    diff: dict[str, PathSum] = {}

    for phi in sorted(ctx.kept):
        diff[phi] = _stream_sum(ctx, _kept_diff_streams(ctx, phi))

    for alpha in ctx.a_arrows:
        diff[star_id(alpha)] = PathSum()
        streams = _part_two_streams(ctx, with_star=False, only_alpha=alpha)
        diff[star_id(base.op_arrow(alpha))] = _stream_sum(ctx, streams)

    for alpha, phi in ctx.comp_pairs:
        dphi = red(ctx.base_diff[phi], ctx.a_arrows)
        streams = [(c, [("arr", alpha), *_arr_tokens(p)]) for p, c in dphi.items()]
        diff[comp_id(alpha, phi)] = _stream_sum(ctx, streams)

        # d_M(psi alpha^{-1}) with psi = phi^op, then rescale to the stored op arrow
        psi = base.op_arrow(phi)
        psi_arr = base.arrow(psi)
        streams = []
        for c, toks in _kept_diff_streams(ctx, psi):
            streams.append((c, [*toks, ("inv", alpha)]))
        streams.append(
            (
                Fraction((-1) ** mut.degree(psi)),
                [("arr", psi), ("qm", star_id(alpha))],
            )
        )
        chi = ctx.chi(psi_arr.source)
        for p, c in slash(ctx.base_diff[psi], alpha).items():
            streams.append((-c * (-1) ** chi, _arr_tokens(p)))
        value = _stream_sum(ctx, streams)
        diff[comp_op_id(base, alpha, phi)] = value.scale(-base.op_sign(phi))

    for alpha, phi, beta in ctx.sandwich_triples:
        diff[sandwich_expr_id(alpha, phi, beta)] = _stream_sum(
            ctx, _sandwich_formula_streams(ctx, alpha, phi, beta)
        )
        partner = base.op_arrow(phi)
        value = _stream_sum(ctx, _sandwich_formula_streams(ctx, beta, partner, alpha))
        diff[sandwich_expr_id(beta, partner, alpha)] = value.scale(base.op_sign(phi))

    for v in mut.vertices:
        total = PathSum()
        for arr in mut.arrows_from(v):
            partner, sign = op_apply(mut, arr.id)
            total = total + PathSum.of(Path(v, (arr.id, partner)), sign)
        diff[loop_id(v)] = total

    algebra = DgQuiverAlgebra(bar, {k: v for k, v in diff.items() if not v.is_zero()})
    if not differential_degree_ok(algebra):
        raise MutationError("mutated differential is not homogeneous of degree +1")
    if verify:
        witness = check_d_squared(algebra)
        if witness is not None:
            raise MutationError(
                f"mutated differential fails d^2 = 0 at {witness[0]!r}",
                arrow=witness[0],
                value=repr(witness[1]),
            )
        algebra.verified = True
    return algebra


# -- superfluous pairs and surface mutation -------------------------------------


def _arrow_by_occ(quiver: GradedQuiver) -> dict[tuple[str, str], str]:
    out = {}
    for aid in quiver.sorted_arrow_ids():
        a = quiver.arrow(aid)
        if a.source_occ and a.target_occ:
            out[(a.source_occ, a.target_occ)] = aid
    return out


def superfluous_pairs(ctx: MutationContext) -> list[tuple[str, str]]:
    """Op-pairs removed by the surface mutation, as (arrow, partner) tuples."""
    base, mut, i = ctx.base, ctx.mutated, ctx.vertex
    by_occ = _arrow_by_occ(base)
    occs = sorted({o for (s, t) in by_occ for o in (s, t)})

    def present(aid: str | None) -> bool:
        return aid is not None and aid in mut.arrows

    removal: list[tuple[str, str]] = []
    seen: set[str] = set()

    def add_pair(aid: str) -> None:
        partner = mut.op_arrow(aid)
        if aid in seen or partner in seen:
            return
        seen.update({aid, partner})
        first, second = sorted((aid, partner))
        removal.append((first, second))

    for alpha in ctx.a_arrows:
        a = base.arrow(alpha)
        k_occ, i_side = a.source_occ, a.target_occ
        if k_occ is None or i_side is None:
            raise MutationError(
                "superfluous-pair tables need a surface-built quiver", arrow=alpha
            )
        other_sides = sorted(
            {o for o in occs if o != i_side and ctx_occ_arc(base, o) == i}
        )
        other = other_sides[0] if other_sides else None

        # (alpha a_{i+ j}, a_{k j}): composites parallel to an existing arrow
        for j in occs:
            phi = by_occ.get((i_side, j))
            kj = by_occ.get((k_occ, j))
            if phi is None or kj is None:
                continue
            comp = comp_id(alpha, phi)
            if present(comp) and present(kj):
                add_pair(comp)
                add_pair(kj)

        if other is None:
            continue
        loop = by_occ.get((i_side, other))
        back = by_occ.get((other, k_occ))
        # (alpha phi alpha^{-1}, a_{k i-} alpha^{-1})
        if loop is not None and back is not None:
            sand = sandwich_expr_id(alpha, loop, alpha)
            comp = comp_id(alpha, back)
            if present(sand) and present(comp):
                add_pair(sand)
                add_pair(comp)
        # |A| = 2 cross pairs (alpha phi beta^{-1}, a_{k i-} beta^{-1})
        for beta in ctx.a_arrows:
            if beta == alpha:
                continue
            if base.arrow(beta).target_occ != other:
                continue
            if loop is not None and back is not None:
                sand = sandwich_expr_id(alpha, loop, beta)
                comp = comp_id(beta, back)
                if present(sand) and present(comp):
                    add_pair(sand)
                    add_pair(comp)
    return sorted(removal)


def ctx_occ_arc(quiver: GradedQuiver, occ: str) -> str:
    """Arc label of an occurrence name like '1+'."""
    return occ[:-1]


def surface_mutate(
    quiver: GradedQuiver, w: Potential, vertex: str
) -> tuple[GradedQuiver, Potential, list[tuple[str, str]]]:
    """Oppermann mutation followed by superfluous-pair removal."""
    ctx = mutation_context(quiver, w, vertex)
    wm = mutated_potential(ctx)
    pairs = superfluous_pairs(ctx)
    removed = {aid for pair in pairs for aid in pair}

    mut = ctx.mutated
    pruned = GradedQuiver(mut.d, mut.vertices)
    for aid in mut.sorted_arrow_ids():
        if aid not in removed:
            pruned.add_arrow(mut.arrow(aid))
    for aid in mut.sorted_arrow_ids():
        if aid in removed or aid not in mut.op_designated:
            continue
        partner = mut.op_partner[aid]
        if partner in pruned.arrows:
            pruned.set_pair(aid, partner)

    w_out = Potential()
    for path, coeff in wm.items():
        if any(a in removed for a in path.arrows):
            continue
        w_out.add(pruned, path, coeff)
    return pruned, w_out, pairs
