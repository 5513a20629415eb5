"""Truncated cohomology of non-positive dg quiver algebras and certified
nonzero-class witnesses, over exact rationals."""

from __future__ import annotations

from fractions import Fraction

from .algebra import DgQuiverAlgebra, Path, PathSum, apply_differential
from .errors import AlgebraError

DEFAULT_LENGTH = 8
LENGTH_CAP = 14


def enumerate_paths(
    algebra: DgQuiverAlgebra, min_degree: int, max_length: int
) -> dict[tuple[int, int], list[Path]]:
    """All paths with degree >= min_degree and length <= max_length,
    keyed by (degree, length).  Degrees only decrease along a path, so
    the search prunes on the degree bound."""
    quiver = algebra.quiver
    out: dict[tuple[int, int], list[Path]] = {}
    for v in sorted(quiver.vertices):
        out.setdefault((0, 0), []).append(Path(v, ()))
    frontier: list[tuple[Path, str, int]] = [
        (Path(v, ()), v, 0) for v in sorted(quiver.vertices)
    ]
    for _ in range(max_length):
        nxt = []
        for path, end, deg in frontier:
            for arr in quiver.arrows_from(end):
                ndeg = deg + arr.degree
                if ndeg < min_degree:
                    continue
                npath = Path(path.source, path.arrows + (arr.id,))
                out.setdefault((ndeg, npath.length), []).append(npath)
                nxt.append((npath, arr.target, ndeg))
        frontier = nxt
    return out


def length_homogeneous(algebra: DgQuiverAlgebra) -> bool:
    """True when every differential term has one common length >= 2,
    so d shifts path length uniformly and weights give finite slices."""
    lengths = {
        p.length
        for ps in algebra.differential.values()
        for p in ps.terms
    }
    return len(lengths) <= 1 and all(l >= 2 for l in lengths)


def _kernel_dim(columns: list[PathSum]) -> int:
    return len(columns) - _rank(columns)


def _rank(columns: list[PathSum]) -> int:
    """Rank of sparse PathSum columns by exact Gaussian elimination."""
    pivots: dict[Path, PathSum] = {}
    rank = 0
    for col in columns:
        cur = col
        while not cur.is_zero():
            lead = min(cur.terms)
            if lead in pivots:
                piv = pivots[lead]
                cur = cur - piv.scale(cur.terms[lead] / piv.terms[lead])
            else:
                pivots[lead] = cur
                rank += 1
                break
    return rank


def _window_dim(algebra: DgQuiverAlgebra, k: int, length: int) -> int:
    basis = enumerate_paths(algebra, min_degree=k - 1, max_length=length)
    v_k = [p for ln in range(length + 1) for p in basis.get((k, ln), [])]
    v_prev = [p for ln in range(length) for p in basis.get((k - 1, ln), [])]
    d_cols = [apply_differential(algebra, PathSum.of(p)) for p in v_k]
    ker = len(v_k) - _rank(d_cols)
    image_cols = []
    for p in v_prev:
        dp = apply_differential(algebra, PathSum.of(p))
        if dp.is_zero():
            continue
        if dp.max_length() <= length:
            image_cols.append(dp)
    return ker - _rank(image_cols)


def cohomology_dim(
    algebra: DgQuiverAlgebra, k: int, length: int = DEFAULT_LENGTH
) -> dict:
    """Dimension of H^k on the length window, with an exactness flag.

    For length-homogeneous algebras (d raises length by a constant) the
    window splits into finite weight slices and the reported dimension
    of the truncation is exact; otherwise boundaries reaching past the
    window are dropped and dims at L-1, L, L+1 are reported to show
    stabilization.
    """
    if k > 0:
        raise AlgebraError(f"cohomological degree must be <= 0, got {k}")
    if length > LENGTH_CAP:
        raise AlgebraError(
            f"window too large: length {length} exceeds cap {LENGTH_CAP}"
        )
    for aid, ps in algebra.differential.items():
        if any(not p.arrows for p in ps.terms):
            raise AlgebraError(
                f"differential of {aid!r} leaves the arrow ideal", arrow=aid
            )
    exact = length_homogeneous(algebra)
    dim = _window_dim(algebra, k, length)
    report = {
        "degree": k,
        "length": length,
        "dim": dim,
        "exactness": "exact" if exact else "heuristic",
    }
    if not exact:
        report["stabilization"] = {
            str(L): _window_dim(algebra, k, L)
            for L in (max(length - 1, 0), length, length + 1)
        }
    return report


def _solve(columns: list[PathSum], target: PathSum) -> list[Fraction] | None:
    """Exact solution x with sum x_j columns[j] = target, or None."""
    pivots: list[tuple[Path, PathSum, list[Fraction]]] = []
    reduced_cols: list[tuple[PathSum, list[Fraction]]] = []
    n = len(columns)
    for j, col in enumerate(columns):
        combo = [Fraction(1) if t == j else Fraction(0) for t in range(n)]
        cur = col
        for lead, piv, pcombo in pivots:
            if lead in cur.terms:
                factor = cur.terms[lead] / piv.terms[lead]
                cur = cur - piv.scale(factor)
                combo = [c - factor * pc for c, pc in zip(combo, pcombo)]
        if not cur.is_zero():
            lead = min(cur.terms)
            pivots.append((lead, cur, combo))
    cur = target
    combo = [Fraction(0)] * n
    for lead, piv, pcombo in pivots:
        if lead in cur.terms:
            factor = cur.terms[lead] / piv.terms[lead]
            cur = cur - piv.scale(factor)
            combo = [c - factor * pc for c, pc in zip(combo, pcombo)]
    if not cur.is_zero():
        return None
    return [-c for c in combo]


def verify_nonzero_class(algebra: DgQuiverAlgebra, z: PathSum) -> dict:
    """Certify z as a nonzero cohomology class of a minimal algebra.

    Minimality forces any preimage to be shorter than z, so solvability
    of d(x) = z over the finite short window decides the question: the
    full system solvable means refuted (with the preimage), the length-
    projected system unsolvable means certified, and anything between
    is reported as inconclusive.
    """
    if z.is_zero():
        return {"status": "refuted", "preimage": [], "reason": "z = 0"}
    dz = apply_differential(algebra, z)
    if not dz.is_zero():
        raise AlgebraError("input is not a cocycle: d(z) != 0")
    quiver = algebra.quiver
    degrees = {quiver.path_degree(p) for p in z.terms}
    if len(degrees) != 1:
        raise AlgebraError(f"class must be homogeneous, got degrees {sorted(degrees)}")
    (deg,) = degrees

    minimal = all(
        all(p.length >= 2 for p in ps.terms) for ps in algebra.differential.values()
    )
    if not minimal:
        return {
            "status": "inconclusive",
            "reason": "algebra is not minimal: preimage lengths are unbounded",
        }

    m = z.max_length()
    basis = enumerate_paths(algebra, min_degree=deg - 1, max_length=max(m - 1, 0))
    candidates = [
        p for (dd, ln), paths in sorted(basis.items()) if dd == deg - 1 for p in paths
    ]
    columns = [apply_differential(algebra, PathSum.of(p)) for p in candidates]

    solution = _solve(columns, z)
    if solution is not None:
        preimage = PathSum()
        for c, p in zip(solution, candidates):
            preimage = preimage + PathSum.of(p, c)
        return {
            "status": "refuted",
            "preimage": [
                {"path": list(p.arrows), "coeff": str(c), "source": p.source}
                for p, c in preimage.items()
            ],
        }

    projected = [
        PathSum({p: c for p, c in col.terms.items() if p.length <= m})
        for col in columns
    ]
    if _solve(projected, z) is None:
        return {"status": "certified"}
    return {
        "status": "inconclusive",
        "reason": "projected system solvable but no short preimage exists",
    }
