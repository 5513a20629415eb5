"""Graded path algebras over exact rationals.

Arrows carry non-positive integer degrees.  Paths compose left to right
(the product pq means "traverse p, then q"), coefficients are Fractions,
potentials are stored by a canonical signed-cyclic representative, and
differentials follow the Koszul rule d(pq) = d(p)q + (-1)^|p| p d(q).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .errors import AlgebraError

ONE = Fraction(1)


def parse_coeff(text: str | int) -> Fraction:
    return Fraction(text)


def format_coeff(c: Fraction) -> str:
    return str(c)


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str
    degree: int
    # occurrence endpoints (face-side names) for quivers built from a surface
    source_occ: str | None = None
    target_occ: str | None = None


@dataclass(frozen=True, order=True)
class Path:
    """Composable arrow sequence; arrows=() is the idempotent e_source."""

    source: str
    arrows: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)

    def __repr__(self) -> str:
        return "e(%s)" % self.source if not self.arrows else "*".join(self.arrows)


class GradedQuiver:
    """Vertices, graded arrows, and a (partial) signed opposite-pairing.

    The pairing stores the partner arrow plus a designated-orientation
    flag on exactly one arrow per pair; the forward sign from the
    designated side is +1 and the return sign is -(-1)^{|x||x^op|}.
    Unpaired arrows (Ginzburg loops, reduced algebras) are allowed.
    """

    def __init__(
        self,
        d: int,
        vertices: Iterable[str],
        arrows: Iterable[Arrow] = (),
        op_pairs: Iterable[tuple[str, str]] = (),
    ):
        if d < 3:
            raise AlgebraError(f"d must be >= 3, got {d}", d=d)
        self.d = d
        self.vertices: tuple[str, ...] = tuple(dict.fromkeys(vertices))
        self.arrows: dict[str, Arrow] = {}
        self.op_partner: dict[str, str] = {}
        self.op_designated: set[str] = set()
        for arr in arrows:
            self.add_arrow(arr)
        for designated, partner in op_pairs:
            self.set_pair(designated, partner)

    def add_arrow(self, arr: Arrow) -> None:
        if arr.id in self.arrows:
            raise AlgebraError(f"duplicate arrow id {arr.id!r}", arrow=arr.id)
        if arr.source not in self.vertices or arr.target not in self.vertices:
            raise AlgebraError(
                f"arrow {arr.id!r} has endpoint outside the vertex set", arrow=arr.id
            )
        self.arrows[arr.id] = arr

    def set_pair(self, designated: str, partner: str) -> None:
        a, b = self.arrows[designated], self.arrows[partner]
        if a.source != b.target or a.target != b.source:
            raise AlgebraError(
                f"op pair {designated!r}/{partner!r} is not opposite-directed"
            )
        if a.degree + b.degree != 2 - self.d:
            raise AlgebraError(
                f"op pair {designated!r}/{partner!r} degrees sum to "
                f"{a.degree + b.degree}, expected {2 - self.d}"
            )
        for x in (designated, partner):
            if x in self.op_partner:
                raise AlgebraError(f"arrow {x!r} already paired", arrow=x)
        self.op_partner[designated] = partner
        self.op_partner[partner] = designated
        self.op_designated.add(designated)

    # -- lookups ---------------------------------------------------------

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self.arrows[arrow_id]
        except KeyError:
            raise AlgebraError(f"unknown arrow {arrow_id!r}", arrow=arrow_id) from None

    def degree(self, arrow_id: str) -> int:
        return self.arrow(arrow_id).degree

    def is_loop(self, arrow_id: str) -> bool:
        a = self.arrow(arrow_id)
        return a.source == a.target

    def sorted_arrow_ids(self) -> list[str]:
        return sorted(self.arrows)

    def arrows_from(self, vertex: str) -> list[Arrow]:
        return [self.arrows[i] for i in self.sorted_arrow_ids() if self.arrows[i].source == vertex]

    def arrows_into(self, vertex: str) -> list[Arrow]:
        return [self.arrows[i] for i in self.sorted_arrow_ids() if self.arrows[i].target == vertex]

    def op_arrow(self, arrow_id: str) -> str:
        self.arrow(arrow_id)
        try:
            return self.op_partner[arrow_id]
        except KeyError:
            raise AlgebraError(f"arrow {arrow_id!r} has no op partner", arrow=arrow_id) from None

    def op_sign(self, arrow_id: str) -> Fraction:
        partner = self.op_arrow(arrow_id)
        if arrow_id in self.op_designated:
            return ONE
        prod = self.degree(arrow_id) * self.degree(partner)
        return -ONE * (-1) ** prod

    # -- path helpers -----------------------------------------------------

    def path(self, arrow_ids: Iterable[str], source: str | None = None) -> Path:
        ids = tuple(arrow_ids)
        if not ids:
            if source is None:
                raise AlgebraError("idempotent path needs an explicit vertex")
            if source not in self.vertices:
                raise AlgebraError(f"unknown vertex {source!r}", vertex=source)
            return Path(source, ())
        prev = self.arrow(ids[0])
        for nxt_id in ids[1:]:
            nxt = self.arrow(nxt_id)
            if prev.target != nxt.source:
                raise AlgebraError(
                    f"arrows {prev.id!r} -> {nxt.id!r} not composable "
                    f"({prev.target!r} != {nxt.source!r})"
                )
            prev = nxt
        return Path(self.arrow(ids[0]).source, ids)

    def path_target(self, p: Path) -> str:
        return p.source if not p.arrows else self.arrow(p.arrows[-1]).target

    def path_degree(self, p: Path) -> int:
        return sum(self.degree(a) for a in p.arrows)

    def clone(self) -> "GradedQuiver":
        q = GradedQuiver(self.d, self.vertices)
        q.arrows = dict(self.arrows)
        q.op_partner = dict(self.op_partner)
        q.op_designated = set(self.op_designated)
        return q


def op_apply(quiver: GradedQuiver, arrow_id: str) -> tuple[str, Fraction]:
    """The paper-level x^op: partner arrow and the scalar it carries."""
    return quiver.op_arrow(arrow_id), quiver.op_sign(arrow_id)


def compose(quiver: GradedQuiver, p: Path, q: Path) -> Path:
    if quiver.path_target(p) != q.source:
        raise AlgebraError(
            f"cannot compose: target {quiver.path_target(p)!r} != source {q.source!r}"
        )
    if not p.arrows:
        return q
    if not q.arrows:
        return p
    return Path(p.source, p.arrows + q.arrows)


class PathSum:
    """Finite rational linear combination of paths; zero terms are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Path, Fraction] | None = None):
        self.terms: dict[Path, Fraction] = {}
        if terms:
            for p, c in terms.items():
                if c:
                    self.terms[p] = Fraction(c)

    @classmethod
    def zero(cls) -> "PathSum":
        return cls()

    @classmethod
    def of(cls, path: Path, coeff: Fraction | int = 1) -> "PathSum":
        return cls({path: Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> list[tuple[Path, Fraction]]:
        return sorted(self.terms.items())

    def __iter__(self) -> Iterator[tuple[Path, Fraction]]:
        return iter(self.items())

    def __add__(self, other: "PathSum") -> "PathSum":
        out = dict(self.terms)
        for p, c in other.terms.items():
            nc = out.get(p, Fraction(0)) + c
            if nc:
                out[p] = nc
            else:
                out.pop(p, None)
        return PathSum(out)

    def __neg__(self) -> "PathSum":
        return PathSum({p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "PathSum") -> "PathSum":
        return self + (-other)

    def scale(self, k: Fraction | int) -> "PathSum":
        k = Fraction(k)
        if not k:
            return PathSum()
        return PathSum({p: c * k for p, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PathSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def max_length(self) -> int:
        return max((p.length for p in self.terms), default=0)

    def support(self) -> set[Path]:
        return set(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for p, c in self.items():
            bits.append(f"{'+' if c > 0 else '-'} {abs(c)}*{p!r}")
        return " ".join(bits).lstrip("+ ")


def equal_pathsum(x: PathSum, y: PathSum) -> bool:
    """Exact equality of coefficient maps."""
    return x == y


def mul(quiver: GradedQuiver, x: PathSum, y: PathSum) -> PathSum:
    """Strict product: raises if any term pair fails to compose."""
    out = PathSum()
    for p, cp in x.terms.items():
        for q, cq in y.terms.items():
            out = out + PathSum.of(compose(quiver, p, q), cp * cq)
    return out


# -- potentials ------------------------------------------------------------


def _rotation_sign(quiver: GradedQuiver, word: tuple[str, ...], r: int) -> int:
    """Sign accumulated by rotating phi*p -> p*phi, r single steps."""
    sign = 1
    w = list(word)
    for _ in range(r):
        head, rest = w[0], w[1:]
        sign *= (-1) ** (quiver.degree(head) * sum(quiver.degree(a) for a in rest))
        w = rest + [head]
    return sign


def canonical_cycle(
    quiver: GradedQuiver, path: Path, coeff: Fraction
) -> tuple[Path, Fraction] | None:
    """Canonical signed-cyclic representative; None if the term self-cancels."""
    word = path.arrows
    if not word:
        raise AlgebraError("potential cycles must have positive length")
    if quiver.path_target(path) != path.source:
        raise AlgebraError(f"path {path!r} is not a cycle")
    n = len(word)
    best: tuple[str, ...] | None = None
    best_signs: set[int] = set()
    for r in range(n):
        rotated = word[r:] + word[:r]
        if best is None or rotated < best:
            best = rotated
            best_signs = {_rotation_sign(quiver, word, r)}
        elif rotated == best:
            best_signs.add(_rotation_sign(quiver, word, r))
    assert best is not None
    if len(best_signs) > 1:
        return None  # c = -c forces the term to vanish
    sign = best_signs.pop()
    src = quiver.arrow(best[0]).source
    return Path(src, best), coeff * sign


class Potential:
    """Linear combination of cycles stored by canonical representative."""

    __slots__ = ("terms",)

    def __init__(self):
        self.terms: dict[Path, Fraction] = {}

    @classmethod
    def from_terms(
        cls, quiver: GradedQuiver, terms: Iterable[tuple[Path, Fraction]]
    ) -> "Potential":
        w = cls()
        for path, coeff in terms:
            w.add(quiver, path, coeff)
        return w

    def add(self, quiver: GradedQuiver, path: Path, coeff: Fraction | int) -> None:
        coeff = Fraction(coeff)
        if not coeff:
            return
        canon = canonical_cycle(quiver, path, coeff)
        if canon is None:
            return
        cpath, ccoeff = canon
        nc = self.terms.get(cpath, Fraction(0)) + ccoeff
        if nc:
            self.terms[cpath] = nc
        else:
            self.terms.pop(cpath, None)

    def items(self) -> list[tuple[Path, Fraction]]:
        return sorted(self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Potential) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def homogeneous_degree(self, quiver: GradedQuiver) -> int | None:
        degs = {quiver.path_degree(p) for p in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError(f"potential is inhomogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def __repr__(self) -> str:
        return " + ".join(f"{c}*{p!r}" for p, c in self.items()) or "0"


def cyclic_derivative(quiver: GradedQuiver, w: Potential, arrow_id: str) -> PathSum:
    """d_phi c = sum over decompositions c = p phi q of the signed q p.

    The Koszul sign is (-1)^{|q||p phi|}: the q-block rotates past the
    rest of the cycle before phi is stripped.  For even d this agrees
    with the (-1)^{|p||phi q|} form; for odd d only this variant makes
    the signed 3-cycle sums of d-angulated faces close under d^2 = 0.
    """
    out = PathSum()
    phi_deg = quiver.degree(arrow_id)
    tgt = quiver.arrow(arrow_id).target
    for cycle, coeff in w.items():
        word = cycle.arrows
        for j, a in enumerate(word):
            if a != arrow_id:
                continue
            p, q = word[:j], word[j + 1 :]
            p_deg = sum(quiver.degree(x) for x in p)
            q_deg = sum(quiver.degree(x) for x in q)
            sign = (-1) ** (q_deg * (p_deg + phi_deg))
            out = out + PathSum.of(Path(tgt, q + p), coeff * sign)
    return out


# -- dg quiver algebras -----------------------------------------------------


@dataclass
class DgQuiverAlgebra:
    """Graded quiver plus a degree-+1 differential given on arrows."""

    quiver: GradedQuiver
    differential: dict[str, PathSum] = field(default_factory=dict)
    verified: bool = False

    def d_of(self, arrow_id: str) -> PathSum:
        self.quiver.arrow(arrow_id)
        return self.differential.get(arrow_id, PathSum())

    def clone(self) -> "DgQuiverAlgebra":
        return DgQuiverAlgebra(
            self.quiver.clone(),
            {k: PathSum(dict(v.terms)) for k, v in self.differential.items()},
            self.verified,
        )


def apply_differential(algebra: DgQuiverAlgebra, x: PathSum) -> PathSum:
    """Leibniz extension d(pq) = d(p)q + (-1)^{|p|} p d(q)."""
    quiver = algebra.quiver
    out = PathSum()
    for path, coeff in x.terms.items():
        for j, arrow_id in enumerate(path.arrows):
            da = algebra.d_of(arrow_id)
            if da.is_zero():
                continue
            prefix = path.arrows[:j]
            suffix = path.arrows[j + 1 :]
            sign = (-1) ** sum(quiver.degree(a) for a in prefix)
            for mid, cm in da.terms.items():
                # mid shares endpoints with the replaced arrow, so the
                # spliced word still starts at path.source
                word = prefix + mid.arrows + suffix
                out = out + PathSum.of(Path(path.source, word), coeff * cm * sign)
    return out


def differential_degree_ok(algebra: DgQuiverAlgebra) -> bool:
    q = algebra.quiver
    for a, ps in algebra.differential.items():
        want = q.degree(a) + 1
        for p in ps.terms:
            if q.path_degree(p) != want:
                return False
    return True


def check_d_squared(algebra: DgQuiverAlgebra) -> tuple[str, PathSum] | None:
    """None when d^2 = 0 everywhere, else the first (arrow, d^2 arrow) witness."""
    for arrow_id in algebra.quiver.sorted_arrow_ids():
        dd = apply_differential(algebra, algebra.d_of(arrow_id))
        if not dd.is_zero():
            return arrow_id, dd
    return None


def loop_id(vertex: str) -> str:
    return f"l({vertex})"


def ginzburg(quiver: GradedQuiver, w: Potential, *, verify: bool = True) -> DgQuiverAlgebra:
    """Ginzburg dg algebra: bar quiver with degree-(1-d) loops l_v,
    d(phi) = d_{phi^op} W on arrows and d(l_v) = sum phi phi^op."""
    d = quiver.d
    for a in quiver.arrows.values():
        if not (2 - d <= a.degree <= 0):
            raise AlgebraError(
                f"arrow {a.id!r} degree {a.degree} outside [{2 - d}, 0]", arrow=a.id
            )
    wdeg = w.homogeneous_degree(quiver)
    if wdeg is not None and wdeg != 3 - d:
        raise AlgebraError(f"potential degree {wdeg} != {3 - d}")

    bar = quiver.clone()
    for v in quiver.vertices:
        bar.add_arrow(Arrow(loop_id(v), v, v, 1 - d))

    diff: dict[str, PathSum] = {}
    for arrow_id in quiver.sorted_arrow_ids():
        partner, sign = op_apply(quiver, arrow_id)
        ps = cyclic_derivative(quiver, w, partner).scale(sign)
        if not ps.is_zero():
            diff[arrow_id] = ps
    for v in quiver.vertices:
        total = PathSum()
        for arr in quiver.arrows_from(v):
            partner, sign = op_apply(quiver, arr.id)
            total = total + PathSum.of(Path(v, (arr.id, partner)), sign)
        if not total.is_zero():
            diff[loop_id(v)] = total

    algebra = DgQuiverAlgebra(bar, diff)
    if not differential_degree_ok(algebra):
        raise AlgebraError("differential is not homogeneous of degree +1")
    if verify:
        witness = check_d_squared(algebra)
        if witness is not None:
            raise AlgebraError(
                f"d^2 != 0 at arrow {witness[0]!r}", arrow=witness[0], value=repr(witness[1])
            )
        algebra.verified = True
    return algebra
