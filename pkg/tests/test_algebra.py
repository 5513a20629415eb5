from __future__ import annotations

import random
from fractions import Fraction

import pytest

from dgonlab import corpus
from dgonlab.algebra import (
    Arrow,
    GradedQuiver,
    Path,
    PathSum,
    Potential,
    apply_differential,
    check_d_squared,
    compose,
    cyclic_derivative,
    equal_pathsum,
    ginzburg,
    mul,
    op_apply,
)
from dgonlab.errors import AlgebraError
from conftest import random_cycle, random_path, random_pathsum


def simple_quiver():
    q = GradedQuiver(3, ["1", "2", "3"])
    q.add_arrow(Arrow("a", "1", "2", 0))
    q.add_arrow(Arrow("b", "2", "3", 0))
    q.add_arrow(Arrow("c", "3", "1", 0))
    return q


def test_compose_basic():
    q = simple_quiver()
    p = compose(q, q.path(["a"]), q.path(["b"]))
    assert p == Path("1", ("a", "b"))
    assert compose(q, Path("1", ()), q.path(["a"])) == q.path(["a"])


def test_compose_endpoint_mismatch():
    q = simple_quiver()
    with pytest.raises(AlgebraError, match="compose"):
        compose(q, q.path(["b"]), q.path(["a"]))


def test_pent5_op_signs(qsp_cache):
    quiver, _ = qsp_cache["FIX-PENT5"]
    a, b = "a(1+,1-)", "a(1-,1+)"
    assert op_apply(quiver, a) == (b, Fraction(1))
    assert op_apply(quiver, b) == (a, Fraction(-1))
    # double application returns -(-1)^{|a||b|} times the original
    partner, s1 = op_apply(quiver, a)
    back, s2 = op_apply(quiver, partner)
    assert back == a and s1 * s2 == Fraction(-1)


def test_op_double_application_scalar_everywhere(qsp_cache):
    for name, (quiver, _) in qsp_cache.items():
        for aid in quiver.sorted_arrow_ids():
            partner, s1 = op_apply(quiver, aid)
            back, s2 = op_apply(quiver, partner)
            assert back == aid
            expected = -Fraction(-1) ** (quiver.degree(aid) * quiver.degree(partner))
            assert s1 * s2 == expected


def test_cyclic_derivative_degree_zero_cycle():
    q = simple_quiver()
    w = Potential()
    w.add(q, q.path(["a", "b", "c"]), 1)
    assert cyclic_derivative(q, w, "a") == PathSum.of(Path("2", ("b", "c")))


def test_cyclic_derivative_worked_example(qsp_cache):
    quiver, w = qsp_cache["FIX-A3"]
    ps = cyclic_derivative(quiver, w, "a(2+,3+)")
    (path, coeff) = next(iter(ps.items()))
    assert path.arrows == ("a(3+,1+)", "a(1+,2+)")
    assert abs(coeff) == 1


def rotation_oracle(quiver, w: Potential, arrow_id: str) -> PathSum:
    """Independent oracle: signed rotations that end with the arrow,
    stripped of that final arrow."""
    out = PathSum()
    for cycle, coeff in w.items():
        word = cycle.arrows
        n = len(word)
        for r in range(n):
            rotated = word[r:] + word[:r]
            if rotated[-1] != arrow_id:
                continue
            sign = 1
            work = list(word)
            for _ in range(r):
                head, rest = work[0], work[1:]
                sign *= (-1) ** (
                    quiver.degree(head) * sum(quiver.degree(x) for x in rest)
                )
                work = rest + [head]
            remainder = rotated[:-1]
            src = quiver.arrow(arrow_id).target
            out = out + PathSum.of(Path(src, remainder), coeff * sign)
    return out


def test_cyclic_derivative_against_rotation_oracle(qsp_cache):
    rng = random.Random(7)
    checked = 0
    for name in ("FIX-ANN4", "FIX-SELF4", "FIX-DISK4"):
        quiver, _ = qsp_cache[name]
        for _ in range(400):
            cycle = random_cycle(rng, quiver)
            if cycle is None:
                continue
            w = Potential()
            w.add(quiver, cycle, rng.choice([1, -1, 2]))
            if w.is_zero():
                continue
            arrow = rng.choice(sorted(quiver.arrows))
            assert cyclic_derivative(quiver, w, arrow) == rotation_oracle(
                quiver, w, arrow
            )
            checked += 1
    assert checked >= 1000


def test_cycle_with_repeated_arrow_two_terms(qsp_cache):
    quiver, _ = qsp_cache["FIX-PENT5"]
    # a a b contains a twice and does not self-cancel under rotation
    cycle = quiver.path(["a(1+,1-)", "a(1+,1-)", "a(1-,1+)"])
    w = Potential()
    w.add(quiver, cycle, 1)
    ps = cyclic_derivative(quiver, w, "a(1+,1-)")
    assert ps == rotation_oracle(quiver, w, "a(1+,1-)")
    assert len(ps.terms) == 2


def test_self_cancelling_cycle_is_dropped(qsp_cache):
    quiver, _ = qsp_cache["FIX-PENT5"]
    # (ab)^2 maps to itself under rotation by two with sign -1
    cycle = quiver.path(["a(1+,1-)", "a(1-,1+)", "a(1+,1-)", "a(1-,1+)"])
    w = Potential()
    w.add(quiver, cycle, 1)
    assert w.is_zero()


def test_potential_rotation_sign_property(qsp_cache):
    rng = random.Random(11)
    checked = 0
    quivers = [qsp_cache[n][0] for n in ("FIX-ANN4", "FIX-SELF4", "FIX-DISK4")]
    while checked < 1000:
        quiver = rng.choice(quivers)
        cycle = random_cycle(rng, quiver)
        if cycle is None:
            continue
        canon = Potential()
        canon.add(quiver, cycle, 1)
        r = rng.randrange(len(cycle.arrows))
        word = cycle.arrows
        sign = 1
        work = list(word)
        for _ in range(r):
            head, rest = work[0], work[1:]
            sign *= (-1) ** (quiver.degree(head) * sum(quiver.degree(x) for x in rest))
            work = rest + [head]
        rotated = Potential()
        src = quiver.arrow(work[0]).source if work else cycle.source
        rotated.add(quiver, Path(src, tuple(work)), Fraction(sign))
        assert rotated == canon
        checked += 1


def test_ginzburg_pent5_matches_worked_example(qsp_cache):
    quiver, w = qsp_cache["FIX-PENT5"]
    algebra = ginzburg(quiver, w)
    degrees = sorted(
        (algebra.quiver.degree(a), a) for a in algebra.quiver.sorted_arrow_ids()
    )
    assert [d for d, _ in degrees] == [-4, -2, -1]
    assert all(algebra.quiver.is_loop(a) for _, a in degrees)
    dt = algebra.d_of("l(1)")
    ab = PathSum.of(Path("1", ("a(1+,1-)", "a(1-,1+)")))
    ba = PathSum.of(Path("1", ("a(1-,1+)", "a(1+,1-)")))
    assert equal_pathsum(dt, ab - ba)
    assert algebra.d_of("a(1+,1-)").is_zero()
    assert algebra.d_of("a(1-,1+)").is_zero()


def test_ginzburg_a3_differentials(qsp_cache):
    quiver, w = qsp_cache["FIX-A3"]
    algebra = ginzburg(quiver, w)
    d = algebra.d_of("a(2+,1+)")  # degree -1 arrow 2 -> 1
    assert d.support() == {Path("2", ("a(2+,3+)", "a(3+,1+)"))}
    assert check_d_squared(algebra) is None


def test_ginzburg_empty_surface():
    from dgonlab.corpus import disk_without_arcs
    from dgonlab.qsp import build_qsp
    from dgonlab.surface import surface_from_json

    quiver, w = build_qsp(surface_from_json(disk_without_arcs(4)))
    algebra = ginzburg(quiver, w)
    assert not algebra.quiver.vertices and not algebra.quiver.arrows


def test_apply_differential_leibniz_property(qsp_cache):
    rng = random.Random(23)
    algebras = []
    for name in ("FIX-ANN4", "FIX-SELF4", "FIX-A3"):
        quiver, w = qsp_cache[name]
        algebras.append(ginzburg(quiver, w))
    checked = 0
    while checked < 1000:
        algebra = rng.choice(algebras)
        quiver = algebra.quiver
        p = random_path(rng, quiver, 3)
        outs = quiver.arrows_from(quiver.path_target(p))
        if not outs:
            continue
        q_path = random_path(rng, quiver, 3)
        if quiver.path_target(p) != q_path.source:
            continue
        x, y = PathSum.of(p), PathSum.of(q_path)
        left = apply_differential(algebra, mul(quiver, x, y))
        sign = (-1) ** quiver.path_degree(p)
        right = mul(quiver, apply_differential(algebra, x), y) + mul(
            quiver, x, apply_differential(algebra, y)
        ).scale(sign)
        assert equal_pathsum(left, right)
        checked += 1


def test_d_squared_on_random_elements(qsp_cache):
    rng = random.Random(37)
    quiver, w = qsp_cache["FIX-SELF4"]
    algebra = ginzburg(quiver, w)
    for _ in range(200):
        x = random_pathsum(rng, algebra.quiver)
        assert apply_differential(algebra, apply_differential(algebra, x)).is_zero()


def test_d_of_idempotent_is_zero(qsp_cache):
    quiver, w = qsp_cache["FIX-A3"]
    algebra = ginzburg(quiver, w)
    assert apply_differential(algebra, PathSum.of(Path("1", ()))).is_zero()


def test_equal_pathsum_and_rotation_distinction(qsp_cache):
    quiver, _ = qsp_cache["FIX-PENT5"]
    ab = PathSum.of(quiver.path(["a(1+,1-)", "a(1-,1+)"]))
    ba = PathSum.of(quiver.path(["a(1-,1+)", "a(1+,1-)"]))
    assert equal_pathsum(ab - ab, PathSum())
    assert not equal_pathsum(ab, ba)  # rotation equality lives in Potential only


def test_differential_never_produces_idempotents(qsp_cache):
    for name, (quiver, w) in qsp_cache.items():
        algebra = ginzburg(quiver, w)
        for ps in algebra.differential.values():
            assert all(p.arrows for p in ps.terms)
