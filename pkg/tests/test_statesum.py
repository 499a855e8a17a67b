"""State-sum weights and invariants against closed forms and independent oracles."""

import math
import random
from fractions import Fraction
from itertools import combinations

import pytest

from quantum3.complex3 import (
    Coloring,
    Triangulation,
    disjoint_union,
    enumerate_admissible,
    is_admissible,
    load_asset,
    normal_surface_euler_parity,
    split_coloring,
)
from quantum3.cyclo import CycloNum
from quantum3.statesum import (
    StateSumResult,
    _tet_weight,
    coloring_weight,
    tv,
    tv_prime,
    weight_edge,
    weight_face,
    weight_tet,
)


def boundary_4_simplex() -> Triangulation:
    return Triangulation(list(combinations(range(5), 4)))


def qint(n: int, r: int, s: int = 1) -> float:
    """Float oracle for the quantum integer [n] at q^(1/2) = e^(i*pi*s/r)."""
    return math.sin(math.pi * n * s / r) / math.sin(math.pi * s / r)


def qfact(n: int, r: int, s: int = 1) -> float:
    out = 1.0
    for m in range(1, n + 1):
        out *= qint(m, r, s)
    return out


def racah_sum(i: int, j: int, k: int, l: int, m: int, n: int, r: int, s: int = 1) -> float:
    """Independent float oracle for the tetrahedron weight: alternating sum
    over z of [z+1]! / (prod [z-T_a]! * prod [Q_b-z]!) with T_a the face
    half-sums and Q_b the opposite-pair half-sums."""
    halves = [
        (i + j + k) // 2,
        (i + m + n) // 2,
        (j + l + n) // 2,
        (k + l + m) // 2,
    ]
    quads = [
        (i + j + l + m) // 2,
        (i + k + l + n) // 2,
        (j + k + m + n) // 2,
    ]
    out = 0.0
    for z in range(max(halves), min(min(quads), r - 2) + 1):
        term = (-1) ** z * qfact(z + 1, r, s)
        for t_a in halves:
            term /= qfact(z - t_a, r, s)
        for q_b in quads:
            term /= qfact(q_b - z, r, s)
        out += term
    return out


def test_edge_weight_closed_forms():
    c = Coloring(5, (0, 1, 3))
    assert weight_edge(c, 0) == CycloNum.one(5)
    got = weight_edge(c, 1).evaluate(1)
    assert abs(got - (-2 * math.cos(math.pi / 5))) < 1e-12
    # (-1)^3 [4] and [4] = [1] at r = 5, so the weight is -1.
    assert abs(weight_edge(c, 2).evaluate(1) - (-1)) < 1e-12


def test_face_weight_examples():
    c3 = Coloring(3, (1, 1, 0))
    assert abs(weight_face(c3, (0, 1, 2)).evaluate(1) - (-1)) < 1e-12
    c5 = Coloring(5, (2, 2, 2))
    expected = -1.0 / (qint(2, 5) * qint(3, 5) * qint(4, 5))
    assert abs(weight_face(c5, (0, 1, 2)).evaluate(1) - expected) < 1e-12


def test_face_weight_rejects_inadmissible():
    c = Coloring(5, (1, 1, 1))
    with pytest.raises(ValueError):
        weight_face(c, (0, 1, 2))


def test_tet_weight_all_zero_is_one():
    assert _tet_weight(0, 0, 0, 0, 0, 0, 7) == CycloNum.one(7)


def test_tet_weight_single_term_collapse():
    # (1,1,2,1,1,2): all four faces are (1,1,2); z ranges over {2} only
    # at r = 4, so the weight is the single term [3]! = [2].
    got = _tet_weight(1, 1, 2, 1, 1, 2, 4).evaluate(1)
    assert abs(got - qint(2, 4)) < 1e-12
    assert abs(got - racah_sum(1, 1, 2, 1, 1, 2, 4)) < 1e-12


def test_tet_weight_rejects_inadmissible_faces():
    # Faces (1,1,1) fail the parity condition, so the formula's factorial
    # arguments would not even be integers.
    with pytest.raises(ValueError):
        _tet_weight(1, 1, 1, 1, 1, 1, 4)


def test_tet_weight_matches_racah_oracle():
    rng = random.Random(20260815)
    r = 7
    found = 0
    while found < 25:
        tup = tuple(rng.randrange(r - 1) for _ in range(6))
        i, j, k, l, m, n = tup
        try:
            w = _tet_weight(i, j, k, l, m, n, r)
        except ValueError:
            continue
        found += 1
        for s in (1, 2, 3):
            assert abs(w.evaluate(s) - racah_sum(*tup, r, s)) < 1e-9


def test_tet_weight_multi_term_sum():
    # (2,2,2,2,2,2) at r = 7 sums over z in {3, 4}: a genuine alternating
    # two-term case.
    got = _tet_weight(2, 2, 2, 2, 2, 2, 7).evaluate(1)
    assert abs(got - racah_sum(2, 2, 2, 2, 2, 2, 7)) < 1e-12


def test_tet_weight_symmetry_group():
    # The weight is invariant under permuting the three opposite pairs and
    # under swapping the two edges of an even number of pairs.
    rng = random.Random(11)
    r = 7
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    flipsets = [(), (0, 1), (0, 2), (1, 2)]
    found = 0
    while found < 15:
        tup = tuple(rng.randrange(r - 1) for _ in range(6))
        try:
            base = _tet_weight(*tup, r)
        except ValueError:
            continue
        found += 1
        upper, lower = tup[:3], tup[3:]
        for perm in perms:
            for flips in flipsets:
                new_upper = tuple(
                    lower[perm[p]] if p in flips else upper[perm[p]] for p in range(3)
                )
                new_lower = tuple(
                    upper[perm[p]] if p in flips else lower[perm[p]] for p in range(3)
                )
                assert _tet_weight(*(new_upper + new_lower), r) == base


def test_weight_level_mismatch_raises():
    c = Coloring(5, (0, 0, 0))
    with pytest.raises(ValueError):
        weight_edge(c, 0, r=7)
    with pytest.raises(ValueError):
        weight_face(c, (0, 1, 2), r=7)
    with pytest.raises(ValueError):
        weight_tet(c, (0, 1, 2, 0, 1, 2), r=7)


def test_memoized_tet_weight_matches_unmemoized():
    raw = _tet_weight.__wrapped__
    rng = random.Random(3)
    for _ in range(50):
        tup = tuple(rng.randrange(4) for _ in range(6))
        try:
            expected = raw(*tup, 5)
        except ValueError:
            with pytest.raises(ValueError):
                _tet_weight(*tup, 5)
            continue
        assert _tet_weight(*tup, 5) == expected


def test_tv_matches_enumeration():
    t = boundary_4_simplex()
    for r, s in ((3, 1), (4, 1), (5, 2)):
        total = 0j
        count = 0
        for c in enumerate_admissible(t, r):
            total += coloring_weight(t, c).evaluate(s)
            count += 1
        # (q^(1/2) - q^(-1/2))^2 / (-2r) = 2 sin^2(pi s / r) / r
        pre = (2 * math.sin(math.pi * s / r) ** 2 / r) ** t.vertex_count
        got = tv(t, r, s)
        assert got.coloring_count == count
        assert abs(got.value - (pre * total).real) < 1e-10


def test_tv_prime_matches_even_enumeration():
    t = boundary_4_simplex()
    r, s = 5, 2
    total = 0j
    count = 0
    for c in enumerate_admissible(t, r, even_only=True):
        total += coloring_weight(t, c).evaluate(s)
        count += 1
    pre = (4 * math.sin(math.pi * s / r) ** 2 / r) ** t.vertex_count
    got = tv_prime(t, r, s)
    assert got.coloring_count == count
    assert abs(got.value - (pre * total).real) < 1e-12


def test_sphere_closed_form_all_s():
    t = boundary_4_simplex()
    for r in (3, 4, 5, 6, 7):
        for s in range(1, r):
            if math.gcd(s, r) != 1:
                continue
            expected = (2 / r) * math.sin(math.pi * s / r) ** 2
            assert abs(tv(t, r, s).value - expected) < 1e-12


def test_sphere_refined_closed_form():
    t = boundary_4_simplex()
    for r in (5, 7):
        expected = (4 / r) * math.sin(math.pi / r) ** 2
        assert abs(tv_prime(t, r, r - 1).value - expected) < 1e-12


def test_sphere_refined_galois_pair():
    # The two refined values at r = 5 are Galois conjugates: their sum and
    # product are rational (1 and 1/5).
    t = boundary_4_simplex()
    v2 = tv_prime(t, 5, 2).value
    v4 = tv_prime(t, 5, 4).value
    assert abs(v2 - (4 / 5) * math.sin(2 * math.pi / 5) ** 2) < 1e-12
    assert abs((v2 + v4) - 1) < 1e-12
    assert abs(v2 * v4 - Fraction(1, 5)) < 1e-12


def test_s2xs1_invariant_is_one():
    t = load_asset("s2xs1")
    for r in (3, 4):
        assert abs(tv(t, r, 1).value - 1) < 1e-10
    assert abs(tv(t, 5, 1, method="float").value - 1) < 1e-9
    assert abs(tv_prime(t, 5, 4, method="float").value - 1) < 1e-9


def test_disjoint_union_multiplies():
    t = boundary_4_simplex()
    both = disjoint_union(t, t)
    for r, s in ((3, 1), (4, 1)):
        one = tv(t, r, s)
        pair = tv(both, r, s)
        assert pair.coloring_count == one.coloring_count**2
        assert abs(pair.value - one.value**2) < 1e-10


def test_s_symmetries():
    t = boundary_4_simplex()
    base = tv(t, 5, 3).value
    assert abs(tv(t, 5, -3).value - base) < 1e-12
    assert abs(tv(t, 5, 13).value - base) < 1e-12


def test_sign_change_law_on_sphere():
    t = boundary_4_simplex()
    r = 5
    for c in enumerate_admissible(t, r):
        w = coloring_weight(t, c)
        c3, _ = split_coloring(c)
        parity = normal_surface_euler_parity(t, c3)
        lhs = w.evaluate(1)
        rhs = (-1) ** parity * w.evaluate(r - 1)
        assert abs(lhs - rhs) < 1e-10


def test_termwise_factorization_even_s():
    t = boundary_4_simplex()
    r, s = 5, 2
    rng = random.Random(7)
    cs = list(enumerate_admissible(t, r))
    for c in rng.sample(cs, 40):
        c3, cp = split_coloring(c)
        for e in range(len(t.edges)):
            lhs = weight_edge(c, e).evaluate(s)
            rhs = weight_edge(c3, e).evaluate(2) * weight_edge(cp, e).evaluate(s)
            assert abs(lhs - rhs) < 1e-10
        for f in t.face_edges:
            lhs = weight_face(c, f).evaluate(s)
            rhs = weight_face(c3, f).evaluate(2) * weight_face(cp, f).evaluate(s)
            assert abs(lhs - rhs) < 1e-10
        for slots in t.tet_edges:
            lhs = weight_tet(c, slots).evaluate(s)
            rhs = weight_tet(c3, slots).evaluate(2) * weight_tet(cp, slots).evaluate(s)
            assert abs(lhs - rhs) < 1e-10


def test_splitting_of_invariants_on_sphere():
    t = boundary_4_simplex()
    for r in (5, 7):
        for s in range(1, r):
            if math.gcd(s, r) != 1:
                continue
            full = tv(t, r, s).value
            if s % 2 == 0:
                expected = tv(t, 3, 2).value * tv_prime(t, r, s).value
            else:
                expected = tv(t, 3, 1).value * tv_prime(t, r, r - s).value
            assert abs(full - expected) < 1e-9


def test_float_method_matches_exact():
    t = boundary_4_simplex()
    for r in (3, 4, 5, 6, 7):
        for s in range(1, r):
            if math.gcd(s, r) != 1:
                continue
            a = tv(t, r, s, method="exact")
            b = tv(t, r, s, method="float")
            assert abs(a.value - b.value) < 1e-9 * (1 + abs(a.value))
            assert a.coloring_count == b.coloring_count


def test_parallel_jobs_bit_identical():
    t = boundary_4_simplex()
    lone = tv(t, 5, 1, jobs=1)
    multi = tv(t, 5, 1, jobs=2)
    assert multi.raw == lone.raw
    assert multi.value == lone.value
    assert multi.coloring_count == lone.coloring_count


def test_repeated_calls_are_consistent():
    t = boundary_4_simplex()
    first = tv(t, 6, 1)
    second = tv(t, 6, 1)
    assert first == second


def test_validation_errors():
    t = boundary_4_simplex()
    with pytest.raises(ValueError):
        tv(t, 2, 1)
    with pytest.raises(ValueError):
        tv(t, 6, 2)
    with pytest.raises(ValueError):
        tv_prime(t, 6, 1)
    with pytest.raises(ValueError):
        tv_prime(t, 5, 3)
    with pytest.raises(ValueError):
        tv(t, 5, 1, method="symbolic")


def test_result_fields():
    t = boundary_4_simplex()
    res = tv(t, 3, 1)
    assert isinstance(res, StateSumResult)
    assert res.r == 3 and res.s == 1 and res.refined is False
    assert res.coloring_count == sum(1 for _ in enumerate_admissible(t, 3))
    assert abs(res.raw.imag) < 1e-12
    refined = tv_prime(t, 5, 2)
    assert refined.refined is True
    assert refined.coloring_count == sum(
        1 for _ in enumerate_admissible(t, 5, even_only=True)
    )
