from fractions import Fraction

import numpy as np
import pytest

from pgblock.blocking import (
    BlockingContext, Incidence, is_k_blocking, tangent_space_exists, is_minimal,
    minimal_by_tangents, minimal_by_removal, is_small, minimality_criterion, spectrum,
    mod_profile, classify_count, classify_space, small_threshold, large_threshold,
    secant_census, span_closure_check,
)
from pgblock.errors import AmbientMismatch, PreconditionError
from pgblock.gf import tower_for_order
from pgblock.pg import Subspace, gaussian_coeff, random_subspace, span, subspaces_through
from pgblock.reduction import PointSet, linear_set
from pgblock.verify import construct_linear_blocking, get_spread

T8 = tower_for_order(2, 3)
T27 = tower_for_order(3, 3)


def ctx(n, k, tower=T8):
    return BlockingContext(n, k, tower)


def line_pg28():
    c = ctx(2, 1)
    return PointSet.from_subspace(Subspace(c.space, [[1, 0, 0], [0, 1, 0]])), c


def brute_blocking(B, c):
    mask = B.mask()
    sp = c.space
    inc = Incidence(sp, c.dual_dim)
    return all(mask[row].any() for row in inc.points)


def test_context_bounds():
    with pytest.raises(ValueError):
        BlockingContext(2, 3, T8)
    with pytest.raises(ValueError):
        BlockingContext(2, 0, T8)


def test_full_line_spectrum():
    B, c = line_pg28()
    rep = spectrum(B, 1, c)
    assert rep.histogram == {9: 1, 1: 72}
    assert rep.total == gaussian_coeff(3, 2, 8)


def test_subspace_is_blocking_and_minimal():
    B, c = line_pg28()
    assert is_k_blocking(B, c)
    assert is_minimal(B, c, method="both")
    assert minimality_criterion(B, c)
    assert tangent_space_exists(B, B.members[0], c)


def test_subspace_minus_point_not_blocking():
    B, c = line_pg28()
    B2 = B.difference(PointSet(B.space, [B.members[2]]))
    ok, skew = is_k_blocking(B2, c, witness=True)
    assert not ok
    assert not B2.mask()[skew.point_indices()].any()


def test_subspace_plus_point():
    B, c = line_pg28()
    extra = next(i for i in range(c.space.num_points) if i not in B)
    B2 = B.union(PointSet(B.space, [extra]))
    assert not is_minimal(B2, c, method="both")
    assert not tangent_space_exists(B2, extra, c)
    assert not minimality_criterion(B2, c)


def test_minimal_needs_blocking():
    c = ctx(2, 1)
    with pytest.raises(PreconditionError):
        is_minimal(PointSet(c.space, [0, 1]), c)


def test_tangent_requires_member():
    B, c = line_pg28()
    outside = next(i for i in range(c.space.num_points) if i not in B)
    with pytest.raises(PreconditionError):
        tangent_space_exists(B, outside, c)


def test_two_concurrent_lines_against_brute_force():
    c = ctx(2, 1)
    L1 = Subspace(c.space, [[1, 0, 0], [0, 1, 0]])
    L2 = Subspace(c.space, [[1, 0, 0], [0, 0, 1]])
    B = PointSet.from_subspace(L1).union(PointSet.from_subspace(L2))
    P = int(c.space.index_of(np.array([[1, 0, 0]]))[0])
    got, wit = tangent_space_exists(B, P, c, witness=True)
    P0 = Subspace(c.space, [[1, 0, 0]])
    brute = any(int(B.mask()[L.point_indices()].sum()) == 1 for L in subspaces_through(P0, 1))
    assert got == brute
    assert got and int(B.mask()[wit.point_indices()].sum()) == 1


def test_random_sets_blocking_and_tangents_by_brute_force():
    c = ctx(2, 1)
    rng = np.random.default_rng(12)
    inc = Incidence(c.space, 1)
    for _ in range(10):
        B = PointSet(c.space, rng.choice(73, size=12, replace=False).tolist())
        mask = B.mask()
        assert is_k_blocking(B, c) == brute_blocking(B, c)
        for P in B.members[:4]:
            rows = [r for r in inc.points if P in r]
            assert tangent_space_exists(B, P, c) == any(mask[r].sum() == 1 for r in rows)


def test_linear_blocking_set_pg2_27():
    c = ctx(2, 1, T27)
    B, U = construct_linear_blocking(c, "canonical-subgeometry")
    assert U.dim == 3
    assert is_k_blocking(B, c)
    assert len(B) % 3 == 1
    assert minimal_by_tangents(B, c) == minimal_by_removal(B, c)
    assert minimality_criterion(B, c) and is_minimal(B, c)
    ok, rep = mod_profile(B, 1, 3, c)
    assert ok and not rep.offenders


def test_linear_set_plus_point_breaks_congruence():
    c = ctx(2, 1, T27)
    B, _ = construct_linear_blocking(c, "canonical-subgeometry")
    extra = next(i for i in range(c.space.num_points) if i not in B)
    ok, rep = mod_profile(B.union(PointSet(B.space, [extra])), 1, 3, c)
    assert not ok
    S = next(iter(rep.offenders.values()))[0]
    assert S.dim == 1


def test_offender_cap_and_exact_total():
    c = ctx(2, 1, T27)
    rng = np.random.default_rng(0)
    B = PointSet(c.space, rng.choice(c.space.num_points, 100, replace=False).tolist())
    rep = spectrum(B, 1, c, anomalous=lambda s: True, max_offenders=4)
    assert all(len(v) <= 4 for v in rep.offenders.values())
    assert sum(rep.histogram.values()) == rep.total == 757


def test_sampled_spectrum_is_flagged():
    B, c = line_pg28()
    rep = spectrum(B, 1, c, sample=20, seed=3)
    assert not rep.exhaustive and rep.seed == 3 and rep.total == 20
    assert rep.to_dict() == spectrum(B, 1, c, sample=20, seed=3).to_dict()


def test_is_small_exact():
    c = ctx(2, 1)
    sp = c.space
    assert is_small(PointSet(sp, range(9)), c)
    assert is_small(PointSet(sp, range(13)), c)
    assert not is_small(PointSet(sp, range(14)), c)
    assert not is_small(PointSet(sp, range(16)), c)
    assert Fraction(3 * 9, 2) == Fraction(27, 2)


def test_thresholds_q7():
    assert small_threshold(7, 1) == 402
    assert large_threshold(7, 1) == 2342
    assert classify_count(0, 7, 1) == "Small"
    assert classify_count(7 ** 4, 7, 1) == "Large"
    assert classify_count(1000, 7, 1) == "Neither"


def test_thresholds_interleave_at_q2():
    assert large_threshold(2, 1) < small_threshold(2, 1)
    assert classify_count(2 ** 4, 2, 1) == "Both"
    assert classify_count(3 ** 4, 3, 1) == "Large"


def test_classify_space_dimension_check():
    c = ctx(3, 2)
    B = PointSet(c.space, [0])
    S = Subspace(c.space, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    assert classify_space(B, S, c) == "Small"
    with pytest.raises(ValueError):
        classify_space(B, Subspace(c.space, [[1, 0, 0, 0], [0, 1, 0, 0]]), c)


def test_secant_census_subspace():
    c = ctx(3, 2)
    B = PointSet.from_subspace(Subspace(c.space, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]))
    P = B.members[0]
    cen = secant_census(B, P, c)
    assert cen.full == gaussian_coeff(2, 1, 8)
    assert sum((s - 1) * n for s, n in cen.histogram.items()) == len(B) - 1


def test_secant_census_linear_set():
    c = ctx(2, 1, T27)
    B, _ = construct_linear_blocking(c, "canonical-subgeometry")
    for P in B.members[:5]:
        cen = secant_census(B, P, c)
        assert sum(cen.histogram.values()) == 28
        assert sum((s - 1) * n for s, n in cen.histogram.items()) == len(B) - 1
        # cross-check against the 28 lines through P directly
        P0 = Subspace.from_rref(c.space, [c.space.vectors(P).tolist()])
        sizes = [int(B.mask()[L.point_indices()].sum()) for L in subspaces_through(P0, 1)]
        assert sizes.count(4) == cen.q_plus_one
        assert cen.baer is None


def test_secant_census_wrong_space():
    B, _ = line_pg28()
    with pytest.raises(AmbientMismatch):
        secant_census(B, 0, ctx(2, 1, T27))


def test_span_closure():
    spread = get_spread(T27, 1)
    rng = np.random.default_rng(7)
    W = random_subspace(spread.big, 3, rng)
    B = linear_set(spread, W)
    rows = list(W.rows)
    U1 = Subspace(spread.big, rows[:2])
    U2 = Subspace(spread.big, rows[2:])
    assert span_closure_check(spread, B, U1, U2)
    assert span_closure_check(spread, B, U1, U1)


def test_span_closure_falsifier_pg53():
    spread = get_spread(T27, 1)
    rng = np.random.default_rng(11)
    outcomes = set()
    for _ in range(20):
        U1 = random_subspace(spread.big, 1, rng)
        U2 = random_subspace(spread.big, 1, rng)
        B = linear_set(spread, U1).union(linear_set(spread, U2))
        W = span([U1, U2])
        expected = set(linear_set(spread, W).members) <= set(B.members)
        got = span_closure_check(spread, B, U1, U2)
        assert got == expected
        outcomes.add(got)
    assert False in outcomes


def test_span_closure_precondition():
    spread = get_spread(T27, 1)
    rng = np.random.default_rng(1)
    U1 = random_subspace(spread.big, 1, rng)
    with pytest.raises(PreconditionError):
        span_closure_check(spread, PointSet(spread.small, [0]), U1, U1)
