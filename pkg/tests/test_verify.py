from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pgblock.blocking import (
    BlockingContext, is_k_blocking, mod_profile, minimality_criterion, is_minimal,
)
from pgblock.gf import make_tower, tower_for_order
from pgblock.pg import Subspace, gaussian_coeff, random_subspace, enumerate_subspaces
from pgblock.reduction import PointSet, linear_set, classify_line_linear_set
from pgblock.verify import (
    moment_counts, gap_evaluate, gap_expression, weighted_moment, boundary_size,
    large_space_cases, small_spaces_through_exceed, all_large_exceeds, hyperplane_size_filter,
    scan_subline_intersections, plane_taxonomy, pair_histogram, to_bitmasks, popcount,
    construct_linear_blocking, audit_linearity, get_spread, SOURCES,
)

T8 = tower_for_order(2, 3)
T27 = tower_for_order(3, 3)


def plane(c):
    return Subspace(c.space, np.eye(3, dtype=int).tolist())


def test_moments_empty_intersection():
    c = BlockingContext(2, 1, T8)
    m = moment_counts(PointSet(c.space, []), plane(c), c)
    assert (m.sum0, m.sum1, m.sum2) == (73, 0, 0)
    assert m.identities_hold


def test_moments_single_point():
    c = BlockingContext(2, 1, T8)
    m = moment_counts(PointSet(c.space, [4]), plane(c), c)
    assert m.sum1 == gaussian_coeff(2, 1, 8) and m.sum2 == 0
    assert m.identities_hold


def test_moments_random_ten_points():
    c = BlockingContext(2, 1, T8)
    rng = np.random.default_rng(10)
    B = PointSet(c.space, rng.choice(73, size=10, replace=False).tolist())
    m = moment_counts(B, plane(c), c)
    assert m.identities_hold and m.sum0 == 73
    # direct recount of the x_i from the line list
    mask = B.mask()
    direct = {}
    for L in enumerate_subspaces(c.space, 1):
        i = int(mask[L.point_indices()].sum())
        direct[i] = direct.get(i, 0) + 1
    assert direct == m.x


def test_moments_inside_a_line_with_points():
    c = BlockingContext(3, 3, T8)
    pi = Subspace(c.space, [[1, 0, 0, 0], [0, 1, 0, 0]])
    B = PointSet.from_subspace(pi)
    m = moment_counts(B, pi, c)
    assert m.params["s"] == 1 and m.identities_hold
    assert m.x == {1: 9}


def test_weighted_nonnegative_on_linear_blocking_set():
    c = BlockingContext(2, 1, T27)
    B, _ = construct_linear_blocking(c, "canonical-subgeometry")
    m = moment_counts(B, plane(c), c)
    assert m.one_mod_q and m.weighted >= 0
    assert m.weighted == weighted_moment(len(B), 1, 1, 3)


def test_moment_dimension_checked():
    c = BlockingContext(2, 1, T8)
    with pytest.raises(ValueError):
        moment_counts(PointSet(c.space, []), Subspace(c.space, [[1, 0, 0]]), c)


def test_gap_examples_q7():
    lo = gap_evaluate(2, 1, 1, 7, "lower")
    hi = gap_evaluate(2, 1, 1, 7, "upper")
    assert lo.size == 402 and hi.size == 2342
    assert lo.sign < 0 and hi.sign < 0


def test_gap_q49():
    for b in ("lower", "upper"):
        assert gap_evaluate(5, 2, 2, 49, b).sign < 0


def test_gap_bad_args():
    with pytest.raises(ValueError):
        gap_evaluate(2, 1, 2, 7, "lower")
    with pytest.raises(ValueError):
        boundary_size(7, 1, "middle")


@pytest.mark.parametrize("q,m,s", [(2, 1, 1), (3, 2, 1), (7, 1, 2), (8, 3, 3), (49, 2, 2)])
def test_gap_is_positive_multiple_of_weighted_sum(q, m, s):
    """The displayed quadratic is c * sum (i-1)(i-1-q) x_i with c > 0 fixed."""
    ratios = {Fraction(gap_expression(b, m, s, q), weighted_moment(b, m, s, q))
              for b in (1, 5, 17, 400, 12345) if weighted_moment(b, m, s, q)}
    assert len(ratios) == 1 and ratios.pop() > 0


PRIME_POWERS = [7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PRIME_POWERS), st.integers(1, 3), st.integers(1, 4),
       st.sampled_from(["lower", "upper"]))
def test_gap_negative_batch(q, s, m, boundary):
    assert gap_evaluate(m + s, s, s, q, boundary).sign < 0


def test_gap_not_negative_below_seven():
    assert any(gap_evaluate(2, 1, 1, q, b).sign >= 0
               for q in (2, 3, 4, 5) for b in ("lower", "upper"))


@pytest.mark.parametrize("q", [7, 8, 9, 11, 13, 16, 25, 27, 49])
def test_large_space_counts_exceed_ceiling(q):
    for k in range(2, 6):
        assert all(v[2] for v in large_space_cases(q, k).values())
        assert all_large_exceeds(q, k)[1]


@pytest.mark.parametrize("q", [7, 8, 9, 11, 13, 16, 25, 27, 49])
def test_small_spaces_through_inequality(q):
    # fails at k = 2: the left side is q^3 - q - 3
    lhs, ok = small_spaces_through_exceed(q, 2)
    assert lhs == q ** 3 - q - 3 and not ok
    for k in range(3, 7):
        assert small_spaces_through_exceed(q, k)[1]


def test_size_filter():
    f = hyperplane_size_filter(7 ** 3 + 7 ** 2 + 7 + 1, 7)
    assert f == {"below_gap_ceiling": True, "congruent": True, "within_linear_bound": True}
    g = hyperplane_size_filter(7 ** 3 + 7 ** 2 + 7 + 2, 7)
    assert g["below_gap_ceiling"] and not g["congruent"] and not g["within_linear_bound"]
    assert not hyperplane_size_filter(7 ** 3 + 7 ** 2 + 7 + 8, 7)["below_gap_ceiling"]


def test_bitmasks():
    rows = np.array([[0, 63, 64, 64], [5, 5, 5, 5]])
    m = to_bitmasks(rows, 70)
    assert popcount(m).tolist() == [3, 1]


def test_pair_histogram_workers_do_not_matter():
    rng = np.random.default_rng(0)
    a = to_bitmasks(rng.integers(0, 100, (40, 5)), 100)
    b = to_bitmasks(rng.integers(0, 100, (30, 9)), 100)
    h1 = pair_histogram(a, b, workers=1)
    h2 = pair_histogram(a, b, workers=2)
    assert h1 == h2 and sum(h1.values()) == 1200


@pytest.mark.parametrize("q", [2, 3])
def test_subline_scan_small(q):
    rep = scan_subline_intersections(q)
    assert rep["exhaustive"] and rep["pass"]
    assert set(rep["observed"]) <= {0, 1, 2, 3, q + 1}
    assert rep["sublines"] == (q ** 9 - q ** 3) // (q ** 3 - q)


def test_subline_scan_parallel_matches_serial():
    assert scan_subline_intersections(3, workers=1) == scan_subline_intersections(3, workers=2)


def test_subline_scan_sampled_is_labelled_and_seeded():
    a = scan_subline_intersections(3, sample=(50, 200), seed=9)
    b = scan_subline_intersections(3, sample=(50, 200), seed=9)
    assert not a["exhaustive"] and a["seed"] == 9 and a == b


def test_plane_taxonomy_matches_classifier():
    rep = plane_taxonomy(T8)
    assert rep["pass"] and rep["planes"] == 1395
    spread = get_spread(T8, 1)
    names = {"point": "element:1", "pencil": "meets-element-in-line:5",
             "scattered-plane": "scattered:7"}
    counts = {}
    for U in enumerate_subspaces(spread.big, 2):
        key = names[classify_line_linear_set(spread, U)]
        counts[key] = counts.get(key, 0) + 1
    assert counts == rep["table"]


def test_construct_spanned_spread_elements_gives_the_kspace():
    for n, k in [(2, 1), (2, 2), (3, 1), (3, 2)]:
        c = BlockingContext(n, k, T8)
        K = random_subspace(c.space, k, np.random.default_rng(n * 10 + k))
        B, U = construct_linear_blocking(c, "spanned-spread-elements", kspace=K)
        assert U.dim == 3 * k
        assert B == PointSet.from_subspace(K)


def test_construct_canonical_pg2_27():
    c = BlockingContext(2, 1, T27)
    B, U = construct_linear_blocking(c, "canonical-subgeometry")
    assert U.dim == 3 and len(B) % 3 == 1 and is_k_blocking(B, c)


def test_construct_random_line_q5():
    c = BlockingContext(1, 1, tower_for_order(5, 3))
    B, U = construct_linear_blocking(c, "seeded-random-subspace", seed=4)
    spread = get_spread(c.tower, 1)
    assert classify_line_linear_set(spread, U) == "full-line"
    assert len(B) == 126


@pytest.mark.parametrize("tower,n", [(T8, 2), (T27, 2), (T8, 3), (make_tower(2, 2, 3), 1)])
def test_constructions_pass_checks(tower, n):
    for k in range(1, n + 1):
        c = BlockingContext(n, k, tower)
        for src in SOURCES:
            B, U = construct_linear_blocking(c, src, seed=k)
            assert U.dim == tower.t * k
            assert B == linear_set(get_spread(tower, n), U)
            assert is_k_blocking(B, c)
            assert mod_profile(B, n - k, tower.p, c)[0]
            if len(B) <= 2 * c.Q ** k and minimality_criterion(B, c):
                assert is_minimal(B, c)


def test_construct_unknown_source():
    with pytest.raises(ValueError):
        construct_linear_blocking(BlockingContext(2, 1, T8), "nope")


def test_audit_linear_set_pg2_27():
    c = BlockingContext(2, 1, T27)
    B, _ = construct_linear_blocking(c, "canonical-subgeometry")
    rep = audit_linearity(B, c)
    assert rep.hypotheses_hold and rep.conclusion == "linear"
    spread = get_spread(T27, 2)
    W = Subspace(spread.big, rep.certificate)
    assert linear_set(spread, W) == B


def test_audit_subspace():
    c = BlockingContext(2, 1, T27)
    B = PointSet.from_subspace(Subspace(c.space, [[1, 0, 0], [0, 1, 0]]))
    rep = audit_linearity(B, c)
    assert rep.conclusion == "linear"


def test_audit_extra_point():
    c = BlockingContext(2, 1, T27)
    B, _ = construct_linear_blocking(c, "canonical-subgeometry")
    extra = next(i for i in range(c.space.num_points) if i not in B)
    rep = audit_linearity(B.union(PointSet(B.space, [extra])), c)
    assert not rep.one_mod_q and rep.one_mod_q_offenders
    assert rep.conclusion == "hypotheses-not-met"


def test_audit_budget():
    c = BlockingContext(2, 1, T27)
    B, _ = construct_linear_blocking(c, "seeded-random-subspace", seed=1)
    rep = audit_linearity(B, c, budget=1)
    assert rep.conclusion in ("inconclusive", "linear")
    assert audit_linearity(B, c, budget=0).conclusion == "inconclusive"
