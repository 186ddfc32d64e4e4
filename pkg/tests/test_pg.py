import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pgblock.gf import tower_for_order
from pgblock.pg import (
    space, gaussian_coeff, rref, Subspace, ProjPoint, span, meet, incident, contains,
    iter_subspace_batches, enumerate_subspaces, random_subspace, subspaces_through,
    count_subspaces_by_cells, dim_formula_holds, rref_batch_is_canonical,
)


def field(q):
    return tower_for_order(q, 1).top


def test_gaussian_small_values():
    assert gaussian_coeff(2, 1, 7) == 8
    assert gaussian_coeff(3, 1, 2) == 7
    assert gaussian_coeff(4, 2, 2) == 35
    assert gaussian_coeff(3, 4, 2) == 0
    with pytest.raises(ValueError):
        gaussian_coeff(-1, 0, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gaussian_symmetry_and_cells(q):
    for n in range(1, 7):
        for k in range(n + 1):
            assert gaussian_coeff(n, k, q) == gaussian_coeff(n, n - k, q)
            if k:
                assert count_subspaces_by_cells(n - 1, k - 1, q) == gaussian_coeff(n, k, q)


def test_lines_of_pg32_by_brute_force():
    sp = space(3, field(2))
    pts = [np.array(v) for v in sp.vectors(np.arange(sp.num_points))]
    lines = set()
    for a, b in itertools.combinations(range(len(pts)), 2):
        c = (pts[a] + pts[b]) % 2
        lines.add(frozenset([a, b, int(sp.index_of(c[None])[0])]))
    assert len(lines) == 35
    enumerated = {frozenset(S.point_indices().tolist()) for S in enumerate_subspaces(sp, 1)}
    assert enumerated == lines


@pytest.mark.parametrize("q,n,d", [(2, 4, 2), (3, 3, 1), (4, 3, 2), (5, 2, 1)])
def test_enumeration_is_canonical_and_distinct(q, n, d):
    sp = space(n, field(q))
    arrs = list(iter_subspace_batches(sp, d))
    allb = np.concatenate(arrs)
    assert len(allb) == gaussian_coeff(n + 1, d + 1, q)
    assert rref_batch_is_canonical(allb).all()
    assert len({a.tobytes() for a in allb}) == len(allb)


def test_enumeration_deterministic():
    sp = space(3, field(3))
    a = [S.rows for S in enumerate_subspaces(sp, 1)]
    b = [S.rows for S in enumerate_subspaces(sp, 1)]
    assert a == b


def test_point_index_round_trip():
    sp = space(3, field(4))
    idx = np.arange(sp.num_points)
    assert np.array_equal(sp.index_of(sp.vectors(idx), canonical=True), idx)
    P = ProjPoint.from_vector(sp, [0, 2, 3, 1])
    assert P.coords[1] == 1 and sp.point(P.index) == P


def test_point_count():
    sp = space(2, tower_for_order(3, 3).top)
    assert sp.num_points == 757


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 4), st.integers(0, 4))
def test_dimension_formula(seed, d1, d2):
    sp = space(5, field(3))
    rng = np.random.default_rng(seed)
    a, b = random_subspace(sp, d1, rng), random_subspace(sp, d2, rng)
    assert dim_formula_holds(a, b)
    m = meet(a, b)
    assert contains(a, m) and contains(b, m)
    s = span([a, b])
    assert contains(s, a) and contains(s, b)


def test_incidence_and_span_of_points():
    sp = space(2, field(5))
    P = ProjPoint.from_vector(sp, [1, 2, 3])
    Q = ProjPoint.from_vector(sp, [0, 1, 4])
    L = span([P, Q])
    assert L.dim == 1 and incident(P, L) and incident(Q, L)
    assert L.num_points() == 6


def test_subspaces_through_line_pg53():
    sp = space(5, field(3))
    L = random_subspace(sp, 1, np.random.default_rng(0))
    planes = list(subspaces_through(L, 2))
    assert len(planes) == 40
    assert all(contains(Pi, L) for Pi in planes)
    assert len({Pi.rows for Pi in planes}) == 40


def test_rref_canonical():
    F = field(5)
    rows = rref([[2, 4, 1], [1, 2, 3]], F)
    S = Subspace(space(2, F), [[2, 4, 1], [1, 2, 3]])
    assert [list(r) for r in S.rows] == [list(r) for r in rows]
    assert S.is_canonical
    # the same space from a different basis has the same canonical rows
    assert Subspace(space(2, F), [[3, 1, 4], [1, 2, 3]]).rows == S.rows
