"""
Checks of the counting identities, gap inequality, subline/Baer intersection
scans, constructions of linear blocking sets and the linearity audit.

Everything here is exact: Python ints and Fractions, never floats.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

from .blocking import (
    is_k_blocking, is_minimal, is_small, spectrum, small_threshold,
    large_threshold,
)
from .gf import tower_for_order
from .pg import (
    Subspace, space, gaussian_coeff, iter_subspace_batches, subspace_points_batch,
    random_subspace, span,
)
from .reduction import (
    field_reduce, linear_set, linear_set_batch, subline_array, baer_subfield,
    certify_linear,
)


@lru_cache(maxsize=16)
def get_spread(tower, n):
    return field_reduce(n, tower)


def _gauss(n, k, Q):
    if k < 0 or n < 0 or k > n:
        return 0
    return gaussian_coeff(n, k, Q)


# -- moments -------------------------------------------------------------------

@dataclass
class MomentCheck:
    x: dict
    sum0: int
    sum1: int
    sum2: int
    weighted: int
    params: dict
    size: int
    expected: tuple

    @property
    def identities_hold(self):
        return (self.sum0, self.sum1, self.sum2) == self.expected

    @property
    def one_mod_q(self):
        q = self.params["q"]
        return all(i % q == 1 for i, c in self.x.items() if c)

    def to_dict(self):
        return {
            "params": self.params,
            "size": self.size,
            "x": {str(i): c for i, c in sorted(self.x.items())},
            "sums": [self.sum0, self.sum1, self.sum2],
            "expected": list(self.expected),
            "weighted": self.weighted,
            "identities_hold": self.identities_hold,
            "one_mod_q": self.one_mod_q,
        }


def moment_counts(B, pi, ctx):
    """Intersection numbers x_i of the (n-k)-spaces inside pi with B ∩ pi."""
    sp = ctx.space
    sp.check(pi)
    m = ctx.n - ctx.k
    s = pi.dim - m
    if not 0 <= s <= ctx.k:
        raise ValueError(f"pi has dimension {pi.dim}; need n-k <= dim pi <= n")
    mask = B.mask()
    size = int(mask[pi.point_indices()].sum())
    F = sp.field
    rows = np.array(pi.rows, dtype=np.int64)
    inner = space(pi.dim, F)
    hist = Counter()
    for arr in iter_subspace_batches(inner, m):
        bases = _compose_bases(F, arr, rows)
        counts = mask[subspace_points_batch(sp, bases)].sum(axis=1)
        hist.update(Counter(counts.tolist()))
    q = ctx.q
    Q = ctx.Q
    sum0 = sum(hist.values())
    sum1 = sum(i * c for i, c in hist.items())
    sum2 = sum(i * (i - 1) * c for i, c in hist.items())
    weighted = sum((i - 1) * (i - 1 - q) * c for i, c in hist.items())
    expected = (
        _gauss(m + s + 1, m + 1, Q),
        size * _gauss(m + s, m, Q),
        size * (size - 1) * _gauss(m + s - 1, m - 1, Q),
    )
    params = {"n": ctx.n, "k": ctx.k, "s": s, "q": q, "Q": Q}
    return MomentCheck(dict(hist), sum0, sum1, sum2, weighted, params, size, expected)


def _compose_bases(F, coeffs, rows):
    # coeffs (B, r', r) in the coordinates of pi; rows (r, n+1)
    return F.vdot(coeffs, rows[None, None, :, :]) if coeffs.size else \
        np.zeros(coeffs.shape[:2] + (rows.shape[1],), dtype=np.int64)


# -- gap inequality ------------------------------------------------------------

def boundary_size(q, s, boundary):
    if boundary == "lower":
        return small_threshold(q, s)
    if boundary == "upper":
        return large_threshold(q, s)
    raise ValueError(f"boundary must be 'lower' or 'upper', not {boundary!r}")


def gap_expression(size, m, s, q):
    """The quadratic in |B ∩ pi| that the 1 (mod q) condition forces to be >= 0.

    m = n - k.  It is a positive multiple of sum_i (i-1)(i-1-q) x_i.
    """
    b = size
    Q = q ** 3
    return (b * (b - 1) * (Q ** m - 1) * (Q ** (m + 1) - 1)
            - (q + 1) * b * (Q ** (m + s) - 1) * (Q ** (m + 1) - 1)
            + (q + 1) * (Q ** (m + s + 1) - 1) * (Q ** (m + s) - 1))


def weighted_moment(size, m, s, q):
    """sum_i (i-1)(i-1-q) x_i computed from the three moment identities alone."""
    Q = q ** 3
    s0 = _gauss(m + s + 1, m + 1, Q)
    s1 = size * _gauss(m + s, m, Q)
    s2 = size * (size - 1) * _gauss(m + s - 1, m - 1, Q)
    return s2 - (q + 1) * s1 + (q + 1) * s0


@dataclass
class GapEvaluation:
    params: dict
    boundary: str
    size: int
    value: int

    @property
    def sign(self):
        return (self.value > 0) - (self.value < 0)

    def to_dict(self):
        return {"params": self.params, "boundary": self.boundary, "size": self.size,
                "value": str(self.value), "sign": self.sign}


def gap_evaluate(n, k, s, q, boundary):
    if not (1 <= s <= k <= n):
        raise ValueError("need 1 <= s <= k <= n")
    size = boundary_size(q, s, boundary)
    value = gap_expression(size, n - k, s, q)
    return GapEvaluation({"n": n, "k": k, "s": s, "q": q}, boundary, size, value)


# -- threshold arithmetic used by the secant/large-space counting -------------

def _F(x):
    return Fraction(x)


def budget_bound(q, k):
    """q^{3k} + q^{3k-1} + q^{3k-2} + 3 q^{3k-3}: the size ceiling for B."""
    return small_threshold(q, k)


def star_count(y, x, b, q, k):
    """Lower bound on |B| from y large and N - y other (n-k+1)-spaces through pi."""
    N = Fraction(q ** (3 * k) - 1, q ** 3 - 1)
    return y * (q ** 4 - q ** 2 - q - 3 - b) + (N - y) * x + b


def large_space_cases(q, k):
    """Evaluate the three large-space counts at their critical y.

    Each case maps to (value of the count, size ceiling, count exceeds ceiling).
    """
    qf = _F(q)
    cases = {
        "point": dict(y=qf ** (3 * k - 5) + 4 * qf ** (3 * k - 6), x=q ** 3, b=1),
        "collinear-large": dict(y=qf ** (3 * k - 5) + 5 * qf ** (3 * k - 6), x=q ** 3,
                                b=q * q + q + 1),
        "q+1-collinear": dict(y=3 * qf ** (3 * k - 6) - qf ** (3 * k - 7),
                              x=q ** 3 + q ** 2 - q, b=q + 1),
    }
    ceiling = budget_bound(q, k)
    out = {}
    for name, c in cases.items():
        val = star_count(c["y"], c["x"], c["b"], q, k)
        out[name] = (val, ceiling, val > ceiling)
    return out


def small_spaces_through_exceed(q, k):
    """(q^{3k}-1)/(q^3-1) - q^{3k-5} - 5q^{3k-6} + 1 > q^3 + 1, exactly."""
    qf = _F(q)
    lhs = Fraction(q ** (3 * k) - 1, q ** 3 - 1) - qf ** (3 * k - 5) - 5 * qf ** (3 * k - 6) + 1
    return lhs, lhs > q ** 3 + 1


def all_large_exceeds(q, k):
    """If every (n-k+1)-space through pi_L were large, |B| would pass the ceiling."""
    N = Fraction(q ** (3 * k) - 1, q ** 3 - 1)
    val = N * (q ** 4 - q ** 2 - q - 3 - q ** 3) + q ** 3
    return val, val > budget_bound(q, k)


def hyperplane_size_filter(size, q):
    """Size logic for small 1-blocking sets: ceiling, congruence, reduced ceiling."""
    ceiling = q ** 3 + q ** 2 + q + 3
    congruent = size % q == 1
    return {
        "below_gap_ceiling": size <= ceiling,
        "congruent": congruent,
        "within_linear_bound": congruent and size <= q ** 3 + q ** 2 + q + 1,
    }


# -- bitmask helpers for the subline scans --------------------------------------

def to_bitmasks(rows, npoints):
    rows = np.asarray(rows, dtype=np.int64)
    words = (npoints + 63) // 64
    out = np.zeros((len(rows), words), dtype=np.uint64)
    ar = np.arange(len(rows))
    for c in range(rows.shape[1]):
        idx = rows[:, c]
        out[ar, idx >> 6] |= np.left_shift(np.uint64(1), (idx & 63).astype(np.uint64))
    return out


def popcount(masks):
    return np.bitwise_count(masks).sum(axis=-1).astype(np.int64)


def distinct_linear_sets(spread, d, sample=None, seed=0, batch=1 << 15):
    """Distinct B(U) over the d-subspaces U of the big space, as bitmasks."""
    npts = spread.small.num_points
    uniq = []
    if sample is None:
        batches = iter_subspace_batches(spread.big, d, batch=batch)
    else:
        rng = np.random.default_rng(seed)
        subs = [random_subspace(spread.big, d, rng).rows for _ in range(sample)]
        batches = [np.array(subs[i:i + batch]) for i in range(0, len(subs), batch)]
    scanned = 0
    for arr in batches:
        scanned += len(arr)
        hits = linear_set_batch(spread, arr)
        m = to_bitmasks(hits, npts)
        uniq.append(np.unique(m, axis=0))
    allm = np.unique(np.concatenate(uniq), axis=0)
    return allm, scanned


def _hist_chunk(args):
    lines, sets = args
    hist = Counter()
    for s in lines:
        counts = popcount(sets & s)
        vals, cnt = np.unique(counts, return_counts=True)
        hist.update(dict(zip(vals.tolist(), cnt.tolist())))
    return hist


def pair_histogram(a, b, workers=1, chunks=None):
    """Histogram of |a_i ∩ b_j| over all pairs of bitmask rows.

    Chunks are fixed by the input (not the worker count) and merged with
    Counter addition, so the result does not depend on ``workers``.
    """
    if chunks is None:
        chunks = max(1, min(64, len(a)))
    parts = [(a[i::chunks], b) for i in range(chunks)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_hist_chunk, parts))
    else:
        results = [_hist_chunk(p) for p in parts]
    total = Counter()
    for r in results:
        total.update(r)
    return dict(sorted(total.items()))


def _random_sublines(line, sub, count, rng):
    from .reduction import subline_through
    out = []
    P = line.num_points
    for _ in range(count):
        A, B, C = rng.choice(P, size=3, replace=False)
        out.append(subline_through(line, sub, int(A), int(B), int(C)).members)
    return np.array(out, dtype=np.int64)


def scan_subline_intersections(q, workers=1, sample=None, seed=0, dims=(2,)):
    """|subline ∩ linear set| over all sublines and all B(U), dim U in ``dims``.

    Exhaustive by default; with ``sample=(n_sublines, n_subspaces)`` both sides
    are seeded samples and the report says so.
    """
    tower = tower_for_order(q, 3)
    spread = get_spread(tower, 1)
    line = spread.small
    rng = np.random.default_rng(seed)
    if sample is None:
        sub_rows = subline_array(line, range(q))
    else:
        sub_rows = _random_sublines(line, list(range(q)), sample[0], rng)
    sub_masks = to_bitmasks(sub_rows, line.num_points)
    set_masks = []
    scanned = 0
    for d in dims:
        m, c = distinct_linear_sets(spread, d, sample=None if sample is None else sample[1],
                                    seed=seed + d)
        set_masks.append(m)
        scanned += c
    sets = np.unique(np.concatenate(set_masks), axis=0)
    hist = pair_histogram(sub_masks, sets, workers)
    allowed = {0, 1, 2, 3, q + 1}
    observed = sorted(hist)
    return {
        "check_id": "subline-vs-linear-set",
        "params": {"q": q, "dims": list(dims)},
        "exhaustive": sample is None,
        "seed": None if sample is None else seed,
        "sublines": int(len(sub_rows)),
        "subspaces_scanned": int(scanned),
        "linear_sets": int(len(sets)),
        "linear_set_sizes": dict(sorted(Counter(popcount(sets).tolist()).items())),
        "histogram": hist,
        "allowed": sorted(allowed),
        "observed": observed,
        "pass": set(observed) <= allowed,
    }


def scan_baer_intersections(q, workers=1):
    """Maxima of |subline ∩ Baer subline| and |Baer subline ∩ linear set|."""
    r = math.isqrt(q)
    if r * r != q:
        raise ValueError(f"q={q} is not a square")
    tower = tower_for_order(q, 3)
    spread = get_spread(tower, 1)
    line = spread.small
    baer = to_bitmasks(subline_array(line, baer_subfield(tower)), line.num_points)
    subs = to_bitmasks(subline_array(line, range(q)), line.num_points)
    sets, scanned = distinct_linear_sets(spread, 2)
    sizes = popcount(sets)
    sets = sets[(sizes == q * q + 1) | (sizes == q * q + q + 1)]
    h1 = pair_histogram(subs, baer, workers)
    h2 = pair_histogram(baer, sets, workers)
    max1, max2 = max(h1), max(h2)
    return {
        "check_id": "baer-intersections",
        "params": {"q": q},
        "exhaustive": True,
        "baer_sublines": int(len(baer)),
        "sublines": int(len(subs)),
        "linear_sets": int(len(sets)),
        "planes_scanned": int(scanned),
        "pairs": {"subline_baer": int(len(subs) * len(baer)),
                  "baer_linear_set": int(len(baer) * len(sets))},
        "histogram_subline_baer": h1,
        "histogram_baer_linear_set": h2,
        "max_subline_baer": max1,
        "max_baer_linear_set": max2,
        "bounds": {"subline_baer": r + 1, "baer_linear_set": q + r + 1},
        "pass": max1 <= r + 1 and max2 <= q + r + 1,
    }


def plane_taxonomy(tower):
    """Size and meet pattern of B(U) for every plane U of PG(5, q) (t = 3)."""
    if tower.t != 3:
        raise ValueError("taxonomy is for t = 3")
    q = tower.q
    spread = get_spread(tower, 1)
    table = Counter()
    for arr in iter_subspace_batches(spread.big, 2):
        hits = linear_set_batch(spread, arr)
        mult = (hits[:, :, None] == hits[:, None, :]).sum(axis=2)
        mmax = mult.max(axis=1)
        # each element meeting the plane in a line contributes q+1 positions
        lines = (mult == q + 1).sum(axis=1) // (q + 1)
        srt = np.sort(hits, axis=1)
        size = 1 + (np.diff(srt, axis=1) != 0).sum(axis=1)
        pattern = np.where(mmax == q * q + q + 1, 0,
                           np.where((mmax == q + 1) & (lines == 1), 1,
                                    np.where(mmax == 1, 2, 3)))
        keys, counts = np.unique(np.stack([pattern, size], axis=1), axis=0, return_counts=True)
        for (pat, sz), c in zip(keys.tolist(), counts.tolist()):
            table[(pat, sz)] += c
    names = {0: "element", 1: "meets-element-in-line", 2: "scattered", 3: "other"}
    expected_size = {0: 1, 1: q * q + 1, 2: q * q + q + 1}
    rows = {f"{names[pat]}:{sz}": c for (pat, sz), c in sorted(table.items())}
    ok = all(pat in expected_size and expected_size[pat] == sz for (pat, sz) in table)
    total = sum(table.values())
    return {
        "check_id": "plane-taxonomy",
        "params": {"q": q},
        "exhaustive": True,
        "planes": total,
        "expected_planes": gaussian_coeff(6, 3, q),
        "table": rows,
        "sizes": sorted({sz for (_, sz) in table}),
        "pass": ok and total == gaussian_coeff(6, 3, q),
    }


# -- constructions ---------------------------------------------------------------

def subgeometry_subspace(spread, dim):
    """Unit vectors taken digit-major (1-digits of every block, then w-digits, ...)."""
    n1, t = spread.n + 1, spread.t
    order = [j * t + i for i in range(t) for j in range(n1)]
    if dim + 1 > len(order):
        raise ValueError("dimension too large")
    m = n1 * t
    rows = []
    for c in order[:dim + 1]:
        r = [0] * m
        r[c] = 1
        rows.append(r)
    return Subspace(spread.big, rows)


def construct_linear_blocking(ctx, source="canonical-subgeometry", seed=0, kspace=None, dim=None):
    """A linear k-blocking set B(U) with dim U = tk (or ``dim``) and its U.

    source: "canonical-subgeometry", "seeded-random-subspace" or
    "spanned-spread-elements" (span of the spread elements over the points of
    a k-space; the witness is a tk-dimensional subspace of that span, so B is
    that k-space).
    """
    spread = get_spread(ctx.tower, ctx.n)
    t = ctx.tower.t
    target = t * ctx.k if dim is None else dim
    if source == "canonical-subgeometry":
        U = subgeometry_subspace(spread, target)
    elif source == "seeded-random-subspace":
        U = random_subspace(spread.big, target, np.random.default_rng(seed))
    elif source == "spanned-spread-elements":
        if kspace is None:
            kspace = random_subspace(spread.small, ctx.k, np.random.default_rng(seed))
        rows = []
        for row in kspace.rows:
            P = spread.small.index_of(np.array(row))
            rows.extend(spread.element(int(P)).rows)
        W = span([Subspace(spread.big, rows)])
        U = Subspace(spread.big, list(W.rows)[:target + 1])
    else:
        raise ValueError(f"unknown source {source!r}")
    return linear_set(spread, U), U


# -- the linearity audit --------------------------------------------------------

@dataclass
class AuditReport:
    params: dict
    size: int
    blocking: bool
    small: bool
    minimal: bool | None
    one_mod_q: bool
    one_mod_q_offenders: list
    size_filter: dict | None
    conclusion: str
    certificate: list | None = None
    nodes: int = 0

    @property
    def hypotheses_hold(self):
        sf = self.size_filter is None or self.size_filter["within_linear_bound"]
        return self.blocking and self.small and bool(self.minimal) and self.one_mod_q and sf

    def to_dict(self):
        return {
            "params": self.params,
            "size": self.size,
            "hypotheses": {"blocking": self.blocking, "small": self.small,
                           "minimal": self.minimal, "one_mod_q": self.one_mod_q,
                           "size_filter": self.size_filter},
            "one_mod_q_offenders": self.one_mod_q_offenders,
            "conclusion": self.conclusion,
            "certificate": self.certificate,
            "nodes": self.nodes,
        }


def audit_linearity(B, ctx, budget=None):
    """Check the hypotheses of the linearity result and, if all hold, certify.

    Never assumes the conclusion: the outcome is "linear" (certificate),
    "nonlinear" (exhaustive search failed), "inconclusive" (budget) or
    "hypotheses-not-met".
    """
    q = ctx.q
    blocking = is_k_blocking(B, ctx)
    small = is_small(B, ctx)
    minimal = is_minimal(B, ctx) if blocking else None
    ok, rep = _one_mod(B, ctx, q)
    offenders = [[list(r) for r in S.rows] for v in rep.offenders.values() for S in v][:16]
    size_filter = hyperplane_size_filter(len(B), q) if ctx.k == 1 else None
    report = AuditReport(ctx.params(), len(B), blocking, small, minimal, ok, offenders,
                         size_filter, "hypotheses-not-met")
    if not report.hypotheses_hold:
        return report
    spread = get_spread(ctx.tower, ctx.n)
    cert = certify_linear(spread, B, budget=budget)
    report.conclusion = cert.status
    report.nodes = cert.nodes
    if cert.witness is not None:
        report.certificate = [list(r) for r in cert.witness.rows]
    return report


SOURCES = ("canonical-subgeometry", "seeded-random-subspace", "spanned-spread-elements")


def _one_mod(B, ctx, q):
    rep = spectrum(B, ctx.dual_dim, ctx, anomalous=lambda s: s % q != 1)
    return all(s % q == 1 for s in rep.histogram), rep
