"""
Blocking-set predicates and intersection diagnostics in PG(n, q^t).

Throughout, ``Q`` is the order of the ambient field GF(q^t) and ``q`` the
order of the subfield GF(q); smallness and minimality use Q, the
large/small space thresholds and the 1 (mod q) conditions use q.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

from .errors import BoundExceeded, PreconditionError, AmbientMismatch
from .pg import (
    Subspace, ProjPoint, space, gaussian_coeff, iter_subspace_batches,
    subspace_points_batch, random_subspace, span,
)
from .reduction import PointSet, linear_set

DEFAULT_MAX_INCIDENCE = 50_000_000
DEFAULT_MAX_OFFENDERS = 16


@dataclass(frozen=True)
class BlockingContext:
    n: int
    k: int
    tower: object

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def space(self):
        return space(self.n, self.tower.top)

    @property
    def Q(self):
        return self.tower.order

    @property
    def q(self):
        return self.tower.q

    @property
    def p(self):
        return self.tower.p

    @property
    def dual_dim(self):
        return self.n - self.k

    def params(self):
        return {"n": self.n, "k": self.k, "p": self.tower.p, "h": self.tower.h, "t": self.tower.t}


class Incidence:
    """All d-subspaces of a space with their point indices, in stream order."""

    def __init__(self, sp, d, max_entries=DEFAULT_MAX_INCIDENCE):
        count = sp.num_subspaces(d)
        per = gaussian_coeff(d + 1, 1, sp.q)
        if count * per > max_entries:
            raise BoundExceeded("incidence entries", count * per, max_entries)
        self.space = sp
        self.d = d
        bases, pts = [], []
        for arr in iter_subspace_batches(sp, d):
            bases.append(arr)
            pts.append(subspace_points_batch(sp, arr).astype(np.int32))
        self.bases = np.concatenate(bases)
        self.points = np.concatenate(pts)
        self._through = None

    def __len__(self):
        return len(self.bases)

    def subspace(self, i):
        return Subspace.from_rref(self.space, self.bases[i].tolist())

    def counts(self, mask):
        return mask[self.points].sum(axis=1)

    def through(self, P):
        """Row indices of the subspaces containing point P."""
        if self._through is None:
            order = np.argsort(self.points.ravel(), kind="stable")
            rows = order // self.points.shape[1]
            per_point = len(order) // self.space.num_points
            self._through = rows.reshape(self.space.num_points, per_point)
        return self._through[P]


@lru_cache(maxsize=16)
def incidence(sp, d):
    return Incidence(sp, d)


def _check_set(B, ctx):
    if B.space != ctx.space:
        raise AmbientMismatch(f"point set is not in {ctx.space!r}")


def intersection_counts(B, d, sp=None):
    """|B ∩ S| for every d-space S, in stream order."""
    sp = sp or B.space
    return incidence(sp, d).counts(B.mask())


def is_k_blocking(B, ctx, witness=False):
    """Does every (n-k)-space meet B?  With witness=True also return a skew space."""
    _check_set(B, ctx)
    inc = incidence(ctx.space, ctx.dual_dim)
    counts = inc.counts(B.mask())
    empty = np.flatnonzero(counts == 0)
    ok = len(empty) == 0
    if witness:
        return ok, (None if ok else inc.subspace(int(empty[0])))
    return ok


def tangent_space_exists(B, P, ctx, witness=False):
    """Is there an (n-k)-space meeting B exactly in {P}?"""
    _check_set(B, ctx)
    P = P.index if isinstance(P, ProjPoint) else int(P)
    if P not in B:
        raise PreconditionError("P is not a point of B")
    inc = incidence(ctx.space, ctx.dual_dim)
    rows = inc.through(P)
    counts = inc.counts(B.mask())[rows]
    hit = np.flatnonzero(counts == 1)
    ok = len(hit) > 0
    if witness:
        return ok, (inc.subspace(int(rows[hit[0]])) if ok else None)
    return ok


def minimal_by_tangents(B, ctx):
    return all(tangent_space_exists(B, P, ctx) for P in B.members)


def minimal_by_removal(B, ctx):
    for P in B.members:
        smaller = PointSet(B.space, [x for x in B.members if x != P])
        if is_k_blocking(smaller, ctx):
            return False
    return True


def is_minimal(B, ctx, method="tangent"):
    """Is B a minimal k-blocking set?

    ``method`` selects the tangent-space test or the point-removal test;
    "both" runs the two and raises if they disagree.
    """
    if not is_k_blocking(B, ctx):
        raise PreconditionError("B is not a k-blocking set")
    if method == "tangent":
        return minimal_by_tangents(B, ctx)
    if method == "removal":
        return minimal_by_removal(B, ctx)
    if method == "both":
        a, b = minimal_by_tangents(B, ctx), minimal_by_removal(B, ctx)
        if a != b:
            raise AssertionError("minimality characterisations disagree")
        return a
    raise ValueError(f"unknown method {method!r}")


def is_small(B, ctx):
    """|B| < 3(Q^k + 1)/2 with Q the ambient field order, compared exactly."""
    return Fraction(len(B)) < Fraction(3 * (ctx.Q ** ctx.k + 1), 2)


def minimality_criterion(B, ctx):
    """|B| <= 2Q^k and every (n-k)-space meets B in 1 (mod p) points."""
    _check_set(B, ctx)
    if len(B) > 2 * ctx.Q ** ctx.k:
        return False
    counts = intersection_counts(B, ctx.dual_dim)
    return bool(np.all(counts % ctx.p == 1))


# -- spectra -------------------------------------------------------------

@dataclass
class SpectrumReport:
    d: int
    histogram: dict
    offenders: dict = field(default_factory=dict)
    exhaustive: bool = True
    seed: int | None = None
    total: int = 0

    def to_dict(self):
        return {
            "d": self.d,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "offenders": {str(k): [list(map(list, S.rows)) for S in v]
                          for k, v in sorted(self.offenders.items())},
            "exhaustive": self.exhaustive,
            "seed": self.seed,
            "total": self.total,
        }


def spectrum(B, d, ctx=None, anomalous=None, max_offenders=DEFAULT_MAX_OFFENDERS,
             sample=None, seed=0):
    """Histogram of |B ∩ S| over the d-spaces S.

    ``anomalous(size)`` marks sizes whose witnesses are collected (earliest in
    stream order, at most ``max_offenders`` per size).  With ``sample`` set,
    that many seeded random d-spaces are scanned instead and the report is
    flagged non-exhaustive.
    """
    sp = ctx.space if ctx is not None else B.space
    if B.space != sp:
        raise AmbientMismatch("point set is not in the context space")
    mask = B.mask()
    hist = Counter()
    offenders = {}

    def note(counts, get_subspace):
        hist.update(Counter(counts.tolist()))
        if anomalous is None:
            return
        for size in np.unique(counts).tolist():
            if not anomalous(size):
                continue
            lst = offenders.setdefault(size, [])
            if len(lst) >= max_offenders:
                continue
            for i in np.flatnonzero(counts == size)[: max_offenders - len(lst)]:
                lst.append(get_subspace(int(i)))

    if sample is not None:
        rng = np.random.default_rng(seed)
        subs = [random_subspace(sp, d, rng) for _ in range(sample)]
        counts = np.array([int(mask[S.point_indices()].sum()) for S in subs])
        note(counts, lambda i: subs[i])
        return SpectrumReport(d, dict(hist), offenders, False, seed, sample)
    try:
        inc = incidence(sp, d)
    except BoundExceeded:
        inc = None
    if inc is not None:
        note(inc.counts(mask), inc.subspace)
    else:
        for arr in iter_subspace_batches(sp, d):
            counts = mask[subspace_points_batch(sp, arr)].sum(axis=1)
            note(counts, lambda i, arr=arr: Subspace.from_rref(sp, arr[i].tolist()))
    total = sum(hist.values())
    return SpectrumReport(d, dict(hist), offenders, True, None, total)


def mod_profile(B, d, m, ctx=None, max_offenders=DEFAULT_MAX_OFFENDERS):
    """Does every d-space meet B in 0 or 1 (mod m) points?"""
    rep = spectrum(B, d, ctx, anomalous=lambda s: s % m not in (0, 1),
                   max_offenders=max_offenders)
    ok = all(s % m in (0, 1) for s in rep.histogram)
    return ok, rep


# -- large / small spaces --------------------------------------------------

def small_threshold(q, s):
    return q ** (3 * s) + q ** (3 * s - 1) + q ** (3 * s - 2) + 3 * q ** (3 * s - 3)


def large_threshold(q, s):
    return q ** (3 * s + 1) - q ** (3 * s - 1) - q ** (3 * s - 2) - 3 * q ** (3 * s - 3)


def classify_count(count, q, s):
    """Large / Small / Neither by strict comparison; Both when thresholds cross."""
    big = count > large_threshold(q, s)
    little = count < small_threshold(q, s)
    if big and little:
        return "Both"
    if big:
        return "Large"
    if little:
        return "Small"
    return "Neither"


def classify_space(B, S, ctx):
    """Classify an (n-k+s)-space S, 0 < s < k, by |B ∩ S|."""
    _check_set(B, ctx)
    ctx.space.check(S)
    s = S.dim - ctx.n + ctx.k
    if not 0 < s < ctx.k:
        raise ValueError(f"S has dimension {S.dim}; need n-k < dim S < n")
    count = int(B.mask()[S.point_indices()].sum())
    return classify_count(count, ctx.q, s)


# -- secants ----------------------------------------------------------------

@dataclass
class SecantCensus:
    point: int
    histogram: dict
    full: int
    q_plus_one: int
    baer: int | None

    def to_dict(self):
        return {
            "point": self.point,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "full": self.full,
            "q+1": self.q_plus_one,
            "q*sqrt(q)+1": self.baer,
        }


def secant_census(B, P, ctx):
    """Sizes |B ∩ L| over the lines L through a point P of B."""
    _check_set(B, ctx)
    P = P.index if isinstance(P, ProjPoint) else int(P)
    if P not in B:
        raise PreconditionError("P is not a point of B")
    inc = incidence(ctx.space, 1)
    rows = inc.through(P)
    counts = inc.counts(B.mask())[rows]
    hist = dict(sorted(Counter(counts.tolist()).items()))
    q = ctx.q
    r = math.isqrt(q)
    baer = hist.get(q * r + 1, 0) if r * r == q else None
    return SecantCensus(P, hist, hist.get(ctx.Q + 1, 0), hist.get(q + 1, 0), baer)


def span_closure_check(spread, B, U1, U2):
    """Is B(<U1, U2>) ⊆ B, given B(U1) ⊆ B and B(U2) ⊆ B?"""
    mask = B.mask()
    for U in (U1, U2):
        if not mask[list(linear_set(spread, U).members)].all():
            raise PreconditionError("B(U) is not contained in B")
    W = span([U1, U2])
    return bool(mask[list(linear_set(spread, W).members)].all())
