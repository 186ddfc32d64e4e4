"""
Field reduction PG(n, q^t) -> PG((n+1)t-1, q) and linear sets.

A vector (v_0, ..., v_n) over GF(q^t) is rewritten over GF(q) by replacing
each coordinate with its t digits w.r.t. (1, w, ..., w^{t-1}), so block j
of a big-space vector holds coordinate j of the small-space vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundExceeded, AmbientMismatch
from .pg import (
    Subspace, ProjPoint, space, rref, subspace_points_batch, gaussian_coeff,
)

DEFAULT_MAX_BIG_POINTS = 5_000_000
_CHUNK = 1 << 17


@dataclass(frozen=True)
class PointSet:
    """A sorted, duplicate-free set of point indices of one projective space."""

    space: object
    members: tuple

    def __post_init__(self):
        m = tuple(sorted(set(int(i) for i in self.members)))
        if m and (m[0] < 0 or m[-1] >= self.space.num_points):
            raise IndexError("point index out of range")
        object.__setattr__(self, "members", m)

    @classmethod
    def from_points(cls, sp, points):
        return cls(sp, [P.index if isinstance(P, ProjPoint) else int(P) for P in points])

    @classmethod
    def from_subspace(cls, S):
        return cls(S.space, S.point_indices().tolist())

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, P):
        i = P.index if isinstance(P, ProjPoint) else int(P)
        j = np.searchsorted(self.members, i)
        return j < len(self.members) and self.members[j] == i

    def mask(self):
        m = np.zeros(self.space.num_points, dtype=bool)
        m[list(self.members)] = True
        return m

    def indices(self):
        return np.array(self.members, dtype=np.int64)

    def union(self, other):
        self._same(other)
        return PointSet(self.space, set(self.members) | set(other.members))

    def difference(self, other):
        self._same(other)
        return PointSet(self.space, set(self.members) - set(other.members))

    def issubset(self, other):
        self._same(other)
        return set(self.members) <= set(other.members)

    def _same(self, other):
        if other.space != self.space:
            raise AmbientMismatch("point sets live in different spaces")

    def points(self):
        return [self.space.point(i) for i in self.members]


class DesarguesianSpread:
    """The (t-1)-spread of PG((n+1)t-1, q) obtained from PG(n, q^t)."""

    def __init__(self, tower, n, max_points=DEFAULT_MAX_BIG_POINTS, lookup=None):
        self.tower = tower
        self.n = n
        self.t = tower.t
        self.small = space(n, tower.top)
        self.big = space((n + 1) * tower.t - 1, tower.base)
        if self.big.num_points > max_points:
            raise BoundExceeded("big-space point count", self.big.num_points, max_points)
        self.element_size = gaussian_coeff(self.t, 1, tower.q)
        if lookup is None:
            lookup = np.empty(self.big.num_points, dtype=np.int64)
            for start in range(0, self.big.num_points, _CHUNK):
                idx = np.arange(start, min(start + _CHUNK, self.big.num_points))
                lookup[idx] = self.contract(self.big.vectors(idx))
        else:
            lookup = np.array(lookup, dtype=np.int64)
            if lookup.shape != (self.big.num_points,):
                raise ValueError("lookup table has the wrong length")
        lookup.setflags(write=False)
        self.lookup = lookup
        order = np.argsort(lookup, kind="stable")
        members = order.reshape(self.small.num_points, self.element_size)
        members.setflags(write=False)
        self.members = members
        self._elements = {}

    def __repr__(self):
        return f"DesarguesianSpread({self.tower!r}, n={self.n})"

    def __len__(self):
        return self.small.num_points

    # big <-> small coordinates

    def lift(self, vecs):
        """Rewrite GF(q^t)-vectors (..., n+1) over GF(q): (..., (n+1)t)."""
        d = self.tower.vdecompose(vecs)
        return d.reshape(d.shape[:-2] + (-1,))

    def contract(self, bigvecs):
        """Small-space point index of each big-space vector."""
        bigvecs = np.asarray(bigvecs, dtype=np.int64)
        blocks = bigvecs.reshape(bigvecs.shape[:-1] + (self.n + 1, self.t))
        return self.small.index_of(self.tower.vcompose(blocks))

    def element_rows(self, i):
        """Basis w^j * v (j < t) of S(P_i), lifted to the big space."""
        v = self.small.vectors(i)
        F = self.tower.top
        w = self.tower.q if self.t > 1 else 1
        rows = [F.vmul(v, F.pow(w, j)) for j in range(self.t)]
        return self.lift(np.array(rows))

    def element(self, i):
        S = self._elements.get(i)
        if S is None:
            S = Subspace(self.big, self.element_rows(i).tolist())
            self._elements[i] = S
        return S

    @property
    def elements(self):
        return [self.element(i) for i in range(len(self))]

    def S(self, P):
        """The spread element of a point of PG(n, q^t)."""
        i = P.index if isinstance(P, ProjPoint) else int(P)
        return self.element(i)

    def spread_element_of(self, P_big):
        i = P_big.index if isinstance(P_big, ProjPoint) else int(P_big)
        return int(self.lookup[i])

    def is_partitioned(self, W):
        """True iff the points of W are a union of whole spread elements."""
        pts = W.point_indices()
        elems = np.unique(self.lookup[pts])
        return len(pts) == len(elems) * self.element_size


def field_reduce(n, tower, max_points=DEFAULT_MAX_BIG_POINTS):
    return DesarguesianSpread(tower, n, max_points)


def linear_set(spread, U):
    """B(U): the spread elements meeting U, as points of PG(n, q^t)."""
    spread.big.check(U)
    return PointSet(spread.small, np.unique(spread.lookup[U.point_indices()]).tolist())


def linear_set_batch(spread, bases):
    """Small-point indices (B, P) hit by each basis in a (B, r, m) batch.

    Rows are unsorted and contain repeats where U meets an element in more
    than a point.
    """
    return spread.lookup[subspace_points_batch(spread.big, bases)]


def is_scattered(spread, U):
    return len(linear_set(spread, U)) == U.num_points()


def meet_profile(spread, U):
    """Sorted (descending) sizes of U ∩ R over the spread elements R met by U."""
    hits = spread.lookup[U.point_indices()]
    _, counts = np.unique(hits, return_counts=True)
    return tuple(sorted(counts.tolist(), reverse=True))


LINE_KINDS = ("point", "subline", "pencil", "scattered-plane", "full-line", "other")


def classify_line_linear_set(spread, U):
    """Name B(U) for U in PG(3t-1, q) (n = 1) by size and meet pattern."""
    if spread.n != 1:
        raise ValueError("classification is for linear sets of a projective line")
    q = spread.tower.q
    size = len(linear_set(spread, U))
    if size == spread.small.num_points:
        return "full-line"
    if size == 1:
        return "point"
    prof = meet_profile(spread, U)
    if U.dim == 1 and size == q + 1 and prof[0] == 1:
        return "subline"
    if U.dim == 2 and spread.t == 3:
        if prof[0] == q + 1 and size == q * q + 1:
            return "pencil"
        if prof[0] == 1 and size == q * q + q + 1:
            return "scattered-plane"
    return "other"


# -- sublines ----------------------------------------------------------------

def _solve_frame(F, a, b, c):
    """(alpha, beta) with c = alpha*a + beta*b, vectorised over c."""
    det = F.sub(F.mul(a[0], b[1]), F.mul(a[1], b[0]))
    dinv = F.inv(det)
    alpha = F.vmul(F.vsub(F.vmul(c[..., 0], b[1]), F.vmul(c[..., 1], b[0])), dinv)
    beta = F.vmul(F.vsub(F.vmul(c[..., 1], a[0]), F.vmul(c[..., 0], a[1])), dinv)
    return alpha, beta


def subline_array(line, sub):
    """All copies of PG(1, r) in the line PG(1, N) for the subfield ``sub``.

    ``sub`` lists the elements of the order-r subfield.  Returns an int
    array (count, r+1) with sorted rows, ordered by their three smallest
    points.
    """
    if line.n != 1:
        raise ValueError("sublines live on a projective line")
    F = line.field
    sub = np.asarray(sorted(sub), dtype=np.int64)
    # canonical coefficient pairs (lam, mu) of PG(1, r)
    lam = np.concatenate([[0], np.ones(len(sub), dtype=np.int64)])
    mu = np.concatenate([[1], sub])
    V = line.vectors(np.arange(line.num_points))
    P = line.num_points
    out = []
    Varr = np.asarray(V)
    for A in range(P - 2):
        a = Varr[A].tolist()
        for b_idx in range(A + 1, P - 1):
            C = np.arange(b_idx + 1, P)
            bb = Varr[b_idx].tolist()
            alpha, beta = _solve_frame(F, a, bb, Varr[C])
            av = F.vmul(alpha[:, None], Varr[A][None, :])
            bv = F.vmul(beta[:, None], Varr[b_idx][None, :])
            vecs = F.vadd(F.vmul(lam[None, :, None], av[:, None, :]),
                          F.vmul(mu[None, :, None], bv[:, None, :]))
            pts = np.sort(line.index_of(vecs), axis=1)
            # emit each subline once: from its three smallest points
            good = (pts[:, 0] == A) & (pts[:, 1] == b_idx) & (pts[:, 2] == C)
            if good.any():
                out.append(pts[good])
    if not out:
        return np.zeros((0, len(sub) + 1), dtype=np.int64)
    return np.concatenate(out)


def subline_through(line, sub, A, B, C):
    """The unique sub-line (w.r.t. ``sub``) through three distinct points."""
    F = line.field
    a, b = line.vectors(A).tolist(), line.vectors(B).tolist()
    c = line.vectors(np.array([C]))
    alpha, beta = _solve_frame(F, a, b, c)
    av = F.vmul(alpha[0], np.array(a))
    bv = F.vmul(beta[0], np.array(b))
    pts = [line.index_of(bv[None])[0]]
    for x in sorted(sub):
        pts.append(line.index_of(F.vadd(av, F.vmul(x, bv))[None])[0])
    return PointSet(line, pts)


def enumerate_sublines(tower, max_count=10 ** 7):
    """Stream of all sublines PG(1, q) of PG(1, q^t)."""
    line = space(1, tower.top)
    count = _subline_count(tower.order, tower.q)
    if count > max_count:
        raise BoundExceeded("subline count", count, max_count)
    for row in subline_array(line, range(tower.q)):
        yield PointSet(line, row.tolist())


def baer_subfield(tower):
    """Elements of GF(q*sqrt(q)) inside GF(q^3)."""
    r = int(round(tower.q ** 0.5))
    if r * r != tower.q:
        raise ValueError(f"q={tower.q} is not a square")
    if tower.t != 3:
        raise ValueError("Baer sublines are defined here for t = 3")
    return tower.top.subfield(r ** 3)


def enumerate_baer_sublines(tower, max_count=10 ** 7):
    """Stream of all Baer sublines PG(1, q*sqrt(q)) of PG(1, q^3)."""
    sub = baer_subfield(tower)
    line = space(1, tower.top)
    count = _subline_count(tower.order, len(sub))
    if count > max_count:
        raise BoundExceeded("Baer subline count", count, max_count)
    for row in subline_array(line, sub):
        yield PointSet(line, row.tolist())


def _subline_count(N, r):
    return (N ** 3 - N) // (r ** 3 - r)


subline_count = _subline_count


# -- linearity certification ----------------------------------------------

@dataclass
class Certificate:
    """Outcome of a linearity search.

    status is "linear" (witness found), "nonlinear" (exhaustive search found
    none) or "inconclusive" (node budget ran out).
    """

    status: str
    witness: Subspace | None
    nodes: int
    anchor: int | None = None
    exhaustive: bool = True

    @property
    def ok(self):
        return self.status == "linear"


def certify_linear(spread, B, anchor=None, budget=None):
    """Search for a subspace U of the big space with B(U) = B.

    The search is anchored at the first point of S(anchor) (default: the
    smallest point of B); since the scalar maps v -> lambda v fix every
    spread element and act transitively on its points, this loses nothing.
    From the current subspace W it picks the smallest point P of B not yet
    covered and branches over the points y of S(P), keeping only spans that
    stay inside the union of the S(P), P in B.  Exploration order is fixed,
    so the first witness found is deterministic.
    """
    if B.space != spread.small:
        raise AmbientMismatch("point set is not in the small space of the spread")
    target = np.array(B.members, dtype=np.int64)
    if len(target) == 0:
        raise ValueError("empty point set")
    inB = np.zeros(spread.small.num_points, dtype=bool)
    inB[target] = True
    allowed = inB[spread.lookup]
    if anchor is None:
        anchor = int(target[0])
    anchor = anchor.index if isinstance(anchor, ProjPoint) else int(anchor)
    if not inB[anchor]:
        raise ValueError("anchor is not a point of B")
    big = spread.big
    F = big.field
    x = int(spread.members[anchor][0])
    start = Subspace.from_rref(big, [tuple(int(c) for c in big.vectors(x))])
    seen = set()
    nodes = 0
    state = {"budget_hit": False}

    def covered_by(W):
        pts = W.point_indices()
        if not allowed[pts].all():
            return None
        return np.unique(spread.lookup[pts])

    def dfs(W, cov):
        nonlocal nodes
        if len(cov) == len(target):
            return W
        missing = np.setdiff1d(target, cov, assume_unique=True)
        P = int(missing[0])
        for y in spread.members[P]:
            yv = tuple(int(c) for c in big.vectors(int(y)))
            W2 = Subspace.from_rref(big, rref(list(W.rows) + [yv], F))
            if W2.rows in seen:
                continue
            seen.add(W2.rows)
            nodes += 1
            if budget is not None and nodes > budget:
                state["budget_hit"] = True
                return None
            cov2 = covered_by(W2)
            if cov2 is None:
                continue
            found = dfs(W2, cov2)
            if found is not None or state["budget_hit"]:
                return found
        return None

    seen.add(start.rows)
    witness = dfs(start, covered_by(start))
    if witness is not None:
        return Certificate("linear", witness, nodes, anchor, budget is None)
    if state["budget_hit"]:
        return Certificate("inconclusive", None, nodes, anchor, False)
    return Certificate("nonlinear", None, nodes, anchor, True)


def transitivity_check(spread, B, budget=None):
    """Certify B anchored at each of its points; all must succeed for linear B."""
    return {P: certify_linear(spread, B, anchor=P, budget=budget) for P in B.members}


def spread_pairs(spread, count, seed=0):
    """Seeded sample of distinct element pairs (i, j)."""
    rng = np.random.default_rng(seed)
    N = len(spread)
    out = []
    while len(out) < count:
        i, j = rng.choice(N, size=2, replace=False)
        out.append((int(min(i, j)), int(max(i, j))))
    return out


def brute_force_linear_sets(spread, max_count=10 ** 6):
    """Every linear set B(U) of the spread, by scanning all subspaces U.

    Returns a set of member tuples.  Intended as an oracle at desk scale.
    """
    from .pg import iter_subspace_batches
    out = set()
    for d in range(spread.big.n + 1):
        for arr in iter_subspace_batches(spread.big, d, max_count=max_count):
            hits = np.sort(linear_set_batch(spread, arr), axis=1)
            for row in hits:
                out.add(tuple(np.unique(row).tolist()))
    return out
