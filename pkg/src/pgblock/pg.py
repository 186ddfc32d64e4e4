"""
Points and subspaces of PG(n, F) in canonical form.

Points are canonical vectors (leftmost nonzero coordinate 1) and are
indexed by their position in the lexicographic order of those vectors.
Subspaces are stored as their reduced row echelon basis.  Bulk work
(enumeration, point sets of many subspaces) goes through integer numpy
arrays; the Subspace/ProjPoint objects are for the scalar API.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import itertools

import numpy as np

from .errors import AmbientMismatch, BoundExceeded

DEFAULT_MAX_OBJECTS = 10 ** 8


def gaussian_coeff(n, k, q):
    """Number of (k-1)-subspaces of PG(n-1, q); 0 when k > n."""
    if n < 0 or k < 0:
        raise ValueError("negative arguments")
    if k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _gauss0(n, k, q):
    # q-binomial with the combinatorial convention of 0 outside 0 <= k <= n
    if k < 0 or n < 0 or k > n:
        return 0
    return gaussian_coeff(n, k, q)


class PG:
    """The projective space PG(n, F)."""

    def __init__(self, n, field):
        if n < 0:
            raise ValueError("dimension must be non-negative")
        self.n = n
        self.field = field
        N = field.order
        self.q = N
        if N ** (n + 1) >= 2 ** 62:
            raise BoundExceeded("coordinate space", N ** (n + 1), 2 ** 62)
        # points with leading 1 at position i come after all those with a later lead
        self._offset = np.array([(N ** (n - i) - 1) // (N - 1) for i in range(n + 1)], dtype=np.int64)
        self._power = np.array([N ** (n - j) for j in range(n + 1)], dtype=np.int64)
        self.num_points = int(self._offset[0] + N ** n)

    @property
    def key(self):
        return (self.n, self.field.key)

    def __eq__(self, other):
        return isinstance(other, PG) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"PG({self.n},{self.q})"

    def check(self, other):
        if other.space != self:
            raise AmbientMismatch(f"{other!r} does not live in {self!r}")

    # -- vectorised point indexing ----------------------------------------

    def canonicalize(self, vecs):
        """Scale nonzero row vectors so the leftmost nonzero entry is 1."""
        vecs = np.asarray(vecs, dtype=np.int64)
        nz = vecs != 0
        if not np.all(nz.any(axis=-1)):
            raise ValueError("zero vector is not a projective point")
        lead = nz.argmax(axis=-1)
        lv = np.take_along_axis(vecs, lead[..., None], axis=-1)
        if self.field.degree == 1 and self.q == 2:
            return vecs
        return self.field.vmul(vecs, self.field.vinv(lv))

    def index_of(self, vecs, canonical=False):
        """Point indices of (..., n+1) coordinate arrays."""
        vecs = np.asarray(vecs, dtype=np.int64)
        if not canonical:
            vecs = self.canonicalize(vecs)
        lead = (vecs != 0).argmax(axis=-1)
        val = vecs @ self._power
        return self._offset[lead] + val - self._power[lead]

    def vectors(self, idx):
        """Canonical coordinate vectors for point indices."""
        idx = np.asarray(idx, dtype=np.int64)
        if np.any((idx < 0) | (idx >= self.num_points)):
            raise IndexError("point index out of range")
        # offsets decrease with lead position
        lead = self.n - np.searchsorted(self._offset[::-1], idx, side="right") + 1
        val = idx - self._offset[lead] + self._power[lead]
        out = np.empty(idx.shape + (self.n + 1,), dtype=np.int64)
        for j in range(self.n, -1, -1):
            out[..., j] = val % self.q
            val = val // self.q
        return out

    def point(self, idx):
        return ProjPoint(self, tuple(int(c) for c in self.vectors(idx)))

    def points(self, max_points=DEFAULT_MAX_OBJECTS):
        return enumerate_points(self, max_points)

    def num_subspaces(self, d):
        return _gauss0(self.n + 1, d + 1, self.q)


@lru_cache(maxsize=None)
def _pg_cached(n, field):
    return PG(n, field)


def space(n, field):
    return _pg_cached(n, field)


@dataclass(frozen=True)
class ProjPoint:
    space: PG
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.space.n + 1:
            raise ValueError("wrong number of coordinates")
        nz = [c for c in self.coords if c]
        if not nz or nz[0] != 1:
            raise ValueError(f"{self.coords} is not a canonical point")

    @classmethod
    def from_vector(cls, sp, vec):
        v = sp.canonicalize(np.asarray(vec)[None])[0]
        return cls(sp, tuple(int(c) for c in v))

    @property
    def index(self):
        return int(self.space.index_of(np.array(self.coords), canonical=True))

    @property
    def dim(self):
        return 0

    def as_subspace(self):
        return Subspace(self.space, (self.coords,))


# -- scalar linear algebra over a GF --------------------------------------

def rref(rows, F):
    """Reduced row echelon form (leading ones, pivots leftmost) of a list of rows."""
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out_rows = 0
    for c in range(ncols):
        piv = next((i for i in range(out_rows, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[out_rows], m[piv] = m[piv], m[out_rows]
        inv = F.inv(m[out_rows][c])
        m[out_rows] = [F.mul(inv, x) for x in m[out_rows]]
        prow = m[out_rows]
        for i in range(len(m)):
            if i != out_rows and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], prow)]
        out_rows += 1
        if out_rows == len(m):
            break
    return [tuple(r) for r in m[:out_rows]]


def pivots_of(rows):
    return [next(j for j, x in enumerate(r) if x) for r in rows]


def nullspace(rows, F, ncols):
    """Basis of {x : r.x = 0 for all rows r}."""
    R = rref(rows, F)
    piv = pivots_of(R)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in zip(R, piv):
            v[pc] = F.neg(r[f])
        basis.append(v)
    return basis


def reduce_against(vec, rows, F):
    """Residue of vec after eliminating the pivots of an RREF basis."""
    v = list(vec)
    for r in rows:
        pc = next(j for j, x in enumerate(r) if x)
        c = v[pc]
        if c:
            v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, r)]
    return v


@dataclass(frozen=True)
class Subspace:
    """A projective subspace given by its RREF basis rows."""

    space: PG
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if any(len(r) != self.space.n + 1 for r in rows):
            raise ValueError("row length does not match the ambient space")
        canon = tuple(rref(rows, self.space.field))
        object.__setattr__(self, "rows", canon)

    @classmethod
    def from_rref(cls, sp, rows):
        # trusted constructor: rows already canonical
        obj = object.__new__(cls)
        object.__setattr__(obj, "space", sp)
        object.__setattr__(obj, "rows", tuple(tuple(int(x) for x in r) for r in rows))
        return obj

    @property
    def dim(self):
        return len(self.rows) - 1

    @property
    def rank(self):
        return len(self.rows)

    @property
    def pivots(self):
        return pivots_of(self.rows)

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.space!r}, rows={list(self.rows)})"

    def is_canonical(self):
        return tuple(rref(self.rows, self.space.field)) == self.rows

    def point_vectors(self):
        if not self.rows:
            return np.zeros((0, self.space.n + 1), dtype=np.int64)
        C = coefficient_points(self.rank, self.space.field)
        return self.space.field.vdot(C, np.array(self.rows, dtype=np.int64))

    def point_indices(self):
        """Sorted indices of the points on this subspace."""
        if not self.rows:
            return np.zeros(0, dtype=np.int64)
        return np.sort(self.space.index_of(self.point_vectors(), canonical=True))

    def num_points(self):
        return gaussian_coeff(self.rank, 1, self.space.q)

    def __contains__(self, P):
        return incident(P, self)


@lru_cache(maxsize=64)
def coefficient_points(r, field):
    """Canonical vectors of all points of PG(r-1, field), in index order."""
    sp = space(r - 1, field)
    arr = sp.vectors(np.arange(sp.num_points))
    arr.setflags(write=False)
    return arr


def _as_rows(part):
    if isinstance(part, ProjPoint):
        return [part.coords]
    if isinstance(part, Subspace):
        return list(part.rows)
    raise TypeError(f"cannot span {type(part).__name__}")


def span(parts):
    """Smallest subspace containing every given point/subspace."""
    parts = list(parts)
    if not parts:
        raise ValueError("span of nothing")
    sp = parts[0].space
    rows = []
    for part in parts:
        sp.check(part)
        rows.extend(_as_rows(part))
    return Subspace.from_rref(sp, rref(rows, sp.field))


def meet(a, b):
    """Largest subspace contained in both; dim -1 (no rows) when disjoint."""
    sp = a.space
    sp.check(b)
    F = sp.field
    m = sp.n + 1
    na = nullspace(a.rows, F, m)
    nb = nullspace(b.rows, F, m)
    rows = nullspace(na + nb, F, m)
    return Subspace.from_rref(sp, rref(rows, F))


def incident(P, S):
    S.space.check(P)
    return not any(reduce_against(P.coords, S.rows, S.space.field))


def contains(big, small):
    """True iff subspace ``small`` lies in ``big``."""
    big.space.check(small)
    F = big.space.field
    return all(not any(reduce_against(r, big.rows, F)) for r in small.rows)


# -- enumeration -------------------------------------------------------------

def enumerate_points(sp, max_points=DEFAULT_MAX_OBJECTS):
    if sp.num_points > max_points:
        raise BoundExceeded("point count", sp.num_points, max_points)
    for i in range(sp.num_points):
        yield sp.point(i)


def pivot_patterns(n1, r):
    return itertools.combinations(range(n1), r)


def free_positions(pattern, n1):
    pset = set(pattern)
    return [(i, j) for i, pc in enumerate(pattern) for j in range(pc + 1, n1) if j not in pset]


def pattern_cell_sizes(n1, r, q):
    """Number of canonical r-row bases for each pivot pattern (q^#free)."""
    return {pat: q ** len(free_positions(pat, n1)) for pat in pivot_patterns(n1, r)}


def iter_subspace_batches(sp, d, batch=1 << 16, max_count=DEFAULT_MAX_OBJECTS):
    """Yield all d-subspaces as RREF arrays of shape (B, d+1, n+1).

    Order: pivot pattern (lexicographic), then free entries with the first
    free position most significant.
    """
    r = d + 1
    n1 = sp.n + 1
    if r < 0 or r > n1:
        return
    count = sp.num_subspaces(d)
    if count > max_count:
        raise BoundExceeded("subspace count", count, max_count)
    if r == 0:
        yield np.zeros((1, 0, n1), dtype=np.int64)
        return
    N = sp.q
    for pat in pivot_patterns(n1, r):
        free = free_positions(pat, n1)
        total = N ** len(free)
        base = np.zeros((r, n1), dtype=np.int64)
        for i, pc in enumerate(pat):
            base[i, pc] = 1
        fi = np.array([f[0] for f in free], dtype=np.int64)
        fj = np.array([f[1] for f in free], dtype=np.int64)
        for start in range(0, total, batch):
            stop = min(total, start + batch)
            codes = np.arange(start, stop, dtype=np.int64)
            out = np.broadcast_to(base, (stop - start, r, n1)).copy()
            for k in range(len(free) - 1, -1, -1):
                out[:, fi[k], fj[k]] = codes % N
                codes //= N
            yield out


def enumerate_subspaces(sp, d, max_count=DEFAULT_MAX_OBJECTS, sample=None, seed=0):
    """Stream of all d-subspaces, or ``sample`` seeded uniform random ones."""
    if sample is not None:
        rng = np.random.default_rng(seed)
        for _ in range(sample):
            yield random_subspace(sp, d, rng)
        return
    for arr in iter_subspace_batches(sp, d, max_count=max_count):
        for rows in arr:
            yield Subspace.from_rref(sp, rows.tolist())


def random_subspace(sp, d, rng):
    """Uniformly random d-subspace (random full-rank basis, then RREF)."""
    r = d + 1
    if not 0 <= r <= sp.n + 1:
        raise ValueError(f"no {d}-subspaces in {sp!r}")
    while True:
        M = rng.integers(0, sp.q, size=(r, sp.n + 1)).tolist()
        R = rref(M, sp.field)
        if len(R) == r:
            return Subspace.from_rref(sp, R)


def subspaces_through(S, d):
    """All d-subspaces containing S, as a stream of Subspace."""
    sp = S.space
    F = sp.field
    if d < S.dim:
        raise ValueError("target dimension below that of S")
    piv = S.pivots
    comp = [j for j in range(sp.n + 1) if j not in piv]
    # subspaces through S <-> subspaces of the coordinate complement of S
    sub = space(len(comp) - 1, F) if comp else None
    extra = d - S.dim
    if extra == 0:
        yield S
        return
    for arr in iter_subspace_batches(sub, extra - 1):
        for w in arr:
            wrows = []
            for row in w:
                full = [0] * (sp.n + 1)
                for c, x in zip(comp, row):
                    full[c] = int(x)
                wrows.append(full)
            yield Subspace.from_rref(sp, rref(list(S.rows) + wrows, F))


def subspace_points_batch(sp, bases):
    """Point indices (B, P) of a batch of bases (B, r, n+1), rows independent."""
    bases = np.asarray(bases, dtype=np.int64)
    r = bases.shape[1]
    C = coefficient_points(r, sp.field)
    vecs = sp.field.vdot(C, bases[:, None, :, :])
    return sp.index_of(vecs, canonical=False)


def rref_batch_is_canonical(arr):
    """Vectorised check that each (r, m) matrix is in RREF with unit pivots."""
    arr = np.asarray(arr)
    B, r, m = arr.shape
    nz = arr != 0
    if not nz.any(axis=2).all():
        return np.zeros(B, dtype=bool)
    lead = nz.argmax(axis=2)
    ok = np.all(np.diff(lead, axis=1) > 0, axis=1) if r > 1 else np.ones(B, dtype=bool)
    lv = np.take_along_axis(arr, lead[:, :, None], axis=2)[:, :, 0]
    ok &= np.all(lv == 1, axis=1)
    # pivot columns are unit vectors
    cols = np.take_along_axis(arr, np.broadcast_to(lead[:, None, :], (B, r, r)), axis=2)
    ok &= np.all(cols == np.eye(r, dtype=arr.dtype)[None], axis=(1, 2))
    return ok


def count_subspaces_by_cells(n, d, q):
    """Independent count of d-subspaces of PG(n, q): sum of Schubert cell sizes."""
    return sum(pattern_cell_sizes(n + 1, d + 1, q).values())


def dim_formula_holds(a, b):
    return span([a, b]).dim + meet(a, b).dim == a.dim + b.dim

