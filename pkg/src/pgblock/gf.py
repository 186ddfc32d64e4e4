"""
Finite fields and the tower GF(p) < GF(q) < GF(q^t), q = p^h.

Elements are plain ints.  An element of a field of order p^d is the
integer sum(c_i p^i) of its coefficient vector over the prime field, so
the natural integer order is the element order used everywhere downstream
(lexicographic on coefficient vectors read from the top coefficient).

The top level of a tower is built as GF(q)[w]/(f) with f the least monic
irreducible of degree t over GF(q); a top element a_0 + a_1 w + ... is
encoded as sum(a_i q^i) with a_i the GF(q) ints.  That makes decompose()
a base-q digit split and makes the embedding GF(q) -> GF(q^t) the identity
on ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import itertools

import numpy as np

from .errors import BoundExceeded

DEFAULT_MAX_ELEMENTS = 2 ** 20
_FULL_ADD_TABLE_LIMIT = 1024


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q):
    """Return (p, h) with q = p**h, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            h = 0
            r = q
            while r % p == 0:
                r //= p
                h += 1
            if r != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, h
    raise AssertionError("unreachable")


class GF:
    """A finite field with log/antilog tables.

    Scalar methods take and return python ints; the ``v*`` methods work
    elementwise on integer numpy arrays.
    """

    def __init__(self, p, degree, exp_table, key):
        self.p = p
        self.degree = degree
        self.order = p ** degree
        self.key = key
        n = self.order
        exp = np.asarray(exp_table, dtype=np.int64)
        assert exp.shape == (n - 1,)
        self._exp = np.concatenate([exp, exp])
        log = np.full(n, -1, dtype=np.int64)
        log[exp] = np.arange(n - 1)
        self._log = log
        self._exp_l = self._exp.tolist()
        self._log_l = log.tolist()
        # negation is digitwise
        digits = self.digits(np.arange(n))
        self._neg = self.from_digits((-digits) % p)
        self._neg_l = self._neg.tolist()
        self._add = None
        if n <= _FULL_ADD_TABLE_LIMIT and not (p == 2 or degree == 1):
            a = np.arange(n)
            self._add = self.vadd(a[:, None], a[None, :], _force_digits=True)
        self._elements = None

    def __repr__(self):
        return f"GF({self.order})"

    def __eq__(self, other):
        return isinstance(other, GF) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __len__(self):
        return self.order

    def elements(self):
        return range(self.order)

    # -- digit helpers --------------------------------------------------

    def digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        out = np.empty(a.shape + (self.degree,), dtype=np.int64)
        for i in range(self.degree):
            out[..., i] = a % self.p
            a = a // self.p
        return out

    def from_digits(self, d):
        d = np.asarray(d, dtype=np.int64)
        out = np.zeros(d.shape[:-1], dtype=np.int64)
        for i in reversed(range(self.degree)):
            out = out * self.p + d[..., i]
        return out

    # -- scalar arithmetic ----------------------------------------------

    def add(self, a, b):
        p = self.p
        if p == 2:
            return a ^ b
        if self.degree == 1:
            return (a + b) % p
        if self._add is not None:
            return int(self._add[a, b])
        r, m = 0, 1
        while a or b:
            r += ((a % p + b % p) % p) * m
            a //= p
            b //= p
            m *= p
        return r

    def neg(self, a):
        return self._neg_l[a]

    def sub(self, a, b):
        return self.add(a, self._neg_l[b])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp_l[self._log_l[a] + self._log_l[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        la = self._log_l[a]
        return self._exp_l[(self.order - 1 - la) % (self.order - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        return self._exp_l[(self._log_l[a] * e) % (self.order - 1)]

    def log(self, a):
        if a == 0:
            raise ValueError("log of zero")
        return self._log_l[a]

    def exp(self, i):
        return self._exp_l[i % (self.order - 1)]

    @property
    def primitive_element(self):
        return self._exp_l[1]

    # -- vectorised arithmetic ------------------------------------------

    def vadd(self, a, b, _force_digits=False):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.degree == 1:
            return (a + b) % self.p
        if self._add is not None and not _force_digits:
            return self._add[a, b]
        p = self.p
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        m = 1
        for _ in range(self.degree):
            out += ((a % p + b % p) % p) * m
            a = a // p
            b = b // p
            m *= p
        return out

    def vneg(self, a):
        return self._neg[np.asarray(a, dtype=np.int64)]

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.degree == 1:
            return (a * b) % self.p
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def vdot(self, coeffs, rows):
        """Linear combinations sum_j coeffs[..., j] * rows[..., j, :].

        Leading dimensions broadcast, e.g. coeffs (P, r) with rows (B, 1, r, m)
        gives (B, P, m).
        """
        coeffs = np.asarray(coeffs, dtype=np.int64)
        rows = np.asarray(rows, dtype=np.int64)
        r = coeffs.shape[-1]
        if self.degree == 1:
            acc = np.matmul(coeffs[..., None, :], rows)[..., 0, :]
            return acc % self.p
        acc = None
        for j in range(r):
            term = self.vmul(coeffs[..., j, None], rows[..., j, :])
            acc = term if acc is None else self.vadd(acc, term)
        return acc

    def subfield(self, order):
        """Sorted elements of the subfield of the given order."""
        d = 0
        o = 1
        while o < order:
            o *= self.p
            d += 1
        if o != order or self.degree % d:
            raise ValueError(f"GF({self.order}) has no subfield of order {order}")
        if order == self.order:
            return list(range(self.order))
        step = (self.order - 1) // (order - 1)
        return sorted([0] + [self._exp_l[i * step] for i in range(order - 1)])


# -- polynomials over a GF, coefficient lists low-to-high -----------------

def _poly_mod(f, g, F):
    f = list(f)
    dg = len(g) - 1
    lead_inv = F.inv(g[-1])
    while len(f) - 1 >= dg and any(f):
        if f[-1] == 0:
            f.pop()
            continue
        c = F.mul(f[-1], lead_inv)
        shift = len(f) - 1 - dg
        for i, gi in enumerate(g):
            f[shift + i] = F.sub(f[shift + i], F.mul(c, gi))
        f.pop()
    while f and f[-1] == 0:
        f.pop()
    return f


def _monic_polys(F, degree):
    for tail in itertools.product(range(F.order), repeat=degree):
        yield list(tail) + [1]


def is_irreducible(f, F):
    """Exhaustive trial division by monic polynomials of degree <= deg/2."""
    deg = len(f) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if f[0] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(F, d):
            if not _poly_mod(f, g, F):
                return False
    return True


def least_irreducible(F, degree):
    """Least monic irreducible of the given degree over F.

    Candidates are ordered lexicographically on (c_0, ..., c_{deg-1}).
    """
    if degree == 1:
        return [0, 1]
    for tail in itertools.product(range(F.order), repeat=degree):
        f = list(tail) + [1]
        if is_irreducible(f, F):
            return f
    raise RuntimeError(f"no irreducible polynomial of degree {degree} over {F}")


def _prime_field(p):
    g = next(g for g in range(1, p)
             if all(pow(g, (p - 1) // r, p) != 1 for r in prime_factors(p - 1))) if p > 2 else 1
    exp = [pow(g, i, p) for i in range(p - 1)]
    return GF(p, 1, exp, key=(p,))


def _extension(F, modulus):
    """GF(F.order ** deg) as F[w]/(modulus), elements encoded base F.order."""
    deg = len(modulus) - 1
    B = F.order
    N = B ** deg
    if deg == 1:
        return GF(F.p, F.degree, [F.exp(i) for i in range(B - 1)], key=F.key + (tuple(modulus),))

    def to_vec(a):
        v = []
        for _ in range(deg):
            v.append(a % B)
            a //= B
        return v

    def to_int(v):
        r = 0
        for c in reversed(v):
            r = r * B + c
        return r

    def mulvec(u, v):
        prod = [0] * (2 * deg - 1)
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            for j, vj in enumerate(v):
                if vj:
                    prod[i + j] = F.add(prod[i + j], F.mul(ui, vj))
        r = _poly_mod(prod, modulus, F)
        return r + [0] * (deg - len(r))

    def powvec(u, e):
        r = [1] + [0] * (deg - 1)
        while e:
            if e & 1:
                r = mulvec(r, u)
            u = mulvec(u, u)
            e >>= 1
        return r

    one = [1] + [0] * (deg - 1)
    factors = prime_factors(N - 1)
    for cand in range(2, N):
        g = to_vec(cand)
        if all(powvec(g, (N - 1) // r) != one for r in factors):
            break
    else:  # pragma: no cover
        raise RuntimeError("no primitive element")
    exp = [1]
    cur = one
    for _ in range(N - 2):
        cur = mulvec(cur, g)
        exp.append(to_int(cur))
    return GF(F.p, F.degree * deg, exp, key=F.key + (tuple(modulus),))


@dataclass(frozen=True, eq=False)
class FieldTower:
    """GF(p) < GF(q) < GF(q^t) with q = p^h."""

    p: int
    h: int
    t: int
    modulus_mid: tuple
    modulus_top: tuple
    prime: GF
    base: GF
    top: GF

    @property
    def q(self):
        return self.p ** self.h

    @property
    def order(self):
        return self.q ** self.t

    @property
    def basis_top(self):
        """The GF(q)-basis (1, w, ..., w^{t-1}) of the top field, as ints."""
        return tuple(self.q ** i for i in range(self.t))

    def __repr__(self):
        return f"FieldTower(p={self.p}, h={self.h}, t={self.t})"

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self.top.key == other.top.key

    def __hash__(self):
        return hash(self.top.key)

    def descriptor(self):
        return {
            "p": self.p,
            "h": self.h,
            "t": self.t,
            "modulus_mid": list(self.modulus_mid),
            "modulus_top": list(self.modulus_top),
        }

    def level(self, name):
        return {"prime": self.prime, "base": self.base, "top": self.top}[name]

    # decompose / compose / embed

    def decompose(self, x):
        if not 0 <= x < self.order:
            raise ValueError(f"{x} is not an element of GF({self.order})")
        q = self.q
        out = []
        for _ in range(self.t):
            out.append(x % q)
            x //= q
        return tuple(out)

    def compose(self, digits):
        if len(digits) != self.t:
            raise ValueError(f"expected {self.t} coordinates, got {len(digits)}")
        r = 0
        for d in reversed(digits):
            if not 0 <= d < self.q:
                raise ValueError(f"{d} is not an element of GF({self.q})")
            r = r * self.q + d
        return r

    def vdecompose(self, x):
        x = np.asarray(x, dtype=np.int64)
        out = np.empty(x.shape + (self.t,), dtype=np.int64)
        for i in range(self.t):
            out[..., i] = x % self.q
            x = x // self.q
        return out

    def vcompose(self, digits):
        digits = np.asarray(digits, dtype=np.int64)
        out = np.zeros(digits.shape[:-1], dtype=np.int64)
        for i in reversed(range(self.t)):
            out = out * self.q + digits[..., i]
        return out

    def embed(self, c):
        if not 0 <= c < self.q:
            raise ValueError(f"{c} is not an element of GF({self.q})")
        return c


@lru_cache(maxsize=None)
def _build_tower(p, h, t):
    prime = _prime_field(p)
    mod_mid = least_irreducible(prime, h)
    base = _extension(prime, mod_mid)
    mod_top = least_irreducible(base, t)
    top = _extension(base, mod_top)
    return FieldTower(p, h, t, tuple(mod_mid), tuple(mod_top), prime, base, top)


def make_tower(p, h=1, t=1, max_elements=DEFAULT_MAX_ELEMENTS):
    """Build the tower GF(p) < GF(p^h) < GF(p^{ht})."""
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if h < 1 or t < 1:
        raise ValueError("h and t must be positive")
    if p ** (h * t) > max_elements:
        raise BoundExceeded("field size", p ** (h * t), max_elements)
    return _build_tower(p, h, t)


def tower_from_descriptor(d, max_elements=DEFAULT_MAX_ELEMENTS):
    tower = make_tower(int(d["p"]), int(d["h"]), int(d["t"]), max_elements)
    if list(d.get("modulus_mid", tower.modulus_mid)) != list(tower.modulus_mid) or \
            list(d.get("modulus_top", tower.modulus_top)) != list(tower.modulus_top):
        raise ValueError("descriptor moduli differ from the canonical least irreducibles")
    return tower


def tower_for_order(q, t):
    """Tower whose middle level has order q (a prime power)."""
    p, h = prime_power(q)
    return make_tower(p, h, t)


@dataclass(frozen=True)
class FieldElement:
    """An element tied to a field; supports the usual operators."""

    field: GF
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.order:
            raise ValueError(f"{self.value} out of range for {self.field}")

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return FieldElement(self.field, other)
        if other.field != self.field:
            raise ValueError(f"mixed levels {self.field} and {other.field}; embed explicitly")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.div(self.value, other.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    @property
    def coeffs(self):
        return tuple(int(c) for c in self.field.digits(self.value))


def arith(a, b, op):
    """Apply ``op`` in {add, sub, mul, div, pow, inv} to field elements.

    For ``pow`` the exponent ``b`` is an int; for ``inv`` ``b`` is ignored.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** b
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown operation {op!r}")
