"""Arithmetic in GF(p) and GF(p^m), the norm map, and coset partitions.

Elements of GF(p^m) are tuples of m residues, lowest degree first.  Each
element also has a packed integer index ``sum(c_i * p**i)`` which is the
vertex numbering used by the norm-graph construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import (
    DegreeZero,
    FieldTooLarge,
    InternalError,
    NoPrimeInRange,
    NotDivisor,
    NotPrime,
)

TABLE_LIMIT = 1 << 20

# Deterministic for every n < 3.3e24, which covers all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def find_prime(h: int, lo: int, hi: int) -> int:
    """Smallest prime p in [lo, hi] with p = 1 (mod h)."""
    if h < 1:
        raise NotDivisor(h, 0)
    if lo > hi:
        raise NoPrimeInRange(h, lo, hi)
    # first candidate >= lo in the residue class 1 mod h
    p = lo + ((1 - lo) % h)
    while p <= hi:
        if is_prime(p):
            return p
        p += h
    raise NoPrimeInRange(h, lo, hi)


def integer_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, exact."""
    if n < 0 or k < 1:
        raise ValueError("integer_root needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)  # upper bound
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _factor(n: int) -> list[int]:
    primes = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            primes.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        primes.append(n)
    return primes


# -- polynomials over GF(p), coefficient lists low -> high ------------------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    """Remainder of a divided by b (b nonzero) over GF(p)."""
    a = _poly_trim(a)
    b = _poly_trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % p
        a = _poly_trim(a)
    return a


def _has_root(f, p):
    for x in range(p):
        acc = 0
        for c in reversed(f):
            acc = (acc * x + c) % p
        if acc == 0:
            return True
    return False


def is_irreducible(f, p: int) -> bool:
    """Irreducibility of a monic polynomial by root test plus trial division."""
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if _has_root(f, p):
        return False
    if m <= 3:
        return True
    for deg in range(2, m // 2 + 1):
        for low in product(range(p), repeat=deg):
            g = list(low) + [1]
            if not _poly_mod(f, g, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^m) defined by a monic irreducible of degree m."""

    p: int
    m: int
    irreducible: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p ** self.m

    # -- encoding --------------------------------------------------------

    def element(self, index: int) -> tuple[int, ...]:
        coeffs = []
        for _ in range(self.m):
            index, c = divmod(index, self.p)
            coeffs.append(c)
        return tuple(coeffs)

    def index(self, x) -> int:
        idx = 0
        for c in reversed(x):
            idx = idx * self.p + c
        return idx

    def elements(self):
        return [self.element(i) for i in range(self.order)]

    @property
    def zero(self):
        return (0,) * self.m

    @property
    def one(self):
        return (1,) + (0,) * (self.m - 1)

    def from_int(self, c: int):
        """Embed a base-field residue."""
        return (c % self.p,) + (0,) * (self.m - 1)

    # -- arithmetic ------------------------------------------------------

    def add(self, x, y):
        p = self.p
        return tuple((a + b) % p for a, b in zip(x, y))

    def sub(self, x, y):
        p = self.p
        return tuple((a - b) % p for a, b in zip(x, y))

    def neg(self, x):
        p = self.p
        return tuple(-a % p for a in x)

    def mul(self, x, y):
        p, m = self.p, self.m
        prod = [0] * (2 * m - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        f = self.irreducible
        # reduce using x^m = -(f_0 + ... + f_{m-1} x^{m-1})
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(m):
                    prod[k - m + i] -= c * f[i]
            prod[k] = 0
        return tuple(c % p for c in prod[:m])

    def pow(self, x, e: int):
        if e < 0:
            raise ValueError("negative exponent; use inv() first")
        result = self.one
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, x):
        if not any(x):
            raise ZeroDivisionError("inverse of zero in GF(%d^%d)" % (self.p, self.m))
        return self.pow(x, self.order - 2)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def norm(self, x) -> int:
        """Product of the Frobenius conjugates x^(p^i), i < m, as a residue."""
        if not any(x):
            return 0
        acc = self.one
        conj = x
        for _ in range(self.m):
            acc = self.mul(acc, conj)
            conj = self.pow(conj, self.p)
        if any(acc[1:]):
            raise InternalError(f"norm of {x} left the base field: {acc}")
        return acc[0]

    # -- bulk tables (used by the norm-graph builder) ----------------------

    @cached_property
    def generator(self) -> int:
        """Index of the smallest primitive element."""
        q = self.order
        if q == 2:
            return 1
        primes = _factor(q - 1)
        for idx in range(1, q):
            g = self.element(idx)
            if all(self.pow(g, (q - 1) // ell) != self.one for ell in primes):
                return idx
        raise InternalError("no primitive element found")

    @cached_property
    def _exp_log(self):
        q = self.order
        g = self.element(self.generator)
        exp = [0] * (q - 1)
        log = [-1] * q
        x = self.one
        for k in range(q - 1):
            i = self.index(x)
            exp[k] = i
            log[i] = k
            x = self.mul(x, g)
        return exp, log

    @cached_property
    def norm_table(self) -> np.ndarray:
        """norm_table[i] is the norm of element i, computed from discrete logs."""
        q, p = self.order, self.p
        exp, log = self._exp_log
        e = (q - 1) // (p - 1)
        out = np.zeros(q, dtype=np.int64)
        for i in range(1, q):
            v = exp[log[i] * e % (q - 1)]
            if v >= p:
                raise InternalError(f"norm of element {i} left the base field")
            out[i] = v
        return out

    @cached_property
    def digits(self) -> np.ndarray:
        idx = np.arange(self.order, dtype=np.int64)
        powers = self.p ** np.arange(self.m, dtype=np.int64)
        return (idx[:, None] // powers) % self.p

    @cached_property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.m, dtype=np.int64)

    def add_row(self, i: int) -> np.ndarray:
        """Indices of x_i + y for every y, in index order."""
        d = self.digits
        return ((d[i] + d) % self.p) @ self._powers


def make_field(p: int, m: int) -> FieldSpec:
    """GF(p^m) using the first monic irreducible in packed-index order."""
    if m < 1:
        raise DegreeZero()
    if not is_prime(p):
        raise NotPrime(p)
    if p ** m > TABLE_LIMIT:
        raise FieldTooLarge(p, m, TABLE_LIMIT)
    if m == 1:
        return FieldSpec(p, 1, (0, 1))
    for low in range(p ** m):
        coeffs = []
        for _ in range(m):
            low, c = divmod(low, p)
            coeffs.append(c)
        f = tuple(coeffs) + (1,)
        if coeffs[0] != 0 and is_irreducible(f, p):
            return FieldSpec(p, m, f)
    raise InternalError(f"no irreducible of degree {m} over GF({p})")


@dataclass(frozen=True)
class CosetPartition:
    """The subgroup H of order h in GF(p)^* and its cosets S_1..S_m."""

    p: int
    h: int
    subgroup: tuple[int, ...]
    cosets: tuple[tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return len(self.cosets)

    @cached_property
    def coset_of(self) -> tuple[int, ...]:
        """coset_of[r] is the 1-based coset containing residue r; 0 for r = 0."""
        out = [0] * self.p
        for i, coset in enumerate(self.cosets, start=1):
            for r in coset:
                out[r] = i
        return tuple(out)


def subgroup_cosets(p: int, h: int) -> CosetPartition:
    if not is_prime(p):
        raise NotPrime(p)
    if h < 1 or (p - 1) % h:
        raise NotDivisor(h, p - 1)
    e = (p - 1) // h
    subgroup = tuple(sorted({pow(x, e, p) for x in range(1, p)}))
    seen = set()
    cosets = []
    for a in range(1, p):
        if a in seen:
            continue
        coset = tuple(sorted(a * g % p for g in subgroup))
        seen.update(coset)
        cosets.append(coset)
    return CosetPartition(p, h, subgroup, tuple(cosets))
