"""Exact integer and p-adic primitives.

Valuations, Kronecker symbols, square roots modulo prime powers, Hensel
lifting on the norm-form quadric, Hilbert symbols at every place, and
desk-scale primality and factorisation.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import NamedTuple, Optional, Sequence, Union

from . import poly
from .errors import BudgetExhausted, PrecisionError

INFINITY = math.inf

Rational = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: a finite prime, or ``prime=None`` for the real place."""

    prime: Optional[int] = None

    def __post_init__(self):
        if self.prime is not None and not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @classmethod
    def infinite(cls) -> "Place":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    def __str__(self):
        return "inf" if self.prime is None else str(self.prime)

    @classmethod
    def parse(cls, text) -> "Place":
        if isinstance(text, Place):
            return text
        if isinstance(text, int):
            return cls(text)
        text = str(text).strip().lower()
        if text in ("inf", "infinity", "oo", "infinite", "r", "real"):
            return cls(None)
        return cls(int(text))


REAL = Place(None)


def valuation(x: Rational, p: int):
    """p-adic valuation of an integer or rational; ``INFINITY`` for 0."""
    if x == 0:
        return INFINITY
    if isinstance(x, Fraction):
        return valuation(x.numerator, p) - valuation(x.denominator, p)
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def kronecker_symbol(a: int, n: int) -> int:
    if n == 0:
        raise ValueError("kronecker symbol needs n != 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd positive n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _tonelli_shanks(a: int, p: int) -> int:
    a %= p
    if a == 0 or p == 2:
        return a
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _sqrt_unit(u: int, p: int, e: int) -> Optional[int]:
    """Square root of a unit u modulo p^e, or None."""
    mod = p ** e
    u %= mod
    if p == 2:
        if e == 1:
            return 1
        if e == 2:
            return 1 if u % 4 == 1 else None
        if u % 8 != 1:
            return None
        r = 1
        for k in range(3, e):
            # r^2 = u mod 2^k; fix the next bit
            if (r * r - u) % (1 << (k + 1)):
                r += 1 << (k - 1)
        return r % mod
    if pow(u % p, (p - 1) // 2, p) != 1:
        return None
    r = _tonelli_shanks(u, p)
    k = 1
    inv2 = pow(2, -1, mod)
    while k < e:
        k = min(2 * k, e)
        m = p ** k
        r = (r - (r * r - u) * inv2 * pow(r, -1, m)) % m
    return r % mod


def sqrt_mod(a: int, p: int, e: int = 1) -> Optional[int]:
    """Some r with r^2 = a mod p^e, or None when a is not a square there."""
    mod = p ** e
    a %= mod
    if a == 0:
        return 0
    v = valuation(a, p)
    if v % 2:
        return None
    u = a // p ** v
    root = _sqrt_unit(u, p, e - v)
    if root is None:
        return None
    return root * p ** (v // 2) % mod


# ---------------------------------------------------------------------------
# Hensel lifting on N(x, y) = P(t)


class NormConic(NamedTuple):
    """The quadric x^2 + trace*x*y + norm*y^2 - P(t) = 0."""

    trace: int
    norm: int
    poly: Sequence[int]

    def value(self, x, y, t):
        return x * x + self.trace * x * y + self.norm * y * y - poly.evaluate(self.poly, t)

    def gradient(self, x, y, t):
        dp = poly.derivative(self.poly)
        return (
            2 * x + self.trace * y,
            self.trace * x + 2 * self.norm * y,
            -poly.evaluate(dp, t),
        )


def hensel_lift_quadratic(f: NormConic, start, p: int, from_e: int, to_e: int):
    """Lift a residue triple on ``f`` from precision p^from_e to p^to_e.

    Newton steps move a single coordinate, preferring x then y then t,
    whichever attains the smallest gradient valuation. Returns None when the
    gradient vanishes identically at ``start``.
    """
    x, y, t = start
    if f.value(x, y, t) == 0:
        return (x, y, t)
    if f.value(x, y, t) % p ** from_e:
        raise PrecisionError(f"start is not a solution mod {p}^{from_e}")
    grad = f.gradient(x, y, t)
    vals = [valuation(g, p) for g in grad]
    g = min(vals)
    if g == INFINITY:
        return None
    if from_e <= 2 * g:
        raise PrecisionError(
            f"precision {from_e} does not exceed twice the gradient valuation {g}")
    axis = vals.index(g)
    point = [x, y, t]
    mod = p ** (to_e + g)
    while True:
        val = f.value(*point)
        if val % p ** to_e == 0:
            break
        d = f.gradient(*point)[axis]
        unit = (d // p ** g) % mod
        step = (val // p ** g) * pow(unit, -1, mod)
        point[axis] = (point[axis] - step) % mod
    return tuple(c % p ** to_e for c in point)


# ---------------------------------------------------------------------------
# Hilbert symbols


def _as_square_class_int(x: Rational) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("Hilbert symbol of zero")
    return x.numerator * x.denominator


def hilbert_symbol(a: Rational, b: Rational, place) -> int:
    """Hilbert symbol (a, b)_v in {+1, -1}."""
    v = Place.parse(place)
    a = _as_square_class_int(a)
    b = _as_square_class_int(b)
    if v.is_infinite:
        return -1 if a < 0 and b < 0 else 1
    p = v.prime
    alpha, beta = valuation(a, p), valuation(b, p)
    u, w = a // p ** alpha, b // p ** beta
    if p != 2:
        s = (-1) ** (alpha * beta * ((p - 1) // 2))
        if beta % 2:
            s *= kronecker_symbol(u, p)
        if alpha % 2:
            s *= kronecker_symbol(w, p)
        return s
    eps = lambda z: ((z - 1) // 2) % 2
    omega = lambda z: ((z * z - 1) // 8) % 2
    e = eps(u % 8) * eps(w % 8) + alpha * omega(w % 8) + beta * omega(u % 8)
    return -1 if e % 2 else 1


# ---------------------------------------------------------------------------
# primality and factoring

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_DETERMINISTIC_LIMIT = 3317044064679887385961981


def _strong_probable_prime(n: int, base: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(base, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, 30 extra seeded witnesses above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if not all(_strong_probable_prime(n, b) for b in _SMALL_PRIMES):
        return False
    if n < _DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(n)
    return all(_strong_probable_prime(n, rng.randrange(2, n - 1)) for _ in range(30))


def next_prime(n: int) -> int:
    n = max(n + 1, 2)
    while not is_prime(n):
        n += 1
    return n


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, f in enumerate(sieve) if f]


_TRIAL_PRIMES = primes_up_to(10 ** 5)
DEFAULT_FACTOR_BUDGET = 10 ** 6


class Factorization(NamedTuple):
    sign: int
    factors: dict  # prime -> exponent

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors.items():
            out *= p ** e
        return out


def _brent_rho(n: int, budget: list) -> Optional[int]:
    """A nontrivial factor of composite n, spending from budget[0]."""
    rng = random.Random(n)
    while budget[0] > 0:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            budget[0] -= r
            r *= 2
            if budget[0] <= 0 and g == 1:
                return None
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    return None


def factor(n: int, budget: int = DEFAULT_FACTOR_BUDGET, known: Sequence[int] = ()) -> Factorization:
    """Complete signed factorisation; raises BudgetExhausted rather than guess.

    ``known`` lists primes the caller already knows may divide n; they are
    divided out first (each is re-checked for primality).
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    factors: dict[int, int] = {}
    for p in known:
        if n % p == 0:
            if not is_prime(p):
                raise ValueError(f"hint {p} is not prime")
            while n % p == 0:
                factors[p] = factors.get(p, 0) + 1
                n //= p
    for p in _TRIAL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    left = [budget]
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        r = isqrt(m)
        if r * r == m:
            stack.extend([r, r])
            continue
        d = _brent_rho(m, left)
        if d is None:
            raise BudgetExhausted(f"could not split {m} within the rho budget")
        stack.extend([d, m // d])
    return Factorization(sign, dict(sorted(factors.items())))


def squarefree_decomposition(n: int, budget: int = DEFAULT_FACTOR_BUDGET,
                             known: Sequence[int] = ()) -> tuple[int, int]:
    """(core, s) with n = core * s^2 and core squarefree (sign kept in core)."""
    fac = factor(n, budget, known)
    core, s = fac.sign, 1
    for p, e in fac.factors.items():
        core *= p ** (e % 2)
        s *= p ** (e // 2)
    return core, s


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factor(n).factors.values())


def crt(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int]:
    """Combine pairwise coprime congruences into (r, M) with 0 <= r < M."""
    r, m = 0, 1
    for ri, mi in zip(residues, moduli):
        inv = pow(m, -1, mi)
        r = r + m * ((ri - r) * inv % mi)
        m *= mi
        r %= m
    return r, m


def isqrt_exact(n: int) -> Optional[int]:
    """The integer square root of n when n is a perfect square, else None."""
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None
