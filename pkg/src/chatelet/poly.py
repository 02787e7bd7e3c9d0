"""Dense univariate polynomials as coefficient lists, lowest degree first.

Integer and rational coefficients share one set of helpers; the ``*_mod``
functions work over the prime field F_p and always return reduced,
trimmed lists.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import gcd
from typing import Sequence

Poly = list  # list[int] | list[Fraction]


def trim(f: Sequence) -> list:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: Sequence) -> int:
    """Degree of f; -1 for the zero polynomial."""
    return len(trim(f)) - 1


def leading(f: Sequence):
    f = trim(f)
    return f[-1] if f else 0


def evaluate(f: Sequence, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def derivative(f: Sequence) -> list:
    return trim([i * c for i, c in enumerate(f)][1:])


def add(f: Sequence, g: Sequence) -> list:
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def sub(f: Sequence, g: Sequence) -> list:
    return add(f, [-c for c in g])


def scale(f: Sequence, c) -> list:
    return trim([c * x for x in f])


def mul(f: Sequence, g: Sequence) -> list:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return trim(out)


def product(polys) -> list:
    out = [1]
    for f in polys:
        out = mul(out, f)
    return out


def content(f: Sequence[int]) -> int:
    g = 0
    for c in f:
        g = gcd(g, c)
    return g


def divmod_q(f: Sequence, g: Sequence) -> tuple[list, list]:
    """Division with remainder in Q[x]."""
    f = [Fraction(c) for c in trim(f)]
    g = [Fraction(c) for c in trim(g)]
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    lc = g[-1]
    while len(f) >= len(g) and f:
        shift = len(f) - len(g)
        coef = f[-1] / lc
        q[shift] = coef
        for i, c in enumerate(g):
            f[i + shift] -= coef * c
        f = trim(f)
    return trim(q), f


def gcd_q(f: Sequence, g: Sequence) -> list:
    """Monic gcd in Q[x]."""
    a, b = trim([Fraction(c) for c in f]), trim([Fraction(c) for c in g])
    while b:
        a, b = b, divmod_q(a, b)[1]
    if not a:
        return []
    lc = a[-1]
    return [c / lc for c in a]


def resultant(f: Sequence, g: Sequence):
    """Resultant via the Euclidean remainder sequence over Q."""
    f, g = trim(f), trim(g)
    if not f or not g:
        return 0
    m, n = len(f) - 1, len(g) - 1
    if n == 0:
        return Fraction(g[0]) ** m
    if m == 0:
        return Fraction(f[0]) ** n
    r = divmod_q(f, g)[1]
    if not r:
        return Fraction(0)
    sign = -1 if (m * n) % 2 else 1
    return sign * Fraction(g[-1]) ** (m - (len(r) - 1)) * resultant(g, r)


def discriminant(f: Sequence[int]) -> int:
    """Discriminant; 1 for linear polynomials."""
    f = trim(f)
    n = len(f) - 1
    if n < 1:
        raise ValueError("discriminant of a constant")
    if n == 1:
        return 1
    r = resultant(f, derivative(f))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    d = sign * Fraction(r) / f[-1]
    assert d.denominator == 1
    return int(d)


def integer_resultant(f: Sequence[int], g: Sequence[int]) -> int:
    r = Fraction(resultant(f, g))
    assert r.denominator == 1
    return int(r)


def to_str(f: Sequence, var: str = "t") -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            s = mono
        elif mono and c == -1:
            s = "-" + mono
        else:
            s = f"{c}{('*' + mono) if mono else ''}"
        terms.append(s)
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# real roots


def sturm_sequence(f: Sequence) -> list[list]:
    f = [Fraction(c) for c in trim(f)]
    seq = [f, derivative(f)]
    while seq[-1] and len(seq[-1]) > 1:
        r = divmod_q(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(seq, x) -> int:
    signs = []
    for s in seq:
        v = evaluate(s, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_bound(f: Sequence) -> int:
    """Integer B with every real root strictly inside (-B, B) (Cauchy)."""
    f = trim(f)
    lc = abs(Fraction(f[-1]))
    m = max((abs(Fraction(c)) for c in f[:-1]), default=Fraction(0))
    b = 1 + m / lc
    return int(b) + 1


def count_real_roots(f: Sequence, lo, hi, seq=None) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    seq = seq or sturm_sequence(f)
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def isolate_real_roots(f: Sequence, width=Fraction(1, 4)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (lo, hi], each holding exactly one real root of f.

    Every interval is refined to length at most ``width``. Roots landing on
    an endpoint are returned as degenerate intervals (r, r).
    """
    f = [Fraction(c) for c in trim(f)]
    seq = sturm_sequence(f)
    b = root_bound(f)
    out = []
    stack = [(Fraction(-b), Fraction(b))]
    while stack:
        lo, hi = stack.pop()
        k = count_real_roots(f, lo, hi, seq)
        if k == 0:
            continue
        if k == 1 and evaluate(f, hi) == 0:
            out.append((hi, hi))
            continue
        if k == 1 and hi - lo <= width:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# polynomials over F_p


def reduce_mod(f: Sequence[int], p: int) -> list[int]:
    return trim([c % p for c in f])


def mul_mod(f, g, p) -> list[int]:
    return reduce_mod(mul(f, g), p)


def divmod_mod(f, g, p) -> tuple[list[int], list[int]]:
    f = reduce_mod(f, p)
    g = reduce_mod(g, p)
    if not g:
        raise ZeroDivisionError("polynomial division by zero mod p")
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        shift = len(f) - len(g)
        coef = f[-1] * inv % p
        q[shift] = coef
        for i, c in enumerate(g):
            f[i + shift] = (f[i + shift] - coef * c) % p
        f = trim(f)
    return trim(q), f


def gcd_mod(f, g, p) -> list[int]:
    """Monic gcd over F_p."""
    a, b = reduce_mod(f, p), reduce_mod(g, p)
    while b:
        a, b = b, divmod_mod(a, b, p)[1]
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def powmod_poly(base, e: int, modulus, p: int) -> list[int]:
    result = [1]
    base = divmod_mod(base, modulus, p)[1]
    while e:
        if e & 1:
            result = divmod_mod(mul(result, base), modulus, p)[1]
        base = divmod_mod(mul(base, base), modulus, p)[1]
        e >>= 1
    return result


def split_linear_part(f, p: int) -> list[int]:
    """gcd(f, t^p - t) over F_p: the product of the distinct linear factors."""
    f = reduce_mod(f, p)
    if len(f) <= 1:
        return [1] if f else []
    xp = powmod_poly([0, 1], p, f, p)
    return gcd_mod(f, sub(xp, [0, 1]), p)


def roots_mod(f, p: int, rng: random.Random | None = None) -> list[int]:
    """Sorted distinct roots of f in F_p (Cantor-Zassenhaus for large p)."""
    f = reduce_mod(f, p)
    if not f:
        raise ValueError("zero polynomial has every residue as a root")
    if p < 64:
        return [r for r in range(p) if evaluate(f, r) % p == 0]
    g = split_linear_part(f, p)
    rng = rng or random.Random(p)
    out: list[int] = []
    stack = [g]
    while stack:
        h = stack.pop()
        d = len(h) - 1
        if d <= 0:
            continue
        if d == 1:
            out.append((-h[0] * pow(h[1], -1, p)) % p)
            continue
        while True:
            delta = rng.randrange(p)
            w = powmod_poly([delta, 1], (p - 1) // 2, h, p)
            k = gcd_mod(h, sub(w, [1]), p)
            if 0 < len(k) - 1 < d:
                stack.append(k)
                stack.append(divmod_mod(h, k, p)[0])
                break
    return sorted(out)
