"""The surface N_K(x, y) = P(t) with P = P_1 ... P_n and its integral model.

Covers validation of the factor list, local solvability over Z_p by a
residue tree on t, real sign analysis by Sturm chains, invariant vectors for
the algebras (a, P_i(t)), and the adelic admissibility test for the subgroup
they generate. Invariant vectors are tuples over {0, 1} where 1 stands for
the invariant 1/2 in Q/Z.
"""
from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, floor
from typing import Mapping, NamedTuple, Optional, Sequence

from . import padic, poly
from .errors import (DegenerateField, DepthCapReached, Incomplete,
                     InternalContradiction, NotSeparable, NotSquarefree,
                     OnBadFibre, ReducibleFactor)
from .padic import DEFAULT_FACTOR_BUDGET, INFINITY, NormConic, Place
from .quadfield import QuadField, make_field

Vector = tuple  # tuple[int, ...] with entries 0 or 1


@dataclass(frozen=True)
class SurfaceSpec:
    a: int
    factors: tuple
    field: Optional[QuadField]  # None when a == 1

    @property
    def n(self) -> int:
        return len(self.factors)

    @cached_property
    def product(self) -> list[int]:
        return poly.product(self.factors)

    @property
    def degree(self) -> int:
        return poly.degree(self.product)

    @property
    def trace(self) -> int:
        return self.field.omega_trace if self.field else 0

    @property
    def norm_coef(self) -> int:
        return self.field.omega_norm if self.field else -1

    @cached_property
    def conic(self) -> NormConic:
        return NormConic(self.trace, self.norm_coef, tuple(self.product))

    def norm(self, x, y):
        return x * x + self.trace * x * y + self.norm_coef * y * y

    def P(self, t):
        return poly.evaluate(self.product, t)

    def factor_values(self, t) -> list:
        return [poly.evaluate(f, t) for f in self.factors]

    def zero(self) -> Vector:
        return (0,) * self.n

    def text(self) -> str:
        lines = [f"a = {self.a}"]
        lines += ["factor = " + ",".join(str(c) for c in f) for f in self.factors]
        return "\n".join(lines) + "\n"

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text().encode()).hexdigest()[:16]

    def __str__(self):
        rhs = " * ".join(f"({poly.to_str(f)})" for f in self.factors)
        return f"N_{self.a}(x, y) = {rhs}"


def _check_irreducible(i: int, f: list[int]) -> None:
    import sympy
    t = sympy.Symbol("t")
    expr = sum(c * t ** k for k, c in enumerate(f))
    coeff, parts = sympy.factor_list(expr)
    if abs(coeff) != 1 or len(parts) != 1 or parts[0][1] != 1:
        pieces = ([str(coeff)] if abs(coeff) != 1 else [])
        pieces += [f"({g})^{e}" if e > 1 else f"({g})" for g, e in parts]
        raise ReducibleFactor(i, " * ".join(pieces))


def validate_spec(a: int, factors: Sequence[Sequence[int]]) -> SurfaceSpec:
    if a == 0:
        raise DegenerateField("a = 0")
    if not padic.is_squarefree(a):
        raise NotSquarefree(f"{a} is not squarefree")
    K = make_field(a) if a != 1 else None
    if not factors:
        raise ValueError("at least one factor is required")
    fs = []
    for i, f in enumerate(factors):
        f = poly.trim([int(c) for c in f])
        if poly.degree(f) < 1:
            raise ValueError(f"factor {i} is constant")
        _check_irreducible(i, f)
        fs.append(tuple(f))
    for i, j in itertools.combinations(range(len(fs)), 2):
        if poly.integer_resultant(fs[i], fs[j]) == 0:
            raise NotSeparable(f"factors {i} and {j} share a root")
    if poly.discriminant(poly.product(fs)) == 0:
        raise NotSeparable("P has a repeated root")
    return SurfaceSpec(a, tuple(fs), K)


def parse_spec(text: str) -> SurfaceSpec:
    """Parse the textual format: ``a = <int>`` and ``factor = c0,c1,...`` lines."""
    a = None
    factors = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = key.strip(), value.strip()
        if key == "a":
            a = int(value)
        elif key == "factor":
            factors.append([int(c) for c in value.split(",")])
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if a is None:
        raise ValueError("missing 'a = ...' line")
    return validate_spec(a, factors)


def load_spec(path) -> SurfaceSpec:
    with open(path) as fh:
        return parse_spec(fh.read())


# ---------------------------------------------------------------------------
# bad places


def bad_primes(spec: SurfaceSpec, budget: int = DEFAULT_FACTOR_BUDGET) -> list[int]:
    """Finite part of the certified bad set; infinity is always added by callers."""
    out = {2}
    nums = [spec.a] + [poly.leading(f) for f in spec.factors]
    nums += [poly.discriminant(f) for f in spec.factors]
    nums += [poly.integer_resultant(f, g) for f, g in itertools.combinations(spec.factors, 2)]
    for m in nums:
        if m not in (0, 1, -1):
            out.update(padic.factor(m, budget).factors)
    out.update(padic.primes_up_to(spec.degree))
    return sorted(out)


def default_depth_cap(spec: SurfaceSpec, p: int) -> int:
    return padic.valuation(4 * spec.a * poly.discriminant(spec.product), p) + 3


# ---------------------------------------------------------------------------
# local analysis at a finite prime


class Witness(NamedTuple):
    """A residue triple on the quadric with a Hensel certificate.

    ``point`` solves the equation mod p^precision with t = point[2] an exact
    integer in the residue class t mod p^depth; ``grad_val`` is the p-adic
    valuation of the gradient there, and precision > 2*grad_val,
    precision - grad_val >= depth guarantee a Z_p-point in the class.
    """

    t: int
    depth: int
    point: tuple[int, int, int]
    precision: int
    grad_val: int


@dataclass
class LocalAnalysis:
    place: Place
    solvable: bool
    achievable: dict  # Vector -> Witness
    depth: int
    complete: bool = True
    nodes: int = 0

    @property
    def vectors(self) -> list[Vector]:
        return sorted(self.achievable)


def _hilbert_bit(a: int, c, p) -> int:
    return 0 if padic.hilbert_symbol(a, c, p) == 1 else 1


def _solve_x(trace: int, a: int, c: int, y: int, p: int, k: int) -> Optional[int]:
    """x with x^2 + trace*x*y + norm*y^2 = c mod p^k."""
    if trace == 0:
        return padic.sqrt_mod(c + a * y * y, p, k)
    if p == 2:
        s = padic.sqrt_mod(4 * c + a * y * y, 2, k + 2)
        if s is None:
            return None
        return (s + y) // 2  # s = y mod 2 since a is odd here
    s = padic.sqrt_mod(4 * c + a * y * y, p, k)
    if s is None:
        return None
    mod = p ** k
    return (s + y) * pow(2, -1, mod) % mod


def _y_candidates(p: int, k: int):
    if p ** k <= 4096:
        return range(p ** k)
    return [0] + [p ** j * r for j in range(k) for r in range(1, 40)]


def certify_point(spec: SurfaceSpec, p: int, t0: int, depth: int, extra: int = 16) -> Witness:
    """Certified residue triple above t = t0 with P(t0) a local norm."""
    c = spec.P(t0)
    if c == 0:
        raise OnBadFibre(f"P({t0}) = 0")
    vc = padic.valuation(c, p)
    conic = spec.conic
    for k in range(max(vc + 1, depth), vc + depth + extra):
        mod = p ** k
        for y in _y_candidates(p, k):
            x = _solve_x(spec.trace, spec.a, c, y, p, k)
            if x is None:
                continue
            assert conic.value(x, y, t0) % mod == 0
            g = min(padic.valuation(d, p) for d in conic.gradient(x, y, t0))
            if g != INFINITY and k > 2 * g and k - g >= depth:
                return Witness(t0, depth, (x % mod, y % mod, t0), k, int(g))
    raise InternalContradiction(f"no certified point over t = {t0} at p = {p}")


def _local_analysis_a1(spec: SurfaceSpec, p: int) -> LocalAnalysis:
    """a = 1: x^2 - y^2 represents c over Z_p unless p = 2 and c = 2 mod 4."""
    from .descent import difference_of_squares
    for t in range(4 * p):
        c = spec.P(t)
        if c != 0 and (p != 2 or c % 4 != 2):
            x, y = difference_of_squares(c) if c % 4 != 2 else _odd_p_square_split(c, p)
            depth = 2 if p == 2 else 1
            w = Witness(t, depth, (x, y, t), depth, 0)
            return LocalAnalysis(Place(p), True, {spec.zero(): w}, depth)
    return LocalAnalysis(Place(p), False, {}, 2)


def _odd_p_square_split(c: int, p: int) -> tuple[int, int]:
    # c = 2 mod 4 at odd p: ((c+1)/2)^2 - ((c-1)/2)^2 = c with 1/2 taken mod p^2
    inv2 = pow(2, -1, p * p)
    return ((c + 1) * inv2 % (p * p), (c - 1) * inv2 % (p * p))


def _approx_root(f, df, t0: int, p: int, d: int, prec: int) -> int:
    """Newton iteration towards the p-adic root of f near t0 (needs v(f(t0)) > 2d)."""
    m = p ** (prec + d)
    t = t0
    for _ in range(2 * prec + 4):
        val = poly.evaluate(f, t)
        if val % m == 0:
            break
        der = poly.evaluate(df, t)
        t = (t - (val // p ** d) * pow(der // p ** d, -1, m)) % m
    return t


def _root_witness(spec: SurfaceSpec, p: int, delta: int, i: int, t0: int, e: int, d: int,
                  want: Vector) -> Optional[Witness]:
    """Witness for ``want`` among t close to the root of P_i inside the class t0 mod p^e."""
    f = spec.factors[i]
    span = d + 2 * delta + 4
    tau = _approx_root(f, poly.derivative(f), t0, p, d, e + span + d + 4)
    units = range(1, 8, 2) if p == 2 else range(1, min(p, 16))
    for j in range(e, e + span):
        for u in units:
            t = tau + p ** j * u
            vals = spec.factor_values(t)
            if any(c == 0 for c in vals):
                continue
            D = max(e, max(padic.valuation(c, p) for c in vals) + delta)
            bits = tuple(_hilbert_bit(spec.a, c, p) for c in vals)
            if bits == want:
                return certify_point(spec, p, t % p ** D, D)
    return None


def local_analysis(spec: SurfaceSpec, p: int, depth_cap: Optional[int] = None) -> LocalAnalysis:
    """Solvability of the integral model over Z_p and the achievable invariant vectors.

    Breadth-first over residue classes t mod p^e. A class is decided once
    every P_i(t0) is nonzero with v(P_i(t0)) + delta <= e (delta = 1 for odd p,
    3 for p = 2), so each P_i has constant square class on it. A class where
    only P_i is undecided but Hensel certifies a simple root of P_i inside
    contributes exactly one vector, the one whose i-th entry balances the
    others; it is settled by probing t near the root instead of expanding.
    Raises DepthCapReached (carrying the partial analysis) when the cap is hit.
    """
    if not padic.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if spec.a == 1:
        return _local_analysis_a1(spec, p)
    cap = depth_cap if depth_cap is not None else default_depth_cap(spec, p)
    delta = 3 if p == 2 else 1
    derivs = [poly.derivative(f) for f in spec.factors]
    achieved: dict = {}
    unresolved = []
    nodes = 0
    max_depth = 1

    if p != 2 and spec.a % p and p > spec.degree:
        # every non-root residue is a unit class with the zero vector
        roots = set(poly.roots_mod(spec.product, p))
        free = next(r for r in range(p) if r not in roots)
        achieved[spec.zero()] = certify_point(spec, p, free, 1)
        queue = deque((r, 1) for r in sorted(roots))
    else:
        queue = deque((r, 1) for r in range(p))

    while queue:
        t0, e = queue.popleft()
        nodes += 1
        max_depth = max(max_depth, e)
        vals = spec.factor_values(t0)
        decided = [c != 0 and padic.valuation(c, p) + delta <= e for c in vals]
        if all(decided):
            bits = tuple(_hilbert_bit(spec.a, c, p) for c in vals)
            if sum(bits) % 2 == 0 and bits not in achieved:
                achieved[bits] = certify_point(spec, p, t0, e)
            continue
        open_ = [i for i, ok in enumerate(decided) if not ok]
        if len(open_) == 1:
            i = open_[0]
            d = padic.valuation(poly.evaluate(derivs[i], t0), p)
            c = vals[i]
            if e > d and (c == 0 or padic.valuation(c, p) >= e + d):
                bits = [_hilbert_bit(spec.a, vals[j], p) if j != i else 0 for j in range(spec.n)]
                bits[i] = sum(bits) % 2
                bits = tuple(bits)
                if bits in achieved:
                    continue
                w = _root_witness(spec, p, delta, i, t0, e, int(d), bits)
                if w is not None:
                    achieved[bits] = w
                    max_depth = max(max_depth, w.depth)
                    continue
        if e >= cap:
            unresolved.append((t0, e))
            continue
        step = p ** e
        queue.extend((t0 + k * step, e + 1) for k in range(p))

    result = LocalAnalysis(Place(p), bool(achieved), achieved, max_depth, nodes=nodes)
    if unresolved:
        result.complete = False
        err = DepthCapReached(p, cap)
        err.partial = result
        raise err
    return result


def local_analyses(spec: SurfaceSpec, primes=None, depth_cap: Optional[int] = None,
                   budget: int = DEFAULT_FACTOR_BUDGET) -> dict[int, LocalAnalysis]:
    primes = sorted(set(primes if primes is not None else bad_primes(spec, budget)))
    return {p: local_analysis(spec, p, depth_cap) for p in primes}


# ---------------------------------------------------------------------------
# the real place


@dataclass
class RealComponent:
    """Maximal t-interval [lo, hi] on which real points exist; None marks an infinite end.

    Finite ends are real roots of P, given by isolating intervals (l, h].
    ``int_range`` is the (possibly empty) integer range inside, or None if
    the component is unbounded.
    """

    lo: Optional[tuple[Fraction, Fraction]]
    hi: Optional[tuple[Fraction, Fraction]]
    vector: Vector
    int_range: Optional[tuple[int, int]]

    @property
    def bounded(self) -> bool:
        return self.lo is not None and self.hi is not None

    def contains(self, t) -> bool:
        if self.lo is not None and t < self.lo[0]:
            return False
        if self.hi is not None and t > self.hi[1]:
            return False
        return True


@dataclass
class RealAnalysis:
    components: list[RealComponent]
    root_bound: int

    @property
    def nonempty(self) -> bool:
        return bool(self.components)

    @property
    def unbounded_components(self) -> list[RealComponent]:
        return [c for c in self.components if not c.bounded]

    @property
    def bounded_t_range(self) -> Optional[tuple[int, int]]:
        if not self.components or self.unbounded_components:
            return None
        ranges = [c.int_range for c in self.components if c.int_range]
        if not ranges:
            return None
        return (min(r[0] for r in ranges), max(r[1] for r in ranges))


def _separate_integers(f, seq, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval (lo, hi] until no integer lies strictly inside."""
    m = floor(lo) + 1
    while m < hi:
        if poly.count_real_roots(f, lo, Fraction(m), seq) == 1:
            return lo, Fraction(m)
        lo = Fraction(m)
        m += 1
    return lo, hi


def _root_ceil(iv) -> int:
    return ceil(iv[1])


def _root_floor(f, iv) -> int:
    h = iv[1]
    if h.denominator == 1 and poly.evaluate(f, h) == 0:
        return int(h)
    return ceil(h) - 1


def _sample_after(f, seq, left: tuple, right: tuple) -> Fraction:
    """A rational strictly between the root in ``left`` and the root in ``right``."""
    s = left[1]
    if poly.evaluate(f, s) != 0:
        return s
    b = right[1]
    while True:
        mid = (s + b) / 2
        if poly.count_real_roots(f, s, mid, seq) == 0:
            return mid
        b = mid


def real_analysis(spec: SurfaceSpec) -> RealAnalysis:
    """Components of the real t-projection with their invariant vectors.

    For a < 0 these are the closures of the intervals where P > 0; P is
    separable, so it changes sign at every real root and positive gaps are
    never adjacent.
    """
    f = [Fraction(c) for c in spec.product]
    B = poly.root_bound(f)
    if spec.a > 0:
        return RealAnalysis([RealComponent(None, None, spec.zero(), None)], B)
    seq = poly.sturm_sequence(f)
    roots = [_separate_integers(f, seq, lo, hi) for lo, hi in poly.isolate_real_roots(f)]
    if roots:
        samples = [Fraction(-B - 1)]
        samples += [_sample_after(f, seq, roots[k - 1], roots[k]) for k in range(1, len(roots))]
        samples.append(Fraction(B + 1))
    else:
        samples = [Fraction(0)]
    comps = []
    for k, s in enumerate(samples):
        if poly.evaluate(f, s) < 0:
            continue
        lo = roots[k - 1] if k > 0 else None
        hi = roots[k] if k < len(roots) else None
        bits = tuple(1 if poly.evaluate(g, s) < 0 else 0 for g in spec.factors)
        ir = None
        if lo is not None and hi is not None:
            ir = (_root_ceil(lo), _root_floor(f, hi))
            if ir[0] > ir[1]:
                ir = None
        comps.append(RealComponent(lo, hi, bits, ir))
    return RealAnalysis(comps, B)


# ---------------------------------------------------------------------------
# invariants and the admissibility test


def invariant_at(spec: SurfaceSpec, place, point) -> Vector:
    """Invariant vector of the algebras (a, P_i(t)) at a local point.

    ``point`` is either t or a triple (x, y, t); only t matters.
    """
    v = Place.parse(place)
    t = point[2] if isinstance(point, tuple) else point
    vals = spec.factor_values(t)
    if any(c == 0 for c in vals):
        raise OnBadFibre(f"P({t}) = 0")
    if spec.a == 1:
        return spec.zero()
    return tuple(_hilbert_bit(spec.a, c, v) for c in vals)


def vector_str(v: Vector) -> str:
    return "(" + ", ".join("1/2" if b else "0" for b in v) + ")"


def _add(u: Vector, v: Vector) -> Vector:
    return tuple((x + y) % 2 for x, y in zip(u, v))


@dataclass
class BMVerdict:
    kind: str  # no_adelic_point | obstructed | admissible
    place: Optional[str] = None
    selection: dict = field(default_factory=dict)  # place label -> Vector
    real_component: Optional[int] = None
    admissible_components: list = field(default_factory=list)
    certificate: dict = field(default_factory=dict)


def bm_admissible(spec: SurfaceSpec, local: Mapping[int, LocalAnalysis],
                  real: RealAnalysis) -> BMVerdict:
    """Look for one achievable vector per place summing to zero.

    Places not in ``local`` are taken to contribute the zero vector only,
    which is what the certified bad set guarantees. The finite sums are
    built by a reachability pass over F_2^n; a real component is admissible
    when its vector is one of those sums.
    """
    for p in sorted(local):
        la = local[p]
        if not la.complete:
            raise Incomplete(f"local analysis at {p} is incomplete")
        if not la.solvable:
            return BMVerdict("no_adelic_point", place=str(p))
    if not real.nonempty:
        return BMVerdict("no_adelic_point", place="inf")
    reach = {spec.zero(): {}}
    for p in sorted(local):
        nxt = {}
        for total, path in reach.items():
            for v in local[p].vectors:
                s = _add(total, v)
                if s not in nxt:
                    nxt[s] = {**path, str(p): v}
        reach = nxt
    good = [k for k, c in enumerate(real.components) if c.vector in reach]
    certificate = {
        "local": {str(p): local[p].vectors for p in sorted(local)},
        "real": [c.vector for c in real.components],
    }
    if not good:
        return BMVerdict("obstructed", certificate=certificate)
    unbounded = [k for k in good if not real.components[k].bounded]
    k = unbounded[0] if unbounded else good[0]
    vec = real.components[k].vector
    selection = {**reach[vec], "inf": vec}
    return BMVerdict("admissible", selection=selection, real_component=k,
                     admissible_components=good, certificate=certificate)


def check_obstruction(spec: SurfaceSpec, certificate: dict) -> bool:
    """Independent re-check that no choice of vectors sums to zero."""
    lists = list(certificate["local"].values()) + [certificate["real"]]
    for choice in itertools.product(*lists):
        total = spec.zero()
        for v in choice:
            total = _add(total, tuple(v))
        if not any(total):
            return False
    return True
