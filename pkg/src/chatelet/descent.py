"""Integral solutions of N_K(x, y) = +-p_1 ... p_{h-1} * prod(S) from rational ones.

The conversion follows narrow-class bookkeeping: factor (m + w*l), keep the
prime above each p_j and each p in S that divides it, and if the resulting
product differs from the class of (m + w*l) by the square of some [p_j],
replace that prime by its conjugate. The ideal assembled this way lies in
the class of (m + w*l), so it has a generator whose norm has the right sign.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import NamedTuple, Optional

from . import padic
from .errors import Disagreement, HypothesisViolation, InternalContradiction
from .padic import DEFAULT_FACTOR_BUDGET
from .quadfield import (NarrowClassGroup, QuadField, QuadIdeal, SplitType, class_of,
                        elt_mul, fundamental_unit, ideal_conj, ideal_divides, ideal_mul,
                        narrow_principal_generator, norm_form, prime_ideal_above, principal_ideal,
                        solve_norm_equation, split_type, unit_ideal)


class SpecialPrime(NamedTuple):
    p: int
    ideal: QuadIdeal
    cls: int


@dataclass(frozen=True)
class DescentInstance:
    field: QuadField
    class_group: NarrowClassGroup
    special_primes: tuple  # of SpecialPrime
    S: tuple
    sign: int
    rational_solution: tuple  # (m, l, k) with norm_form(m/k, l/k) = rhs

    @property
    def rhs(self) -> int:
        return self.sign * prod(sp.p for sp in self.special_primes) * prod(self.S)


def special_prime(K: QuadField, G: NarrowClassGroup, p: int, ideal: Optional[QuadIdeal] = None) -> SpecialPrime:
    P = ideal or prime_ideal_above(K, p)[0]
    return SpecialPrime(p, P, class_of(G, P))


def validate_instance(inst: DescentInstance) -> None:
    K, G = inst.field, inst.class_group
    if G.field != K:
        raise HypothesisViolation("class group belongs to another field")
    if inst.sign not in (1, -1):
        raise HypothesisViolation("sign must be +1 or -1")
    ps = [sp.p for sp in inst.special_primes]
    primes = ps + list(inst.S)
    if len(set(primes)) != len(primes) or not all(padic.is_prime(q) for q in primes):
        raise HypothesisViolation("right-hand side must be a product of distinct primes")
    for q in inst.S:
        if split_type(K, q) == SplitType.INERT:
            raise HypothesisViolation(f"{q} in S is inert")
    classes = []
    for sp in inst.special_primes:
        if split_type(K, sp.p) != SplitType.SPLIT:
            raise HypothesisViolation(f"special prime {sp.p} is not split")
        if sp.ideal not in prime_ideal_above(K, sp.p):
            raise HypothesisViolation(f"ideal is not above {sp.p}")
        if class_of(G, sp.ideal) != sp.cls:
            raise HypothesisViolation(f"wrong class recorded for {sp.p}")
        classes.append(sp.cls)
    nontrivial = set(range(G.h_plus)) - {G.identity}
    if inst.special_primes or G.h_plus > 2:
        if sorted(classes) != sorted(nontrivial):
            raise HypothesisViolation("special primes do not enumerate the nontrivial classes")
    m, l, k = inst.rational_solution
    if k <= 0:
        raise HypothesisViolation("denominator must be positive")
    if norm_form(K, m, l) != inst.rhs * k * k:
        raise HypothesisViolation("rational solution does not satisfy the equation")


def _dividing_prime(K: QuadField, I: QuadIdeal, p: int) -> QuadIdeal:
    P, Q = prime_ideal_above(K, p)
    if ideal_divides(P, I):
        return P
    if Q is not None and ideal_divides(Q, I):
        return Q
    raise InternalContradiction(f"no prime above {p} divides the element")


def rational_to_integral(inst: DescentInstance) -> tuple[int, int]:
    """Integral (x, y) with norm_form(x, y) equal to the instance's right-hand side."""
    validate_instance(inst)
    K, G = inst.field, inst.class_group
    m, l, k = inst.rational_solution
    g = gcd(gcd(m, l), k)
    m, l, k = m // g, l // g, k // g
    g = gcd(m, l)
    if g > 1:
        # g^2 divides k^2 * (squarefree rhs), so g divides k
        if k % g:
            raise InternalContradiction("common factor of m, l does not divide k")
        m, l, k = m // g, l // g, k // g
    if k == 1:
        return m, l

    sign = inst.sign
    if sign < 0 and G.unit_norm_minus_one:
        x, y = _assemble(inst, m, l, 1)
        u = fundamental_unit(K)
        return elt_mul(K, (x, y), (u[0], u[1]))
    return _assemble(inst, m, l, sign)


def _assemble(inst: DescentInstance, m: int, l: int, sign: int) -> tuple[int, int]:
    K, G = inst.field, inst.class_group
    I = principal_ideal(K, (m, l))
    target = G.identity if sign > 0 else G.negative_class
    S_ideals = [_dividing_prime(K, I, q) for q in inst.S]
    base = unit_ideal(K)
    for P in S_ideals:
        base = ideal_mul(base, P)
    specials = [sp.ideal for sp in inst.special_primes]
    full = base
    for P in specials:
        full = ideal_mul(full, P)
    Y = G.mul(class_of(G, full), G.inverse(target))
    roots = G.square_roots(Y)
    if not roots:
        raise InternalContradiction("class is not a square")
    chosen = None
    if G.identity in roots:
        chosen = specials
    else:
        for j, sp in enumerate(inst.special_primes):
            if sp.cls in roots:
                chosen = specials[:j] + [ideal_conj(sp.ideal)] + specials[j + 1:]
                break
    if chosen is None:
        raise InternalContradiction("no special prime matches a square root")
    J = base
    for P in chosen:
        J = ideal_mul(J, P)
    if class_of(G, J) != target:
        raise InternalContradiction("assembled ideal is in the wrong class")
    gen = narrow_principal_generator(K, J, sign)
    if gen is None:
        raise InternalContradiction("assembled ideal has no generator of the required sign")
    return gen


def difference_of_squares(N: int) -> Optional[tuple[int, int]]:
    """(x, y) with x^2 - y^2 = N, or None when N = 2 mod 4."""
    if N % 2:
        return (N + 1) // 2, (N - 1) // 2
    if N % 4 == 0:
        return (N + 4) // 4, (N - 4) // 4
    return None


class CrossCheck(NamedTuple):
    descent: tuple[int, int]
    search: tuple[int, int]


def cross_check(inst: DescentInstance, budget: int = DEFAULT_FACTOR_BUDGET) -> CrossCheck:
    """Run the descent and the exhaustive ideal search; both must succeed."""
    validate_instance(inst)
    K = inst.field
    try:
        a = rational_to_integral(inst)
    except InternalContradiction as exc:
        raise Disagreement(f"descent failed: {exc}") from exc
    found = solve_norm_equation(K, inst.rhs, budget)
    if not found:
        raise Disagreement(f"search failed: {found.certificate}")
    for pt in (a, found.point):
        if norm_form(K, *pt) != inst.rhs:
            raise Disagreement(f"{pt} does not have norm {inst.rhs}")
    return CrossCheck(a, found.point)
