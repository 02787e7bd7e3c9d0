"""Prime tuples covering the nontrivial narrow classes, found by enumeration.

For each candidate prime we check directly that it splits in K, that P_1
splits into distinct linear factors mod p, and which class the prime ideal
above it has; no Galois-theoretic input is used.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from . import padic, poly
from .errors import ConstructionFailed, SearchLimitExhausted
from .quadfield import (NarrowClassGroup, QuadField, QuadIdeal, SplitType, class_of,
                        ideal_to_form, prime_ideal_above, split_type)

DEFAULT_SEARCH_LIMIT = 10 ** 5


class TupleEntry(NamedTuple):
    p: int
    ideal: QuadIdeal
    cls: int
    roots: tuple


@dataclass(frozen=True)
class PrimeTuple:
    entries: tuple

    @property
    def primes(self) -> list[int]:
        return [e.p for e in self.entries]

    def __len__(self):
        return len(self.entries)


def totally_split(f, p: int) -> bool:
    """True when f mod p is a product of deg f distinct linear factors."""
    fp = poly.reduce_mod(f, p)
    if poly.degree(fp) != poly.degree(f):
        return False
    return poly.degree(poly.split_linear_part(fp, p)) == poly.degree(f)


def find_covering_tuple(K: QuadField, G: NarrowClassGroup, P1, search_limit: int = DEFAULT_SEARCH_LIMIT,
                        exclude: Iterable[int] = ()) -> PrimeTuple:
    """Split primes p <= search_limit whose ideal classes cover every nontrivial class.

    Each class takes the smallest qualifying prime. Primes dividing
    lc(P1) * d_K * disc(P1) and those in ``exclude`` are skipped.
    """
    needed = set(range(G.h_plus)) - {G.identity}
    if not needed:
        return PrimeTuple(())
    bad = poly.leading(P1) * K.d * poly.discriminant(P1)
    skip = set(exclude)
    found: dict[int, TupleEntry] = {}
    for p in padic.primes_up_to(search_limit):
        if p in skip or bad % p == 0:
            continue
        if split_type(K, p) != SplitType.SPLIT or not totally_split(P1, p):
            continue
        for P in prime_ideal_above(K, p):
            c = class_of(G, P)
            if c in needed and c not in found:
                found[c] = TupleEntry(p, P, c, tuple(poly.roots_mod(P1, p)))
                break
        if len(found) == len(needed):
            return PrimeTuple(tuple(found[c] for c in sorted(found)))
    raise SearchLimitExhausted(needed - set(found), search_limit)


def verify_tuple(K: QuadField, G: NarrowClassGroup, P1, tup: PrimeTuple) -> bool:
    """Recheck a tuple from scratch, including a class group built without the cache."""
    from .quadfield import _compute_class_group
    fresh = _compute_class_group.__wrapped__(K)
    classes = []
    for e in tup.entries:
        if split_type(K, e.p) != SplitType.SPLIT:
            return False
        if sum(1 for r in range(e.p) if poly.evaluate(P1, r) % e.p == 0) != poly.degree(P1):
            return False
        if poly.leading(P1) % e.p == 0:
            return False
        classes.append(fresh.index(ideal_to_form(e.ideal)))
    nontrivial = set(range(fresh.h_plus)) - {fresh.identity}
    return len(set(classes)) == len(classes) and set(classes) == nontrivial


def find_lambda(spec, p: int, entry: Optional[TupleEntry] = None) -> int:
    """lambda in [0, p^2) with v_p(P(lambda)) = 1, from a root of P_1 mod p."""
    P1 = spec.factors[0]
    roots = entry.roots if entry is not None else tuple(poly.roots_mod(P1, p))
    for alpha in roots:
        for lam in (alpha, alpha + p):
            if padic.valuation(spec.P(lam), p) == 1:
                return lam
    raise ConstructionFailed(f"no lambda with v_{p}(P) = 1")
