import random

import pytest

import forms_oracle
from chatelet import padic, poly
from chatelet.chebotarev import (PrimeTuple, find_covering_tuple, find_lambda, totally_split,
                                 verify_tuple)
from chatelet.errors import SearchLimitExhausted
from chatelet.quadfield import (SplitType, make_field, narrow_class_group, prime_ideal_above,
                                split_type)
from chatelet.surface import validate_spec


def naive_split(f, p):
    f = poly.reduce_mod(f, p)
    if poly.degree(f) != poly.degree(poly.trim(list(f))) or f[-1] % p == 0:
        return False
    roots = [r for r in range(p) if poly.evaluate(f, r) % p == 0]
    return len(roots) == poly.degree(f)


def test_totally_split_against_root_count():
    rng = random.Random(12)
    for _ in range(20):
        deg = rng.randint(1, 4)
        f = [rng.randint(-20, 20) for _ in range(deg)] + [rng.choice([1, 2, 3, -1])]
        for p in padic.primes_up_to(200):
            lead_ok = f[-1] % p != 0
            roots = [r for r in range(p) if poly.evaluate(f, r) % p == 0]
            expected = lead_ok and len(roots) == deg
            assert totally_split(f, p) == expected, (f, p)


def _oracle_nontrivial(K, P):
    """Is the prime ideal P nonprincipal in the narrow sense, by the forms oracle?"""
    A = P.N
    B = 2 * P.b + K.omega_trace
    C = (B * B - K.d) // (4 * A)
    return forms_oracle.canonical((A, B, C)) != forms_oracle.canonical(forms_oracle.principal(K.d))


def test_imaginary_example():
    K = make_field(-5)
    G = narrow_class_group(K)
    tup = find_covering_tuple(K, G, [0, 1], search_limit=100)
    assert tup.primes == [3]
    entry = tup.entries[0]
    assert entry.cls != G.identity and _oracle_nontrivial(K, entry.ideal)
    assert verify_tuple(K, G, [0, 1], tup)


def test_trivial_group_gives_empty_tuple():
    K = make_field(2)
    tup = find_covering_tuple(K, narrow_class_group(K), [3, 3, 6, 0, 0, 1])
    assert len(tup) == 0


def test_real_quadratic_h2_smallest_prime():
    K = make_field(10)
    G = narrow_class_group(K)
    assert G.h_plus == 2
    tup = find_covering_tuple(K, G, [0, 1], search_limit=100)
    (entry,) = tup.entries
    bad = K.d
    expected = None
    for p in padic.primes_up_to(100):
        if bad % p == 0 or split_type(K, p) != SplitType.SPLIT:
            continue
        if any(_oracle_nontrivial(K, P) for P in prime_ideal_above(K, p)):
            expected = p
            break
    assert entry.p == expected


def admissible_P1(K, shift=0):
    """P_1 whose splitting field has discriminant coprime to d_K.

    Linear, or (t + shift)^2 - q with q = 1 mod 4 prime and q not dividing
    d_K, so the splitting field Q(sqrt q) has discriminant q.
    """
    out = [[shift, 1]]
    for q in (5, 13, 17, 29):
        if K.d % q:
            out.append([shift * shift - q, 2 * shift, 1])
    return out


@pytest.mark.parametrize("a", [-23, -47, -14, -21, 79, 34])
def test_tuples_cover_all_classes(a):
    K = make_field(a)
    G = narrow_class_group(K)
    for P1 in admissible_P1(K)[:3]:
        tup = find_covering_tuple(K, G, P1)
        assert sorted(e.cls for e in tup.entries) == sorted(set(range(G.h_plus)) - {G.identity})
        assert verify_tuple(K, G, P1, tup)
        for e in tup.entries:
            assert naive_split(P1, e.p)


def test_search_limit_reported():
    K = make_field(-47)
    G = narrow_class_group(K)
    with pytest.raises(SearchLimitExhausted) as info:
        find_covering_tuple(K, G, [1, 1, 1], search_limit=5)
    assert info.value.uncovered


def test_find_lambda_example():
    spec = validate_spec(17, [[-17, 0, 1]])
    lam = find_lambda(spec, 13)
    assert padic.valuation(spec.P(lam), 13) == 1
    assert lam == 2


def test_find_lambda_second_branch():
    # search for a spec and prime where the smallest root already has P(alpha) = 0 mod p^2
    rng = random.Random(1)
    hits = 0
    while hits < 20:
        c0, c1 = rng.randint(-300, 300), rng.randint(-30, 30)
        try:
            spec = validate_spec(-1, [[c0, c1, 1]])
        except Exception:
            continue
        for p in padic.primes_up_to(40)[1:]:
            if not totally_split(spec.factors[0], p) or poly.discriminant(spec.factors[0]) % p == 0:
                continue
            alpha = min(poly.roots_mod(spec.factors[0], p))
            if spec.P(alpha) % (p * p):
                continue
            lam = find_lambda(spec, p)
            assert padic.valuation(spec.P(lam), p) == 1
            assert lam != alpha
            hits += 1


def test_find_lambda_on_covering_tuples():
    rng = random.Random(100)
    checked = 0
    fields = [-5, -6, -14, -23, -47, 10, 34, 79, -21, 3]
    while checked < 100:
        a = rng.choice(fields)
        K = make_field(a)
        G = narrow_class_group(K)
        f = rng.choice(admissible_P1(K, rng.randint(-9, 9)))
        try:
            spec = validate_spec(a, [f])
        except Exception:
            continue
        tup = find_covering_tuple(K, G, spec.factors[0])
        for e in tup.entries:
            lam = find_lambda(spec, e.p, e)
            assert 0 <= lam < e.p ** 2
            assert padic.valuation(spec.P(lam), e.p) == 1
            checked += 1


def test_verify_rejects_tampered_tuple():
    K = make_field(-23)
    G = narrow_class_group(K)
    tup = find_covering_tuple(K, G, [0, 1])
    bad = PrimeTuple(tup.entries[:1] + tup.entries[:1])
    assert not verify_tuple(K, G, [0, 1], bad)
