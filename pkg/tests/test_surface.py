import random
from pathlib import Path

import pytest
import sympy

from chatelet import padic, poly
from chatelet.errors import ChateletError, NotSeparable, OnBadFibre, ReducibleFactor
from chatelet.pipeline import _analyse
from chatelet.surface import (bad_primes, bm_admissible, check_obstruction, invariant_at,
                              load_spec, local_analysis, parse_spec, real_analysis,
                              validate_spec)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def _bit(a, c, v):
    return 0 if padic.hilbert_symbol(a, c, v) == 1 else 1


def random_specs(seed, count, max_n=2):
    """Valid small specs: a from a short list, factors of degree 1 or 2."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a = rng.choice([-1, -2, -3, -5, -6, 2, 3, 5, 6, 7, 10])
        n = rng.randint(1, max_n)
        factors = []
        for _ in range(n):
            deg = rng.randint(1, 2)
            f = [rng.randint(-6, 6) for _ in range(deg)] + [rng.choice([-2, -1, 1, 2, 3])]
            factors.append(f)
        try:
            out.append(validate_spec(a, factors))
        except (ChateletError, ValueError):
            continue
    return out


# ---------------------------------------------------------------- validation and parsing


def test_validate_examples():
    s = validate_spec(2, [[3, 3, 6, 0, 0, 1]])
    assert s.P(-4) == -937 and s.degree == 5
    assert validate_spec(17, [[-17, 0, 1]]).n == 1
    with pytest.raises(ReducibleFactor) as info:
        validate_spec(2, [[0, 0, 1, 1]])
    assert info.value.index == 0
    with pytest.raises(NotSeparable):
        validate_spec(2, [[1, 1], [-1, -1]])
    with pytest.raises(ReducibleFactor):
        validate_spec(2, [[2, 2]])   # not primitive
    with pytest.raises(ValueError):
        validate_spec(2, [[5]])


def test_irreducibility_agrees_with_sympy_on_random_polys():
    rng = random.Random(4)
    t = sympy.Symbol("t")
    for _ in range(60):
        f = [rng.randint(-4, 4) for _ in range(rng.randint(2, 5))] + [1]
        expected = sympy.Poly(list(reversed(f)), t).is_irreducible
        try:
            validate_spec(2, [f])
            ok = True
        except ReducibleFactor:
            ok = False
        except NotSeparable:
            continue
        assert ok == expected, f


def test_parse_and_digest():
    text = "# example\na = 2\nfactor = 3, 3, 6, 0, 0, 1  # quintic\n"
    s = parse_spec(text)
    assert s.factors == ((3, 3, 6, 0, 0, 1),)
    assert parse_spec(s.text()) == s
    assert parse_spec(s.text()).digest == s.digest
    with pytest.raises(ValueError):
        parse_spec("factor = 1, 1\n")
    with pytest.raises(ValueError):
        parse_spec("a = 2\nb = 3\n")


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.surf")), ids=lambda p: p.name)
def test_fixtures_parse(path):
    assert load_spec(path).n >= 1


# ---------------------------------------------------------------- local analysis


EX11 = validate_spec(2, [[3, 3, 6, 0, 0, 1]])
BERG43 = validate_spec(-1, [[43, 0, 0, 0, -1]])
ISKOVSKIKH = validate_spec(-1, [[-2, 0, 1], [3, 0, -1]])
UNSOLVABLE_AT_3 = validate_spec(3, [[-4, -4, 0, 1]])


def test_local_examples():
    la = local_analysis(EX11, 5)
    assert la.solvable and la.vectors == [(0,)]
    la = local_analysis(BERG43, 2)
    assert la.solvable
    assert invariant_at(BERG43, 2, 1) == (0,)
    w = local_analysis(EX11, 2).achievable[(0,)]
    assert EX11.conic.value(*w.point) % 2 ** w.precision == 0


def _check_witnesses(spec, p, la):
    for v, w in la.achievable.items():
        assert invariant_at(spec, p, w.t) == v
        assert padic.hilbert_symbol(spec.a, spec.P(w.t), p) == 1
        assert spec.conic.value(*w.point) % p ** w.precision == 0
        assert w.precision > 2 * w.grad_val and w.precision - w.grad_val >= w.depth
        # locally constant on the certified class
        for j in range(1, 6):
            t = w.t + j * p ** w.depth
            if spec.P(t) != 0:
                assert invariant_at(spec, p, t) == v


@pytest.mark.parametrize("p", [3, 5, 7])
def test_local_analysis_against_residue_enumeration(p):
    for spec in random_specs(100 + p, 20):
        la = local_analysis(spec, p)
        seen = set()
        for t in range(p ** 3):
            vals = spec.factor_values(t)
            if any(c == 0 for c in vals):
                continue
            bits = tuple(_bit(spec.a, c, p) for c in vals)
            if sum(bits) % 2 == 0:
                seen.add(bits)
        assert seen <= set(la.vectors), (spec, seen, la.vectors)
        assert la.solvable == bool(la.vectors)
        _check_witnesses(spec, p, la)


def test_local_analysis_at_two():
    for spec in random_specs(222, 20):
        la = local_analysis(spec, 2)
        seen = set()
        for t in range(2 ** 6):
            vals = spec.factor_values(t)
            if all(c != 0 for c in vals):
                bits = tuple(_bit(spec.a, c, 2) for c in vals)
                if sum(bits) % 2 == 0:
                    seen.add(bits)
        assert seen <= set(la.vectors)
        _check_witnesses(spec, 2, la)


def test_unsolvable_local_instance():
    # t^3 - 4t - 4 = -1 mod 3 for every t, and -1 is not a norm from Q_3(sqrt 3)
    spec = UNSOLVABLE_AT_3
    la = local_analysis(spec, 3)
    assert not la.solvable and la.vectors == []
    for t in range(27):
        assert padic.hilbert_symbol(3, spec.P(t), 3) == -1


def test_good_places_give_zero_vector():
    for spec in random_specs(7, 15):
        B = set(bad_primes(spec))
        for p in padic.primes_up_to(60):
            if p in B:
                continue
            la = local_analysis(spec, p)
            assert la.vectors == [spec.zero()], (spec, p)


# ---------------------------------------------------------------- invariants


def test_sum_relation_and_single_factor_triviality():
    rng = random.Random(9)
    for spec in random_specs(55, 30, max_n=3):
        places = [padic.REAL] + [padic.Place(q) for q in bad_primes(spec)]
        for _ in range(20):
            t = rng.randint(-300, 300)
            if spec.P(t) == 0:
                continue
            for v in places:
                vec = invariant_at(spec, v, t)
                assert sum(vec) % 2 == _bit(spec.a, spec.P(t), v)
                if spec.n == 1 and padic.hilbert_symbol(spec.a, spec.P(t), v) == 1:
                    assert vec == (0,)


def test_invariant_on_bad_fibre():
    spec = validate_spec(17, [[-17, 0, 1]])
    with pytest.raises(OnBadFibre):
        invariant_at(validate_spec(2, [[0, 1]]), 3, 0)
    assert invariant_at(spec, "inf", 5) == (0,)
    # a < 0: entry i is 1/2 exactly when P_i(t) < 0; here P_1(0) = -2, P_2(0) = 3
    assert invariant_at(ISKOVSKIKH, "inf", 0) == (1, 0)


# ---------------------------------------------------------------- real place


def test_real_examples():
    real = real_analysis(BERG43)
    assert real.bounded_t_range == (-2, 2)
    assert not real.unbounded_components
    real = real_analysis(EX11)
    assert real.nonempty and len(real.unbounded_components) == 1
    real = real_analysis(validate_spec(17, [[-17, 0, 1]]))
    assert [c.vector for c in real.components] == [(0,)]


def test_real_components_against_sympy():
    t = sympy.Symbol("t")
    for spec in random_specs(31, 25, max_n=3):
        if spec.a > 0:
            continue
        real = real_analysis(spec)
        P = spec.product
        roots = sympy.Poly(list(reversed(P)), t).real_roots()
        assert sum(1 for c in real.components for end in (c.lo, c.hi) if end) == len(roots)
        lo = min([int(sympy.floor(r)) for r in roots] + [0]) - 3
        hi = max([int(sympy.ceiling(r)) for r in roots] + [0]) + 3
        for x in range(lo, hi + 1):
            value = poly.evaluate(P, x)
            if value > 0:
                assert any(c.contains(x) for c in real.components), (spec, x)
            if value < 0:
                assert not any(c.int_range and c.int_range[0] <= x <= c.int_range[1]
                               for c in real.components), (spec, x)
        for c in real.components:
            for end in (c.lo, c.hi):
                if end:
                    l, h = (sympy.Rational(q.numerator, q.denominator) for q in end)
                    assert sum(1 for r in roots if l < r <= h) == 1


# ---------------------------------------------------------------- admissibility


def _bm(spec):
    local = _analyse(spec, bad_primes(spec), None)
    return bm_admissible(spec, local, real_analysis(spec))


def test_bm_examples():
    bm = _bm(EX11)
    assert bm.kind == "admissible"
    assert all(v == (0,) for v in bm.selection.values())
    bm = _bm(validate_spec(17, [[-17, 0, 1]]))
    assert bm.kind == "admissible" and all(v == (0,) for v in bm.selection.values())
    bm = _bm(UNSOLVABLE_AT_3)
    assert bm.kind == "no_adelic_point" and bm.place == "3"


def test_iskovskikh_obstruction():
    bm = _bm(ISKOVSKIKH)
    assert bm.kind == "obstructed"
    assert check_obstruction(ISKOVSKIKH, bm.certificate)


def test_bm_selection_sums_to_zero():
    for spec in random_specs(77, 20, max_n=3):
        try:
            bm = _bm(spec)
        except ChateletError:
            continue
        if bm.kind != "admissible":
            continue
        total = spec.zero()
        for v in bm.selection.values():
            total = tuple((x + y) % 2 for x, y in zip(total, v))
        assert total == spec.zero()
