"""Search for integral points on N_K(x, y) = P(t).

The local and real analyses either certify an obstruction or provide an
adelic target. The search then walks an arithmetic progression of t-values
chosen so that every local condition is kept. Strategy ``direct`` hands
P(lambda) to the norm-equation solver. Strategy ``faithful`` follows the
conditional existence argument: twists c_i matching the local symbols, a
lambda for which every c_i P_i(lambda) has at most one prime outside the
extended place set (to the first power), a rational solution, and the
class-group descent to an integral one.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import prod
from typing import Mapping, Optional, Sequence

from . import padic, poly
from .chebotarev import DEFAULT_SEARCH_LIMIT, PrimeTuple, find_covering_tuple, find_lambda
from .descent import DescentInstance, SpecialPrime, difference_of_squares, rational_to_integral
from .errors import (BudgetExhausted, DepthCapReached, Incomplete, Inconsistent,
                     InternalContradiction)
from .padic import DEFAULT_FACTOR_BUDGET
from .quadfield import (SplitType, narrow_class_group, norm_form, solve_norm_equation,
                        solve_norm_equation_rational, split_type)
from .surface import (BMVerdict, LocalAnalysis, RealAnalysis, SurfaceSpec, bad_primes,
                      bm_admissible, check_obstruction, local_analysis, real_analysis)

DEFAULT_BUDGET = 10 ** 5
VERDICTS = ("point_found", "obstructed_bm", "obstructed_infinity", "no_adelic_point",
            "budget_exhausted")


@dataclass
class AdelicTarget:
    S_user: tuple
    epsilon: dict                   # p -> e_p, approximation t = t_p mod p^e_p
    S1: tuple
    S2: tuple
    residue_targets: dict           # p -> (residue, exponent)
    tuple: PrimeTuple
    sign_at_infinity: int           # direction of lambda
    invariant_selection: dict       # place label -> vector
    t_infinity: int = 0

    @property
    def modulus(self) -> int:
        return prod(p ** e for p, (_, e) in self.residue_targets.items())

    def residue(self) -> int:
        items = sorted(self.residue_targets.items())
        if not items:
            return 0
        return padic.crt([r for _, (r, _) in items], [p ** e for p, (_, e) in items])[0]


@dataclass
class TwistVector:
    c: list
    auxiliary: tuple = ()


@dataclass
class SearchTrace:
    strategy: str
    lambdas_tried: int = 0
    accepted_lambda: Optional[int] = None
    factor_data: list = field(default_factory=list)
    S_star: tuple = ()
    rejections: dict = field(default_factory=dict)

    def reject(self, reason: str) -> None:
        self.rejections[reason] = self.rejections.get(reason, 0) + 1


@dataclass
class SolveReport:
    verdict: str
    point: Optional[tuple] = None
    certificate: dict = field(default_factory=dict)
    trace: Optional[SearchTrace] = None
    target: Optional[AdelicTarget] = None
    notes: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)


# surfaces cited in the literature as having no integral points for archimedean reasons
LITERATURE_OBSTRUCTED = {(-1, ((33, 0, 0, 0, -1),))}


def verify_point(spec: SurfaceSpec, x: int, y: int, t: int) -> bool:
    return spec.norm(x, y) == spec.P(t)


# ---------------------------------------------------------------------------
# twists


def _solve_f2(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> Optional[list[int]]:
    """Solve A x = b over F_2 by elimination; None when inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(n):
        pr = next((i for i in range(row, len(aug)) if aug[i][col]), None)
        if pr is None:
            continue
        aug[row], aug[pr] = aug[pr], aug[row]
        for i in range(len(aug)):
            if i != row and aug[i][col]:
                aug[i] = [(u + v) % 2 for u, v in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    if any(r[-1] and not any(r[:-1]) for r in aug):
        return None
    x = [0] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][-1]
    return x


def _place_of(label: str):
    return padic.REAL if label == "inf" else padic.Place(int(label))


def compute_twists(spec: SurfaceSpec, target: AdelicTarget, aux_limit: int = 400) -> TwistVector:
    """c_i with (a, c_i)_v equal to the selected symbol of (a, P_i) at every place v.

    Unknowns are the exponents mod 2 of -1 and of each finite prime of S1;
    split primes outside S1 are added as extra generators until every system
    is solvable (their own symbol equations hold automatically).
    """
    sel = target.invariant_selection
    labels = sorted(sel, key=lambda s: (s == "inf", int(s) if s != "inf" else 0))
    for i in range(spec.n):
        if sum(sel[v][i] for v in labels) % 2:
            raise Inconsistent(f"selection for generator {i} does not sum to zero")
    if spec.a == 1:
        return TwistVector([1] * spec.n)
    places = [_place_of(v) for v in labels]
    gens = [-1] + [p for p in target.S1]
    aux: list[int] = []

    def bit(b, v):
        return 0 if padic.hilbert_symbol(spec.a, b, v) == 1 else 1

    rows_cache = {}

    def rows():
        for b in gens + aux:
            if b not in rows_cache:
                rows_cache[b] = [bit(b, v) for v in places]
        cols = [rows_cache[b] for b in gens + aux]
        return [[c[j] for c in cols] for j in range(len(places))]

    S1 = set(target.S1)
    candidates = (q for q in padic.primes_up_to(10 ** 6)
                  if q not in S1 and spec.a % q and q != 2
                  and padic.kronecker_symbol(spec.a, q) == 1)
    cs = [None] * spec.n
    while True:
        A = rows()
        for i in range(spec.n):
            if cs[i] is None:
                x = _solve_f2(A, [sel[v][i] for v in labels])
                if x is not None:
                    cs[i] = prod(b for b, e in zip(gens + aux, x) if e)
        if all(c is not None for c in cs):
            break
        if len(aux) >= aux_limit:
            raise Inconsistent("no twist found with the allowed auxiliary primes")
        aux.append(next(candidates))
    for i, c in enumerate(cs):
        for v, lab in zip(places, labels):
            assert bit(c, v) == sel[lab][i]
    used = tuple(q for q in aux if any(c % q == 0 for c in cs))
    return TwistVector(cs, used)


# ---------------------------------------------------------------------------
# search context


@dataclass
class _Context:
    spec: SurfaceSpec
    strategy: str
    r: int
    M: int
    direction: int
    start: int
    S2: tuple
    tuple_primes: tuple
    twists: list
    G: object
    specials: tuple
    factor_budget: int
    constraints: dict

    def lam(self, k: int) -> int:
        if self.strategy == "direct":
            # 0, -1, 1, -2, 2, ... around r
            j = (k + 1) // 2 * (1 if k % 2 == 0 else -1)
            return self.r + j * self.M
        base = self.start
        return base + self.direction * k * self.M


def _first_at_least(r: int, M: int, bound: int) -> int:
    """Smallest integer >= bound congruent to r mod M."""
    return r + -((r - bound) // M) * M


def _try_lambda(ctx: _Context, lam: int):
    """(point, info) for an accepted lambda, or (None, rejection reason)."""
    spec = ctx.spec
    for p, (res, e) in ctx.constraints.items():
        assert (lam - res) % p ** e == 0
    value = spec.P(lam)
    if value == 0:
        return (0, 0, lam), {"lambda": lam, "zero_fibre": True}
    if spec.a == 1:
        pt = difference_of_squares(value)
        if pt is None:
            return None, "two_mod_four"
        return (pt[0], pt[1], lam), {"lambda": lam}
    K = spec.field
    if ctx.strategy == "direct":
        try:
            sol = solve_norm_equation(K, value, ctx.factor_budget)
        except BudgetExhausted:
            return None, "factoring_budget"
        if not sol:
            return None, "not_a_norm:" + sol.certificate["kind"]
        return (sol.point[0], sol.point[1], lam), {"lambda": lam}
    return _try_faithful(ctx, lam, value)


def _split_off(n: int, primes) -> tuple[dict, int]:
    exps = {}
    for p in primes:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            exps[p] = e
    return exps, n


def _try_faithful(ctx: _Context, lam: int, value: int):
    spec = ctx.spec
    K = spec.field
    qs = []
    data = []
    for i, f in enumerate(spec.factors):
        v = ctx.twists[i] * poly.evaluate(f, lam)
        exps, rest = _split_off(abs(v), ctx.S2)
        if rest != 1:
            if not padic.is_prime(rest):
                return None, "h1_condition"
            qs.append(rest)
        data.append({"i": i, "delta": 1 if v > 0 else -1, "q": rest if rest != 1 else None,
                     "exponents": exps})
    exps, rest = _split_off(abs(value), ctx.S2)
    odd = sorted(p for p, e in exps.items() if e % 2)
    for p in ctx.tuple_primes:
        if exps.get(p) != 1:
            return None, "tuple_valuation"
    S_star = tuple(sorted(set(p for p in odd if p not in ctx.tuple_primes) | set(qs)))
    if any(split_type(K, p) == SplitType.INERT for p in S_star):
        return None, "inert_in_S_star"
    sign = 1 if value > 0 else -1
    rhs = sign * prod(ctx.tuple_primes) * prod(S_star)
    square = abs(value) // abs(rhs)
    s = padic.isqrt_exact(square)
    rat = solve_norm_equation_rational(K, rhs, ctx.G, ctx.factor_budget,
                                       known=tuple(ctx.tuple_primes) + S_star)
    if rat is None:
        return None, "no_rational_solution"
    inst = DescentInstance(K, ctx.G, ctx.specials, S_star, sign, rat)
    x0, y0 = rational_to_integral(inst)
    info = {"lambda": lam, "factor_data": data, "S_star": S_star, "rational_solution": rat}
    return (s * x0, s * y0, lam), info


def _scan_chunk(ctx: _Context, ks: range):
    rejections = {}
    for k in ks:
        lam = ctx.lam(k)
        pt, info = _try_lambda(ctx, lam)
        if pt is not None:
            return k, pt, info, rejections
        rejections[info] = rejections.get(info, 0) + 1
    return None, None, None, rejections


# ---------------------------------------------------------------------------
# driver


def _analyse(spec: SurfaceSpec, primes, depth_cap) -> dict[int, LocalAnalysis]:
    out = {}
    for p in sorted(set(primes)):
        try:
            out[p] = local_analysis(spec, p, depth_cap)
        except DepthCapReached as exc:
            raise Incomplete(str(exc)) from exc
    return out


def _bounded_scan(spec: SurfaceSpec, real: RealAnalysis, bm: BMVerdict, factor_budget: int):
    """Try every integer t in the admissible bounded components."""
    checked = []
    for k in bm.admissible_components:
        comp = real.components[k]
        if comp.int_range is None:
            continue
        lo, hi = comp.int_range
        for t in range(lo, hi + 1):
            value = spec.P(t)
            if value == 0:
                return (0, 0, t), checked
            if spec.a == 1:
                pt = difference_of_squares(value)
                if pt:
                    return (pt[0], pt[1], t), checked
                checked.append({"t": t, "P": value, "reason": "two_mod_four"})
                continue
            sol = solve_norm_equation(spec.field, value, factor_budget)
            if sol:
                return (sol.point[0], sol.point[1], t), checked
            checked.append({"t": t, "P": value, "reason": sol.certificate})
    return None, checked


def _pick_direction(spec: SurfaceSpec, real: RealAnalysis, bm: BMVerdict) -> int:
    comp = real.components[bm.real_component]
    if comp.lo is None and comp.hi is None:
        lc = poly.leading(spec.product)
        if lc > 0:
            return 1
        return -1 if spec.degree % 2 else 1
    return 1 if comp.hi is None else -1


def find_integral_point(spec: SurfaceSpec, S_user: Sequence[int] = (), epsilon: Optional[Mapping[int, int]] = None,
                        budget: int = DEFAULT_BUDGET, strategy: str = "direct",
                        factor_budget: int = DEFAULT_FACTOR_BUDGET, workers: int = 1,
                        depth_cap: Optional[int] = None,
                        search_limit: int = DEFAULT_SEARCH_LIMIT) -> SolveReport:
    if strategy not in ("direct", "faithful"):
        raise ValueError(f"unknown strategy {strategy!r}")
    clock = time.perf_counter()
    timings = {}
    epsilon = dict(epsilon or {})
    S_user = tuple(sorted(set(S_user) | set(epsilon)))
    for p in S_user:
        if not padic.is_prime(p):
            raise ValueError(f"{p} is not prime")
    B = bad_primes(spec, factor_budget)
    local = _analyse(spec, set(B) | set(S_user), depth_cap)
    real = real_analysis(spec)
    bm = bm_admissible(spec, local, real)
    timings["analysis"] = time.perf_counter() - clock
    certificate = {"bad_primes": B, "local": _local_summary(local), "real": _real_summary(real)}
    if bm.kind == "no_adelic_point":
        certificate["place"] = bm.place
        return SolveReport("no_adelic_point", certificate=certificate, timings=timings)
    if bm.kind == "obstructed":
        certificate["obstruction"] = bm.certificate
        return SolveReport("obstructed_bm", certificate=certificate, timings=timings)
    certificate["selection"] = bm.selection

    comps = real.components
    if all(comps[k].bounded for k in bm.admissible_components):
        pt, checked = _bounded_scan(spec, real, bm, factor_budget)
        ranges = [comps[k].int_range for k in bm.admissible_components]
        certificate["scanned"] = {"ranges": ranges, "checked": checked}
        timings["search"] = time.perf_counter() - clock - timings["analysis"]
        if pt is not None:
            notes = ["admissible real projection is bounded; point found by scan"]
            if (spec.a, spec.factors) in LITERATURE_OBSTRUCTED:
                notes.append("literature discrepancy: this surface is listed as obstructed at "
                             "infinity, but the scan found an integral point")
            return SolveReport("point_found", point=pt, certificate=certificate, timings=timings,
                               notes=notes)
        return SolveReport("obstructed_infinity", certificate=certificate, timings=timings)

    direction = _pick_direction(spec, real, bm)
    K = spec.field
    G = narrow_class_group(K) if K is not None else None
    tup = PrimeTuple(())
    residues: dict = {}
    constraints: dict = {}
    for p in S_user:
        w = local[p].achievable[bm.selection[str(p)]]
        e_user = epsilon.get(p, w.depth)
        e = max(e_user, w.depth)
        residues[p] = (w.t % p ** e, e)
        constraints[p] = (w.t % p ** e_user, e_user)
    S1 = tuple(sorted(set(B) | set(S_user)))
    S2 = S1
    twists = [1] * spec.n
    specials: tuple = ()
    selection = dict(bm.selection)
    notes = []
    if strategy == "faithful":
        if G is not None and G.h_plus > 2:
            tup = find_covering_tuple(K, G, spec.factors[0], search_limit, exclude=S1)
            specials = tuple(SpecialPrime(e.p, e.ideal, e.cls) for e in tup.entries)
            for e in tup.entries:
                lam_p = find_lambda(spec, e.p, e)
                residues[e.p] = (lam_p, 2)
                selection[str(e.p)] = spec.zero()
            notes.append("splitting field of P_1 assumed to have discriminant coprime to d_K "
                         "(asserted by user, not checked)")
        elif G is not None:
            notes.append(f"narrow class number {G.h_plus} <= 2: no special primes needed")
        S1 = tuple(sorted(set(S1) | set(tup.primes)))
        for p in S1:
            if p not in residues:
                w = local[p].achievable[selection[str(p)]]
                residues[p] = (w.t % p ** w.depth, w.depth)
    target = AdelicTarget(S_user, epsilon, S1, S1, residues, tup, direction, selection,
                          t_infinity=real.root_bound)
    if strategy == "faithful":
        tw = compute_twists(spec, target)
        twists = tw.c
        S2 = tuple(sorted(set(S1) | set(tw.auxiliary)))
        for q in tw.auxiliary:
            free = next(t for t in range(q) if spec.P(t) % q)
            residues[q] = (free, 1)
        target.S2 = S2
        certificate["twists"] = twists

    r, M = target.residue(), target.modulus
    start = r
    if strategy == "faithful":
        bound = real.root_bound
        start = _first_at_least(r, M, bound) if direction > 0 else -_first_at_least(-r, M, bound)
    ctx = _Context(spec, strategy, r, M, direction, start, S2, tup.primes, twists, G, specials,
                   factor_budget, constraints)
    trace = SearchTrace("direct" if strategy == "direct" else "theorem-faithful")
    found = _run_search(ctx, budget, workers, trace)
    timings["search"] = time.perf_counter() - clock - timings["analysis"]
    if found is None:
        return SolveReport("budget_exhausted", certificate=certificate, trace=trace, target=target,
                           timings=timings, notes=notes)
    pt, info = found
    x, y, t = pt
    if not verify_point(spec, x, y, t):
        raise InternalContradiction(f"search produced a non-point {pt}")
    for p, (res, e) in constraints.items():
        if (t - res) % p ** e:
            raise InternalContradiction(f"point misses the {p}-adic target")
    trace.accepted_lambda = t
    trace.factor_data = info.get("factor_data", [])
    trace.S_star = tuple(info.get("S_star", ()))
    return SolveReport("point_found", point=pt, certificate=certificate, trace=trace, target=target,
                       timings=timings, notes=notes)


def _run_search(ctx: _Context, budget: int, workers: int, trace: SearchTrace):
    chunk = 256
    if workers <= 1:
        for lo in range(0, budget, chunk):
            k, pt, info, rej = _scan_chunk(ctx, range(lo, min(lo + chunk, budget)))
            for key, v in rej.items():
                trace.rejections[key] = trace.rejections.get(key, 0) + v
            if k is not None:
                trace.lambdas_tried = k + 1
                return pt, info
        trace.lambdas_tried = budget
        return None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for base in range(0, budget, chunk * workers):
            ranges = [range(lo, min(lo + chunk, budget))
                      for lo in range(base, min(base + chunk * workers, budget), chunk)]
            results = list(pool.map(_scan_chunk, [ctx] * len(ranges), ranges))
            for k, pt, info, rej in results:
                for key, v in rej.items():
                    trace.rejections[key] = trace.rejections.get(key, 0) + v
                if k is not None:
                    trace.lambdas_tried = k + 1
                    return pt, info
    trace.lambdas_tried = budget
    return None


# ---------------------------------------------------------------------------
# summaries and certificate checking


def _local_summary(local: Mapping[int, LocalAnalysis]) -> dict:
    out = {}
    for p, la in sorted(local.items()):
        out[str(p)] = {
            "solvable": la.solvable,
            "depth": la.depth,
            "vectors": {"".join(map(str, v)): {"t": w.t, "depth": w.depth, "point": list(w.point),
                                               "precision": w.precision, "grad_val": w.grad_val}
                        for v, w in sorted(la.achievable.items())},
        }
    return out


def _real_summary(real: RealAnalysis) -> list:
    out = []
    for c in real.components:
        out.append({
            "lo": None if c.lo is None else [str(c.lo[0]), str(c.lo[1])],
            "hi": None if c.hi is None else [str(c.hi[0]), str(c.hi[1])],
            "vector": "".join(map(str, c.vector)),
            "int_range": None if c.int_range is None else list(c.int_range),
        })
    return out


def _two_squares_free(spec: SurfaceSpec, value: int) -> bool:
    """Exhaustive check that the definite form misses ``value``."""
    K = spec.field
    # x^2 + T x y + N y^2 >= c*y^2 with c = (4N - T^2)/4 = |d_K|/4
    ymax = int((4 * value / abs(K.d)) ** 0.5) + 2
    for y in range(-ymax, ymax + 1):
        # solve x^2 + T y x + (N y^2 - value) = 0 for integer x
        disc = (K.omega_trace * y) ** 2 - 4 * (K.omega_norm * y * y - value)
        if disc < 0:
            continue
        r = padic.isqrt_exact(disc) if disc >= 0 else None
        if r is not None and (r - K.omega_trace * y) % 2 == 0:
            return False
    return True


def check_report(spec: SurfaceSpec, report: SolveReport) -> bool:
    """Independent validation of a report's claim."""
    if report.verdict == "point_found":
        x, y, t = report.point
        if not verify_point(spec, x, y, t):
            return False
        if report.target is not None:
            for p, e in report.target.epsilon.items():
                w_res = report.target.residue_targets[p][0]
                if (t - w_res) % p ** e:
                    return False
        return True
    if report.verdict == "obstructed_bm":
        return check_obstruction(spec, report.certificate["obstruction"])
    if report.verdict == "obstructed_infinity":
        if spec.a > 0:
            return False
        for rng in report.certificate["scanned"]["ranges"]:
            if rng is None:     # component without integers
                continue
            lo, hi = rng
            for t in range(lo, hi + 1):
                value = spec.P(t)
                if value == 0 or (value > 0 and not _two_squares_free(spec, value)):
                    return False
        # re-sum the certified local vectors: every real component they can
        # balance must be bounded and its integer range must have been scanned
        reach = {"0" * spec.n}
        for data in report.certificate["local"].values():
            reach = {"".join(str((int(u) + int(v)) % 2) for u, v in zip(r, w))
                     for r in reach for w in data["vectors"]}
        scanned = [tuple(r) for r in report.certificate["scanned"]["ranges"] if r is not None]
        for comp in _real_summary(real_analysis(spec)):
            if comp["vector"] not in reach:
                continue
            if comp["lo"] is None or comp["hi"] is None:
                return False
            if comp["int_range"] is not None and tuple(comp["int_range"]) not in scanned:
                return False
        return True
    if report.verdict == "no_adelic_point":
        place = report.certificate["place"]
        if place == "inf":
            return not real_analysis(spec).nonempty
        try:
            return not local_analysis(spec, int(place)).solvable
        except DepthCapReached:
            return False
    return report.verdict == "budget_exhausted"
