"""Command-line front end.

Exit codes: 0 when a verdict was computed (whatever it is), 1 for usage
errors, 2 when a budget ran out or an analysis stayed incomplete.
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import Optional, Sequence

from . import chebotarev, padic, pipeline, surface
from .errors import BudgetExhausted, ChateletError, DepthCapReached, Incomplete, SearchLimitExhausted
from .quadfield import fundamental_unit, make_field, narrow_class_group, solve_norm_equation
from .report import emit_json, emit_text, make_report

EXIT_OK, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _eps(text: str) -> dict[int, int]:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        p, sep, e = item.partition(":")
        try:
            if not sep:
                raise ValueError
            out[int(p)] = int(e)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected p:e pairs, got {item!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chatelet", description="Integral points on N_K(x, y) = P(t).")
    parser.add_argument("--json", action="store_true", help="emit the machine-readable report")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("classgroup", help="narrow class group of Q(sqrt a)")
    p.add_argument("a", type=int)

    p = sub.add_parser("hilbert", help="Hilbert symbol (a, b)_v")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("place")

    p = sub.add_parser("local", help="achievable invariant vectors at a prime")
    p.add_argument("spec")
    p.add_argument("p", type=int)
    p.add_argument("--depth-cap", type=int)

    p = sub.add_parser("bm", help="Brauer-Manin admissibility of the adelic set")
    p.add_argument("spec")
    p.add_argument("--S", type=_int_list, default=[])

    p = sub.add_parser("solve-norm", help="integral solution of N_K(x, y) = N")
    p.add_argument("a", type=int)
    p.add_argument("N", type=int)

    p = sub.add_parser("chebotarev", help="split primes covering the nontrivial classes")
    p.add_argument("spec")
    p.add_argument("--search-limit", type=int, default=chebotarev.DEFAULT_SEARCH_LIMIT)

    p = sub.add_parser("find-point", help="search for an integral point")
    p.add_argument("spec")
    p.add_argument("--S", type=_int_list, default=[])
    p.add_argument("--eps", type=_eps, default={})
    p.add_argument("--budget", type=int, default=pipeline.DEFAULT_BUDGET)
    p.add_argument("--strategy", choices=("direct", "faithful"), default="direct")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("verify", help="check that (x, y, t) lies on the surface")
    p.add_argument("spec")
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p.add_argument("t", type=int)
    return parser


def _classgroup(args):
    K = make_field(args.a)
    G = narrow_class_group(K)
    result = {
        "field_discriminant": K.d,
        "h_plus": G.h_plus,
        "identity": G.identity,
        "negative_class": G.negative_class,
        "forms": [[f.A, f.B, f.C] for f in G.forms],
        "table": G.table,
    }
    if K.a > 0:
        x, y, n = fundamental_unit(K)
        result["fundamental_unit"] = {"x": x, "y": y, "norm": n}
        result["h_wide"] = G.h_plus if n == -1 else G.h_plus // 2
    return "computed", result, None


def _hilbert(args):
    place = padic.Place.parse(args.place)
    return "computed", {"place": str(place), "symbol": padic.hilbert_symbol(args.a, args.b, place)}, None


def _local(args):
    spec = surface.load_spec(args.spec)
    try:
        la = surface.local_analysis(spec, args.p, args.depth_cap)
    except DepthCapReached as exc:
        raise Incomplete(str(exc)) from exc
    result = {"prime": args.p, **pipeline._local_summary({args.p: la})[str(args.p)]}
    return "solvable" if la.solvable else "not_solvable", result, spec


def _bm(args):
    spec = surface.load_spec(args.spec)
    primes = set(surface.bad_primes(spec)) | set(args.S)
    local = pipeline._analyse(spec, primes, None)
    real = surface.real_analysis(spec)
    bm = surface.bm_admissible(spec, local, real)
    result = {"local": pipeline._local_summary(local), "real": pipeline._real_summary(real)}
    if bm.kind == "no_adelic_point":
        result["place"] = bm.place
        return "no_adelic_point", result, spec
    result["certificate"] = bm.certificate
    if bm.kind == "obstructed":
        return "obstructed_bm", result, spec
    result["selection"] = bm.selection
    result["admissible_components"] = bm.admissible_components
    return "admissible", result, spec


def _solve_norm(args):
    K = make_field(args.a)
    sol = solve_norm_equation(K, args.N)
    if sol:
        return "solvable", {"point": list(sol.point)}, None
    return "not_solvable", {"certificate": sol.certificate}, None


def _chebotarev(args):
    spec = surface.load_spec(args.spec)
    K = spec.field
    if K is None:
        return "not_applicable", {"reason": "a = 1 has no class group"}, spec
    G = narrow_class_group(K)
    tup = chebotarev.find_covering_tuple(K, G, spec.factors[0], args.search_limit)
    entries = []
    for e in tup.entries:
        entries.append({"p": e.p, "class": e.cls, "roots": list(e.roots),
                        "lambda": chebotarev.find_lambda(spec, e.p, e)})
    ok = chebotarev.verify_tuple(K, G, spec.factors[0], tup)
    return "computed", {"h_plus": G.h_plus, "tuple": entries, "verified": ok}, spec


def _trace_dict(trace) -> dict:
    if trace is None:
        return {}
    return {"strategy": trace.strategy, "lambdas_tried": trace.lambdas_tried,
            "accepted_lambda": trace.accepted_lambda, "S_star": list(trace.S_star),
            "rejections": dict(sorted(trace.rejections.items())),
            "factor_data": trace.factor_data}


def _target_dict(target) -> dict:
    if target is None:
        return {}
    return {"S_user": list(target.S_user), "epsilon": dict(sorted(target.epsilon.items())),
            "S1": list(target.S1), "S2": list(target.S2),
            "residue_targets": {str(p): list(v) for p, v in sorted(target.residue_targets.items())},
            "tuple": target.tuple.primes, "sign_at_infinity": target.sign_at_infinity,
            "selection": target.invariant_selection, "t_infinity": target.t_infinity}


def _find_point(args):
    spec = surface.load_spec(args.spec)
    rep = pipeline.find_integral_point(spec, args.S, args.eps, budget=args.budget,
                                       strategy=args.strategy, workers=args.workers)
    result = {"point": list(rep.point) if rep.point else None,
              "certificate": rep.certificate, "trace": _trace_dict(rep.trace),
              "target": _target_dict(rep.target), "notes": rep.notes,
              "checked": pipeline.check_report(spec, rep)}
    return rep.verdict, result, spec, rep.timings


def _verify(args):
    spec = surface.load_spec(args.spec)
    ok = pipeline.verify_point(spec, args.x, args.y, args.t)
    return ("true" if ok else "false"), {"norm": spec.norm(args.x, args.y), "P": spec.P(args.t)}, spec


HANDLERS = {
    "classgroup": _classgroup, "hilbert": _hilbert, "local": _local, "bm": _bm,
    "solve-norm": _solve_norm, "chebotarev": _chebotarev, "find-point": _find_point,
    "verify": _verify,
}


def run(argv: Sequence[str]) -> tuple[int, dict]:
    """Execute a command; returns the exit code and the report document."""
    argv = list(argv)
    try:
        # --json may appear anywhere on the line
        args = build_parser().parse_args([a for a in argv if a != "--json"])
    except UsageError as exc:
        return EXIT_USAGE, make_report(argv, "usage_error", error=str(exc))
    clock = time.perf_counter()
    spec = None
    try:
        out = HANDLERS[args.command](args)
    except (BudgetExhausted, Incomplete, SearchLimitExhausted) as exc:
        verdict = "budget_exhausted" if not isinstance(exc, Incomplete) else "incomplete"
        doc = make_report(argv, verdict, {"point": None}, error=f"{type(exc).__name__}: {exc}",
                          timings={"total": time.perf_counter() - clock})
        return EXIT_BUDGET, doc
    except (ChateletError, ValueError, OSError) as exc:
        return EXIT_USAGE, make_report(argv, "error", error=f"{type(exc).__name__}: {exc}")
    verdict, result, spec = out[:3]
    timings = dict(out[3]) if len(out) > 3 else {}
    timings["total"] = time.perf_counter() - clock
    code = EXIT_BUDGET if verdict == "budget_exhausted" else EXIT_OK
    return code, make_report(argv, verdict, result, spec, timings)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, doc = run(argv)
    text = emit_json(doc) if "--json" in argv else emit_text(doc)
    (sys.stderr if code == EXIT_USAGE else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
