"""Command-line interface: root data, characters, vertex series and checks.

Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from ._version import build_id
from .fixedpoints import Chamber, FixedPointError, builder_zero_dim, slant_sum_fixed_point
from .io import (dump, load_point, load_theory, point_to_json, series_to_json, theory_to_json)
from .kacmoody import (CartanData, OrbitError, WeightContext, convolution_tangent_character,
                       dim_identity_check, dual_tangent_character, extremal_word, gt_character,
                       positive_real_roots, root_report)
from .scalars import Monomial, PoleError, SamplePoint, SchemaError, UsageError, format_monomial
from .theory import SlantSumSpec, quiver_variety_dim, slant_sum
from .vertex import DegenerateLocusError, Descendant, vertex
from .verifiers import (CheckReport, check_branching, check_dim_corpus, check_factorization,
                        check_ruijsenaars, check_twistshift, check_zero_dim_conjecture,
                        slant_sum_vertex)

__all__ = ["main", "build_parser", "run_check"]

INPUT_ERROR = 3
SEED_ENV = "SLANT_SEED"
_INPUT_ERRORS = (SchemaError, UsageError, FixedPointError, OrbitError, OSError, ValueError)


# argument helpers ---------------------------------------------------------------

def _common(sub: bool) -> argparse.ArgumentParser:
    """Global flags; on subcommands they default to SUPPRESS so either position works."""
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda x: argparse.SUPPRESS) if sub else (lambda x: x)
    p.add_argument("--order", type=int, default=d(4), help="total z-degree cutoff")
    p.add_argument("--seed", type=int, default=d(None),
                   help=f"first sample seed (default ${SEED_ENV} or 1)")
    p.add_argument("--samples", type=int, default=d(2), help="number of seeded sample points")
    p.add_argument("--q-equals-hbar", action="store_true", default=d(False))
    p.add_argument("--format", choices=["json", "text"], default=d("text"))
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes")
    p.add_argument("--kappa", action="store_true", default=d(False),
                   help="print q/hbar powers as kappa")
    return p


def _seeds(args) -> list:
    first = args.seed
    if first is None:
        first = int(os.environ.get(SEED_ENV, "1"))
    return [first + i for i in range(max(1, args.samples))]


def _path(args, p):
    return Path(getattr(args, "base", ".")) / p


def _twist(items) -> dict:
    sigma = {}
    for item in items or ():
        key, eq, s = item.rpartition("=")
        j, dot, k = key.rpartition(".")
        if not eq or not dot or not j:
            raise UsageError(f"twist {item!r} is not of the form vertex.slot=integer")
        sigma[(j, int(k))] = int(s)
    return sigma


def _descendant(args, text):
    if not text:
        return None
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
    else:
        with open(_path(args, text), encoding="utf-8") as fh:
            obj = json.load(fh)
    return Descendant.make(obj)


def _chamber(text):
    if not text:
        return None
    return Chamber(tuple(int(x) for x in text.split(",")))


def _point_or_builder(args, T):
    if getattr(args, "point", None):
        p = load_point(_path(args, args.point))
        if p.theory != T:
            raise SchemaError("the fixed point belongs to a different theory")
        return p
    return builder_zero_dim(T)


def _slant(args):
    T1 = load_theory(_path(args, args.first))
    T2 = load_theory(_path(args, args.second))
    spec = SlantSumSpec(T1, args.star1, T2, args.star2)
    p1 = p2 = None
    if args.point1:
        p1 = load_point(_path(args, args.point1))
    if args.point2:
        p2 = load_point(_path(args, args.point2))
    return spec, p1, _chamber(args.chamber), p2


def _root_name(r, labels) -> str:
    return " + ".join((f"{c}*" if c != 1 else "") + f"α[{l}]" for c, l in zip(r, labels) if c)


def _hbar_term(e: int, root, labels) -> str:
    h = "" if e == 0 else ("ħ*" if e == 1 else f"ħ^{e}*")
    exp = ""
    for c, l in zip(root, labels):
        if c:
            coef = {1: "+", -1: "-"}.get(c, f"{c:+d}*")
            exp += f"{coef}α[{l}]"
    return f"{h}e^({exp.lstrip('+')})"


def _mono(args, m: Monomial) -> str:
    return format_monomial(m, kappa=args.kappa)


def _point_text(args, p) -> str:
    return "\n".join(f"V[{u}] = " + (" + ".join(_mono(args, m) for m in c) or "0")
                     for u, c in zip(p.theory.vertices, p.chars))


def _series_text(s) -> str:
    return s.to_text()


def _emit(args, obj, text: str) -> None:
    print(dump(obj) if args.format == "json" else text)


# commands -----------------------------------------------------------------------

def cmd_roots(args) -> int:
    T = load_theory(_path(args, args.theory))
    cd = CartanData.from_theory(T)
    roots = sorted(positive_real_roots(cd, args.height), key=lambda r: (sum(r), tuple(-x for x in r)))
    _emit(args, {"labels": list(cd.labels), "roots": [list(r) for r in roots]},
          "\n".join(_root_name(r, cd.labels) for r in roots))
    return 0


def cmd_pairings(args) -> int:
    T = load_theory(_path(args, args.theory))
    ctx = WeightContext.from_theory(T)
    rep = root_report(ctx)
    labels = ctx.cartan.labels
    obj = {"pairings": dict(zip(labels, ctx.pairings())), "in_orbit": rep.in_orbit,
           "truncated": rep.truncated, "word": [labels[i] for i in rep.word],
           "roots": [{"root": list(r), "pairing": p} for r, p in rep.roots]}
    lines = [f"pairings: {obj['pairings']}", f"in orbit: {rep.in_orbit}",
             f"word: {obj['word']}"]
    lines += [f"({_root_name(r, labels)}, mu) = {p}" for r, p in rep.roots]
    _emit(args, obj, "\n".join(lines))
    return 0


def cmd_dim(args) -> int:
    T = load_theory(_path(args, args.theory))
    d = quiver_variety_dim(T)
    _emit(args, {"dim": d}, str(d))
    return 0


def cmd_dimcheck(args) -> int:
    if args.corpus:
        return _report(args, check_dim_corpus(args.corpus, _seeds(args)[0]))
    if not args.theory:
        raise UsageError("dimcheck needs --theory or --corpus")
    T = load_theory(_path(args, args.theory))
    ctx = WeightContext.from_theory(T)
    rep = extremal_word(ctx)
    ok = dim_identity_check(ctx, rep)
    _emit(args, {"ok": ok, "roots_total": rep.total(), "sum_v": sum(T.v)},
          f"{'pass' if ok else 'fail'}: sum of -<beta,mu> = {rep.total()}, |v| = {sum(T.v)}")
    return 0 if ok else 1


def _character(args, terms, labels) -> int:
    obj = [{"hbar": e, "root": list(r)} for e, r in terms]
    _emit(args, {"labels": list(labels), "terms": obj, "count": len(terms)},
          " + ".join(_hbar_term(e, r, labels) for e, r in terms) or "0")
    return 0


def cmd_tangent(args) -> int:
    ctx = WeightContext.from_theory(load_theory(_path(args, args.theory)))
    return _character(args, dual_tangent_character(ctx), ctx.cartan.labels)


def cmd_convtangent(args) -> int:
    ctxs = [WeightContext.from_theory(load_theory(_path(args, f))) for f in args.theory]
    labels = {c.cartan.labels for c in ctxs}
    if len(labels) != 1 or len({c.cartan for c in ctxs}) != 1:
        raise SchemaError("convolution components must share one quiver")
    return _character(args, convolution_tangent_character(ctxs), ctxs[0].cartan.labels)


def cmd_gtchar(args) -> int:
    ctx = WeightContext.from_theory(load_theory(_path(args, args.theory)))
    s = gt_character(ctx, args.order)
    _emit(args, series_to_json(s), s.to_text("y"))
    return 0


def cmd_vertex(args) -> int:
    T = load_theory(_path(args, args.theory))
    p = _point_or_builder(args, T)
    point = SamplePoint.from_seed(_seeds(args)[0], T.framing_slots(), args.q_equals_hbar)
    sign = args.descendant_sign
    s = vertex(T, p, args.order, point, _descendant(args, args.descendant),
               sigma=_twist(args.twist), normalized=args.normalized, jobs=args.jobs,
               descendant_sign=sign)
    obj = series_to_json(s)
    obj["seed"] = point.seed
    _emit(args, obj, _series_text(s))
    return 0


def cmd_slantsum(args) -> int:
    spec, p1, chamber, p2 = _slant(args)
    T = slant_sum(spec)
    obj = {"theory": theory_to_json(T)}
    lines = [str(T)]
    if (p1 is None) != (p2 is None):
        raise UsageError("give both --point1 and --point2, or neither")
    if p1 is not None:
        p = slant_sum_fixed_point(spec, p1, chamber, p2)
        obj["point"] = point_to_json(p)
        lines.append(_point_text(args, p))
        if args.vertex:
            point = SamplePoint.from_seed(_seeds(args)[0], T.framing_slots(), args.q_equals_hbar)
            s, deformed = slant_sum_vertex(spec, p1, chamber, p2, args.order, point,
                                           normalized=args.normalized, jobs=args.jobs)
            obj["vertex"] = series_to_json(s)
            obj["vertex"]["deformed"] = deformed
            lines.append(_series_text(s))
    _emit(args, obj, "\n".join(lines))
    return 0


def run_check(args) -> CheckReport:
    """Run one check from parsed arguments and return its report."""
    seeds = _seeds(args)
    kind = args.check
    if kind == "conjecture":
        T = load_theory(_path(args, args.theory))
        p = _point_or_builder(args, T)
        b = [int(x) for x in args.b.split(",")] if args.b else None
        return check_zero_dim_conjecture(T, p, args.order, seeds, args.dual, b,
                                         q_equals_hbar=args.q_equals_hbar, jobs=args.jobs)
    if kind in ("branching", "factorization"):
        spec, p1, chamber, p2 = _slant(args)
        if p1 is None or p2 is None:
            raise UsageError(f"{kind} needs --point1 and --point2")
        tau1, tau2 = _descendant(args, args.tau1), _descendant(args, args.tau2)
        if kind == "branching":
            return check_branching(spec, p1, chamber, p2, args.order, seeds, tau1, tau2,
                                   args.q_equals_hbar, args.jobs)
        return check_factorization(spec, p1, chamber, p2, args.order, seeds, args.variant,
                                   tau1, tau2, args.jobs)
    if kind == "twistshift":
        T = load_theory(_path(args, args.theory))
        p = _point_or_builder(args, T)
        return check_twistshift(T, p, _twist(args.twist), args.order, seeds,
                                _descendant(args, args.descendant))
    if kind == "ruijsenaars":
        return check_ruijsenaars(args.n, args.order, seeds, args.jobs)
    if kind == "dimcorpus":
        return check_dim_corpus(args.count, seeds[0])
    raise UsageError(f"unknown check {kind}")


def _report(args, rep: CheckReport) -> int:
    _emit(args, rep.as_dict(), rep.summary())
    return rep.exit_code


def cmd_check(args) -> int:
    return _report(args, run_check(args))


def _sweep_job(payload) -> dict:
    argv, base = payload
    parser = build_parser()
    try:
        args = _finish(parser.parse_args(["check", *argv]))
        args.base = base
        out = run_check(args).as_dict()
    except _INPUT_ERRORS as err:
        out = {"check": argv[0] if argv else "?", "status": "error", "notes": [str(err)],
               "version": build_id()}
    except (PoleError, DegenerateLocusError) as err:
        out = {"check": argv[0] if argv else "?", "status": "inconclusive", "notes": [str(err)],
               "version": build_id()}
    except SystemExit:
        out = {"check": "?", "status": "error", "notes": [f"bad arguments {argv}"],
               "version": build_id()}
    out["argv"] = list(argv)
    return out


def cmd_sweep(args) -> int:
    """Run a batch of checks in a worker pool and append each report to a JSON-lines ledger.

    The config is {"checks": [[argv...], ...]}, each argv as for ``slantsum check``;
    relative paths resolve against the config file's directory.
    """
    cfg_path = _path(args, args.config)
    with open(cfg_path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    jobs = cfg.get("checks") if isinstance(cfg, dict) else cfg
    if not isinstance(jobs, list) or not all(isinstance(j, list) for j in jobs):
        raise SchemaError("sweep config must be {\"checks\": [[argv...], ...]}")
    base = str(cfg_path.parent)
    payloads = [([str(x) for x in j], base) for j in jobs]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_sweep_job, payloads))
    else:
        results = [_sweep_job(p) for p in payloads]
    statuses = []
    with open(_path(args, args.ledger), "a", encoding="utf-8") as fh:
        for res in results:
            res["timestamp"] = datetime.now(timezone.utc).isoformat()
            fh.write(json.dumps(res, sort_keys=True, ensure_ascii=False) + "\n")
            statuses.append(res["status"])
    lines = [f"{r['argv'][0] if r['argv'] else '?'}: {r['status']}" for r in results]
    _emit(args, {"statuses": statuses, "ledger": str(args.ledger)}, "\n".join(lines))
    if "error" in statuses:
        return INPUT_ERROR
    if "fail" in statuses:
        return 1
    return 2 if "inconclusive" in statuses else 0


# parser -------------------------------------------------------------------------

def _slant_args(p) -> None:
    p.add_argument("--first", required=True, help="first theory file")
    p.add_argument("--star1", required=True, help="gauge vertex of the first theory")
    p.add_argument("--second", required=True, help="second theory file")
    p.add_argument("--star2", required=True, help="framing vertex of the second theory")
    p.add_argument("--point1", help="fixed point of the first theory")
    p.add_argument("--point2", help="fixed point of the second theory")
    p.add_argument("--chamber", help="comma-separated order of the star1 weights, e.g. 1,0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slantsum", parents=[_common(False)],
                                     description="Quiver gauge theories, slant sums and vertex functions.")
    parser.add_argument("--version", action="version", version=build_id())
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("roots", "positive real roots up to a height")
    p.add_argument("--theory", "--quiver", dest="theory", required=True)
    p.add_argument("--height", type=int, default=2)
    p.set_defaults(func=cmd_roots)

    p = add("pairings", "pairings of simple roots with mu and the inversion roots")
    p.add_argument("--theory", required=True)
    p.set_defaults(func=cmd_pairings)

    p = add("dim", "dimension of the quiver variety")
    p.add_argument("--theory", required=True)
    p.set_defaults(func=cmd_dim)

    p = add("dimcheck", "dimension identity on one theory or a random corpus")
    p.add_argument("--theory")
    p.add_argument("--corpus", type=int, default=0, help="size of a random corpus")
    p.set_defaults(func=cmd_dimcheck)

    p = add("tangent", "conjectured tangent character from roots")
    p.add_argument("--theory", required=True)
    p.set_defaults(func=cmd_tangent)

    p = add("gtchar", "graded character series from roots")
    p.add_argument("--theory", required=True)
    p.set_defaults(func=cmd_gtchar)

    p = add("convtangent", "tangent character of a convolution of several theories")
    p.add_argument("--theory", nargs="+", required=True, help="component theories, in order")
    p.set_defaults(func=cmd_convtangent)

    p = add("vertex", "vertex series at one sample point")
    p.add_argument("--theory", required=True)
    p.add_argument("--point", help="fixed point file (default: zero-dimensional builder)")
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--twist", action="append", help="framing cocharacter, vertex.slot=s")
    p.add_argument("--descendant", help='JSON {"vertex": [[coef, [exps]], ...]} or a file')
    p.add_argument("--descendant-sign", type=int, choices=[1, -1])
    p.set_defaults(func=cmd_vertex)

    p = add("slantsum", "slant sum of theories and fixed points")
    _slant_args(p)
    p.add_argument("--vertex", action="store_true", help="also print the vertex at the summed point")
    p.add_argument("--normalized", action="store_true")
    p.set_defaults(func=cmd_slantsum)

    p = add("check", "run a verification check")
    checks = p.add_subparsers(dest="check", required=True)

    c = checks.add_parser("conjecture", parents=[common], help="vertex factorization over roots")
    c.add_argument("--theory", required=True)
    c.add_argument("--point")
    c.add_argument("--dual", action="store_true")
    c.add_argument("--b", help="comma-separated Kahler exponents overriding the defaults")
    for name in ("branching", "factorization"):
        c = checks.add_parser(name, parents=[common])
        _slant_args(c)
        c.add_argument("--tau1")
        c.add_argument("--tau2")
        if name == "factorization":
            c.add_argument("--variant", choices=["general", "q=hbar", "w=1"], default="general")
    c = checks.add_parser("twistshift", parents=[common], help="twisted vertex against the shift")
    c.add_argument("--theory", required=True)
    c.add_argument("--point")
    c.add_argument("--twist", action="append", required=True)
    c.add_argument("--descendant")
    c = checks.add_parser("ruijsenaars", parents=[common], help="flag branching")
    c.add_argument("--n", type=int, default=3)
    c = checks.add_parser("dimcorpus", parents=[common], help="random root corpus")
    c.add_argument("--count", type=int, default=50)
    p.set_defaults(func=cmd_check)

    p = add("sweep", "batch of checks appended to a JSON-lines ledger")
    p.add_argument("--config", required=True)
    p.add_argument("--ledger", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def _finish(args):
    defaults = vars(_common(False).parse_args([]))
    for k, v in defaults.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    if args.order < 0 or args.jobs < 1 or args.samples < 1:
        raise UsageError("--order must be >= 0, --jobs and --samples >= 1")
    return args


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code not in (0, None) else 0
    try:
        args = _finish(args)
        return args.func(args)
    except _INPUT_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return INPUT_ERROR
    except (PoleError, DegenerateLocusError) as err:
        print(f"inconclusive: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
