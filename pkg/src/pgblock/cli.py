"""
Command-line front end: ``python -m pgblock <command> ...``.

Every command writes one JSON report (or CSV for histograms) and exits with
0 (pass), 1 (a check failed), 2 (inconclusive or a size bound tripped) or
64 (usage error).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time

import numpy as np

from . import acceptance
from .blocking import (
    BlockingContext, is_k_blocking, is_minimal, is_small, minimality_criterion, spectrum,
)
from .cache import cached_spread, default_cache_dir
from .errors import BoundExceeded, PreconditionError, AmbientMismatch
from .gf import make_tower
from .io import read_pointset, read_subspaces, parse_subspace, spread_document, write_pointset
from .pg import space, gaussian_coeff, enumerate_points
from .reduction import linear_set, is_scattered, classify_line_linear_set, certify_linear
from .verify import (
    moment_counts, gap_evaluate, scan_subline_intersections, scan_baer_intersections,
    construct_linear_blocking, audit_linearity, SOURCES,
)

REPORT_SCHEMA = "pgblock-report/1"
EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _tower_args(p, t_default=3):
    p.add_argument("--p", type=int, required=True, help="prime")
    p.add_argument("--h", type=int, default=1, help="q = p^h")
    p.add_argument("--t", type=int, default=t_default, help="top degree over GF(q)")


def _common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--output", default="-", help="file path or - for stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--cache-dir", default=None,
                   help="cache directory (default: $PGBLOCK_CACHE_DIR)")
    p.add_argument("--timing", action="store_true", help="include wall time in the report")


def build_parser():
    ap = Parser(prog="pgblock", description="Field reduction, linear sets and blocking sets.")
    sub = ap.add_subparsers(dest="command", parser_class=Parser)
    sub.required = True

    c = sub.add_parser("field", help="describe a field tower, optionally compute a op b")
    _tower_args(c, 1)
    c.add_argument("--a", type=int)
    c.add_argument("--b", type=int)
    c.add_argument("--op", choices=("add", "sub", "mul", "div", "pow", "inv"))

    c = sub.add_parser("points", help="list the points of PG(n, q^t)")
    _tower_args(c, 1)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--limit", type=int, default=1000)

    c = sub.add_parser("gaussian", help="Gaussian binomial coefficient")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--q", type=int, required=True)

    c = sub.add_parser("spread", help="build the Desarguesian spread and check it")
    _tower_args(c)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--export", help="write the spread document to this path")

    c = sub.add_parser("linearset", help="B(U) for subspaces U given in a file")
    _tower_args(c)
    c.add_argument("--n", type=int, required=True)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--subspace", help="file with one subspace per line")
    g.add_argument("--rows", help="one subspace inline, rows separated by ';'")
    c.add_argument("--save", help="write the (first) linear set as a point set file")

    c = sub.add_parser("certify", help="search for U with B(U) = B")
    c.add_argument("--pointset", required=True)
    c.add_argument("--budget", type=int)

    c = sub.add_parser("blocking-check", help="blocking, minimal, small and criterion")
    c.add_argument("--pointset", required=True)
    c.add_argument("--k", type=int, required=True)

    c = sub.add_parser("spectrum", help="intersection sizes with all d-spaces")
    c.add_argument("--pointset", required=True)
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--mod", type=int, help="flag sizes not 0 or 1 modulo this")
    c.add_argument("--sample", type=int, help="scan this many seeded random d-spaces")

    c = sub.add_parser("moments", help="intersection numbers inside a subspace pi")
    c.add_argument("--pointset", required=True)
    c.add_argument("--k", type=int, required=True)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--subspace", help="file whose first line is pi")
    g.add_argument("--rows", help="pi inline, rows separated by ';'")

    c = sub.add_parser("gap", help="sign of the gap quadratic at a boundary size")
    for flag in ("--n", "--k", "--s", "--q"):
        c.add_argument(flag, type=int, required=True)
    c.add_argument("--boundary", choices=("lower", "upper", "both"), default="both")

    c = sub.add_parser("scan-result4", help="sublines against plane-induced linear sets")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--sample", type=int, nargs=2, metavar=("SUBLINES", "PLANES"),
                   help="seeded sample sizes instead of the exhaustive scan")

    c = sub.add_parser("scan-result5", help="Baer sublines against sublines and linear sets")
    c.add_argument("--q", type=int, required=True)

    c = sub.add_parser("construct", help="build a linear k-blocking set")
    _tower_args(c)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--source", choices=SOURCES, default=SOURCES[0])
    c.add_argument("--save", help="write the point set to this path")

    c = sub.add_parser("audit", help="check hypotheses, then certify linearity")
    c.add_argument("--pointset", required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--budget", type=int)

    c = sub.add_parser("verify-all", help="run the acceptance checks")
    c.add_argument("--only", help="comma-separated criterion numbers")

    for name, p in sub.choices.items():
        _common(p)
    return ap


# -- commands ---------------------------------------------------------------

def _spread(args, n):
    tower = make_tower(args.p, args.h, args.t)
    return tower, cached_spread(tower, n, args.cache_dir)


def _subspace_list(args, sp):
    if args.rows is not None:
        return [parse_subspace(args.rows, sp)]
    subs = read_subspaces(args.subspace, sp)
    if not subs:
        raise UsageError(f"--subspace: no subspaces in {args.subspace}")
    return subs


def cmd_field(args):
    tower = make_tower(args.p, args.h, args.t)
    rep = {"tower": tower.descriptor(), "orders": {"prime": tower.p, "base": tower.q,
                                                    "top": tower.order}}
    if args.op is not None:
        if args.a is None or (args.b is None and args.op != "inv"):
            raise UsageError("--op needs --a (and --b unless inv)")
        F = tower.top
        for flag, v in (("--a", args.a), ("--b", args.b)):
            if v is not None and not 0 <= v < F.order and not (flag == "--b" and args.op == "pow"):
                raise UsageError(f"{flag}: {v} is not an element of GF({F.order})")
        if args.op == "inv":
            val = F.inv(args.a)
        elif args.op == "pow":
            val = F.pow(args.a, args.b)
        else:
            val = getattr(F, args.op)(args.a, args.b)
        rep["result"] = {"op": args.op, "a": args.a, "b": args.b, "value": int(val),
                         "decomposed": [int(c) for c in tower.decompose(val)]}
    return rep, EXIT_PASS


def cmd_points(args):
    tower = make_tower(args.p, args.h, args.t)
    sp = space(args.n, tower.top)
    listed = []
    for P in enumerate_points(sp):
        if len(listed) >= args.limit:
            break
        listed.append(list(P.coords))
    rep = {"n": args.n, "field_order": tower.order, "count": sp.num_points,
           "expected": gaussian_coeff(args.n + 1, 1, tower.order),
           "points": listed, "truncated": sp.num_points > args.limit}
    return rep, EXIT_PASS if rep["count"] == rep["expected"] else EXIT_FAIL


def cmd_gaussian(args):
    if args.n < 0 or args.k < 0:
        raise UsageError("--n and --k must be non-negative")
    return {"n": args.n, "k": args.k, "q": args.q,
            "value": gaussian_coeff(args.n, args.k, args.q)}, EXIT_PASS


def cmd_spread(args):
    tower, spread = _spread(args, args.n)
    sizes = np.bincount(spread.lookup, minlength=len(spread))
    ok = bool(np.all(sizes == spread.element_size))
    rep = {"params": {"p": args.p, "h": args.h, "t": args.t, "n": args.n},
           "small_space": f"PG({args.n},{tower.order})",
           "big_space": f"PG({spread.big.n},{tower.q})",
           "elements": len(spread), "element_points": spread.element_size,
           "partition": ok}
    if args.export:
        with open(args.export, "w") as fh:
            json.dump(spread_document(spread), fh)
        rep["exported"] = args.export
    return rep, EXIT_PASS if ok else EXIT_FAIL


def cmd_linearset(args):
    tower, spread = _spread(args, args.n)
    out = []
    first = None
    for U in _subspace_list(args, spread.big):
        B = linear_set(spread, U)
        first = first or B
        row = {"U": [list(r) for r in U.rows], "dim": U.dim, "size": len(B),
               "scattered": is_scattered(spread, U), "points": list(B.members)}
        if args.n == 1:
            row["kind"] = classify_line_linear_set(spread, U)
        out.append(row)
    if args.save:
        write_pointset(args.save, first, tower)
    return {"params": {"p": args.p, "h": args.h, "t": args.t, "n": args.n},
            "linear_sets": out}, EXIT_PASS


def _load(args):
    B, tower = read_pointset(args.pointset)
    return B, tower


def cmd_certify(args):
    B, tower = _load(args)
    spread = cached_spread(tower, B.space.n, args.cache_dir)
    cert = certify_linear(spread, B, budget=args.budget)
    rep = {"size": len(B), "status": cert.status, "nodes": cert.nodes,
           "exhaustive": cert.exhaustive, "anchor": cert.anchor,
           "witness": [list(r) for r in cert.witness.rows] if cert.witness else None}
    code = {"linear": EXIT_PASS, "nonlinear": EXIT_FAIL}.get(cert.status, EXIT_INCONCLUSIVE)
    return rep, code


def cmd_blocking_check(args):
    B, tower = _load(args)
    ctx = BlockingContext(B.space.n, args.k, tower)
    blocking, skew = is_k_blocking(B, ctx, witness=True)
    rep = {"params": ctx.params(), "size": len(B), "blocking": blocking,
           "skew_witness": [list(r) for r in skew.rows] if skew is not None else None,
           "small": is_small(B, ctx),
           "minimal": is_minimal(B, ctx, method="both") if blocking else None,
           "criterion": minimality_criterion(B, ctx)}
    return rep, EXIT_PASS if blocking else EXIT_FAIL


def cmd_spectrum(args):
    B, tower = _load(args)
    anomalous = None if args.mod is None else (lambda s: s % args.mod not in (0, 1))
    rep = spectrum(B, args.d, None, anomalous=anomalous, sample=args.sample, seed=args.seed)
    out = {"params": {"n": B.space.n, "field_order": tower.order, "d": args.d,
                      "mod": args.mod}}
    out.update(rep.to_dict())
    ok = args.mod is None or not rep.offenders
    return out, EXIT_PASS if ok else EXIT_FAIL


def cmd_moments(args):
    B, tower = _load(args)
    ctx = BlockingContext(B.space.n, args.k, tower)
    pi = _subspace_list(args, B.space)[0]
    m = moment_counts(B, pi, ctx)
    out = m.to_dict()
    out["histogram"] = {int(i): c for i, c in sorted(m.x.items())}
    out["weighted_nonnegative_if_one_mod_q"] = (not m.one_mod_q) or m.weighted >= 0
    ok = m.identities_hold and out["weighted_nonnegative_if_one_mod_q"]
    return out, EXIT_PASS if ok else EXIT_FAIL


def cmd_gap(args):
    bounds = ("lower", "upper") if args.boundary == "both" else (args.boundary,)
    evals = [gap_evaluate(args.n, args.k, args.s, args.q, b).to_dict() for b in bounds]
    ok = all(e["sign"] < 0 for e in evals)
    return {"params": {"n": args.n, "k": args.k, "s": args.s, "q": args.q},
            "evaluations": evals, "pass": ok}, EXIT_PASS if ok else EXIT_FAIL


def cmd_scan4(args):
    rep = scan_subline_intersections(args.q, workers=args.workers,
                                     sample=tuple(args.sample) if args.sample else None,
                                     seed=args.seed)
    return rep, EXIT_PASS if rep["pass"] else EXIT_FAIL


def cmd_scan5(args):
    rep = scan_baer_intersections(args.q, workers=args.workers)
    return rep, EXIT_PASS if rep["pass"] else EXIT_FAIL


def cmd_construct(args):
    tower = make_tower(args.p, args.h, args.t)
    ctx = BlockingContext(args.n, args.k, tower)
    B, U = construct_linear_blocking(ctx, args.source, seed=args.seed)
    ok = is_k_blocking(B, ctx)
    if args.save:
        write_pointset(args.save, B, tower)
    return {"params": ctx.params(), "source": args.source, "size": len(B),
            "U": [list(r) for r in U.rows], "dim_U": U.dim, "blocking": ok,
            "points": list(B.members)}, EXIT_PASS if ok else EXIT_FAIL


def cmd_audit(args):
    B, tower = _load(args)
    ctx = BlockingContext(B.space.n, args.k, tower)
    rep = audit_linearity(B, ctx, budget=args.budget)
    code = {"linear": EXIT_PASS, "inconclusive": EXIT_INCONCLUSIVE}.get(rep.conclusion,
                                                                       EXIT_FAIL)
    return rep.to_dict(), code


def cmd_verify_all(args):
    nums = [n for n, *_ in acceptance.CRITERIA]
    if args.only:
        try:
            nums = [int(x) for x in args.only.split(",")]
        except ValueError:
            raise UsageError(f"--only: expected comma-separated integers, got {args.only!r}")
        bad = [n for n in nums if not 1 <= n <= len(acceptance.CRITERIA)]
        if bad:
            raise UsageError(f"--only: unknown criteria {bad}")
    reports = [acceptance.run_criterion(n, workers=args.workers, timing=args.timing)
               for n in nums]
    ok = all(r["pass"] for r in reports)
    summary = [{"criterion": r["criterion"], "check_id": r["check_id"], "pass": r["pass"]}
               for r in reports]
    return {"summary": summary, "reports": reports, "pass": ok}, EXIT_PASS if ok else EXIT_FAIL


COMMANDS = {
    "field": cmd_field, "points": cmd_points, "gaussian": cmd_gaussian,
    "spread": cmd_spread, "linearset": cmd_linearset, "certify": cmd_certify,
    "blocking-check": cmd_blocking_check, "spectrum": cmd_spectrum,
    "moments": cmd_moments, "gap": cmd_gap, "scan-result4": cmd_scan4,
    "scan-result5": cmd_scan5, "construct": cmd_construct, "audit": cmd_audit,
    "verify-all": cmd_verify_all,
}


# -- output -----------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _config(args):
    skip = {"output", "format", "cache_dir", "workers", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _histogram(report):
    for key in ("histogram", "x"):
        if isinstance(report.get(key), dict):
            return report[key]
    return None


def render(args, report, code, elapsed=None):
    if args.format == "csv":
        hist = _histogram(report)
        if hist is None:
            raise UsageError(f"--format csv: command {args.command!r} has no histogram")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["size", "count"])
        for k, v in sorted(((int(k), v) for k, v in hist.items())):
            w.writerow([k, v])
        return buf.getvalue()
    doc = {"schema": REPORT_SCHEMA, "command": args.command, "config": _config(args),
           "report": report, "exit_code": code}
    if elapsed is not None:
        doc["wall_time_s"] = round(elapsed, 3)
    return json.dumps(_jsonable(doc), indent=1) + "\n"


def _emit(text, output):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w") as fh:
            fh.write(text)


def run(argv=None):
    """Parse argv, run the command, write the report; return the exit code."""
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_PASS if not exc.code else EXIT_USAGE
    if args.cache_dir is None:
        args.cache_dir = default_cache_dir()
    if args.workers < 1:
        sys.stderr.write("usage error: --workers must be at least 1\n")
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        report, code = COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except BoundExceeded as exc:
        report = {"error": "bound exceeded", "what": exc.what, "size": exc.size,
                  "bound": exc.bound}
        code = EXIT_INCONCLUSIVE
    except (PreconditionError, AmbientMismatch, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    elapsed = time.perf_counter() - start if args.timing else None
    try:
        text = render(args, report, code, elapsed)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    _emit(text, args.output)
    return code


def main():
    sys.exit(run())
