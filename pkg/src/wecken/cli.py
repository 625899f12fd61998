"""Command line entry point: ``wecken <verb> ...``.

Exit codes: 0 success, 2 usage or parse error, 3 precondition violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import bounds as bnd
from . import reference
from .classes import class_flags, classify_t, image_word_shape
from .freegroup import WordSyntaxError, count_words, enumerate_words, format_word
from .montecarlo import (
    PREDICATES,
    SampleConfig,
    density_grid,
    estimate_density,
    exact_density,
)
from .wagner import Endomorphism, class_partition, has_remnant, remnant_bounds, tail_table

EXIT_USAGE = 2
EXIT_PRECONDITION = 3


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("WECKEN_THREADS", "1")))
    except ValueError:
        return 1


def _parse_map(args) -> Endomorphism:
    if args.n < 2:
        raise UsageError(f"rank must be >= 2, got {args.n}")
    try:
        return Endomorphism.parse(args.map, args.n)
    except (WordSyntaxError, ValueError) as exc:
        raise UsageError(str(exc)) from None


# ------------------------------------------------------------------- analyze

def analysis_report(phi: Endomorphism) -> dict:
    table = tail_table(phi)
    part = class_partition(phi, table)
    remnant = has_remnant(phi)
    n = phi.rank
    return {
        "map": phi.format(),
        "rank": n,
        "fixed_points": [
            dict(r.as_dict(), name=f"x{r.id}", w=format_word(r.w, n), wBar=format_word(r.w_bar, n))
            for r in table
        ],
        "remnant": remnant,
        "remnant_bounds": [list(b) for b in remnant_bounds(phi)],
        "classes": [
            {"members": [f"x{i}" for i in block], "index_sum": s, "essential": s != 0}
            for block, s in zip(part.classes, part.index_sums)
        ],
        "nielsen_number": part.essential_count if remnant else None,
    }


def _render_analysis(rep: dict) -> str:
    rows = [("Fixed Point", "Index", "w", "w̄")]
    for fp in rep["fixed_points"]:
        rows.append((fp["name"], f"{fp['index']:+d}", fp["w"], fp["wBar"]))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = [f"map: {rep['map']} (rank {rep['rank']})", ""]
    for r in rows:
        lines.append("  ".join(c.ljust(wd) for c, wd in zip(r, widths)).rstrip())
        if r is rows[0]:
            lines.append("  ".join("-" * wd for wd in widths))
    lines.append("")
    lines.append(f"remnant: {'yes' if rep['remnant'] else 'no'}")
    lines.append("fixed point classes:")
    for c in rep["classes"]:
        tag = "essential" if c["essential"] else "inessential"
        lines.append(f"  {{{', '.join(c['members'])}}}  index sum {c['index_sum']:+d}  {tag}")
    if rep["nielsen_number"] is None:
        lines.append("Nielsen number: not computed (no remnant; Wagner's theorem does not apply)")
    else:
        lines.append(f"Nielsen number: {rep['nielsen_number']}")
    return "\n".join(lines)


def cmd_analyze(args, out) -> int:
    phi = _parse_map(args)
    rep = analysis_report(phi)
    if args.format == "json":
        json.dump(rep, out, indent=2)
        out.write("\n")
    else:
        out.write(_render_analysis(rep) + "\n")
    if args.require_nielsen and rep["nielsen_number"] is None:
        return EXIT_PRECONDITION
    return 0


def cmd_classify(args, out) -> int:
    phi = _parse_map(args)
    flags = class_flags(phi).as_dict()
    shapes = {}
    for i in range(1, phi.rank + 1):
        sh = image_word_shape(phi, i)
        shapes[str(i)] = {
            "type": sh.type,
            "s": None if sh.s is None else format_word(sh.s, phi.rank),
            "l": None if sh.l is None else format_word(sh.l, phi.rank),
            "m": None if sh.m is None else format_word(sh.m, phi.rank),
        }
    rep = {"map": phi.format(), "flags": flags, "shapes": shapes}
    if phi.rank == 2:
        rep["t_classes"] = sorted(classify_t(phi))
    if args.format == "json":
        json.dump(rep, out, indent=2)
        out.write("\n")
    else:
        out.write(f"map: {rep['map']}\n")
        for k, v in flags.items():
            out.write(f"  {k:12s} {'yes' if v else 'no'}\n")
        for i, sh in shapes.items():
            out.write(f"  image {i}: {sh['type']}\n")
    return 0


# ------------------------------------------------------------------- density

def _check_predicate(name: str) -> None:
    if name not in PREDICATES:
        raise UsageError(f"unknown predicate {name!r}; choose from {', '.join(sorted(PREDICATES))}")


def cmd_density(args, out) -> int:
    _check_predicate(args.predicate)
    if args.n < 2 or args.p < 0 or args.trials < 1 or args.seed < 0:
        raise UsageError("need n >= 2, p >= 0, trials >= 1, seed >= 0")
    if args.p == 0 and not args.with_identity:
        raise UsageError("p = 0 without the identity leaves nothing to sample; add --with-identity")
    cfg = SampleConfig(args.n, args.p, args.trials, args.seed, args.predicate, args.with_identity)
    est = estimate_density(cfg, workers=args.threads)
    json.dump(est.as_dict(), out)
    out.write("\n")
    return 0


def cmd_exact(args, out) -> int:
    _check_predicate(args.predicate)
    try:
        frac = exact_density(args.n, args.p, args.predicate, args.with_identity, cap=args.cap)
    except OverflowError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    size = count_words(args.n, args.p) - (0 if args.with_identity else 1)
    rep = {
        "n": args.n,
        "p": args.p,
        "predicate": args.predicate,
        "include_identity": args.with_identity,
        "tuples": size**args.n,
        "hits": int(frac * size**args.n),
        "fraction": str(frac),
        "proportion": float(frac),
    }
    json.dump(rep, out)
    out.write("\n")
    return 0


# -------------------------------------------------------------------- bounds

BOUNDS_HEADER = ["n", "c_lower", "d_lower", "dstar_lower", "v_upper"]


def _g6(x: float) -> str:
    return f"{x:.6g}"


def cmd_bounds(args, out) -> int:
    ns = args.n_list
    if any(n < 2 for n in ns):
        raise UsageError("every n must be >= 2")
    rows = bnd.bounds_table(ns)
    if args.out == "json":
        json.dump({"rows": [r.as_dict() for r in rows], "constants": bnd.constants()}, out, indent=2)
        out.write("\n")
        return 0
    w = csv.writer(out, lineterminator="\n")
    w.writerow(BOUNDS_HEADER)
    for r in rows:
        w.writerow([r.n, _g6(r.c_lower), _g6(r.d_lower), _g6(r.dstar_lower), _g6(r.v_upper)])
    if 2 in ns:
        out.write(f"# w2_lower,{_g6(bnd.w2_lower())}\n")
    return 0


# -------------------------------------------------------------------- table2

def grid_csv(cells, ns, ps) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p"] + [f"n={n}" for n in ns])
    for p in ps:
        w.writerow([p] + [f"{cells[p, n].estimate.proportion:.4f}" for n in ns])
    return buf.getvalue()


def grid_report(cells, ns, ps, tolerance: float) -> tuple[str, int, int]:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "n", "estimate", "ci_low", "ci_high", "reference", "deviation", "within_tolerance"])
    within = compared = 0
    for p in ps:
        for n in ns:
            c = cells[p, n]
            e = c.estimate
            if c.reference is None:
                w.writerow([p, n, f"{e.proportion:.4f}", f"{e.ci_low:.4f}", f"{e.ci_high:.4f}", "", "", ""])
                continue
            ok = abs(c.deviation) <= tolerance
            compared += 1
            within += ok
            w.writerow([p, n, f"{e.proportion:.4f}", f"{e.ci_low:.4f}", f"{e.ci_high:.4f}",
                        f"{c.reference:.4f}", f"{c.deviation:+.4f}", "yes" if ok else "no"])
    return buf.getvalue(), within, compared


def cmd_table2(args, out) -> int:
    _check_predicate(args.predicate)
    ps = list(range(2, args.p_max + 1))
    ns = args.n_list
    ref = reference.table2() if args.predicate == "vn" else {}
    cells = density_grid(ns, ps, args.trials, args.seed, args.predicate,
                         include_identity=args.with_identity, workers=args.threads, reference=ref)
    text = grid_csv(cells, ns, ps)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    report, within, compared = grid_report(cells, ns, ps, args.tolerance)
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="") as fh:
            fh.write(report)
    if args.compare and compared:
        sys.stderr.write(f"{within}/{compared} cells within {args.tolerance} of the published table\n")
    return 0


# ------------------------------------------------------------------ selftest

def selftest_checks() -> list[tuple[str, bool]]:
    phi = Endomorphism.parse("ba^3b;ab^-1a^2", 2)
    rep = analysis_report(phi)
    ref = reference.bounds()
    checks = [
        ("example tails", [(f["w"], f["wBar"]) for f in rep["fixed_points"]] == [
            ("1", "1"), ("b", "b^-1a^-2"), ("ba", "b^-1a^-1"), ("ba^2", "b^-1"), ("ab^-1", "a^-2b")]),
        ("example indices", [f["index"] for f in rep["fixed_points"]] == [1, -1, -1, -1, 1]),
        ("example Nielsen number", rep["nielsen_number"] == 5),
        ("word counts", all(
            sum(1 for _ in enumerate_words(n, p)) == count_words(n, p) for n in (2, 3) for p in range(4))),
        ("upper bounds", all(abs(bnd.v_upper(n) - v) <= 1e-4 for n, v in ref["v_upper"].items())),
        ("d_n bounds", all(abs(bnd.d_lower(n) - v) <= 1e-4 for n, v in ref["d_lower"].items())),
        ("d*_n bounds", all(abs(bnd.dstar_lower(n) - v) <= 1e-4
                            for n, v in ref["dstar_lower"].items() if n <= 50)),
        ("23/108", bnd.w2_lower(exact=True) == Fraction(23, 108)),
    ]
    return checks


def cmd_selftest(args, out) -> int:
    checks = selftest_checks()
    for name, ok in checks:
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}\n")
    return 0 if all(ok for _, ok in checks) else 1


# ------------------------------------------------------------------- parsing

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wecken", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    def map_args(p):
        p.add_argument("--n", type=int, required=True, help="rank of the free group")
        p.add_argument("--map", required=True, help='images separated by ";", e.g. "ba^3b;ab^-1a^2"')
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("analyze", help="Wagner tails, classes and Nielsen number of one map")
    map_args(p)
    p.add_argument("--require-nielsen", action="store_true",
                   help="exit with status 3 when the Nielsen number cannot be computed")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="membership flags for every Wecken-sufficient class")
    map_args(p)
    p.set_defaults(func=cmd_classify)

    def sampling_args(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--p", type=int, required=True, help="maximal word length")
        p.add_argument("--predicate", default="vn", help=f"one of {', '.join(sorted(PREDICATES))}")
        p.add_argument("--with-identity", action="store_true",
                       help="include the identity word when sampling images")

    p = sub.add_parser("density", help="Monte Carlo density estimate as JSON")
    sampling_args(p)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("exact", help="exact density over G_p^n by enumeration")
    sampling_args(p)
    p.add_argument("--cap", type=int, default=10**7)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bounds", help="closed-form density bounds")
    p.add_argument("--n-list", type=_int_list, default=[2, 3, 5, 10, 20, 50])
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("table2", help="grid of density estimates, rows p, columns n")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p-max", type=int, default=14)
    p.add_argument("--n-list", type=_int_list, default=list(reference.TABLE2_NS))
    p.add_argument("--predicate", default="vn")
    p.add_argument("--with-identity", action="store_true",
                   help="include the identity word when sampling images")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--csv", help="write the grid here instead of stdout")
    p.add_argument("--report", help="write a per-cell comparison with the published table")
    p.add_argument("--compare", action="store_true", help="print how many cells match the published table")
    p.add_argument("--tolerance", type=float, default=0.02)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("selftest", help="quick checks against published values")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"wecken {args.verb}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
