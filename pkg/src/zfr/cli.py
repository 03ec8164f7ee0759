"""Command-line front end.

Exit codes: 0 success, 1 check/constraint/audit failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__, acceptance, report
from .classical import AuditError, gamma_bound_table, region_constants
from .config import BoundConfig, ConfigError, check_epsilon
from .exceptional import InfeasibleError, NoRootError, RegionSplit, compute_R, search_split
from .polysearch import AnnealConfig, Objective, anneal, lift_to_admissible
from .trigpoly import NotAdmissibleError, PolyError, dumps_poly, load_poly, mt16, verify_admissible

log = logging.getLogger("zfr")

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _epsilon(text: str) -> float:
    try:
        return check_epsilon(float(text))
    except (ValueError, ConfigError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError("empty range")
    return lo, hi


def _poly(args, manifest=None):
    if args.poly is None:
        return mt16()
    try:
        p = load_poly(args.poly)
    except (OSError, PolyError) as exc:
        raise UsageError(f"cannot read polynomial {args.poly}: {exc}") from None
    if manifest is not None:
        manifest.add_input(args.poly)
    return p


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- subcommands -------------------------------------------------------------

def cmd_verify_poly(args) -> int:
    if args.path is None:
        p = mt16()
    else:
        try:
            p = load_poly(args.path)
        except (OSError, PolyError) as exc:
            raise UsageError(f"cannot read polynomial {args.path}: {exc}") from None
    rep = verify_admissible(p, BoundConfig(nonneg_grid_points=args.grid))
    print(f"degree={p.degree} admissible={rep.admissible}")
    print(rep.summary())
    return OK if rep.admissible else FAILED


def cmd_tables(args) -> int:
    manifest = report.RunManifest("tables", {"epsilon": args.epsilon, "format": args.format})
    p = _poly(args, manifest)
    cfg = BoundConfig(epsilon=args.epsilon, kmax=p.degree)
    try:
        table = gamma_bound_table(cfg, clamp=args.clamp)
    except AuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    manifest.finish()
    if args.format == "json":
        text = report._json(report.table_dict(table), manifest)
    else:
        text = report.table_csv(table, manifest)
    _emit(text, args.out)
    failed = [a for a in table.audits if not a.passed]
    for a in failed:
        print(a.line(), file=sys.stderr)
    return FAILED if failed else OK


def cmd_constants(args) -> int:
    manifest = report.RunManifest("constants", {"epsilon": args.epsilon, "verify": not args.no_verify})
    p = _poly(args, manifest)
    cfg = BoundConfig(epsilon=args.epsilon, kmax=p.degree)
    rep = None if args.no_verify else verify_admissible(p, cfg)
    try:
        consts = region_constants(p, cfg, check=False)
    except AuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    manifest.finish()
    adm = None if rep is None else {"admissible": rep.admissible, "report": rep.summary()}
    if args.format == "json":
        text = report._json(report.constants_dict(consts, adm), manifest)
    else:
        text = report.constants_csv(consts, manifest)
    _emit(text, args.out)
    if rep is not None and not rep.admissible:
        print(f"warning: polynomial not certified non-negative: {rep.summary()}", file=sys.stderr)
        return FAILED
    return OK


def cmd_exceptional(args) -> int:
    manifest = report.RunManifest(
        "exceptional",
        {"d1": args.d1, "d2": args.d2, "search": [args.search_d1, args.search_d2],
         "steps": [args.d1_step, args.d2_step]},
    )
    p = _poly(args, manifest)
    if args.search_d1 or args.search_d2:
        if not (args.search_d1 and args.search_d2):
            raise UsageError("--search-d1 and --search-d2 go together")
        res = search_split(p, args.search_d1, args.search_d2, (args.d1_step, args.d2_step),
                           workers=args.threads)
        manifest.finish()
        if args.cells_out:
            Path(args.cells_out).write_text(report.cells_csv(res, manifest))
        if res.best is None:
            print("error: no feasible cell", file=sys.stderr)
            return FAILED
        best = res.best
    else:
        if args.d1 is None or args.d2 is None:
            raise UsageError("give --d1 and --d2, or --search-d1/--search-d2")
        try:
            split = RegionSplit(args.d1, args.d2)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        try:
            best = compute_R(p, split)
        except (InfeasibleError, NoRootError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return FAILED
        manifest.finish()
    _emit(report._json(report.exceptional_dict(best), manifest), args.out)
    return OK if best.constraints_ok else FAILED


def cmd_anneal(args) -> int:
    manifest = report.RunManifest("anneal", {k: v for k, v in vars(args).items()
                                             if k not in ("func",)})
    start = _poly(args, manifest)
    if args.lift:
        start = lift_to_admissible(start)
    acfg = AnnealConfig(
        degree=args.degree or start.degree,
        seed=args.seed,
        initial_temp=args.temp,
        cooling_rate=args.cooling,
        steps=args.steps,
        move_scale=args.move_scale,
        objective=args.objective,
    )
    try:
        res = anneal(start, acfg)
    except NotAdmissibleError as exc:
        print(f"error: {exc} (try --lift)", file=sys.stderr)
        return FAILED
    manifest.finish()
    if args.trace_out:
        Path(args.trace_out).write_text(res.trace_csv())
    _emit(dumps_poly(res.best), args.out)
    print(f"start={res.start_value!r} best={res.best_value!r}", file=sys.stderr)
    return OK


def cmd_reproduce_all(args) -> int:
    ctx = acceptance.Context(_poly(args))
    results = acceptance.run_checks(ctx)
    summary = acceptance.criteria_summary(results)
    failed = [r for r in results if not r.passed]
    if args.json:
        obj = {
            "version": __version__,
            "checks": [
                {"criterion": r.criterion, "name": r.name, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
            "criteria": {str(k): v for k, v in summary.items()},
            "passed": not failed,
        }
        print(json.dumps(obj, indent=2))
    else:
        for r in results:
            print(r.line())
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
        if failed:
            print(f"first failure: {failed[0].name}")
    return FAILED if failed else OK


def cmd_dump_poly(args) -> int:
    _emit(dumps_poly(mt16()), args.out)
    return OK


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zfr", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"zfr {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def poly_opt(sp):
        sp.add_argument("--poly", help="polynomial file (default: embedded degree-16 polynomial)")

    sp = sub.add_parser("verify-poly", help="certify a polynomial as admissible")
    sp.add_argument("path", nargs="?")
    sp.add_argument("--grid", type=int, default=10**6 + 1, help="grid points on [0, pi]")
    sp.set_defaults(func=cmd_verify_poly)

    sp = sub.add_parser("tables", help="B_eps, S1, S2, S tables")
    sp.add_argument("--epsilon", type=_epsilon, default=0.15)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--clamp", action="store_true", help="use max(Xi_2, 0) in Method I")
    sp.add_argument("--out")
    poly_opt(sp)
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("constants", help="zero-free region constants C1..C4")
    sp.add_argument("--epsilon", type=_epsilon, default=0.01)
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.add_argument("--no-verify", action="store_true", help="skip non-negativity certification")
    sp.add_argument("--out")
    poly_opt(sp)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("exceptional", help="low-height constant R")
    sp.add_argument("--d1", type=float)
    sp.add_argument("--d2", type=float)
    sp.add_argument("--search-d1", type=_range, metavar="LO:HI")
    sp.add_argument("--search-d2", type=_range, metavar="LO:HI")
    sp.add_argument("--d1-step", type=float, default=1e-4)
    sp.add_argument("--d2-step", type=float, default=1e-3)
    sp.add_argument("--threads", type=int, default=None, help="default: $ZFR_THREADS or 4")
    sp.add_argument("--cells-out", help="CSV of every evaluated (d1, d2) cell")
    sp.add_argument("--out")
    poly_opt(sp)
    sp.set_defaults(func=cmd_exceptional)

    sp = sub.add_parser("anneal", help="search for a better polynomial")
    sp.add_argument("--degree", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--steps", type=int, default=10_000)
    sp.add_argument("--temp", type=float, default=1.0)
    sp.add_argument("--cooling", type=float, default=0.9995)
    sp.add_argument("--move-scale", type=float, default=0.05)
    sp.add_argument("--objective", choices=[o.value for o in Objective], default="C1_ratio")
    sp.add_argument("--lift", action="store_true", help="raise a0 until the start certifies")
    sp.add_argument("--trace-out")
    sp.add_argument("--out")
    poly_opt(sp)
    sp.set_defaults(func=cmd_anneal)

    sp = sub.add_parser("reproduce-all", help="run every reproduction check")
    sp.add_argument("--json", action="store_true")
    poly_opt(sp)
    sp.set_defaults(func=cmd_reproduce_all)

    sp = sub.add_parser("dump-poly", help="write the embedded polynomial file")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_dump_poly)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"zfr: error: {exc}", file=sys.stderr)
        return USAGE
    except (ConfigError, ValueError) as exc:
        print(f"zfr: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
