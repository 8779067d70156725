"""Command-line entry point.

Exit codes: 0 success, 2 reproduction mismatch, 3 certification failure,
4 input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import report as rp
from .bounds import maximize_surface
from .classjets import CATALOG_NAMES, catalog, membership_report
from .logcoeff import TaylorJet, gammas_closed, gammas_series, h22_log
from .search import certify_no_violation, empirical_max
from .series import DEFAULT_DIGITS, DEFAULT_ORDER, MIN_DIGITS, SeriesError, ts_from

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_UNCERTIFIED = 3
EXIT_INPUT = 4

SEED_ENV = "LOGHANKEL_SEED"


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--digits", type=int, default=DEFAULT_DIGITS,
                        help=f"working precision in decimal digits (>= {MIN_DIGITS})")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", help="write the report to this path instead of stdout")
    common.add_argument("--order", type=int, help="series truncation order")

    parser = _Parser(prog="loghankel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("reproduce", parents=[common], help="reproduce the reference table")

    p = sub.add_parser("bound", parents=[common], help="maximize the bounding surface of a class")
    p.add_argument("--class", dest="tag", choices=("ss", "ks"), required=True)
    p.add_argument("--method", choices=("certified", "grid"), default="certified")

    p = sub.add_parser("gamma", parents=[common], help="logarithmic coefficients and H22")
    p.add_argument("--input", required=True, help='"a2,a3,a4,a5[,a6]" or a catalog name')

    p = sub.add_parser("membership", parents=[common], help="grid test of the class condition")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--name", choices=CATALOG_NAMES)
    src.add_argument("--coeffs", help='polynomial coefficients "a2,a3,..."')
    p.add_argument("--class", dest="tag", choices=("ss", "ks"))

    p = sub.add_parser("search", parents=[common], help="Monte Carlo search for large |H22|")
    p.add_argument("--class", dest="tag", choices=("ss", "ks"), required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("catalog", parents=[common], help="show a catalog entry")
    p.add_argument("--name", choices=CATALOG_NAMES, required=True)
    return parser


def parse_rationals(text: str) -> list[Fraction]:
    try:
        values = [Fraction(part.strip()) for part in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse coefficient list {text!r}: {exc}") from None
    return values


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _config(args) -> rp.RunConfig:
    seed = getattr(args, "seed", None)
    try:
        return rp.RunConfig(
            command=args.command,
            tag=getattr(args, "tag", None),
            digits=args.digits,
            seed=default_seed() if seed is None else seed,
            trials=getattr(args, "trials", 0) or 0,
            fmt=args.format,
            out=args.out,
            order=args.order,
            method=getattr(args, "method", "certified"),
            name=getattr(args, "name", None),
            coeffs=getattr(args, "coeffs", None),
            input=getattr(args, "input", None),
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def run_reproduce(cfg):
    rows = rp.reproduce_all(cfg)
    return rows, EXIT_OK if rp.reproduction_ok(rows) else EXIT_MISMATCH


def run_bound(cfg):
    rep = maximize_surface(cfg.tag, cfg.method, cfg.digits)
    status = EXIT_OK if rep.certified or cfg.method == "grid" else EXIT_UNCERTIFIED
    return rep, status


def run_gamma(cfg):
    spec = cfg.input.strip()
    if spec in CATALOG_NAMES:
        entry = catalog(spec, order=max(cfg.order or DEFAULT_ORDER, 6), digits=cfg.digits, audit=False)
        g = gammas_series(entry.series, 5)
        data = {"input": spec, "route": "series", "gammas": g, "h22": g[1] * g[3] - g[2] ** 2}
        return data, EXIT_OK
    values = parse_rationals(spec)
    if len(values) not in (4, 5):
        raise InputError("series spec needs 4 or 5 coefficients a2,a3,a4,a5[,a6]")
    gam = gammas_closed(TaylorJet(*values))
    f = ts_from([0, 1, *values], len(values) + 1)
    series_route = gammas_series(f, len(values))
    data = {"input": spec, "route": "closed", "gammas": gam.as_list(), "h22": h22_log(gam),
            "series_route_agrees": series_route == gam.as_list()}
    return data, EXIT_OK


def run_membership(cfg):
    if cfg.name:
        entry = catalog(cfg.name, digits=cfg.digits, audit=False)
        tag = cfg.tag or entry.class_claim
        if tag is None:
            raise InputError(f"catalog entry {cfg.name!r} has no class claim; pass --class")
        return membership_report(entry, tag, order=cfg.order).to_dict(), EXIT_OK
    if cfg.tag is None:
        raise InputError("--coeffs requires --class")
    values = parse_rationals(cfg.coeffs)
    f = ts_from([0, 1, *values], len(values) + 1)
    return membership_report(f, cfg.tag, polynomial=True).to_dict(), EXIT_OK


def run_search(cfg):
    rep = empirical_max(cfg.tag, cfg.trials, cfg.seed, digits=cfg.digits)
    return rep, EXIT_OK if certify_no_violation(rep) else EXIT_UNCERTIFIED


def run_catalog(cfg):
    entry = catalog(cfg.name, order=cfg.order or DEFAULT_ORDER, digits=cfg.digits)
    data = {
        "name": entry.name,
        "class_claim": entry.class_claim,
        "coefficients": list(entry.series.coeffs),
        "constant": entry.constant,
        "analyticity_radius_estimate": entry.analyticity_radius_estimate,
        "notes": list(entry.notes),
    }
    return data, EXIT_OK


COMMANDS = {
    "reproduce": run_reproduce,
    "bound": run_bound,
    "gamma": run_gamma,
    "membership": run_membership,
    "search": run_search,
    "catalog": run_catalog,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = datetime.now(timezone.utc)
    try:
        cfg = _config(args)
        if cfg.order is not None and cfg.order < 1:
            raise InputError("--order must be positive")
        data, status = COMMANDS[args.command](cfg)
        text = rp.export_report(data, cfg, args.command, started)
    except (InputError, SeriesError, KeyError, ValueError) as exc:
        print(f"loghankel: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"loghankel: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not cfg.out:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
