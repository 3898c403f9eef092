"""Command-line entry point: ``openchainq-verify``.

Exit status 0 means every selected suite passed at every trial, 1 means some
suite failed or raised, and 2 means the configuration was rejected (unknown
suite, malformed or inadmissible parameter, bad truncation).
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .exactq import SPECTRAL_NAMES, InadmissibleError, as_scalar
from .verify import REGISTRY, all_passed, resolve_suites, run_all, to_json_lines, to_tsv, trial_points

PARAM_KEYS = ("q", "u", "xi", "xitilde", "r") + SPECTRAL_NAMES


class ConfigError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="openchainq-verify",
                                 description="Run exact identity suites on truncated Fock spaces.")
    ap.add_argument("--suite", action="append", default=None,
                    help="suite id, comma-separated ids or 'all' (repeatable; default all)")
    ap.add_argument("--fock-dim", type=int, default=10, help="truncation N (default 10)")
    ap.add_argument("--block-max", type=int, default=10, help="largest graded block m_max (default 10)")
    ap.add_argument("--trials", type=int, default=5, help="parameter points per suite (default 5)")
    ap.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    ap.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                    help="pin a parameter to a rational value, e.g. q=2/3 (repeatable)")
    ap.add_argument("--out", default=None, help="output file (default standard output)")
    ap.add_argument("--format", choices=("json", "tsv"), default="json", help="report format")
    ap.add_argument("--timing", action="store_true", help="include wall times (output is then not reproducible)")
    ap.add_argument("--list", action="store_true", help="list the registered suites and exit")
    return ap


def parse_params(items: list[str]) -> dict[str, Fraction]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in PARAM_KEYS:
            raise ConfigError("--param", f"expected KEY=VALUE with KEY in {', '.join(PARAM_KEYS)}; got {item!r}")
        try:
            out[key] = as_scalar(value)
        except (ValueError, ZeroDivisionError):
            raise ConfigError("--param", f"malformed rational {value!r} for {key}") from None
    return out


def configure(args: argparse.Namespace):
    names = None
    if args.suite:
        names = [s.strip() for item in args.suite for s in item.split(",") if s.strip()]
    try:
        suites = resolve_suites(names)
    except KeyError as exc:
        raise ConfigError("--suite", exc.args[0]) from None
    if args.trials < 1:
        raise ConfigError("--trials", "must be at least 1")
    if args.block_max < 0:
        raise ConfigError("--block-max", "must be nonnegative")
    need = max(REGISTRY[s].min_n for s in suites)
    if args.fock_dim < need:
        raise ConfigError("--fock-dim", f"the selected suites need N >= {need}")
    overrides = parse_params(args.param)
    try:
        trial_points(args.seed, args.trials, args.fock_dim, overrides)
    except InadmissibleError as exc:
        raise ConfigError("--param", f"inadmissible parameters ({exc})") from None
    return suites, overrides


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.list:
        for sid, spec in REGISTRY.items():
            print(f"{sid}\t{spec.arena}\t{spec.anchor}")
        return 0
    try:
        suites, overrides = configure(args)
    except ConfigError as exc:
        print(f"openchainq-verify: error: {exc}", file=sys.stderr)
        return 2
    reports = run_all(args.seed, args.trials, args.fock_dim, args.block_max, suites, overrides)
    text = to_tsv(reports, args.timing) if args.format == "tsv" else to_json_lines(reports, args.timing)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all_passed(reports) else 1


if __name__ == "__main__":
    sys.exit(main())
