"""Command-line interface.

Subcommands: ``closed-form``, ``compare``, ``sweep``, ``convergence``,
``verify``.  Exit codes: 0 success, 1 usage error, 2 validation error,
3 verification failure.

A flat ``key = value`` config file can pre-set any value flag; explicit
flags override it.  Seeds are accepted in decimal or 0x-prefixed hex.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ParameterError, WealthOverflowError
from .market import validate_params
from .report import (
    SweepSpec,
    closed_form_csv,
    closed_form_json,
    comparison_csv,
    comparison_json,
    convergence_csv,
    convergence_json,
    run_compare,
    run_convergence,
    run_sweep,
)
from .closedform import compare_closed_form
from .verify import DEFAULT_SEED, run_verify

USAGE_ERROR, VALIDATION_ERROR, VERIFY_FAILURE = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # Usage problems exit 1; argparse's default would exit 2, which is
    # reserved for validation errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def parse_seed(text: str) -> int:
    text = text.strip()
    value = int(text, 16) if text.lower().startswith("0x") else int(text)
    if not 0 <= value < 2**64:
        raise ValueError("seed must fit in 64 unsigned bits")
    return value


def _parse_grid(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_steps(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


_CONFIG_CONVERTERS = {
    "M": float, "rho": float, "mu": float, "sigma": float, "T": float,
    "samples": int, "seed": parse_seed, "chunks": int,
    "format": str, "out": str,
    "sweep_field": str, "grid": _parse_grid, "steps": _parse_steps,
}


def load_config(path: str) -> dict:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_CONVERTERS:
                raise ParameterError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                values[key] = _CONFIG_CONVERTERS[key](value.strip())
            except ValueError as exc:
                raise ParameterError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def _add_market_flags(parser):
    parser.add_argument("--M", type=float, default=1.0, help="total initial wealth")
    parser.add_argument("--rho", type=float, default=0.0, help="bond rate")
    parser.add_argument("--mu", type=float, default=0.5, help="stock drift")
    parser.add_argument("--sigma", type=float, default=1.0, help="stock volatility")
    parser.add_argument("--T", type=float, default=1.0, help="horizon")


def _add_common_flags(parser, with_samples=True):
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--seed", type=parse_seed, default=DEFAULT_SEED,
                        help="64-bit seed, decimal or 0x-hex")
    parser.add_argument("--chunks", type=int, default=1, help="worker count")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default="-", help="output file, '-' for stdout")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp from JSON metadata")
    if with_samples:
        parser.add_argument("--samples", type=int, default=100_000,
                            help="Monte Carlo sample count")


def build_parser() -> _Parser:
    parser = _Parser(prog="insidermc",
                     description="Insider wealth under Skorokhod vs forward noise "
                                 "interpretations: closed forms and Monte Carlo checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    command_parsers = {}

    p = command_parsers["closed-form"] = sub.add_parser(
        "closed-form", help="closed-form expectations only")
    _add_market_flags(p)
    _add_common_flags(p, with_samples=False)

    p = command_parsers["compare"] = sub.add_parser(
        "compare", help="closed forms vs the three estimators")
    _add_market_flags(p)
    _add_common_flags(p)

    p = command_parsers["sweep"] = sub.add_parser(
        "sweep", help="compare across a one-parameter grid")
    _add_market_flags(p)
    _add_common_flags(p)
    p.add_argument("--sweep-field", dest="sweep_field",
                   choices=("rho", "mu", "sigma", "T"), default="sigma")
    p.add_argument("--grid", type=_parse_grid, default=(0.1, 0.2, 0.4),
                   help="comma-separated grid values")

    p = command_parsers["convergence"] = sub.add_parser(
        "convergence", help="Euler weak-convergence study")
    _add_market_flags(p)
    _add_common_flags(p)
    p.add_argument("--steps", type=_parse_steps, default=(16, 64, 256),
                   help="comma-separated step counts")

    p = command_parsers["verify"] = sub.add_parser(
        "verify", help="run the acceptance battery")
    _add_common_flags(p, with_samples=False)

    parser.command_parsers = command_parsers
    return parser


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _apply_config(parser: _Parser, argv: list[str]) -> None:
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if known.config:
        config = load_config(known.config)
        for command_parser in parser.command_parsers.values():
            known_dests = {a.dest for a in command_parser._actions}
            command_parser.set_defaults(
                **{k: v for k, v in config.items() if k in known_dests}
            )


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (ParameterError, OSError) as exc:
        print(f"insidermc: {exc}", file=sys.stderr)
        return VALIDATION_ERROR
    args = parser.parse_args(argv)

    try:
        return _dispatch(args)
    except (ParameterError, WealthOverflowError) as exc:
        print(f"insidermc: {exc}", file=sys.stderr)
        return VALIDATION_ERROR


def _dispatch(args) -> int:
    timestamp = not getattr(args, "no_timestamp", False)

    if args.command == "closed-form":
        report = compare_closed_form(validate_params(args.M, args.rho, args.mu,
                                                     args.sigma, args.T))
        if args.format == "csv":
            _emit(closed_form_csv([report]), args.out)
        else:
            _emit(closed_form_json([report], timestamp=timestamp), args.out)
        return 0

    if args.command == "compare":
        p = validate_params(args.M, args.rho, args.mu, args.sigma, args.T)
        row = run_compare(p, args.samples, args.seed, args.chunks)
        if args.format == "csv":
            _emit(comparison_csv([row]), args.out)
        else:
            _emit(comparison_json([row], args.seed, args.samples, timestamp), args.out)
        return 0

    if args.command == "sweep":
        base = validate_params(args.M, args.rho, args.mu, args.sigma, args.T)
        spec = SweepSpec(base=base, sweep_field=args.sweep_field, grid=args.grid,
                         samples=args.samples, seed=args.seed, chunks=args.chunks)
        rows = run_sweep(spec)
        if args.format == "csv":
            _emit(comparison_csv(rows), args.out)
        else:
            _emit(comparison_json(rows, args.seed, args.samples, timestamp), args.out)
        return 0

    if args.command == "convergence":
        p = validate_params(args.M, args.rho, args.mu, args.sigma, args.T)
        rows = run_convergence(p, list(args.steps), args.samples, args.seed, args.chunks)
        if args.format == "csv":
            _emit(convergence_csv(rows), args.out)
        else:
            _emit(convergence_json(rows, args.seed, args.samples, timestamp), args.out)
        return 0

    if args.command == "verify":
        summary = run_verify(args.seed, args.chunks)
        _emit(summary.render(), args.out)
        return 0 if summary.passed else VERIFY_FAILURE

    raise AssertionError(f"unhandled command {args.command!r}")  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
