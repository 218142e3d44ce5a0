"""``icsel`` command line: ``sweep``, ``kullback`` and ``texture``."""

from __future__ import annotations

import argparse
import sys

from . import experiments
from .errors import ConfigError, DataError, NumericError

EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4


def _max_order(text):
    try:
        k1, k2 = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise ConfigError(f"--max-order must look like K1xK2, got {text!r}") from None
    if k1 < 0 or k2 < 0:
        raise ConfigError("orders must be non-negative")
    return k1, k2


def _sweep_config(args) -> experiments.SweepConfig:
    raw = experiments.read_config(args.config) if args.config else {}
    for flag, key in [
        ("n", "n"), ("runs", "runs"), ("max_order", "max_order"),
        ("beta_grid", "beta_grid"), ("seed", "seed"), ("workers", "workers"),
    ]:
        value = getattr(args, flag, None)
        if value is not None:
            raw[key] = str(value)
    return experiments.build_config(raw)


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_sweep(args):
    cfg = _sweep_config(args)
    result = experiments.run_beta_sweep(cfg)
    _emit(experiments.sweep_csv(result), args.out)


def cmd_kullback(args):
    cfg = _sweep_config(args)
    result = experiments.run_kullback_report(cfg)
    _emit(experiments.sweep_csv(result), args.out)


def cmd_texture(args):
    m1, m2 = _max_order(args.max_order)
    try:
        res = experiments.run_texture(args.image, m1, m2, args.criterion)
    except OSError as exc:
        raise DataError(f"cannot read {args.image}: {exc}") from None
    except ValueError as exc:
        if isinstance(exc, NumericError):
            raise
        raise DataError(str(exc)) from None
    _emit(experiments.texture_csv(res), args.out)
    ascii_to = args.ascii
    if ascii_to is None and args.out not in (None, "-"):
        ascii_to = "-"
    if ascii_to:
        _emit(experiments.texture_ascii(res), ascii_to)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="icsel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, help_ in [
        ("sweep", cmd_sweep, "beta sweep of success rate, PEV and Kullback distance"),
        ("kullback", cmd_kullback, "same sweep restricted to beta <= 0.35"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="key = value file (defaults to the AR(15) setup)")
        p.add_argument("--n", type=int)
        p.add_argument("--runs", type=int)
        p.add_argument("--max-order", dest="max_order", type=int)
        p.add_argument("--beta-grid", dest="beta_grid", metavar="A:B:STEP")
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--out", default="-", help="CSV path, '-' for stdout")
        p.set_defaults(func=func)

    p = sub.add_parser("texture", help="QP1/QP2 support maps of a PGM image")
    p.add_argument("--image", required=True)
    p.add_argument("--max-order", default="18x18", metavar="K1xK2")
    p.add_argument(
        "--criterion", default="phibetamin",
        help="aic | bic | phi | phibeta:BETA | phibetamin",
    )
    p.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    p.add_argument(
        "--ascii", help="ASCII maps destination; defaults to stdout when --out is a file",
    )
    p.set_defaults(func=cmd_texture)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"icsel: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"icsel: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"icsel: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
