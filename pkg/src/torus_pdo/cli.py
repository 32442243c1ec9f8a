"""Command line interface: ``torus-pdo <command> ...``.

Every command writes one record per line (``--format jsonl``, the default)
or a CSV table with dotted column names (``--format csv``) to ``--out`` or
stdout.  Exit status is 0 when every verdict passes, 2 when a verification
fails and 1 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import io as dumps
from .harness import CHECKS, ExperimentSpec, HypothesisError, run_check
from .maximal import Weight, hardy_littlewood, muckenhoupt_constant, sharp_maximal
from .quantize import apply_operator
from .spaces import besov_norm, lp_norm, sobolev_norm
from .symbols import fit_symbol_class, make_bessel_symbol, make_oscillating_symbol, seminorms
from .torus_core import PeriodicFunction, SpectralCoefficients, TorusGrid, forward_dft, inverse_dft, random_trig_polynomial

logger = logging.getLogger("torus_pdo")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def flatten(d: dict, prefix: str = "") -> dict:
    """Nested dicts and lists to a flat map with dotted keys."""
    out = {}
    items = d.items() if isinstance(d, dict) else enumerate(d)
    for k, v in items:
        key = f"{prefix}{k}"
        if isinstance(v, (dict, list, tuple)) and len(v) > 0:
            out.update(flatten(v if isinstance(v, dict) else list(v), key + "."))
        elif isinstance(v, (dict, list, tuple)):
            out[key] = ""
        else:
            out[key] = v
    return out


def format_records(records: list, fmt: str) -> str:
    if fmt == "jsonl":
        return "".join(json.dumps(r) + "\n" for r in records)
    rows = [flatten(r) for r in records]
    cols = []
    for row in rows:
        cols.extend(c for c in row if c not in cols)
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# inputs


def _grid(args) -> TorusGrid:
    return TorusGrid(args.n, args.N)


def _input_function(args) -> PeriodicFunction:
    if args.input:
        obj = dumps.load(args.input)
        if not isinstance(obj, PeriodicFunction):
            raise UsageError(f"{args.input} does not hold a function dump")
        return obj
    return random_trig_polynomial(_grid(args), args.seed, args.trial)


def _symbol(args, grid: TorusGrid):
    if args.family == "bessel":
        return make_bessel_symbol(grid, None, args.m)
    delta = args.rho if args.delta is None else args.delta
    return make_oscillating_symbol(grid, None, args.m, args.rho, delta, seed=args.symbol_seed)


def _maybe_dump(obj, args, rec: dict):
    if getattr(args, "dump", None):
        dumps.dump(obj, args.dump)
        rec["dump"] = str(args.dump)


# ---------------------------------------------------------------------------
# commands


def cmd_transform(args) -> list:
    if args.inverse:
        if not args.input:
            raise UsageError("--inverse needs --input pointing at a spectrum dump")
        c = dumps.load(args.input)
        if not isinstance(c, SpectralCoefficients):
            raise UsageError(f"{args.input} does not hold a spectrum dump")
        f = inverse_dft(c)
        rec = {"command": "transform", "direction": "inverse", "n": c.window.n, "N": c.window.N,
               "l2_norm": lp_norm(f, 2)}
        _maybe_dump(f, args, rec)
        return [rec]
    f = _input_function(args)
    c = forward_dft(f)
    back = inverse_dft(c, f.grid)
    rec = {
        "command": "transform", "direction": "forward", "n": f.grid.n, "N": f.grid.N,
        "l2_norm": lp_norm(f, 2),
        "coeff_l2": float(np.sqrt(np.sum(np.abs(c.coeffs) ** 2))),
        "roundtrip_error": float(np.max(np.abs(back.samples - f.samples))),
    }
    _maybe_dump(c, args, rec)
    return [rec]


def cmd_apply(args) -> list:
    f = _input_function(args)
    sigma = _symbol(args, f.grid)
    g = apply_operator(sigma, f)
    rec = {"command": "apply", "n": f.grid.n, "N": f.grid.N, "symbol": sigma.params,
           "input_l2": lp_norm(f, 2), "output_l2": lp_norm(g, 2)}
    _maybe_dump(g, args, rec)
    return [rec]


def cmd_classify(args) -> list:
    grid = _grid(args)
    sigma = _symbol(args, grid)
    table = seminorms(sigma, args.order, args.order)
    fit = fit_symbol_class(table)
    c = sigma.claimed_class
    rec = {"command": "classify-symbol", "n": grid.n, "N": grid.N, "symbol": sigma.params,
           "claimed": {"m": c.m, "rho": c.rho, "delta": c.delta},
           "fit": {"m": fit.m_hat, "rho": fit.rho_hat, "delta": fit.delta_hat, "residual": fit.residual,
                   "degenerate": fit.degenerate},
           "notes": list(fit.notes)}
    return [rec]


def cmd_maximal(args) -> list:
    f = _input_function(args)
    if args.kind == "sharp":
        prof = sharp_maximal(f, args.r)
    else:
        prof = hardy_littlewood(f, args.r)
    a = prof.array
    rec = {"command": "maximal", "kind": prof.kind, "r": args.r, "n": f.grid.n, "N": f.grid.N,
           "max": float(a.max()), "mean": float(a.mean()), "min": float(a.min())}
    _maybe_dump(prof, args, rec)
    return [rec]


def cmd_weights(args) -> list:
    grid = _grid(args)
    if args.weight == "one":
        w = Weight.from_callable(grid, lambda x: np.ones(x.shape[:-1]))
    elif args.weight == "power":
        w = Weight.from_callable(grid, lambda x: np.maximum(
            np.sqrt(np.sum(np.minimum(x, 1 - x) ** 2, axis=-1)), 0.5 / grid.N) ** args.alpha)
    else:
        w = Weight.from_callable(grid, lambda x: 0.1 + np.sin(np.pi * x[..., 0]) ** 2)
    return [{"command": "weights", "weight": args.weight, "n": grid.n, "N": grid.N, "p": p,
             "A_p": muckenhoupt_constant(w, p)} for p in args.p]


def cmd_norms(args) -> list:
    f = _input_function(args)
    rec = {"command": "norms", "n": f.grid.n, "N": f.grid.N, "s": args.s, "p": args.p, "q": args.q,
           "lp": lp_norm(f, args.p), "sobolev": sobolev_norm(f, args.s, args.p),
           "besov": besov_norm(f, args.s, args.p, args.q)}
    return [rec]


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def cmd_verify(args) -> list:
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
    if cfg.get("check", args.check) != args.check:
        raise UsageError(f"config check {cfg['check']!r} differs from command line {args.check!r}")
    cfg["check"] = args.check
    for item in args.set or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects key=value, got {item!r}")
        cfg[key] = _parse_value(val)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.workers is not None:
        cfg["workers"] = args.workers
    spec = ExperimentSpec.from_dict(cfg)
    return [run_check(spec).to_dict()]


# ---------------------------------------------------------------------------


_GLOBAL_DEFAULTS = {"config": None, "seed": None, "out": None, "format": "jsonl", "verbose": False}


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand without
    # the subparser defaults clobbering values given at the top level
    common = _Parser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON experiment spec (verify)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for random inputs")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write records here instead of stdout")
    common.add_argument("--format", choices=["jsonl", "csv"], default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    grid_args = _Parser(add_help=False)
    grid_args.add_argument("--n", type=int, default=1)
    grid_args.add_argument("--N", type=int, default=64)

    fn_args = _Parser(add_help=False)
    fn_args.add_argument("--input", help="function dump; default is a seeded random polynomial")
    fn_args.add_argument("--trial", type=int, default=0)
    fn_args.add_argument("--dump", help="write the result as a binary dump")

    sym_args = _Parser(add_help=False)
    sym_args.add_argument("--family", choices=["oscillating", "bessel"], default="oscillating")
    sym_args.add_argument("--m", type=float, default=0.0)
    sym_args.add_argument("--rho", type=float, default=0.5)
    sym_args.add_argument("--delta", type=float, default=None)
    sym_args.add_argument("--symbol-seed", type=int, default=0)

    parser = _Parser(prog="torus-pdo", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transform", parents=[common, grid_args, fn_args], help="forward/inverse DFT")
    p.add_argument("--inverse", action="store_true", help="input is a spectrum dump")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("apply", parents=[common, grid_args, fn_args, sym_args], help="apply T_sigma")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("classify-symbol", parents=[common, grid_args, sym_args], help="fit (m, rho, delta)")
    p.add_argument("--order", type=int, default=1, help="max difference / derivative order")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("maximal", parents=[common, grid_args, fn_args], help="maximal functions")
    p.add_argument("--kind", choices=["hl", "sharp"], default="hl")
    p.add_argument("--r", type=float, default=1.0)
    p.set_defaults(func=cmd_maximal)

    p = sub.add_parser("weights", parents=[common, grid_args], help="Muckenhoupt constants")
    p.add_argument("--weight", choices=["sin2", "one", "power"], default="sin2")
    p.add_argument("--alpha", type=float, default=-0.5, help="exponent of the power weight |x|^alpha")
    p.add_argument("--p", type=float, nargs="+", default=[2.0])
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("norms", parents=[common, grid_args, fn_args], help="L^p, Sobolev, Besov norms")
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--q", type=float, default=2.0)
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("verify", parents=[common], help="run a verification experiment")
    p.add_argument("check", choices=sorted(CHECKS))
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a spec field (JSON value)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, default)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command != "verify" and args.seed is None:
        args.seed = 0
    try:
        records = args.func(args)
    except (UsageError, HypothesisError, ValueError, TypeError, OSError, MemoryError) as exc:
        print(f"torus-pdo: error: {exc}", file=sys.stderr)
        return 1
    text = format_records(records, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    failed = any(r.get("verdict") == "fail" for r in records)
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
