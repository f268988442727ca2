"""Command-line front end.

One subcommand per experiment plus ad-hoc ``constants``, ``sample`` and
``oracle`` queries and a ``report`` format converter.  All numeric flags are
validated before any computation starts; a run with a fixed (seed, config)
writes byte-identical output regardless of ``--workers``.

Exit codes: 0 success, 1 numerical/runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import constants, experiments, oracle, sampling
from .rng import RandomStream

_FLOAT_FMT = "{:.17g}"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return _FLOAT_FMT.format(x)
    return str(x)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {text!r}") from exc


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got {text!r}") from exc


def _add_experiment_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=_int_list, default=None, help="comma list of dimensions")
    sub.add_argument("--q", type=float, default=None, help="norm / moment order q >= 1")
    sub.add_argument("--p", type=float, default=None, help="ball exponent p >= 1")
    sub.add_argument("--replicates", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--workers", type=int, default=None)
    sub.add_argument("--z", type=_float_list, default=None, help="comma list of thresholds")
    sub.add_argument("--sn", choices=("sqrt_log", "log_log"), default=None,
                     help="moderate-deviation speed rule")
    sub.add_argument("--oracle-n", type=_int_list, default=None,
                     help="dimensions for exact oracle rows")
    sub.add_argument("--source", choices=sorted(experiments.SOURCE_DISTRIBUTIONS),
                     default=None, help="source distribution (general-clt)")
    sub.add_argument("--config", default=None,
                     help="JSON file with the same fields; explicit flags win")
    _add_output_flags(sub)


def _add_output_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simplex-limits",
        description="Samplers, exact constants, and Monte Carlo / exact-oracle "
                    "verification of high-dimensional norm limit theorems.")
    parser.add_argument("--version", action="version",
                        version=f"simplex-limits {experiments.TOOL_VERSION}")
    subs = parser.add_subparsers(dest="command", required=True)

    sc = subs.add_parser("constants", help="table of moment and comparison constants")
    sc.add_argument("--q", type=_float_list, required=True, help="comma list of q values")
    _add_output_flags(sc)

    ss = subs.add_parser("sample", help="draw points from one of the samplers")
    ss.add_argument("--kind", choices=("exponential", "simplex", "spacings", "pgen", "ball"),
                    required=True)
    ss.add_argument("--n", type=int, required=True)
    ss.add_argument("--count", type=int, default=1)
    ss.add_argument("--p", type=float, default=2.0)
    ss.add_argument("--uncentered", action="store_true")
    ss.add_argument("--seed", type=int, default=0)
    _add_output_flags(ss)

    so = subs.add_parser("oracle", help="ad-hoc exact oracle queries")
    so.add_argument("--op", choices=("max-spacing-cdf", "max-spacing-sf", "small-n-norm-cdf"),
                    required=True)
    so.add_argument("--n", type=int, required=True)
    so.add_argument("--s", type=float, default=None, help="spacing threshold in (0,1)")
    so.add_argument("--q", type=float, default=None, help="norm order (small-n-norm-cdf)")
    so.add_argument("--t", type=float, default=None, help="norm threshold (small-n-norm-cdf)")
    _add_output_flags(so)

    for name in ("clt", "berry-esseen", "gumbel", "ldp", "mdp", "lpball",
                 "equivalence", "general-clt"):
        sub = subs.add_parser(name, help=f"run the {name} experiment")
        if name == "lpball":
            sub.add_argument("--law", choices=("ldp", "gumbel"), default="ldp")
        _add_experiment_flags(sub)

    sr = subs.add_parser("report", help="re-emit a saved JSON report")
    sr.add_argument("--in", dest="infile", required=True, help="JSON report path")
    _add_output_flags(sr)
    return parser


# defaults applied when neither flag nor config file sets a field
_DEFAULTS = {
    "clt": dict(n_list=(100, 10_000), q=2.0, replicates=10_000, thresholds=()),
    "berry_esseen_sweep": dict(n_list=(100, 1_000, 10_000), q=2.0, replicates=10_000,
                               thresholds=()),
    "gumbel": dict(n_list=(10_000,), replicates=10_000, thresholds=(),
                   oracle_n_list=(1_000_000,)),
    "ldp": dict(n_list=(1_000,), replicates=100_000, thresholds=(1.5,),
                oracle_n_list=(10_000, 100_000, 1_000_000)),
    "mdp": dict(n_list=(), replicates=1, thresholds=(1.0,),
                oracle_n_list=(1_000_000,)),
    "lp_ldp": dict(n_list=(1_000,), p=2.0, replicates=100_000, thresholds=(1.3,)),
    "lp_gumbel": dict(n_list=(10_000,), p=1.0, replicates=10_000, thresholds=()),
    "equivalence_decay": dict(n_list=(5, 10, 20, 50, 100), replicates=100_000,
                              thresholds=()),
    "general_clt": dict(n_list=(10_000,), q=2.0, replicates=10_000, thresholds=()),
}


def _experiment_config(kind: str, args: argparse.Namespace) -> experiments.ExperimentConfig:
    file_values = {}
    if args.config is not None:
        with open(args.config, encoding="utf-8") as fh:
            file_values = json.load(fh)
        if not isinstance(file_values, dict):
            raise ValueError(f"config file {args.config} must hold a JSON object")

    def pick(flag, file_key, default):
        if flag is not None:
            return flag
        if file_key in file_values and file_values[file_key] is not None:
            value = file_values[file_key]
            return tuple(value) if isinstance(value, list) else value
        return default

    defaults = _DEFAULTS[kind]
    return experiments.ExperimentConfig(
        kind=kind,
        n_list=pick(args.n, "n", defaults.get("n_list", ())),
        q=pick(args.q, "q", defaults.get("q")),
        p=pick(args.p, "p", defaults.get("p")),
        replicates=pick(args.replicates, "replicates", defaults.get("replicates", 10_000)),
        seed=pick(args.seed, "seed", 0),
        thresholds=pick(args.z, "z", defaults.get("thresholds", ())),
        s_n_rule=pick(args.sn, "sn", "sqrt_log"),
        source=pick(args.source, "source", "exponential"),
        oracle_n_list=pick(args.oracle_n, "oracle_n", defaults.get("oracle_n_list", ())),
        workers=pick(args.workers, "workers", 1),
    )


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _table_text(rows: list[dict], fmt: str, header_note: str) -> str:
    if fmt == "json":
        body = [{k: (experiments._json_float(v) if isinstance(v, float) else v)
                 for k, v in row.items()} for row in rows]
        return json.dumps({"tool_version": experiments.TOOL_VERSION, "rows": body},
                          sort_keys=True, indent=2) + "\n"
    columns = list(rows[0].keys())
    lines = [f"# simplex-limits {experiments.TOOL_VERSION}", f"# {header_note}",
             ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def _cmd_constants(args: argparse.Namespace) -> int:
    rows = constants.constants_table(args.q)
    _write(_table_text(rows, args.format, f"constants q={','.join(map(str, args.q))}"),
           args.out)
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    stream = RandomStream(args.seed)
    if args.kind == "exponential":
        matrix = sampling.exponential_block(stream, args.count, args.n)
    elif args.kind == "simplex":
        matrix = sampling.exponential_block(stream, args.count, args.n)
        matrix = matrix / matrix.sum(axis=1)[:, None]
        if not args.uncentered:
            matrix = matrix - 1.0 / args.n
    elif args.kind == "spacings":
        matrix = sampling.spacings_block(stream, args.count, args.n)
        if not args.uncentered:
            matrix = matrix - 1.0 / args.n
    elif args.kind == "pgen":
        matrix = sampling.pgen_gaussian_block(stream, args.count, args.n, args.p)
    else:
        matrix = sampling.lp_ball_block(stream, args.count, args.n, args.p)
    rows = [{f"x{j + 1}": float(v) for j, v in enumerate(row)} for row in matrix]
    _write(_table_text(rows, args.format,
                       f"sample kind={args.kind} n={args.n} seed={args.seed}"), args.out)
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    if args.op in ("max-spacing-cdf", "max-spacing-sf"):
        if args.s is None:
            raise ValueError(f"{args.op} requires --s")
        fn = oracle.max_spacing_cdf if args.op == "max-spacing-cdf" else oracle.max_spacing_sf
        res = fn(args.n, args.s)
        row = {"op": args.op, "n": args.n, "s": args.s, "value": res.value,
               "method": res.method, "error_bound": res.error_bound}
    else:
        if args.q is None or args.t is None:
            raise ValueError("small-n-norm-cdf requires --q and --t")
        res = oracle.small_n_norm_cdf(args.n, args.q, args.t)
        row = {"op": args.op, "n": args.n, "q": args.q, "t": args.t, "value": res.value,
               "method": res.method, "error_bound": res.error_bound}
    _write(_table_text([row], args.format, f"oracle {args.op}"), args.out)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    with open(args.infile, encoding="utf-8") as fh:
        report = experiments.report_from_json(fh.read())
    _write(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
    return 0


_COMMAND_KINDS = {
    "clt": "clt",
    "berry-esseen": "berry_esseen_sweep",
    "gumbel": "gumbel",
    "ldp": "ldp",
    "mdp": "mdp",
    "equivalence": "equivalence_decay",
    "general-clt": "general_clt",
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "constants":
            return _cmd_constants(args)
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        if args.command == "report":
            return _cmd_report(args)
        if args.command == "lpball":
            kind = "lp_ldp" if args.law == "ldp" else "lp_gumbel"
        else:
            kind = _COMMAND_KINDS[args.command]
        config = _experiment_config(kind, args)
        report = experiments.run(config)
        _write(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
        print(f"{kind}: {sum(r.passed for r in report.rows)}/{len(report.rows)} rows passed "
              f"in {report.wall_time:.1f}s", file=sys.stderr)
        return 0
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
