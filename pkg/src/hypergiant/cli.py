"""Command-line interface: ``hypergiant <subcommand> [flags]``.

Exit status is 0 on success, 1 when a verification fails or output cannot
be written, and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from ._errors import HypergiantError
from .components import components
from .experiments import exposure_records, sample_largest_orders
from .hypergraph import format_hg, read_hg, sample_hnp
from .stats import (LocalLawReport, TestReport, ks_critical, ks_normal, local_law_report, moments,
                    q_k_empirical)
from .stein import stein_audit
from .theory import ModelParams, predict

DEFAULT_TRIALS = {"verify-clt": 1000, "verify-llt": 20000, "exposure": 100, "stein-audit": 100,
                  "qk": 10000}
LLT_THRESHOLD = 0.10
KS_LEVEL = 0.01
STEIN_DEFAULT_P = 0.05


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output

def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _records_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    if records:
        w = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()


def render(report, fmt: str) -> str:
    if fmt not in ("json", "csv"):
        raise UsageError(f"unknown format {fmt!r}")
    if isinstance(report, LocalLawReport):
        if fmt == "csv":
            return report.to_csv()
        return _json_text({"mu": report.mu, "sigma": report.sigma, "samples": report.samples,
                           "l1": report.l1, "rows": [list(r) for r in report.rows()]})
    if isinstance(report, TestReport):
        d = report.to_dict()
        if fmt == "json":
            return _json_text(d)
        return _records_csv([{k: d[k] for k in ("test", "seed", "trials", "statistic",
                                                 "threshold", "pass")}])
    if isinstance(report, list):
        return _json_text(report) if fmt == "json" else _records_csv(report)
    if isinstance(report, dict):
        return _json_text(report) if fmt == "json" else _records_csv([report])
    raise TypeError(f"cannot render {type(report).__name__}")


def write_report(report, path, fmt: str = "json") -> None:
    """Serialize ``report`` to ``path`` (``None`` or ``-`` means stdout)."""
    text = render(report, fmt)
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------- parser

def _add_model(p: argparse.ArgumentParser, n=None, d=None, need_rate=True) -> None:
    p.add_argument("--n", type=int, default=n, required=n is None)
    p.add_argument("--d", type=int, default=d, required=d is None)
    g = p.add_mutually_exclusive_group(required=need_rate)
    g.add_argument("--c", type=float)
    g.add_argument("--p", type=float)


def _add_common(p: argparse.ArgumentParser, trials: int | None = None) -> None:
    if trials is not None:
        p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypergiant",
                                     description="Giant component of random d-uniform hypergraphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="closed-form rho, mu and sigma^2")
    _add_model(p)
    _add_common(p)

    p = sub.add_parser("sample", help="draw H_d(n, p) and write it in .hg format")
    _add_model(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("components", help="component summary of a .hg file or a fresh sample")
    p.add_argument("graph", nargs="?", help=".hg file; omit to sample from --n/--d/--c|--p")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--c", type=float)
    g.add_argument("--p", type=float)
    _add_common(p)

    p = sub.add_parser("verify-clt", help="KS test of normalized L(H) against N(0, 1)")
    _add_model(p)
    _add_common(p, DEFAULT_TRIALS["verify-clt"])

    p = sub.add_parser("verify-llt", help="per-integer local law of L(H)")
    _add_model(p)
    _add_common(p, DEFAULT_TRIALS["verify-llt"])
    p.add_argument("--window", type=float, default=1.0, help="half-width in units of sigma")

    p = sub.add_parser("exposure", help="four-round and artificial exposure traces")
    _add_model(p)
    _add_common(p, DEFAULT_TRIALS["exposure"])
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--n1", type=int, default=None, help="artificial-process |G|; default L(H1)")

    p = sub.add_parser("stein-audit", help="pathwise indicator identities at small n")
    _add_model(p, n=12, d=3, need_rate=False)
    _add_common(p, DEFAULT_TRIALS["stein-audit"])
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--draws", type=int, default=100_000)

    p = sub.add_parser("qk", help="empirical component-order distribution at vertex 1")
    _add_model(p)
    _add_common(p, DEFAULT_TRIALS["qk"])
    p.add_argument("--kmax", type=int, default=15)
    return parser


def _params(args) -> ModelParams:
    if args.n is None or args.d is None:
        raise UsageError("--n and --d are required")
    if args.c is not None:
        return ModelParams.from_c(args.n, args.d, args.c)
    if args.p is not None:
        return ModelParams.from_p(args.n, args.d, args.p)
    raise UsageError("one of --c or --p is required")


def _check_counts(args) -> None:
    for name in ("trials", "threads"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise UsageError(f"--{name} must be >= 1")


# -------------------------------------------------------------- commands

def _cmd_predict(args):
    params = _params(args)
    g = predict(params)
    out = {"n": params.n, "d": params.d, "c": params.c, "p": params.p,
           "rho": g.rho, "mu": g.mu, "sigma2": g.sigma2, "sigma": g.sigma}
    write_report(out, args.out, args.format)
    return 0


def _cmd_sample(args):
    params = _params(args)
    text = format_hg(sample_hnp(params.n, params.d, params.p, args.seed))
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    return 0


def _cmd_components(args):
    if args.graph:
        h = read_hg(args.graph)
    else:
        params = _params(args)
        h = sample_hnp(params.n, params.d, params.p, args.seed)
    s = components(h)
    out = {"n": h.n, "d": h.d, "m": h.m, "largest_order": s.largest_order,
           "largest_vertices": list(s.largest_vertices), "count": s.count,
           "sizes": [int(x) for x in s.sizes]}
    write_report(out, args.out, args.format)
    return 0


def _sample_report_params(params: ModelParams) -> dict:
    return {"n": params.n, "d": params.d, "c": params.c, "p": params.p}


def _cmd_verify_clt(args):
    params = _params(args)
    pred = predict(params)
    sample = sample_largest_orders(params, args.trials, args.seed, args.threads)
    mean, var = moments(sample.values)
    report = TestReport(
        test="verify-clt", statistic=ks_normal(sample.values, pred.mu, pred.sigma),
        threshold=ks_critical(args.trials, KS_LEVEL), relation="<",
        params=_sample_report_params(params), seed=args.seed, trials=args.trials,
        details={"mu": pred.mu, "sigma2": pred.sigma2, "mean": mean, "variance": var,
                 "level": KS_LEVEL},
    )
    write_report(report, args.out, args.format)
    return 0 if report.passed else 1


def _cmd_verify_llt(args):
    params = _params(args)
    pred = predict(params)
    sample = sample_largest_orders(params, args.trials, args.seed, args.threads)
    table = local_law_report(sample.values, pred.mu, pred.sigma, args.window, min_samples=1)
    report = TestReport(
        test="verify-llt", statistic=table.l1, threshold=LLT_THRESHOLD, relation="<",
        params=dict(_sample_report_params(params), window=args.window), seed=args.seed,
        trials=args.trials, details={"mu": pred.mu, "sigma2": pred.sigma2, "rows": int(table.nu.size)},
    )
    write_report(table if args.format == "csv" else report, args.out, args.format)
    return 0 if report.passed else 1


def _cmd_exposure(args):
    params = _params(args)
    recs = exposure_records(params, args.eps, args.trials, args.seed, args.threads, args.n1)
    write_report(recs, args.out, args.format)
    return 0


def _cmd_stein(args):
    if args.c is None and args.p is None:
        args.p = STEIN_DEFAULT_P
    params = _params(args)
    report = stein_audit(params.n, params.d, params.p, args.kmax, args.trials, args.seed,
                         mc_draws=args.draws)
    write_report(report, args.out, args.format)
    return 0 if report.passed else 1


def _cmd_qk(args):
    params = _params(args)
    est = q_k_empirical(params.c, params.d, params.n, args.trials, args.kmax, args.seed, args.threads)
    se = est.stderr()
    if args.format == "csv":
        out = [{"k": k + 1, "q_hat": float(q), "stderr": float(s)}
               for k, (q, s) in enumerate(zip(est.q_hat, se))]
    else:
        out = {**_sample_report_params(params), "seed": args.seed, "trials": args.trials,
               "q_hat": [float(q) for q in est.q_hat], "stderr": [float(s) for s in se],
               "tail": est.tail, "decay_slope": est.decay_slope, "gamma_hat": est.gamma_hat}
    write_report(out, args.out, args.format)
    return 0


COMMANDS = {
    "predict": _cmd_predict,
    "sample": _cmd_sample,
    "components": _cmd_components,
    "verify-clt": _cmd_verify_clt,
    "verify-llt": _cmd_verify_llt,
    "exposure": _cmd_exposure,
    "stein-audit": _cmd_stein,
    "qk": _cmd_qk,
}


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code) if exc.code is not None else 0
    try:
        _check_counts(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hypergiant: error: {exc}", file=sys.stderr)
        return 2
    except HypergiantError as exc:
        print(f"hypergiant: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"hypergiant: I/O error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
