"""Command line runner: ``qghlab {distortion,balance,separation,gh,sample,verify}``.

Output is CSV with ``#`` header lines (the default) or a single JSON object
with ``config`` and ``rows``.  Exit codes: 0 success, 1 usage error,
2 invariant violation, 3 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__, balancing, bounds, gh_metric, lp_core, sampling, verify

DEFAULT_SEED = 42

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}")


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", default=None)

    parser = _Parser(prog="qghlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qghlab {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("distortion", parents=[common], help="empirical Mazur map distortion sweep")
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--p-seq", type=_float_list, default=None)
    p.add_argument("--n", type=_int_list, default=[2, 4, 8, 16])
    p.add_argument("--count", type=int, default=448, help="sample points per (p, N)")

    p = sub.add_parser("balance", parents=[common], help="greedy sign balancing of sampled points")
    p.add_argument("--p", type=float, default=1.5)
    p.add_argument("--n", type=int, default=8, help="dimension N")
    p.add_argument("--count", type=int, default=32, help="number of points")

    p = sub.add_parser("separation", parents=[common], help="separation table along p_n -> 1")
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--p-seq", type=_float_list, default=None)
    p.add_argument("--threshold", type=float, default=0.25)

    p = sub.add_parser("gh", parents=[common], help="exact GH distance of a sampled point set and its Mazur image")
    p.add_argument("--p", type=float, default=1.5)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--count", type=int, default=5, help="points per space (at most 6)")

    p = sub.add_parser("sample", parents=[common], help="emit sampled points of the unit ball")
    p.add_argument("--p", type=float, default=1.5)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--mode", choices=[m.value for m in sampling.SampleMode], default="uniform_ball")
    p.add_argument("--resolution", type=int, default=None)

    p = sub.add_parser("verify", parents=[common], help="run every property suite")
    p.add_argument("--count", type=int, default=1000, help="cases per suite (scale)")
    p.add_argument("--inject-fault", choices=verify.FAULTS, default=None, help=argparse.SUPPRESS)
    return parser


def _num(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _plain(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    return v


def _ordered_columns(rows: list[dict], lead=("p", "N")) -> list[str]:
    keys = list(rows[0]) if rows else []
    head = [k for k in lead if k in keys]
    return head + sorted(k for k in keys if k not in head)


def render(config: dict, rows: list[dict], fmt: str, summary: dict | None = None) -> str:
    """Serialize a run; identical inputs give identical text."""
    columns = _ordered_columns(rows)
    if fmt == "json":
        doc = {"config": _plain(config), "rows": [_plain({c: r[c] for c in columns}) for r in rows]}
        if summary is not None:
            doc["summary"] = _plain(summary)
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    for key, value in config.items():
        buf.write(f"# {key}: {json.dumps(_plain(value))}\n")
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(_num(r[c]) for c in columns) + "\n")
    if summary is not None:
        for key, value in summary.items():
            buf.write(f"# summary {key}: {json.dumps(_plain(value))}\n")
    return buf.getvalue()


def write_output(text: str, path: str | None) -> None:
    """Write to `path` atomically (temp file then rename), or to stdout."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".qghlab-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _p_values(args, default):
    if args.p is not None and args.p_seq is not None:
        raise UsageError("give either --p or --p-seq, not both")
    if args.p_seq is not None:
        if not args.p_seq:
            raise UsageError("--p-seq is empty")
        return args.p_seq
    if args.p is not None:
        return [args.p]
    return default


def _config(args, **resolved) -> dict:
    cfg = {"version": __version__, "subcommand": args.subcommand, "seed": args.seed}
    cfg.update(resolved)
    cfg["format"] = args.format
    return cfg


def run_distortion(args):
    ps = _p_values(args, [1.1, 1.25, 1.5, 1.75, 2.0])
    rows, ok = [], True
    for p in ps:
        for N in args.n:
            rep = gh_metric.mazur_correspondence_experiment(p, N, args.count, args.seed)
            ok &= rep.within_bound
            rows.append({
                "p": rep.p, "N": rep.N, "samples": rep.sample_count,
                "empirical_distortion": rep.empirical_distortion,
                "bound_2_2p_minus_2": rep.theoretical_bound,
                "gh_upper_2p_minus_2": rep.gh_upper_bound,
            })
    config = _config(args, p=ps, N=args.n, count=args.count)
    return config, rows, None, ok


def run_balance(args):
    space = lp_core.LpSpace(args.n, args.p)
    if args.count < 1:
        raise UsageError("--count must be positive")
    rng = sampling.make_rng(args.seed)
    xs = sampling.ball_array(space, args.count, rng)
    out = balancing.balance_signs(xs, args.p)
    rows = [{"p": args.p, "N": args.n, "k": k + 1, "sign": int(s), "partial_norm": float(nm),
             "bound": (k + 1) ** (1 / args.p)}
            for k, (s, nm) in enumerate(zip(out.signs, out.partial_norms))]
    ok = all(r["partial_norm"] <= r["bound"] + balancing.BOUND_TOL for r in rows)
    ok &= balancing.balance_certificate_check(xs, out.signs, args.p)
    summary = {"norm": out.norm, "bound": out.bound, "certificate_valid": ok}
    config = _config(args, p=args.p, N=args.n, count=args.count)
    return config, rows, summary, ok


def run_separation(args):
    ps = _p_values(args, bounds.default_p_sequence(10))
    table = bounds.separation_table(ps, args.threshold)
    rows = [{"p": r.p, "N": r.N, "gh_upper": r.gh_upper, "qgh_lower": r.qgh_lower} for r in table]
    floor = 0.5 - args.threshold
    min_lower = min(r.qgh_lower for r in table)
    gh = [r.gh_upper for r in table]
    summary = {
        "min_qgh_lower": min_lower,
        "required_qgh_lower": floor,
        "qgh_lower_ok": min_lower >= floor,
        "gh_upper_decreasing": all(a > b for a, b in zip(gh, gh[1:])),
    }
    config = _config(args, p=ps, threshold=args.threshold)
    return config, rows, summary, min_lower >= floor


def run_gh(args):
    if not 1 <= args.count <= gh_metric.BRUTE_FORCE_MAX_SIZE:
        raise UsageError(f"--count must be between 1 and {gh_metric.BRUTE_FORCE_MAX_SIZE}")
    space = lp_core.LpSpace(args.n, args.p)
    xs = sampling.ball_array(space, args.count, sampling.make_rng(args.seed))
    A = gh_metric.metric_from_points(list(xs), space)
    B = gh_metric.metric_from_points(list(lp_core.mazur_array(xs, args.p)), lp_core.LpSpace(args.n, 1.0))
    exact = gh_metric.brute_force_gh(A, B)
    mazur = gh_metric.gh_upper_from_correspondence(gh_metric.Correspondence.identity(args.count), A, B)
    gh_bound = 2.0**args.p - 2.0
    rows = [{"p": args.p, "N": args.n, "points": args.count, "brute_force_gh": exact,
             "mazur_upper": mazur, "gh_upper_2p_minus_2": gh_bound}]
    ok = exact <= mazur + 1e-12 and mazur <= gh_bound + gh_metric.METRIC_TOL
    config = _config(args, p=args.p, N=args.n, count=args.count)
    return config, rows, None, ok


def run_sample(args):
    space = lp_core.LpSpace(args.n, args.p)
    cfg = sampling.SampleConfig(space, args.count, args.seed, args.mode, args.resolution)
    xs = sampling.sample_array(cfg)
    norms = lp_core.p_norm(xs, args.p)
    rows = []
    for k, (x, nm) in enumerate(zip(xs, norms)):
        row = {"p": args.p, "N": args.n, "index": k, "norm": float(nm)}
        row.update({f"x{i}": float(v) for i, v in enumerate(x)})
        rows.append(row)
    ok = bool(np.all(norms <= 1 + lp_core.TOL_MEMBERSHIP))
    config = _config(args, p=args.p, N=args.n, count=args.count, mode=args.mode, resolution=args.resolution)
    return config, rows, None, ok


def run_verify(args):
    results = verify.run_all(args.seed, args.count, args.inject_fault)
    rows = [{"suite": r.name, "checked": r.checked, "failed": r.failed, "counterexample": r.counterexample}
            for r in results]
    ok = all(r.passed for r in results)
    for r in results:
        status = "ok" if r.passed else "FAIL"
        print(f"{r.name}: {r.checked} checked, {r.failed} failed [{status}]", file=sys.stderr)
        if not r.passed:
            print(f"  counterexample: {r.counterexample}", file=sys.stderr)
    config = _config(args, count=args.count, inject_fault=args.inject_fault)
    return config, rows, {"all_passed": ok}, ok


RUNNERS = {
    "distortion": run_distortion,
    "balance": run_balance,
    "separation": run_separation,
    "gh": run_gh,
    "sample": run_sample,
    "verify": run_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config, rows, summary, ok = RUNNERS[args.subcommand](args)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"qghlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        write_output(render(config, rows, args.format, summary), args.out)
    except OSError as exc:
        print(f"qghlab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if not ok:
        print("qghlab: invariant violated; see output", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
