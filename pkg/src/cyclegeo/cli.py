"""Command-line entry point: ``cyclegeo <sample|stats|theory|oracle|experiment> ...``."""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from . import stats
from .cycle_type import all_p_cycles, ewens_type, involution_type, parse_counts
from .geometry import Permutation, sample_point_set, sample_t_cyclic
from .harness.config import ConfigError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _pair(text, kinds):
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"expected two comma-separated values, got {text!r}")
    return tuple(k(p) for k, p in zip(kinds, parts))


def _type_source(args):
    """A function ``rng -> CycleType`` from the mutually exclusive type options."""
    if args.type is not None:
        t = parse_counts(args.type)
        return lambda rng: t
    if args.all_p_cycles is not None:
        t = all_p_cycles(*_pair(args.all_p_cycles, (int, int)))
        return lambda rng: t
    if args.involution is not None:
        t = involution_type(*_pair(args.involution, (int, int)))
        return lambda rng: t
    n, theta = _pair(args.ewens, (int, float))
    return lambda rng: ewens_type(n, theta, rng)


def _add_type_options(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--type", help="cycle counts t_1,t_2,... or a JSON array")
    g.add_argument("--all-p-cycles", metavar="N,P")
    g.add_argument("--involution", metavar="N,F", help="involution of size N with F fixed points")
    g.add_argument("--ewens", metavar="N,THETA", help="a fresh Ewens cycle type per sample")


def _open_out(path):
    return open(path, "w", newline="") if path and path != "-" else sys.stdout


def cmd_sample(args):
    rng = np.random.default_rng(args.seed)
    draw = _type_source(args)
    if args.points:
        if args.count != 1:
            raise ConfigError("--points writes a single point set; use --count 1")
        ps = sample_point_set(draw(rng), rng)
        if args.out and args.out != "-":
            ps.to_csv(args.out)
        else:
            ps.to_csv(sys.stdout)
        return EXIT_OK
    fh = _open_out(args.out)
    try:
        for _ in range(args.count):
            fh.write(sample_t_cyclic(draw(rng), rng).to_csv_field() + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def _metric(name):
    if name == "lis":
        return stats.lis
    if name == "lds":
        return stats.lds
    if name == "shape":
        return lambda p: str(stats.rs_shape(p))
    if name == "records":
        return lambda p: "{} {}".format(*_records(p))
    if name == "hrec":
        return lambda p: _records(p)[0]
    if name == "lrec":
        return lambda p: _records(p)[1]
    if name == "inversions":
        return stats.inversions
    if name.startswith("pattern:"):
        pattern = tuple(int(c) for c in name.split(":", 1)[1].replace(",", ""))
        return lambda p: stats.pattern_count(p, pattern)
    if name.startswith("lds_k:"):
        k = int(name.split(":", 1)[1])
        return lambda p: stats.lds_k(p, k)
    raise ConfigError(f"unknown metric {name!r}")


def _records(p):
    rc = stats.records(p)
    return rc.high, rc.low


def _read_perms(path):
    fh = open(path) if path != "-" else sys.stdin
    try:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                yield Permutation([int(v) for v in line.split(",")])
    finally:
        if fh is not sys.stdin:
            fh.close()


def cmd_stats(args):
    names = [m.strip() for m in args.metrics.split(",") if m.strip()]
    fns = [_metric(m) for m in names]
    fh = _open_out(args.out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for perm in _read_perms(args.input):
            w.writerow([f(perm) for f in fns])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def _grid(text):
    lo, hi, step = (float(v) for v in text.split(":"))
    if step <= 0 or hi < lo:
        raise ConfigError(f"bad grid {text!r}; expected lo:hi:step with step > 0")
    count = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(count)


def cmd_theory(args):
    from .theory import f_lskv, mu_vector_exact, sigma_matrix_general
    from .stats import all_patterns

    fh = _open_out(getattr(args, "out", None))
    try:
        if args.what == "sigma":
            rng = np.random.default_rng(args.seed)
            sigma = sigma_matrix_general(args.r, args.p1, args.p2, method=args.method, trials=args.trials, rng=rng)
            sigma.to_csv(fh)
        elif args.what == "flskv":
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["r", "f_lskv"])
            for r in _grid(args.grid):
                w.writerow([f"{r:.10g}", repr(f_lskv(float(r)))])
        else:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["pattern", "mu", "mu_num", "mu_den"])
            for p, mu in zip(all_patterns(args.r), mu_vector_exact(args.r, args.p1)):
                w.writerow(["".join(map(str, p)), repr(float(mu)), mu.numerator, mu.denominator])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_oracle(args):
    from . import oracle
    from .harness.properties import greene_matches_brute

    if args.what == "enumerate":
        fh = _open_out(args.out)
        try:
            for p in oracle.enumerate_class(parse_counts(args.type)):
                fh.write(p.to_csv_field() + "\n")
        finally:
            if fh is not sys.stdout:
                fh.close()
        return EXIT_OK
    if args.what == "greene-check":
        ok = True
        for n in range(1, args.max_n + 1):
            good = greene_matches_brute(n)
            ok &= good
            print(f"n={n}: {'ok' if good else 'MISMATCH'}")
        return EXIT_OK if ok else EXIT_FAIL
    dist = oracle.exact_statistic_distribution(parse_counts(args.type), args.statistic)
    fh = _open_out(args.out)
    try:
        dist.to_csv(fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_experiment(args):
    from .harness.acceptance import DEFAULT_SEED, run_all_acceptance
    from .harness.config import load_config
    from .harness.experiments import run_experiment

    if args.kind == "all":
        seed = DEFAULT_SEED if args.seed is None else args.seed

        def progress(result):
            print(result.line(), flush=True)
            for d in result.details:
                print(f"    {d}", flush=True)

        report = run_all_acceptance(seed, threads=args.threads, progress=progress)
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            with open(os.path.join(args.out, "acceptance.json"), "w") as fh:
                fh.write(report.to_json())
        return report.exit_code
    if args.config is None:
        raise ConfigError(f"experiment {args.kind} needs --config")
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    report = run_experiment(args.kind, cfg, threads=args.threads)
    if args.out:
        report.write(args.out)
    for c in report.checks:
        print(("PASS " if c.passed else "FAIL ") + c.describe())
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclegeo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample uniform permutations of a cycle type")
    _add_type_options(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--points", action="store_true", help="write the point set as CSV instead")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("stats", help="statistics of permutations read one per line")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--metrics", default="lis,lds")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("theory", help="limit objects")
    tsub = p.add_subparsers(dest="what", required=True)
    q = tsub.add_parser("sigma")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--p1", type=float, default=0.0)
    q.add_argument("--p2", type=float, default=0.0)
    q.add_argument("--method", choices=("exact", "mc"), default="exact")
    q.add_argument("--trials", type=int, default=200_000)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out")
    q = tsub.add_parser("flskv")
    q.add_argument("--grid", default="0:2:0.05", help="lo:hi:step")
    q.add_argument("--out")
    q = tsub.add_parser("mu")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--p1", type=float, default=0.0)
    q.add_argument("--out")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("oracle", help="brute-force references")
    osub = p.add_subparsers(dest="what", required=True)
    q = osub.add_parser("enumerate")
    q.add_argument("--type", required=True)
    q.add_argument("--out")
    q = osub.add_parser("greene-check")
    q.add_argument("--max-n", type=int, default=8)
    q = osub.add_parser("distribution")
    q.add_argument("--type", required=True)
    q.add_argument("--statistic", required=True, help="lis, lds, hrec, lrec, pattern:XYZ or lds_k:K")
    q.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("experiment", help="Monte Carlo experiments and the acceptance suite")
    p.add_argument("kind", choices=("lds", "shape", "records", "patterns", "all"))
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
