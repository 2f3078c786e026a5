"""Command-line front end.

Verbs: ``cbc``, ``wce``, ``convergence``, ``fit``. Exit codes: 0 success,
2 usage or input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .harness import (
    ConfigError,
    FitError,
    TableError,
    TooManyFailures,
    aggregate_and_fit,
    build_integrand,
    check_invariants,
    export_table,
    fit_groups,
    import_table,
    load_config,
    method_prediction,
    run_convergence,
)
from .kernels import KorobovKernel
from .pointsets import GeneratorVector, PointSet, cbc_construct, is_prime, rank1_lattice, write_generator
from .wce import CLOSED_FORM, EmbeddingSpec, NumericalInconsistencyError, wce_eval
from .weights import (
    ConditioningError,
    QuadratureRule,
    bq_weights_constrained,
    bq_weights_exact,
    uniform_weights,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return format(x, ".17g")


def cmd_cbc(args) -> int:
    if not is_prime(args.n):
        raise UsageError(f"--n {args.n} is not prime")
    gen = cbc_construct(args.n, args.d, args.alpha)
    write_generator(args.out, gen, args.alpha)
    rule = QuadratureRule(rank1_lattice(gen), uniform_weights(gen.n))
    report = wce_eval(KorobovKernel(args.alpha, args.d), EmbeddingSpec(CLOSED_FORM), rule)
    print(f"z={','.join(map(str, gen.z))}")
    print(f"wce={_fmt(report.e)}")
    return EXIT_OK


def _read_rule_file(path, d):
    try:
        data = np.loadtxt(path, ndmin=2, comments="#")
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read rule file {path}: {exc}") from exc
    if data.size == 0:
        raise UsageError(f"rule file {path} is empty")
    if d is None:
        d = data.shape[1] - 1 if data.shape[1] > 1 else 1
    if data.shape[1] == d:
        return data, None
    if data.shape[1] == d + 1:
        return data[:, :d], data[:, d]
    raise UsageError(f"rule file {path}: expected {d} or {d + 1} columns, got {data.shape[1]}")


def _parse_lattice(spec: str):
    try:
        n, *z = (int(tok) for tok in spec.split(","))
        return GeneratorVector(n, tuple(z))
    except ValueError as exc:
        raise UsageError(f"bad --lattice {spec!r}: {exc}") from exc


def cmd_wce(args) -> int:
    file_weights = None
    if args.rule is not None:
        coords, file_weights = _read_rule_file(args.rule, args.d)
        try:
            points = PointSet(coords)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        points = rank1_lattice(_parse_lattice(args.lattice))
    if args.d is not None and args.d != points.dim:
        raise UsageError(f"--d {args.d} does not match point dimension {points.dim}")
    kernel = KorobovKernel(args.alpha, points.dim)
    mode = args.weights or ("file" if file_weights is not None else "uniform")
    n = points.n
    if mode == "file":
        if file_weights is None:
            raise UsageError("--weights file needs a rule file with a weight column")
        w = file_weights
    elif mode == "uniform":
        w = uniform_weights(n)
    else:
        gram = kernel.gram(points.points)
        kmean = np.ones(n)
        rep = bq_weights_exact(gram, kmean) if mode == "bq" else bq_weights_constrained(gram, kmean, 4.0 / n)
        w = rep.weights
    report = wce_eval(kernel, EmbeddingSpec(CLOSED_FORM), QuadratureRule(points, w))
    for key in ("initial_sq", "cross", "quad", "e"):
        print(f"{key}={_fmt(getattr(report, key))}")
    return EXIT_OK


def cmd_convergence(args) -> int:
    config = load_config(args.config)
    integrand = build_integrand(config)
    records = run_convergence(config, integrand)
    export_table(records, args.out)
    predicted = method_prediction(config.method, config.alpha, config.s, config.d)
    try:
        fit = aggregate_and_fit(records, config.n_min_fit)
        slope = f"slope={fit.slope:.6f} intercept={fit.intercept:.6f} points={fit.points_used}"
    except TooManyFailures:
        raise
    except FitError as exc:
        slope = f"slope=undefined ({exc})"
    print(
        f"method={config.method} assumed_order={config.alpha} smoothness_s={config.s} "
        f"{slope} predicted_exponent={predicted:g}"
    )
    problems = check_invariants(config, integrand, records)
    for p in problems:
        print(f"invariant violated: {p}", file=sys.stderr)
    return EXIT_NUMERIC if problems else EXIT_OK


def cmd_fit(args) -> int:
    records = import_table(args.input)
    if not records:
        raise FitError("table has no records")
    for (method, order, s), fit in fit_groups(records, args.n_min).items():
        print(
            f"method={method} assumed_order={order} smoothness_s={s} "
            f"slope={_fmt(fit.slope)} intercept={_fmt(fit.intercept)} points={fit.points_used}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kernquad", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("cbc", help="construct a lattice generator vector")
    p.add_argument("--n", type=int, required=True, help="number of points (prime)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_cbc)

    p = sub.add_parser("wce", help="worst-case error of one rule in a Korobov space")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--rule", type=Path, help="text file: one point per line, optional weight column")
    src.add_argument("--lattice", help="n,z1,...,zd")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--weights", choices=("uniform", "bq", "bq-constrained", "file"))
    p.set_defaults(func=cmd_wce)

    p = sub.add_parser("convergence", help="run a convergence experiment")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("fit", help="fit log-log slopes to a convergence table")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--n-min", type=int, default=16)
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError, TableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TooManyFailures as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConditioningError, NumericalInconsistencyError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
