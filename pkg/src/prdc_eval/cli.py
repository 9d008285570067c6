"""Command-line surface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric/parameter
error. Every failure path writes a single line `error: {category}: {message}`
to stderr and nothing to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .analytic import expected_coverage, select_k
from .errors import DataError, ParameterError
from .io import (FORMATS, format_scores_csv, format_scores_json,
                 load_embeddings, save_embeddings)
from .metrics import compute_prdc
from .simulate import (OUTLIER_MODES, ScoreTable, TranslationExperimentSpec,
                       run_identical_experiment, run_mode_drop_experiment,
                       run_translation_experiment, split_outliers)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors by default; the CLI contract
    # reserves 2 for data errors and uses 1 for usage.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: usage: {message}", file=sys.stderr)
        raise SystemExit(1)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}") from None


_GLOBAL_FLAGS = (
    ("--seed", _nonneg_int, 0, "master random seed (default 0)"),
    ("--trials", _positive_int, 1, "Monte Carlo repetitions per grid point (default 1)"),
    ("--threads", _positive_int, 1, "worker threads for distance kernels (default 1)"),
    ("--block-size", _positive_int, 1024, "tile height for blocked distance passes"),
)


def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    for flag, typ, default, help_text in _GLOBAL_FLAGS:
        parser.add_argument(flag, type=typ,
                            default=argparse.SUPPRESS if suppress else default,
                            help=help_text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="prdc-eval",
        description="Fidelity and diversity metrics (precision, recall, density, "
                    "coverage) over embedded sample sets, with closed-form "
                    "expectations and simulation sweeps.")
    parser.add_argument("--version", action="version",
                        version=f"prdc-eval {__version__}")
    _add_global_flags(parser, suppress=False)

    # same flags accepted after the subcommand; SUPPRESS keeps root values
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)

    sub = parser.add_subparsers(dest="command", metavar="COMMAND",
                                parser_class=_Parser, required=True)

    p = sub.add_parser("compute", parents=[common],
                       help="compute all four metrics for two embedding files")
    p.add_argument("real", help="path to the real-set embeddings")
    p.add_argument("fake", help="path to the fake-set embeddings")
    p.add_argument("--k", type=_positive_int, default=None,
                   help="use this neighbor count for all four metrics")
    p.add_argument("--k-pr", type=_positive_int, default=None, dest="k_pr",
                   help="neighbor count for precision/recall (default 3)")
    p.add_argument("--k-dc", type=_positive_int, default=None, dest="k_dc",
                   help="neighbor count for density/coverage (default 5)")
    p.add_argument("--format", choices=FORMATS, default=None,
                   help="input format (default: by file extension)")
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_compute)

    p = sub.add_parser("expected-coverage", parents=[common],
                       help="closed-form expected coverage for identical distributions")
    p.add_argument("n_real", type=int)
    p.add_argument("n_fake", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=_cmd_expected_coverage)

    p = sub.add_parser("select-k", parents=[common],
                       help="smallest k with expected coverage above 1 - epsilon")
    p.add_argument("n_real", type=int)
    p.add_argument("n_fake", type=int)
    p.add_argument("epsilon", type=float)
    p.set_defaults(func=_cmd_select_k)

    sim = sub.add_parser("simulate", help="seeded sanity-check experiments")
    simsub = sim.add_subparsers(dest="experiment", metavar="EXPERIMENT",
                                parser_class=_Parser, required=True)

    p = simsub.add_parser("identical", parents=[common],
                          help="two independent same-distribution sets per (n, k) cell")
    p.add_argument("--n-grid", type=_int_list, default=[1000], dest="n_grid",
                   help="comma-separated sample counts (N = M)")
    p.add_argument("--k-grid", type=_int_list, default=[3, 5], dest="k_grid",
                   help="comma-separated neighbor counts")
    p.add_argument("--dim", type=_positive_int, default=64)
    p.add_argument("--output", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_sim_identical)

    p = simsub.add_parser("translate", parents=[common],
                          help="fake mean slides along mu * ones while real stays at 0")
    p.add_argument("--mu-grid", type=_float_list, dest="mu_grid",
                   default=[i / 10 for i in range(-10, 11)],
                   help="comma-separated mu values in [-1, 1]")
    p.add_argument("--n-real", type=_positive_int, default=2000, dest="n_real")
    p.add_argument("--n-fake", type=_positive_int, default=2000, dest="n_fake")
    p.add_argument("--dim", type=_positive_int, default=64)
    p.add_argument("--outlier-mode", choices=OUTLIER_MODES, default="none",
                   dest="outlier_mode")
    p.add_argument("--outlier-point", type=_float_list, default=None,
                   dest="outlier_point",
                   help="outlier location: one value (replicated) or dim values; "
                        "default 3 in every coordinate")
    p.add_argument("--k-pr", type=_positive_int, default=3, dest="k_pr")
    p.add_argument("--k-dc", type=_positive_int, default=5, dest="k_dc")
    p.add_argument("--output", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_sim_translate)

    p = simsub.add_parser("mode-drop", parents=[common],
                          help="ten-mode mixture with a thinning fake schedule")
    p.add_argument("--kind", choices=("sequential", "simultaneous"), required=True)
    p.add_argument("--n", type=_positive_int, default=5000)
    p.add_argument("--dim", type=_positive_int, default=64)
    p.add_argument("--k-pr", type=_positive_int, default=3, dest="k_pr")
    p.add_argument("--k-dc", type=_positive_int, default=5, dest="k_dc")
    p.add_argument("--separation", type=float, default=10.0,
                   help="distance of each mode mean from the origin")
    p.add_argument("--scale", type=float, default=1.0,
                   help="per-mode standard deviation")
    p.add_argument("--output", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_sim_mode_drop)

    p = sub.add_parser("split-outliers", parents=[common],
                       help="partition a set by k-th NN distance, largest radii out")
    p.add_argument("input", help="path to the embeddings to split")
    p.add_argument("--k", type=_positive_int, default=5)
    p.add_argument("--ratio", type=float, default=10.0,
                   help="inlier-to-outlier ratio (default 10)")
    p.add_argument("--inliers", required=True, help="output path for inliers")
    p.add_argument("--outliers", required=True, help="output path for outliers")
    p.add_argument("--format", choices=FORMATS, default=None,
                   help="input format (default: by file extension)")
    p.set_defaults(func=_cmd_split_outliers)

    return parser


def _cmd_compute(args) -> int:
    real = load_embeddings(args.real, args.format)
    fake = load_embeddings(args.fake, args.format)
    scores = compute_prdc(real, fake, k_pr=args.k_pr, k_dc=args.k_dc, k=args.k,
                          block=args.block_size, threads=args.threads)
    if args.output == "json":
        print(format_scores_json(scores))
    else:
        print(format_scores_csv(scores))
    return 0


def _cmd_expected_coverage(args) -> int:
    print("%.3f" % expected_coverage(args.n_real, args.n_fake, args.k))
    return 0


def _cmd_select_k(args) -> int:
    print(select_k(args.n_real, args.n_fake, args.epsilon).k)
    return 0


def _print_table(table: ScoreTable, output: str) -> None:
    if output == "csv":
        sys.stdout.write(table.to_csv())
    else:
        print(json.dumps(table.to_dict(), indent=2))


def _cmd_sim_identical(args) -> int:
    table = run_identical_experiment(args.n_grid, args.k_grid, dim=args.dim,
                                     trials=args.trials, seed=args.seed,
                                     block=args.block_size, threads=args.threads)
    _print_table(table, args.output)
    return 0


def _cmd_sim_translate(args) -> int:
    point = args.outlier_point
    if point is not None and len(point) == 1:
        point = point[0]
    spec = TranslationExperimentSpec(
        mu_grid=tuple(args.mu_grid), n_real=args.n_real, n_fake=args.n_fake,
        dim=args.dim, outlier_mode=args.outlier_mode, outlier_point=point,
        k_pr=args.k_pr, k_dc=args.k_dc, seed=args.seed, trials=args.trials)
    table = run_translation_experiment(spec, block=args.block_size,
                                       threads=args.threads)
    _print_table(table, args.output)
    return 0


def _cmd_sim_mode_drop(args) -> int:
    table = run_mode_drop_experiment(args.kind, dim=args.dim, n=args.n,
                                     k_pr=args.k_pr, k_dc=args.k_dc,
                                     trials=args.trials, seed=args.seed,
                                     separation=args.separation,
                                     component_scale=args.scale,
                                     block=args.block_size, threads=args.threads)
    _print_table(table, args.output)
    return 0


def _cmd_split_outliers(args) -> int:
    samples = load_embeddings(args.input, args.format)
    inliers, outliers = split_outliers(samples, args.k, args.ratio,
                                       block=args.block_size, threads=args.threads)
    save_embeddings(args.inliers, inliers)
    save_embeddings(args.outliers, outliers)
    print(json.dumps({"n_inliers": int(inliers.shape[0]),
                      "n_outliers": int(outliers.shape[0])}))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, int):
            return exc.code
        return 0 if exc.code is None else 1
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: data: {exc}", file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(f"error: parameter: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
