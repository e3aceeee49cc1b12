"""``gssvm`` command line: train, predict, evaluate, compare, sweep, gen-toy.

Exit codes: 0 success, 1 usage error, 2 data error, 3 training error.
Data goes to stdout or ``-o`` paths; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .data import load_svmlight, save_svmlight
from .datasets import load_toy
from .errors import DataError, DegenerateNormal, GssvmError, OneClassOnly, TrainingError
from .eval import (
    DEFAULT_C,
    DEFAULT_GAMMA,
    GridSpec,
    best_point,
    c_sweep,
    compare,
    grid_scores,
    render_table,
    report_header,
    report_to_csv,
    sweep_svg,
    sweep_to_csv,
    write_text,
)
from .kernel import KernelSpec
from .model import FORMAT_VERSION, load, predict_many, save
from .scaling import GsModel, apply_scaling
from .solver import SolverConfig, train_csvm
from .synth import ToyConfig, gen_toy

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_TRAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numbers, got {text!r}") from None


def _pair(text):
    vals = _floats(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("expected two numbers")
    return vals


def _matrix(text):
    vals = _floats(text)
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("expected four numbers (row-major 2x2)")
    return (vals[:2], vals[2:])


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _add_kernel(p):
    p.add_argument("--kernel", default="linear", choices=["linear", "rbf", "poly"])
    p.add_argument("--gamma", type=float, default=None,
                   help="kernel width (default: 1/n_features)")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--coef0", type=float, default=0.0)


def _add_solver(p, with_c=True):
    if with_c:
        p.add_argument("--c", type=float, default=1.0, help="penalty C")
    p.add_argument("--penalty", default="l1", choices=["l1", "l2"])
    p.add_argument("--tol", type=float, default=1e-3, help="KKT stopping tolerance")
    p.add_argument("--max-iter", type=int, default=10_000_000, help="pair-update limit")
    p.add_argument("--selection", default="second", choices=["first", "second"],
                   help="SMO working-set rule")


def _add_gs(p):
    p.add_argument("--gs", action="store_true", help="translate the hyperplane (GS-SVM)")
    p.add_argument("--delta-scale", type=float, default=1.0, help="multiplier on delta")


def _add_cv(p):
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--jobs", type=int, default=1, help="parallel grid workers")


def _add_grid(p):
    p.add_argument("--grid-c", type=_floats, default=DEFAULT_C, help="C values")
    p.add_argument("--grid-gamma", type=_floats, default=DEFAULT_GAMMA,
                   help="gamma values (rbf/poly)")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="gssvm", description=__doc__.splitlines()[0], formatter_class=fmt)
    parser.add_argument("--version", action="version",
                        version=f"gssvm {__version__} (model format {FORMAT_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train a C-SVM or GS-SVM model", formatter_class=fmt)
    p.add_argument("-i", "--input", required=True, help="svmlight training file")
    p.add_argument("-o", "--output", default="model.gsm", help="model file to write")
    _add_kernel(p)
    _add_solver(p)
    _add_gs(p)

    p = sub.add_parser("predict", help="predict labels, one per line", formatter_class=fmt)
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-i", "--input", required=True)

    p = sub.add_parser("evaluate", help="grid-search one dataset by k-fold CV",
                       formatter_class=fmt)
    p.add_argument("-i", "--input", required=True)
    _add_kernel(p)
    _add_solver(p, with_c=False)
    _add_gs(p)
    _add_cv(p)
    _add_grid(p)
    p.add_argument("--csv", help="also write the result as CSV")

    p = sub.add_parser("compare", help="C-SVM vs GS-SVM table over datasets and kernels",
                       formatter_class=fmt)
    p.add_argument("--data", default="", help="comma-separated svmlight files")
    p.add_argument("--toy", action="store_true", help="include the bundled toy set")
    p.add_argument("--kernels", default="linear,rbf")
    _add_solver(p, with_c=False)
    p.add_argument("--delta-scale", type=float, default=1.0)
    _add_cv(p)
    _add_grid(p)
    p.add_argument("--csv")

    p = sub.add_parser("sweep", help="cross-validated accuracy versus C", formatter_class=fmt)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--c-values", type=_floats, default=DEFAULT_C)
    _add_kernel(p)
    _add_solver(p, with_c=False)
    p.add_argument("--delta-scale", type=float, default=1.0)
    _add_cv(p)
    p.add_argument("--csv")
    p.add_argument("--svg")

    d = ToyConfig()
    p = sub.add_parser("gen-toy", help="write the seeded two-Gaussian toy data",
                       formatter_class=fmt)
    p.add_argument("--seed", type=_seed, default=d.seed)
    p.add_argument("-o", "--output", required=True, help="training set path")
    p.add_argument("--test-out", help="test set path")
    p.add_argument("--mean-pos", type=_pair, default=d.mean_pos)
    p.add_argument("--cov-pos", type=_matrix, default=d.cov_pos)
    p.add_argument("--mean-neg", type=_pair, default=d.mean_neg)
    p.add_argument("--cov-neg", type=_matrix, default=d.cov_neg)
    p.add_argument("--n-train", type=int, default=d.n_train_per_class, help="per class")
    p.add_argument("--n-test", type=int, default=d.n_test_per_class, help="per class")
    return parser


def _kernel(a) -> KernelSpec:
    return KernelSpec(a.kernel, a.gamma, a.degree, a.coef0)


def _config(a, C=1.0) -> SolverConfig:
    return SolverConfig(C=getattr(a, "c", C), penalty=a.penalty, tol=a.tol,
                        max_iter=a.max_iter, selection=a.selection)


def _warn(msg):
    print(f"gssvm: warning: {msg}", file=sys.stderr)


def cmd_train(a, out):
    ds = load_svmlight(a.input)
    model = train_csvm(ds, _kernel(a), _config(a))
    if a.gs:
        try:
            model = apply_scaling(model, ds, a.delta_scale)
        except (DegenerateNormal, OneClassOnly) as exc:
            _warn(f"{type(exc).__name__}: {exc}; saving the unshifted model")
            model = GsModel(model, 0.0, 0.0, 0.0, a.delta_scale, fallback=type(exc).__name__)
    save(model, a.output)


def cmd_predict(a, out):
    model = load(a.model)
    ds = load_svmlight(a.input)
    for label in predict_many(model, ds.X):
        out.write(f"{'+1' if label > 0 else '-1'}\n")


def cmd_evaluate(a, out):
    ds = load_svmlight(a.input)
    grid = GridSpec(a.grid_c, a.grid_gamma)
    config = _config(a)
    kern = _kernel(a)
    scores = grid_scores(ds, kern.family, grid, a.folds, a.seed, config, template=kern,
                         delta_scale=a.delta_scale, jobs=a.jobs)
    (c, g), acc = best_point(scores, a.gs)
    method = "GS-SVM" if a.gs else "C-SVM"
    header = report_header(grid, a.folds, a.seed, config, a.delta_scale)
    lines = [f"# {h}" for h in header]
    lines.append("dataset,kernel,method,accuracy,C,gamma")
    lines.append(f"{ds.name},{kern.family},{method},{acc!r},{c!r},"
                 f"{'' if g is None else repr(g)}")
    text = "\n".join(lines) + "\n"
    out.write(f"{method} {ds.name} ({a.kernel}): {acc:.2f}% at C={c:g}"
              + ("" if g is None else f", gamma={g:g}") + "\n")
    if a.csv:
        write_text(a.csv, text)


def cmd_compare(a, out):
    datasets = [load_toy()] if a.toy else []
    datasets += [load_svmlight(p) for p in a.data.split(",") if p.strip()]
    if not datasets:
        raise UsageError("compare: give --data and/or --toy")
    kernels = [k.strip() for k in a.kernels.split(",") if k.strip()]
    try:
        kernels = [KernelSpec(k).family for k in kernels]
    except ValueError as exc:
        raise UsageError(f"compare: {exc}") from None
    report = compare(datasets, kernels, GridSpec(a.grid_c, a.grid_gamma), a.folds, a.seed,
                     _config(a), a.delta_scale, a.jobs)
    out.write(render_table(report))
    if a.csv:
        write_text(a.csv, report_to_csv(report))


def cmd_sweep(a, out):
    ds = load_svmlight(a.input)
    curve = c_sweep(ds, _kernel(a), a.c_values, a.folds, a.seed, _config(a), a.delta_scale,
                    a.jobs)
    out.write(f"# accuracy versus C on {ds.name}: {a.kernel} kernel, {a.folds} folds, "
              f"seed {a.seed}\n")
    out.write(f"{'C':>12}  {'C-SVM':>7}  {'GS-SVM':>7}\n")
    for p in curve:
        out.write(f"{p.C:>12g}  {p.csvm_accuracy:7.2f}  {p.gssvm_accuracy:7.2f}\n")
    if a.csv:
        write_text(a.csv, sweep_to_csv(curve))
    if a.svg:
        sweep_svg(curve, a.svg, title=f"Accuracy versus C ({ds.name})")


def cmd_gen_toy(a, out):
    cfg = ToyConfig(a.mean_pos, a.cov_pos, a.mean_neg, a.cov_neg, a.n_train, a.n_test, a.seed)
    train, test = gen_toy(cfg)
    save_svmlight(train, a.output, ["toy training set"] + cfg.header())
    if a.test_out:
        save_svmlight(test, a.test_out, ["toy test set"] + cfg.header())


COMMANDS = {
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "gen-toy": cmd_gen_toy,
}


def run(argv, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # --help / --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    except DataError as exc:
        print(f"gssvm: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TrainingError as exc:
        print(f"gssvm: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_TRAIN
    except ValueError as exc:
        print(f"gssvm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GssvmError as exc:  # pragma: no cover - every subclass is handled above
        print(f"gssvm: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
