"""Cross-validation, grid search and C-SVM vs GS-SVM comparison reports.

Every fold trains one C-SVM and scores it twice: as is, and after the
boundary translation. The two methods therefore always see the same folds,
the same grid and the same base solutions. Accuracies are pooled: total
correct predictions over total points, in percent.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import binomtest

from .data import Dataset, SplitPlan, stratified_kfold
from .errors import GssvmError, IoFailure
from .kernel import KernelSpec, gram_matrix
from .scaling import scale_or_fallback
from .solver import SolverConfig, fit_gram, train_csvm

DEFAULT_C = tuple(2.0**e for e in range(-5, 16, 2))
DEFAULT_GAMMA = tuple(2.0**e for e in range(-15, 4, 2))


@dataclass(frozen=True)
class GridSpec:
    c_values: tuple[float, ...] = DEFAULT_C
    gamma_values: tuple[float, ...] = DEFAULT_GAMMA

    def __post_init__(self):
        object.__setattr__(self, "c_values", tuple(float(c) for c in self.c_values))
        object.__setattr__(self, "gamma_values", tuple(float(g) for g in self.gamma_values))
        if not self.c_values or not self.gamma_values:
            raise ValueError("grid lists must be nonempty")
        if min(self.c_values) <= 0 or min(self.gamma_values) <= 0:
            raise ValueError("grid values must be positive")

    def points(self, family: str) -> list[tuple[float, float | None]]:
        """``(C, gamma)`` pairs; gamma is ``None`` for the linear kernel."""
        gammas: Sequence[float | None] = (None,) if family == "linear" else self.gamma_values
        return [(c, g) for c in self.c_values for g in gammas]


@dataclass(frozen=True)
class CvResult:
    """Pooled cross-validation outcome for both methods on one configuration."""

    n: int
    csvm_correct: int
    gs_correct: int
    fallback_folds: int = 0

    @property
    def csvm_accuracy(self) -> float:
        return 100.0 * self.csvm_correct / self.n

    @property
    def gs_accuracy(self) -> float:
        return 100.0 * self.gs_correct / self.n

    def correct(self, use_gs: bool) -> int:
        return self.gs_correct if use_gs else self.csvm_correct

    def accuracy(self, use_gs: bool) -> float:
        return self.gs_accuracy if use_gs else self.csvm_accuracy


def cv_both(ds: Dataset, kernel: KernelSpec, config: SolverConfig, plan: SplitPlan,
            delta_scale: float = 1.0) -> CvResult:
    X, y = ds.X, ds.y
    kernel = kernel.resolve(ds.n_features)
    K = gram_matrix(kernel, X)
    c_ok = g_ok = fallbacks = 0
    for train, test in plan:
        base = fit_gram(K[np.ix_(train, train)], X[train], y[train], kernel, config)
        gs = scale_or_fallback(base, X[train], y[train], delta_scale)
        fallbacks += gs.fallback is not None
        f = base.decision_function(X[test])
        yt = y[test]
        c_ok += int(np.sum(np.where(f >= 0, 1, -1) == yt))
        g_ok += int(np.sum(np.where(f - gs.delta >= 0, 1, -1) == yt))
    return CvResult(len(ds), c_ok, g_ok, fallbacks)


def cross_validate(ds: Dataset, kernel: KernelSpec = KernelSpec(),
                   config: SolverConfig = SolverConfig(), k: int = 10, seed: int = 0,
                   use_gs: bool = False, delta_scale: float = 1.0) -> float:
    """Pooled k-fold accuracy in percent."""
    plan = stratified_kfold(ds, k, seed)
    return cv_both(ds, kernel, config, plan, delta_scale).accuracy(use_gs)


def _grid_task(args):
    ds, kernel, config, plan, delta_scale = args
    return cv_both(ds, kernel, config, plan, delta_scale)


def grid_scores(ds: Dataset, family: str, grid: GridSpec = GridSpec(), k: int = 10,
                seed: int = 0, config: SolverConfig = SolverConfig(),
                kernel: KernelSpec | None = None, delta_scale: float = 1.0,
                jobs: int = 1, template: KernelSpec | None = None,
                ) -> list[tuple[tuple[float, float | None], CvResult]]:
    """Cross-validate every grid point; results come back in grid order.

    When ``kernel`` is given it is used as is and only ``grid.c_values`` vary.
    Otherwise gamma comes from the grid and degree/coef0 from ``template``.
    """
    plan = stratified_kfold(ds, k, seed)
    if kernel is None:
        points = grid.points(family)
        base = template if template is not None else KernelSpec(family)
        kernels = [replace(base, gamma=g) for _, g in points]
    else:
        points = [(c, kernel.gamma) for c in grid.c_values]
        kernels = [kernel] * len(points)
    tasks = [(ds, kern, replace(config, C=c), plan, delta_scale)
             for (c, _), kern in zip(points, kernels)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_grid_task, tasks))
    else:
        results = [_grid_task(t) for t in tasks]
    return list(zip(points, results))


def best_point(scores, use_gs: bool):
    """Highest accuracy; ties go to the smaller C, then the smaller gamma."""

    def key(item):
        (c, g), res = item
        return (-res.correct(use_gs), c, -math.inf if g is None else g)

    (c, g), res = min(scores, key=key)
    return (c, g), res.accuracy(use_gs)


def grid_search(ds: Dataset, kernel_family: str = "linear", grid: GridSpec = GridSpec(),
                k: int = 10, seed: int = 0, use_gs: bool = False,
                config: SolverConfig = SolverConfig(), delta_scale: float = 1.0,
                jobs: int = 1) -> tuple[tuple[float, float | None], float]:
    """Exhaustive search; returns ``((C, gamma), accuracy %)``."""
    scores = grid_scores(ds, kernel_family, grid, k, seed, config,
                         delta_scale=delta_scale, jobs=jobs)
    return best_point(scores, use_gs)


# ---------------------------------------------------------------------------
# holdout experiment


@dataclass(frozen=True)
class HoldoutResult:
    csvm_accuracy: float
    gs_accuracy: float
    csvm_c: float
    gs_c: float
    csvm_gamma: float | None
    gs_gamma: float | None
    delta: float


def holdout_comparison(train: Dataset, test: Dataset, family: str = "linear",
                       grid: GridSpec = GridSpec(), k: int = 10, seed: int = 0,
                       config: SolverConfig = SolverConfig(),
                       delta_scale: float = 1.0) -> HoldoutResult:
    """Tune each method by k-fold CV on ``train``, refit on all of it, score on ``test``."""
    scores = grid_scores(train, family, grid, k, seed, config, delta_scale=delta_scale)
    (cc, cg), _ = best_point(scores, use_gs=False)
    (gc, gg), _ = best_point(scores, use_gs=True)
    Xt, yt = test.to_dense(train.n_features), test.y

    def fit(c, g):
        return train_csvm(train, KernelSpec(family, gamma=g), replace(config, C=c))

    base_c = fit(cc, cg)
    acc_c = 100.0 * np.mean(np.where(base_c.decision_function(Xt) >= 0, 1, -1) == yt)
    base_g = base_c if (gc, gg) == (cc, cg) else fit(gc, gg)
    gs = scale_or_fallback(base_g, train.X, train.labels, delta_scale)
    acc_g = 100.0 * np.mean(np.where(gs.decision_function(Xt) >= 0, 1, -1) == yt)
    return HoldoutResult(float(acc_c), float(acc_g), cc, gc, cg, gg, gs.delta)


def sign_test(diffs) -> tuple[int, int, float]:
    """One-sided sign test of "differences tend to be positive".

    Returns ``(wins, losses, p)``; zero differences are dropped.
    """
    d = np.asarray(diffs, dtype=np.float64)
    wins, losses = int(np.sum(d > 0)), int(np.sum(d < 0))
    if wins + losses == 0:
        return 0, 0, 1.0
    p = binomtest(wins, wins + losses, 0.5, alternative="greater").pvalue
    return wins, losses, float(p)


# ---------------------------------------------------------------------------
# comparison report


@dataclass(frozen=True)
class ReportRow:
    dataset: str
    kernel: str
    csvm_accuracy: float | None
    gssvm_accuracy: float | None
    csvm_c: float | None
    gssvm_c: float | None
    csvm_gamma: float | None
    gssvm_gamma: float | None
    folds: int
    seed: int
    fallback_folds: int = 0
    error: str = ""


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[ReportRow, ...]
    header: tuple[str, ...] = field(default=())


def compare(datasets: Sequence[Dataset], kernels: Sequence[str], grid: GridSpec = GridSpec(),
            k: int = 10, seed: int = 0, config: SolverConfig = SolverConfig(),
            delta_scale: float = 1.0, jobs: int = 1) -> EvalReport:
    """One row per (dataset, kernel); each method tuned on the shared grid."""
    if not datasets or not kernels:
        raise ValueError("need at least one dataset and one kernel")
    rows = []
    for ds in datasets:
        for fam in kernels:
            fam = KernelSpec(fam).family
            try:
                scores = grid_scores(ds, fam, grid, k, seed, config,
                                     delta_scale=delta_scale, jobs=jobs)
                (cc, cg), ca = best_point(scores, False)
                (gc, gg), ga = best_point(scores, True)
                fb = dict(scores)[(gc, gg)].fallback_folds
                rows.append(ReportRow(ds.name, fam, ca, ga, cc, gc, cg, gg, k, seed, fb))
            except GssvmError as exc:
                msg = f"{type(exc).__name__}: {exc}"
                rows.append(ReportRow(ds.name, fam, None, None, None, None, None, None,
                                      k, seed, 0, msg))
    return EvalReport(tuple(rows), report_header(grid, k, seed, config, delta_scale))


def report_header(grid: GridSpec, k: int, seed: int, config: SolverConfig,
                  delta_scale: float) -> tuple[str, ...]:
    from . import __version__

    return (
        f"gssvm {__version__} comparison report",
        f"folds={k} seed={seed} penalty={config.penalty} tol={config.tol!r} "
        f"delta_scale={delta_scale!r}",
        "accuracy = pooled correct / total over all folds, percent",
        "grid C: " + " ".join(repr(c) for c in grid.c_values),
        "grid gamma (rbf/polynomial): " + " ".join(repr(g) for g in grid.gamma_values),
        "ties: smallest C, then smallest gamma",
    )


def _fmt(v, spec=".2f"):
    if v is None:
        return "-"
    return format(v, spec)


def render_table(report: EvalReport) -> str:
    head = ["dataset", "kernel", "C-SVM", "GS-SVM", "C (C-SVM)", "C (GS)",
            "gamma (C-SVM)", "gamma (GS)", "note"]
    body = []
    for r in report.rows:
        note = r.error or (f"{r.fallback_folds} fold(s) unscaled" if r.fallback_folds else "")
        body.append([r.dataset, r.kernel, _fmt(r.csvm_accuracy), _fmt(r.gssvm_accuracy),
                     _fmt(r.csvm_c, "g"), _fmt(r.gssvm_c, "g"), _fmt(r.csvm_gamma, "g"),
                     _fmt(r.gssvm_gamma, "g"), note])
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    lines = [f"# {h}" for h in report.header]
    for cells in [head] + body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip())
    return "\n".join(lines) + "\n"


_FIELDS = [f.name for f in fields(ReportRow)]


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def report_to_csv(report: EvalReport) -> str:
    buf = io.StringIO()
    for h in report.header:
        buf.write(f"# {h}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_FIELDS)
    for r in report.rows:
        w.writerow([_csv_cell(v) for v in asdict(r).values()])
    return buf.getvalue()


def report_from_csv(text: str) -> EvalReport:
    lines = text.splitlines()
    header = tuple(ln[2:] for ln in lines if ln.startswith("# "))
    data = [ln for ln in lines if not ln.startswith("#")]
    reader = csv.DictReader(data)
    rows = []
    floats = {"csvm_accuracy", "gssvm_accuracy", "csvm_c", "gssvm_c", "csvm_gamma", "gssvm_gamma"}
    for rec in reader:
        kw = {}
        for name in _FIELDS:
            raw = rec[name]
            if name in floats:
                kw[name] = float(raw) if raw != "" else None
            elif name in ("folds", "seed", "fallback_folds"):
                kw[name] = int(raw)
            else:
                kw[name] = raw
        rows.append(ReportRow(**kw))
    return EvalReport(tuple(rows), header)


# ---------------------------------------------------------------------------
# accuracy versus C


@dataclass(frozen=True)
class SweepPoint:
    C: float
    csvm_accuracy: float
    gssvm_accuracy: float


def c_sweep(ds: Dataset, kernel: KernelSpec = KernelSpec(), c_values: Sequence[float] = DEFAULT_C,
            k: int = 10, seed: int = 0, config: SolverConfig = SolverConfig(),
            delta_scale: float = 1.0, jobs: int = 1) -> list[SweepPoint]:
    """Cross-validated accuracy of both methods at each C, on one fixed fold plan."""
    if len(c_values) == 0:
        raise ValueError("need at least one C value")
    grid = GridSpec(c_values=tuple(c_values))
    scores = grid_scores(ds, kernel.family, grid, k, seed, config, kernel=kernel,
                         delta_scale=delta_scale, jobs=jobs)
    return [SweepPoint(c, r.csvm_accuracy, r.gs_accuracy) for (c, _), r in scores]


def argmax_c(curve: Sequence[SweepPoint], use_gs: bool) -> float:
    """Smallest C attaining the curve's maximum."""
    acc = [p.gssvm_accuracy if use_gs else p.csvm_accuracy for p in curve]
    top = max(acc)
    return min(p.C for p, a in zip(curve, acc) if a == top)


def sweep_to_csv(curve: Sequence[SweepPoint]) -> str:
    lines = ["C,csvm_accuracy,gssvm_accuracy"]
    lines += [f"{p.C!r},{p.csvm_accuracy!r},{p.gssvm_accuracy!r}" for p in curve]
    return "\n".join(lines) + "\n"


def sweep_from_csv(text: str) -> list[SweepPoint]:
    rows = list(csv.reader(text.splitlines()))[1:]
    return [SweepPoint(float(a), float(b), float(c)) for a, b, c in rows]


def sweep_svg(curve: Sequence[SweepPoint], path, title: str = "Accuracy versus C") -> None:
    """Line chart of both curves on a log2 C axis (deterministic SVG bytes)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "gssvm", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        cs = [p.C for p in curve]
        ax.plot(cs, [p.csvm_accuracy for p in curve], "o-", label="C-SVM")
        ax.plot(cs, [p.gssvm_accuracy for p in curve], "s--", label="GS-SVM")
        ax.set_xscale("log", base=2)
        ax.set_xlabel("C")
        ax.set_ylabel("accuracy (%)")
        ax.set_title(title)
        ax.legend()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise IoFailure(f"{path}: {exc}") from exc
        finally:
            plt.close(fig)


def write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"{path}: {exc.strerror or exc}") from exc
