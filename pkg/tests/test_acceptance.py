"""Acceptance criteria, each at its stated tolerance and time budget.

Every test records a one-line verdict that is echoed in the pytest
terminal summary. Run with ``pytest tests/test_acceptance.py -v``.
"""

import io
import itertools
import math
import time
import warnings

import numpy as np

from gssvm.cli import run
from gssvm.data import Dataset, dump_svmlight, parse_svmlight, save_svmlight
from gssvm.datasets import load_toy
from gssvm.eval import (
    DEFAULT_C,
    GridSpec,
    argmax_c,
    c_sweep,
    holdout_comparison,
    report_from_csv,
    report_to_csv,
    sign_test,
)
from gssvm.kernel import KernelSpec
from gssvm.model import dumps, loads
from gssvm.scaling import MIN_W_NORM_SQ, compute_delta, project_points, train_gssvm
from gssvm.solver import SolverConfig, train_csvm
from gssvm.synth import ToyConfig, gen_toy

from oracles import brute_force_dual, dual_value, kernel_matrix, random_problem


def test_criterion_1_solver_matches_oracle(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240601)
    worst, count = 0.0, 0
    for _ in range(100):
        X, y = random_problem(rng, l_max=6, n_max=3)
        K = kernel_matrix(X, "linear")
        ds = Dataset.from_dense(X, y)
        for C, penalty in itertools.product((0.1, 1.0, 10.0), ("l1", "l2")):
            want, _ = brute_force_dual(y, K, C, penalty)
            m = train_csvm(ds, KernelSpec("linear"), SolverConfig(C=C, penalty=penalty, tol=1e-10))
            alpha = np.zeros(len(y))
            alpha[m.sv_index] = m.sv_alpha
            worst = max(worst, abs(dual_value(alpha, y, K, C, penalty) - want))
            count += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 30
    verdict(ok, f"criterion 1 solver vs brute-force dual: {count} problems, "
                f"max |dW| = {worst:.2e} (tol 1e-6), {elapsed:.1f}s (limit 30s)")
    assert ok


def test_criterion_2_delta_properties(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    grid = np.r_[0.0, np.logspace(-6, 6, 49)]
    bad = []
    for d1, d2 in itertools.product(grid, grid):
        d = compute_delta(d1, d2)
        lam = float(10 ** rng.uniform(-6, 6))
        if not abs(d) <= 1:
            bad.append(("bound", d1, d2))
        if abs(compute_delta(d2, d1) + d) > 1e-12:
            bad.append(("antisymmetry", d1, d2))
        if abs(compute_delta(lam * d1, lam * d2) - d) > 1e-12:
            bad.append(("scale", d1, d2, lam))
        if d1 == d2 and d != 0:
            bad.append(("equal", d1, d2))
        if d1 == 0 and d2 > 0 and d != 1:
            bad.append(("d1=0", d1, d2))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 1
    verdict(ok, f"criterion 2 delta properties: 50x50 grid, {len(bad)} violations, "
                f"{elapsed:.3f}s (limit 1s)")
    assert ok, bad[:5]


def _separable_2d(rng):
    """Two classes split by a random line with a gap, each with its own spread."""
    theta = rng.uniform(0, 2 * np.pi)
    u = np.array([math.cos(theta), math.sin(theta)])
    v = np.array([-u[1], u[0]])
    n1, n2 = int(rng.integers(5, 30)), int(rng.integers(5, 30))
    s1, s2 = rng.uniform(0.2, 3.0, 2)
    P = (1 + rng.exponential(s1, n1))[:, None] * u + rng.normal(0, s1, n1)[:, None] * v
    N = -(1 + rng.exponential(s2, n2))[:, None] * u + rng.normal(0, s2, n2)[:, None] * v
    shift = rng.normal(0, 2, 2)
    X = np.vstack([P, N]) + shift
    return Dataset.from_dense(X, np.r_[np.ones(n1), -np.ones(n2)])


def test_criterion_3_distance_ratio(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(50):
        ds = _separable_2d(rng)
        gs = train_gssvm(ds, KernelSpec("linear"), SolverConfig(C=1e6, tol=1e-10))
        w = gs.base.weight_vector()
        dist = (ds.X @ w + gs.base.bias - gs.delta) / np.linalg.norm(w)
        c1, c2 = dist[ds.y > 0].min(), (-dist[ds.y < 0]).min()
        worst = max(worst, abs(c1 / c2 - math.sqrt(gs.d1 / gs.d2)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 10
    verdict(ok, f"criterion 3 c1/c2 = sqrt(d1/d2): 50 datasets, max error {worst:.2e} "
                f"(tol 1e-6), {elapsed:.1f}s (limit 10s)")
    assert ok


def test_criterion_4_toy_ensemble(verdict):
    t0 = time.perf_counter()
    grid = GridSpec(c_values=DEFAULT_C)
    c_acc, g_acc = [], []
    for seed in range(200):
        train, test = gen_toy(ToyConfig(seed=seed))
        r = holdout_comparison(train, test, "linear", grid, k=10, seed=seed)
        c_acc.append(r.csvm_accuracy)
        g_acc.append(r.gs_accuracy)
    elapsed = time.perf_counter() - t0
    c_mean, g_mean = float(np.mean(c_acc)), float(np.mean(g_acc))
    wins, losses, p = sign_test(np.subtract(g_acc, c_acc))
    ok = (g_mean > c_mean and p < 0.05 and 90 <= c_mean <= 100 and 90 <= g_mean <= 100
          and elapsed < 120)
    verdict(ok, f"criterion 4 toy ensemble, 200 seeds: C-SVM {c_mean:.2f}%, GS-SVM "
                f"{g_mean:.2f}%, sign test {wins} wins / {losses} losses, p = {p:.4f} "
                f"(< 0.05), {elapsed:.1f}s (limit 120s)")
    assert ok


def test_criterion_5_compare_harness(verdict, tmp_path):
    t0 = time.perf_counter()
    a, b = tmp_path / "gauss_a.txt", tmp_path / "gauss_b.txt"
    rng = np.random.default_rng(5)
    for path, shift in ((a, 1.0), (b, 0.6)):
        X = np.vstack([rng.normal(shift, 1, (40, 3)), rng.normal(-shift, 1, (40, 3))])
        save_svmlight(Dataset.from_dense(X, np.r_[np.ones(40), -np.ones(40)]), path)
    report = tmp_path / "report.csv"
    out = io.StringIO()
    code = run(["compare", "--toy", "--data", f"{a},{b}", "--kernels", "linear,rbf",
                "--csv", str(report), "--jobs", "4"], out=out)
    rep = report_from_csv(report.read_text())
    rows = {(r.dataset, r.kernel): r for r in rep.rows}
    elapsed = time.perf_counter() - t0
    well_formed = (
        code == 0
        and len(rep.rows) == 6
        and set(rows) == {(d, k) for d in ("toy", "gauss_a", "gauss_b") for k in ("linear", "rbf")}
        and all(r.error == "" and 0 <= r.csvm_accuracy <= 100 and 0 <= r.gssvm_accuracy <= 100
                for r in rep.rows)
        and report_to_csv(rep) == report.read_text()
    )
    toy = [rows[("toy", k)] for k in ("linear", "rbf")]
    margin_ok = all(r.gssvm_accuracy >= r.csvm_accuracy - 0.5 for r in toy)
    ok = well_formed and margin_ok
    desc = ", ".join(f"{r.kernel} {r.csvm_accuracy:.2f} vs {r.gssvm_accuracy:.2f}" for r in toy)
    verdict(ok, f"criterion 5 compare harness: 3 datasets x 2 kernels, well-formed="
                f"{well_formed}, toy rows (C-SVM vs GS-SVM) {desc}, {elapsed:.1f}s")
    assert ok


def test_criterion_6_sweep_argmax(verdict):
    t0 = time.perf_counter()
    smaller_or_equal = strictly = 0
    for seed in range(50):
        train, _ = gen_toy(ToyConfig(seed=seed))
        curve = c_sweep(train, KernelSpec("linear"), DEFAULT_C, k=10, seed=seed)
        cg, cc = argmax_c(curve, use_gs=True), argmax_c(curve, use_gs=False)
        smaller_or_equal += cg <= cc
        strictly += cg < cc
    elapsed = time.perf_counter() - t0
    ok = smaller_or_equal > 25
    verdict(ok, f"criterion 6 sweep argmax: GS-SVM best C <= C-SVM best C in "
                f"{smaller_or_equal}/50 seeds ({strictly} strictly smaller), {elapsed:.1f}s",
            soft=True)
    if not ok:
        warnings.warn(f"GS-SVM argmax C not smaller in a majority ({smaller_or_equal}/50)")


def test_criterion_7_determinism_and_round_trips(verdict, tmp_path):
    t0 = time.perf_counter()
    checks = {}
    train = tmp_path / "train.txt"
    assert run(["gen-toy", "--seed", "11", "-o", str(train)]) == 0
    m1, m2 = tmp_path / "m1.gsm", tmp_path / "m2.gsm"
    for m in (m1, m2):
        run(["train", "-i", str(train), "--kernel", "rbf", "--gamma", "0.7", "--c", "3",
             "--gs", "-o", str(m)])
    checks["model bytes"] = m1.read_bytes() == m2.read_bytes()
    r1, r2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    for r in (r1, r2):
        run(["compare", "--data", str(train), "--kernels", "linear,rbf", "--folds", "5",
             "--grid-c", "0.5,4", "--grid-gamma", "0.25,2", "--csv", str(r)], out=io.StringIO())
    checks["report bytes"] = r1.read_bytes() == r2.read_bytes()

    model = loads(m1.read_text())
    back = loads(dumps(model))
    X = np.random.default_rng(0).uniform(-3, 5, size=(1000, 2))
    checks["decision values"] = np.array_equal(model.decision_function(X),
                                               back.decision_function(X))
    ds = load_toy()
    checks["svmlight"] = parse_svmlight(dump_svmlight(ds), name="toy") == ds
    rep = report_from_csv(r1.read_text())
    checks["report csv"] = report_to_csv(rep) == r1.read_text() and report_from_csv(
        report_to_csv(rep)) == rep
    elapsed = time.perf_counter() - t0
    ok = all(checks.values()) and elapsed < 5
    verdict(ok, "criterion 7 determinism and round trips: "
                + ", ".join(f"{k}={'ok' if v else 'BAD'}" for k, v in checks.items())
                + f", {elapsed:.2f}s (limit 5s)")
    assert ok


def test_criterion_8_linear_identity(verdict):
    rng = np.random.default_rng(8)
    worst_f = worst_e = 0.0
    used = skipped = 0
    while used < 20:
        l, n = int(rng.integers(10, 60)), int(rng.integers(1, 6))
        y = np.ones(l)
        while abs(y.sum()) == l:
            X = rng.normal(size=(l, n)) * rng.uniform(0.1, 5, n)
            y = np.where(X @ rng.normal(size=n) + rng.normal(0, 0.5, l) > 0, 1.0, -1.0)
        ds = Dataset.from_dense(X, y)
        m = train_csvm(ds, KernelSpec("linear"), SolverConfig(C=float(rng.uniform(0.1, 10))))
        T = rng.normal(size=(100, n)) * 3
        w = m.weight_vector()
        # optimum with w = 0 has no normal to project on
        if not w @ w > MIN_W_NORM_SQ:
            skipped += 1
            continue
        used += 1
        worst_f = max(worst_f, np.abs(m.decision_function(T) - (T @ w + m.bias)).max())
        e = project_points(m, T)
        worst_e = max(worst_e, np.abs(e - T @ w / np.linalg.norm(w)).max())
    ok = worst_f <= 1e-10 and worst_e <= 1e-10
    verdict(ok, f"criterion 8 linear identity: 20 datasets ({skipped} w=0 draws skipped), "
                f"max decision error {worst_f:.1e}, max projection error {worst_e:.1e} "
                f"(tol 1e-10)")
    assert ok
