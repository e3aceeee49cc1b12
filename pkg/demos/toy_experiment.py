#!/usr/bin/env python3
# Two Gaussian classes with different spreads: C-SVM against GS-SVM.
#
# usage:
# $ python3 demos/toy_experiment.py            # one draw, then a 50-seed ensemble
# $ python3 demos/toy_experiment.py --seeds 200

import argparse

import numpy as np

from gssvm.eval import GridSpec, holdout_comparison, sign_test
from gssvm.kernel import KernelSpec
from gssvm.scaling import train_gssvm
from gssvm.solver import SolverConfig
from gssvm.synth import ToyConfig, gen_toy

parser = argparse.ArgumentParser()
parser.add_argument("--seeds", type=int, default=50)
args = parser.parse_args()

# ---- a single draw -------------------------------------------------------
train, test = gen_toy(ToyConfig(seed=0))
print(f"train: {len(train)} points, test: {len(test)} points")

gs = train_gssvm(train, KernelSpec("linear"), SolverConfig(C=1.0))
print(f"projected scales d1={gs.d1:.3f} d2={gs.d2:.3f}, delta={gs.delta:+.4f}")
print(f"support vectors: {gs.base.n_sv}, w = {gs.base.weight_vector().round(3)}")

Xt, yt = test.X, test.y
acc_c = np.mean(np.where(gs.base.decision_function(Xt) >= 0, 1, -1) == yt) * 100
acc_g = np.mean(np.where(gs.decision_function(Xt) >= 0, 1, -1) == yt) * 100
print(f"C=1 test accuracy: C-SVM {acc_c:.2f}%, GS-SVM {acc_g:.2f}%")

# ---- tuned, over many draws ---------------------------------------------
# Each method picks its own C by 10-fold CV on the training draw.
grid = GridSpec()
c_acc, g_acc = [], []
for seed in range(args.seeds):
    tr, te = gen_toy(ToyConfig(seed=seed))
    r = holdout_comparison(tr, te, "linear", grid, k=10, seed=seed)
    c_acc.append(r.csvm_accuracy)
    g_acc.append(r.gs_accuracy)

wins, losses, p = sign_test(np.subtract(g_acc, c_acc))
print(f"\n{args.seeds} seeds: mean C-SVM {np.mean(c_acc):.2f}%, "
      f"mean GS-SVM {np.mean(g_acc):.2f}%")
print(f"GS-SVM better on {wins}, worse on {losses}, one-sided sign test p = {p:.4f}")
