#!/usr/bin/env python3
# The boundary shift in feature space: projections come from the kernel
# expansion, so nothing needs an explicit w.
#
# $ python3 demos/kernel_scaling.py

import numpy as np

from gssvm.data import Dataset
from gssvm.kernel import KernelSpec
from gssvm.scaling import apply_scaling, project_points
from gssvm.solver import SolverConfig, train_csvm

rng = np.random.default_rng(1)

# a tight ring inside a wide one
def ring(n, radius, width):
    theta = rng.uniform(0, 2 * np.pi, n)
    r = radius + rng.normal(0, width, n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))

X = np.vstack([ring(80, 1.0, 0.1), ring(80, 3.0, 0.6)])
y = np.r_[np.ones(80), -np.ones(80)]
ds = Dataset.from_dense(X, y, name="rings")

model = train_csvm(ds, KernelSpec("rbf", gamma=0.5), SolverConfig(C=10.0))
e = project_points(model, ds)
print(f"{model.n_sv} support vectors, ||w||^2 = {model.w_norm_sq():.3f}")
print(f"inner ring projections in [{e[y > 0].min():.3f}, {e[y > 0].max():.3f}]")
print(f"outer ring projections in [{e[y < 0].min():.3f}, {e[y < 0].max():.3f}]")

gs = apply_scaling(model, ds)
print(f"d1={gs.d1:.3f} d2={gs.d2:.3f} -> delta={gs.delta:+.4f}")

# how many points on a fresh sample change side
Xn = np.vstack([ring(500, 1.0, 0.1), ring(500, 3.0, 0.6)])
yn = np.r_[np.ones(500), -np.ones(500)]
f = model.decision_function(Xn)
flipped = np.sum((f >= 0) != (f - gs.delta >= 0))
for name, vals in (("C-SVM", f), ("GS-SVM", f - gs.delta)):
    print(f"{name:7s} accuracy on 1000 new points: "
          f"{np.mean(np.where(vals >= 0, 1, -1) == yn) * 100:.1f}%")
print(f"{flipped} predictions changed by the shift")
