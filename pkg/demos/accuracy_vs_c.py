#!/usr/bin/env python3
# Cross-validated accuracy of both methods as C grows, on one toy draw.
# Writes accuracy_vs_c.csv and accuracy_vs_c.svg next to the working dir.
#
# $ python3 demos/accuracy_vs_c.py [seed]

import sys

from gssvm.eval import DEFAULT_C, argmax_c, c_sweep, sweep_svg, sweep_to_csv, write_text
from gssvm.kernel import KernelSpec
from gssvm.synth import ToyConfig, gen_toy

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
train, _ = gen_toy(ToyConfig(seed=seed))

curve = c_sweep(train, KernelSpec("linear"), DEFAULT_C, k=10, seed=seed)
print(f"{'C':>10}  {'C-SVM':>7}  {'GS-SVM':>7}")
for p in curve:
    print(f"{p.C:>10g}  {p.csvm_accuracy:7.2f}  {p.gssvm_accuracy:7.2f}")

print(f"\nbest C: C-SVM {argmax_c(curve, False):g}, GS-SVM {argmax_c(curve, True):g}")

write_text("accuracy_vs_c.csv", sweep_to_csv(curve))
sweep_svg(curve, "accuracy_vs_c.svg", title=f"Accuracy versus C (toy seed {seed})")
print("wrote accuracy_vs_c.csv, accuracy_vs_c.svg")
