"""General Scaled SVM: a soft-margin SVM whose boundary is translated toward
the class with the smaller spread along the hyperplane normal."""

__version__ = "0.1.0"

from .data import Dataset, SplitPlan, load_svmlight, parse_svmlight, save_svmlight, stratified_kfold
from .kernel import KernelSpec, gram, kernel_eval
from .model import load, predict, predict_many, save
from .scaling import GsModel, apply_scaling, compute_delta, project_points, projected_scales, train_gssvm
from .solver import CsvmModel, SolverConfig, decision_value, dual_objective, train_csvm
from .synth import ToyConfig, cholesky2, gen_toy
