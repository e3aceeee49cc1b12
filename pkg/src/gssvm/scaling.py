"""Hyperplane translation from projected class scales.

After a C-SVM is trained, every training point is projected onto the
hyperplane normal. The range of each class along that direction (its
projected scale) decides how far the boundary moves: it slides toward the
class with the smaller scale, by a functional-margin offset ``delta``.

With ``delta_scale=1`` the offset lies in ``[-1, 1]`` and the shifted
boundary splits the margin so that the distances to the nearest point of
each class are in ratio ``sqrt(d1 / d2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset, as_dense
from .errors import DegenerateNormal, OneClassOnly
from .kernel import KernelSpec
from .solver import CsvmModel, SolverConfig, train_csvm

MIN_W_NORM_SQ = 1e-12


@dataclass(frozen=True, eq=False)
class GsModel:
    """A C-SVM whose boundary is moved to functional value ``delta``.

    ``fallback`` names the error that prevented scaling (the model then
    behaves exactly like ``base``), or is ``None``.
    """

    base: CsvmModel
    d1: float
    d2: float
    delta: float
    delta_scale: float = 1.0
    fallback: str | None = None

    def decision_function(self, X) -> np.ndarray:
        return self.base.decision_function(X) - self.delta

    @property
    def kernel(self) -> KernelSpec:
        return self.base.kernel

    @property
    def config(self) -> SolverConfig:
        return self.base.config


def project_points(model: CsvmModel, X, normalize: bool = True) -> np.ndarray:
    """Coordinates ``e_i = w . phi(x_i) / ||w||`` along the hyperplane normal.

    ``X`` is a Dataset or a 2-D array. The kernel expansion is used
    throughout, so this works in feature space as well. With
    ``normalize=False`` the ``1/||w||`` factor is dropped.
    """
    if isinstance(X, Dataset):
        X = X.X
    nsq = model.w_norm_sq()
    if not nsq > MIN_W_NORM_SQ:
        raise DegenerateNormal(f"||w||^2 = {nsq:.3g} leaves no usable direction")
    raw = model.raw_decision(X)
    return raw / math.sqrt(nsq) if normalize else raw


def projected_scales(e, labels) -> tuple[float, float]:
    """Ranges (max - min) of the positive and negative projections."""
    e = np.asarray(e, dtype=np.float64)
    labels = np.asarray(labels)
    pos, neg = e[labels > 0], e[labels < 0]
    if len(pos) == 0 or len(neg) == 0:
        raise OneClassOnly("projected scales need both classes")
    return float(pos.max() - pos.min()), float(neg.max() - neg.min())


def compute_delta(d1: float, d2: float, delta_scale: float = 1.0) -> float:
    """``delta_scale * (sqrt(d2) - sqrt(d1)) / (sqrt(d1) + sqrt(d2))``; 0 when both are 0."""
    if d1 < 0 or d2 < 0:
        raise ValueError("projected scales must be non-negative")
    if d1 + d2 == 0:
        return 0.0
    r1, r2 = math.sqrt(d1), math.sqrt(d2)
    return delta_scale * (r2 - r1) / (r1 + r2)


def apply_scaling(model: CsvmModel, ds: Dataset, delta_scale: float = 1.0,
                  normalize: bool = True) -> GsModel:
    """Project the training set ``ds``, measure both classes and shift the boundary."""
    return scale_arrays(model, ds.X, ds.labels, delta_scale, normalize)


def scale_arrays(model: CsvmModel, X, labels, delta_scale: float = 1.0,
                 normalize: bool = True) -> GsModel:
    if not delta_scale > 0:
        raise ValueError("delta_scale must be positive")
    e = project_points(model, X, normalize=normalize)
    d1, d2 = projected_scales(e, labels)
    return GsModel(model, d1, d2, compute_delta(d1, d2, delta_scale), delta_scale)


def scale_or_fallback(model: CsvmModel, X, labels, delta_scale: float = 1.0) -> GsModel:
    """Like :func:`scale_arrays`, but a degenerate projection gives an unshifted model."""
    try:
        return scale_arrays(model, X, labels, delta_scale)
    except (DegenerateNormal, OneClassOnly) as exc:
        return GsModel(model, 0.0, 0.0, 0.0, delta_scale, fallback=type(exc).__name__)


def train_gssvm(ds: Dataset, kernel: KernelSpec = KernelSpec(),
                config: SolverConfig = SolverConfig(), delta_scale: float = 1.0) -> GsModel:
    """All three steps: train the C-SVM, project, translate."""
    return apply_scaling(train_csvm(ds, kernel, config), ds, delta_scale)


def gs_decision_value(model: GsModel, x) -> float:
    return float(model.decision_function(as_dense(x)[None, :])[0])

