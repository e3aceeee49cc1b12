"""Seeded two-Gaussian toy data.

Sampling is frozen so a seed reproduces the same points on every platform:
uniforms come from numpy's PCG64 (``numpy.random.default_rng(seed)``), and
each point consumes two uniforms ``u1, u2`` turned into a pair of standard
normals by Box-Muller::

    r = sqrt(-2 ln(1 - u1));  z = (r cos(2 pi u2), r sin(2 pi u2))

The point is then ``mean + L z`` with ``L`` the Cholesky factor of the class
covariance. Draw order: training positives, training negatives, test
positives, test negatives.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .data import Dataset
from .errors import NotSPD


@dataclass(frozen=True)
class ToyConfig:
    mean_pos: tuple[float, float] = (0.2, 0.1)
    cov_pos: tuple[tuple[float, float], tuple[float, float]] = ((0.5, 0.2), (0.2, 0.4))
    mean_neg: tuple[float, float] = (1.7, 1.7)
    cov_neg: tuple[tuple[float, float], tuple[float, float]] = ((0.4, -0.2), (-0.2, 0.4))
    n_train_per_class: int = 30
    n_test_per_class: int = 60
    seed: int = 0

    def __post_init__(self):
        if self.n_train_per_class < 1 or self.n_test_per_class < 1:
            raise ValueError("class sizes must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        for cov in (self.cov_pos, self.cov_neg):
            if cov[0][1] != cov[1][0]:
                raise NotSPD(f"covariance {cov} is not symmetric")

    def header(self) -> list[str]:
        """``key=value`` lines describing the config, for svmlight comments."""
        return [f"{k}={v}" for k, v in asdict(self).items()]


def cholesky2(cov) -> np.ndarray:
    """Lower-triangular ``L`` with ``L @ L.T == cov`` for a 2x2 SPD matrix."""
    (c11, c12), (c21, c22) = np.asarray(cov, dtype=np.float64)
    if c12 != c21:
        raise NotSPD("covariance is not symmetric")
    if not c11 > 0:
        raise NotSPD("non-positive leading entry")
    l11 = math.sqrt(c11)
    l21 = c12 / l11
    rest = c22 - l21 * l21
    if not rest > 0:
        raise NotSPD("non-positive Schur complement")
    return np.array([[l11, 0.0], [l21, math.sqrt(rest)]])


def box_muller(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` pairs of independent standard normals, shape ``(n, 2)``."""
    u = rng.random((n, 2))
    r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    theta = 2.0 * np.pi * u[:, 1]
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def sample_gaussian(rng, mean, cov, n) -> np.ndarray:
    L = cholesky2(cov)
    return np.asarray(mean, dtype=np.float64) + box_muller(rng, n) @ L.T


def gen_toy(cfg: ToyConfig = ToyConfig()) -> tuple[Dataset, Dataset]:
    """Training and test sets; positives (label +1) come first in each."""
    rng = np.random.default_rng(cfg.seed)
    out = []
    for n, tag in ((cfg.n_train_per_class, "train"), (cfg.n_test_per_class, "test")):
        pos = sample_gaussian(rng, cfg.mean_pos, cfg.cov_pos, n)
        neg = sample_gaussian(rng, cfg.mean_neg, cfg.cov_neg, n)
        X = np.vstack((pos, neg))
        y = np.r_[np.ones(n), -np.ones(n)]
        points = tuple(((1, float(a)), (2, float(b))) for a, b in X)
        labels = tuple(int(v) for v in y)
        out.append(Dataset(points, labels, 2, f"toy-{tag}-{cfg.seed}"))
    return out[0], out[1]
