"""Kernel functions, Gram matrices and an on-demand row cache."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.spatial.distance import cdist

FAMILIES = ("linear", "rbf", "polynomial")
_ALIASES = {"poly": "polynomial", "gaussian": "rbf"}

#: Above this many points the solver switches from a dense Gram matrix to
#: rows computed on demand.
DENSE_GRAM_LIMIT = 10_000


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus hyperparameters.

    ``gamma=None`` means "1 / n_features", filled in by :meth:`resolve` once
    the data dimension is known.
    """

    family: str = "linear"
    gamma: float | None = None
    degree: int = 3
    coef0: float = 0.0

    def __post_init__(self):
        fam = _ALIASES.get(self.family, self.family)
        if fam not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        object.__setattr__(self, "family", fam)
        if self.gamma is not None and not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if int(self.degree) != self.degree or self.degree < 1:
            raise ValueError("degree must be a positive integer")

    def resolve(self, n_features: int) -> "KernelSpec":
        if self.gamma is not None or self.family == "linear":
            return self
        return replace(self, gamma=1.0 / max(n_features, 1))

    @property
    def g(self) -> float:
        if self.gamma is None:
            raise ValueError("gamma unresolved; call resolve(n_features) first")
        return self.gamma


def _sparse_dot(a, b) -> float:
    i = j = 0
    s = 0.0
    while i < len(a) and j < len(b):
        ia, ib = a[i][0], b[j][0]
        if ia == ib:
            s += a[i][1] * b[j][1]
            i += 1
            j += 1
        elif ia < ib:
            i += 1
        else:
            j += 1
    return s


def _sparse_sqdist(a, b) -> float:
    i = j = 0
    s = 0.0
    while i < len(a) or j < len(b):
        ia = a[i][0] if i < len(a) else math.inf
        ib = b[j][0] if j < len(b) else math.inf
        if ia == ib:
            d = a[i][1] - b[j][1]
            i += 1
            j += 1
        elif ia < ib:
            d = a[i][1]
            i += 1
        else:
            d = b[j][1]
            j += 1
        s += d * d
    return s


def kernel_eval(spec: KernelSpec, a, b) -> float:
    """K(a, b) for two sparse vectors given as sorted ``(index, value)`` pairs."""
    a, b = tuple(a), tuple(b)
    if spec.family == "linear":
        return _sparse_dot(a, b)
    if spec.family == "rbf":
        return math.exp(-spec.g * _sparse_sqdist(a, b))
    return (spec.g * _sparse_dot(a, b) + spec.coef0) ** spec.degree


def cross_kernel(spec: KernelSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Dense ``K[i, j] = K(A[i], B[j])`` for row-stacked points."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    if spec.family == "rbf":
        return np.exp(-spec.g * cdist(A, B, "sqeuclidean"))
    K = A @ B.T
    if spec.family == "polynomial":
        K = (spec.g * K + spec.coef0) ** spec.degree
    return K


def symmetrize(K: np.ndarray) -> np.ndarray:
    """Copy the upper triangle onto the lower one so ``K == K.T`` bit-exactly."""
    upper = np.triu(K)
    return upper + np.triu(upper, 1).T


def gram_matrix(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    return symmetrize(cross_kernel(spec, X, X))


def gram(spec: KernelSpec, ds) -> np.ndarray:
    """l x l Gram matrix of a :class:`~gssvm.data.Dataset`."""
    return gram_matrix(spec.resolve(ds.n_features), ds.X)


class KernelRows:
    """Gram-matrix rows computed on demand behind an LRU cache.

    Used for problems too large for a dense Gram matrix. One instance per
    solver run; ``functools.lru_cache`` makes concurrent readers safe.
    """

    def __init__(self, spec: KernelSpec, X: np.ndarray, cache_rows: int = 1024):
        self.spec = spec
        self.X = X
        self.diag = self._diag()
        self.row = lru_cache(maxsize=cache_rows)(self._row)

    def _diag(self):
        if self.spec.family == "rbf":
            return np.ones(len(self.X))
        sq = np.einsum("ij,ij->i", self.X, self.X)
        if self.spec.family == "polynomial":
            return (self.spec.g * sq + self.spec.coef0) ** self.spec.degree
        return sq

    def _row(self, i: int) -> np.ndarray:
        r = cross_kernel(self.spec, self.X[i : i + 1], self.X)[0]
        r.setflags(write=False)
        return r

    def __len__(self):
        return len(self.X)
