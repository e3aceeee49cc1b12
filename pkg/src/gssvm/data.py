"""Labelled sparse datasets, svmlight I/O and stratified fold plans."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadK,
    EmptyDataset,
    IoFailure,
    MalformedLine,
    NonIncreasingIndex,
    ZeroLabel,
)

SparseVector = tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class Dataset:
    """Binary-labelled feature vectors.

    Each point is a tuple of ``(index, value)`` pairs with 1-based, strictly
    increasing indices; absent indices are zeros. Labels are +1 or -1.
    """

    points: tuple[SparseVector, ...]
    labels: tuple[int, ...]
    n_features: int
    name: str = ""

    def __post_init__(self):
        if len(self.points) == 0:
            raise EmptyDataset("dataset has no points")
        if len(self.labels) != len(self.points):
            raise ValueError("labels and points differ in length")
        for y in self.labels:
            if y not in (1, -1):
                raise ValueError(f"label {y!r} is not +1/-1")
        for p in self.points:
            for (a, _), (b, _) in zip(p, p[1:]):
                if b <= a:
                    raise ValueError("feature indices must be strictly increasing")

    def __len__(self):
        return len(self.points)

    @property
    def n_pos(self) -> int:
        return sum(1 for y in self.labels if y > 0)

    @property
    def n_neg(self) -> int:
        return len(self.labels) - self.n_pos

    @cached_property
    def X(self) -> np.ndarray:
        """Dense ``(l, n_features)`` float64 matrix; read-only."""
        X = np.zeros((len(self.points), self.n_features))
        for i, p in enumerate(self.points):
            for j, v in p:
                X[i, j - 1] = v
        X.setflags(write=False)
        return X

    @cached_property
    def y(self) -> np.ndarray:
        y = np.asarray(self.labels, dtype=np.float64)
        y.setflags(write=False)
        return y

    def to_dense(self, n_features: int | None = None) -> np.ndarray:
        if n_features is None or n_features == self.n_features:
            return self.X
        return pad_columns(self.X, n_features)

    def subset(self, indices: Iterable[int], name: str | None = None) -> "Dataset":
        idx = list(indices)
        return Dataset(
            points=tuple(self.points[i] for i in idx),
            labels=tuple(self.labels[i] for i in idx),
            n_features=self.n_features,
            name=self.name if name is None else name,
        )

    def negated(self) -> "Dataset":
        """Same points with every label flipped."""
        return Dataset(self.points, tuple(-y for y in self.labels), self.n_features, self.name)

    @classmethod
    def from_dense(cls, X, y, name: str = "") -> "Dataset":
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        points = tuple(
            tuple((int(j) + 1, float(row[j])) for j in np.flatnonzero(row)) for row in X
        )
        labels = tuple(1 if v > 0 else -1 for v in np.asarray(y).ravel())
        return cls(points, labels, int(X.shape[1]), name)


def pad_columns(X: np.ndarray, n: int) -> np.ndarray:
    """Zero-pad or truncate the columns of ``X`` to width ``n``."""
    X = np.atleast_2d(X)
    if X.shape[1] == n:
        return X
    if X.shape[1] > n:
        return X[:, :n]
    out = np.zeros((X.shape[0], n))
    out[:, : X.shape[1]] = X
    return out


def as_dense(x, n_features: int | None = None) -> np.ndarray:
    """Coerce one feature vector (numpy array or ``(index, value)`` pairs) to 1-D dense."""
    if isinstance(x, np.ndarray):
        v = np.asarray(x, dtype=np.float64).ravel()
    else:
        pairs = list(x)
        width = max((j for j, _ in pairs), default=0)
        v = np.zeros(width)
        for j, val in pairs:
            v[j - 1] = val
    if n_features is not None:
        v = pad_columns(v[None, :], n_features)[0]
    return v


# ---------------------------------------------------------------------------
# svmlight text format


def _parse_line(lineno: int, line: str):
    tokens = line.split()
    try:
        label = float(tokens[0])
    except ValueError:
        raise MalformedLine(lineno, f"bad label {tokens[0]!r}") from None
    if math.isnan(label):
        raise MalformedLine(lineno, "label is NaN")
    if label == 0:
        raise ZeroLabel(lineno, "label 0 has no sign")
    pairs = []
    last = 0
    for tok in tokens[1:]:
        idx, sep, val = tok.partition(":")
        if not sep:
            raise MalformedLine(lineno, f"bad token {tok!r}")
        try:
            j = int(idx)
            v = float(val)
        except ValueError:
            raise MalformedLine(lineno, f"bad token {tok!r}") from None
        if j < 1:
            raise MalformedLine(lineno, f"feature index {j} < 1")
        if j <= last:
            raise NonIncreasingIndex(lineno, f"index {j} after {last}")
        last = j
        pairs.append((j, v))
    return (1 if label > 0 else -1), tuple(pairs)


def parse_svmlight(text: bytes | str, name: str = "") -> Dataset:
    """Parse svmlight/libsvm text.

    Positive labels map to +1, negative ones to -1. Lines whose first
    non-blank character is ``#`` are skipped, as is anything after an inline
    ``#``.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedLine(1, "input is not UTF-8") from exc
    points, labels = [], []
    n_features = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        label, pairs = _parse_line(lineno, line)
        labels.append(label)
        points.append(pairs)
        if pairs:
            n_features = max(n_features, pairs[-1][0])
    if not points:
        raise EmptyDataset("no data lines")
    return Dataset(tuple(points), tuple(labels), n_features, name)


def load_svmlight(path, name: str | None = None) -> Dataset:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IoFailure(f"{path}: {exc.strerror or exc}") from exc
    return parse_svmlight(raw, name=path.stem if name is None else name)


def format_real(v: float) -> str:
    """Shortest decimal string that round-trips to the same float64."""
    return repr(float(v))


def dump_svmlight(ds: Dataset, header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    for y, p in zip(ds.labels, ds.points):
        toks = ["+1" if y > 0 else "-1"]
        toks.extend(f"{j}:{format_real(v)}" for j, v in p)
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def save_svmlight(ds: Dataset, path, header: Sequence[str] = ()) -> None:
    try:
        Path(path).write_text(dump_svmlight(ds, header), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"{path}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------------------
# fold plans


@dataclass(frozen=True)
class SplitPlan:
    folds: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    k: int
    seed: int

    def __iter__(self):
        for train, test in self.folds:
            yield np.asarray(train, dtype=np.intp), np.asarray(test, dtype=np.intp)


def stratified_kfold(ds: Dataset, k: int, seed: int) -> SplitPlan:
    """Deal each class's shuffled indices round-robin into ``k`` test folds.

    Positives are dealt first, then negatives continue from the fold after
    the last positive, so fold sizes differ by at most one overall and each
    class's count per fold differs by at most one.
    """
    l = len(ds)
    if k < 2 or k > l:
        raise BadK(f"k={k} outside [2, {l}]")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    rng = np.random.default_rng(seed)
    labels = np.asarray(ds.labels)
    buckets: list[list[int]] = [[] for _ in range(k)]
    pos = 0
    for cls in (1, -1):
        members = np.flatnonzero(labels == cls)
        for i in rng.permutation(members):
            buckets[pos % k].append(int(i))
            pos += 1
    folds = []
    everything = set(range(l))
    for test in buckets:
        test_sorted = tuple(sorted(test))
        train = tuple(sorted(everything.difference(test)))
        folds.append((train, test_sorted))
    return SplitPlan(tuple(folds), k, seed)
