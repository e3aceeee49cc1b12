"""Prediction for either model kind, and the line-oriented model file.

File layout (UTF-8, one ``key value`` pair per header line)::

    gssvm_model 1
    kernel rbf
    gamma 0.5
    ...
    sv_count 3
    SV
    <alpha*y> <idx>:<val> ...

Reals are written with ``repr`` so they load back to the identical float64.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .data import as_dense, format_real
from .errors import CorruptModel, FormatVersionMismatch, IoFailure
from .kernel import KernelSpec
from .scaling import GsModel
from .solver import CsvmModel, SolverConfig

FORMAT_VERSION = 1
MAGIC = "gssvm_model"

_HEADER_KEYS = (
    "kernel", "gamma", "degree", "coef0", "penalty", "C", "tol", "max_iter",
    "n_features", "bias", "dual_objective", "gs", "delta", "delta_scale",
    "d1", "d2", "fallback", "sv_count",
)


def decision_values(model: CsvmModel | GsModel, X) -> np.ndarray:
    """Shifted decision values ``f(x) - delta`` (``delta = 0`` for a plain C-SVM)."""
    return model.decision_function(X)


def predict_many(model: CsvmModel | GsModel, X) -> np.ndarray:
    """Labels for each row of ``X``; a zero decision value predicts +1."""
    return np.where(decision_values(model, X) >= 0, 1, -1)


def predict(model: CsvmModel | GsModel, x) -> int:
    return int(predict_many(model, as_dense(x)[None, :])[0])


def _header_lines(model: CsvmModel | GsModel) -> list[str]:
    gs = isinstance(model, GsModel)
    base = model.base if gs else model
    k, c = base.kernel, base.config
    fields = {
        "kernel": k.family,
        "gamma": "none" if k.gamma is None else format_real(k.gamma),
        "degree": str(k.degree),
        "coef0": format_real(k.coef0),
        "penalty": c.penalty,
        "C": format_real(c.C),
        "tol": format_real(c.tol),
        "max_iter": str(c.max_iter),
        "n_features": str(base.n_features),
        "bias": format_real(base.bias),
        "dual_objective": format_real(base.dual_objective),
        "gs": "1" if gs else "0",
        "delta": format_real(model.delta if gs else 0.0),
        "delta_scale": format_real(model.delta_scale if gs else 1.0),
        "d1": format_real(model.d1 if gs else 0.0),
        "d2": format_real(model.d2 if gs else 0.0),
        "fallback": (model.fallback or "none") if gs else "none",
        "sv_count": str(base.n_sv),
    }
    return [f"{MAGIC} {FORMAT_VERSION}"] + [f"{key} {fields[key]}" for key in _HEADER_KEYS]


def dumps(model: CsvmModel | GsModel) -> str:
    base = model.base if isinstance(model, GsModel) else model
    lines = _header_lines(model)
    lines.append("SV")
    for coef, row in zip(base.sv_coef, base.sv_points):
        toks = [format_real(coef)]
        toks.extend(f"{j + 1}:{format_real(row[j])}" for j in np.flatnonzero(row))
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def save(model: CsvmModel | GsModel, path) -> None:
    try:
        Path(path).write_text(dumps(model), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"{path}: {exc.strerror or exc}") from exc


def _parse_real(lineno, text):
    try:
        return float(text)
    except ValueError:
        raise CorruptModel(lineno, f"bad number {text!r}") from None


def _parse_int(lineno, text):
    try:
        return int(text)
    except ValueError:
        raise CorruptModel(lineno, f"bad integer {text!r}") from None


def loads(text: str) -> CsvmModel | GsModel:
    lines = text.splitlines()
    if not lines:
        raise CorruptModel(1, "empty model file")
    first = lines[0].split()
    if len(first) != 2 or first[0] != MAGIC:
        raise CorruptModel(1, "missing model header")
    if first[1] != str(FORMAT_VERSION):
        raise FormatVersionMismatch(f"file version {first[1]}, expected {FORMAT_VERSION}")

    header: dict[str, tuple[int, str]] = {}
    lineno = 1
    for lineno, line in enumerate(lines[1:], start=2):
        if line == "SV":
            break
        key, _, value = line.partition(" ")
        if key not in _HEADER_KEYS or not value:
            raise CorruptModel(lineno, f"unexpected header line {line!r}")
        header[key] = (lineno, value)
    else:
        raise CorruptModel(lineno + 1, "missing SV section")
    missing = [k for k in _HEADER_KEYS if k not in header]
    if missing:
        raise CorruptModel(lineno, f"missing header keys: {', '.join(missing)}")

    def real(key):
        return _parse_real(*header[key])

    def integer(key):
        return _parse_int(*header[key])

    try:
        gamma_text = header["gamma"][1]
        kernel = KernelSpec(
            family=header["kernel"][1],
            gamma=None if gamma_text == "none" else real("gamma"),
            degree=integer("degree"),
            coef0=real("coef0"),
        )
        config = SolverConfig(C=real("C"), penalty=header["penalty"][1], tol=real("tol"),
                              max_iter=integer("max_iter"))
    except ValueError as exc:
        raise CorruptModel(header["kernel"][0], str(exc)) from None

    n_features = integer("n_features")
    n_sv = integer("sv_count")
    body = [ln for ln in lines[lineno:] if ln.strip()]
    if len(body) != n_sv:
        raise CorruptModel(lineno + len(body), f"expected {n_sv} support vectors, found {len(body)}")
    coefs = np.empty(n_sv)
    points = np.zeros((n_sv, n_features))
    for r, line in enumerate(body):
        ln = lineno + 1 + r
        toks = line.split()
        coefs[r] = _parse_real(ln, toks[0])
        for tok in toks[1:]:
            idx, sep, val = tok.partition(":")
            j = _parse_int(ln, idx) if sep else 0
            if not 1 <= j <= n_features:
                raise CorruptModel(ln, f"bad feature token {tok!r}")
            points[r, j - 1] = _parse_real(ln, val)

    base = CsvmModel(
        sv_points=points,
        sv_alpha=np.abs(coefs),
        sv_labels=np.where(coefs > 0, 1.0, -1.0),
        bias=real("bias"),
        kernel=kernel,
        config=config,
        dual_objective=real("dual_objective"),
        n_features=n_features,
    )
    if header["gs"][1] == "0":
        return base
    fallback = header["fallback"][1]
    return GsModel(base, real("d1"), real("d2"), real("delta"), real("delta_scale"),
                   fallback=None if fallback == "none" else fallback)


def load(path) -> CsvmModel | GsModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoFailure(f"{path}: {exc}") from exc
    return loads(text)

