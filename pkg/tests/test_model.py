import numpy as np
import pytest

from gssvm.data import Dataset
from gssvm.datasets import load_toy
from gssvm.errors import CorruptModel, FormatVersionMismatch, IoFailure
from gssvm.kernel import KernelSpec
from gssvm.model import dumps, load, loads, predict, predict_many, save
from gssvm.scaling import GsModel, train_gssvm
from gssvm.solver import SolverConfig, train_csvm

TWO = Dataset.from_dense([[-1.0], [1.0]], [-1, 1])


@pytest.fixture(scope="module")
def two_point():
    return train_csvm(TWO, KernelSpec("linear"), SolverConfig(C=10, tol=1e-12))


@pytest.fixture(scope="module")
def toy_gs():
    return train_gssvm(load_toy(), KernelSpec("rbf", gamma=0.5), SolverConfig(C=4.0))


def test_zero_delta_matches_base(two_point):
    gs = GsModel(two_point, 1.0, 1.0, 0.0)
    X = np.linspace(-2, 2, 41)[:, None]
    assert np.array_equal(gs.decision_function(X), two_point.decision_function(X))
    assert np.array_equal(predict_many(gs, X), predict_many(two_point, X))


def test_shifted_prediction(two_point):
    gs = GsModel(two_point, 1.0, 1.0, 0.5)
    assert predict(gs, np.array([0.3])) == -1
    assert predict(gs, [(1, 0.7)]) == 1


def test_tie_predicts_positive(two_point):
    assert predict(two_point, np.array([0.0])) == 1
    exact = GsModel(two_point, 1.0, 1.0, float(two_point.decision_function([[0.25]])[0]))
    assert predict(exact, np.array([0.25])) == 1


def test_round_trip_bit_exact(toy_gs, tmp_path):
    path = tmp_path / "m.gsm"
    save(toy_gs, path)
    back = load(path)
    assert isinstance(back, GsModel)
    X = np.random.default_rng(0).normal(1.0, 1.5, size=(1000, 2))
    assert np.array_equal(back.decision_function(X), toy_gs.decision_function(X))
    assert (back.d1, back.d2, back.delta) == (toy_gs.d1, toy_gs.d2, toy_gs.delta)
    assert dumps(back) == dumps(toy_gs)


def test_plain_model_round_trip(two_point):
    back = loads(dumps(two_point))
    assert not isinstance(back, GsModel)
    assert back.bias == two_point.bias
    assert back.kernel == two_point.kernel


def test_version_mismatch(two_point):
    text = dumps(two_point).replace("gssvm_model 1", "gssvm_model 2", 1)
    with pytest.raises(FormatVersionMismatch):
        loads(text)


def test_truncated_body(toy_gs):
    text = dumps(toy_gs)
    truncated = "\n".join(text.splitlines()[:-2]) + "\n"
    with pytest.raises(CorruptModel):
        loads(truncated)


@pytest.mark.parametrize("mutate", [
    lambda t: "",
    lambda t: t.replace("gssvm_model", "svm_model"),
    lambda t: t.replace("bias ", "bias x"),
    lambda t: t.replace("\nSV\n", "\n"),
    lambda t: t.replace("kernel linear", "kernel sigmoid"),
    lambda t: t.replace(" 1:", " 7:"),
])
def test_corrupt_files(two_point, mutate):
    with pytest.raises(CorruptModel):
        loads(mutate(dumps(two_point)))


def test_load_missing(tmp_path):
    with pytest.raises(IoFailure):
        load(tmp_path / "none.gsm")
