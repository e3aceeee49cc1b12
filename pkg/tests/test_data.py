import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gssvm.data import (
    Dataset,
    dump_svmlight,
    load_svmlight,
    parse_svmlight,
    stratified_kfold,
)
from gssvm.errors import (
    BadK,
    EmptyDataset,
    IoFailure,
    MalformedLine,
    NonIncreasingIndex,
    ZeroLabel,
)


def test_parse_basic():
    ds = parse_svmlight(b"+1 1:0.5 3:2.0\n-1 2:1.0")
    assert len(ds) == 2
    assert ds.n_features == 3
    assert ds.labels == (1, -1)
    assert ds.points == (((1, 0.5), (3, 2.0)), ((2, 1.0),))
    np.testing.assert_array_equal(ds.X, [[0.5, 0, 2.0], [0, 1.0, 0]])


def test_parse_sign_maps_labels_and_skips_comments():
    text = "# header\n3 1:1\n\n  # indented comment\n-0.25 2:1e-3 # trailing\n2.5e1 1:-4E2\n"
    ds = parse_svmlight(text)
    assert ds.labels == (1, -1, 1)
    assert ds.points[1] == ((2, 1e-3),)
    assert ds.points[2] == ((1, -400.0),)


def test_empty_stream_rejected():
    with pytest.raises(EmptyDataset):
        parse_svmlight("")
    with pytest.raises(EmptyDataset):
        parse_svmlight("# only a comment\n")


def test_repeated_index():
    with pytest.raises(NonIncreasingIndex) as err:
        parse_svmlight("1 1:1 1:2")
    assert err.value.line == 1


@pytest.mark.parametrize(
    "text, exc, line",
    [
        ("+1 1:1\n0 1:2\n", ZeroLabel, 2),
        ("+1 1:1\nabc 1:2\n", MalformedLine, 2),
        ("+1 1:x\n", MalformedLine, 1),
        ("+1 1-2\n", MalformedLine, 1),
        ("+1 0:2\n", MalformedLine, 1),
        ("+1 3:1 2:1\n", NonIncreasingIndex, 1),
        ("+1 1:1\n-1 2:1\nnan 1:1\n", MalformedLine, 3),
    ],
)
def test_parse_errors(text, exc, line):
    with pytest.raises(exc) as err:
        parse_svmlight(text)
    assert err.value.line == line


def test_load_missing_file(tmp_path):
    with pytest.raises(IoFailure):
        load_svmlight(tmp_path / "nope.txt")


def test_load_uses_stem_as_name(tmp_path):
    p = tmp_path / "sonar.txt"
    p.write_text("+1 1:1\n-1 1:2\n")
    assert load_svmlight(p).name == "sonar"


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@st.composite
def datasets(draw):
    l = draw(st.integers(1, 12))
    points = []
    for _ in range(l):
        idx = sorted(draw(st.sets(st.integers(1, 30), max_size=6)))
        points.append(tuple((j, draw(finite)) for j in idx))
    labels = tuple(draw(st.sampled_from([1, -1])) for _ in range(l))
    n = max((p[-1][0] for p in points if p), default=0)
    return Dataset(tuple(points), labels, n, "h")


@settings(max_examples=200, deadline=None)
@given(datasets())
def test_svmlight_round_trip(ds):
    assert parse_svmlight(dump_svmlight(ds, header=["x=1"]), name="h") == ds


def _balanced(n_pos, n_neg):
    X = np.arange(n_pos + n_neg, dtype=float)[:, None] + 1.0
    y = [1] * n_pos + [-1] * n_neg
    return Dataset.from_dense(X, y)


def test_kfold_one_of_each_class_per_fold():
    plan = stratified_kfold(_balanced(10, 10), k=10, seed=7)
    labels = np.array(_balanced(10, 10).labels)
    for _, test in plan:
        assert sorted(labels[test]) == [-1, 1]


def test_kfold_bad_k():
    with pytest.raises(BadK):
        stratified_kfold(_balanced(2, 2), k=5, seed=0)
    with pytest.raises(BadK):
        stratified_kfold(_balanced(5, 5), k=1, seed=0)


def test_kfold_deterministic():
    ds = _balanced(13, 8)
    assert stratified_kfold(ds, 4, 99) == stratified_kfold(ds, 4, 99)
    assert stratified_kfold(ds, 4, 99) != stratified_kfold(ds, 4, 100)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 40), st.integers(1, 40), st.integers(2, 12), st.integers(0, 2**64 - 1))
def test_kfold_partition_properties(n_pos, n_neg, k, seed):
    ds = _balanced(n_pos, n_neg)
    l = len(ds)
    if k > l:
        with pytest.raises(BadK):
            stratified_kfold(ds, k, seed)
        return
    plan = stratified_kfold(ds, k, seed)
    labels = np.array(ds.labels)
    seen = []
    for train, test in plan:
        assert set(train).isdisjoint(test)
        assert set(train) | set(test) == set(range(l))
        seen.extend(test.tolist())
        # class counts per fold within one of the even share
        for cls, total in ((1, n_pos), (-1, n_neg)):
            count = int(np.sum(labels[test] == cls))
            assert abs(count - total / k) < 1
            if total >= k:
                assert count >= 1
    assert sorted(seen) == list(range(l))
    sizes = [len(t) for t, in ((f[1],) for f in plan.folds)]
    assert max(sizes) - min(sizes) <= 1
