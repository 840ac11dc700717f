import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from perfscore import Dataset, DataError, Task, load_csv, split, write_csv


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_load_regression(tmp_path):
    f = _write(tmp_path / "a.csv", "a,b,y\n1,2,0.5\n3,4,1.5\n5,6,2.25\n")
    ds = load_csv(f, "y")
    assert ds.n == 3 and ds.p == 2
    assert ds.task == Task.regression()
    assert ds.feature_names == ("a", "b")
    np.testing.assert_array_equal(ds.features, [[1, 2], [3, 4], [5, 6]])
    np.testing.assert_array_equal(ds.response, [0.5, 1.5, 2.25])


def test_classification_hint_and_remap(tmp_path):
    f = _write(tmp_path / "c.csv", "y,a\n2,0.1\n1,0.2\n2,0.3\n")
    ds = load_csv(f, "y", Task.classification(2))
    assert ds.task == Task.classification(2)
    np.testing.assert_array_equal(ds.response, [2, 1, 2])
    f = _write(tmp_path / "d.csv", "y,a\n10,0.1\n-3,0.2\n10,0.3\n7,1\n")
    ds = load_csv(f, "y")
    assert ds.task == Task.classification(3)
    np.testing.assert_array_equal(ds.response, [3, 1, 3, 2])
    assert ds.class_labels == (-3.0, 7.0, 10.0)


def test_inference_cap(tmp_path):
    rows = "\n".join(f"{i},{i % 11}" for i in range(30))
    ds = load_csv(_write(tmp_path / "e.csv", "a,y\n" + rows + "\n"), "y")
    assert ds.task == Task.regression()  # 11 integer levels exceeds the cap of 10


def test_text_cell_is_named(tmp_path):
    f = _write(tmp_path / "bad.csv", "a,b,y\n1,2,3\n4,oops,6\n")
    with pytest.raises(DataError, match=r"'oops'.*row 3.*column 'b'"):
        load_csv(f, "y")


@pytest.mark.parametrize("text,match", [
    ("a,b\n1,2\n", "target column"),
    ("a,y\n", "no data rows"),
    ("a,y\n1,\n", "non-numeric|missing"),
    ("a,y\nnan,1\n", "missing"),
])
def test_load_errors(tmp_path, text, match):
    with pytest.raises(DataError, match=match):
        load_csv(_write(tmp_path / "x.csv", text), "y")


def test_missing_file(tmp_path):
    with pytest.raises(DataError, match="no such file"):
        load_csv(tmp_path / "nope.csv", "y")


def test_dataset_invariants():
    with pytest.raises(DataError):
        Dataset(np.zeros((3, 2)), np.zeros(2), ["a", "b"], Task.regression())
    with pytest.raises(DataError):
        Dataset(np.zeros((3, 2)), np.zeros(3), ["a"], Task.regression())
    with pytest.raises(DataError):
        Dataset(np.zeros((2, 1)), [1, 3], ["a"], Task.classification(2))
    with pytest.raises(ValueError):
        Task.classification(1)
    ds = Dataset(np.ones((2, 1)), [1.0, 2.0], ["a"], Task.regression())
    with pytest.raises(ValueError):
        ds.features[0, 0] = 5.0


def _toy(n, p=2):
    X = np.arange(n * p, dtype=float).reshape(n, p)
    return Dataset(X, np.arange(n, dtype=float), [f"x{j}" for j in range(p)], Task.regression())


def test_split_examples():
    ds = _toy(10)
    train, test = split(ds, 0.3, seed=7)
    assert (train.n, test.n) == (7, 3)
    again = split(ds, 0.3, seed=7)
    np.testing.assert_array_equal(train.response, again[0].response)
    np.testing.assert_array_equal(test.response, again[1].response)
    a, b = split(_toy(2), 0.5, seed=0)
    assert (a.n, b.n) == (1, 1)


@pytest.mark.parametrize("n,frac", [(10, 0.01), (3, 0.9), (1, 0.5)])
def test_split_empty_partition(n, frac):
    with pytest.raises(DataError):
        split(_toy(n), frac, seed=0)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 300), frac=st.floats(0.05, 0.95), seed=st.integers(0, 2**32 - 1))
def test_split_partition_property(n, frac, seed):
    ds = _toy(n)
    try:
        train, test = split(ds, frac, seed)
    except DataError:
        return
    ids = np.concatenate([train.response, test.response])
    assert train.n + test.n == n
    assert len(np.intersect1d(train.response, test.response)) == 0
    np.testing.assert_array_equal(np.sort(ids), np.arange(n))


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    X = rng.normal(size=(25, 4)) * 10.0 ** rng.integers(-8, 8, size=(25, 4))
    ds = Dataset(X, rng.normal(size=25), ["a", "b", "c", "d"], Task.regression())
    write_csv(ds, tmp_path / "r.csv")
    back = load_csv(tmp_path / "r.csv", "y")
    np.testing.assert_array_equal(back.features, ds.features)
    np.testing.assert_array_equal(back.response, ds.response)
    assert back.feature_names == ds.feature_names
