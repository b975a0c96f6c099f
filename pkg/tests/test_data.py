import numpy as np
import pytest

from mpcgbdt.data import (
    Dataset,
    ParseError,
    bin_features,
    load_csv,
    load_fixture,
    split_train_test,
    vertical_split,
)


def _write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_load_csv(tmp_path):
    path = _write(tmp_path, "a,b,label\n1,2,0\n3,4,1\n")
    ds = load_csv(path, "label")
    assert ds.n_samples == 2 and ds.n_features == 2
    assert ds.feature_names == ["a", "b"]
    assert list(ds.y) == [0, 1]
    assert ds.X[1, 0] == 3.0


def test_load_csv_errors(tmp_path):
    with pytest.raises(ParseError, match="empty"):
        load_csv(_write(tmp_path, ""), "label")
    with pytest.raises(ParseError, match="missing label column"):
        load_csv(_write(tmp_path, "a,b\n1,2\n"), "label")
    with pytest.raises(ParseError, match="row 3.*'b'"):
        load_csv(_write(tmp_path, "a,b,label\n1,2,0\n3,oops,1\n"), "label")
    with pytest.raises(ParseError, match="bad label at row 2"):
        load_csv(_write(tmp_path, "a,label\n1,zzz\n"), "label")
    with pytest.raises(ParseError, match="labels must be 0/1"):
        load_csv(_write(tmp_path, "a,label\n1,2\n"), "label")


def test_fixture_shape():
    ds = load_fixture()
    assert ds.n_samples == 569 and ds.n_features == 30
    assert set(np.unique(ds.y)) == {0, 1}
    assert 0.3 < ds.y.mean() < 0.45  # positives are the minority class


def test_binning_formula():
    X = np.array([[0.0], [8.0]])
    thr = bin_features(X, 8)[0]
    assert list(thr) == [1, 2, 3, 4, 5, 6, 7]
    ages = np.array([[0.0], [100.0]])
    assert list(bin_features(ages, 4)[0]) == [25, 50, 75]


def test_binning_constant_feature():
    X = np.full((5, 1), 3.5)
    thr = bin_features(X, 8)[0]
    assert (thr == 3.5).all() and thr.size == 7
    # strict less-than: constant features route every sample right
    assert not (X[:, 0] < thr[0]).any()


def test_binning_rejects_single_bucket():
    with pytest.raises(ValueError):
        bin_features(np.zeros((2, 1)), 1)


def test_split_deterministic_and_disjoint():
    ds = load_fixture()
    a_tr, a_te = split_train_test(ds, 0.8, seed=42)
    b_tr, b_te = split_train_test(ds, 0.8, seed=42)
    assert (a_tr.X == b_tr.X).all() and (a_te.y == b_te.y).all()
    assert a_tr.n_samples + a_te.n_samples == ds.n_samples
    c_tr, _ = split_train_test(ds, 0.8, seed=43)
    assert not (a_tr.X == c_tr.X).all()


def test_vertical_split():
    ds = Dataset(np.arange(12.0).reshape(3, 4), np.array([0, 1, 0]), list("abcd"))
    thr = bin_features(ds.X, 4)
    d0, d1 = vertical_split(ds, thr)
    assert d0.X.shape == (3, 2) and d1.X.shape == (3, 2)
    assert d0.y is None and (d1.y == ds.y).all()
    assert d0.n_features_p0 == 2 and d1.n_features_total == 4
    d0b, d1b = vertical_split(ds, thr, n_features_p0=1)
    assert d0b.X.shape == (3, 1) and d1b.X.shape == (3, 3)
    with pytest.raises(ValueError):
        vertical_split(ds, thr, n_features_p0=0)
    with pytest.raises(ValueError):
        vertical_split(ds, thr, n_features_p0=4)
