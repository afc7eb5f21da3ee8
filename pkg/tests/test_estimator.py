import numpy as np
import pytest
from conftest import fig6
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from grasspd.estimator import GrassmannianPersistence, TreegramClustering
from grasspd.filtration import INF, Segment
from grasspd.treegram import random_ultrametric


def test_fit_on_filtration_and_json():
    est = GrassmannianPersistence(degree=1).fit(fig6())
    assert est.diagram_.dims() == {Segment(3, 3): 1, Segment(6, 7): 1}
    assert est.persistence_diagram_ == {Segment(6, 7): 1}
    again = GrassmannianPersistence(degree=1).fit(fig6().to_json())
    assert again.diagram_.equals(est.diagram_)


def test_fit_on_distance_matrix():
    D = np.array([[0.0, 1.0], [1.0, 0.0]])
    est = GrassmannianPersistence().fit(D)
    assert est.persistence_diagram_ == {Segment(1, 2): 1, Segment(1, INF): 1}


def test_methods_agree_off_diagonal():
    a = GrassmannianPersistence(degree=1, method="laplacian").fit(fig6()).diagram_
    b = GrassmannianPersistence(degree=1).fit(fig6()).diagram_
    assert a.equals(b, 1e-8, off_diagonal=True)
    with pytest.raises(ValueError):
        GrassmannianPersistence(method="nope").fit(fig6())


def test_transform_and_clone():
    est = GrassmannianPersistence(degree=0, n_jobs=2)
    with pytest.raises(NotFittedError):
        est.transform([fig6()])
    out = est.fit_transform([fig6(), fig6()])
    assert len(out) == 2 and out[0].equals(out[1])
    assert clone(est).get_params() == est.get_params()
    with pytest.raises(ValueError):
        est.fit_transform([])


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        GrassmannianPersistence().fit(np.array([[0.0, 1.0], [2.0, 0.0]]))


def test_treegram_clustering():
    U = random_ultrametric(2, 6)
    tc = TreegramClustering().fit(U.matrix)
    assert np.array_equal(tc.merge_heights_, U.matrix)
    labels = tc.predict(0.0)
    assert len(set(labels)) == 6
    assert len(set(tc.predict(U.matrix.max()))) == 1
    with pytest.raises(NotFittedError):
        TreegramClustering().predict(1.0)


def test_predict_before_births():
    tc = TreegramClustering().fit(fig6())
    assert tc.predict(-1.0).tolist() == [-1, -1, -1, -1]
    assert tc.predict(0.0).tolist() == [0, -1, -1, -1]
