import numpy as np
import pytest
from sklearn.base import clone

from strip_forge.estimators import FFDHPacker, NFDHPacker, StripPacker, StructuredPacker

X = np.array([[3, 4], [5, 2], [2, 1], [8, 1]])


def test_nfdh_positions_and_score():
    est = NFDHPacker(strip_width=8).fit(X)
    assert est.height_ == 6 and est.lower_bound_ == 4
    assert est.predict().tolist() == [[0, 0], [3, 0], [0, 5], [0, 4]]
    assert est.score() == pytest.approx(4 / 6)


def test_width_defaults_to_widest_row():
    assert FFDHPacker().fit(X).instance_.strip_width == 8


@pytest.mark.parametrize("est", [NFDHPacker(8), FFDHPacker(8), StructuredPacker(8),
                                 StripPacker(8, algo="exact"), StripPacker(8, algo="steinberg")])
def test_every_algorithm_fits(est):
    pos = est.fit_predict(X)
    assert pos.shape == (4, 2) and est.height_ >= est.lower_bound_


def test_clone_keeps_params():
    est = StructuredPacker(strip_width=10, epsilon=1, mode="exhaustive")
    c = clone(est)
    assert c.get_params() == est.get_params()


@pytest.mark.parametrize("bad", [np.array([[1, 2, 3]]), np.array([[0, 1]]), np.zeros((0, 2))])
def test_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        NFDHPacker().fit(bad)


def test_predict_before_fit():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        NFDHPacker().predict()
