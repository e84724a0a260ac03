"""scikit-learn style wrappers: rows of X are (width, height) items."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .core import Instance, lower_bound, validate_packing


class StripPacker(BaseEstimator):
    """Pack the rows of ``X`` into a strip of width ``strip_width``.

    ``algo`` is one of nfdh, ffdh, steinberg, structured, exact. After
    ``fit`` the estimator holds ``packing_``, ``height_``, ``lower_bound_``
    and ``positions_`` (an (n, 2) integer array of lower-left corners in
    row order).
    """

    def __init__(self, strip_width=None, algo="nfdh", epsilon=1, mode="heuristic"):
        self.strip_width = strip_width
        self.algo = algo
        self.epsilon = epsilon
        self.mode = mode

    def _instance(self, X):
        X = check_array(X, dtype=np.int64, ensure_min_samples=1)
        if X.shape[1] != 2:
            raise ValueError(f"X must have two columns (width, height), got {X.shape[1]}")
        if (X < 1).any():
            raise ValueError("widths and heights must be >= 1")
        W = int(self.strip_width) if self.strip_width is not None else int(X[:, 0].max())
        return Instance.from_dims(W, ((int(w), int(h)) for w, h in X))

    def fit(self, X, y=None):
        from .cli.main import run_algo

        inst = self._instance(X)
        pk = run_algo(self.algo, inst, Fraction(self.epsilon), mode=self.mode)
        assert validate_packing(inst, pk).ok
        pos = pk.position()
        self.instance_ = inst
        self.packing_ = pk
        self.height_ = pk.height
        self.lower_bound_ = lower_bound(inst)
        self.positions_ = np.array([[pos[it.id].x, pos[it.id].y] for it in inst.items], dtype=np.int64)
        self.n_features_in_ = 2
        return self

    def predict(self, X=None):
        """Positions of the fitted items; ``X`` is accepted for API symmetry."""
        check_is_fitted(self, "packing_")
        return self.positions_.copy()

    def fit_predict(self, X, y=None):
        return self.fit(X).predict(X)

    def score(self, X=None, y=None):
        """lower_bound / height, in (0, 1]; higher is better."""
        check_is_fitted(self, "packing_")
        return self.lower_bound_ / self.height_ if self.height_ else 1.0


class NFDHPacker(StripPacker):
    def __init__(self, strip_width=None):
        super().__init__(strip_width, "nfdh")


class FFDHPacker(StripPacker):
    def __init__(self, strip_width=None):
        super().__init__(strip_width, "ffdh")


class StructuredPacker(StripPacker):
    def __init__(self, strip_width=None, epsilon=1, mode="heuristic"):
        super().__init__(strip_width, "structured", epsilon, mode)
