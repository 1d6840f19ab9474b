"""scikit-learn style wrappers.

``StabilizerFidelityTransformer`` maps rows of rectangle-bin probabilities
(or complex amplitudes) to ``(F, s_q, s_p)`` features and
``FidelityRegionClassifier`` labels ``(F, s_p)`` pairs as attainable or not,
so both drop into a ``Pipeline``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .bounds import IDEAL, f_upper_from_sevs, region_contains, sp_lower, sp_upper
from .metrics import momentum_sev_from_probabilities, uniform_envelope_overlap

FEATURE_NAMES = np.array(["F", "s_q", "s_p"], dtype=object)


def check_probability_rows(X, atol: float = 1e-9) -> np.ndarray:
    """Validate a 2-D array of bin probabilities.

    Complex input is read as amplitudes and squared.  Rows must be
    non-negative and sum to one within ``atol``.
    """
    arr = np.asarray(X)
    if np.iscomplexobj(arr):
        arr = np.abs(arr) ** 2
    arr = check_array(arr, dtype=np.float64, ensure_min_features=2)
    if np.any(arr < 0):
        raise ValueError("bin probabilities must be non-negative")
    sums = arr.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > atol):
        bad = int(np.argmax(np.abs(sums - 1.0)))
        raise ValueError(f"row {bad} sums to {sums[bad]!r}, expected 1")
    return arr


def check_fidelity_sev_pairs(X) -> np.ndarray:
    arr = check_array(X, dtype=np.float64)
    if arr.shape[1] != 2:
        raise ValueError(f"expected columns (F, s_p), got {arr.shape[1]} columns")
    return arr


class StabilizerFidelityTransformer(TransformerMixin, BaseEstimator):
    """Rectangle base states -> ``[F, s_q, s_p]``.

    Parameters
    ----------
    N : int
        Each base state is repeated over ``2N + 1`` equal periods, which
        fixes ``s_q``.
    """

    def __init__(self, N: int = 10):
        self.N = N

    def fit(self, X, y=None):
        X = check_probability_rows(X)
        if self.N < 0:
            raise ValueError(f"N must be non-negative, got {self.N}")
        self.n_features_in_ = X.shape[1]
        self.n_prime_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_prime_")
        X = check_probability_rows(X)
        if X.shape[1] != self.n_prime_:
            raise ValueError(f"X has {X.shape[1]} bins, estimator was fitted with {self.n_prime_}")
        F = X.max(axis=1)
        s_p = np.abs(momentum_sev_from_probabilities(X))
        s_q = np.full_like(F, uniform_envelope_overlap(self.N))
        return np.column_stack([F, s_q, s_p])

    def get_feature_names_out(self, input_features=None):
        return FEATURE_NAMES.copy()


class FidelityRegionClassifier(ClassifierMixin, BaseEstimator):
    """Label ``(F, s_p)`` rows by membership in the attainable region.

    ``fit`` only records the label set; the region is closed-form.
    ``decision_function`` is the signed distance in ``s_p`` to the nearer
    boundary, positive inside.
    """

    def __init__(self, n_prime=IDEAL, tol: float = 1e-12):
        self.n_prime = n_prime
        self.tol = tol

    def fit(self, X, y=None):
        X = check_fidelity_sev_pairs(X)
        self.n_features_in_ = 2
        self.classes_ = np.array([False, True])
        return self

    def decision_function(self, X):
        check_is_fitted(self, "classes_")
        X = check_fidelity_sev_pairs(X)
        F = np.clip(X[:, 0], 0.0, 1.0)
        s_p = X[:, 1]
        return np.minimum(s_p - sp_lower(F, self.n_prime), sp_upper(F, self.n_prime) - s_p)

    def predict(self, X):
        check_is_fitted(self, "classes_")
        X = check_fidelity_sev_pairs(X)
        return np.asarray(region_contains(X[:, 0], X[:, 1], self.n_prime, self.tol), dtype=bool)

    def fidelity_ceiling(self, s_q, s_p):
        return f_upper_from_sevs(s_q, s_p)
