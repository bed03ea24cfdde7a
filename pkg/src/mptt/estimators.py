"""scikit-learn compatible wrappers around the phase-model fits.

All estimators take ``X`` with two columns, ``(year, ln_m)``, and the
target ``y = ln_p``. Years must be integers and unique; rows may arrive in
any order. The functional API (:mod:`mptt.phase`, :mod:`mptt.break_scan`) does
the actual work, so ``est.fit_`` is the same result object it returns.

>>> from mptt import generate, paper_like_spec, to_log
>>> from mptt.estimators import TwoPhaseRegressor, logpanel_to_Xy
>>> X, y = logpanel_to_Xy(to_log(generate(paper_like_spec().with_(noise_sigma=0))))
>>> round(TwoPhaseRegressor(tau=1600).fit(X, y).gamma_, 6)
-0.812
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .exceptions import DuplicateYear, InvalidValue, MissingBreakYear
from .panel import LogPanel
from .phase import BreakSpec, _phase_values, check_form, classical_fit, predict, two_phase_fit
from .break_scan import DEFAULT_TRIM, scan

__all__ = [
    "logpanel_to_Xy",
    "PhaseFeatures",
    "ClassicalRegressor",
    "TwoPhaseRegressor",
    "BreakScanRegressor",
]


def logpanel_to_Xy(logpanel):
    """``X = [year, ln_m]`` and ``y = ln_p`` from a :class:`LogPanel`."""
    X = np.column_stack([logpanel.years.astype(float), logpanel.ln_m])
    return X, logpanel.ln_p.copy()


def _split_X(X):
    X = check_array(X, dtype=np.float64, ensure_min_samples=1)
    if X.shape[1] != 2:
        raise ValueError(f"X must have 2 columns (year, ln_m), got {X.shape[1]}")
    years_f = X[:, 0]
    if not np.all(years_f == np.round(years_f)):
        raise InvalidValue("first column of X must hold integer years")
    return years_f.astype(np.int64), X[:, 1]


def _check_Xy(X, y):
    X, y = check_X_y(X, y, dtype=np.float64, y_numeric=True)
    years, ln_m = _split_X(X)
    order = np.argsort(years, kind="stable")
    years = years[order]
    if np.any(np.diff(years) == 0):
        raise DuplicateYear(f"duplicate year {int(years[:-1][np.diff(years) == 0][0])}")
    return LogPanel(years, y[order], ln_m[order])


def _window(window):
    return None if window is None else (int(window[0]), int(window[1]))


class PhaseFeatures(TransformerMixin, BaseEstimator):
    """Map ``(year, ln_m)`` to the two-phase regressors ``(ln_m, phase)``.

    ``fit`` reads ``ln_m`` at the year ``tau``; ``transform`` then builds the
    step (calendar) or hinge (money level) phase column.
    """

    def __init__(self, tau=1600, form="step"):
        self.tau = tau
        self.form = form

    def fit(self, X, y=None):
        years, ln_m = _split_X(X)
        hits = np.flatnonzero(years == int(self.tau))
        if hits.size == 0:
            raise MissingBreakYear(f"transition year {self.tau} not in X")
        self.spec_ = BreakSpec(int(self.tau), float(ln_m[hits[0]]), check_form(self.form))
        self.ln_m_tau_ = self.spec_.ln_m_tau
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        years, ln_m = _split_X(X)
        return np.column_stack([ln_m, _phase_values(years, ln_m, self.spec_)])

    def get_feature_names_out(self, input_features=None):
        return np.array(["ln_m", "phase"], dtype=object)


class ClassicalRegressor(RegressorMixin, BaseEstimator):
    """One-phase log-level fit ``ln_p = a + beta * ln_m`` over ``window``."""

    def __init__(self, window=None):
        self.window = window

    def fit(self, X, y):
        self.fit_ = classical_fit(_check_Xy(X, y), _window(self.window))
        self.intercept_ = self.fit_.a
        self.beta_ = self.fit_.beta
        self.coef_ = np.array([self.fit_.beta])
        self.n_features_in_ = 2
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        years, ln_m = _split_X(X)
        return predict(self.fit_, years, ln_m)


class TwoPhaseRegressor(RegressorMixin, BaseEstimator):
    """Two-phase fit with the transition fixed at ``tau``.

    Parameters
    ----------
    tau : int
        Transition year; the phase term is inactive up to and including it.
    form : {"step", "hinge"}
        Calendar-time switch or money-level hinge.
    window : (int, int) or None
        Inclusive estimation window; ``None`` uses all rows.

    Attributes
    ----------
    fit_ : TwoPhaseFit
    intercept_, beta1_, gamma_, beta2_ : float
    coef_ : ndarray of shape (2,)
        ``[beta1, gamma]``.
    """

    def __init__(self, tau=1600, form="step", window=None):
        self.tau = tau
        self.form = form
        self.window = window

    def fit(self, X, y):
        self.fit_ = two_phase_fit(_check_Xy(X, y), int(self.tau), _window(self.window), self.form)
        self.intercept_ = self.fit_.a
        self.beta1_ = self.fit_.beta1
        self.gamma_ = self.fit_.gamma
        self.beta2_ = self.fit_.beta2
        self.coef_ = np.array([self.fit_.beta1, self.fit_.gamma])
        self.n_features_in_ = 2
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        years, ln_m = _split_X(X)
        return predict(self.fit_, years, ln_m)


class BreakScanRegressor(RegressorMixin, BaseEstimator):
    """Two-phase model with the transition year chosen by an AIC/BIC scan.

    After ``fit``, ``scan_`` holds the full candidate table and ``fit_`` the
    two-phase fit at ``best_tau_``.
    """

    def __init__(self, window=None, trim=DEFAULT_TRIM, criterion="bic", form="step"):
        self.window = window
        self.trim = trim
        self.criterion = criterion
        self.form = form

    def fit(self, X, y):
        logpanel = _check_Xy(X, y)
        window = _window(self.window)
        self.scan_ = scan(logpanel, window, trim=self.trim, criterion=self.criterion, form=self.form)
        self.best_tau_ = self.scan_.best_tau
        self.fit_ = two_phase_fit(logpanel, self.best_tau_, self.scan_.window, self.form)
        self.intercept_ = self.fit_.a
        self.coef_ = np.array([self.fit_.beta1, self.fit_.gamma])
        self.n_features_in_ = 2
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        years, ln_m = _split_X(X)
        return predict(self.fit_, years, ln_m)
