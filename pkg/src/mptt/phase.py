"""One-phase and two-phase money-price transmission fits.

The two-phase model is

    ln P_t = a + beta1 * ln M_t + gamma * D_t + e_t

where ``D_t`` is the phase regressor. In the default ``"step"`` form it is
``ln M_t - ln M_tau`` for ``t > tau`` and 0 otherwise (the switch is in
calendar time; ``t == tau`` is inactive). In the ``"hinge"`` form it is
``max(0, ln M_t - ln M_tau)`` at every year (the switch is in the money
level). The two coincide when ln M crosses its ``tau`` value monotonically.
After the break the effective slope is ``beta2 = beta1 + gamma``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ._io import rows_to_csv
from .exceptions import DegenerateSplit, InsufficientObservations, MissingBreakYear
from .regress import OlsFit, ols

log = logging.getLogger(__name__)

__all__ = [
    "FORMS",
    "BreakSpec",
    "ClassicalFit",
    "TwoPhaseFit",
    "GapSeries",
    "classical_fit",
    "phase_regressor",
    "two_phase_fit",
    "predict",
    "extrapolation_gap",
    "fit_table_csv",
]

FORMS = ("step", "hinge")
_FORM_ALIASES = {"step": "step", "step-in-time": "step", "hinge": "hinge", "hinge-in-money": "hinge"}

MIN_CLASSICAL_OBS = 4
MIN_TWO_PHASE_OBS = 6
MIN_SIDE_OBS = 2


def check_form(form):
    try:
        return _FORM_ALIASES[form]
    except (KeyError, TypeError):
        raise ValueError(f"form must be one of {FORMS}, got {form!r}") from None


def _resolve_window(logpanel, window):
    if window is None:
        if len(logpanel) == 0:
            raise InsufficientObservations("empty panel")
        return int(logpanel.years[0]), int(logpanel.years[-1])
    start, end = (int(w) for w in window)
    if start > end:
        raise ValueError(f"window start {start} is after end {end}")
    return start, end


@dataclass(frozen=True)
class BreakSpec:
    tau: int
    ln_m_tau: float
    form: str = "step"

    @classmethod
    def at(cls, logpanel, tau, form="step"):
        """Break at year ``tau``, reading ``ln M_tau`` from ``logpanel``."""
        i = logpanel.index_of(tau)
        if i is None:
            raise MissingBreakYear(f"transition year {tau} not in panel")
        return cls(int(tau), float(logpanel.ln_m[i]), check_form(form))


@dataclass(frozen=True, eq=False)
class ClassicalFit:
    a: float
    beta: float
    window: tuple
    ols: OlsFit

    model = "one-phase"

    def to_dict(self):
        return {
            "model": self.model,
            "window": list(self.window),
            "a": self.a,
            "beta": self.beta,
            **self.ols.stats(),
        }

    def table_row(self):
        s = self.ols
        return (self.model, *self.window, None, None, self.a, self.beta, None, None,
                s.n, s.k, s.sse, s.r2, s.aic, s.bic)


@dataclass(frozen=True, eq=False)
class TwoPhaseFit:
    a: float
    beta1: float
    gamma: float
    beta2: float
    spec: BreakSpec
    window: tuple
    ols: OlsFit

    model = "two-phase"

    @property
    def tau(self):
        return self.spec.tau

    def to_dict(self):
        return {
            "model": self.model,
            "window": list(self.window),
            "tau": self.spec.tau,
            "form": self.spec.form,
            "ln_m_tau": self.spec.ln_m_tau,
            "a": self.a,
            "beta1": self.beta1,
            "gamma": self.gamma,
            "beta2": self.beta2,
            **self.ols.stats(),
        }

    def table_row(self):
        s = self.ols
        return (self.model, *self.window, self.spec.tau, self.spec.form, self.a, self.beta1,
                self.gamma, self.beta2, s.n, s.k, s.sse, s.r2, s.aic, s.bic)


FIT_TABLE_HEADER = ["model", "window_start", "window_end", "tau", "form", "a", "beta1",
                    "gamma", "beta2", "n", "k", "sse", "r2", "aic", "bic"]


def fit_table_csv(fits):
    """Flat CSV table, one row per fit (one-phase rows leave tau/gamma/beta2 as NA)."""
    return rows_to_csv(FIT_TABLE_HEADER, [f.table_row() for f in fits])


@dataclass(frozen=True, eq=False)
class GapSeries:
    """Observed minus classically predicted ln P by year."""

    years: np.ndarray
    gap: np.ndarray
    post_break: np.ndarray
    skipped_years: tuple = ()

    def __len__(self):
        return int(self.years.size)

    def to_csv(self):
        rows = [(int(y), float(g), bool(p)) for y, g, p in zip(self.years, self.gap, self.post_break)]
        return rows_to_csv(["year", "gap", "post_break"], rows)

    def to_dict(self):
        return {
            "rows": [{"year": int(y), "gap": float(g), "post_break": bool(p)}
                     for y, g, p in zip(self.years, self.gap, self.post_break)],
            "skipped_years": list(self.skipped_years),
        }


def classical_fit(logpanel, window=None):
    """OLS of ln P on an intercept and ln M over an inclusive year window."""
    window = _resolve_window(logpanel, window)
    sub = logpanel.select(window)
    if len(sub) < MIN_CLASSICAL_OBS:
        raise InsufficientObservations(
            f"classical fit needs at least {MIN_CLASSICAL_OBS} observations in {window}, got {len(sub)}"
        )
    res = ols(sub.ln_p, {"ln_m": sub.ln_m})
    return ClassicalFit(a=res.intercept, beta=res["ln_m"], window=window, ols=res)


def _phase_values(years, ln_m, spec):
    shifted = ln_m - spec.ln_m_tau
    if spec.form == "step":
        return np.where(years > spec.tau, shifted, 0.0)
    return np.maximum(shifted, 0.0)


def phase_regressor(logpanel, spec):
    """Phase regressor column for every panel year under ``spec``."""
    if logpanel.index_of(spec.tau) is None:
        raise MissingBreakYear(f"transition year {spec.tau} not in panel")
    return _phase_values(logpanel.years, logpanel.ln_m, spec)


def two_phase_fit(logpanel, tau, window=None, form="step"):
    """Fit the two-phase model with a break at year ``tau``.

    At least 6 observations are required in the window, with at least 2
    strictly before and 2 strictly after ``tau``.

    Raises
    ------
    MissingBreakYear
        ``tau`` is not a panel year.
    DegenerateSplit
        ``tau`` lies outside the window or one side is too thin.
    SingularDesign
        The phase regressor is (numerically) collinear with ln M or zero.
    """
    spec = BreakSpec.at(logpanel, tau, form)
    window = _resolve_window(logpanel, window)
    sub = logpanel.select(window)
    if len(sub) < MIN_TWO_PHASE_OBS:
        raise InsufficientObservations(
            f"two-phase fit needs at least {MIN_TWO_PHASE_OBS} observations in {window}, got {len(sub)}"
        )
    if not window[0] <= spec.tau <= window[1]:
        raise DegenerateSplit(f"tau={spec.tau} lies outside window {window}")
    n_before = int(np.count_nonzero(sub.years < spec.tau))
    n_after = int(np.count_nonzero(sub.years > spec.tau))
    if min(n_before, n_after) < MIN_SIDE_OBS:
        raise DegenerateSplit(
            f"tau={spec.tau} leaves {n_before} observation(s) before and {n_after} after; "
            f"need {MIN_SIDE_OBS} on each side"
        )
    return _fit_on_window(sub, spec, window)


def _fit_on_window(sub, spec, window):
    # sub is already restricted to window and the split already validated
    phase = _phase_values(sub.years, sub.ln_m, spec)
    res = ols(sub.ln_p, {"ln_m": sub.ln_m, "phase": phase})
    beta1, gamma = res["ln_m"], res["phase"]
    return TwoPhaseFit(
        a=res.intercept,
        beta1=beta1,
        gamma=gamma,
        beta2=beta1 + gamma,
        spec=spec,
        window=window,
        ols=res,
    )


def predict(fit, year, ln_m):
    """Predicted ln P for a fit at the given year(s) and ln M value(s).

    Scalars in, float out; arrays broadcast. For a two-phase fit the
    phase term is added after the ``a + beta1 * ln_m`` line, so pre-break
    predictions equal that line exactly.
    """
    scalar = np.ndim(year) == 0 and np.ndim(ln_m) == 0
    year = np.asarray(year)
    ln_m = np.asarray(ln_m, dtype=float)
    if isinstance(fit, ClassicalFit):
        out = fit.a + fit.beta * ln_m
    elif isinstance(fit, TwoPhaseFit):
        out = (fit.a + fit.beta1 * ln_m) + fit.gamma * _phase_values(year, ln_m, fit.spec)
    else:
        raise TypeError(f"cannot predict from {type(fit).__name__}")
    return float(out) if scalar else np.broadcast_to(out, np.broadcast(year, ln_m).shape).copy()


def extrapolation_gap(logpanel, fit, eval_window=None):
    """Observed ln P minus the classical fit's prediction over ``eval_window``.

    Years of the eval window that are missing from the panel are skipped
    and listed in ``skipped_years`` (a warning is logged). ``post_break``
    marks years after the end of the fit's training window.
    """
    if not isinstance(fit, ClassicalFit):
        raise TypeError("extrapolation_gap expects a ClassicalFit")
    start, end = _resolve_window(logpanel, eval_window)
    present = set(int(y) for y in logpanel.years)
    skipped = tuple(y for y in range(start, end + 1) if y not in present)
    if skipped:
        log.warning("extrapolation_gap: %d eval year(s) missing from panel: %s", len(skipped),
                    ", ".join(map(str, skipped)))
    sub = logpanel.select((start, end))
    gap = sub.ln_p - predict(fit, sub.years, sub.ln_m)
    return GapSeries(
        years=sub.years.copy(),
        gap=gap,
        post_break=sub.years > fit.window[1],
        skipped_years=skipped,
    )
