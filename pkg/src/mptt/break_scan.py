"""Single-break scan over candidate transition years and one- vs two-phase comparison."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ._io import rows_to_csv
from .exceptions import EmptyScanRange, SingularDesign
from .phase import (
    BreakSpec,
    _fit_on_window,
    _resolve_window,
    check_form,
    classical_fit,
    two_phase_fit,
)

log = logging.getLogger(__name__)

__all__ = ["CRITERIA", "BreakScanRow", "BreakScanResult", "ModelComparison", "scan", "compare_models"]

CRITERIA = ("bic", "aic")
DEFAULT_TRIM = 10


@dataclass(frozen=True)
class BreakScanRow:
    tau: int
    beta1: float
    gamma: float
    beta2: float
    sse: float
    r2: float | None
    aic: float
    bic: float

    FIELDS = ("tau", "beta1", "gamma", "beta2", "sse", "r2", "aic", "bic")

    def to_tuple(self):
        return tuple(getattr(self, f) for f in self.FIELDS)


@dataclass(frozen=True, eq=False)
class BreakScanResult:
    """Scan table sorted by ``tau`` plus the criterion-minimizing break.

    ``tie`` is set when more than one candidate attains the minimum; the
    earliest of them is reported. ``skipped`` lists candidates whose fit
    was singular.
    """

    rows: tuple
    best_tau: int
    criterion: str
    window: tuple
    trim: int
    form: str
    tie: bool = False
    skipped: tuple = ()

    @property
    def taus(self):
        return np.array([r.tau for r in self.rows], dtype=np.int64)

    def values(self, name):
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    @property
    def best(self):
        return next(r for r in self.rows if r.tau == self.best_tau)

    def to_csv(self):
        return rows_to_csv(list(BreakScanRow.FIELDS), [r.to_tuple() for r in self.rows])

    def to_dict(self):
        best = self.best
        return {
            "best_tau": self.best_tau,
            "criterion": self.criterion,
            "window": list(self.window),
            "trim": self.trim,
            "form": self.form,
            "candidate_range": [int(self.rows[0].tau), int(self.rows[-1].tau)],
            "n_candidates": len(self.rows),
            "tie": self.tie,
            "skipped": list(self.skipped),
            "best": {f: getattr(best, f) for f in BreakScanRow.FIELDS},
        }


def scan(logpanel, window=None, trim=DEFAULT_TRIM, criterion="bic", form="step", candidates=None):
    """Fit the two-phase model at every admissible break year and pick the best.

    A panel year in the window is admissible when at least ``trim``
    observations lie strictly before it and ``trim`` strictly after it.
    ``candidates`` optionally restricts the set further.

    Raises
    ------
    EmptyScanRange
        No admissible (non-singular) candidate remains.
    """
    criterion = str(criterion).lower()
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")
    form = check_form(form)
    trim = int(trim)
    if trim < 2:
        raise ValueError(f"trim must be at least 2, got {trim}")
    window = _resolve_window(logpanel, window)
    sub = logpanel.select(window)
    years = sub.years
    n = years.size

    admissible = years[trim:n - trim] if n >= 2 * trim + 1 else years[:0]
    if candidates is not None:
        wanted = set(int(c) for c in candidates)
        admissible = admissible[np.isin(admissible, sorted(wanted))]
    if admissible.size == 0:
        raise EmptyScanRange(
            f"no candidate break in {window} with trim={trim} ({n} observations)"
        )

    rows, skipped = [], []
    for tau in admissible.tolist():
        try:
            # admissible taus leave >= trim >= 2 points strictly on each side
            fit = _fit_on_window(sub, BreakSpec.at(logpanel, tau, form), window)
        except SingularDesign:
            skipped.append(tau)
            continue
        s = fit.ols
        rows.append(BreakScanRow(tau, fit.beta1, fit.gamma, fit.beta2, s.sse, s.r2, s.aic, s.bic))
    if skipped:
        log.info("scan: %d singular candidate(s) skipped", len(skipped))
    if not rows:
        raise EmptyScanRange(f"every candidate break in {window} gave a singular design")

    score = np.array([getattr(r, criterion) for r in rows])
    best = float(score.min())
    hits = np.flatnonzero(score == best)
    return BreakScanResult(
        rows=tuple(rows),
        best_tau=rows[int(hits[0])].tau,
        criterion=criterion,
        window=window,
        trim=trim,
        form=form,
        tie=bool(hits.size > 1),
        skipped=tuple(skipped),
    )


@dataclass(frozen=True, eq=False)
class ModelComparison:
    """One-phase vs two-phase fits on the same window.

    Deltas are one-phase minus two-phase, so a positive value favours the
    two-phase model. Exact ties go to the one-phase model.
    """

    one_phase: object
    two_phase: object
    delta_sse: float
    delta_aic: float
    delta_bic: float

    def preferred(self, criterion="bic"):
        delta = {"sse": self.delta_sse, "aic": self.delta_aic, "bic": self.delta_bic}[criterion]
        return "two-phase" if delta > 0 else "one-phase"

    def to_dict(self):
        return {
            "one_phase": self.one_phase.to_dict(),
            "two_phase": self.two_phase.to_dict(),
            "delta_sse": self.delta_sse,
            "delta_aic": self.delta_aic,
            "delta_bic": self.delta_bic,
            "preferred": {c: self.preferred(c) for c in ("sse", "aic", "bic")},
        }


def compare_models(logpanel, window, tau, form="step"):
    """Fit the homogeneous one-phase model and the two-phase model at ``tau`` on ``window``."""
    one = classical_fit(logpanel, window)
    two = two_phase_fit(logpanel, tau, window=one.window, form=form)
    return ModelComparison(
        one_phase=one,
        two_phase=two,
        delta_sse=one.ols.sse - two.ols.sse,
        delta_aic=one.ols.aic - two.ols.aic,
        delta_bic=one.ols.bic - two.ols.bic,
    )
