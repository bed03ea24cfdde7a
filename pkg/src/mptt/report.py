"""Plot-ready long-format tables and result files.

:func:`emit_report` is pure: it returns ``{file name: text}`` and leaves
writing to :func:`write_files`, so a failed precondition never leaves a
partial file set behind.
"""

from __future__ import annotations

import os

import numpy as np

from ._io import atomic_write, rows_to_csv
from .panel import regime_table_csv
from .phase import ClassicalFit, TwoPhaseFit, predict

__all__ = ["EmptyReport", "emit_report", "write_files", "FILE_SUFFIXES"]

FILE_SUFFIXES = {
    "regimes": "main_table1_two_regime_summary.csv",
    "trajectories": "indexed_trajectories.csv",
    "fit_data": "twophase_core_fit_data.csv",
    "gap": "classical_gap.csv",
    "scan": "twophase_break_scan.csv",
}


class EmptyReport(ValueError):
    """emit_report was called without any result to write."""


def _long_rows(years, series):
    rows = []
    for name, values in series:
        rows.extend((int(y), name, float(v)) for y, v in zip(years, values))
    rows.sort(key=lambda r: (r[0], [s for s, _ in series].index(r[1])))
    return rows


def indexed_trajectories_csv(panel):
    """(year, series_name, value) rows for an index-normalized panel."""
    series = [
        ("cpi_index", panel.price),
        ("money_index", panel.money),
        ("ln_cpi_index", np.log(panel.price)),
        ("ln_money_index", np.log(panel.money)),
    ]
    return rows_to_csv(["year", "series_name", "value"], _long_rows(panel.years, series))


def fit_data_csv(logpanel, classical=None, two_phase=None):
    """Observed ln P with classical and two-phase predictions in long format.

    The year span covers every supplied fit's window; the classical line is
    extrapolated across it. ``gap`` is observed minus classical and
    ``residual`` is observed minus two-phase.
    """
    fits = [f for f in (classical, two_phase) if f is not None]
    start = min(f.window[0] for f in fits)
    end = max(f.window[1] for f in fits)
    sub = logpanel.select((start, end))
    series = [("observed", sub.ln_p)]
    if classical is not None:
        classical_pred = predict(classical, sub.years, sub.ln_m)
        series.append(("classical", classical_pred))
    if two_phase is not None:
        mptt_pred = predict(two_phase, sub.years, sub.ln_m)
        series.append(("mptt", mptt_pred))
    if classical is not None:
        series.append(("gap", sub.ln_p - classical_pred))
    if two_phase is not None:
        series.append(("residual", sub.ln_p - mptt_pred))
    return rows_to_csv(["year", "series_name", "value"], _long_rows(sub.years, series))


def emit_report(prefix, *, logpanel=None, fits=(), gaps=(), scans=(), regimes=(), indexed_panel=None):
    """Assemble the plot/table file set for the given results.

    Returns
    -------
    dict
        ``{file name: CSV text}`` in a fixed order.

    Raises
    ------
    EmptyReport
        Nothing to report.
    """
    fits = list(fits)
    if not (fits or gaps or scans or regimes or indexed_panel is not None):
        raise EmptyReport("no results to report")
    files = {}

    def name(kind):
        return f"{prefix}_{FILE_SUFFIXES[kind]}"

    if regimes:
        files[name("regimes")] = regime_table_csv(regimes)
    if indexed_panel is not None:
        files[name("trajectories")] = indexed_trajectories_csv(indexed_panel)
    if fits:
        if logpanel is None:
            raise ValueError("fit data needs the log panel")
        classical = next((f for f in fits if isinstance(f, ClassicalFit)), None)
        two_phase = next((f for f in fits if isinstance(f, TwoPhaseFit)), None)
        files[name("fit_data")] = fit_data_csv(logpanel, classical, two_phase)
    for gap in gaps:
        files[name("gap")] = gap.to_csv()
    for result in scans:
        files[name("scan")] = result.to_csv()
    return files


def write_files(directory, files):
    """Atomically write each ``{name: text}`` entry under ``directory``."""
    os.makedirs(directory, exist_ok=True)
    written = []
    for fname, text in files.items():
        path = os.path.join(directory, fname)
        atomic_write(path, text)
        written.append(path)
    return written
