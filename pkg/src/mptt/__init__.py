"""Two-phase money-price transmission models: one-phase and two-phase
log-level regressions, classical extrapolation gaps, and single-break
information-criterion scans."""

from .break_scan import BreakScanResult, BreakScanRow, ModelComparison, compare_models, scan
from .exceptions import *  # noqa: F401,F403
from .panel import (
    AnnualPanel,
    GrowthSeries,
    LogPanel,
    PanelSchema,
    RegimeSummary,
    from_log,
    growth_rates,
    load_panel,
    normalize_index,
    panel_to_csv,
    read_panel,
    regime_summary,
    to_log,
)
from .phase import (
    BreakSpec,
    ClassicalFit,
    GapSeries,
    TwoPhaseFit,
    classical_fit,
    extrapolation_gap,
    phase_regressor,
    predict,
    two_phase_fit,
)
from .regress import DesignMatrix, OlsFit, information_criteria, ols
from .report import emit_report
from .synth import SyntheticSpec, generate, paper_like_spec

__version__ = "0.1.0"
