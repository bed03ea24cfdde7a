"""Seeded synthetic panels from a planted two-phase data-generating process.

Noise is i.i.d. Gaussian on ln P only, drawn with NumPy's PCG64 bit
generator (``numpy.random.Generator(PCG64(seed)).standard_normal``).
Identical specs therefore give bit-identical panels.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from .exceptions import SpecError
from .panel import AnnualPanel
from .phase import BreakSpec, _phase_values, check_form

__all__ = ["RNG_ALGORITHM", "SyntheticSpec", "generate", "paper_like_spec", "load_spec", "save_spec"]

RNG_ALGORITHM = "numpy.random.PCG64 / Generator.standard_normal"

# Test-design noise level for ln P; not an empirical estimate.
DEFAULT_SIGMA = 0.02
PAPER_LIKE_SEED = 1600


@dataclass(frozen=True)
class SyntheticSpec:
    """Planted parameters for :func:`generate`.

    The money path is a log-linear drift ``ln M_t = ln(money_start) +
    money_drift * (t - start_year)`` unless ``money_series`` (one positive
    level per year) is given.
    """

    start_year: int
    end_year: int
    a: float
    beta1: float
    gamma: float
    tau: int
    money_drift: float = 0.0
    money_start: float = 100.0
    money_series: tuple | None = None
    noise_sigma: float = 0.0
    seed: int = 0
    form: str = "step"

    def __post_init__(self):
        try:
            for name in ("start_year", "end_year", "tau", "seed"):
                value = getattr(self, name)
                if isinstance(value, bool) or int(value) != value:
                    raise SpecError(f"{name} must be an integer, got {value!r}")
                object.__setattr__(self, name, int(value))
            for name in ("a", "beta1", "gamma", "money_drift", "money_start", "noise_sigma"):
                value = float(getattr(self, name))
                if not math.isfinite(value):
                    raise SpecError(f"{name} must be finite")
                object.__setattr__(self, name, value)
            object.__setattr__(self, "form", check_form(self.form))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, SpecError):
                raise
            raise SpecError(str(exc)) from None
        if not self.start_year < self.tau < self.end_year:
            raise SpecError(
                f"need start_year < tau < end_year, got {self.start_year}, {self.tau}, {self.end_year}"
            )
        if self.noise_sigma < 0:
            raise SpecError("noise_sigma must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise SpecError("seed must be a 64-bit unsigned integer")
        if self.money_start <= 0:
            raise SpecError("money_start must be positive")
        if self.money_series is not None:
            series = tuple(float(v) for v in self.money_series)
            if len(series) != self.n:
                raise SpecError(f"money_series has {len(series)} values, expected {self.n}")
            if not all(math.isfinite(v) and v > 0 for v in series):
                raise SpecError("money_series values must be finite and positive")
            object.__setattr__(self, "money_series", series)

    @property
    def n(self):
        return self.end_year - self.start_year + 1

    @property
    def money_path(self):
        return "linear-log-drift" if self.money_series is None else "custom"

    @property
    def beta2(self):
        return self.beta1 + self.gamma

    def with_(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        d = asdict(self)
        d["money_series"] = list(self.money_series) if self.money_series is not None else None
        d["money_path"] = self.money_path
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d.pop("money_path", None)
        try:
            return cls(**d)
        except TypeError as exc:
            raise SpecError(str(exc)) from None


def _log_money(spec, years):
    if spec.money_series is not None:
        return np.log(np.asarray(spec.money_series, dtype=float))
    return math.log(spec.money_start) + spec.money_drift * (years - spec.start_year).astype(float)


def generate(spec):
    """Draw a panel (levels) from the planted two-phase process."""
    if not isinstance(spec, SyntheticSpec):
        raise SpecError("generate expects a SyntheticSpec")
    years = np.arange(spec.start_year, spec.end_year + 1, dtype=np.int64)
    ln_m = _log_money(spec, years)
    brk = BreakSpec(spec.tau, float(ln_m[spec.tau - spec.start_year]), spec.form)
    ln_p = (spec.a + spec.beta1 * ln_m) + spec.gamma * _phase_values(years, ln_m, brk)
    if spec.noise_sigma > 0:
        rng = np.random.Generator(np.random.PCG64(spec.seed))
        ln_p = ln_p + spec.noise_sigma * rng.standard_normal(years.size)
    return AnnualPanel(years, np.exp(ln_p), np.exp(ln_m))


def paper_like_spec():
    """Canonical test spec: 1500-1700, break at 1600, beta1=0.949, gamma=-0.812.

    Money starts at 100 and drifts so it rises 3.733-fold over 1500-1600;
    the intercept puts P(1500) at 100 in the noiseless case. The noise level
    (0.02) is a test-design choice.
    """
    beta1 = 0.949
    return SyntheticSpec(
        start_year=1500,
        end_year=1700,
        a=(1.0 - beta1) * math.log(100.0),
        beta1=beta1,
        gamma=-0.812,
        tau=1600,
        money_drift=math.log(3.733) / 100.0,
        money_start=100.0,
        noise_sigma=DEFAULT_SIGMA,
        seed=PAPER_LIKE_SEED,
    )


def load_spec(path):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SpecError(f"{path}: expected a JSON object")
    return SyntheticSpec.from_dict(data)


def save_spec(spec, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(spec_to_json(spec))


def spec_to_json(spec):
    # the spec round-trips at full precision, unlike result tables
    return json.dumps(spec.to_dict(), indent=2) + "\n"
