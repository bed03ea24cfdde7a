"""Shared test helpers."""

import os
from pathlib import Path

from mptt import SyntheticSpec


def random_spec(rng, *, noise_sigma=0.0, seed=0, n=None, gamma=None):
    """A random but well-posed planted spec."""
    n = int(rng.integers(20, 201)) if n is None else n
    start = 1500
    end = start + n - 1
    tau = int(rng.integers(start + n // 4, end - n // 4))
    return SyntheticSpec(
        start_year=start,
        end_year=end,
        a=float(rng.uniform(-2, 2)),
        beta1=float(rng.uniform(0.2, 1.5)),
        gamma=float(rng.uniform(-1.5, 1.0)) if gamma is None else gamma,
        tau=tau,
        money_drift=float(rng.uniform(0.005, 0.03)),
        money_start=float(rng.uniform(1.0, 1000.0)),
        noise_sigma=noise_sigma,
        seed=seed,
    )


def spain_panel_path():
    """Path to the assembled source panel, if one is available."""
    env = os.environ.get("MPTT_SPAIN_PANEL")
    if env:
        return Path(env)
    local = Path(__file__).parent / "data" / "spain_case_core_1492_1810.csv"
    return local if local.exists() else None
