"""Small exact OLS engine (intercept plus a few named regressors) with fit criteria."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InsufficientObservations, SingularDesign

__all__ = ["DesignMatrix", "OlsFit", "ols", "information_criteria", "MAX_CONDITION", "IC_CONVENTION"]

# Condition number limit for the column-equilibrated design (intercept included).
MAX_CONDITION = 1e10

# Below this total sum of squares r2 is reported as not applicable (None).
SST_EPS = 1e-12

# Relative size of an SSE that is indistinguishable from floating-point
# round-off; used as a floor when evaluating information criteria so that
# zero-noise fits compare by their penalty terms instead of by round-off.
SSE_FLOOR_REL = 1e-13

IC_CONVENTION = "aic = n*ln(sse/n) + 2k; bic = n*ln(sse/n) + k*ln(n); k counts the intercept"


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Named regressor columns; the intercept is always added implicitly."""

    columns: dict

    def __post_init__(self):
        cols = {}
        n = None
        for name, values in dict(self.columns).items():
            a = np.array(values, dtype=float, copy=True)
            if a.ndim != 1:
                raise ValueError(f"column {name!r} must be 1-d")
            if n is None:
                n = a.size
            elif a.size != n:
                raise ValueError(f"column {name!r} has length {a.size}, expected {n}")
            a.setflags(write=False)
            cols[str(name)] = a
        if not cols:
            raise ValueError("design needs at least one regressor")
        if "intercept" in cols:
            raise ValueError("'intercept' is reserved")
        object.__setattr__(self, "columns", cols)

    @property
    def n(self):
        return next(iter(self.columns.values())).size

    @property
    def k(self):
        """Parameter count including the intercept."""
        return len(self.columns) + 1

    @property
    def names(self):
        return ("intercept", *self.columns)

    def matrix(self):
        return np.column_stack([np.ones(self.n), *self.columns.values()])


@dataclass(frozen=True, eq=False)
class OlsFit:
    """Result of :func:`ols`.

    ``sse`` is the plain residual sum of squares. ``aic``/``bic`` are
    computed from ``max(sse, floor)`` where the floor sits at round-off
    level for the scale of ``y``; for noisy data the floor never binds.
    """

    coefficients: dict
    residuals: np.ndarray
    fitted: np.ndarray
    sse: float
    r2: float | None
    n: int
    k: int
    aic: float
    bic: float
    condition: float = field(default=float("nan"))

    def __getitem__(self, name):
        return self.coefficients[name]

    @property
    def intercept(self):
        return self.coefficients["intercept"]

    def stats(self):
        return {"n": self.n, "k": self.k, "sse": self.sse, "r2": self.r2, "aic": self.aic, "bic": self.bic}


def information_criteria(sse, n, k):
    """Gaussian AIC and BIC with constants dropped.

    ``aic = n ln(sse/n) + 2k`` and ``bic = n ln(sse/n) + k ln(n)``. An
    exactly zero ``sse`` returns ``(-inf, -inf)``.
    """
    n, k = int(n), int(k)
    if k < 1:
        raise ValueError("k must be at least 1")
    if n <= k:
        raise InsufficientObservations(f"need n > k, got n={n}, k={k}")
    if sse < 0 or math.isnan(sse):
        raise ValueError(f"sse must be nonnegative, got {sse}")
    if sse == 0:
        return -math.inf, -math.inf
    loglik_term = n * math.log(sse / n)
    return loglik_term + 2 * k, loglik_term + k * math.log(n)


def _as_design(X):
    if isinstance(X, DesignMatrix):
        return X
    if isinstance(X, dict):
        return DesignMatrix(X)
    a = np.asarray(X, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    return DesignMatrix({f"x{j}": a[:, j] for j in range(a.shape[1])})


def ols(y, X):
    """Least squares of ``y`` on an intercept plus the columns of ``X``.

    Solved by QR on the column-equilibrated design. ``X`` may be a
    :class:`DesignMatrix`, a ``{name: column}`` mapping or an array
    (columns are then named ``x0, x1, ...``).

    Raises
    ------
    InsufficientObservations
        If ``n <= k``.
    SingularDesign
        If a column is identically zero or the equilibrated design has a
        condition number above :data:`MAX_CONDITION`.
    """
    design = _as_design(X)
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size != design.n:
        raise ValueError(f"y must be 1-d of length {design.n}")
    if not np.all(np.isfinite(y)):
        raise ValueError("y must be finite")
    n, k = design.n, design.k
    if n <= k:
        raise InsufficientObservations(f"need more than {k} observations, got {n}")

    A = design.matrix()
    norms = np.sqrt(np.einsum("ij,ij->j", A, A))
    if np.any(norms == 0) or not np.all(np.isfinite(norms)):
        zero = [name for name, nrm in zip(design.names, norms) if nrm == 0]
        raise SingularDesign(f"regressor(s) {zero} are identically zero")
    Q, R = np.linalg.qr(A / norms)
    sv = np.linalg.svd(R, compute_uv=False)
    condition = math.inf if sv[-1] == 0 else float(sv[0] / sv[-1])
    if condition > MAX_CONDITION:
        raise SingularDesign(f"design condition number {condition:.3g} exceeds {MAX_CONDITION:.0e}")
    beta = np.linalg.solve(R, Q.T @ y) / norms

    fitted = A @ beta
    resid = y - fitted
    sse = float(resid @ resid)
    centered = y - y.mean()
    sst = float(centered @ centered)
    r2 = 1.0 - sse / sst if sst >= SST_EPS else None

    scale = max(1.0, float(np.max(np.abs(y))))
    sse_floor = n * (SSE_FLOOR_REL * scale) ** 2
    aic, bic = information_criteria(max(sse, sse_floor), n, k)

    resid.setflags(write=False)
    fitted.setflags(write=False)
    return OlsFit(
        coefficients={name: float(b) for name, b in zip(design.names, beta)},
        residuals=resid,
        fitted=fitted,
        sse=sse,
        r2=r2,
        n=n,
        k=k,
        aic=aic,
        bic=bic,
        condition=condition,
    )
