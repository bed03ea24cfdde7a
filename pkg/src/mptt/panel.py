"""Annual price/money panels: loading, validation, transforms and regime statistics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from ._io import dumps_json, rows_to_csv
from .exceptions import (
    DuplicateYear,
    InsufficientData,
    InvalidValue,
    MissingBaseYear,
    MissingYear,
    SchemaError,
    UndefinedRatio,
)

__all__ = [
    "PanelSchema",
    "AnnualPanel",
    "LogPanel",
    "GrowthSeries",
    "RegimeSummary",
    "load_panel",
    "read_panel",
    "panel_to_csv",
    "normalize_index",
    "to_log",
    "from_log",
    "growth_rates",
    "regime_summary",
]


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def _window_mask(years, window):
    if window is None:
        return np.ones(years.shape, dtype=bool)
    start, end = window
    return (years >= start) & (years <= end)


@dataclass(frozen=True)
class PanelSchema:
    """Column names used to read and write panel CSV files."""

    year: str = "year"
    price: str = "cpi"
    money: str = "money_supply"

    @classmethod
    def parse(cls, text):
        """Build a schema from ``"year=yr,price=P,money=M"``; omitted keys keep defaults."""
        kwargs = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, sep, value = part.partition("=")
            key = key.strip()
            if not sep or key not in ("year", "price", "money") or not value.strip():
                raise ValueError(f"bad schema entry {part!r}; expected year=, price= or money=")
            kwargs[key] = value.strip()
        return cls(**kwargs)


@dataclass(frozen=True, eq=False)
class AnnualPanel:
    """Validated annual panel of price level and money supply.

    Years are strictly increasing integers; both series are strictly
    positive. Gaps between years are allowed and reported by
    :attr:`gap_years`.
    """

    years: np.ndarray
    price: np.ndarray
    money: np.ndarray

    def __post_init__(self):
        years = np.asarray(self.years)
        if years.ndim != 1 or not np.issubdtype(years.dtype, np.integer):
            years_f = np.asarray(years, dtype=float)
            if years_f.ndim != 1 or not np.all(years_f == np.round(years_f)):
                raise InvalidValue("years must be a 1-d sequence of integers")
            years = years_f.astype(np.int64)
        price = np.asarray(self.price, dtype=float)
        money = np.asarray(self.money, dtype=float)
        if not (years.shape == price.shape == money.shape):
            raise InvalidValue("years, price and money must have the same length")
        if years.size and np.any(np.diff(years) <= 0):
            dup = years[:-1][np.diff(years) == 0]
            if dup.size:
                raise DuplicateYear(f"duplicate year {int(dup[0])}")
            raise InvalidValue("years must be strictly increasing")
        for name, series in (("price", price), ("money", money)):
            bad = ~(np.isfinite(series) & (series > 0))
            if np.any(bad):
                i = int(np.flatnonzero(bad)[0])
                raise InvalidValue(
                    f"{name} must be finite and positive; got {series[i]!r} in year {int(years[i])}",
                    row=i,
                )
        object.__setattr__(self, "years", _frozen(years, np.int64))
        object.__setattr__(self, "price", _frozen(price))
        object.__setattr__(self, "money", _frozen(money))

    def __len__(self):
        return int(self.years.size)

    def __eq__(self, other):
        if not isinstance(other, AnnualPanel):
            return NotImplemented
        return (
            np.array_equal(self.years, other.years)
            and np.array_equal(self.price, other.price)
            and np.array_equal(self.money, other.money)
        )

    @property
    def gap_years(self):
        """Years whose predecessor in the panel is more than one year earlier."""
        if len(self) < 2:
            return ()
        steps = np.diff(self.years)
        return tuple(int(y) for y in self.years[1:][steps > 1])

    def index_of(self, year):
        idx = np.searchsorted(self.years, year)
        if idx < len(self) and self.years[idx] == year:
            return int(idx)
        return None

    def select(self, window=None):
        """Rows with ``start <= year <= end`` (inclusive); ``None`` keeps everything."""
        m = _window_mask(self.years, window)
        return AnnualPanel(self.years[m], self.price[m], self.money[m])

    def to_rows(self):
        return [(int(y), float(p), float(m)) for y, p, m in zip(self.years, self.price, self.money)]


@dataclass(frozen=True, eq=False)
class LogPanel:
    """Natural logs of an :class:`AnnualPanel` (``ln_p``, ``ln_m``) by year."""

    years: np.ndarray
    ln_p: np.ndarray
    ln_m: np.ndarray

    def __post_init__(self):
        years = np.asarray(self.years, dtype=np.int64)
        ln_p = np.asarray(self.ln_p, dtype=float)
        ln_m = np.asarray(self.ln_m, dtype=float)
        if not (years.ndim == 1 and years.shape == ln_p.shape == ln_m.shape):
            raise InvalidValue("years, ln_p and ln_m must be 1-d and equally long")
        if years.size and np.any(np.diff(years) <= 0):
            raise InvalidValue("years must be strictly increasing")
        if not (np.all(np.isfinite(ln_p)) and np.all(np.isfinite(ln_m))):
            raise InvalidValue("log series must be finite")
        object.__setattr__(self, "years", _frozen(years, np.int64))
        object.__setattr__(self, "ln_p", _frozen(ln_p))
        object.__setattr__(self, "ln_m", _frozen(ln_m))

    def __len__(self):
        return int(self.years.size)

    def index_of(self, year):
        idx = np.searchsorted(self.years, year)
        if idx < len(self) and self.years[idx] == year:
            return int(idx)
        return None

    def select(self, window=None):
        m = _window_mask(self.years, window)
        return LogPanel(self.years[m], self.ln_p[m], self.ln_m[m])


@dataclass(frozen=True, eq=False)
class GrowthSeries:
    """Percent log growth between consecutive panel years.

    ``pi[i] = 100 * (ln_p[i] - ln_p[i-1])`` over the actual step between
    consecutive panel years (``step``); rows with ``step > 1`` are flagged
    in ``gap``.
    """

    years: np.ndarray
    pi: np.ndarray
    mu: np.ndarray
    step: np.ndarray

    @property
    def gap(self):
        return self.step > 1

    def __len__(self):
        return int(self.years.size)

    def to_csv(self):
        rows = [
            (int(y), float(p), float(m), int(s), bool(s > 1))
            for y, p, m, s in zip(self.years, self.pi, self.mu, self.step)
        ]
        return rows_to_csv(["year", "pi", "mu", "step", "gap"], rows)

    def to_dict(self):
        return {
            "rows": [
                {"year": int(y), "pi": float(p), "mu": float(m), "step": int(s), "gap": bool(s > 1)}
                for y, p, m, s in zip(self.years, self.pi, self.mu, self.step)
            ]
        }


@dataclass(frozen=True)
class RegimeSummary:
    start_year: int
    end_year: int
    cpi_multiple: float
    money_multiple: float
    transmission_ratio: float

    FIELDS = ("start_year", "end_year", "cpi_multiple", "money_multiple", "transmission_ratio")

    def to_dict(self):
        return {f: getattr(self, f) for f in self.FIELDS}

    def to_row(self):
        return tuple(getattr(self, f) for f in self.FIELDS)


# -- loading -----------------------------------------------------------------


def _parse_year(text, lineno):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise InvalidValue(f"line {lineno}: year {text!r} is not numeric", row=lineno) from None
    if not math.isfinite(value) or value != round(value):
        raise InvalidValue(f"line {lineno}: year {text!r} is not an integer", row=lineno)
    return int(value)


def _parse_positive(text, name, lineno):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise InvalidValue(f"line {lineno}: {name} {text!r} is not numeric", row=lineno) from None
    if not math.isfinite(value) or value <= 0:
        raise InvalidValue(f"line {lineno}: {name} must be positive, got {text!r}", row=lineno)
    return value


def load_panel(source, schema=None, min_year=None, max_year=None):
    """Read and validate a panel from CSV text.

    Parameters
    ----------
    source : bytes, str or file-like
        UTF-8 CSV with a header row. Binary streams and ``bytes`` are
        decoded as UTF-8 (a BOM is tolerated).
    schema : PanelSchema, optional
        Column names for year, price and money. Extra columns are ignored.
    min_year, max_year : int, optional
        Inclusive year filter applied after validation.

    Returns
    -------
    AnnualPanel
        Sorted by year.

    Raises
    ------
    SchemaError
        A required column is missing from the header.
    InvalidValue
        Non-numeric, non-finite or nonpositive cell.
    DuplicateYear
        The same year appears twice.
    """
    schema = schema or PanelSchema()
    if isinstance(source, bytes):
        text = source.decode("utf-8-sig")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8-sig") if isinstance(raw, bytes) else raw
    text = text.lstrip("\ufeff")

    reader = csv.DictReader(io.StringIO(text))
    header = [h.strip() for h in (reader.fieldnames or [])]
    reader.fieldnames = header
    missing = [c for c in (schema.year, schema.price, schema.money) if c not in header]
    if missing:
        raise SchemaError(f"missing required column(s) {missing}; header is {header}")

    records = {}
    for lineno, row in enumerate(reader, start=2):
        if not any((v or "").strip() for v in row.values() if isinstance(v, str)):
            continue
        year = _parse_year((row[schema.year] or "").strip(), lineno)
        price = _parse_positive((row[schema.price] or "").strip(), schema.price, lineno)
        money = _parse_positive((row[schema.money] or "").strip(), schema.money, lineno)
        if year in records:
            raise DuplicateYear(f"line {lineno}: duplicate year {year}")
        records[year] = (price, money)

    years = sorted(y for y in records if (min_year is None or y >= min_year) and (max_year is None or y <= max_year))
    return AnnualPanel(
        np.array(years, dtype=np.int64),
        np.array([records[y][0] for y in years], dtype=float),
        np.array([records[y][1] for y in years], dtype=float),
    )


def read_panel(path, schema=None, min_year=None, max_year=None):
    with open(path, "rb") as fh:
        return load_panel(fh, schema=schema, min_year=min_year, max_year=max_year)


def panel_to_csv(panel, schema=None):
    """Serialize a panel to CSV text at full round-trip precision."""
    schema = schema or PanelSchema()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([schema.year, schema.price, schema.money])
    for y, p, m in panel.to_rows():
        writer.writerow([y, repr(p), repr(m)])
    return buf.getvalue()


def panel_to_json(panel):
    return dumps_json(
        {"rows": [{"year": y, "price": p, "money": m} for y, p, m in panel.to_rows()],
         "gap_years": list(panel.gap_years)}
    )


# -- transforms ---------------------------------------------------------------


def normalize_index(panel, base_year, base_value=100.0):
    """Rescale both series so the ``base_year`` row equals ``base_value``."""
    if not base_value > 0:
        raise InvalidValue("base_value must be positive")
    i = panel.index_of(base_year)
    if i is None:
        raise MissingBaseYear(f"base year {base_year} not in panel")
    price = panel.price * (base_value / panel.price[i])
    money = panel.money * (base_value / panel.money[i])
    # pin the base row exactly; the multiply can be off by one ulp
    price[i] = money[i] = base_value
    return AnnualPanel(panel.years, price, money)


def to_log(panel):
    return LogPanel(panel.years, np.log(panel.price), np.log(panel.money))


def from_log(logpanel):
    return AnnualPanel(logpanel.years, np.exp(logpanel.ln_p), np.exp(logpanel.ln_m))


def growth_rates(logpanel):
    """Percent log growth of prices (``pi``) and money (``mu``) between panel years.

    Where consecutive years are more than one year apart the difference
    spans the whole gap and the row is flagged.
    """
    if len(logpanel) < 2:
        raise InsufficientData("growth rates need at least 2 panel rows")
    return GrowthSeries(
        years=_frozen(logpanel.years[1:], np.int64),
        pi=_frozen(100.0 * np.diff(logpanel.ln_p)),
        mu=_frozen(100.0 * np.diff(logpanel.ln_m)),
        step=_frozen(np.diff(logpanel.years), np.int64),
    )


def regime_summary(panel, start_year, end_year):
    """Endpoint price and money multiples over a window and their log ratio."""
    if not start_year < end_year:
        raise ValueError("start_year must precede end_year")
    i, j = panel.index_of(start_year), panel.index_of(end_year)
    for year, idx in ((start_year, i), (end_year, j)):
        if idx is None:
            raise MissingYear(f"year {year} not in panel")
    cpi_multiple = float(panel.price[j] / panel.price[i])
    money_multiple = float(panel.money[j] / panel.money[i])
    if abs(money_multiple - 1.0) <= 1e-12:
        raise UndefinedRatio(
            f"money multiple over {start_year}-{end_year} is 1; transmission ratio undefined"
        )
    return RegimeSummary(
        start_year=int(start_year),
        end_year=int(end_year),
        cpi_multiple=cpi_multiple,
        money_multiple=money_multiple,
        transmission_ratio=math.log(cpi_multiple) / math.log(money_multiple),
    )


def regime_table_csv(summaries):
    return rows_to_csv(list(RegimeSummary.FIELDS), [s.to_row() for s in summaries])
