"""Overbilling series summaries and one-way ANOVA.

Statistics live in floating point on purpose: p-values are diagnostics,
unlike payables, which stay in exact decimals.  The F-distribution CDF is
computed from the regularized incomplete beta via a continued fraction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path

from ags.decimals import dec, ddiv_at, pad_scale

_CF_EPS = 1e-15
_CF_TINY = 1e-300
_CF_MAX_ITER = 500


class AnalysisError(ValueError):
    """Degenerate or malformed statistical input."""


@dataclass(frozen=True)
class SampleGroup:
    label: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) < 2:
            raise AnalysisError(f"group {self.label!r} needs at least 2 values")
        if not all(math.isfinite(v) for v in self.values):
            raise AnalysisError(f"group {self.label!r} has non-finite values")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def mean(self) -> float:
        return math.fsum(self.values) / len(self.values)


@dataclass(frozen=True)
class AnovaResult:
    f_ratio: float
    df_between: int
    df_within: int
    p_value: float


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < _CF_EPS:
            return h
    raise AnalysisError("incomplete beta continued fraction did not converge")


def incomplete_beta(x: float, a: float, b: float) -> float:
    """Regularized I_x(a, b), using the symmetry I_x(a,b) = 1 - I_{1-x}(b,a)."""
    if a <= 0 or b <= 0:
        raise AnalysisError("beta parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise AnalysisError("x must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = math.exp(
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def f_cdf(x: float, d1: int, d2: int) -> float:
    """CDF of the F distribution with (d1, d2) degrees of freedom."""
    if d1 < 1 or d2 < 1:
        raise AnalysisError("degrees of freedom must be positive")
    if x < 0:
        raise AnalysisError("F statistic must be nonnegative")
    if x == 0:
        return 0.0
    ratio = d1 * x / (d1 * x + d2)
    return incomplete_beta(ratio, d1 / 2.0, d2 / 2.0)


def anova_oneway(groups: list[SampleGroup]) -> AnovaResult:
    """Classical one-way ANOVA: F = (SSB/df_b) / (SSW/df_w), p = 1 - F_cdf."""
    if len(groups) < 2:
        raise AnalysisError("ANOVA needs at least two groups")
    n_total = sum(len(g.values) for g in groups)
    grand_mean = math.fsum(v for g in groups for v in g.values) / n_total
    ss_between = math.fsum(
        len(g.values) * (g.mean - grand_mean) ** 2 for g in groups
    )
    ss_within = math.fsum(
        (v - g.mean) ** 2 for g in groups for v in g.values
    )
    df_between = len(groups) - 1
    df_within = n_total - len(groups)
    if ss_within <= 0.0:
        raise AnalysisError("zero within-group variance; F is undefined")
    f_ratio = (ss_between / df_between) / (ss_within / df_within)
    p_value = 1.0 - f_cdf(f_ratio, df_between, df_within)
    return AnovaResult(
        f_ratio=f_ratio, df_between=df_between, df_within=df_within, p_value=p_value
    )


@dataclass(frozen=True)
class OverbillingSummary:
    mean: Decimal
    count: int
    minimum: Decimal
    maximum: Decimal


def summarize_overbilling(series: list[Decimal | str]) -> OverbillingSummary:
    """Mean (scale 4), count, min, max of a reduction-percentage series."""
    if not series:
        raise AnalysisError("empty series")
    values = [dec(v) for v in series]
    total = sum(values, Decimal(0))
    mean = pad_scale(ddiv_at(total, Decimal(len(values)), 4), 4)
    return OverbillingSummary(
        mean=mean, count=len(values), minimum=min(values), maximum=max(values)
    )


def load_rows(path: str | Path) -> list[tuple[str, str, str]]:
    """CSV ingestion: header row, columns period,label,value."""
    rows: list[tuple[str, str, str]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"period", "label", "value"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise AnalysisError("CSV must have columns period,label,value")
        for record in reader:
            rows.append((record["period"], record["label"], record["value"]))
    if not rows:
        raise AnalysisError("CSV has no data rows")
    return rows


def groups_from_rows(rows: list[tuple[str, str, str]]) -> list[SampleGroup]:
    """Group float values by label, in order of first appearance."""
    by_label: dict[str, list[float]] = {}
    for _, label, value in rows:
        try:
            by_label.setdefault(label, []).append(float(value))
        except ValueError as exc:
            raise AnalysisError(f"bad value {value!r} for {label!r}") from exc
    return [SampleGroup(label, tuple(values)) for label, values in by_label.items()]


def series_from_rows(rows: list[tuple[str, str, str]], label: str | None = None) -> list[Decimal]:
    """Decimal percent series, optionally restricted to one label."""
    picked = [v for _, lab, v in rows if label is None or lab == label]
    if not picked:
        raise AnalysisError(f"no rows for label {label!r}")
    return [dec(v) for v in picked]
