"""Descriptive statistics battery for monthly return series.

Computes, per series: mean, standard deviation, skewness, excess kurtosis,
Jarque-Bera normality test, first autocorrelation and the Ljung-Box Q(12)
portmanteau statistic.  Central moments are population moments (divide by n),
matching the classical chi-square limit of the Jarque-Bera construction.
Chi-square tail probabilities come from the regularized upper incomplete
gamma function, not table lookup.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .errors import LagTooLargeError, TooShortError, ZeroVarianceError

LJUNG_BOX_ORDER = 12
_MIN_OBS = LJUNG_BOX_ORDER + 1


@dataclass(frozen=True)
class StatsSummary:
    n: int
    mean: float
    std: float
    skewness: float
    excess_kurtosis: float
    jarque_bera: float
    jb_p: float
    autocorr1: float
    ljung_box_12: float
    lb_p: float

    FIELDS = (
        "n",
        "mean",
        "std",
        "skewness",
        "excess_kurtosis",
        "jarque_bera",
        "jb_p",
        "autocorr1",
        "ljung_box_12",
        "lb_p",
    )


def chi2_sf(x: float, df: int) -> float:
    """Upper tail of the chi-square distribution."""
    return float(gammaincc(df / 2.0, x / 2.0))


def autocorrelation(series, lag: int) -> float:
    """Sample autocorrelation at ``lag`` against the full-sample variance."""
    x = np.asarray(series, dtype=float)
    n = x.size
    if lag >= n:
        raise LagTooLargeError(lag, n)
    centered = x - x.mean()
    denom = float(centered @ centered)
    if denom <= 0.0:
        raise ZeroVarianceError()
    if lag == 0:
        return 1.0
    return float(centered[lag:] @ centered[:-lag]) / denom


def ljung_box(series, order: int = LJUNG_BOX_ORDER) -> tuple[float, float]:
    """Ljung-Box portmanteau statistic over lags 1..order and its p-value."""
    x = np.asarray(series, dtype=float)
    n = x.size
    if n <= order:
        raise TooShortError(n, order + 1)
    q = 0.0
    for k in range(1, order + 1):
        rho = autocorrelation(x, k)
        q += rho * rho / (n - k)
    q *= n * (n + 2.0)
    return q, chi2_sf(q, order)


def describe(series) -> StatsSummary:
    x = np.asarray(series, dtype=float)
    n = x.size
    if n < _MIN_OBS:
        raise TooShortError(n, _MIN_OBS)
    mean = float(x.mean())
    centered = x - mean
    m2 = float(np.mean(centered**2))
    if m2 <= 0.0:
        raise ZeroVarianceError()
    m3 = float(np.mean(centered**3))
    m4 = float(np.mean(centered**4))
    skewness = m3 / m2**1.5
    excess_kurtosis = m4 / m2**2 - 3.0
    jb = n / 6.0 * (skewness**2 + excess_kurtosis**2 / 4.0)
    q12, lb_p = ljung_box(x)
    return StatsSummary(
        n=n,
        mean=mean,
        std=float(np.sqrt(m2)),
        skewness=skewness,
        excess_kurtosis=excess_kurtosis,
        jarque_bera=jb,
        jb_p=chi2_sf(jb, 2),
        autocorr1=autocorrelation(x, 1),
        ljung_box_12=q12,
        lb_p=lb_p,
    )
