"""Hot loops for the conditional-covariance recursion (numba-compiled).

The recursion is serial in t, so these kernels carry the per-step work:
building H_t from the previous innovations and covariance, Cholesky
factorisation, and the Gaussian log-likelihood contribution.  Status codes:
0 ok, 1 singular/non-positive-definite H, 2 non-finite values.
"""

from __future__ import annotations

import numpy as np
from numba import njit

LOG_2PI = 1.8378770664093453
_LOGDET_FLOOR = -690.7755278982137  # log(1e-300)

STATUS_OK = 0
STATUS_SINGULAR = 1
STATUS_NONFINITE = 2


@njit(cache=True)
def _cholesky_inplace(h, lower):
    """Lower Cholesky factor of ``h`` into ``lower``; returns log det or nan."""
    n = h.shape[0]
    logdet = 0.0
    for i in range(n):
        for j in range(i + 1):
            acc = h[i, j]
            for k in range(j):
                acc -= lower[i, k] * lower[j, k]
            if i == j:
                if acc <= 0.0 or not np.isfinite(acc):
                    return np.nan
                lower[i, i] = np.sqrt(acc)
                logdet += 2.0 * np.log(lower[i, i])
            else:
                lower[i, j] = acc / lower[j, j]
    return logdet


@njit(cache=True)
def _update_cov(h, ctc, shock, persistence, negative, large, eps_prev, out):
    """One recursion step: out = next covariance given state at t-1."""
    n = h.shape[0]
    for i in range(n):
        e = eps_prev[i]
        xi = e if e < 0.0 else 0.0
        eta = e if e * e > h[i, i] else 0.0
        out[i, 0] = shock[i] * e
        out[i, 1] = negative[i] * xi
        out[i, 2] = large[i] * eta
    for i in range(n):
        for j in range(i, n):
            v = (
                ctc[i, j]
                + out[i, 0] * out[j, 0]
                + persistence[i] * persistence[j] * h[i, j]
                + out[i, 1] * out[j, 1]
                + out[i, 2] * out[j, 2]
            )
            h[i, j] = v
    for i in range(n):
        for j in range(i + 1, n):
            h[j, i] = h[i, j]


@njit(cache=True)
def loglik_filter(eps, ctc, shock, persistence, negative, large, h_init, want_path):
    """Gaussian log-likelihood of demeaned data under the recursion.

    Returns (loglik, status, h_path); h_path is empty unless ``want_path``.
    """
    T, n = eps.shape
    h = h_init.copy()
    lower = np.zeros((n, n))
    scratch = np.empty((n, 3))
    y = np.empty(n)
    if want_path:
        h_path = np.empty((T, n, n))
    else:
        h_path = np.empty((0, n, n))
    ll = 0.0
    for t in range(T):
        if t > 0:
            _update_cov(h, ctc, shock, persistence, negative, large, eps[t - 1], scratch)
        for i in range(n):
            for j in range(n):
                if not np.isfinite(h[i, j]):
                    return np.nan, STATUS_NONFINITE, h_path
        if want_path:
            h_path[t] = h
        logdet = _cholesky_inplace(h, lower)
        if not np.isfinite(logdet) or logdet < _LOGDET_FLOOR:
            return np.nan, STATUS_SINGULAR, h_path
        quad = 0.0
        for i in range(n):
            acc = eps[t, i]
            for k in range(i):
                acc -= lower[i, k] * y[k]
            y[i] = acc / lower[i, i]
            quad += y[i] * y[i]
        ll += -0.5 * (n * LOG_2PI + logdet + quad)
    if not np.isfinite(ll):
        return np.nan, STATUS_NONFINITE, h_path
    return ll, STATUS_OK, h_path


@njit(cache=True)
def simulate_filter(ctc, shock, persistence, negative, large, h_init, draws):
    """Run the recursion forward, drawing eps_t = chol(H_t) @ draws_t.

    Returns (eps, h_path, status) over the full length of ``draws``.
    """
    T, n = draws.shape
    h = h_init.copy()
    lower = np.zeros((n, n))
    scratch = np.empty((n, 3))
    eps = np.empty((T, n))
    h_path = np.empty((T, n, n))
    for t in range(T):
        if t > 0:
            _update_cov(h, ctc, shock, persistence, negative, large, eps[t - 1], scratch)
        for i in range(n):
            for j in range(n):
                if not np.isfinite(h[i, j]):
                    return eps, h_path, STATUS_NONFINITE
        h_path[t] = h
        logdet = _cholesky_inplace(h, lower)
        if not np.isfinite(logdet):
            return eps, h_path, STATUS_SINGULAR
        for i in range(n):
            acc = 0.0
            for k in range(i + 1):
                acc += lower[i, k] * draws[t, k]
            eps[t, i] = acc
    return eps, h_path, STATUS_OK
