"""Asymmetric multivariate GARCH(1,1) engine.

Step 1 of the pipeline: for each country, a four-variable system (country
excess return, developed-FX index return, emerging-FX index return, world
excess return) with constant means and a conditional covariance recursion

    H_t = C'C + (a.e)(a.e)' + bb'.H_{t-1} + (s.xi)(s.xi)' + (z.eta)(z.eta)'

where ``.`` pairs elementwise, xi keeps negative innovations and eta keeps
innovations larger in magnitude than the previous month's conditional
standard deviation.  Every term is positive semi-definite, so the recursion
propagates PSD covariance matrices.  Estimation is Gaussian quasi-maximum
likelihood with a quasi-Newton optimizer on an unconstrained reparameterised
space, numerical gradients, and jittered restarts.

The same recursion restricted to one dimension (without asymmetry terms)
fits the exchange-rate volatility factor.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Mapping

import numpy as np
from scipy.optimize import minimize

from . import _recursion
from .core import MonthIndex, ReturnPanel, align
from .errors import (
    DegenerateDataError,
    NoConvergenceError,
    NonFiniteError,
    SingularHError,
)

N_SYSTEM = 4  # (country, fx_dev, fx_emg, world)
MIN_OBS = 60

_BIG = 1e12


# ---------------------------------------------------------------------------
# parameter containers


@dataclass(frozen=True, eq=False)
class MGarchParams:
    """Parameters of one mean-plus-covariance system.

    mean : per-series intercepts (monthly percent)
    intercept_factor : lower-triangular C with nonnegative diagonal; the
        covariance intercept is C'C
    shock, persistence : loadings on lagged innovation products and on the
        lagged covariance
    negative_shock, large_shock : loadings on the negative-innovation and
        outsized-innovation terms
    """

    mean: np.ndarray
    intercept_factor: np.ndarray
    shock: np.ndarray
    persistence: np.ndarray
    negative_shock: np.ndarray
    large_shock: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        n = mean.size
        factor = np.asarray(self.intercept_factor, dtype=float)
        vecs = {}
        for name in ("shock", "persistence", "negative_shock", "large_shock"):
            v = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            if v.shape != (n,):
                raise ValueError(f"{name} must have shape ({n},)")
            vecs[name] = v
        if factor.shape != (n, n):
            raise ValueError(f"intercept_factor must be {n}x{n}")
        if np.any(factor[np.triu_indices(n, 1)] != 0.0):
            raise ValueError("intercept_factor must be lower triangular")
        if np.any(np.diag(factor) < 0.0):
            raise ValueError("intercept_factor diagonal must be nonnegative")
        allvals = np.concatenate([mean, factor.ravel()] + list(vecs.values()))
        if not np.all(np.isfinite(allvals)):
            raise ValueError("parameters must be finite")
        margin = (
            vecs["shock"] ** 2
            + vecs["persistence"] ** 2
            + vecs["negative_shock"] ** 2 / 2.0
        )
        if np.any(margin >= 1.0):
            raise ValueError(
                "stationarity bound violated: shock^2 + persistence^2 "
                f"+ negative_shock^2/2 = {margin} must be < 1 componentwise"
            )
        for name, v in vecs.items():
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        mean.setflags(write=False)
        factor = factor.copy()
        factor.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "intercept_factor", factor)

    @property
    def n(self) -> int:
        return self.mean.size

    def intercept(self) -> np.ndarray:
        """The covariance intercept C'C."""
        return self.intercept_factor.T @ self.intercept_factor


@dataclass(frozen=True, eq=False)
class InnovationState:
    """State carried between recursion steps: (eps, xi, eta, cov) at t-1."""

    eps: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        eps = np.atleast_1d(np.asarray(self.eps, dtype=float))
        cov = np.asarray(self.cov, dtype=float)
        n = eps.size
        if cov.shape != (n, n):
            raise ValueError(f"cov must be {n}x{n}")
        if not np.array_equal(cov, cov.T):
            raise ValueError("cov must be symmetric")
        trace = float(np.trace(cov))
        if np.linalg.eigvalsh(cov).min() < -1e-8 * max(trace, 1.0):
            raise ValueError("cov must be positive semi-definite")
        xi_expected, eta_expected = asymmetry_indicators(eps, np.diag(cov))
        if not np.array_equal(np.asarray(self.xi, dtype=float), xi_expected):
            raise ValueError("xi is inconsistent with eps")
        if not np.array_equal(np.asarray(self.eta, dtype=float), eta_expected):
            raise ValueError("eta is inconsistent with eps and cov")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "xi", xi_expected)
        object.__setattr__(self, "eta", eta_expected)

    @classmethod
    def from_innovation(cls, eps, cov) -> "InnovationState":
        eps = np.atleast_1d(np.asarray(eps, dtype=float))
        cov = np.asarray(cov, dtype=float)
        xi, eta = asymmetry_indicators(eps, np.diag(cov))
        return cls(eps=eps, xi=xi, eta=eta, cov=cov)


@dataclass(frozen=True, eq=False)
class MGarchFit:
    """One country's fitted system and filtered conditional covariances."""

    params: MGarchParams
    loglik: float
    h_path: np.ndarray
    eps_path: np.ndarray
    converged: bool
    iterations: int
    grad_norm: float
    country_id: str | None = None
    start: MonthIndex | None = None


@dataclass(frozen=True, eq=False)
class CountryCovariances:
    """Per-month step-2 regressors: own variance and the three covariances."""

    country_id: str
    start: MonthIndex
    values: np.ndarray  # (T, 4) columns (h_ii, h_im, h_id, h_ie)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[1] != 4:
            raise ValueError("values must be (T, 4)")
        if not np.all(np.isfinite(values)):
            raise ValueError("covariances must be finite")
        if np.any(values[:, 0] < 0.0):
            raise ValueError("own variance h_ii must be nonnegative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def end(self) -> MonthIndex:
        return self.start + (len(self) - 1)


@dataclass(frozen=True, eq=False)
class CovariancePanel:
    entries: Mapping[str, CountryCovariances]

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(self.entries))

    def country_ids(self) -> list[str]:
        return sorted(self.entries)

    def for_country(self, country_id: str) -> CountryCovariances:
        return self.entries[country_id]


# ---------------------------------------------------------------------------
# recursion primitives


def asymmetry_indicators(eps, h_diag) -> tuple[np.ndarray, np.ndarray]:
    """Split an innovation into its negative and outsized parts.

    xi keeps components with eps < 0; eta keeps components whose magnitude
    exceeds the conditional standard deviation sqrt(h_diag).
    """
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    h_diag = np.atleast_1d(np.asarray(h_diag, dtype=float))
    if np.any(h_diag < 0.0):
        raise ValueError("h_diag must be nonnegative")
    xi = np.where(eps < 0.0, eps, 0.0)
    eta = np.where(eps * eps > h_diag, eps, 0.0)
    return xi, eta


def garch_step(params: MGarchParams, state: InnovationState) -> np.ndarray:
    """Advance the covariance recursion one month; exactly symmetric output."""
    a_e = params.shock * state.eps
    s_xi = params.negative_shock * state.xi
    z_eta = params.large_shock * state.eta
    bb = np.outer(params.persistence, params.persistence)
    h = (
        params.intercept()
        + np.outer(a_e, a_e)
        + bb * state.cov
        + np.outer(s_xi, s_xi)
        + np.outer(z_eta, z_eta)
    )
    h = np.triu(h)
    h = h + np.triu(h, 1).T
    if not np.all(np.isfinite(h)):
        raise NonFiniteError("covariance recursion overflowed")
    return h


def _demeaned_cov(data: np.ndarray) -> np.ndarray:
    centered = data - data.mean(axis=0)
    return (centered.T @ centered) / data.shape[0]


def _filter(params: MGarchParams, data: np.ndarray, initial_cov, want_path: bool):
    data = np.asarray(data, dtype=float)
    if data.ndim != 2:
        raise ValueError("data must be (T, n)")
    if not np.all(np.isfinite(data)):
        raise NonFiniteError("data contains non-finite values")
    if data.shape[1] != params.n:
        raise ValueError(f"data has {data.shape[1]} columns, params expect {params.n}")
    eps = data - params.mean
    if initial_cov is None:
        h1 = _demeaned_cov(data)
    else:
        h1 = np.asarray(initial_cov, dtype=float)
    ll, status, h_path = _recursion.loglik_filter(
        np.ascontiguousarray(eps),
        np.ascontiguousarray(params.intercept()),
        params.shock,
        params.persistence,
        params.negative_shock,
        params.large_shock,
        np.ascontiguousarray(h1),
        want_path,
    )
    if status == _recursion.STATUS_SINGULAR:
        raise SingularHError(t="(during filtering)")
    if status == _recursion.STATUS_NONFINITE:
        raise NonFiniteError("covariance filter overflowed")
    return ll, eps, h_path


def qml_loglik(params: MGarchParams, data, initial_cov=None) -> float:
    """Gaussian quasi-log-likelihood of the system on (T, n) data.

    The initial covariance defaults to the sample covariance of the demeaned
    data; pass ``initial_cov`` to pin it explicitly.
    """
    ll, _, _ = _filter(params, np.asarray(data, dtype=float), initial_cov, False)
    return float(ll)


def filter_path(params: MGarchParams, data, initial_cov=None):
    """Innovations and conditional covariance path implied by ``params``."""
    ll, eps, h_path = _filter(params, np.asarray(data, dtype=float), initial_cov, True)
    return eps, h_path, float(ll)


# ---------------------------------------------------------------------------
# reparameterisation (unconstrained optimizer space)
#
# Stationarity is imposed through a radial logistic squash per component:
# raw loadings (ra, rb, rs) are scaled by tanh(m/2)/m with
# m = sqrt(ra^2 + rb^2 + rs^2/2), which maps shock^2 + persistence^2
# + negative_shock^2/2 onto [0, 1).  The intercept diagonal is kept positive
# through a log transform; everything else is unconstrained.


def _squash(raw_a, raw_b, raw_s):
    m = np.sqrt(raw_a**2 + raw_b**2 + raw_s**2 / 2.0)
    scale = np.where(m > 1e-12, np.tanh(m / 2.0) / np.where(m > 0, m, 1.0), 0.5)
    return raw_a * scale, raw_b * scale, raw_s * scale


def _unsquash(a, b, s):
    r = np.sqrt(a**2 + b**2 + s**2 / 2.0)
    if np.any(r >= 1.0):
        raise ValueError("stationarity bound violated")
    m = 2.0 * np.arctanh(r)
    scale = np.where(r > 1e-12, m / np.where(r > 0, r, 1.0), 2.0)
    return a * scale, b * scale, s * scale


def n_free_params(n: int) -> int:
    return 6 * n + n * (n - 1) // 2


def pack_params(params: MGarchParams) -> np.ndarray:
    n = params.n
    tril = np.tril_indices(n, -1)
    diag = np.diag(params.intercept_factor)
    ra, rb, rs = _unsquash(params.shock, params.persistence, params.negative_shock)
    return np.concatenate(
        [
            params.mean,
            np.log(np.maximum(diag, 1e-300)),
            params.intercept_factor[tril],
            ra,
            rb,
            rs,
            params.large_shock,
        ]
    )


def unpack_params(theta: np.ndarray, n: int) -> MGarchParams:
    theta = np.asarray(theta, dtype=float)
    k = n * (n - 1) // 2
    mean = theta[:n]
    factor = np.zeros((n, n))
    factor[np.diag_indices(n)] = np.exp(theta[n : 2 * n])
    factor[np.tril_indices(n, -1)] = theta[2 * n : 2 * n + k]
    o = 2 * n + k
    a, b, s = _squash(theta[o : o + n], theta[o + n : o + 2 * n], theta[o + 2 * n : o + 3 * n])
    return MGarchParams(
        mean=mean,
        intercept_factor=factor,
        shock=a,
        persistence=b,
        negative_shock=s,
        large_shock=theta[o + 3 * n : o + 4 * n],
    )


def _flip_to_positive(v: np.ndarray) -> np.ndarray:
    """Outer products are sign-invariant; pin the dominant component >= 0."""
    if v[np.argmax(np.abs(v))] < 0:
        return -v
    return v


def canonicalize(params: MGarchParams) -> MGarchParams:
    signs = np.sign(np.diag(params.intercept_factor))
    signs[signs == 0] = 1.0
    return MGarchParams(
        mean=params.mean,
        intercept_factor=signs[:, None] * params.intercept_factor,
        shock=_flip_to_positive(params.shock),
        persistence=_flip_to_positive(params.persistence),
        negative_shock=_flip_to_positive(params.negative_shock),
        large_shock=_flip_to_positive(params.large_shock),
    )


# ---------------------------------------------------------------------------
# PSD helpers


def clip_psd(matrix: np.ndarray, floor_ratio: float = 1e-12) -> np.ndarray:
    """Nearest-ish PSD matrix: clamp eigenvalues from below."""
    sym = 0.5 * (matrix + matrix.T)
    vals, vecs = np.linalg.eigh(sym)
    floor = max(vals.max(), 0.0) * floor_ratio
    vals = np.maximum(vals, floor)
    out = (vecs * vals) @ vecs.T
    return 0.5 * (out + out.T)


def lower_factor(matrix: np.ndarray) -> np.ndarray:
    """Lower-triangular C with C'C equal to the given PSD matrix.

    This is the reversed Cholesky: flip, factor, flip back, transpose.
    """
    n = matrix.shape[0]
    flip = np.eye(n)[::-1]
    tri = np.linalg.cholesky(flip @ matrix @ flip)
    upper = flip @ tri @ flip
    return np.ascontiguousarray(upper.T)


# ---------------------------------------------------------------------------
# estimation


@dataclass(frozen=True)
class EstimationOptions:
    max_iterations: int = 2000
    starts: int = 5
    gradient_tol: float = 1e-4
    explore_iterations: int = 120
    fd_step: float = 1e-6
    seed: int = 0


DEFAULT_OPTIONS = EstimationOptions()


def _central_gradient(f: Callable[[np.ndarray], float], x: np.ndarray, step: float):
    g = np.empty_like(x)
    for j in range(x.size):
        h = step * (1.0 + abs(x[j]))
        xp = x.copy()
        xp[j] += h
        xm = x.copy()
        xm[j] -= h
        fp, fm = f(xp), f(xm)
        if fp >= _BIG and fm >= _BIG:
            g[j] = 0.0
        elif fp >= _BIG:
            g[j] = (f(x) - fm) / h
        elif fm >= _BIG:
            g[j] = (fp - f(x)) / h
        else:
            g[j] = (fp - fm) / (2.0 * h)
    return g


def _forward_gradient(f, x, f0, step):
    g = np.empty_like(x)
    for j in range(x.size):
        h = step * (1.0 + abs(x[j]))
        xp = x.copy()
        xp[j] += h
        fp = f(xp)
        if fp >= _BIG:
            xp[j] = x[j] - h
            g[j] = (f0 - f(xp)) / h
        else:
            g[j] = (fp - f0) / h
    return g


def _run_qml(value, theta0, options: EstimationOptions, rng: np.random.Generator):
    """Multistart quasi-Newton minimisation of ``value`` with numeric gradients.

    Returns (theta, fun, iterations, grad_norm, converged).
    """

    def fused_forward(theta):
        f0 = value(theta)
        if f0 >= _BIG:
            return f0, np.zeros_like(theta)
        return f0, _forward_gradient(value, theta, f0, 10.0 * options.fd_step)

    def fused_central(theta):
        f0 = value(theta)
        if f0 >= _BIG:
            return f0, np.zeros_like(theta)
        return f0, _central_gradient(value, theta, options.fd_step)

    iterations = 0
    best_theta, best_f = None, np.inf
    for k in range(max(options.starts, 1)):
        if k == 0:
            theta = theta0.copy()
        else:
            theta = theta0 + rng.normal(0.0, 0.1, theta0.size) * (1.0 + np.abs(theta0))
        res = minimize(
            fused_forward,
            theta,
            jac=True,
            method="L-BFGS-B",
            options=dict(
                maxiter=options.explore_iterations,
                ftol=1e-12,
                gtol=1e-6,
                maxcor=20,
            ),
        )
        iterations += res.nit
        if res.fun < best_f:
            best_f, best_theta = res.fun, res.x

    theta = best_theta
    grad_norm = np.inf
    while iterations < options.max_iterations:
        budget = min(400, options.max_iterations - iterations)
        res = minimize(
            fused_central,
            theta,
            jac=True,
            method="L-BFGS-B",
            options=dict(maxiter=budget, ftol=1e-15, gtol=options.gradient_tol / 5.0, maxcor=20),
        )
        iterations += max(res.nit, 1)
        moved = res.fun < best_f - 1e-12
        if res.fun < best_f:
            best_f, theta = res.fun, res.x
        grad_norm = float(np.max(np.abs(_central_gradient(value, theta, options.fd_step))))
        if grad_norm < options.gradient_tol or not moved:
            break
    converged = bool(grad_norm < options.gradient_tol)
    return theta, best_f, iterations, grad_norm, converged


def _initial_params(data: np.ndarray) -> MGarchParams:
    n = data.shape[1]
    mean = data.mean(axis=0)
    sample_cov = _demeaned_cov(data)
    a = np.full(n, 0.3)
    b = np.full(n, 0.85)
    s = np.full(n, 0.1)
    z = np.full(n, 0.1)
    weight = 1.0 - np.outer(a, a) - np.outer(b, b) - np.outer(s, s) / 2.0
    target = clip_psd(sample_cov * weight)
    return MGarchParams(
        mean=mean,
        intercept_factor=lower_factor(target),
        shock=a,
        persistence=b,
        negative_shock=s,
        large_shock=z,
    )


def estimate_mgarch(
    data,
    options: EstimationOptions = DEFAULT_OPTIONS,
    country_id: str | None = None,
    start: MonthIndex | None = None,
) -> MGarchFit:
    """Fit the four-variable system by QML.

    The fit is always returned; ``converged`` reports honestly whether the
    numerical gradient at the optimum met the tolerance in the transformed
    space.  Columns must be ordered (country, fx_dev, fx_emg, world).
    """
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[1] != N_SYSTEM:
        raise ValueError(f"data must be (T, {N_SYSTEM})")
    if data.shape[0] < MIN_OBS:
        raise ValueError(f"need at least {MIN_OBS} months, got {data.shape[0]}")
    if not np.all(np.isfinite(data)):
        raise NonFiniteError("data contains non-finite values")
    for j in range(data.shape[1]):
        if np.ptp(data[:, j]) == 0.0:
            raise DegenerateDataError(j)

    n = data.shape[1]
    h1 = _demeaned_cov(data)
    h1_c = np.ascontiguousarray(h1)
    data_c = np.ascontiguousarray(data)

    def value(theta):
        p = unpack_params(theta, n)
        eps = data_c - p.mean
        ll, status, _ = _recursion.loglik_filter(
            eps,
            np.ascontiguousarray(p.intercept()),
            p.shock,
            p.persistence,
            p.negative_shock,
            p.large_shock,
            h1_c,
            False,
        )
        if status != _recursion.STATUS_OK or not np.isfinite(ll):
            return _BIG
        return -ll

    theta0 = pack_params(_initial_params(data))
    rng = np.random.default_rng(options.seed)
    theta, neg_ll, iterations, grad_norm, converged = _run_qml(value, theta0, options, rng)

    params = canonicalize(unpack_params(theta, n))
    eps, h_path, loglik = filter_path(params, data, initial_cov=h1)
    return MGarchFit(
        params=params,
        loglik=loglik,
        h_path=h_path,
        eps_path=eps,
        converged=converged,
        iterations=iterations,
        grad_norm=grad_norm,
        country_id=country_id,
        start=start,
    )


def _fit_one(task):
    country_id, start, data, options = task
    return estimate_mgarch(data, options, country_id=country_id, start=start)


def fit_panel_garch(
    panel: ReturnPanel,
    options: EstimationOptions = DEFAULT_OPTIONS,
    jobs: int | None = None,
) -> dict[str, MGarchFit]:
    """Fit every country in the panel; countries are independent tasks."""
    tasks = [
        (cid, panel.country(cid).start, align(panel, cid), options)
        for cid in panel.country_ids()
    ]
    if jobs is not None and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fits = list(pool.map(_fit_one, tasks))
    else:
        fits = [_fit_one(t) for t in tasks]
    return {fit.country_id: fit for fit in fits}


def extract_covariances(fits: Mapping[str, MGarchFit], panel: ReturnPanel) -> CovariancePanel:
    """Pull the step-2 regressors (h_ii, h_im, h_id, h_ie) out of the fits."""
    entries = {}
    for cid in sorted(fits):
        fit = fits[cid]
        country = panel.country(cid)
        if fit.h_path.shape[0] != len(country):
            raise ValueError(
                f"fit for {cid!r} has {fit.h_path.shape[0]} months, series has {len(country)}"
            )
        h = fit.h_path
        values = np.column_stack([h[:, 0, 0], h[:, 0, 3], h[:, 0, 1], h[:, 0, 2]])
        entries[cid] = CountryCovariances(cid, country.start, values)
    return CovariancePanel(entries)


# ---------------------------------------------------------------------------
# univariate restriction (FX volatility factor)


@dataclass(frozen=True, eq=False)
class UnivariateGarchFit:
    mean: float
    intercept: float  # c, so the variance intercept is c^2
    shock: float
    persistence: float
    variance_path: np.ndarray
    loglik: float
    converged: bool
    iterations: int
    grad_norm: float

    def unconditional_variance(self) -> float:
        return self.intercept**2 / (1.0 - self.shock**2 - self.persistence**2)


def _univariate_value_factory(data: np.ndarray):
    T = data.size
    eps_buf = np.empty((T, 1))
    h1 = np.array([[float(np.var(data))]])
    zero = np.zeros(1)

    def value(theta):
        mu, log_c, raw_a, raw_b = theta
        m = np.hypot(raw_a, raw_b)
        scale = np.tanh(m / 2.0) / m if m > 1e-12 else 0.5
        a, b = raw_a * scale, raw_b * scale
        eps_buf[:, 0] = data - mu
        c = np.exp(log_c)
        ll, status, _ = _recursion.loglik_filter(
            eps_buf,
            np.array([[c * c]]),
            np.array([a]),
            np.array([b]),
            zero,
            zero,
            h1,
            False,
        )
        if status != _recursion.STATUS_OK or not np.isfinite(ll):
            return _BIG
        return -ll

    return value


def fit_univariate_garch(
    series, options: EstimationOptions = DEFAULT_OPTIONS
) -> UnivariateGarchFit:
    """Fit a plain GARCH(1,1) (no asymmetry terms) to one series by QML."""
    data = np.asarray(series, dtype=float).ravel()
    if data.size < MIN_OBS:
        raise ValueError(f"need at least {MIN_OBS} months, got {data.size}")
    if not np.all(np.isfinite(data)):
        raise NonFiniteError("series contains non-finite values")
    if np.ptp(data) == 0.0:
        raise DegenerateDataError(0)

    variance = float(np.var(data))
    a0, b0 = 0.3, 0.85
    c0 = np.sqrt(max(variance * (1.0 - a0**2 - b0**2), 1e-12))
    r0 = np.hypot(a0, b0)
    m0 = 2.0 * np.arctanh(r0)
    theta0 = np.array([data.mean(), np.log(c0), a0 * m0 / r0, b0 * m0 / r0])

    value = _univariate_value_factory(data)
    rng = np.random.default_rng(options.seed)
    theta, _, iterations, grad_norm, converged = _run_qml(value, theta0, options, rng)

    mu, log_c, raw_a, raw_b = theta
    m = np.hypot(raw_a, raw_b)
    scale = np.tanh(m / 2.0) / m if m > 1e-12 else 0.5
    a, b = abs(raw_a * scale), abs(raw_b * scale)
    params = MGarchParams(
        mean=np.array([mu]),
        intercept_factor=np.array([[np.exp(log_c)]]),
        shock=np.array([a]),
        persistence=np.array([b]),
        negative_shock=np.zeros(1),
        large_shock=np.zeros(1),
    )
    eps, h_path, loglik = filter_path(params, data.reshape(-1, 1))
    return UnivariateGarchFit(
        mean=float(mu),
        intercept=float(np.exp(log_c)),
        shock=float(a),
        persistence=float(b),
        variance_path=h_path[:, 0, 0].copy(),
        loglik=loglik,
        converged=converged,
        iterations=iterations,
        grad_norm=grad_norm,
    )


def univariate_garch_vol(series, options: EstimationOptions = DEFAULT_OPTIONS) -> np.ndarray:
    """Conditional-variance path of a GARCH(1,1) fit, for factor construction."""
    fit = fit_univariate_garch(series, options)
    if not fit.converged:
        raise NoConvergenceError(
            f"gradient norm {fit.grad_norm:.2e} after {fit.iterations} iterations"
        )
    return fit.variance_path
