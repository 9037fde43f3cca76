"""Weighted least-squares fitting for the model curves used in this package.

A small Levenberg-Marquardt driver handles the nonlinear models; the
log-linear ones (power law, logarithmic Qi saturation) are solved exactly by
weighted linear regression so round-trips on clean data are exact to
numerical precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NonFiniteResidualError

__all__ = [
    "FitResult",
    "levmar",
    "fit_powerlaw",
    "fit_qi_vs_n",
    "fit_noise_vs_n",
]


@dataclass(frozen=True)
class FitResult:
    """params and stderr are aligned; flags carry data-quality notes that do
    not invalidate the numbers (e.g. a saturation scale outside the sampled
    range)."""

    params: np.ndarray
    stderr: np.ndarray
    residual_norm: float
    converged: bool
    n_iter: int
    flags: tuple[str, ...] = field(default_factory=tuple)


def _jacobian(fn, p, r0):
    m, n = r0.size, p.size
    jac = np.empty((m, n))
    for j in range(n):
        h = 1e-6 * max(abs(p[j]), 1e-8)
        hi = p.copy()
        lo = p.copy()
        hi[j] += h
        lo[j] -= h
        jac[:, j] = (fn(hi) - fn(lo)) / (2.0 * h)
    return jac


def levmar(residual_fn, p0, max_iter: int = 500) -> FitResult:
    """Minimize sum(residual_fn(p)**2) from p0.

    residual_fn maps a parameter vector to a residual vector (weights folded
    in by the caller). Raises NonFiniteResidualError, carrying the last
    usable parameters, when the residuals are not finite at the start.
    """
    p = np.asarray(p0, dtype=float).copy()
    if p.ndim != 1 or p.size == 0:
        raise DomainError("p0 must be a non-empty 1-d array")
    r = np.asarray(residual_fn(p), dtype=float)
    if not np.all(np.isfinite(r)):
        raise NonFiniteResidualError("residuals not finite at start", p.copy())
    cost = float(r @ r)
    lam = 1e-10
    grad0 = None
    n_iter = 0
    converged = False
    jac = None
    for n_iter in range(1, max_iter + 1):
        jac = _jacobian(residual_fn, p, r)
        grad = jac.T @ r
        gnorm = float(np.linalg.norm(grad))
        if grad0 is None:
            grad0 = gnorm
        if gnorm <= 1e-12 * max(grad0, 1.0):
            converged = True
            break
        a = jac.T @ jac
        d = np.diag(a).copy()
        d[d <= 0] = 1.0
        accepted = False
        while lam < 1e18:
            try:
                step = np.linalg.solve(a + lam * np.diag(d), -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            p_try = p + step
            r_try = np.asarray(residual_fn(p_try), dtype=float)
            if np.all(np.isfinite(r_try)):
                cost_try = float(r_try @ r_try)
                if cost_try <= cost:
                    rel_drop = (cost - cost_try) / max(cost, 1e-300)
                    p, r, cost = p_try, r_try, cost_try
                    lam = max(lam / 10.0, 1e-14)
                    accepted = True
                    if rel_drop < 1e-10:
                        converged = True
                    break
            lam *= 10.0
        if converged or not accepted:
            break

    stderr = np.full(p.size, np.nan)
    if jac is not None and r.size > p.size:
        dof = r.size - p.size
        s2 = cost / dof
        try:
            cov = s2 * np.linalg.pinv(jac.T @ jac)
            stderr = np.sqrt(np.clip(np.diag(cov), 0.0, None))
        except np.linalg.LinAlgError:
            pass
    return FitResult(p, stderr, math.sqrt(cost), converged, n_iter)


def _weighted_linear(x, y, w):
    # minimize sum w (y - a - b x)^2; returns (a, b) and their covariance
    sw = np.sum(w)
    sx = np.sum(w * x)
    sy = np.sum(w * y)
    sxx = np.sum(w * x * x)
    sxy = np.sum(w * x * y)
    det = sw * sxx - sx * sx
    if det <= 0:
        raise DomainError("degenerate abscissa for linear fit")
    a = (sxx * sy - sx * sxy) / det
    b = (sw * sxy - sx * sy) / det
    cov = np.array([[sxx, -sx], [-sx, sw]]) / det
    return a, b, cov


def fit_powerlaw(x, y, yerr=None) -> FitResult:
    """Fit y = amplitude * x**exponent by weighted log-log regression.

    params = [amplitude, exponent]. Data must be positive. With yerr given,
    weights follow from the small-error propagation sigma_lny = yerr/y;
    otherwise equal weights in log space (clean data round-trips exactly).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise DomainError("need matching 1-d arrays with at least 2 points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("power-law fit needs positive data")
    if yerr is None:
        w = np.ones_like(y)
    else:
        yerr = np.asarray(yerr, dtype=float)
        if np.any(yerr <= 0):
            raise DomainError("errors must be positive")
        w = (y / yerr) ** 2
    a, b, cov = _weighted_linear(np.log(x), np.log(y), w)
    if yerr is None and x.size > 2:
        # scale covariance by the residual variance in log space
        resid = np.log(y) - (a + b * np.log(x))
        cov = cov * float(resid @ resid) / (x.size - 2)
    amp = math.exp(a)
    params = np.array([amp, b])
    stderr = np.array([amp * math.sqrt(cov[0, 0]), math.sqrt(cov[1, 1])])
    rnorm = float(np.linalg.norm(np.log(y) - (a + b * np.log(x))))
    return FitResult(params, stderr, rnorm, True, 1)


def fit_qi_vs_n(photon_numbers, qi, model: str = "gtm", qi_err=None) -> FitResult:
    """Fit internal quality factor versus photon number.

    model="gtm": 1/Q = (loss_slope/2) (ln n_sat - ln N), linear in ln N and
    solved exactly; params = [loss_slope, n_sat]. n_sat is where the
    extrapolated loss reaches zero (full saturation).
    model="empirical": 1/Q = f_tan_delta / (1 + N/n_c)**alpha via
    Levenberg-Marquardt in log-parameter space;
    params = [f_tan_delta, n_c, alpha].
    """
    n = np.asarray(photon_numbers, dtype=float)
    q = np.asarray(qi, dtype=float)
    if n.shape != q.shape or n.ndim != 1 or n.size < 3:
        raise DomainError("need matching 1-d arrays with at least 3 points")
    if np.any(n <= 0) or np.any(q <= 0):
        raise DomainError("photon numbers and Qi must be positive")
    y = 1.0 / q
    if qi_err is None:
        w = np.ones_like(y)
        sigma_y = None
    else:
        qi_err = np.asarray(qi_err, dtype=float)
        if np.any(qi_err <= 0):
            raise DomainError("errors must be positive")
        sigma_y = qi_err / q**2
        w = 1.0 / sigma_y**2

    if model == "gtm":
        a, b, cov = _weighted_linear(np.log(n), y, w)
        if qi_err is None and n.size > 2:
            resid = y - (a + b * np.log(n))
            cov = cov * float(resid @ resid) / (n.size - 2)
        flags = []
        if b >= 0:
            flags.append("loss-rising-with-power")
            params = np.array([-2.0 * b, np.nan])
            stderr = np.array([2.0 * math.sqrt(cov[1, 1]), np.nan])
        else:
            n_sat = math.exp(-a / b)
            # propagate through n_sat = exp(-a/b)
            g = np.array([-n_sat / b, n_sat * a / b**2])
            var = float(g @ cov @ g)
            params = np.array([-2.0 * b, n_sat])
            stderr = np.array([2.0 * math.sqrt(cov[1, 1]), math.sqrt(max(var, 0.0))])
            if n_sat > 10.0 * n.max():
                flags.append("n-sat-above-data-range")
        rnorm = float(np.linalg.norm(np.sqrt(w) * (y - (a + b * np.log(n)))))
        return FitResult(params, stderr, rnorm, True, 1, tuple(flags))

    if model == "empirical":
        sw = np.sqrt(w)

        def resid(theta):
            f, n_c, alpha = np.exp(theta)
            return sw * (f / (1.0 + n / n_c) ** alpha - y)

        theta0 = np.array([math.log(y.max()), math.log(np.median(n)), math.log(0.4)])
        res = levmar(resid, theta0)
        f, n_c, alpha = np.exp(res.params)
        params = np.array([f, n_c, alpha])
        stderr = params * res.stderr  # delta method from log space
        flags = list(res.flags)
        if alpha > 1.0:
            flags.append("alpha-above-one")
        if n_c > 10.0 * n.max():
            flags.append("n-sat-above-data-range")
        return FitResult(params, stderr, res.residual_norm, res.converged,
                         res.n_iter, tuple(flags))

    raise DomainError(f"unknown model {model!r}")


def fit_noise_vs_n(photon_numbers, s_values, s_err=None) -> FitResult:
    """Fit the drive dependence of the noise level, S = S0 (1 + N/N_c)**-0.5.

    params = [S0, N_c]. Flags the saturation scale as unidentifiable when it
    lands a decade outside the sampled photon-number range.
    """
    n = np.asarray(photon_numbers, dtype=float)
    s = np.asarray(s_values, dtype=float)
    if n.shape != s.shape or n.ndim != 1 or n.size < 3:
        raise DomainError("need matching 1-d arrays with at least 3 points")
    if np.any(n < 0) or np.any(s <= 0):
        raise DomainError("need photon numbers >= 0 and noise levels > 0")
    if s_err is None:
        w = 1.0 / s**2  # constant relative error
    else:
        s_err = np.asarray(s_err, dtype=float)
        if np.any(s_err <= 0):
            raise DomainError("errors must be positive")
        w = 1.0 / s_err**2
    sw = np.sqrt(w)

    def resid(theta):
        s0, n_c = np.exp(theta)
        return sw * (s0 / np.sqrt(1.0 + n / n_c) - s)

    n_ref = np.median(n[n > 0]) if np.any(n > 0) else 1.0
    theta0 = np.array([math.log(s.max()), math.log(n_ref)])
    res = levmar(resid, theta0)
    s0, n_c = np.exp(res.params)
    params = np.array([s0, n_c])
    stderr = params * res.stderr
    flags = list(res.flags)
    if n_c >= 10.0 * n.max():
        flags.append("nc-above-data-range")
    if n_c <= max(n.min(), 1e-300) / 10.0 and n.min() > 0:
        flags.append("nc-below-data-range")
    return FitResult(params, stderr, res.residual_norm, res.converged,
                     res.n_iter, tuple(flags))
