"""Negative binomial regression with a log link, plus a Poisson baseline.

The NB distribution uses the mean/dispersion form: mean ``mu``, variance
``mu + mu**2 / alpha``. Coefficients get independent Normal(0, 2^2) priors
and ``alpha`` a HalfNormal(2) prior. Sampling happens on the unconstrained
vector ``(beta0, beta1, beta2, log_alpha)``; additive prior constants are
dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import digamma, gammaln

PRIOR_SD = 2.0
ALPHA_PRIOR_SCALE = 2.0
# exp(50) ~ 5e21; anything larger is treated as a rejected proposal
ETA_MAX = 50.0
LOG_ALPHA_BOUND = 50.0

NB_PARAM_NAMES = ("beta0", "beta1", "beta2", "alpha")
POISSON_PARAM_NAMES = ("beta0", "beta1", "beta2")


class Coefficients(NamedTuple):
    beta0: float
    beta1: float
    beta2: float


class UnconstrainedParams(NamedTuple):
    beta0: float
    beta1: float
    beta2: float
    log_alpha: float

    @property
    def alpha(self) -> float:
        return float(np.exp(self.log_alpha))

    @property
    def coefficients(self) -> Coefficients:
        return Coefficients(self.beta0, self.beta1, self.beta2)


@dataclass(frozen=True)
class RegressionDataset:
    """Counts and the two covariates, as aligned float arrays.

    Counts must be non-negative integers. Observed chart data always has
    ``y >= 1``; zeros are accepted because the likelihood covers them and
    untruncated simulations produce them.
    """

    y: np.ndarray
    x_collab: np.ndarray
    x_log_streams: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        xc = np.asarray(self.x_collab, dtype=float)
        xl = np.asarray(self.x_log_streams, dtype=float)
        if not (y.ndim == xc.ndim == xl.ndim == 1) or not (len(y) == len(xc) == len(xl)):
            raise ValueError("y, x_collab and x_log_streams must be 1-d and equal length")
        if np.any(y < 0) or np.any(y != np.round(y)):
            raise ValueError("counts must be non-negative integers")
        if not np.all(np.isin(xc, (0.0, 1.0))):
            raise ValueError("x_collab must be 0/1")
        if not np.all(np.isfinite(xl)):
            raise ValueError("x_log_streams must be finite")
        for name, arr in (("y", y), ("x_collab", xc), ("x_log_streams", xl)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.y)

    @classmethod
    def from_records(cls, records) -> "RegressionDataset":
        return cls(
            y=[r.days_on_chart for r in records],
            x_collab=[float(r.is_collab) for r in records],
            x_log_streams=[r.log_streams for r in records],
        )

    def permuted(self, order: Sequence[int]) -> "RegressionDataset":
        order = np.asarray(order)
        return RegressionDataset(self.y[order], self.x_collab[order], self.x_log_streams[order])


class Evaluation(NamedTuple):
    logp: float
    grad: np.ndarray
    clamped: bool


# -- densities -----------------------------------------------------------------


def nb_log_pmf(n, mu, alpha):
    """Log pmf of NB(mean=mu, dispersion=alpha); vectorized."""
    n, mu, alpha = (np.asarray(v, dtype=float) for v in (n, mu, alpha))
    if np.any(mu <= 0) or np.any(alpha <= 0):
        raise ValueError("mu and alpha must be positive")
    log_total = np.log(alpha + mu)
    out = (
        gammaln(n + alpha) - gammaln(alpha) - gammaln(n + 1.0)
        + alpha * (np.log(alpha) - log_total)
        + n * (np.log(mu) - log_total)
    )
    return out[()] if out.ndim == 0 else out


def poisson_log_pmf(n, mu):
    n, mu = np.asarray(n, dtype=float), np.asarray(mu, dtype=float)
    if np.any(mu <= 0):
        raise ValueError("mu must be positive")
    out = n * np.log(mu) - mu - gammaln(n + 1.0)
    return out[()] if out.ndim == 0 else out


def linear_predictor(coeffs, x_collab, x_log_streams):
    b0, b1, b2 = coeffs[0], coeffs[1], coeffs[2]
    return b0 + b1 * np.asarray(x_collab, dtype=float) + b2 * np.asarray(x_log_streams, dtype=float)


# -- priors --------------------------------------------------------------------


def _coef_prior(beta: np.ndarray) -> tuple[float, np.ndarray]:
    var = PRIOR_SD ** 2
    return float(-0.5 * np.dot(beta, beta) / var), -beta / var


def log_prior(params) -> float:
    """Normal(0, 4) on each coefficient, HalfNormal(2) on alpha, plus the
    log-Jacobian ``log_alpha`` of alpha = exp(log_alpha)."""
    return log_prior_and_grad(params)[0]


def log_prior_and_grad(params) -> tuple[float, np.ndarray]:
    p = np.asarray(params, dtype=float)
    lp, g_beta = _coef_prior(p[:3])
    theta = p[3]
    alpha = np.exp(theta)
    lp += -0.5 * alpha ** 2 / ALPHA_PRIOR_SCALE ** 2 + theta
    grad = np.empty(4)
    grad[:3] = g_beta
    grad[3] = -alpha ** 2 / ALPHA_PRIOR_SCALE ** 2 + 1.0
    return lp, grad


# -- posteriors ----------------------------------------------------------------


def _nan_eval(dim: int) -> Evaluation:
    return Evaluation(-np.inf, np.full(dim, np.nan), True)


def evaluate_nb(params, data: RegressionDataset) -> Evaluation:
    """Log posterior and its gradient on the unconstrained scale.

    If any linear predictor exceeds ``ETA_MAX`` (or ``|log_alpha|`` exceeds
    its bound) the point is reported as ``-inf`` with ``clamped=True``.
    """
    p = np.asarray(params, dtype=float)
    if p.shape != (4,) or not np.all(np.isfinite(p)):
        return _nan_eval(4)
    theta = p[3]
    eta = linear_predictor(p, data.x_collab, data.x_log_streams)
    if np.max(eta, initial=-np.inf) > ETA_MAX or abs(theta) > LOG_ALPHA_BOUND:
        return _nan_eval(4)
    y = data.y
    alpha = np.exp(theta)
    mu = np.exp(eta)
    log_total = np.logaddexp(theta, eta)
    loglik = np.sum(
        gammaln(y + alpha) - gammaln(alpha) - gammaln(y + 1.0)
        + alpha * (theta - log_total) + y * (eta - log_total)
    )
    # d/d eta_i = y_i - (y_i + alpha) * mu_i / (alpha + mu_i)
    frac = np.exp(eta - log_total)
    d_eta = y - (y + alpha) * frac
    d_alpha = np.sum(
        digamma(y + alpha) - digamma(alpha) + (theta - log_total) + 1.0 - (y + alpha) / (alpha + mu)
    )
    grad = np.array([
        d_eta.sum(),
        np.dot(d_eta, data.x_collab),
        np.dot(d_eta, data.x_log_streams),
        d_alpha * alpha,
    ])
    lp_prior, g_prior = log_prior_and_grad(p)
    logp = float(loglik + lp_prior)
    grad = grad + g_prior
    if not np.isfinite(logp) or not np.all(np.isfinite(grad)):
        return _nan_eval(4)
    return Evaluation(logp, grad, False)


def log_posterior(params, data: RegressionDataset) -> float:
    """Unnormalized log posterior of the NB model; ``-inf`` on overflow."""
    return evaluate_nb(params, data).logp


def grad_log_posterior(params, data: RegressionDataset) -> np.ndarray:
    return evaluate_nb(params, data).grad


def evaluate_poisson(coeffs, data: RegressionDataset) -> Evaluation:
    p = np.asarray(coeffs, dtype=float)
    if p.shape != (3,) or not np.all(np.isfinite(p)):
        return _nan_eval(3)
    eta = linear_predictor(p, data.x_collab, data.x_log_streams)
    if np.max(eta, initial=-np.inf) > ETA_MAX:
        return _nan_eval(3)
    mu = np.exp(eta)
    y = data.y
    loglik = np.sum(y * eta - mu - gammaln(y + 1.0))
    d_eta = y - mu
    grad = np.array([d_eta.sum(), np.dot(d_eta, data.x_collab), np.dot(d_eta, data.x_log_streams)])
    lp_prior, g_prior = _coef_prior(p)
    logp = float(loglik + lp_prior)
    grad = grad + g_prior
    if not np.isfinite(logp) or not np.all(np.isfinite(grad)):
        return _nan_eval(3)
    return Evaluation(logp, grad, False)


def poisson_log_posterior(coeffs, data: RegressionDataset) -> tuple[float, np.ndarray]:
    """Poisson GLM log posterior with the same coefficient priors, and its gradient."""
    ev = evaluate_poisson(coeffs, data)
    return ev.logp, ev.grad


# -- sampler targets -----------------------------------------------------------


class _CenteredTarget:
    """Shared reparameterization: the sampler sees an intercept at the mean
    of ``x_log_streams``; reported intercept = centered - beta2 * mean."""

    param_names: tuple[str, ...]
    dim: int

    def __init__(self, data: RegressionDataset, center: bool = True):
        self.data = data
        self.shift = float(np.mean(data.x_log_streams)) if center and len(data) else 0.0
        self.n_clamped = 0

    def to_model(self, z: np.ndarray) -> np.ndarray:
        """Sampling coordinates -> model coordinates (vectorized over rows)."""
        z = np.asarray(z, dtype=float)
        out = z.copy()
        out[..., 0] = z[..., 0] - z[..., 2] * self.shift
        return out

    def from_model(self, params) -> np.ndarray:
        p = np.asarray(params, dtype=float)
        out = p.copy()
        out[..., 0] = p[..., 0] + p[..., 2] * self.shift
        return out

    def _evaluate(self, params) -> Evaluation:
        raise NotImplementedError

    def logp_and_grad(self, z: np.ndarray) -> tuple[float, np.ndarray]:
        ev = self._evaluate(self.to_model(z))
        if ev.clamped:
            self.n_clamped += 1
            return ev.logp, ev.grad
        g = ev.grad.copy()
        g[2] -= self.shift * g[0]
        return ev.logp, g

    def constrain(self, model_params: np.ndarray) -> np.ndarray:
        """Model coordinates -> reporting scale (identity for coefficients)."""
        return np.asarray(model_params, dtype=float).copy()


class NegBinomialTarget(_CenteredTarget):
    param_names = NB_PARAM_NAMES
    unconstrained_names = ("beta0", "beta1", "beta2", "log_alpha")
    dim = 4

    def _evaluate(self, params) -> Evaluation:
        return evaluate_nb(params, self.data)

    def constrain(self, model_params):
        out = np.asarray(model_params, dtype=float).copy()
        out[..., 3] = np.exp(out[..., 3])
        return out


class PoissonTarget(_CenteredTarget):
    param_names = POISSON_PARAM_NAMES
    unconstrained_names = POISSON_PARAM_NAMES
    dim = 3

    def _evaluate(self, params) -> Evaluation:
        return evaluate_poisson(params, self.data)
