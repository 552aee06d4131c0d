"""Derived quantities and posterior predictive checks.

Derived-quantity intervals are equal-tailed (95% by default); parameter
tables use HDIs. Everything works on pooled draws from a
:class:`~chartnb.nuts.Trace`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .diagnostics import central_interval
from .model import RegressionDataset
from .synth import sample_negative_binomial

OVER_300 = 300
HIST_BIN_WIDTH = 10
HIST_UPPER = 370


@dataclass(frozen=True)
class DerivedQuantity:
    draws: np.ndarray = field(repr=False)
    median: float
    low: float
    high: float
    prob: float

    def as_dict(self) -> dict:
        return {"median": self.median, "low": self.low, "high": self.high, "prob": self.prob}


def _summarize(draws: np.ndarray, prob: float) -> DerivedQuantity:
    lo, hi = central_interval(draws, prob)
    return DerivedQuantity(draws, float(np.median(draws)), lo, hi, prob)


def rate_ratio(trace, prob: float = 0.95, name: str = "beta1") -> DerivedQuantity:
    """Per-draw exp(beta1): the multiplicative collaboration effect on expected days."""
    return _summarize(np.exp(trace.pooled(name)), prob)


def prob_positive(trace, name: str = "beta1") -> float:
    """Share of pooled draws strictly above zero."""
    return float(np.mean(trace.pooled(name) > 0))


def expected_days(trace, x_log_streams: float, collab: bool, prob: float = 0.95) -> DerivedQuantity:
    """Per-draw mean days on chart for a track with the given covariates."""
    if not np.isfinite(x_log_streams):
        raise ValueError("reference log streams must be finite")
    eta = trace.pooled("beta0") + trace.pooled("beta2") * x_log_streams
    if collab:
        eta = eta + trace.pooled("beta1")
    return _summarize(np.exp(eta), prob)


@dataclass(frozen=True)
class DerivedSummary:
    rate_ratio: DerivedQuantity
    prob_beta1_positive: float
    ref_log_streams: float
    mu_solo: DerivedQuantity
    mu_collab: DerivedQuantity

    def as_dict(self) -> dict:
        return {
            "rate_ratio": self.rate_ratio.as_dict(),
            "prob_beta1_positive": self.prob_beta1_positive,
            "ref_log_streams": self.ref_log_streams,
            "mu_solo": self.mu_solo.as_dict(),
            "mu_collab": self.mu_collab.as_dict(),
        }


def derived_summary(trace, ref_log_streams: float, prob: float = 0.95) -> DerivedSummary:
    return DerivedSummary(
        rate_ratio=rate_ratio(trace, prob),
        prob_beta1_positive=prob_positive(trace, "beta1"),
        ref_log_streams=float(ref_log_streams),
        mu_solo=expected_days(trace, ref_log_streams, False, prob),
        mu_collab=expected_days(trace, ref_log_streams, True, prob),
    )


# -- posterior predictive ------------------------------------------------------


def strided_indices(n_draws: int, n_rep: int) -> np.ndarray:
    return (np.arange(n_rep) * n_draws) // n_rep


def posterior_predictive(trace, data: RegressionDataset, n_rep: int, seed: int = 0) -> np.ndarray:
    """Replicated count vectors, shape ``[n_rep, n_obs]``.

    Replicate ``r`` uses the pooled draw at an even stride through the trace
    and its own random stream (child ``r`` of ``SeedSequence(seed)``). Traces
    without an ``alpha`` parameter are treated as Poisson fits.
    """
    if n_rep < 1:
        raise ValueError("n_rep must be >= 1")
    b0, b1, b2 = (trace.pooled(n) for n in ("beta0", "beta1", "beta2"))
    alpha = trace.pooled("alpha") if "alpha" in trace.param_names else None
    idx = strided_indices(b0.size, n_rep)
    children = np.random.SeedSequence(seed).spawn(n_rep)
    out = np.empty((n_rep, len(data)), dtype=np.int64)
    for r, (j, ss) in enumerate(zip(idx, children)):
        rng = np.random.Generator(np.random.Philox(ss))
        mu = np.exp(b0[j] + b1[j] * data.x_collab + b2[j] * data.x_log_streams)
        out[r] = rng.poisson(mu) if alpha is None else sample_negative_binomial(mu, alpha[j], rng)
    return out


def _statistics(counts: np.ndarray) -> dict[str, np.ndarray]:
    """Check statistics along the last axis."""
    counts = np.asarray(counts, dtype=float)
    return {
        "mean": counts.mean(axis=-1),
        "variance": counts.var(axis=-1, ddof=1) if counts.shape[-1] > 1 else np.zeros(counts.shape[:-1]),
        "max": counts.max(axis=-1),
        "share_over_300": (counts > OVER_300).mean(axis=-1),
    }


@dataclass(frozen=True)
class StatCheck:
    observed: float
    replicated_mean: float
    replicated_low: float
    replicated_high: float
    p_value: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def tail_p_value(observed: float, replicated: np.ndarray) -> float:
    """Share of replicates at or above ``observed``; ties count one half."""
    replicated = np.asarray(replicated, dtype=float)
    return float((np.sum(replicated > observed) + 0.5 * np.sum(replicated == observed)) / replicated.size)


def _checks(obs: np.ndarray, reps: np.ndarray) -> dict[str, StatCheck]:
    o, r = _statistics(obs), _statistics(reps)
    out = {}
    for name in o:
        lo, hi = np.quantile(r[name], [0.05, 0.95])
        out[name] = StatCheck(float(o[name]), float(np.mean(r[name])), float(lo), float(hi),
                              tail_p_value(float(o[name]), r[name]))
    return out


@dataclass(frozen=True)
class PpcReport:
    n_rep: int
    overall: dict[str, StatCheck]
    strata: dict[str, dict[str, StatCheck]]
    variance_ratio: float
    marginal_variance_ratio: float
    degenerate: bool

    def as_dict(self) -> dict:
        return {
            "n_rep": self.n_rep,
            "overall": {k: v.as_dict() for k, v in self.overall.items()},
            "strata": {s: {k: v.as_dict() for k, v in d.items()} for s, d in self.strata.items()},
            "variance_ratio": self.variance_ratio,
            "marginal_variance_ratio": self.marginal_variance_ratio,
            "degenerate": self.degenerate,
        }


def variance_ratio(obs, reps) -> float:
    """Predictive variance over observed squared error, per track.

    With ``m_i`` and ``v_i`` the replicate mean and variance of track ``i``,
    returns ``n / sum_i (obs_i - m_i)**2 / v_i``: an inverse-variance weighted
    ratio of predicted to realized spread, about 1 for a well-calibrated
    model and well below 1 when the model is under-dispersed. Tracks whose
    replicates never vary are skipped; needs at least two replicates.
    """
    obs = np.asarray(obs, dtype=float)
    reps = np.atleast_2d(np.asarray(reps, dtype=float))
    if reps.shape[0] < 2:
        return float("nan")
    m = reps.mean(axis=0)
    v = reps.var(axis=0, ddof=1)
    keep = v > 0
    if not keep.any():
        return float("nan")
    return float(keep.sum() / np.sum((obs[keep] - m[keep]) ** 2 / v[keep]))


def marginal_variance_ratio(obs, reps) -> float:
    """Mean replicate sample variance over observed sample variance.

    Dominated by the spread of ``mu`` across tracks, so it separates models
    poorly; kept as the plain-reading companion of :func:`variance_ratio`.
    """
    obs = np.asarray(obs, dtype=float)
    reps = np.atleast_2d(np.asarray(reps, dtype=float))
    v_obs = obs.var(ddof=1) if obs.size > 1 else 0.0
    if v_obs == 0:
        return float("nan")
    return float(np.mean(reps.var(axis=1, ddof=1)) / v_obs)


def ppc_compare(obs, reps, x_collab: Sequence[float] | None = None) -> PpcReport:
    """Compare observed counts with replicates, overall and by collaboration status."""
    obs = np.asarray(obs)
    reps = np.atleast_2d(np.asarray(reps))
    if reps.shape[1] != obs.size:
        raise ValueError("replicates must have one column per observation")
    strata = {}
    if x_collab is not None:
        flag = np.asarray(x_collab, dtype=float)
        for label, mask in (("solo", flag == 0), ("collab", flag == 1)):
            if mask.sum() >= 2:
                strata[label] = _checks(obs[mask], reps[:, mask])
    degenerate = bool(np.all(obs == obs.flat[0]))
    return PpcReport(reps.shape[0], _checks(obs, reps), strata, variance_ratio(obs, reps),
                     marginal_variance_ratio(obs, reps), degenerate)


def histogram_export(obs, reps, bin_width: int = HIST_BIN_WIDTH, upper: int = HIST_UPPER) -> dict:
    """Bin counts (width 10 over 0-370) for observed and each replicate, for plotting.

    Values at or beyond ``upper`` are tallied in ``overflow``.
    """
    edges = np.arange(0, upper + bin_width, bin_width)

    def counts(x):
        x = np.asarray(x)
        h, _ = np.histogram(x[x < upper], bins=edges)
        return h.tolist(), int(np.sum(x >= upper))

    o_counts, o_over = counts(obs)
    rep_rows = [counts(r) for r in np.atleast_2d(reps)]
    return {
        "bin_edges": edges.tolist(),
        "observed": o_counts,
        "observed_overflow": o_over,
        "replicates": [c for c, _ in rep_rows],
        "replicate_overflow": [o for _, o in rep_rows],
    }


@dataclass(frozen=True)
class ModelComparison:
    nb_variance_ratio: float
    poisson_variance_ratio: float
    nb_marginal_variance_ratio: float
    poisson_marginal_variance_ratio: float
    nb_max_p_value: float
    poisson_max_p_value: float
    degenerate: bool

    @property
    def nb_closer(self) -> bool:
        return abs(self.nb_variance_ratio - 1) < abs(self.poisson_variance_ratio - 1)

    def as_dict(self) -> dict:
        return {**self.__dict__, "nb_closer": self.nb_closer}


def model_compare(nb_trace, poisson_trace, data: RegressionDataset, n_rep: int = 500,
                  seed: int = 0) -> ModelComparison:
    """Posterior predictive variance ratio and max-statistic p-value for both fits."""
    nb = ppc_compare(data.y, posterior_predictive(nb_trace, data, n_rep, seed))
    po = ppc_compare(data.y, posterior_predictive(poisson_trace, data, n_rep, seed))
    return ModelComparison(
        nb_variance_ratio=nb.variance_ratio,
        poisson_variance_ratio=po.variance_ratio,
        nb_marginal_variance_ratio=nb.marginal_variance_ratio,
        poisson_marginal_variance_ratio=po.marginal_variance_ratio,
        nb_max_p_value=nb.overall["max"].p_value,
        poisson_max_p_value=po.overall["max"].p_value,
        degenerate=nb.degenerate,
    )
