"""Convergence diagnostics and posterior summaries.

R-hat and bulk ESS follow the rank-normalized split-chain recipe: pool all
draws, replace them by normal scores of their average ranks, split every
chain in half, then apply the classical formulas to the halves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

DEFAULT_HDI_PROB = 0.94

DISPLAY_NAMES = {
    "beta0": "beta0 (intercept)",
    "beta1": "beta1 (collaboration)",
    "beta2": "beta2 (log streams)",
    "alpha": "alpha (dispersion)",
}


def _as_chains(draws) -> np.ndarray:
    arr = np.asarray(draws, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError("draws must be [chain, draw]")
    if arr.shape[1] < 4:
        raise ValueError("need at least 4 draws per chain")
    return arr


def is_degenerate(draws) -> bool:
    arr = np.asarray(draws, dtype=float)
    return bool(np.all(arr == arr.flat[0]))


def rank_normalize(draws: np.ndarray) -> np.ndarray:
    """Normal scores of pooled average ranks, same shape as ``draws``."""
    ranks = stats.rankdata(draws, method="average").reshape(draws.shape)
    return stats.norm.ppf((ranks - 0.375) / (draws.size + 0.25))


def split_chains(draws: np.ndarray) -> np.ndarray:
    """``[chain, n]`` -> ``[2*chain, n//2]``; the middle draw of odd chains is dropped."""
    half = draws.shape[1] // 2
    return np.concatenate([draws[:, :half], draws[:, draws.shape[1] - half:]], axis=0)


def _rhat(chains: np.ndarray) -> float:
    n = chains.shape[1]
    within = np.mean(np.var(chains, axis=1, ddof=1))
    between = n * np.var(np.mean(chains, axis=1), ddof=1)
    return math.sqrt((between / within + n - 1) / n)


def split_rhat(draws) -> float:
    """Rank-normalized split R-hat. Constant input gives 1.0 (see :func:`is_degenerate`)."""
    arr = _as_chains(draws)
    if is_degenerate(arr):
        return 1.0
    return _rhat(split_chains(rank_normalize(arr)))


def autocovariance(x: np.ndarray) -> np.ndarray:
    """Biased autocovariance (divisor n) at every lag, via zero-padded FFT."""
    n = x.size
    centered = x - x.mean()
    size = 2 ** math.ceil(math.log2(2 * n))
    f = np.fft.rfft(centered, size)
    return np.fft.irfft(f * np.conjugate(f), size)[:n] / n


def _ess(chains: np.ndarray) -> float:
    n_chain, n_draw = chains.shape
    acov = np.stack([autocovariance(c) for c in chains])
    mean_var = np.mean(acov[:, 0]) * n_draw / (n_draw - 1.0)
    var_plus = mean_var * (n_draw - 1.0) / n_draw
    if n_chain > 1:
        var_plus += np.var(np.mean(chains, axis=1), ddof=1)

    rho = np.zeros(n_draw)
    rho[0] = 1.0
    rho_even = 1.0
    rho_odd = 1.0 - (mean_var - np.mean(acov[:, 1])) / var_plus
    rho[1] = rho_odd

    # initial positive sequence over pairs of lags
    t = 1
    while t < n_draw - 3 and rho_even + rho_odd > 0.0:
        rho_even = 1.0 - (mean_var - np.mean(acov[:, t + 1])) / var_plus
        rho_odd = 1.0 - (mean_var - np.mean(acov[:, t + 2])) / var_plus
        if rho_even + rho_odd >= 0:
            rho[t + 1] = rho_even
            rho[t + 2] = rho_odd
        t += 2
    max_t = t - 2
    if rho_even > 0:
        rho[max_t + 1] = rho_even

    # initial monotone sequence
    t = 1
    while t <= max_t - 2:
        if rho[t + 1] + rho[t + 2] > rho[t - 1] + rho[t]:
            rho[t + 1] = (rho[t - 1] + rho[t]) / 2.0
            rho[t + 2] = rho[t + 1]
        t += 2

    n_total = n_chain * n_draw
    tau = -1.0 + 2.0 * np.sum(rho[: max_t + 1]) + np.sum(rho[max_t + 1: max_t + 2])
    tau = max(tau, 1.0 / math.log10(n_total))
    return float(n_total / tau)


def ess_bulk(draws) -> float:
    """Bulk effective sample size. Constant input gives the total draw count."""
    arr = _as_chains(draws)
    if is_degenerate(arr):
        return float(arr.size)
    return _ess(split_chains(rank_normalize(arr)))


def hdi(draws, prob: float = DEFAULT_HDI_PROB) -> tuple[float, float]:
    """Narrowest interval spanning ``ceil(prob * N)`` sorted draws.

    Ties go to the window with the smallest lower bound.
    """
    if not 0.0 < prob < 1.0:
        raise ValueError("prob must lie in (0, 1)")
    x = np.sort(np.asarray(draws, dtype=float).reshape(-1))
    n = x.size
    if n < 10:
        raise ValueError("need at least 10 draws")
    # guard against 0.94 * 100 = 94.00000000000001
    k = max(1, math.ceil(round(prob * n, 9)))
    widths = x[k - 1:] - x[: n - k + 1]
    i = int(np.argmin(widths))
    return float(x[i]), float(x[i + k - 1])


def central_interval(draws, prob: float = 0.95) -> tuple[float, float]:
    if not 0.0 < prob < 1.0:
        raise ValueError("prob must lie in (0, 1)")
    x = np.asarray(draws, dtype=float).reshape(-1)
    lo, hi = np.quantile(x, [(1 - prob) / 2, (1 + prob) / 2])
    return float(lo), float(hi)


@dataclass(frozen=True)
class SummaryRow:
    name: str
    mean: float
    sd: float
    hdi_low: float
    hdi_high: float
    rhat: float
    ess_bulk: float
    degenerate: bool = False

    def as_dict(self) -> dict:
        return {
            "name": self.name, "mean": self.mean, "sd": self.sd,
            "hdi_low": self.hdi_low, "hdi_high": self.hdi_high,
            "rhat": self.rhat, "ess_bulk": self.ess_bulk, "degenerate": self.degenerate,
        }


def summary_table(trace, names: Sequence[str] | None = None,
                  hdi_prob: float = DEFAULT_HDI_PROB) -> list[SummaryRow]:
    """One row per parameter on the reporting scale.

    Mean, SD and HDI use the pooled reporting-scale draws; R-hat and ESS use
    the sampling-scale draws (``log_alpha`` for ``alpha``).
    """
    names = list(names) if names is not None else list(trace.param_names)
    rows = []
    for name in names:
        j = trace.param_names.index(name)
        chains = trace.draws[:, :, j]
        sampled = trace.unconstrained[:, :, j]
        flat = chains.reshape(-1)
        lo, hi = hdi(flat, hdi_prob)
        rows.append(SummaryRow(
            name=name,
            mean=float(np.mean(flat)),
            sd=float(np.std(flat, ddof=1)),
            hdi_low=lo,
            hdi_high=hi,
            rhat=split_rhat(sampled),
            ess_bulk=ess_bulk(sampled),
            degenerate=is_degenerate(sampled),
        ))
    return rows


def format_summary(rows: Sequence[SummaryRow], hdi_prob: float = DEFAULT_HDI_PROB) -> str:
    """Aligned text table: mean, sd, HDI bounds, r_hat, ess_bulk."""
    lo_pct = f"hdi_{100 * (1 - hdi_prob) / 2:g}%"
    hi_pct = f"hdi_{100 * (1 + hdi_prob) / 2:g}%"
    width = max(len(DISPLAY_NAMES.get(r.name, r.name)) for r in rows) + 2
    head = f"{'':<{width}}{'mean':>10}{'sd':>9}{lo_pct:>10}{hi_pct:>10}{'r_hat':>8}{'ess_bulk':>10}"
    lines = [head]
    for r in rows:
        label = DISPLAY_NAMES.get(r.name, r.name)
        lines.append(
            f"{label:<{width}}{r.mean:>10.3f}{r.sd:>9.3f}{r.hdi_low:>10.3f}{r.hdi_high:>10.3f}"
            f"{r.rhat:>8.3f}{r.ess_bulk:>10.0f}"
        )
    return "\n".join(lines)
