"""Slow, direct re-implementations used as test oracles."""

import math
from statistics import NormalDist

import numpy as np


def rank_normalize(draws):
    flat = np.asarray(draws, dtype=float).reshape(-1)
    s = np.sort(flat)
    n = flat.size
    out = []
    for v in flat:
        less = np.searchsorted(s, v, side="left")
        equal = np.searchsorted(s, v, side="right") - less
        rank = less + (equal + 1) / 2.0
        out.append(NormalDist().inv_cdf((rank - 0.375) / (n + 0.25)))
    return np.array(out).reshape(np.shape(draws))


def split(draws):
    half = draws.shape[1] // 2
    pieces = []
    for c in draws:
        pieces.append(c[:half])
        pieces.append(c[len(c) - half:])
    return np.array(pieces)


def rhat(draws):
    z = split(rank_normalize(np.atleast_2d(draws)))
    m, n = z.shape
    means = [sum(c) / n for c in z]
    grand = sum(means) / m
    B = n / (m - 1) * sum((mu - grand) ** 2 for mu in means)
    W = sum(sum((x - mu) ** 2 for x in c) / (n - 1) for c, mu in zip(z, means)) / m
    var_hat = (n - 1) / n * W + B / n
    return math.sqrt(var_hat / W)


def ess(draws):
    z = split(rank_normalize(np.atleast_2d(draws)))
    m, n = z.shape
    acov = np.empty((m, n))
    for c in range(m):
        x = z[c] - z[c].mean()
        for t in range(n):
            acov[c, t] = np.dot(x[: n - t], x[t:]) / n
    w = acov[:, 0].mean() * n / (n - 1)
    var_plus = w * (n - 1) / n
    if m > 1:
        var_plus += np.var(z.mean(axis=1), ddof=1)
    rho = 1.0 - (w - acov.mean(axis=0)) / var_plus
    rho[0] = 1.0

    # pairs (rho[2k], rho[2k+1]) while the previous pair sum stays positive
    pair_sums = [rho[0] + rho[1]]
    k = 1
    while 2 * k - 1 < n - 3 and pair_sums[-1] > 0:
        pair_sums.append(rho[2 * k] + rho[2 * k + 1])
        k += 1
    last = len(pair_sums) - 1
    kept = np.minimum.accumulate(np.array(pair_sums[:last])) if last else np.array([])
    tail = rho[2 * last] if rho[2 * last] > 0 else 0.0
    tau = -1.0 + 2.0 * kept.sum() + tail
    total = m * n
    tau = max(tau, 1.0 / math.log10(total))
    return total / tau


def hdi_exhaustive(values, prob):
    """Scan every pair of sample values; keep the narrowest interval holding
    at least ceil(prob * N) draws, lowest start on ties."""
    x = sorted(values)
    n = len(x)
    k = math.ceil(round(prob * n, 9))
    best = None
    for i in range(n):
        for j in range(i, n):
            inside = sum(1 for v in x if x[i] <= v <= x[j])
            if inside >= k:
                cand = (x[j] - x[i], x[i], x[j])
                if best is None or cand[:2] < best[:2]:
                    best = cand
                break
    return best[1], best[2]


def ar1(rng, phi, shape):
    x = np.empty(shape)
    x[..., 0] = rng.standard_normal(shape[:-1]) / np.sqrt(1 - phi ** 2)
    for t in range(1, shape[-1]):
        x[..., t] = phi * x[..., t - 1] + rng.standard_normal(shape[:-1])
    return x


def diagnostic_fixtures():
    """Ten fixed [chain, draw] arrays covering ties, odd lengths and heavy tails."""
    rng = np.random.default_rng(2024)
    return [
        rng.standard_normal((2, 200)),
        rng.standard_normal((4, 151)),
        ar1(rng, 0.5, (2, 300)),
        ar1(rng, 0.95, (3, 250)),
        rng.standard_normal((2, 200)) + np.array([[0.0], [0.7]]),
        np.round(rng.standard_normal((2, 120)) * 2),  # heavy ties
        rng.standard_cauchy((2, 200)),
        rng.standard_normal((1, 301)),
        np.cumsum(rng.standard_normal((2, 200)), axis=1),  # random walk
        np.stack([np.sin(np.arange(180) * 2.5), np.cos(np.arange(180) * 2.5)]),  # antithetic-ish
    ]
