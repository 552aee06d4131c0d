import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chartnb.diagnostics import (
    ess_bulk,
    format_summary,
    hdi,
    is_degenerate,
    split_rhat,
    summary_table,
)

import oracles
from oracles import ar1, diagnostic_fixtures


def test_rhat_identical_chains():
    rng = np.random.default_rng(1)
    c = rng.standard_normal(1000)
    # duplicated halves shrink the between-half variance, so R-hat may sit
    # just under 1; the tolerated undershoot is 1e-3
    assert 1.0 - 1e-3 <= split_rhat(np.stack([c, c])) <= 1.01


def test_rhat_separated_chains():
    rng = np.random.default_rng(2)
    a = 0 + 1e-3 * rng.standard_normal(500)
    b = 10 + 1e-3 * rng.standard_normal(500)
    x = np.stack([a, b])
    # the raw variance ratio is huge; rank normalization caps it: chain means
    # of half-normal scores are +-0.798 with within-variance 1 - 2/pi, which
    # gives sqrt(1 + 0.849 / 0.363) ~ 1.83
    assert split_rhat(x) == pytest.approx(1.829, abs=2e-3)
    assert split_rhat(x) == pytest.approx(oracles.rhat(x), abs=1e-12)


def test_constant_draws():
    x = np.full((2, 100), 3.0)
    assert split_rhat(x) == 1.0 and is_degenerate(x)
    assert ess_bulk(x) == 200


def test_ess_white_noise():
    rng = np.random.default_rng(3)
    ess = ess_bulk(rng.standard_normal((2, 2000)))
    assert 3200 <= ess <= 4800


def test_ess_ar1():
    rng = np.random.default_rng(4)
    x = ar1(rng, 0.9, (2, 5000))
    expected = x.size * 0.1 / 1.9
    assert expected / 1.5 <= ess_bulk(x) <= expected * 1.5


def test_input_validation():
    with pytest.raises(ValueError):
        split_rhat(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        ess_bulk(np.zeros((2, 2, 2)))


@pytest.mark.parametrize("idx", range(10))
def test_rhat_matches_oracle(idx):
    x = diagnostic_fixtures()[idx]
    assert abs(split_rhat(x) - oracles.rhat(x)) < 1e-8


@pytest.mark.parametrize("idx", range(10))
def test_ess_matches_oracle(idx):
    x = diagnostic_fixtures()[idx]
    assert abs(ess_bulk(x) - oracles.ess(x)) < 1e-8 * max(1.0, oracles.ess(x))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_rhat_ess_invariant_to_monotone_maps(seed):
    x = np.random.default_rng(seed).standard_normal((2, 60))
    for f in (np.exp, lambda v: v ** 3 + 2 * v, lambda v: -1.0 / (10 + v)):
        assert split_rhat(f(x)) == split_rhat(x)
        assert ess_bulk(f(x)) == ess_bulk(x)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(0.0, 0.9))
def test_ess_bounded(seed, phi):
    x = ar1(np.random.default_rng(seed), phi, (2, 400))
    ess = ess_bulk(x)
    assert 0 < ess <= 1.5 * x.size


def test_ess_white_noise_floor():
    for seed in range(10):
        x = np.random.default_rng(seed).standard_normal((2, 1000))
        assert ess_bulk(x) >= 0.7 * x.size


# -- HDI -----------------------------------------------------------------------


def test_hdi_uniform_grid():
    assert hdi(np.arange(1, 101), 0.94) == (1, 94)


def test_hdi_uniform_width():
    x = np.random.default_rng(5).uniform(size=100_000)
    lo, hi = hdi(x, 0.94)
    assert abs((hi - lo) - 0.94) < 0.01


def test_hdi_normal_symmetric():
    x = np.random.default_rng(6).standard_normal(100_000)
    lo, hi = hdi(x, 0.94)
    # 94% central interval of N(0,1) is +-1.8808
    assert abs(lo + 1.8808) < 0.05 and abs(hi - 1.8808) < 0.05


@pytest.mark.parametrize("prob", [0.0, 1.0, -0.1, 1.5])
def test_hdi_bad_prob(prob):
    with pytest.raises(ValueError):
        hdi(np.arange(20), prob)


def test_hdi_too_few():
    with pytest.raises(ValueError):
        hdi(np.arange(5))


@pytest.mark.parametrize("seed", range(8))
def test_hdi_matches_exhaustive(seed):
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 30, size=rng.integers(10, 60))
    for prob in (0.5, 0.8, 0.94):
        assert hdi(x, prob) == oracles.hdi_exhaustive(list(x), prob)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=10, max_size=200), st.floats(0.05, 0.9), st.floats(0.01, 0.09))
def test_hdi_width_monotone(values, p, dp):
    lo1, hi1 = hdi(values, p)
    lo2, hi2 = hdi(values, p + dp)
    assert hi1 - lo1 <= hi2 - lo2
    assert lo1 <= hi1


# -- summary -------------------------------------------------------------------


def test_summary_table(nb_trace):
    rows = summary_table(nb_trace)
    assert [r.name for r in rows] == ["beta0", "beta1", "beta2", "alpha"]
    assert rows[2].mean == np.mean(nb_trace.pooled("beta2"))
    for r in rows:
        assert all(np.isfinite([r.mean, r.sd, r.hdi_low, r.hdi_high, r.rhat, r.ess_bulk]))
        assert r.hdi_low <= r.mean <= r.hdi_high
        # 250-draw halves: R-hat can undershoot 1 by up to 1 - sqrt(249/250)
        assert np.sqrt(249 / 250) - 1e-6 <= r.rhat <= 1.01
        assert 0 < r.ess_bulk <= 1.5 * nb_trace.draws[:, :, 0].size
    # diagnostics for alpha come from log_alpha
    assert rows[3].rhat == split_rhat(nb_trace.get("log_alpha"))


def test_summary_chain_order_invariant(nb_trace):
    from dataclasses import replace

    flipped = replace(nb_trace, draws=nb_trace.draws[::-1], unconstrained=nb_trace.unconstrained[::-1])
    for a, b in zip(summary_table(nb_trace), summary_table(flipped)):
        for f in ("mean", "sd", "hdi_low", "hdi_high", "rhat", "ess_bulk"):
            assert getattr(a, f) == pytest.approx(getattr(b, f), rel=1e-12)


def test_format_summary_order(nb_trace):
    text = format_summary(summary_table(nb_trace))
    lines = text.splitlines()
    assert "hdi_3%" in lines[0] and "hdi_97%" in lines[0]
    assert [ln.split()[0] for ln in lines[1:]] == ["beta0", "beta1", "beta2", "alpha"]
