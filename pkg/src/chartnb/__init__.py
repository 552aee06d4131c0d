"""Bayesian negative binomial regression of chart persistence.

Daily chart CSV -> track-level records -> NB regression of days on chart on
collaboration status and log total streams, sampled with a from-scratch
No-U-Turn Sampler -> posterior summaries, convergence diagnostics and
posterior predictive checks.
"""

__version__ = "0.1.0"

from .aggregate import TrackRecord, aggregate_tracks, classify_collaboration, summarize
from .analysis import (
    derived_summary,
    expected_days,
    model_compare,
    posterior_predictive,
    ppc_compare,
    prob_positive,
    rate_ratio,
)
from .diagnostics import ess_bulk, hdi, split_rhat, summary_table
from .ingest import ChartRow, parse_chart_csv, read_chart_csv
from .model import (
    NegBinomialTarget,
    PoissonTarget,
    RegressionDataset,
    grad_log_posterior,
    log_posterior,
    nb_log_pmf,
)
from .nuts import SamplerConfig, Trace, run_chains
from .synth import GeneratorSpec, generate_daily_chart, generate_tracks

__all__ = [
    "ChartRow", "GeneratorSpec", "NegBinomialTarget", "PoissonTarget", "RegressionDataset",
    "SamplerConfig", "Trace", "TrackRecord", "aggregate_tracks", "classify_collaboration",
    "derived_summary", "ess_bulk", "expected_days", "generate_daily_chart", "generate_tracks",
    "grad_log_posterior", "hdi", "log_posterior", "model_compare", "nb_log_pmf", "parse_chart_csv",
    "posterior_predictive", "ppc_compare", "prob_positive", "rate_ratio", "read_chart_csv",
    "run_chains", "split_rhat", "summarize", "summary_table",
]
