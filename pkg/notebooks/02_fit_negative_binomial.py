# Fit the negative binomial regression to a synthetic year at the default
# protocol (2 chains, 2000 warmup + 2000 draws, target acceptance 0.9) and
# read off the quantities of interest.

import numpy as np

from chartnb.analysis import derived_summary
from chartnb.diagnostics import format_summary, summary_table
from chartnb.model import NegBinomialTarget
from chartnb.nuts import SamplerConfig, run_chains
from chartnb.synth import GeneratorSpec, generate_tracks

truth = GeneratorSpec(alpha=5.0, truncate=False, seed=3)
data = generate_tracks(truth).dataset
print(f"true beta {truth.beta}, alpha {truth.alpha}")

trace = run_chains(NegBinomialTarget(data), SamplerConfig(seed=3))
print(format_summary(summary_table(trace)))
print(f"divergences {trace.divergences.tolist()}, step sizes {np.round(trace.step_size, 3).tolist()}, "
      f"mean accept {trace.accept_stat.mean():.3f}")

ref = float(np.median(data.x_log_streams))
d = derived_summary(trace, ref)
print()
print(f"rate ratio exp(beta1): {d.rate_ratio.median:.3f} [{d.rate_ratio.low:.3f}, {d.rate_ratio.high:.3f}]")
print(f"P(beta1 > 0) = {d.prob_beta1_positive:.3f}")
print(f"typical track (log streams {ref:.2f}): solo {d.mu_solo.median:.1f} days, "
      f"collab {d.mu_collab.median:.1f} days")
