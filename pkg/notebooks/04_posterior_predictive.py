# Posterior predictive checks: negative binomial against Poisson on
# over-dispersed data.

import numpy as np

from chartnb.analysis import histogram_export, posterior_predictive, ppc_compare
from chartnb.model import NegBinomialTarget, PoissonTarget
from chartnb.nuts import SamplerConfig, run_chains
from chartnb.synth import GeneratorSpec, generate_tracks

data = generate_tracks(GeneratorSpec(alpha=5.0, truncate=False, seed=4)).dataset
config = SamplerConfig(warmup_draws=1000, post_warmup_draws=1000, seed=4)

for name, target in (("negative binomial", NegBinomialTarget(data)), ("poisson", PoissonTarget(data))):
    trace = run_chains(target, config)
    reps = posterior_predictive(trace, data, n_rep=500, seed=4)
    report = ppc_compare(data.y, reps, data.x_collab)
    print(f"{name}: variance ratio {report.variance_ratio:.3f}")
    for stat, check in report.overall.items():
        print(f"  {stat:<15} observed {check.observed:9.2f}   replicated 90% "
              f"[{check.replicated_low:9.2f}, {check.replicated_high:9.2f}]   p {check.p_value:.3f}")

    hist = histogram_export(data.y, reps)
    rep_mean = np.mean(hist["replicates"], axis=0)
    print("  first bins (0-10, 10-20, ...): observed", hist["observed"][:6],
          "replicated", np.round(rep_mean[:6]).astype(int).tolist())
