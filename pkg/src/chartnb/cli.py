"""Command-line pipeline: simulate, aggregate, fit, ppc.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 sampler
failure, 4 convergence gate failure (some R-hat above 1.05).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .aggregate import aggregate_tracks, read_track_csv, summarize, write_track_csv
from .analysis import derived_summary, histogram_export, posterior_predictive, ppc_compare
from .diagnostics import DEFAULT_HDI_PROB, format_summary, summary_table
from .ingest import ChartFormatError, date_span_days, read_chart_csv, write_chart_csv
from .model import NegBinomialTarget, PoissonTarget, RegressionDataset
from .nuts import SamplerConfig, SamplerError, Trace, run_chains
from .synth import GeneratorSpec, generate_daily_chart, generate_tracks

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_SAMPLER, EXIT_GATE = 0, 1, 2, 3, 4
RHAT_GATE = 1.05
FIT_FORMAT = "chartnb.fit/1"
PPC_FORMAT = "chartnb.ppc/1"
SEED_ENV = "CHARTNB_SEED"

logger = logging.getLogger("chartnb")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "20240101"))


def _dump(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _float_list(a: np.ndarray) -> list:
    return [float(v) for v in np.asarray(a).reshape(-1)]


# -- subcommands ---------------------------------------------------------------


def cmd_simulate(args) -> int:
    try:
        spec = GeneratorSpec(
            n_tracks=args.n_tracks,
            beta=(args.beta0, args.beta1, args.beta2),
            alpha=args.alpha,
            collab_prob=args.collab_prob,
            seed=args.seed,
            truncate=not args.no_truncate,
        )
    except ValueError as exc:
        print(f"invalid generator spec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    synthetic = generate_tracks(spec)
    if args.tracks_output:
        with open(args.tracks_output, "w", newline="", encoding="utf-8") as fh:
            write_track_csv(synthetic.records, fh)
    if args.output:
        try:
            rows = generate_daily_chart(synthetic.records, year=args.year, seed=args.seed)
        except ValueError as exc:
            print(f"cannot build daily chart: {exc}", file=sys.stderr)
            return EXIT_DATA
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            write_chart_csv(rows, fh)
    print(f"simulated {len(synthetic.records)} tracks "
          f"(redrawn {synthetic.n_redrawn}, clamped {synthetic.n_clamped})")
    return EXIT_OK


def cmd_aggregate(args) -> int:
    try:
        if args.input in (None, "-"):
            from .ingest import parse_chart_csv
            rows, report = parse_chart_csv(sys.stdin, strict=args.strict)
        else:
            rows, report = read_chart_csv(args.input, strict=args.strict)
    except (ChartFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if not rows:
        print("error: no rows", file=sys.stderr)
        return EXIT_DATA
    records = aggregate_tracks(rows)
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            write_track_csv(records, fh)
    print(f"rows accepted {report.n_rows}, rejected {report.n_rejected_rows}, "
          f"tracks {report.n_unique_tracks}, dates {report.date_min}..{report.date_max} "
          f"({date_span_days(report)} days)")
    print(summarize(records).format_table())
    return EXIT_OK


def _load_dataset(path: str) -> RegressionDataset:
    records = read_track_csv(path)
    if not records:
        raise ValueError("no rows")
    return RegressionDataset.from_records(records)


def cmd_fit(args) -> int:
    try:
        data = _load_dataset(args.input)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        config = SamplerConfig(
            chains=args.chains, warmup_draws=args.warmup, post_warmup_draws=args.draws,
            target_accept=args.target_accept, max_tree_depth=args.max_tree_depth, seed=args.seed,
        )
        if not 0 < args.hdi_prob < 1:
            raise ValueError("--hdi-prob must lie in (0, 1)")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    target = NegBinomialTarget(data) if args.model == "negative-binomial" else PoissonTarget(data)
    try:
        trace = run_chains(target, config, n_jobs=args.jobs)
    except SamplerError as exc:
        print(f"sampler failure: {exc}", file=sys.stderr)
        return EXIT_SAMPLER

    ref = args.ref_log_streams
    if ref is None:
        ref = float(np.median(data.x_log_streams))
    rows = summary_table(trace, hdi_prob=args.hdi_prob)
    derived = derived_summary(trace, ref, prob=args.interval_prob)
    max_rhat = max(r.rhat for r in rows)
    passed = bool(max_rhat <= RHAT_GATE)

    doc = {
        "format": FIT_FORMAT,
        "version": __version__,
        "config": {
            "input": args.input, "model": args.model, "chains": config.chains,
            "warmup": config.warmup_draws, "draws": config.post_warmup_draws,
            "target_accept": config.target_accept, "max_tree_depth": config.max_tree_depth,
            "seed": config.seed, "hdi_prob": args.hdi_prob, "interval_prob": args.interval_prob,
            "ref_log_streams": ref, "gate": not args.no_gate,
        },
        "data": {
            "n_tracks": len(data),
            "x_log_streams_mean": float(np.mean(data.x_log_streams)),
            "x_log_streams_median": float(np.median(data.x_log_streams)),
            "collab_rate": float(np.mean(data.x_collab)),
        },
        "summary": [r.as_dict() for r in rows],
        "derived": derived.as_dict(),
        "sampler": {
            "step_size": _float_list(trace.step_size),
            "inv_mass": [_float_list(m) for m in trace.inv_mass],
            "divergences": [int(v) for v in trace.divergences],
            "warmup_divergences": [int(v) for v in trace.warmup_divergences],
            "mean_accept_stat": [float(v) for v in trace.accept_stat.mean(axis=1)],
            "mean_tree_depth": [float(v) for v in trace.tree_depth.mean(axis=1)],
            "max_tree_depth_hits": [int(v) for v in (trace.tree_depth >= config.max_tree_depth).sum(axis=1)],
            "overflow_rejections": [int(v) for v in trace.n_clamped],
        },
        "gate": {"rhat_threshold": RHAT_GATE, "max_rhat": max_rhat, "passed": passed},
        "draws": {name: [_float_list(c) for c in trace.get(name)] for name in trace.param_names},
    }
    _dump(doc, args.output)

    text = format_summary(rows, args.hdi_prob)
    d = derived
    text += (
        f"\n\nrate ratio exp(beta1): median {d.rate_ratio.median:.3f}, "
        f"{100 * d.rate_ratio.prob:g}% interval [{d.rate_ratio.low:.3f}, {d.rate_ratio.high:.3f}]"
        f"\nP(beta1 > 0) = {d.prob_beta1_positive:.4f}"
        f"\nexpected days at log streams {ref:.2f}: solo {d.mu_solo.median:.1f} "
        f"[{d.mu_solo.low:.1f}, {d.mu_solo.high:.1f}], collab {d.mu_collab.median:.1f} "
        f"[{d.mu_collab.low:.1f}, {d.mu_collab.high:.1f}]\n"
    )
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            fh.write(text)
    # stdout carries the JSON document when --output is '-'
    (sys.stderr if args.output in (None, "-") else sys.stdout).write(text)

    if not passed and not args.no_gate:
        print(f"convergence gate failed: max R-hat {max_rhat:.3f} > {RHAT_GATE}", file=sys.stderr)
        return EXIT_GATE
    return EXIT_OK


def load_fit(path: str) -> tuple[dict, Trace]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != FIT_FORMAT:
        raise ValueError(f"{path} is not a {FIT_FORMAT} document")
    return doc, Trace.from_arrays({k: np.array(v) for k, v in doc["draws"].items()})


def cmd_ppc(args) -> int:
    try:
        fit_doc, trace = load_fit(args.fit)
        data = _load_dataset(args.input)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.n_rep < 1:
        print("error: --n-rep must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    reps = posterior_predictive(trace, data, args.n_rep, seed=args.seed)
    report = ppc_compare(data.y, reps, data.x_collab)
    doc = {
        "format": PPC_FORMAT,
        "version": __version__,
        "config": {"fit": args.fit, "input": args.input, "n_rep": args.n_rep, "seed": args.seed,
                   "model": fit_doc["config"]["model"]},
        "report": report.as_dict(),
        "histogram": histogram_export(data.y, reps),
    }
    _dump(doc, args.output)
    out = sys.stderr if args.output in (None, "-") else sys.stdout
    out.write(f"model {fit_doc['config']['model']}: variance ratio {report.variance_ratio:.3f} "
              f"(marginal {report.marginal_variance_ratio:.3f})\n")
    for name, check in report.overall.items():
        out.write(f"  {name:<15} observed {check.observed:>12.3f}  replicated "
                  f"[{check.replicated_low:.3f}, {check.replicated_high:.3f}]  p = {check.p_value:.3f}\n")
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chartnb", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="generate a synthetic chart year")
    p.add_argument("--output", help="daily chart CSV to write")
    p.add_argument("--tracks-output", help="track-level CSV to write")
    p.add_argument("--n-tracks", type=int, default=1335)
    p.add_argument("--beta0", type=float, default=-8.126)
    p.add_argument("--beta1", type=float, default=-0.074)
    p.add_argument("--beta2", type=float, default=0.859)
    p.add_argument("--alpha", type=float, default=5.037)
    p.add_argument("--collab-prob", type=float, default=0.456)
    p.add_argument("--year", type=int, default=2024)
    p.add_argument("--no-truncate", action="store_true",
                   help="keep raw model draws (zeros, >365) instead of redrawing")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("aggregate", help="daily chart CSV -> track-level CSV")
    p.add_argument("--input", help="daily chart CSV (default: stdin)")
    p.add_argument("--output", help="track-level CSV to write")
    p.add_argument("--strict", action="store_true", help="fail on the first invalid row")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("fit", help="fit the regression with NUTS")
    p.add_argument("--input", required=True, help="track-level CSV")
    p.add_argument("--output", default="-", help="fit document (JSON); '-' for stdout")
    p.add_argument("--summary", help="also write the text summary here")
    p.add_argument("--model", choices=("negative-binomial", "poisson"), default="negative-binomial")
    p.add_argument("--chains", type=int, default=2)
    p.add_argument("--warmup", type=int, default=2000)
    p.add_argument("--draws", type=int, default=2000)
    p.add_argument("--target-accept", type=float, default=0.9)
    p.add_argument("--max-tree-depth", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--hdi-prob", type=float, default=DEFAULT_HDI_PROB)
    p.add_argument("--interval-prob", type=float, default=0.95,
                   help="equal-tailed interval mass for derived quantities")
    p.add_argument("--ref-log-streams", type=float, default=None,
                   help="reference log total streams (default: dataset median)")
    p.add_argument("--jobs", type=int, default=1, help="run chains in this many processes")
    p.add_argument("--no-gate", action="store_true", help="exit 0 even if R-hat > 1.05")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("ppc", help="posterior predictive check for a fit")
    p.add_argument("--fit", required=True, help="fit document from 'chartnb fit'")
    p.add_argument("--input", required=True, help="track-level CSV used for the fit")
    p.add_argument("--output", default="-", help="PPC document (JSON); '-' for stdout")
    p.add_argument("--n-rep", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_ppc)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        try:
            args.seed = _default_seed()
        except ValueError:
            print(f"error: {SEED_ENV} must be an integer", file=sys.stderr)
            return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
