#!/usr/bin/env python3
"""Recovery experiment: how well does the pipeline estimate a planted slope?

Sweeps the planted vote_margin -> mean_sentiment slope across a grid and,
for several seeds each, reports the mean and spread of the recovered OLS
coefficient. Everything runs in temporary directories.

Usage: python3 scripts/recovery_sweep.py [--seeds N] [--tweets N] [--counties N]
"""

import argparse
import statistics
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from moralmap import synthgen
from moralmap.config import PipelineConfig
from moralmap.inference import ModelSpec, run_inference
from moralmap.pipeline import build
from moralmap.snapshot import load_snapshot
from moralmap.synthgen import PlantedEffect, SynthSpec


def recovered_slope(spec: SynthSpec, workdir: Path) -> float:
    synthgen.generate(spec, workdir / "inputs")
    cfg_path = workdir / "config.yaml"
    cfg_path.write_text(
        "paths:\n"
        "  corpus: inputs/corpus.csv\n"
        "  boundaries: inputs/counties.geojson\n"
        "  census: inputs/census.csv\n"
        "  elections: inputs/elections.csv\n"
        "  mask: inputs/mask.csv\n"
        "  covid: inputs/covid.csv\n"
        "  output: dataset\n"
    )
    result = build(PipelineConfig.load(cfg_path))
    snap = load_snapshot(result.dataset_dir)
    fit = run_inference(ModelSpec("mean_sentiment", ("vote_margin",)),
                        snap.inference_rows)
    return fit.coefficients[1]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--tweets", type=int, default=3000)
    ap.add_argument("--counties", type=int, default=150)
    args = ap.parse_args()

    grid = [-0.8, -0.4, 0.0, 0.4, 0.8]
    print(f"{'planted':>8} {'mean':>8} {'stdev':>8} {'bias':>8}   "
          f"({args.seeds} seeds, {args.tweets} tweets, {args.counties} counties)")
    for slope in grid:
        estimates = []
        for seed in range(1, args.seeds + 1):
            spec = SynthSpec(
                seed=seed, n_tweets=args.tweets, n_counties=args.counties,
                planted=[PlantedEffect("vote_margin", "mean_sentiment", slope)],
            )
            with tempfile.TemporaryDirectory() as tmp:
                estimates.append(recovered_slope(spec, Path(tmp)))
        mean = statistics.fmean(estimates)
        sd = statistics.stdev(estimates) if len(estimates) > 1 else 0.0
        print(f"{slope:>8.2f} {mean:>8.4f} {sd:>8.4f} {mean - slope:>8.4f}")


if __name__ == "__main__":
    main()
