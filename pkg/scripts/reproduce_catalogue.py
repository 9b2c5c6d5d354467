"""Build the default semantic catalogue and print the per-intervention summary.

    python3 scripts/reproduce_catalogue.py --out results --trials 100000
"""

import argparse
import time
from dataclasses import replace
from pathlib import Path

from semantic_dds.catalogue import run_catalogue
from semantic_dds.config import RunConfig, parse_config


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--trials", type=int)
    ap.add_argument("--seed", type=int)
    args = ap.parse_args()

    config = parse_config(args.config.read_text()) if args.config else RunConfig()
    sim = config.simulation
    if args.trials:
        sim = replace(sim, trials=args.trials)
    if args.seed is not None:
        sim = replace(sim, seed=args.seed)
    config = replace(config, simulation=sim)

    t0 = time.perf_counter()
    catalogue, paths = run_catalogue(config, args.out)
    print(f"{len(paths)} files in {args.out} ({time.perf_counter() - t0:.0f} s)\n")

    ref = catalogue.metadata["reference_targets"]
    print(f"{'param':>7} {'S_eps':>8} {'ref':>7} {'critical':>11} {'ref':>9}  meaningless range")
    for e in catalogue.entries:
        r, t = e.result, ref[e.spec.parameter]
        rng = "-" if r.meaningless_range is None else "%.4g .. %.4g" % r.meaningless_range
        print(f"{e.spec.parameter:>7} {r.s_epsilon:8.3f} {t['s_epsilon_target']:7.3f} "
              f"{r.critical_value:11.4g} {t['critical_value_target']:9.4g}  {rng}")

    print("\nS_eps(tau) [bit/s]")
    for parameter, rows in catalogue.temporal_s_epsilon().items():
        print(f"{parameter:>7} " + " ".join(f"{s:.2f}" for _, s in rows))


if __name__ == "__main__":
    main()
