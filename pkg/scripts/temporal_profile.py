"""S_eps(tau) for chosen interventions on a custom tau grid, plotted to SVG.

    python3 scripts/temporal_profile.py --param lambda --param k_i --step 0.5e-3
"""

import argparse
from pathlib import Path

import numpy as np

from semantic_dds.interventions import DEFAULT_INTERVENTIONS, temporal_profile
from semantic_dds.plotting import plot_temporal
from semantic_dds.reactive_channel import SimulationSettings, SystemParameters


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--param", action="append", choices=[s.parameter for s in DEFAULT_INTERVENTIONS])
    ap.add_argument("--start", type=float, default=0.010)
    ap.add_argument("--stop", type=float, default=0.025)
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--trials", type=int, default=20_000)
    ap.add_argument("--out", type=Path, default=Path("temporal_profile.svg"))
    args = ap.parse_args()

    # N = floor(lambda tau) is piecewise constant, so steps below 1/lambda give a saw-tooth
    taus = np.round(np.arange(args.start, args.stop + args.step / 2, args.step), 12)
    wanted = set(args.param or [s.parameter for s in DEFAULT_INTERVENTIONS])
    specs = [s for s in DEFAULT_INTERVENTIONS if s.parameter in wanted]
    profile = temporal_profile(specs, SystemParameters(), SimulationSettings(trials=args.trials), taus)
    for parameter, rows in profile.items():
        print(f"{parameter:>7} " + " ".join(f"{s:.2f}" for _, s in rows))
    plot_temporal(profile, args.out)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
