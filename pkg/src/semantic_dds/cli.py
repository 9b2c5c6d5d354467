"""Command-line entry point: ``semantic-dds <command> [options]``.

Exit codes: 0 success, 1 validation failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

COMMANDS = ("impulse", "capacity", "sweep", "semantic", "validate", "catalogue")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="run configuration file")
    common.add_argument("--seed", type=int, help="master random seed (unsigned 64-bit)")
    common.add_argument("--threads", type=int, help="simulation threads; never changes results")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--format", action="append", choices=("csv", "json", "svg"),
                        help="output format (repeatable)")

    parser = argparse.ArgumentParser(prog="semantic-dds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("impulse", parents=[common], help="simulate P_i(t) and emit t,p_i,stderr")
    cap = sub.add_parser("capacity", parents=[common], help="tabulate p1* and the Z-channel capacity")
    cap.add_argument("--mu", type=float, action="append", help="crossover probability (repeatable)")
    cap.add_argument("--p-i", dest="p_i", type=float, help="detection probability; N from lambda*tau")
    sw = sub.add_parser("sweep", parents=[common], help="run one intervention sweep")
    sw.add_argument("--param", required=True, choices=("lambda", "k_d", "k_f", "k_b", "k_i"))
    sem = sub.add_parser("semantic", parents=[common], help="temporal profile of S_eps(tau)")
    sem.add_argument("--param", action="append", choices=("lambda", "k_d", "k_f", "k_b", "k_i"))
    sub.add_parser("validate", parents=[common], help="run all oracle comparisons")
    sub.add_parser("catalogue", parents=[common], help="full run: sweeps, semantics, plots")
    return parser


def _prepare_threads(threads: int | None) -> None:
    # numba sizes its pool at import time, so widen it before anything imports numba
    if threads is not None and threads > 0 and "numba" not in sys.modules:
        current = int(os.environ.get("NUMBA_NUM_THREADS", "0") or 0)
        os.environ["NUMBA_NUM_THREADS"] = str(max(current, threads, os.cpu_count() or 1))


def _load_config(args):
    from dataclasses import replace

    from .config import RunConfig, parse_config

    if args.config is not None:
        config = parse_config(args.config.read_text(encoding="utf-8"))
    else:
        config = RunConfig()
    if args.seed is not None:
        config = replace(config, simulation=replace(config.simulation, seed=args.seed))
    if args.format:
        config = replace(config, formats=tuple(dict.fromkeys(args.format)))
    return config


def _emit(text: str, out: Path | None, name: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text, encoding="utf-8")
    print(f"wrote {out / name}", file=sys.stderr)


def _cmd_impulse(args, config) -> int:
    from .catalogue import impulse_csv
    from .reactive_channel import simulate_impulse

    response = simulate_impulse(config.system, config.settings())
    if config.formats == ("json",):
        doc = {"t": response.times.tolist(), "p_i": response.p_i.tolist(),
               "stderr": response.stderr.tolist(), "trials": response.trials}
        _emit(json.dumps(doc, indent=2) + "\n", args.out, "impulse.json")
    else:
        _emit(impulse_csv(response), args.out, "impulse.csv")
    return 0


def _cmd_capacity(args, config) -> int:
    from .catalogue import _csv_text
    from .pharmacodynamics import particle_budget
    from .pic_information import crossover_probability, optimal_input_full
    from .reactive_channel import simulate_impulse

    params = config.system
    if args.mu:
        mus = args.mu
    else:
        p_i = args.p_i
        if p_i is None:
            settings = config.settings()
            p_i = simulate_impulse(params, settings).probability_at(params.tau)
        mus = [crossover_probability(p_i, particle_budget(params.lam, params.tau))]
    rows = []
    for mu in mus:
        res = optimal_input_full(mu, params.tau)
        rows.append((mu, res.p1_star, res.mutual_info_bits, res.capacity))
    _emit(_csv_text(("mu_p", "p1_star", "mutual_info_bits", "capacity_bps"), rows),
          args.out, "capacity.csv")
    return 0


def _spec_for(config, parameter):
    from .interventions import DEFAULT_INTERVENTIONS

    for spec in (*config.interventions, *DEFAULT_INTERVENTIONS):
        if spec.parameter == parameter:
            return spec
    raise KeyError(parameter)


def _cmd_sweep(args, config) -> int:
    from .catalogue import sweep_csv
    from .interventions import extract_semantic_information, sweep

    spec = _spec_for(config, args.param)
    curve = sweep(spec, config.system, config.simulation)
    result = extract_semantic_information(curve, config.epsilon)
    print(f"{spec.parameter}: S_eps = {result.s_epsilon:.4f} bit/s at critical value "
          f"{result.critical_value:.6g} (admissible points: {result.admissible_set_size})",
          file=sys.stderr)
    if "csv" in config.formats or args.out is None:
        _emit(sweep_csv(curve), args.out, f"sweep_{spec.parameter}.csv")
    if args.out is not None and "svg" in config.formats:
        from .plotting import plot_sweep

        plot_sweep(curve, result, args.out / f"sweep_{spec.parameter}.svg")
    return 0


def _cmd_semantic(args, config) -> int:
    from .catalogue import temporal_csv
    from .interventions import simulate_family, temporal_from_impulses

    specs = [_spec_for(config, p) for p in args.param] if args.param else list(config.interventions)
    temporal = {}
    for spec in specs:
        impulses = simulate_family(spec, config.system, config.simulation, config.tau_grid)
        temporal[spec.parameter] = temporal_from_impulses(spec, config.system, impulses,
                                                          config.tau_grid)
    _emit(temporal_csv(temporal), args.out, "temporal_profile.csv")
    if args.out is not None and "svg" in config.formats:
        from .plotting import plot_temporal

        plot_temporal({p: [(t, r.s_epsilon) for t, r in rows] for p, rows in temporal.items()},
                      args.out / "temporal_profile.svg")
    return 0


def _cmd_validate(args, config) -> int:
    from .validation import run_all

    results = run_all(config.simulation)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<26} {r.detail}  [{r.seconds:.1f} s]")
    return 0 if all(r.passed for r in results) else 1


def _cmd_catalogue(args, config) -> int:
    from .catalogue import run_catalogue

    catalogue, paths = run_catalogue(config, out_dir=args.out)
    for e in catalogue.entries:
        r = e.result
        print(f"{e.spec.parameter:>6}: S_eps = {r.s_epsilon:.4f} bit/s, critical value "
              f"{r.critical_value:.6g}, v_min = {r.v_min:.3g}")
    print(f"wrote {len(paths)} files to {paths[0].parent if paths else args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be positive")
    _prepare_threads(args.threads)

    from .config import ConfigError
    from .reactive_channel import set_threads

    try:
        config = _load_config(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"semantic-dds: error: {exc}", file=sys.stderr)
        return 2
    if args.threads is not None:
        set_threads(args.threads)

    handler = globals()[f"_cmd_{args.command}"]
    try:
        return handler(args, config)
    except OSError as exc:
        print(f"semantic-dds: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
