"""Full pipeline run: every sweep, semantic extraction and temporal profile, written to disk."""

from __future__ import annotations

import csv
import io
import json
import os
import platform
import shutil
import tempfile
import time
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numba
import numpy as np
import scipy

from . import __version__
from .config import RunConfig
from .interventions import (
    DEFAULT_INTERVENTIONS,
    InterventionSpec,
    SemanticResult,
    SweepCurve,
    curve_from_impulses,
    extract_semantic_information,
    simulate_family,
    temporal_from_impulses,
)
from .reactive_channel import SystemParameters, set_threads

__all__ = [
    "SWEEP_HEADER",
    "TEMPORAL_HEADER",
    "IMPULSE_HEADER",
    "REFERENCE_TARGETS",
    "CatalogueEntry",
    "SemanticCatalogue",
    "build_catalogue",
    "write_catalogue",
    "run_catalogue",
    "sweep_csv",
    "temporal_csv",
    "impulse_csv",
]

SWEEP_HEADER = ("param", "value", "p_i", "mu_p", "c_int", "viability", "capacity_bps")
TEMPORAL_HEADER = ("param", "tau", "s_epsilon", "critical_value", "v_min", "admissible_set_size")
IMPULSE_HEADER = ("t", "p_i", "stderr")

# Published critical values and S_eps (bit/s) for the reference scenario at tau = 20 ms.
REFERENCE_TARGETS = {
    "lambda": (2909.0, 2.135),
    "k_d": (2343.0, 2.126),
    "k_f": (2.9e-14, 2.071),
    "k_b": (6212.0, 2.077),
    "k_i": (3222.0, 2.072),
}
REFERENCE_TOLERANCE = 0.20


@dataclass(frozen=True)
class CatalogueEntry:
    spec: InterventionSpec
    curve: SweepCurve
    result: SemanticResult


@dataclass
class SemanticCatalogue:
    entries: list[CatalogueEntry]
    temporal: dict[str, list[tuple[float, SemanticResult]]]
    metadata: dict = field(default_factory=dict)

    def entry(self, parameter: str) -> CatalogueEntry:
        for e in self.entries:
            if e.spec.parameter == parameter:
                return e
        raise KeyError(parameter)

    def temporal_s_epsilon(self) -> dict[str, list[tuple[float, float]]]:
        return {p: [(t, r.s_epsilon) for t, r in rows] for p, rows in self.temporal.items()}

    def to_dict(self) -> dict:
        return {
            "metadata": self.metadata,
            "interventions": [
                {
                    "spec": asdict(e.spec),
                    "tau": e.curve.tau,
                    "curve": [asdict(p) for p in e.curve.points],
                    "semantic": _result_dict(e.result),
                }
                for e in self.entries
            ],
            "temporal_profiles": {
                p: [{"tau": t, **_result_dict(r)} for t, r in rows]
                for p, rows in self.temporal.items()
            },
        }


def _result_dict(result: SemanticResult) -> dict:
    d = asdict(result)
    if d["meaningless_range"] is not None:
        d["meaningless_range"] = list(d["meaningless_range"])
    return d


def _reference_comparison(config: RunConfig, entries: list[CatalogueEntry]) -> dict:
    defaults = {s.parameter: s for s in DEFAULT_INTERVENTIONS}
    reference_system = replace(SystemParameters(), epsilon=config.system.epsilon) == config.system
    out = {}
    for e in entries:
        crit_ref, s_ref = REFERENCE_TARGETS[e.spec.parameter]
        crit_dev = (e.result.critical_value - crit_ref) / crit_ref
        s_dev = (e.result.s_epsilon - s_ref) / s_ref
        out[e.spec.parameter] = {
            "applicable": bool(reference_system and e.spec == defaults[e.spec.parameter]),
            "critical_value_target": crit_ref,
            "s_epsilon_target": s_ref,
            "critical_value_observed": e.result.critical_value,
            "s_epsilon_observed": e.result.s_epsilon,
            "critical_value_relative_deviation": crit_dev,
            "s_epsilon_relative_deviation": s_dev,
            "within_tolerance": bool(
                abs(crit_dev) <= REFERENCE_TOLERANCE and abs(s_dev) <= REFERENCE_TOLERANCE
            ),
        }
    return out


def build_catalogue(config: RunConfig) -> SemanticCatalogue:
    """Simulate each intervention family once and derive sweep + temporal results from it."""
    started = time.perf_counter()
    params = config.system
    settings = config.simulation
    taus = sorted({params.tau, *config.tau_grid})

    entries = []
    temporal = {}
    for spec in config.interventions:
        impulses = simulate_family(spec, params, settings, taus)
        curve = curve_from_impulses(spec, params, impulses, params.tau)
        entries.append(CatalogueEntry(spec, curve, extract_semantic_information(curve, params.epsilon)))
        temporal[spec.parameter] = temporal_from_impulses(spec, params, impulses, config.tau_grid)

    metadata = {
        "seed": int(settings.seed),
        "trials": int(settings.trials),
        "dt": settings.dt,
        "epsilon": params.epsilon,
        "system": {k: getattr(params, k) for k in params.__dataclass_fields__},
        "tau_grid": list(config.tau_grid),
        "versions": {
            "semantic_dds": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "numba": numba.__version__,
            "python": platform.python_version(),
        },
        "reference_targets": _reference_comparison(config, entries),
        "execution": {
            "started_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "elapsed_seconds": round(time.perf_counter() - started, 3),
            "threads": numba.get_num_threads(),
        },
    }
    return SemanticCatalogue(entries=entries, temporal=temporal, metadata=metadata)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([cell if isinstance(cell, str) else _fmt(cell) for cell in row])
    return buf.getvalue()


def sweep_csv(curve: SweepCurve) -> str:
    name = curve.spec.parameter
    return _csv_text(
        SWEEP_HEADER,
        ((name, p.value, p.p_i, p.mu_p, p.c_int, p.viability, p.capacity) for p in curve.points),
    )


def temporal_csv(temporal: dict[str, list[tuple[float, SemanticResult]]]) -> str:
    rows = (
        (p, t, r.s_epsilon, r.critical_value, r.v_min, r.admissible_set_size)
        for p, entries in temporal.items()
        for t, r in entries
    )
    return _csv_text(TEMPORAL_HEADER, rows)


def impulse_csv(impulse) -> str:
    return _csv_text(IMPULSE_HEADER, zip(impulse.times, impulse.p_i, impulse.stderr))


def write_catalogue(
    catalogue: SemanticCatalogue, out_dir: Path | str, formats=("csv", "json", "svg")
) -> list[Path]:
    """Write outputs atomically: on any failure nothing new is left in ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".partial-", dir=out_dir))
    try:
        names = []
        if "csv" in formats:
            for e in catalogue.entries:
                names.append(f"sweep_{e.spec.parameter}.csv")
                (staging / names[-1]).write_text(sweep_csv(e.curve), encoding="utf-8")
            names.append("temporal_profile.csv")
            (staging / names[-1]).write_text(temporal_csv(catalogue.temporal), encoding="utf-8")
        if "json" in formats:
            names.append("catalogue.json")
            (staging / names[-1]).write_text(
                json.dumps(catalogue.to_dict(), indent=2) + "\n", encoding="utf-8"
            )
        if "svg" in formats:
            from .plotting import plot_sweep, plot_temporal

            for e in catalogue.entries:
                names.append(f"sweep_{e.spec.parameter}.svg")
                plot_sweep(e.curve, e.result, staging / names[-1])
            names.append("temporal_profile.svg")
            plot_temporal(catalogue.temporal_s_epsilon(), staging / names[-1])
        written = []
        try:
            for name in names:
                target = out_dir / name
                (staging / name).replace(target)
                written.append(target)
        except BaseException:
            for path in written:
                path.unlink(missing_ok=True)
            raise
        return written
    finally:
        shutil.rmtree(staging, ignore_errors=True)


def run_catalogue(
    config: RunConfig, out_dir: Path | str | None = None, threads: int | None = None
) -> tuple[SemanticCatalogue, list[Path]]:
    if threads is not None:
        set_threads(threads)
    out_dir = Path(config.output_directory if out_dir is None else out_dir)
    # fail before the expensive part if the destination is unusable
    out_dir.mkdir(parents=True, exist_ok=True)
    if not os.access(out_dir, os.W_OK):
        raise PermissionError(f"output directory {out_dir} is not writable")
    catalogue = build_catalogue(config)
    return catalogue, write_catalogue(catalogue, out_dir, config.formats)
