"""Run configuration: INI-style text with one section per concern.

    [system]              tau, lambda, k_d, k_f, k_b, k_i, D, a, r0, C_th, n, epsilon
    [simulation]          dt, trials, seed, time_points
    [intervention.<p>]    range_min, range_max, grid_points, scale   (p in lambda, k_d, ...)
    [temporal]            tau_grid  (comma-separated seconds)
    [output]              directory, formats

Keys before the first section header belong to ``[system]``. Omitted keys
take the reference defaults; if any ``[intervention.*]`` section is present
only those interventions run.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .interventions import DEFAULT_INTERVENTIONS, INTERVENABLE, InterventionSpec
from .reactive_channel import PARAMETER_FIELDS, SimulationSettings, SystemParameters

__all__ = ["ConfigError", "RunConfig", "parse_config", "format_config", "DEFAULT_TAU_GRID"]

# one point per added particle at the default release rate: N = floor(lambda*tau) is
# piecewise constant in tau, so finer grids show a floor() saw-tooth rather than a trend
DEFAULT_TAU_GRID = tuple(float(t) for t in np.round(np.linspace(0.010, 0.025, 16), 12))
OUTPUT_FORMATS = ("csv", "json", "svg")

_SIMULATION_KEYS = {"dt": float, "trials": int, "seed": int, "time_points": int}
_INTERVENTION_KEYS = {"range_min": float, "range_max": float, "grid_points": int, "scale": str}
_IMPLICIT = "system"


class ConfigError(ValueError):
    """Invalid configuration text; carries the offending key and line when known."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class RunConfig:
    system: SystemParameters = field(default_factory=SystemParameters)
    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    time_points: int = 200
    interventions: tuple[InterventionSpec, ...] = DEFAULT_INTERVENTIONS
    tau_grid: tuple[float, ...] = DEFAULT_TAU_GRID
    output_directory: str = "results"
    formats: tuple[str, ...] = OUTPUT_FORMATS

    @property
    def epsilon(self) -> float:
        return self.system.epsilon

    def settings(self) -> SimulationSettings:
        """Simulation settings with the configured uniform time grid on (0, tau]."""
        tau = self.system.tau
        grid = tuple(float(t) for t in tau * np.arange(1, self.time_points + 1) / self.time_points)
        return replace(self.simulation, time_grid=grid)


def _line_of(text: str, section: str, key: str | None) -> int | None:
    current = _IMPLICIT
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        header = re.match(r"^\[(.+)\]$", stripped)
        if header:
            current = header.group(1).strip()
            if key is None and current == section:
                return lineno
            continue
        if current == section and key is not None:
            m = re.match(r"^([^=:#;]+?)\s*[=:]", stripped)
            if m and m.group(1) == key:
                return lineno
    return None


def _convert(kind, raw: str, key: str, line: int | None):
    try:
        if kind is int:
            try:
                return int(raw.strip())
            except ValueError:
                pass
            # accept "1e5" style integers; large seeds must use plain digits
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        if kind is float:
            return float(raw)
    except ValueError:
        raise ConfigError(f"value {raw!r} is not a valid {kind.__name__}", key, line) from None
    return raw.strip()


def parse_config(text: str) -> RunConfig:
    """Parse configuration text into a validated :class:`RunConfig`."""
    parser = configparser.ConfigParser(
        interpolation=None, default_section="__defaults__", inline_comment_prefixes=(";", "#")
    )
    parser.optionxform = str
    # an implicit [system] header lets a bare "lambda = 2000" work
    first = next((ln.strip() for ln in text.splitlines()
                  if ln.strip() and not ln.strip().startswith(("#", ";"))), "")
    offset = 0 if first.startswith("[") else 1
    body = f"[{_IMPLICIT}]\n{text}" if offset else text
    try:
        parser.read_string(body)
    except configparser.DuplicateOptionError as exc:
        raise ConfigError("duplicate key", exc.option, (exc.lineno or 1) - offset) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", None,
                          (exc.lineno or 1) - offset) from None
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        if lineno is None and getattr(exc, "errors", None):
            lineno = exc.errors[0][0]
        raise ConfigError(f"malformed configuration: {exc.message.splitlines()[0]}", None,
                          None if lineno is None else lineno - offset) from None

    def line(section, key=None):
        return _line_of(text, section, key)

    system_values = {}
    sim_values = {}
    specs = []
    tau_grid = DEFAULT_TAU_GRID
    output_dir = RunConfig.output_directory
    formats = OUTPUT_FORMATS
    time_points = 200

    for section in parser.sections():
        items = parser[section]
        if section == "system":
            for key, raw in items.items():
                if key not in PARAMETER_FIELDS:
                    raise ConfigError("unknown key in [system]", key, line(section, key))
                system_values[PARAMETER_FIELDS[key]] = (_convert(float, raw, key, line(section, key)), key)
        elif section == "simulation":
            for key, raw in items.items():
                if key not in _SIMULATION_KEYS:
                    raise ConfigError("unknown key in [simulation]", key, line(section, key))
                value = _convert(_SIMULATION_KEYS[key], raw, key, line(section, key))
                if key == "time_points":
                    if value < 1:
                        raise ConfigError("time_points must be positive", key, line(section, key))
                    time_points = value
                else:
                    sim_values[key] = (value, key)
        elif section.startswith("intervention."):
            parameter = section.split(".", 1)[1]
            if parameter not in INTERVENABLE:
                raise ConfigError(
                    f"unknown intervention parameter (expected one of {sorted(INTERVENABLE)})",
                    parameter, line(section),
                )
            base = next((s for s in DEFAULT_INTERVENTIONS if s.parameter == parameter))
            kwargs = {"range_min": base.range_min, "range_max": base.range_max,
                      "grid_points": base.grid_points, "scale": base.scale}
            for key, raw in items.items():
                if key not in _INTERVENTION_KEYS:
                    raise ConfigError(f"unknown key in [{section}]", key, line(section, key))
                kwargs[key] = _convert(_INTERVENTION_KEYS[key], raw, key, line(section, key))
            try:
                specs.append(InterventionSpec(parameter, **kwargs))
            except ValueError as exc:
                raise ConfigError(str(exc), parameter, line(section)) from None
        elif section == "temporal":
            for key, raw in items.items():
                if key != "tau_grid":
                    raise ConfigError("unknown key in [temporal]", key, line(section, key))
                parts = [p for p in re.split(r"[,\s]+", raw.strip()) if p]
                grid = tuple(_convert(float, p, key, line(section, key)) for p in parts)
                if not grid or any(t <= 0 for t in grid) or any(
                    b <= a for a, b in zip(grid, grid[1:])
                ):
                    raise ConfigError("tau_grid must be strictly increasing positive times",
                                      key, line(section, key))
                tau_grid = grid
        elif section == "output":
            for key, raw in items.items():
                if key == "directory":
                    output_dir = raw.strip()
                elif key == "formats":
                    formats = tuple(f for f in re.split(r"[,\s]+", raw.strip()) if f)
                    bad = [f for f in formats if f not in OUTPUT_FORMATS]
                    if bad:
                        raise ConfigError(f"unsupported format {bad[0]!r}", key, line(section, key))
                else:
                    raise ConfigError("unknown key in [output]", key, line(section, key))
        else:
            raise ConfigError(f"unknown section [{section}]", section, line(section))

    try:
        system = SystemParameters(**{name: v for name, (v, _) in system_values.items()})
    except ValueError as exc:
        key = _offending_key(str(exc), [k for _, (_, k) in system_values.items()])
        raise ConfigError(str(exc), key, line("system", key) if key else None) from None
    try:
        simulation = SimulationSettings(**{name: v for name, (v, _) in sim_values.items()})
    except ValueError as exc:
        key = _offending_key(str(exc), list(sim_values))
        raise ConfigError(str(exc), key, line("simulation", key) if key else None) from None
    if simulation.dt > system.tau / 100:
        raise ConfigError(f"dt must not exceed tau/100 = {system.tau / 100!r}", "dt",
                          line("simulation", "dt"))

    return RunConfig(
        system=system,
        simulation=simulation,
        time_points=time_points,
        interventions=tuple(specs) if specs else DEFAULT_INTERVENTIONS,
        tau_grid=tau_grid,
        output_directory=output_dir,
        formats=formats,
    )


def _offending_key(message: str, keys: list[str]) -> str | None:
    for key in sorted(keys, key=len, reverse=True):
        if message.startswith(key + " ") or f" {key}=" in message:
            return key
    return None


def format_config(config: RunConfig) -> str:
    """Serialise ``config``; ``parse_config(format_config(c)) == c``."""
    lines = ["[system]"]
    inverse = {v: k for k, v in PARAMETER_FIELDS.items()}
    for f in fields(SystemParameters):
        lines.append(f"{inverse[f.name]} = {getattr(config.system, f.name)!r}")
    sim = config.simulation
    lines += [
        "",
        "[simulation]",
        f"dt = {sim.dt!r}",
        f"trials = {sim.trials}",
        f"seed = {sim.seed}",
        f"time_points = {config.time_points}",
    ]
    for spec in config.interventions:
        lines += [
            "",
            f"[intervention.{spec.parameter}]",
            f"range_min = {spec.range_min!r}",
            f"range_max = {spec.range_max!r}",
            f"grid_points = {spec.grid_points}",
            f"scale = {spec.scale}",
        ]
    lines += [
        "",
        "[temporal]",
        "tau_grid = " + ", ".join(repr(t) for t in config.tau_grid),
        "",
        "[output]",
        f"directory = {config.output_directory}",
        "formats = " + ", ".join(config.formats),
    ]
    return "\n".join(lines) + "\n"
