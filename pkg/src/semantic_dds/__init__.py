"""Semantic information for drug-delivery parameter optimisation.

Submodules are imported lazily so that the command-line tool can size the
numba thread pool before numba is loaded.
"""

import importlib

__version__ = "0.1.0"

_EXPORTS = {
    "SystemParameters": "reactive_channel",
    "SimulationSettings": "reactive_channel",
    "ImpulseResponse": "reactive_channel",
    "simulate_impulse": "reactive_channel",
    "hitting_probability_absorbing": "reactive_channel",
    "eventual_hit_with_degradation": "reactive_channel",
    "eventual_internalisation_reactive": "reactive_channel",
    "set_threads": "reactive_channel",
    "ChannelPoint": "pic_information",
    "OptimalInput": "pic_information",
    "binary_entropy": "pic_information",
    "binomial_output_pmf": "pic_information",
    "crossover_probability": "pic_information",
    "mutual_information_z": "pic_information",
    "optimal_input": "pic_information",
    "capacity_closed_form": "pic_information",
    "mutual_information_bruteforce": "pic_information",
    "capacity_bruteforce": "pic_information",
    "particle_budget": "pharmacodynamics",
    "internalised_concentration": "pharmacodynamics",
    "viability": "pharmacodynamics",
    "delta_viability": "pharmacodynamics",
    "InterventionSpec": "interventions",
    "SweepCurve": "interventions",
    "SemanticResult": "interventions",
    "DEFAULT_INTERVENTIONS": "interventions",
    "evaluate_point": "interventions",
    "sweep": "interventions",
    "extract_semantic_information": "interventions",
    "temporal_profile": "interventions",
    "RunConfig": "config",
    "parse_config": "config",
    "format_config": "config",
    "run_catalogue": "catalogue",
    "SemanticCatalogue": "catalogue",
}

__all__ = ["__version__", *_EXPORTS]


def __getattr__(name):
    if name in _EXPORTS:
        module = importlib.import_module(f".{_EXPORTS[name]}", __name__)
        return getattr(module, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
