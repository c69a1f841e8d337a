"""Formal accountability model for cyber-physical and socio-technical systems.

Load a scenario with :func:`load`, check it with :func:`check_all`, and
evaluate the hall, lindberg and raci notions of accountability.
"""

from importlib import resources

from .accountability import (
    NotionReport,
    compare_notions,
    hall_accountable,
    lindberg_accountable,
    raci_accountable,
)
from .causality import (
    CauseResult,
    StructuralModel,
    but_for_causes,
    evaluate,
    explicit_causes,
    minimal_cause_sets,
    resolve_causes,
)
from .checks import Mode, Severity, Violation, check_all, check_am, check_cps, check_sts
from .dsl import ParseError, ScenarioAst, ScenarioSyntaxError, UnterminatedBlock, load, parse_scenario, resolve, serialize
from .errors import ModelError, UnknownEntityError
from .model import Model, Observation, build_model
from .relations import constructed, informed, missed_by_ego, responsible


def scenario_path(name: str):
    """Path of a bundled scenario, e.g. ``scenario_path("uber-hall.acct")``."""
    return resources.files(__package__).joinpath("scenarios", name)


__all__ = [
    "CauseResult", "Mode", "Model", "ModelError", "NotionReport", "Observation", "ParseError",
    "ScenarioAst", "ScenarioSyntaxError", "Severity", "StructuralModel", "UnknownEntityError", "UnterminatedBlock",
    "Violation", "build_model", "but_for_causes", "check_all", "check_am", "check_cps", "check_sts",
    "compare_notions", "constructed", "evaluate", "explicit_causes", "hall_accountable", "informed",
    "lindberg_accountable", "load", "minimal_cause_sets", "missed_by_ego", "parse_scenario",
    "raci_accountable", "resolve", "resolve_causes", "responsible", "scenario_path", "serialize",
]
