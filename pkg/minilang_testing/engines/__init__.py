"""Engines sob teste: interpretador em processo com bugs semeados e adaptador externo."""

from .exceptions import EngineTimeoutError, RosterError
from .interpreter import EngineInterpreter, Execution
from .model import EngineBug, EngineHandle, EngineKind, ResultMatrix, TestOutcome, TestStatus
from .roster import DEFAULT_ROSTER, MIN_ENGINES, load_roster, validate_roster
from .runner import judge, run_external, run_in_process, run_suite, run_test

__all__ = [
    "DEFAULT_ROSTER",
    "MIN_ENGINES",
    "EngineBug",
    "EngineHandle",
    "EngineInterpreter",
    "EngineKind",
    "EngineTimeoutError",
    "Execution",
    "ResultMatrix",
    "RosterError",
    "TestOutcome",
    "TestStatus",
    "judge",
    "load_roster",
    "run_external",
    "run_in_process",
    "run_suite",
    "run_test",
    "validate_roster",
]
