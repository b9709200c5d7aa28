"""Semântica de referência instrumentada (a especificação mecanizada)."""

from .exceptions import ResourceLimitExceededError
from .interpreter import SpecEvaluation, evaluate
from .model import (
    Completion,
    CompletionKind,
    CoverageMap,
    FinalState,
    SpecAlgorithm,
    SpecBug,
    Termination,
    TerminationKind,
)
from .universe import SpecUniverse, harvest, semantic_coverage_ratio, spec_universe

__all__ = [
    "Completion",
    "CompletionKind",
    "CoverageMap",
    "FinalState",
    "ResourceLimitExceededError",
    "SpecAlgorithm",
    "SpecBug",
    "SpecEvaluation",
    "SpecUniverse",
    "Termination",
    "TerminationKind",
    "evaluate",
    "harvest",
    "semantic_coverage_ratio",
    "spec_universe",
]
