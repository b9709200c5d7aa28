"""Classificação engine x especificação e localização por espectro."""

from .classify import classify, cluster, default_threshold, failing_averages, spec_candidates
from .exceptions import NoFailuresError
from .model import (
    BugReport,
    Cluster,
    DiffReport,
    RankedAlgorithm,
    SpectrumCounts,
    SuspiciousnessRanking,
    Verdict,
)
from .report import DEFAULT_TOP_K, build_report, write_report
from .sbfl import FORMULAS, er1b, localize, rank, spectrum

__all__ = [
    "DEFAULT_TOP_K",
    "FORMULAS",
    "BugReport",
    "Cluster",
    "DiffReport",
    "NoFailuresError",
    "RankedAlgorithm",
    "SpectrumCounts",
    "SuspiciousnessRanking",
    "Verdict",
    "build_report",
    "classify",
    "cluster",
    "default_threshold",
    "er1b",
    "failing_averages",
    "localize",
    "rank",
    "spec_candidates",
    "spectrum",
    "write_report",
]
