"""Geração guiada por cobertura: filtragem de sementes e crescimento do pool por mutação."""

from .exceptions import MutationFailedError
from .model import (
    SEED_ORIGIN,
    CoveragePoint,
    GrowthResult,
    MethodStats,
    MutationContext,
    MutationMethod,
    PoolEntry,
    PoolRecord,
    ProgramPool,
)
from .mutate import mutate, random_object, splice
from .pool import DEFAULT_BUDGET, RETRY_LIMIT, filter_seeds, grow_pool, select_target

__all__ = [
    "DEFAULT_BUDGET",
    "RETRY_LIMIT",
    "SEED_ORIGIN",
    "CoveragePoint",
    "GrowthResult",
    "MethodStats",
    "MutationContext",
    "MutationFailedError",
    "MutationMethod",
    "PoolEntry",
    "PoolRecord",
    "ProgramPool",
    "filter_seeds",
    "grow_pool",
    "mutate",
    "random_object",
    "select_target",
    "splice",
]
