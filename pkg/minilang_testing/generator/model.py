"""Modelos da geração: pool de programas, métodos de mutação e estatísticas."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING

from pydantic import BaseModel, ConfigDict, computed_field

from minilang_testing.spec.model import CoverageMap

if TYPE_CHECKING:
    from collections.abc import Iterator, Mapping, Sequence

    from minilang_testing.grammar import SyntaxTree

type BranchOutcome = tuple[str, int, bool]
type Fragments = Mapping[str, Sequence[tuple[str, ...]]]

SEED_ORIGIN = "Seed"


class MutationMethod(StrEnum):
    RANDOM_MUTATION = "RandomMutation"
    NEAREST_SYNTAX_TREE = "NearestSyntaxTree"
    STRING_SUBSTITUTION = "StringSubstitution"
    OBJECT_SUBSTITUTION = "ObjectSubstitution"
    STATEMENT_INSERTION = "StatementInsertion"


@dataclass(slots=True)
class PoolEntry:
    """Programa admitido no pool com a cobertura da sua avaliação.

    ``admitted_at`` é 0 para sementes; ``method`` é ``None`` para sementes.
    """

    tree: SyntaxTree
    coverage: CoverageMap
    source: str
    admitted_at: int = 0
    method: MutationMethod | None = None
    new_steps: int = 0
    new_branches: int = 0


@dataclass(slots=True)
class ProgramPool:
    """Pool ordenado; ``cumulative`` é sempre a união das coberturas dos membros."""

    rng_seed: int = 0
    entries: list[PoolEntry] = field(default_factory=list)
    cumulative: CoverageMap = field(default_factory=CoverageMap)
    _sources: set[str] = field(default_factory=set, repr=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[PoolEntry]:
        return iter(self.entries)

    def __contains__(self, source: object) -> bool:
        return source in self._sources

    @property
    def programs(self) -> list[tuple[SyntaxTree, CoverageMap]]:
        return [(entry.tree, entry.coverage) for entry in self.entries]

    def admit(self, entry: PoolEntry) -> None:
        new_steps, new_branches = entry.coverage.new_against(self.cumulative)
        entry.new_steps = len(new_steps)
        entry.new_branches = len(new_branches)
        self.entries.append(entry)
        self.cumulative |= entry.coverage
        self._sources.add(entry.source)


@dataclass(frozen=True, slots=True)
class MutationContext:
    """Insumos das mutações.

    Attributes:
        fragments: Fragmentos sintetizados por não-terminal.
        string_bank: Strings das condições de desvio da especificação.
        key_bank: Chaves de propriedade usadas pela especificação.
        focus: Resultado de desvio ainda não coberto que motivou a mutação.
        sites: Caminho do nó mais interno em avaliação quando cada algoritmo rodou
            pela primeira vez no programa alvo.

    """

    fragments: Fragments
    string_bank: tuple[str, ...] = ()
    key_bank: tuple[str, ...] = ()
    focus: BranchOutcome | None = None
    sites: Mapping[str, tuple[int, ...]] = field(default_factory=dict)


class MethodStats(BaseModel):
    method: MutationMethod
    attempts: int = 0
    failures: int = 0
    admissions: int = 0

    @computed_field
    @property
    def saturated(self) -> bool:
        return self.admissions == 0


class PoolRecord(BaseModel):
    """Linha de ``pool.json``."""

    model_config = ConfigDict(frozen=True)

    file: str
    admitted_at_iteration: int
    method: str
    new_steps: int
    new_branches: int


class CoveragePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    iteration: int
    stmt_ratio: float
    branch_ratio: float


@dataclass(slots=True)
class GrowthResult:
    pool: ProgramPool
    history: list[CoveragePoint] = field(default_factory=list)
    stats: dict[MutationMethod, MethodStats] = field(default_factory=dict)
