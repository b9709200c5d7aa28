"""Modelos da semântica de referência: bugs semeados, conclusões, estado final e cobertura."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any, Self

from pydantic import BaseModel, ConfigDict, Field, field_serializer

from minilang_testing.values import (
    UNDEFINED,
    ObjectRecord,
    Value,
    encode_record,
    encode_value,
)


class SpecBug(StrEnum):
    """Catálogo de bugs semeados na especificação mecanizada."""

    ABRUPT_EQ = "ABRUPT_EQ"
    TYPO_UPDATE = "TYPO_UPDATE"
    KEYORDER_FN = "KEYORDER_FN"
    ABRUPT_OBJLIT = "ABRUPT_OBJLIT"


class CompletionKind(StrEnum):
    NORMAL = "Normal"
    THROW = "Throw"
    BREAK = "Break"
    RETURN = "Return"


@dataclass(frozen=True, slots=True)
class Completion:
    """Registro de conclusão; ``value`` é o payload de Normal/Throw/Return."""

    kind: CompletionKind
    value: Any = UNDEFINED

    @property
    def abrupt(self) -> bool:
        return self.kind is not CompletionKind.NORMAL


NORMAL_EMPTY = Completion(CompletionKind.NORMAL)
BREAK = Completion(CompletionKind.BREAK)


def normal(value: Any) -> Completion:
    return Completion(CompletionKind.NORMAL, value)


def throw(value: Value) -> Completion:
    return Completion(CompletionKind.THROW, value)


class TerminationKind(StrEnum):
    NORMAL_EXIT = "NormalExit"
    CUSTOM_THROW = "CustomThrow"
    NAMED_ERROR = "NamedError"
    ABORT = "Abort"


class Termination(BaseModel):
    """Como a execução terminou; Abort carrega o (algoritmo, passo) que abortou."""

    model_config = ConfigDict(frozen=True)

    kind: TerminationKind
    name: str | None = None
    algorithm: str | None = None
    step: int | None = None

    @classmethod
    def normal_exit(cls) -> Self:
        return cls(kind=TerminationKind.NORMAL_EXIT)

    @classmethod
    def custom_throw(cls) -> Self:
        return cls(kind=TerminationKind.CUSTOM_THROW)

    @classmethod
    def named_error(cls, name: str) -> Self:
        return cls(kind=TerminationKind.NAMED_ERROR, name=name)

    @classmethod
    def abort(cls, algorithm: str, step: int) -> Self:
        return cls(kind=TerminationKind.ABORT, algorithm=algorithm, step=step)

    @property
    def tag(self) -> str:
        """Texto da tag de primeira linha dos testes (``Normal``, ``Throw``, ``TypeError``...)."""
        match self.kind:
            case TerminationKind.NORMAL_EXIT:
                return "Normal"
            case TerminationKind.CUSTOM_THROW:
                return "Throw"
            case TerminationKind.NAMED_ERROR:
                return self.name or "Error"
            case _:
                return "Abort"


@dataclass(slots=True)
class FinalState:
    """Estado final: terminação, variáveis globais do programa e heap completo."""

    termination: Termination
    globals: dict[str, Value] = field(default_factory=dict)
    heap: list[ObjectRecord] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "termination": self.termination.model_dump(mode="json", exclude_none=True),
            "globals": {name: encode_value(v) for name, v in sorted(self.globals.items())},
            "heap": [encode_record(record) for record in self.heap],
        }


type StepId = tuple[str, int]
type BranchOutcome = tuple[str, int, bool]


class CoverageMap(BaseModel):
    """Passos (algoritmo, passo) e desvios (algoritmo, ponto, resultado) tocados.

    ``sites`` atribui a cada algoritmo o caminho do nó sintático mais interno em avaliação
    na primeira vez em que ele foi executado; não é serializado.
    """

    model_config = ConfigDict(frozen=True)

    steps: frozenset[tuple[str, int]] = frozenset()
    branches: frozenset[tuple[str, int, bool]] = frozenset()
    sites: dict[str, tuple[int, ...]] = Field(default_factory=dict, exclude=True)

    @field_serializer("steps", "branches")
    def _sorted(self, value: frozenset[tuple[Any, ...]]) -> list[tuple[Any, ...]]:
        return sorted(value)

    def __or__(self, other: CoverageMap) -> CoverageMap:
        return CoverageMap.model_construct(
            steps=self.steps | other.steps,
            branches=self.branches | other.branches,
            sites={**other.sites, **self.sites},
        )

    def new_against(self, cumulative: CoverageMap) -> tuple[set[StepId], set[BranchOutcome]]:
        return set(self.steps - cumulative.steps), set(self.branches - cumulative.branches)

    def adds_to(self, cumulative: CoverageMap) -> bool:
        return not (self.steps <= cumulative.steps and self.branches <= cumulative.branches)

    def touches(self, algorithm: str) -> bool:
        return any(alg == algorithm for alg, _ in self.steps)


class SpecAlgorithm(BaseModel):
    """Algoritmo abstrato com passos numerados e pontos de desvio (passo, aridade)."""

    model_config = ConfigDict(frozen=True)

    name: str
    steps: tuple[int, ...]
    branch_points: tuple[tuple[int, int], ...] = ()
