from __future__ import annotations

import shlex
from enum import StrEnum
from typing import ClassVar, Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from minilang_testing.spec.model import CoverageMap

DEFAULT_TIMEOUT = 5.0


class EngineBug(StrEnum):
    """Bugs semeados nos engines em processo."""

    EQ_COERCE_WRONG = "EQ_COERCE_WRONG"
    FROZEN_WRITE_SILENT = "FROZEN_WRITE_SILENT"
    KEYORDER_ENGINE = "KEYORDER_ENGINE"
    UNINIT_PARAM_UNDEFINED = "UNINIT_PARAM_UNDEFINED"
    NEG_ZERO_LOST = "NEG_ZERO_LOST"


class EngineKind(StrEnum):
    IN_PROCESS = "in-process"
    EXTERNAL = "external"


class EngineHandle(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    kind: EngineKind = EngineKind.IN_PROCESS
    bugs: frozenset[EngineBug] = frozenset()
    command: tuple[str, ...] | None = None
    timeout: float = DEFAULT_TIMEOUT
    reentrant: bool = False

    @field_validator("command", mode="before")
    @classmethod
    def _split_command(cls, value: object) -> object:
        if isinstance(value, str):
            return tuple(shlex.split(value))
        return value

    @model_validator(mode="after")
    def _check_command(self) -> Self:
        if self.kind is EngineKind.EXTERNAL and not self.command:
            msg = f"Engine externo {self.id!r} sem comando"
            raise ValueError(msg)
        return self


class TestStatus(StrEnum):
    __test__ = False

    PASS = "Pass"
    FAIL = "Fail"
    CRASH = "Crash"
    TIMEOUT = "Timeout"


class TestOutcome(BaseModel):
    """Resultado de um teste em um engine.

    ``message`` é vazia em Pass; nas falhas começa pelo token observado
    (``Test262Error: a003-VarValue``, ``TypeError: expected Normal``...).
    """

    __test__: ClassVar[bool] = False
    model_config = ConfigDict(frozen=True)

    engine_id: str
    status: TestStatus
    message: str = ""
    abort_tagged: bool = False

    @property
    def failed(self) -> bool:
        return self.status is not TestStatus.PASS

    @property
    def leading_token(self) -> str:
        return self.message.split(":", 1)[0].strip() if self.message else ""


class ResultMatrix(BaseModel):
    """Matriz testes x engines com a cobertura da especificação de cada teste."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=1, alias="schema")
    tests: list[str] = Field(default_factory=list)
    engines: list[str] = Field(default_factory=list)
    cells: list[list[TestOutcome]] = Field(default_factory=list)
    coverage: dict[str, CoverageMap] = Field(default_factory=dict)
    tags: dict[str, str] = Field(default_factory=dict)

    def row(self, test: str) -> list[TestOutcome]:
        return self.cells[self.tests.index(test)]

    def cell(self, test: str, engine: str) -> TestOutcome:
        return self.row(test)[self.engines.index(engine)]

    def is_abort_tagged(self, test: str) -> bool:
        return any(outcome.abort_tagged for outcome in self.row(test))

    def passes_everywhere(self, test: str) -> bool:
        return all(not outcome.failed for outcome in self.row(test))
