"""Modelos da classificação (relatórios e agrupamentos) e da localização (espectro e ranking)."""

from __future__ import annotations

from enum import StrEnum
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from minilang_testing.engines.model import TestStatus


class Verdict(StrEnum):
    ENGINE_BUG = "EngineBug"
    SPEC_BUG_CANDIDATE = "SpecBugCandidate"


class BugReport(BaseModel):
    """Veredito de um teste que falhou em pelo menos um engine.

    ``engines`` lista os engines que falharam; ``cluster_key`` é (status, token inicial
    da mensagem) mais frequente entre as falhas.
    """

    model_config = ConfigDict(frozen=True)

    test: str
    verdict: Verdict
    engines: tuple[str, ...]
    failing_count: int = Field(gt=0)
    cluster_key: tuple[TestStatus, str]
    crashed: bool = False


class Cluster(BaseModel):
    """Relatórios com o mesmo veredito e a mesma chave de mensagem."""

    model_config = ConfigDict(frozen=True)

    verdict: Verdict
    key: tuple[TestStatus, str]
    engines: tuple[str, ...] = ()
    tests: tuple[str, ...]

    @computed_field
    @property
    def size(self) -> int:
        return len(self.tests)


class SpectrumCounts(BaseModel):
    """Contagens de um elemento: e/n = toca ou não; f/p = teste falho ou aprovado."""

    model_config = ConfigDict(frozen=True)

    n_ef: int = Field(default=0, ge=0)
    n_ep: int = Field(default=0, ge=0)
    n_nf: int = Field(default=0, ge=0)
    n_np: int = Field(default=0, ge=0)

    @property
    def total(self) -> int:
        return self.n_ef + self.n_ep + self.n_nf + self.n_np


class RankedAlgorithm(BaseModel):
    model_config = ConfigDict(frozen=True)

    algorithm: str
    score: float
    rank: int = Field(ge=1)
    step: int
    counts: SpectrumCounts


class SuspiciousnessRanking(BaseModel):
    """Ranking de algoritmos (competição padrão) com as notas por passo para detalhamento."""

    model_config = ConfigDict(frozen=True)

    formula: str = "er1b"
    failed_tests: int = 0
    passed_tests: int = 0
    entries: tuple[RankedAlgorithm, ...] = ()
    step_scores: dict[str, dict[int, float]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_order(self) -> Self:
        scores = [entry.score for entry in self.entries]
        if any(a < b for a, b in zip(scores, scores[1:], strict=False)):
            msg = "Notas do ranking devem ser não crescentes"
            raise ValueError(msg)
        return self

    def rank_of(self, algorithm: str) -> int | None:
        for entry in self.entries:
            if entry.algorithm == algorithm:
                return entry.rank
        return None

    def top(self, k: int) -> tuple[RankedAlgorithm, ...]:
        return self.entries[:k]


class DiffReport(BaseModel):
    """Conteúdo de ``report.json``."""

    engine_bugs: list[Cluster] = Field(default_factory=list)
    spec_candidates: list[Cluster] = Field(default_factory=list)
    abort_tagged: list[str] = Field(default_factory=list)
    ranking: list[RankedAlgorithm] = Field(default_factory=list)
