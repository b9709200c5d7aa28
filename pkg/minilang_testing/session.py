"""Configuração da sessão (env ``MINILANG_*``/.env + flags da CLI) e eco em cada diretório."""

from __future__ import annotations

import json
import platform
from datetime import UTC, datetime
from enum import StrEnum
from importlib import metadata
from logging import getLogger
from pathlib import Path
from typing import Self

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from minilang_testing.spec import SpecBug

logger = getLogger(__name__)

SESSION_FILE = "session.json"
METADATA_FILE = "metadata.json"


class Stage(StrEnum):
    SYNTH = "synth"
    FILTER = "filter"
    GENERATE = "generate"
    INJECT = "inject"
    RUN = "run"
    LOCALIZE = "localize"
    REPORT = "report"


ALL_STAGES: tuple[Stage, ...] = tuple(Stage)


class SessionConfig(BaseSettings):
    """Tudo que determina os artefatos de uma sessão.

    Campos vêm de variáveis ``MINILANG_*`` (ou ``.env``); flags da CLI têm precedência.
    """

    model_config = SettingsConfigDict(env_prefix="MINILANG_", env_file=".env", extra="ignore", frozen=True)

    rng_seed: int = 1
    budget: int = Field(default=2_000, ge=0)
    spec_bugs: tuple[SpecBug, ...] = ()
    engines: Path | None = None
    out: Path = Path("out")
    stages: tuple[Stage, ...] = ALL_STAGES
    repeat: int = Field(default=1, ge=1)
    spec_threshold: int | None = Field(default=None, ge=0)
    top_k: int = Field(default=15, ge=1)
    workers: int = Field(default=4, ge=1)
    timeout: float = Field(default=5.0, gt=0)
    grammar: Path | None = None
    start: str | None = None

    @field_validator("stages")
    @classmethod
    def _canonical_order(cls, stages: tuple[Stage, ...]) -> tuple[Stage, ...]:
        return tuple(stage for stage in ALL_STAGES if stage in stages)

    @field_validator("spec_bugs")
    @classmethod
    def _sorted_bugs(cls, bugs: tuple[SpecBug, ...]) -> tuple[SpecBug, ...]:
        return tuple(sorted(set(bugs)))

    def for_seed(self, rng_seed: int, out: Path) -> Self:
        """Cópia para uma das repetições (``run-<seed>``)."""
        return self.model_copy(update={"rng_seed": rng_seed, "out": out, "repeat": 1})

    def echo(self, directory: Path) -> Path:
        """Grava ``session.json`` (sem carimbo de tempo) em ``directory``."""
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / SESSION_FILE
        path.write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path


def write_metadata(directory: Path, command: str) -> Path:
    """Grava ``metadata.json``: único artefato com carimbo de tempo."""
    try:
        version = metadata.version("nversion-difftest")
    except metadata.PackageNotFoundError:
        version = "dev"
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / METADATA_FILE
    payload = {
        "command": command,
        "created_at": datetime.now(UTC).isoformat(),
        "python": platform.python_version(),
        "version": version,
    }
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    logger.debug("Metadados em %s", path)
    return path
