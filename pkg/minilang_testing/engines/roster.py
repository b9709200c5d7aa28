"""Roster de engines: arquivo ``engines.json`` ou o roster padrão de quatro engines."""

from __future__ import annotations

from logging import getLogger
from typing import TYPE_CHECKING

from pydantic import TypeAdapter, ValidationError

from .exceptions import RosterError
from .model import EngineBug, EngineHandle

if TYPE_CHECKING:
    from pathlib import Path

logger = getLogger(__name__)

MIN_ENGINES = 2

DEFAULT_ROSTER: tuple[EngineHandle, ...] = (
    EngineHandle(id="reference"),
    EngineHandle(id="engine-a", bugs=frozenset({EngineBug.EQ_COERCE_WRONG, EngineBug.NEG_ZERO_LOST})),
    EngineHandle(id="engine-b", bugs=frozenset({EngineBug.FROZEN_WRITE_SILENT, EngineBug.KEYORDER_ENGINE})),
    EngineHandle(id="engine-c", bugs=frozenset({EngineBug.UNINIT_PARAM_UNDEFINED})),
)

_ROSTER_ADAPTER = TypeAdapter(list[EngineHandle])


def validate_roster(engines: list[EngineHandle]) -> list[EngineHandle]:
    """Confere ids únicos e pelo menos dois engines.

    Raises:
        RosterError: Roster inválido.

    """
    ids = [engine.id for engine in engines]
    if len(set(ids)) != len(ids):
        msg = f"Ids de engine repetidos: {ids}"
        raise RosterError(msg)
    if len(engines) < MIN_ENGINES:
        msg = f"São necessários pelo menos {MIN_ENGINES} engines (recebidos {len(engines)})"
        raise RosterError(msg)
    return engines


def load_roster(path: Path | None = None, *, timeout: float | None = None) -> list[EngineHandle]:
    """Carrega o roster de ``path`` (``[{id, kind, command?, bugs?}]``) ou o padrão.

    Args:
        path: Arquivo JSON; ``None`` usa :data:`DEFAULT_ROSTER`.
        timeout: Prazo por teste que substitui o do arquivo.

    Raises:
        RosterError: JSON inválido ou roster inconsistente.

    """
    if path is None:
        engines = list(DEFAULT_ROSTER)
    else:
        try:
            engines = _ROSTER_ADAPTER.validate_json(path.read_bytes())
        except (OSError, ValidationError) as exc:
            msg = f"Roster inválido em {path}: {exc}"
            raise RosterError(msg) from exc
    if timeout is not None:
        engines = [engine.model_copy(update={"timeout": timeout}) for engine in engines]
    logger.info("Roster: %s", ", ".join(engine.id for engine in engines))
    return validate_roster(engines)
