"""Erros dos engines e do orquestrador de execução."""

from minilang_testing.exceptions import MiniLangTestingError


class RosterError(MiniLangTestingError):
    """Arquivo ``engines.json`` inválido (ids repetidos, comando ausente, menos de 2 engines)."""


class EngineTimeoutError(MiniLangTestingError):
    """O engine em processo passou do prazo configurado."""
