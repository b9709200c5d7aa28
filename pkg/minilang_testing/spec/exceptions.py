"""Erros da semântica de referência."""

from minilang_testing.exceptions import MiniLangTestingError


class ResourceLimitExceededError(MiniLangTestingError):
    """Combustível de passos ou profundidade de chamadas esgotados durante a avaliação.

    Programas que não terminam não têm estado final; o gerador os descarta.
    """
