"""Erros da classificação e localização."""

from minilang_testing.exceptions import MiniLangTestingError


class NoFailuresError(MiniLangTestingError):
    """Localização pedida sem nenhum teste candidato a bug de especificação."""
