"""Erros do pacote de gramática."""

from __future__ import annotations

from minilang_testing.exceptions import MiniLangTestingError


class GrammarError(MiniLangTestingError):
    """Gramática estruturalmente inválida (símbolo não declarado, regra malformada)."""


class NonProductiveGrammarError(GrammarError):
    """Algum não-terminal nunca deriva uma string terminal."""

    def __init__(self, missing: list[str]) -> None:
        """Inicializa o erro.

        Args:
            missing: Não-terminais que ficaram sem string mais curta.

        """
        super().__init__(f"Não-terminais improdutivos: {', '.join(missing)}")
        self.missing = missing


class ParseFailureError(MiniLangTestingError):
    """Falha de parsing com posição (offset de caractere) e conjunto de tokens esperados."""

    def __init__(self, offset: int, expected: set[str], source: str = "") -> None:
        """Inicializa o erro.

        Args:
            offset: Offset de caractere onde o parsing parou.
            expected: Tokens aceitos naquela posição.
            source: Texto analisado (usado só na mensagem).

        """
        shown = ", ".join(sorted(expected)) or "nada"
        super().__init__(f"Erro de sintaxe no offset {offset}: esperado {shown}")
        self.offset = offset
        self.expected = expected
        self.source = source


class EarlySyntaxError(MiniLangTestingError):
    """Erro estático detectado ao rebaixar a árvore sintática (break/return fora de lugar etc)."""
