"""Categorias léxicas, tokens e o renderizador canônico de sequências de tokens."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Sequence

IDENT = "IDENT"
NUMBER = "NUMBER"
STRING = "STRING"

# Padrões das categorias léxicas no formato de terminal do lark.
LEXICAL_PATTERNS = {
    IDENT: r"/[A-Za-z_$][A-Za-z0-9_$]*/",
    NUMBER: r"/[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?/",
    STRING: r'/"(?:[^"\\\n]|\\.)*"/',
}

_WORD_CHARS = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_$")
_OPERATOR_CHARS = frozenset("+-=<>!&|*/%^~?")
_NO_SPACE_BEFORE = frozenset({";", ",", ")", "]", ".", ":"})
_NO_SPACE_AFTER = frozenset({"(", "[", ".", "..."})
_PREFIX_CAPABLE = frozenset({"-", "++", "--"})
_POSTFIX_CAPABLE = frozenset({"++", "--"})
# Palavras após as quais "(" e "[" abrem construção nova, não chamada/índice.
_KEYWORD_HEADS = frozenset(
    {"if", "while", "for", "catch", "function", "return", "throw", "new", "var", "else",
     "try", "typeof", "in", "of", "delete", "void", "case", "do", "switch", "with"},
)


@dataclass(frozen=True, slots=True)
class Token:
    """Token léxico: ``kind`` é o próprio texto para palavras-chave/pontuação."""

    kind: str
    text: str
    offset: int


def decode_string(text: str) -> str:
    """Decodifica o texto de um token STRING (escapes no estilo JSON)."""
    return json.loads(text)


def encode_string(value: str) -> str:
    return json.dumps(value, ensure_ascii=False)


def _is_word(token: str) -> bool:
    return bool(token) and token[0] in _WORD_CHARS


def _ends_operand(token: str | None) -> bool:
    if token is None:
        return False
    if token in {")", "]", "}"} or token.startswith('"'):
        return True
    return _is_word(token) and token not in _KEYWORD_HEADS


def _needs_separator(left: str, right: str) -> bool:
    """Dois tokens colados seriam lidos como outro token."""
    return (left[-1] in _WORD_CHARS and right[0] in _WORD_CHARS) or (
        left[-1] in _OPERATOR_CHARS and right[0] in _OPERATOR_CHARS
    )


def render_tokens(tokens: Sequence[str]) -> str:
    """Renderiza tokens no formato canônico (``var x = 1 + 2;``, ``f(x, 0)``, ``{ p: 0 }``).

    Args:
        tokens: Textos dos tokens, na ordem.

    Returns:
        Texto que, tokenizado de novo, produz exatamente ``tokens``.

    """
    out: list[str] = []
    prev: str | None = None
    prev_prefix = False
    for tok in tokens:
        if prev is None:
            out.append(tok)
        else:
            space = True
            if (
                tok in _NO_SPACE_BEFORE
                or (tok in _POSTFIX_CAPABLE and _ends_operand(prev))
                or (prev in _NO_SPACE_AFTER or prev_prefix)
                or (tok in {"(", "["} and _ends_operand(prev) and prev != "}")
                or (prev == "{" and tok == "}")
            ):
                space = False
            if _needs_separator(prev, tok):
                space = True
            if space:
                out.append(" ")
            out.append(tok)
        # Operador prefixo: nada o separa do operando seguinte.
        prev_prefix = tok in _PREFIX_CAPABLE and not _ends_operand(prev)
        prev = tok
    return "".join(out)


def spaced_length(tokens: Sequence[str]) -> int:
    """Comprimento da string com tokens separados por exatamente um espaço."""
    return sum(map(len, tokens)) + max(len(tokens) - 1, 0)
