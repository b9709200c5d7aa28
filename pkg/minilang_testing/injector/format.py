"""Formato textual dos testes de conformidade (``.test.mls``)."""

from __future__ import annotations

from typing import TYPE_CHECKING

from minilang_testing.grammar import minilang_parser
from minilang_testing.grammar.exceptions import ParseFailureError

from .model import Assertion, AssertionKind, ConformanceTest, assertion_id

if TYPE_CHECKING:
    from minilang_testing.grammar.lexer import Token


def render(test: ConformanceTest) -> str:
    """Renderiza: tag na linha 1, corpo, linha em branco e asserções na ordem."""
    text = f"// {test.tag}\n"
    if test.body:
        text += test.body + "\n"
    if test.assertions:
        text += "\n" + "\n".join(a.source for a in test.assertions) + "\n"
    return text


def read_tag(text: str) -> str:
    first = text.split("\n", 1)[0].strip()
    if not first.startswith("//"):
        msg = "Teste sem tag na primeira linha"
        raise ValueError(msg)
    return first.removeprefix("//").strip()


def parse_test(text: str, name: str = "") -> ConformanceTest:
    """Lê um teste renderizado de volta (tag, corpo e asserções com ids).

    Raises:
        ValueError: Primeira linha sem comentário de tag.

    """
    tag = read_tag(text)
    rest = text.split("\n", 1)[1] if "\n" in text else ""
    rest = rest.rstrip("\n")
    body, assertions = rest, []
    if "\n\n" in rest:
        head, tail = rest.rsplit("\n\n", 1)
        kinds = [classify_assertion(line) for line in tail.split("\n")]
        if kinds and all(k is not None for k in kinds):
            body = head
            assertions = [
                Assertion(id=assertion_id(i, kind), kind=kind, source=line)
                for i, (kind, line) in enumerate(zip(kinds, tail.split("\n"), strict=True), start=1)
                if kind is not None
            ]
    return ConformanceTest(name=name, tag=tag, body=body, assertions=tuple(assertions))


def classify_assertion(line: str) -> AssertionKind | None:
    """Tipo de uma linha de asserção pelo helper que ela chama, ou ``None``."""
    if line.startswith("$assert.callable("):
        return AssertionKind.CALLABLE
    if line.startswith("$assert.compareArray(keys("):
        return AssertionKind.KEY_ORDER
    if line.startswith("$verifyProperty("):
        return AssertionKind.PROP_ATTR
    if not line.startswith("$assert.sameValue("):
        return None
    try:
        tokens = minilang_parser().tokenize(line)
    except ParseFailureError:
        return None
    expected = _second_argument(tokens)
    if expected and expected[0].kind == "IDENT":
        return AssertionKind.OBJ_VALUE
    return AssertionKind.VAR_VALUE


def _second_argument(tokens: list[Token]) -> list[Token]:
    depth = 0
    start = None
    for i, token in enumerate(tokens):
        if token.text in {"(", "[", "{"}:
            depth += 1
        elif token.text in {")", "]", "}"}:
            depth -= 1
            if depth == 0 and start is not None:
                return tokens[start:i]
        elif token.text == "," and depth == 1:
            start = i + 1
    return []
