"""Injeção de asserções a partir do estado final da semântica de referência."""

from __future__ import annotations

import math
from logging import getLogger
from typing import TYPE_CHECKING

from minilang_testing.grammar import minilang_grammar
from minilang_testing.grammar.lexer import encode_string
from minilang_testing.runtime import ASSERT_OBJECT, VERIFY_PROPERTY
from minilang_testing.spec.model import TerminationKind
from minilang_testing.values import (
    NULL,
    UNDEFINED,
    Ref,
    Value,
    is_array_index,
    is_identifier_name,
    is_negative_zero,
    number_to_string,
)

from .model import Assertion, AssertionKind, ConformanceTest, assertion_id

if TYPE_CHECKING:
    from minilang_testing.grammar.parser import SyntaxTree
    from minilang_testing.spec.model import FinalState

logger = getLogger(__name__)

SAME_VALUE = f"{ASSERT_OBJECT}.sameValue"
COMPARE_ARRAY = f"{ASSERT_OBJECT}.compareArray"
CALLABLE = f"{ASSERT_OBJECT}.callable"


def render_literal(value: Value) -> str:
    """Texto MiniLang que avalia para o valor primitivo ``value``.

    Não usa os globais ``NaN``/``Infinity``, que o programa pode redefinir.
    """
    if value is UNDEFINED:
        return "undefined"
    if value is NULL:
        return "null"
    if type(value) is bool:
        return "true" if value else "false"
    if isinstance(value, str):
        return encode_string(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "0 / 0"
        if is_negative_zero(value):
            return "-0"
        if value < 0:
            return "-" + render_literal(-value)
        return "1 / 0" if math.isinf(value) else number_to_string(value)
    msg = f"Valor sem literal: {value!r}"
    raise TypeError(msg)


def child_path(path: str, key: str) -> str:
    """Caminho de acesso a ``key`` a partir de ``path`` (``x.p``, ``x[0]`` ou ``x["k"]``)."""
    if is_array_index(key):
        return f"{path}[{key}]"
    if is_identifier_name(key) and key not in minilang_grammar().keywords:
        return f"{path}.{key}"
    return f"{path}[{encode_string(key)}]"


class _Injector:
    """Percorre globais em ordem de nome e o heap em profundidade, fixando caminhos."""

    def __init__(self, state: FinalState) -> None:
        self._state = state
        self._representatives: dict[int, str] = {}
        self._keys_shadowed = "keys" in state.globals
        self._out: list[tuple[AssertionKind, str]] = []

    def collect(self) -> list[tuple[AssertionKind, str]]:
        for name in sorted(self._state.globals):
            value = self._state.globals[name]
            if isinstance(value, Ref):
                self._visit_object(name, value)
            else:
                self._emit(AssertionKind.VAR_VALUE, f"{SAME_VALUE}({name}, {render_literal(value)});")
                if isinstance(value, float) and value == 0:
                    infinity = render_literal(-math.inf if is_negative_zero(value) else math.inf)
                    self._emit(AssertionKind.VAR_VALUE, f"{SAME_VALUE}(1 / {name}, {infinity});")
        return self._out

    def _emit(self, kind: AssertionKind, source: str) -> None:
        self._out.append((kind, source))

    def _visit_object(self, path: str, ref: Ref) -> None:
        record = self._state.heap[ref.index]
        if isinstance(record.function, str):
            # Builtin: o caminho representativo é o próprio nome global.
            self._emit(AssertionKind.OBJ_VALUE, f"{SAME_VALUE}({path}, {record.function});")
            return
        if ref.index in self._representatives:
            self._emit(AssertionKind.OBJ_VALUE, f"{SAME_VALUE}({path}, {self._representatives[ref.index]});")
            return
        self._representatives[ref.index] = path
        if record.callable:
            self._emit(AssertionKind.CALLABLE, f"{CALLABLE}({path});")
        if not self._keys_shadowed:
            keys = ", ".join(encode_string(k) for k in record.properties)
            self._emit(AssertionKind.KEY_ORDER, f"{COMPARE_ARRAY}(keys({path}), [{keys}]);")
        for key, slot in record.properties.items():
            writable = "true" if slot.writable else "false"
            if isinstance(slot.value, Ref):
                self._emit(
                    AssertionKind.PROP_ATTR,
                    f"{VERIFY_PROPERTY}({path}, {encode_string(key)}, {{writable: {writable}}});",
                )
                self._visit_object(child_path(path, key), slot.value)
            else:
                self._emit(
                    AssertionKind.PROP_ATTR,
                    f"{VERIFY_PROPERTY}({path}, {encode_string(key)}, "
                    f"{{value: {render_literal(slot.value)}, writable: {writable}}});",
                )


def inject(program: SyntaxTree | str, state: FinalState, name: str = "") -> ConformanceTest:
    """Converte um programa em teste de conformidade usando seu estado final.

    Args:
        program: Árvore (renderizada via ``unparse``) ou código-fonte já renderizado.
        state: Estado final da avaliação do mesmo programa.
        name: Nome do teste no corpus.

    Returns:
        Teste com tag de terminação; só ``Normal`` recebe asserções.

    """
    body = program if isinstance(program, str) else program.unparse()
    termination = state.termination
    assertions: list[Assertion] = []
    if termination.kind is TerminationKind.NORMAL_EXIT:
        collected = _Injector(state).collect()
        assertions = [
            Assertion(id=assertion_id(i, kind), kind=kind, source=source)
            for i, (kind, source) in enumerate(collected, start=1)
        ]
    logger.debug("Teste %s: tag %s, %d asserções", name or "-", termination.tag, len(assertions))
    return ConformanceTest(name=name, tag=termination.tag, body=body, assertions=tuple(assertions))
