"""Estruturas de execução compartilhadas: escopos, closures, builtins e helpers do harness.

A semântica de referência e os engines usam os mesmos registros de heap e os mesmos
predicados dos helpers de asserção; a avaliação em si é independente em cada um.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .values import (
    UNDEFINED,
    Heap,
    ObjectKind,
    ObjectRecord,
    PropertySlot,
    Ref,
    Value,
    same_value,
)

if TYPE_CHECKING:
    from collections.abc import Callable

    from .grammar.ast import Param, Statement

HARNESS_ERROR = "Test262Error"
ASSERT_OBJECT = "$assert"
VERIFY_PROPERTY = "$verifyProperty"
BUILTIN_FUNCTIONS = ("arr", "keys", "freeze", "indexOf", "push")
BUILTIN_CONSTANTS: dict[str, Value] = {"NaN": math.nan, "Infinity": math.inf}


@dataclass(slots=True)
class Binding:
    value: Value
    initialized: bool = True
    mutable: bool = True


@dataclass(slots=True)
class Scope:
    parent: Scope | None = None
    bindings: dict[str, Binding] = field(default_factory=dict)

    def lookup(self, name: str) -> Scope | None:
        scope: Scope | None = self
        while scope is not None:
            if name in scope.bindings:
                return scope
            scope = scope.parent
        return None


@dataclass(frozen=True, slots=True)
class Closure:
    params: tuple[Param, ...]
    body: tuple[Statement, ...]
    scope: Scope
    name: str = ""

    @property
    def length(self) -> int:
        """Quantidade de parâmetros antes do primeiro com valor padrão."""
        count = 0
        for param in self.params:
            if param.default is not None:
                break
            count += 1
        return count


# -----------------------------------------------------------------------------
# Helpers do harness
# -----------------------------------------------------------------------------


def _arg(args: list[Value], i: int) -> Value:
    return args[i] if i < len(args) else UNDEFINED


def _array_items(heap: Heap, value: Value) -> list[Value] | None:
    if not isinstance(value, Ref):
        return None
    props = heap[value].properties
    length = props.get("length")
    if length is None or not isinstance(length.value, float) or type(length.value) is bool:
        return None
    return [
        props[str(i)].value if str(i) in props else UNDEFINED
        for i in range(int(length.value))
    ]


def check_same_value(_heap: Heap, args: list[Value]) -> bool:
    return same_value(_arg(args, 0), _arg(args, 1))


def check_compare_array(heap: Heap, args: list[Value]) -> bool:
    actual = _array_items(heap, _arg(args, 0))
    expected = _array_items(heap, _arg(args, 1))
    if actual is None or expected is None or len(actual) != len(expected):
        return False
    return all(same_value(a, e) for a, e in zip(actual, expected, strict=True))


def check_callable(heap: Heap, args: list[Value]) -> bool:
    value = _arg(args, 0)
    return isinstance(value, Ref) and heap[value].callable


def check_property(heap: Heap, args: list[Value]) -> bool:
    """``$verifyProperty(obj, key, {value?, writable?})``."""
    target, key, descriptor = _arg(args, 0), _arg(args, 1), _arg(args, 2)
    if not isinstance(target, Ref) or not isinstance(key, str):
        return False
    slot = heap[target].properties.get(key)
    if slot is None:
        return False
    if not isinstance(descriptor, Ref):
        return True
    expected = heap[descriptor].properties
    if "value" in expected and not same_value(slot.value, expected["value"].value):
        return False
    return "writable" not in expected or expected["writable"].value is slot.writable


HARNESS_CHECKS: dict[str, Callable[[Heap, list[Value]], bool]] = {
    f"{ASSERT_OBJECT}.sameValue": check_same_value,
    f"{ASSERT_OBJECT}.compareArray": check_compare_array,
    f"{ASSERT_OBJECT}.callable": check_callable,
    VERIFY_PROPERTY: check_property,
}


def install_builtins(heap: Heap) -> Scope:
    """Cria o escopo imutável de builtins, pai do escopo global do programa."""
    scope = Scope()

    def native(name: str) -> Ref:
        return heap.allocate(ObjectRecord(kind=ObjectKind.FUNCTION, function=name))

    for name in BUILTIN_FUNCTIONS:
        scope.bindings[name] = Binding(native(name), mutable=False)
    for name, value in BUILTIN_CONSTANTS.items():
        scope.bindings[name] = Binding(value, mutable=False)
    helpers = ObjectRecord(frozen=True)
    for qualified in HARNESS_CHECKS:
        prefix, _, method = qualified.partition(".")
        if prefix == ASSERT_OBJECT:
            helpers.properties[method] = PropertySlot(native(qualified), writable=False)
    scope.bindings[ASSERT_OBJECT] = Binding(heap.allocate(helpers), mutable=False)
    scope.bindings[VERIFY_PROPERTY] = Binding(native(VERIFY_PROPERTY), mutable=False)
    return scope
