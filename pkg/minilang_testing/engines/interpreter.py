"""Engine MiniLang em processo: interpretador direto sobre o AST, com bugs semeados opcionais.

Diferente da semântica de referência, não há registros de conclusão nem rastreamento:
``throw``, ``return`` e ``break`` viram exceções Python e o escopo é passado explicitamente.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from logging import getLogger
from typing import TYPE_CHECKING

from minilang_testing.grammar.ast import (
    ArrayLiteral,
    Assign,
    Binary,
    Block,
    Break,
    Call,
    ExprStmt,
    FunctionDecl,
    FunctionExpression,
    Identifier,
    If,
    Literal,
    Member,
    ObjectLiteral,
    Return,
    Throw,
    Try,
    Unary,
    Update,
    VarDecl,
    While,
    declared_names,
)
from minilang_testing.runtime import (
    HARNESS_CHECKS,
    HARNESS_ERROR,
    Binding,
    Closure,
    Scope,
    install_builtins,
)
from minilang_testing.values import (
    NULL,
    UNDEFINED,
    Heap,
    ObjectKind,
    ObjectRecord,
    PropertySlot,
    Ref,
    Value,
    ValueType,
    divide,
    is_array_index,
    number_to_string,
    string_to_number,
    to_length,
    type_of,
)

from .exceptions import EngineTimeoutError
from .model import EngineBug

if TYPE_CHECKING:
    from collections.abc import Iterable

    from minilang_testing.grammar.ast import Expression, Program, Statement

logger = getLogger(__name__)

_TICKS_PER_CLOCK_CHECK = 512


class _ThrownError(Exception):
    def __init__(self, value: Value) -> None:
        super().__init__("throw")
        self.value = value


class _BreakSignalError(Exception):
    pass


class _ReturnSignalError(Exception):
    def __init__(self, value: Value) -> None:
        super().__init__("return")
        self.value = value


@dataclass(frozen=True, slots=True)
class _Place:
    """Alvo de escrita/leitura: binding (``scope``) ou propriedade (``base``)."""

    key: str
    scope: Scope | None = None
    base: Value = UNDEFINED
    is_property: bool = False


@dataclass(frozen=True, slots=True)
class Execution:
    """Resultado observável: conclusão normal ou valor lançado e não capturado."""

    thrown: bool
    value: Value = UNDEFINED
    failed_assertion: int | None = None


class EngineInterpreter:
    def __init__(self, bugs: Iterable[EngineBug] = (), *, timeout: float | None = None) -> None:
        self._bugs = frozenset(bugs)
        self._deadline = time.monotonic() + timeout if timeout else None
        self._ticks = 0
        self.heap = Heap()
        self._global = Scope(install_builtins(self.heap))
        self._assertions = 0
        self._failed_assertion: int | None = None

    def execute(self, program: Program) -> Execution:
        """Executa o programa.

        Raises:
            EngineTimeoutError: Prazo esgotado.

        """
        try:
            self._hoist(program.body, self._global)
            self._run_block(program.body, self._global)
        except _ThrownError as exc:
            return Execution(thrown=True, value=exc.value, failed_assertion=self._failed_assertion)
        return Execution(thrown=False)

    def error_name(self, value: Value) -> str | None:
        if isinstance(value, Ref):
            return self.heap[value].error_name
        return None

    def _tick(self) -> None:
        self._ticks += 1
        if (
            self._deadline is not None
            and self._ticks % _TICKS_PER_CLOCK_CHECK == 0
            and time.monotonic() > self._deadline
        ):
            msg = "Prazo do engine esgotado"
            raise EngineTimeoutError(msg)

    def _fail(self, name: str) -> _ThrownError:
        error = ObjectRecord(kind=ObjectKind.ERROR, properties={"name": PropertySlot(name)}, error_name=name)
        return _ThrownError(self.heap.allocate(error))

    def _number(self, x: float) -> float:
        if EngineBug.NEG_ZERO_LOST in self._bugs and x == 0:
            return 0.0
        return x

    # --- instruções ---------------------------------------------------------------

    def _hoist(self, body: tuple[Statement, ...], scope: Scope) -> None:
        names, functions = declared_names(body)
        for name in names:
            scope.bindings.setdefault(name, Binding(UNDEFINED))
        for decl in functions:
            closure = Closure(decl.params, decl.body, scope, decl.name)
            scope.bindings[decl.name] = Binding(self._new_function(closure))

    def _run_block(self, body: tuple[Statement, ...], scope: Scope) -> None:
        for stmt in body:
            self._run(stmt, scope)

    def _run(self, stmt: Statement, scope: Scope) -> None:  # noqa: C901
        self._tick()
        match stmt:
            case VarDecl(name=name, init=init):
                if init is not None:
                    value = self._eval(init, scope)
                    self._store(self._binding_place(name, scope), value)
            case ExprStmt(expr=expr):
                self._eval(expr, scope)
            case Block(body=body):
                self._run_block(body, scope)
            case If(test=test, consequent=consequent, alternate=alternate):
                if self._truthy(self._eval(test, scope)):
                    self._run_block(consequent.body, scope)
                elif alternate is not None:
                    self._run_block(alternate.body, scope)
            case While(test=test, body=loop):
                while self._truthy(self._eval(test, scope)):
                    try:
                        self._run_block(loop.body, scope)
                    except _BreakSignalError:
                        break
            case FunctionDecl():
                pass
            case Return(argument=argument):
                raise _ReturnSignalError(UNDEFINED if argument is None else self._eval(argument, scope))
            case Throw(argument=argument):
                raise _ThrownError(self._eval(argument, scope))
            case Break():
                raise _BreakSignalError
            case Try(block=block, param=param, handler=handler):
                try:
                    self._run_block(block.body, scope)
                except _ThrownError as exc:
                    self._run_block(handler.body, Scope(scope, {param: Binding(exc.value)}))

    # --- expressões ---------------------------------------------------------------

    def _eval(self, expr: Expression, scope: Scope) -> Value:  # noqa: C901, PLR0911
        self._tick()
        match expr:
            case Identifier(name=name):
                return self._load(self._binding_place(name, scope))
            case Literal(value=value):
                return value
            case ArrayLiteral(elements=elements):
                return self._new_array([self._eval(e, scope) for e in elements])
            case ObjectLiteral(properties=properties):
                obj = self.heap.allocate(ObjectRecord())
                for prop in properties:
                    key = prop.key or ""
                    if prop.computed is not None:
                        key = self._to_key(self._eval(prop.computed, scope))
                    value = self._eval(prop.value, scope)
                    slots = self.heap[obj].properties
                    if key in slots:
                        slots[key].value = value
                    else:
                        slots[key] = PropertySlot(value)
                return obj
            case FunctionExpression(params=params, body=body):
                return self._new_function(Closure(params, body, scope))
            case Member():
                return self._load(self._member_place(expr, scope))
            case Call(callee=callee, arguments=arguments):
                function = self._eval(callee, scope)
                args = [self._eval(a, scope) for a in arguments]
                if not (isinstance(function, Ref) and self.heap[function].callable):
                    raise self._fail("TypeError")
                return self._invoke(function, args)
            case Update(op=op, prefix=prefix, target=target):
                place = self._place(target, scope)
                old = self._to_number(self._load(place))
                new = self._number(old + 1 if op == "++" else old - 1)
                self._store(place, new)
                return new if prefix else old
            case Unary(argument=argument):
                return self._number(-self._to_number(self._eval(argument, scope)))
            case Binary(op=op, left=left, right=right):
                return self._binary(op, self._eval(left, scope), self._eval(right, scope))
            case Assign(target=target, value=value_expr):
                place = self._place(target, scope)
                value = self._eval(value_expr, scope)
                self._store(place, value)
                return value
        msg = f"Expressão desconhecida: {expr!r}"
        raise TypeError(msg)

    def _binary(self, op: str, left: Value, right: Value) -> Value:  # noqa: PLR0911
        if op == "===":
            return self._strict_equals(left, right)
        if op == "==":
            return self._loose_equals(left, right)
        if op == "<":
            px, py = self._to_primitive(left, "number"), self._to_primitive(right, "number")
            if isinstance(px, str) and isinstance(py, str):
                return px < py
            nx, ny = self._to_number(px), self._to_number(py)
            return not (math.isnan(nx) or math.isnan(ny)) and nx < ny
        if op == "+":
            lp, rp = self._to_primitive(left), self._to_primitive(right)
            if isinstance(lp, str) or isinstance(rp, str):
                return self._to_string(lp) + self._to_string(rp)
            return self._number(self._to_number(lp) + self._to_number(rp))
        lnum = self._to_number(left)
        rnum = self._to_number(right)
        if op == "-":
            return self._number(lnum - rnum)
        return self._number(divide(lnum, rnum))

    # --- lugares ------------------------------------------------------------------

    def _binding_place(self, name: str, scope: Scope) -> _Place:
        return _Place(key=name, scope=scope.lookup(name))

    def _member_place(self, expr: Member, scope: Scope) -> _Place:
        base = self._eval(expr.obj, scope)
        key_value: Value = expr.name or ""
        if expr.index is not None:
            key_value = self._eval(expr.index, scope)
        if base is NULL or base is UNDEFINED:
            raise self._fail("TypeError")
        return _Place(key=self._to_key(key_value), base=base, is_property=True)

    def _place(self, target: Identifier | Member, scope: Scope) -> _Place:
        if isinstance(target, Identifier):
            return self._binding_place(target.name, scope)
        return self._member_place(target, scope)

    def _load(self, place: _Place) -> Value:
        if place.is_property:
            base = place.base
            if isinstance(base, Ref):
                return self._get(base, place.key)
            if isinstance(base, str) and place.key == "length":
                return float(len(base))
            return UNDEFINED
        if place.scope is None:
            raise self._fail("ReferenceError")
        binding = place.scope.bindings[place.key]
        if not binding.initialized:
            raise self._fail("ReferenceError")
        return binding.value

    def _store(self, place: _Place, value: Value) -> None:
        if place.is_property:
            if not isinstance(place.base, Ref):
                raise self._fail("TypeError")
            self._put(place.base, place.key, value)
            return
        if place.scope is None:
            self._global.bindings[place.key] = Binding(value)
            return
        binding = place.scope.bindings[place.key]
        if not binding.mutable:
            raise self._fail("TypeError")
        if not binding.initialized:
            raise self._fail("ReferenceError")
        binding.value = value

    # --- objetos ------------------------------------------------------------------

    def _get(self, obj: Ref, key: str) -> Value:
        slot = self.heap[obj].properties.get(key)
        return UNDEFINED if slot is None else slot.value

    def _put(self, obj: Ref, key: str, value: Value) -> None:
        record = self.heap[obj]
        silent = EngineBug.FROZEN_WRITE_SILENT in self._bugs and record.frozen
        slot = record.properties.get(key)
        if slot is not None:
            if not slot.writable and not silent:
                raise self._fail("TypeError")
            slot.value = value
            return
        if record.frozen and not silent:
            raise self._fail("TypeError")
        record.properties[key] = PropertySlot(value)
        if record.kind is ObjectKind.ARRAY and is_array_index(key):
            length = record.properties["length"]
            length.value = max(length.value, float(int(key) + 1))

    def _new_array(self, values: list[Value]) -> Ref:
        record = ObjectRecord(kind=ObjectKind.ARRAY)
        if EngineBug.KEYORDER_ENGINE in self._bugs:
            record.properties["length"] = PropertySlot(float(len(values)))
        for i, value in enumerate(values):
            record.properties[str(i)] = PropertySlot(value)
        record.properties.setdefault("length", PropertySlot(float(len(values))))
        return self.heap.allocate(record)

    def _new_function(self, closure: Closure) -> Ref:
        record = ObjectRecord(kind=ObjectKind.FUNCTION, function=closure)
        record.properties["length"] = PropertySlot(float(closure.length), writable=False)
        record.properties["name"] = PropertySlot(closure.name, writable=False)
        return self.heap.allocate(record)

    # --- chamadas -----------------------------------------------------------------

    def _invoke(self, function: Ref, args: list[Value]) -> Value:
        behavior = self.heap[function].function
        if isinstance(behavior, str):
            return self._builtin(behavior, args)
        scope = Scope(behavior.scope)
        eager = EngineBug.UNINIT_PARAM_UNDEFINED in self._bugs
        for param in behavior.params:
            scope.bindings[param.name] = Binding(UNDEFINED, initialized=eager)
        for i, param in enumerate(behavior.params):
            value = args[i] if i < len(args) else UNDEFINED
            if value is UNDEFINED and param.default is not None:
                value = self._eval(param.default, scope)
            binding = scope.bindings[param.name]
            binding.value = value
            binding.initialized = True
        self._hoist(behavior.body, scope)
        try:
            self._run_block(behavior.body, scope)
        except _ReturnSignalError as ret:
            return ret.value
        return UNDEFINED

    def _builtin(self, name: str, args: list[Value]) -> Value:  # noqa: C901, PLR0911, PLR0912
        first = args[0] if args else UNDEFINED
        if name in HARNESS_CHECKS:
            self._assertions += 1
            if not HARNESS_CHECKS[name](self.heap, args):
                self._failed_assertion = self._assertions
                raise self._fail(HARNESS_ERROR)
            return UNDEFINED
        if name == "arr":
            return self._new_array(list(args))
        if name == "freeze":
            if isinstance(first, Ref):
                record = self.heap[first]
                record.frozen = True
                for slot in record.properties.values():
                    slot.writable = False
            return first
        if not isinstance(first, Ref):
            raise self._fail("TypeError")
        if name == "keys":
            return self._new_array(list(self.heap[first].properties))
        length = to_length(self._to_number(self._get(first, "length")))
        if name == "push":
            count = float(length)
            for item in args[1:]:
                self._put(first, number_to_string(count), item)
                count += 1
            self._put(first, "length", count)
            return count
        # indexOf
        if length == 0:
            return -1.0
        start = 0.0
        if len(args) > 2:  # noqa: PLR2004
            n = self._to_number(args[2])
            start = 0.0 if math.isnan(n) else math.trunc(n)
        if start >= length:
            return -1.0
        if start < 0:
            start = max(length + start, 0)
        search = args[1] if len(args) > 1 else UNDEFINED
        for k in range(int(start), length):
            key = str(k)
            if key in self.heap[first].properties and self._strict_equals(self._get(first, key), search):
                return float(k)
        return -1.0

    # --- conversões ---------------------------------------------------------------

    def _strict_equals(self, x: Value, y: Value) -> bool:
        return type_of(x) is type_of(y) and x == y

    def _loose_equals(self, x: Value, y: Value) -> bool:  # noqa: PLR0911
        tx, ty = type_of(x), type_of(y)
        if tx is ty:
            return self._strict_equals(x, y)
        if {tx, ty} == {ValueType.NULL, ValueType.UNDEFINED}:
            return True
        if EngineBug.EQ_COERCE_WRONG in self._bugs and {tx, ty} == {ValueType.STRING, ValueType.BOOLEAN}:
            text, flag = (x, y) if tx is ValueType.STRING else (y, x)
            return text == ("true" if flag else "false")
        primitives = {ValueType.NUMBER, ValueType.STRING}
        if tx is ValueType.NUMBER and ty is ValueType.STRING:
            return self._loose_equals(x, self._to_number(y))
        if tx is ValueType.STRING and ty is ValueType.NUMBER:
            return self._loose_equals(self._to_number(x), y)
        if tx is ValueType.BOOLEAN:
            return self._loose_equals(self._to_number(x), y)
        if ty is ValueType.BOOLEAN:
            return self._loose_equals(x, self._to_number(y))
        if tx in primitives and ty is ValueType.OBJECT:
            return self._loose_equals(x, self._to_primitive(y))
        if tx is ValueType.OBJECT and ty in primitives:
            return self._loose_equals(self._to_primitive(x), y)
        return False

    def _to_primitive(self, value: Value, hint: str = "default") -> Value:
        if not isinstance(value, Ref):
            return value
        order = ("toString", "valueOf") if hint == "string" else ("valueOf", "toString")
        for key in order:
            method = self._get(value, key)
            if isinstance(method, Ref) and self.heap[method].callable:
                result = self._invoke(method, [])
                if not isinstance(result, Ref):
                    return result
        return "[object Function]" if self.heap[value].callable else "[object Object]"

    def _to_number(self, value: Value) -> float:
        if isinstance(value, Ref):
            return self._to_number(self._to_primitive(value, "number"))
        if type(value) is bool:
            return 1.0 if value else 0.0
        if isinstance(value, float):
            return value
        if isinstance(value, str):
            return string_to_number(value)
        return 0.0 if value is NULL else math.nan

    def _to_string(self, value: Value) -> str:
        if isinstance(value, Ref):
            return self._to_string(self._to_primitive(value, "string"))
        if isinstance(value, str):
            return value
        if type(value) is bool:
            return "true" if value else "false"
        if isinstance(value, float):
            return number_to_string(value)
        return "null" if value is NULL else "undefined"

    def _to_key(self, value: Value) -> str:
        return self._to_string(value)

    def _truthy(self, value: Value) -> bool:
        if type(value) is bool:
            return bool(value)
        if isinstance(value, float):
            return not (value == 0 or math.isnan(value))
        if isinstance(value, str):
            return value != ""
        return isinstance(value, Ref)
