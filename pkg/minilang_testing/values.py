"""Valores e registros de heap compartilhados pela semântica de referência e pelos engines.

Números são sempre ``float`` (com zero com sinal, NaN e infinitos), strings são ``str``,
booleanos ``bool``; ``null``/``undefined`` são membros de :class:`Special` e objetos são
referências :class:`Ref` para o heap da execução.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum, StrEnum
from typing import Any

type Value = float | str | bool | Special | Ref

MAX_SAFE_INDEX = 2**32 - 2

_IDENTIFIER_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_DECIMAL_RE = re.compile(r"[+-]?(?:Infinity|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)")
_HEX_RE = re.compile(r"0[xX][0-9a-fA-F]+")


class Special(Enum):
    UNDEFINED = "undefined"
    NULL = "null"


UNDEFINED = Special.UNDEFINED
NULL = Special.NULL


@dataclass(frozen=True, slots=True)
class Ref:
    """Referência para um :class:`ObjectRecord` no heap."""

    index: int


class ValueType(StrEnum):
    UNDEFINED = "Undefined"
    NULL = "Null"
    BOOLEAN = "Boolean"
    NUMBER = "Number"
    STRING = "String"
    OBJECT = "Object"


class ObjectKind(StrEnum):
    ORDINARY = "ordinary"
    ARRAY = "array"
    FUNCTION = "function"
    ERROR = "error"


@dataclass(slots=True)
class PropertySlot:
    value: Value
    writable: bool = True


@dataclass(slots=True)
class ObjectRecord:
    """Objeto do heap: propriedades em ordem de criação, flags de chamada e congelamento.

    ``function`` guarda o comportamento de chamada (closure ou builtin) e é opaco aqui:
    cada interpretador define o próprio formato.
    """

    kind: ObjectKind = ObjectKind.ORDINARY
    properties: dict[str, PropertySlot] = field(default_factory=dict)
    frozen: bool = False
    function: Any = None
    error_name: str | None = None

    @property
    def callable(self) -> bool:
        return self.kind is ObjectKind.FUNCTION


class Heap:
    """Heap indexado de uma execução."""

    def __init__(self) -> None:
        self._records: list[ObjectRecord] = []

    def allocate(self, record: ObjectRecord) -> Ref:
        self._records.append(record)
        return Ref(len(self._records) - 1)

    def __getitem__(self, ref: Ref) -> ObjectRecord:
        return self._records[ref.index]

    def __len__(self) -> int:
        return len(self._records)

    @property
    def records(self) -> list[ObjectRecord]:
        return self._records


# -----------------------------------------------------------------------------
# Tipos e conversões primitivas
# -----------------------------------------------------------------------------


def type_of(value: Value) -> ValueType:  # noqa: PLR0911
    """Classifica um valor no tipo da linguagem.

    ``bool`` é testado antes de ``float`` para nunca confundir ``true`` com ``1``.
    """
    if type(value) is bool:
        return ValueType.BOOLEAN
    if isinstance(value, float):
        return ValueType.NUMBER
    if isinstance(value, str):
        return ValueType.STRING
    if value is UNDEFINED:
        return ValueType.UNDEFINED
    if value is NULL:
        return ValueType.NULL
    if isinstance(value, Ref):
        return ValueType.OBJECT
    msg = f"Valor fora do domínio da linguagem: {value!r}"
    raise TypeError(msg)


def is_negative_zero(value: Value) -> bool:
    return isinstance(value, float) and value == 0 and math.copysign(1.0, value) < 0


def number_to_string(x: float) -> str:  # noqa: PLR0911
    """Formata um número como Number::toString (menor representação que volta ao mesmo valor).

    Args:
        x: Número a ser formatado.

    Returns:
        Texto canônico do número (``"-0"`` vira ``"0"``).

    """
    if math.isnan(x):
        return "NaN"
    if x == 0:
        return "0"
    if x < 0:
        return "-" + number_to_string(-x)
    if math.isinf(x):
        return "Infinity"
    _, digit_tuple, exponent = Decimal(repr(x)).as_tuple()
    digits = "".join(map(str, digit_tuple)).rstrip("0") or "0"
    # repr pode trazer zeros à direita ("100.0"): o expoente absorve os removidos.
    exponent = int(exponent) + len(digit_tuple) - len(digits)
    k = len(digits)
    n = exponent + k
    if k <= n <= 21:  # noqa: PLR2004
        return digits + "0" * (n - k)
    if 0 < n <= 21:  # noqa: PLR2004
        return digits[:n] + "." + digits[n:]
    if -6 < n <= 0:  # noqa: PLR2004
        return "0." + "0" * (-n) + digits
    e = n - 1
    exp_sign = "+" if e >= 0 else "-"
    mantissa = digits if k == 1 else digits[0] + "." + digits[1:]
    return f"{mantissa}e{exp_sign}{abs(e)}"


def string_to_number(text: str) -> float:
    """Converte uma string em número; strings vazias viram 0 e lixo vira NaN."""
    stripped = text.strip()
    if not stripped:
        return 0.0
    if _HEX_RE.fullmatch(stripped):
        return float(int(stripped, 16))
    if _DECIMAL_RE.fullmatch(stripped):
        if stripped.lstrip("+-") == "Infinity":
            return -math.inf if stripped.startswith("-") else math.inf
        return float(stripped)
    return math.nan


def same_value(x: Value, y: Value) -> bool:
    """SameValue: distingue ``-0`` de ``+0`` e considera NaN igual a NaN."""
    if type_of(x) is not type_of(y):
        return False
    if isinstance(x, float) and isinstance(y, float):
        if math.isnan(x) and math.isnan(y):
            return True
        if x == 0 and y == 0:
            return math.copysign(1.0, x) == math.copysign(1.0, y)
    return x == y


def strictly_equal(x: Value, y: Value) -> bool:
    """Igualdade estrita sem rastreamento: NaN nunca é igual e ``-0 === +0``."""
    if type_of(x) is not type_of(y):
        return False
    return x == y


def is_array_index(key: str) -> bool:
    return key.isdigit() and str(int(key)) == key and int(key) <= MAX_SAFE_INDEX


def is_identifier_name(text: str) -> bool:
    return _IDENTIFIER_RE.fullmatch(text) is not None


# -----------------------------------------------------------------------------
# Codificação canônica (JSON)
# -----------------------------------------------------------------------------


def encode_value(value: Value) -> dict[str, Any]:
    """Codifica um valor como objeto JSON com tag explícita de tipo.

    Números usam o texto canônico, exceto ``-0`` que fica preservado.
    """
    kind = type_of(value)
    if isinstance(value, float) and kind is ValueType.NUMBER:
        return {"number": "-0" if is_negative_zero(value) else number_to_string(value)}
    if isinstance(value, Ref):
        return {"ref": value.index}
    if kind in {ValueType.UNDEFINED, ValueType.NULL}:
        return {kind.value.lower(): True}
    return {kind.value.lower(): value}


def encode_record(record: ObjectRecord) -> dict[str, Any]:
    return {
        "kind": record.kind.value,
        "callable": record.callable,
        "frozen": record.frozen,
        "error": record.error_name,
        "properties": [
            {"key": key, "value": encode_value(slot.value), "writable": slot.writable}
            for key, slot in record.properties.items()
        ],
    }


def divide(x: float, y: float) -> float:
    """Divisão IEEE 754: divisor zero produz infinito com sinal ou NaN."""
    if y == 0:
        if x == 0 or math.isnan(x):
            return math.nan
        return math.copysign(math.inf, x) * math.copysign(1.0, y)
    return x / y


def to_length(x: float) -> int:
    """Trunca para um comprimento válido (NaN e negativos viram 0)."""
    if math.isnan(x) or x <= 0:
        return 0
    return int(min(x, 2**53 - 1))
