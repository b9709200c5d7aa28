from __future__ import annotations

from enum import StrEnum

from pydantic import BaseModel, ConfigDict

ABORT_TAG = "Abort"
NORMAL_TAG = "Normal"
THROW_TAG = "Throw"


class AssertionKind(StrEnum):
    VAR_VALUE = "VarValue"
    OBJ_VALUE = "ObjValue"
    PROP_ATTR = "PropAttr"
    KEY_ORDER = "KeyOrder"
    CALLABLE = "Callable"


class Assertion(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    kind: AssertionKind
    source: str


class ConformanceTest(BaseModel):
    """Programa + tag de terminação + asserções renderizadas depois do corpo."""

    model_config = ConfigDict(frozen=True)

    name: str = ""
    tag: str
    body: str
    assertions: tuple[Assertion, ...] = ()

    @property
    def abort_tagged(self) -> bool:
        return self.tag == ABORT_TAG

    @property
    def assertion_ids(self) -> list[str]:
        return [a.id for a in self.assertions]


def assertion_id(index: int, kind: AssertionKind) -> str:
    """Identificador estável: ordinal (1-based) e tipo, p.ex. ``a003-VarValue``."""
    return f"a{index:03d}-{kind.value}"
