"""Fixtures compartilhadas: gramática MemberExpression reduzida e atalhos de avaliação."""

from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from minilang_testing.engines import EngineHandle, ResultMatrix, TestOutcome, TestStatus
from minilang_testing.grammar import Grammar, parse
from minilang_testing.injector import inject
from minilang_testing.spec import evaluate

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from minilang_testing.injector import ConformanceTest
    from minilang_testing.spec import CoverageMap, FinalState, SpecBug

MEMBER_EXPRESSION_GRAMMAR = """
MemberExpression ::= PrimaryExpression | MemberExpression "[" Expression "]" | MemberExpression "." IDENT | "new" MemberExpression Arguments
PrimaryExpression ::= IDENT
Expression ::= IDENT
Arguments ::= "(" ")" | "(" ArgumentList ")" | "(" ArgumentList "," ")"
ArgumentList ::= Expression | "..." Expression
"""


@pytest.fixture
def member_grammar() -> Grammar:
    return Grammar.from_text(MEMBER_EXPRESSION_GRAMMAR)


@pytest.fixture
def run_spec() -> Callable[..., tuple[FinalState, CoverageMap]]:
    def _run(source: str, *bugs: SpecBug) -> tuple[FinalState, CoverageMap]:
        return evaluate(parse(source), bugs)

    return _run


@pytest.fixture
def make_test() -> Callable[..., ConformanceTest]:
    """Teste de conformidade gerado pela semântica de referência."""

    def _make(source: str, *bugs: SpecBug, name: str = "t0001") -> ConformanceTest:
        tree = parse(source)
        state, _ = evaluate(tree, bugs)
        return inject(tree, state, name)

    return _make


@pytest.fixture
def engines() -> list[EngineHandle]:
    return [EngineHandle(id=f"e{i}") for i in range(1, 5)]


def build_matrix(
    rows: dict[str, Sequence[TestStatus]],
    engines: Sequence[str] = ("e1", "e2", "e3", "e4"),
    *,
    coverage: dict[str, CoverageMap] | None = None,
    tags: dict[str, str] | None = None,
    message: str = "Test262Error: a001-VarValue",
) -> ResultMatrix:
    """Matriz sintética: cada linha lista o status por engine."""
    tags = tags or {}
    cells = [
        [
            TestOutcome(
                engine_id=engine,
                status=status,
                message="" if status is TestStatus.PASS else message,
                abort_tagged=tags.get(test) == "Abort",
            )
            for engine, status in zip(engines, statuses, strict=True)
        ]
        for test, statuses in rows.items()
    ]
    return ResultMatrix(
        tests=list(rows),
        engines=list(engines),
        cells=cells,
        coverage=coverage or {},
        tags={test: tags.get(test, "Normal") for test in rows},
    )
