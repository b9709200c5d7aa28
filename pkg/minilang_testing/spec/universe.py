"""Universo de cobertura e bancos de strings/chaves, extraídos do código do interpretador.

A extração lê ``interpreter.py`` com o módulo :mod:`ast`: cada função que abre um rastro
(``t = self._enter("Nome")``) define um algoritmo; chamadas ``t.step(n)`` e
``t.branch(n, ...)`` definem os passos e os pontos de desvio. Assim o universo nunca
diverge do código instrumentado.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from functools import cache
from logging import getLogger
from pathlib import Path
from typing import TYPE_CHECKING

from minilang_testing.exceptions import FrameworkDefectError
from minilang_testing.values import is_identifier_name

from . import interpreter
from .model import CoverageMap, SpecAlgorithm

if TYPE_CHECKING:
    from collections.abc import Iterable

logger = getLogger(__name__)

_PROPERTY_HELPERS = frozenset({"_get_property", "_set_property", "_define_property"})


@dataclass(slots=True)
class SpecUniverse:
    """Algoritmos declarados e os bancos usados pelas mutações de substituição."""

    algorithms: dict[str, SpecAlgorithm] = field(default_factory=dict)
    string_bank: tuple[str, ...] = ()
    key_bank: tuple[str, ...] = ()

    @property
    def step_count(self) -> int:
        return sum(len(a.steps) for a in self.algorithms.values())

    @property
    def branch_outcome_count(self) -> int:
        return sum(arity for a in self.algorithms.values() for _, arity in a.branch_points)

    def branch_outcomes(self) -> list[tuple[str, int, bool]]:
        """Todos os resultados de desvio, em ordem determinística."""
        return [
            (name, step, outcome)
            for name in sorted(self.algorithms)
            for step, _ in self.algorithms[name].branch_points
            for outcome in (True, False)
        ]

    def step_ids(self) -> list[tuple[str, int]]:
        return [(name, step) for name in sorted(self.algorithms) for step in self.algorithms[name].steps]


class _Harvester(ast.NodeVisitor):
    def __init__(self) -> None:
        self.steps: dict[str, set[int]] = {}
        self.branches: dict[str, set[int]] = {}
        self.strings: set[str] = set()
        self.keys: set[str] = set()

    def visit_FunctionDef(self, node: ast.FunctionDef) -> None:  # noqa: N802
        traces = self._trace_variables(node)
        if not traces:
            self.generic_visit(node)
            return
        for name in traces.values():
            self.steps.setdefault(name, set())
            self.branches.setdefault(name, set())
        for child in ast.walk(node):
            if not isinstance(child, ast.Call):
                continue
            self._harvest_keys(child)
            func = child.func
            if not (
                isinstance(func, ast.Attribute)
                and isinstance(func.value, ast.Name)
                and func.value.id in traces
                and func.attr in {"step", "branch"}
            ):
                continue
            algorithm = traces[func.value.id]
            step = child.args[0]
            if not isinstance(step, ast.Constant) or not isinstance(step.value, int):
                msg = f"Passo não literal em {algorithm} (linha {child.lineno})"
                raise FrameworkDefectError(msg)
            self.steps[algorithm].add(step.value)
            if func.attr == "branch":
                self.branches[algorithm].add(step.value)
                for inner in ast.walk(child.args[1]):
                    if isinstance(inner, ast.Constant) and isinstance(inner.value, str):
                        self.strings.add(inner.value)
        for child in ast.walk(node):
            if isinstance(child, ast.Tuple):
                self.keys.update(
                    e.value
                    for e in child.elts
                    if isinstance(e, ast.Constant) and isinstance(e.value, str) and is_identifier_name(e.value)
                )

    def _harvest_keys(self, call: ast.Call) -> None:
        func = call.func
        if isinstance(func, ast.Attribute) and func.attr in _PROPERTY_HELPERS:
            for arg in call.args:
                if isinstance(arg, ast.Constant) and isinstance(arg.value, str):
                    self.keys.add(arg.value)

    @staticmethod
    def _trace_variables(node: ast.FunctionDef) -> dict[str, str]:
        traces: dict[str, str] = {}
        for stmt in ast.walk(node):
            if not (isinstance(stmt, ast.Assign) and isinstance(stmt.value, ast.Call)):
                continue
            call = stmt.value
            if (
                isinstance(call.func, ast.Attribute)
                and call.func.attr == "_enter"
                and call.args
                and isinstance(call.args[0], ast.Constant)
                and isinstance(stmt.targets[0], ast.Name)
            ):
                traces[stmt.targets[0].id] = str(call.args[0].value)
        return traces


def harvest(source: str) -> SpecUniverse:
    """Extrai algoritmos, passos, desvios e bancos de um código-fonte instrumentado.

    Raises:
        FrameworkDefectError: Passos não densos (1..n) ou número de passo não literal.

    """
    harvester = _Harvester()
    harvester.visit(ast.parse(source))
    algorithms: dict[str, SpecAlgorithm] = {}
    for name in sorted(harvester.steps):
        steps = sorted(harvester.steps[name])
        if steps != list(range(1, len(steps) + 1)):
            msg = f"Passos de {name} não são densos: {steps}"
            raise FrameworkDefectError(msg)
        algorithms[name] = SpecAlgorithm(
            name=name,
            steps=tuple(steps),
            branch_points=tuple((step, 2) for step in sorted(harvester.branches[name])),
        )
    universe = SpecUniverse(
        algorithms=algorithms,
        string_bank=tuple(sorted(harvester.strings)),
        key_bank=tuple(sorted(harvester.keys)),
    )
    logger.debug(
        "Universo: %d algoritmos, %d passos, %d resultados de desvio",
        len(algorithms),
        universe.step_count,
        universe.branch_outcome_count,
    )
    return universe


@cache
def spec_universe() -> SpecUniverse:
    """Universo da semântica de referência embarcada."""
    return harvest(Path(interpreter.__file__).read_text("utf-8"))


def semantic_coverage_ratio(
    maps: Iterable[CoverageMap],
    universe: SpecUniverse | None = None,
) -> tuple[float, float]:
    """Razões (passos, resultados de desvio) cobertas pela união dos mapas.

    Args:
        maps: Mapas de cobertura de um corpus.
        universe: Universo de referência (padrão: o embarcado).

    Returns:
        ``(statement_ratio, branch_ratio)``; ``(0, 0)`` para um conjunto vazio.

    """
    universe = universe or spec_universe()
    merged = CoverageMap()
    for coverage in maps:
        merged |= coverage
    steps = {s for s in merged.steps if s[0] in universe.algorithms}
    branches = {b for b in merged.branches if b[0] in universe.algorithms}
    total_steps = universe.step_count
    total_branches = universe.branch_outcome_count
    return (
        len(steps) / total_steps if total_steps else 0.0,
        len(branches) / total_branches if total_branches else 0.0,
    )
