"""Cobertura sintática: fração de alternativas alcançáveis exercitadas por um corpus."""

from __future__ import annotations

from typing import TYPE_CHECKING

from pydantic import BaseModel

from .parser import EarleyParser

if TYPE_CHECKING:
    from collections.abc import Iterable

    from .model import Grammar


class SyntacticCoverage(BaseModel):
    ratio: float
    covered: int
    reachable: int
    uncovered: list[tuple[str, int]]


def reachable_alternatives(grammar: Grammar) -> list[tuple[str, int]]:
    return [
        (rule.lhs, rule.alt_index)
        for nt in grammar.reachable()
        for rule in grammar.alternatives(nt)
    ]


def coverage_of_alternatives(seen: Iterable[tuple[str, int]], grammar: Grammar) -> SyntacticCoverage:
    """Cobertura a partir dos pares (produção, alternativa) já coletados das árvores."""
    seen = set(seen)
    universe = reachable_alternatives(grammar)
    covered = [alt for alt in universe if alt in seen]
    return SyntacticCoverage(
        ratio=len(covered) / len(universe) if universe and seen else 0.0,
        covered=len(covered),
        reachable=len(universe),
        uncovered=[alt for alt in universe if alt not in seen],
    )


def syntactic_coverage(programs: Iterable[str], grammar: Grammar) -> SyntacticCoverage:
    """Mede quais pares (produção, alternativa) alcançáveis as árvores dos programas usam.

    Raises:
        ParseFailureError: Algum programa não é aceito pela gramática.

    """
    parser = EarleyParser(grammar)
    seen: set[tuple[str, int]] = set()
    for program in programs:
        seen |= parser.parse(program).alternatives()
    return coverage_of_alternatives(seen, grammar)
