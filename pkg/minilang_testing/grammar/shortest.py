"""Cálculo de strings mais curtas por não-terminal com worklist FIFO."""

from __future__ import annotations

from collections import deque
from logging import getLogger
from typing import TYPE_CHECKING

from .exceptions import NonProductiveGrammarError
from .lexer import spaced_length
from .model import ShortestStringMap, SymbolKind

if TYPE_CHECKING:
    from .model import Grammar, ReductionRule

logger = getLogger(__name__)


def _candidate(
    rule: ReductionRule,
    grammar: Grammar,
    current: dict[str, tuple[str, ...]],
) -> tuple[str, ...] | None:
    tokens: list[str] = []
    for symbol in rule.alternative:
        if symbol.kind is SymbolKind.TERMINAL:
            tokens.append(symbol.name)
        elif symbol.kind is SymbolKind.LEXICAL:
            tokens.append(grammar.lexical_defaults[symbol.name])
        elif symbol.name in current:
            tokens.extend(current[symbol.name])
        else:
            return None
    return tuple(tokens)


def shortest_strings(grammar: Grammar) -> ShortestStringMap:
    """Calcula o mapa M de strings mais curtas até o ponto fixo.

    A worklist começa com todas as regras, em ordem. ``update(A, α)`` só aceita o candidato
    se todos os não-terminais de α já têm entrada e se ele é estritamente mais curto que
    M[A]; cada atualização reenfileira as regras que mencionam A.

    Args:
        grammar: Gramática validada.

    Returns:
        ShortestStringMap: Uma entrada por não-terminal.

    Raises:
        NonProductiveGrammarError: A worklist esvaziou com não-terminais sem entrada.

    """
    current: dict[str, tuple[str, ...]] = {}
    lengths: dict[str, int] = {}
    users: dict[str, list[ReductionRule]] = {nt: [] for nt in grammar.nonterminals}
    for rule in grammar.rules:
        for symbol in rule.alternative:
            if symbol.kind is SymbolKind.NONTERMINAL and rule not in users[symbol.name]:
                users[symbol.name].append(rule)

    worklist: deque[ReductionRule] = deque(grammar.rules)
    pending = set(range(len(grammar.rules)))
    position = {id(rule): i for i, rule in enumerate(grammar.rules)}
    updates = 0
    while worklist:
        rule = worklist.popleft()
        pending.discard(position[id(rule)])
        candidate = _candidate(rule, grammar, current)
        if candidate is None:
            continue
        length = spaced_length(candidate)
        if rule.lhs in lengths and length >= lengths[rule.lhs]:
            continue
        current[rule.lhs] = candidate
        lengths[rule.lhs] = length
        updates += 1
        # propagate: reenfileira quem menciona o não-terminal atualizado
        for user in users[rule.lhs]:
            idx = position[id(user)]
            if idx not in pending:
                pending.add(idx)
                worklist.append(user)

    missing = sorted(grammar.nonterminals - current.keys())
    if missing:
        raise NonProductiveGrammarError(missing)
    logger.debug("Strings mais curtas: %d não-terminais, %d atualizações", len(current), updates)
    return ShortestStringMap(tokens=current)
