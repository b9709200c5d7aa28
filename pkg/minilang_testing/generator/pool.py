"""Pool de programas: filtragem das sementes, seleção de alvo e crescimento guiado."""

from __future__ import annotations

import random
from logging import getLogger
from typing import TYPE_CHECKING

from minilang_testing.grammar import fragment_bank
from minilang_testing.spec import (
    ResourceLimitExceededError,
    evaluate,
    semantic_coverage_ratio,
    spec_universe,
)
from minilang_testing.spec.tracer import DEFAULT_FUEL, DEFAULT_MAX_DEPTH

from .exceptions import MutationFailedError
from .model import (
    CoveragePoint,
    GrowthResult,
    MethodStats,
    MutationContext,
    MutationMethod,
    PoolEntry,
    ProgramPool,
)
from .mutate import mutate

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from minilang_testing.grammar import SyntaxTree
    from minilang_testing.spec import CoverageMap, SpecBug, SpecUniverse

    from .model import BranchOutcome, Fragments

logger = getLogger(__name__)

DEFAULT_BUDGET = 2_000
RETRY_LIMIT = 20


def _coverage_of(
    tree: SyntaxTree,
    bugs: Iterable[SpecBug],
    fuel: int,
    max_depth: int,
) -> CoverageMap | None:
    try:
        _, coverage = evaluate(tree, bugs, fuel=fuel, max_depth=max_depth)
    except ResourceLimitExceededError as exc:
        logger.debug("Programa descartado (%s): %s", exc, tree.unparse())
        return None
    return coverage


def filter_seeds(
    seeds: Iterable[SyntaxTree],
    bugs: Iterable[SpecBug] = (),
    *,
    rng_seed: int = 0,
    fuel: int = DEFAULT_FUEL,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> ProgramPool:
    """Passada gulosa na ordem de entrada: fica a semente que acrescenta cobertura.

    Sementes que estouram os limites de avaliação não têm estado final e são descartadas.
    """
    bugs = tuple(bugs)
    pool = ProgramPool(rng_seed=rng_seed)
    total = 0
    for tree in seeds:
        total += 1
        source = tree.unparse()
        if source in pool:
            continue
        coverage = _coverage_of(tree, bugs, fuel, max_depth)
        if coverage is not None and coverage.adds_to(pool.cumulative):
            pool.admit(PoolEntry(tree=tree, coverage=coverage, source=source))
    logger.info("Filtragem: %d de %d sementes mantidas", len(pool), total)
    return pool


def select_target(pool: ProgramPool, uncovered: BranchOutcome, rng: random.Random) -> PoolEntry:
    """Escolhe o programa que cobre o outro lado do desvio ``uncovered``.

    Entre vários, o de menor texto (empates pela ordem do pool); sem nenhum, um membro
    aleatório.
    """
    algorithm, step, outcome = uncovered
    sibling = (algorithm, step, not outcome)
    coverers = [entry for entry in pool.entries if sibling in entry.coverage.branches]
    if coverers:
        return min(coverers, key=lambda entry: len(entry.source))
    return rng.choice(pool.entries)


def _point(iteration: int, pool: ProgramPool, universe: SpecUniverse) -> CoveragePoint:
    stmt, branch = semantic_coverage_ratio([pool.cumulative], universe)
    return CoveragePoint(iteration=iteration, stmt_ratio=stmt, branch_ratio=branch)


def grow_pool(
    pool: ProgramPool,
    budget: int = DEFAULT_BUDGET,
    bugs: Iterable[SpecBug] = (),
    *,
    methods: Sequence[MutationMethod] = tuple(MutationMethod),
    fragments: Fragments | None = None,
    universe: SpecUniverse | None = None,
    retry_limit: int = RETRY_LIMIT,
    fuel: int = DEFAULT_FUEL,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> GrowthResult:
    """Cresce o pool até esgotar o orçamento ou a cobertura de desvios.

    A cada iteração: escolhe o próximo desvio não coberto (rodízio), seleciona o alvo,
    aplica um método sorteado, avalia e admite o mutante se ele acrescentar cobertura.
    Um desvio sai do rodízio depois de ``retry_limit`` iterações sem ser coberto.

    Args:
        pool: Pool inicial (modificado no lugar).
        budget: Número máximo de iterações.
        bugs: Catálogo de bugs da especificação.
        methods: Métodos sorteados uniformemente.
        fragments: Fragmentos por não-terminal (padrão: os da gramática MiniLang).
        universe: Universo de cobertura (padrão: o embarcado).
        retry_limit: Tentativas por desvio em foco.
        fuel: Limite de passos por avaliação.
        max_depth: Limite de profundidade de chamadas por avaliação.

    Returns:
        O pool, o histórico de cobertura por iteração e as estatísticas por método.

    """
    bugs = tuple(bugs)
    universe = universe or spec_universe()
    fragments = fragments if fragments is not None else fragment_bank()
    rng = random.Random(pool.rng_seed)
    result = GrowthResult(
        pool=pool,
        history=[_point(0, pool, universe)],
        stats={method: MethodStats(method=method) for method in methods},
    )
    if not pool.entries:
        logger.warning("Pool vazio: nada a mutar")
        return result

    outcomes = universe.branch_outcomes()
    retries: dict[BranchOutcome, int] = {}
    cursor = 0
    for iteration in range(1, budget + 1):
        uncovered = [
            b for b in outcomes if b not in pool.cumulative.branches and retries.get(b, 0) < retry_limit
        ]
        if not uncovered:
            logger.info("Sem desvios a perseguir na iteração %d", iteration)
            break
        focus = uncovered[cursor % len(uncovered)]
        cursor += 1
        target = select_target(pool, focus, rng)
        method = rng.choice(methods)
        stats = result.stats[method]
        stats.attempts += 1
        ctx = MutationContext(
            fragments=fragments,
            string_bank=universe.string_bank,
            key_bank=universe.key_bank,
            focus=focus,
            sites=target.coverage.sites,
        )
        try:
            mutant = mutate(target.tree, method, ctx, rng)
        except MutationFailedError as exc:
            logger.debug("Iteração %d: %s", iteration, exc)
            stats.failures += 1
            mutant = None
        if mutant is not None:
            source = mutant.unparse()
            coverage = None if source in pool else _coverage_of(mutant, bugs, fuel, max_depth)
            if coverage is not None and coverage.adds_to(pool.cumulative):
                pool.admit(
                    PoolEntry(
                        tree=mutant,
                        coverage=coverage,
                        source=source,
                        admitted_at=iteration,
                        method=method,
                    ),
                )
                stats.admissions += 1
                logger.debug("Iteração %d: admitido por %s: %s", iteration, method, source)
        if focus not in pool.cumulative.branches:
            retries[focus] = retries.get(focus, 0) + 1
        result.history.append(_point(iteration, pool, universe))

    last = result.history[-1]
    logger.info(
        "Geração: %d programas, cobertura %.2f%% passos / %.2f%% desvios",
        len(pool),
        last.stmt_ratio * 100,
        last.branch_ratio * 100,
    )
    return result
