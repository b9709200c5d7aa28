"""Classificação dos testes que falharam: bug de engine ou candidato a bug de especificação."""

from __future__ import annotations

from collections import Counter, defaultdict
from logging import getLogger
from typing import TYPE_CHECKING

from minilang_testing.engines import MIN_ENGINES, RosterError, TestStatus

from .model import BugReport, Cluster, Verdict

if TYPE_CHECKING:
    from collections.abc import Iterable

    from minilang_testing.engines import ResultMatrix, TestOutcome

logger = getLogger(__name__)


def default_threshold(engine_count: int) -> int:
    """Até ``floor(N/2)`` engines falhando conta como bug de engine."""
    return engine_count // 2


def _cluster_key(failing: list[TestOutcome]) -> tuple[TestStatus, str]:
    counts = Counter((outcome.status, outcome.leading_token) for outcome in failing)
    return min(counts, key=lambda key: (-counts[key], key))


def classify(matrix: ResultMatrix, threshold: int | None = None) -> list[BugReport]:
    """Gera um relatório por teste que falhou em algum engine.

    Testes com tag Abort não são classificados (vão direto para a localização).

    Args:
        matrix: Resultados completos.
        threshold: Máximo de engines falhando para ainda ser bug de engine
            (padrão: ``floor(N/2)``).

    Returns:
        Relatórios na ordem dos testes da matriz.

    Raises:
        RosterError: Menos de dois engines na matriz.

    """
    engine_count = len(matrix.engines)
    if engine_count < MIN_ENGINES:
        msg = f"Classificação exige pelo menos {MIN_ENGINES} engines (matriz tem {engine_count})"
        raise RosterError(msg)
    threshold = default_threshold(engine_count) if threshold is None else threshold

    reports: list[BugReport] = []
    for test in matrix.tests:
        if matrix.is_abort_tagged(test):
            continue
        failing = [outcome for outcome in matrix.row(test) if outcome.failed]
        if not failing:
            continue
        verdict = Verdict.ENGINE_BUG if len(failing) <= threshold else Verdict.SPEC_BUG_CANDIDATE
        reports.append(
            BugReport(
                test=test,
                verdict=verdict,
                engines=tuple(sorted(outcome.engine_id for outcome in failing)),
                failing_count=len(failing),
                cluster_key=_cluster_key(failing),
                crashed=any(outcome.status is TestStatus.CRASH for outcome in failing),
            ),
        )
    logger.info(
        "Classificação: %d bugs de engine, %d candidatos de especificação",
        sum(r.verdict is Verdict.ENGINE_BUG for r in reports),
        sum(r.verdict is Verdict.SPEC_BUG_CANDIDATE for r in reports),
    )
    return reports


def cluster(reports: Iterable[BugReport]) -> list[Cluster]:
    """Agrupa por (veredito, chave de mensagem); bugs de engine também pelo conjunto de engines."""
    groups: dict[tuple[Verdict, tuple[TestStatus, str], tuple[str, ...]], list[str]] = defaultdict(list)
    for report in reports:
        engines = report.engines if report.verdict is Verdict.ENGINE_BUG else ()
        groups[report.verdict, report.cluster_key, engines].append(report.test)
    return [
        Cluster(verdict=verdict, key=key, engines=engines, tests=tuple(tests))
        for (verdict, key, engines), tests in sorted(groups.items())
    ]


def spec_candidates(reports: Iterable[BugReport]) -> list[str]:
    return [report.test for report in reports if report.verdict is Verdict.SPEC_BUG_CANDIDATE]


def failing_averages(reports: Iterable[BugReport]) -> dict[Verdict, float]:
    """Média de engines falhando por veredito (só vereditos presentes)."""
    counts: dict[Verdict, list[int]] = defaultdict(list)
    for report in reports:
        counts[report.verdict].append(report.failing_count)
    return {verdict: sum(values) / len(values) for verdict, values in counts.items()}
