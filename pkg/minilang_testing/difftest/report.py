"""Resumo final: agrupamentos por veredito e o topo do ranking."""

from __future__ import annotations

from logging import getLogger
from typing import TYPE_CHECKING

from .classify import cluster
from .model import DiffReport, Verdict

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence
    from pathlib import Path

    from .model import BugReport, SuspiciousnessRanking

logger = getLogger(__name__)

DEFAULT_TOP_K = 15


def build_report(
    reports: Sequence[BugReport],
    ranking: SuspiciousnessRanking | None = None,
    *,
    top_k: int = DEFAULT_TOP_K,
    abort_tagged: Iterable[str] = (),
) -> DiffReport:
    clusters = cluster(reports)
    return DiffReport(
        engine_bugs=[c for c in clusters if c.verdict is Verdict.ENGINE_BUG],
        spec_candidates=[c for c in clusters if c.verdict is Verdict.SPEC_BUG_CANDIDATE],
        abort_tagged=sorted(abort_tagged),
        ranking=list(ranking.top(top_k)) if ranking is not None else [],
    )


def write_report(report: DiffReport, path: Path) -> Path:
    """Grava ``report.json`` com ordem determinística."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(
        "Relatório: %d grupos de engine, %d de especificação -> %s",
        len(report.engine_bugs),
        len(report.spec_candidates),
        path,
    )
    return path
