"""Localização por espectro sobre passos de algoritmos, agregada por algoritmo."""

from __future__ import annotations

from logging import getLogger
from typing import TYPE_CHECKING

from minilang_testing.spec import CoverageMap, spec_universe

from .exceptions import NoFailuresError
from .model import RankedAlgorithm, SpectrumCounts, SuspiciousnessRanking

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence

    from minilang_testing.engines import ResultMatrix
    from minilang_testing.spec import SpecUniverse

logger = getLogger(__name__)

type Formula = Callable[[SpectrumCounts], float]
type StepId = tuple[str, int]


def er1b(counts: SpectrumCounts) -> float:
    """``n_ef - n_ep / (n_ep + n_np + 1)``."""
    return counts.n_ef - counts.n_ep / (counts.n_ep + counts.n_np + 1)


FORMULAS: dict[str, Formula] = {"er1b": er1b}


def spectrum(
    failed: Sequence[CoverageMap],
    passed: Sequence[CoverageMap],
    steps: Iterable[StepId],
) -> dict[StepId, SpectrumCounts]:
    """Contagens por passo sobre os testes falhos e aprovados."""
    out: dict[StepId, SpectrumCounts] = {}
    for step in steps:
        n_ef = sum(step in coverage.steps for coverage in failed)
        n_ep = sum(step in coverage.steps for coverage in passed)
        out[step] = SpectrumCounts(
            n_ef=n_ef,
            n_ep=n_ep,
            n_nf=len(failed) - n_ef,
            n_np=len(passed) - n_ep,
        )
    return out


def rank(scores: dict[str, float]) -> list[tuple[str, float, int]]:
    """Ranking de competição padrão (1, 2, 2, 4); empates em ordem de nome."""
    ordered = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    out: list[tuple[str, float, int]] = []
    for i, (name, score) in enumerate(ordered):
        position = out[-1][2] if out and out[-1][1] == score else i + 1
        out.append((name, score, position))
    return out


def localize(
    matrix: ResultMatrix,
    candidates: Iterable[str],
    *,
    formula: Formula = er1b,
    universe: SpecUniverse | None = None,
) -> SuspiciousnessRanking:
    """Pontua os passos da especificação e ordena os algoritmos pela maior nota de passo.

    Falhos: os candidatos mais os testes com tag Abort. Aprovados: testes que passam em
    todos os engines (testes com bug de engine ficam fora do espectro).

    Args:
        matrix: Resultados com a cobertura de cada teste.
        candidates: Testes classificados como candidatos a bug de especificação.
        formula: Fórmula de suspeição por passo.
        universe: Universo de passos (padrão: o embarcado).

    Returns:
        Ranking de algoritmos com as notas por passo.

    Raises:
        NoFailuresError: Nenhum teste falho.

    """
    universe = universe or spec_universe()
    aborts = [test for test in matrix.tests if matrix.is_abort_tagged(test)]
    failed_tests = list(dict.fromkeys([*candidates, *aborts]))
    if not failed_tests:
        msg = "Nenhum teste candidato para localizar"
        raise NoFailuresError(msg)
    failed_set = set(failed_tests)
    passed_tests = [
        test
        for test in matrix.tests
        if test not in failed_set and not matrix.is_abort_tagged(test) and matrix.passes_everywhere(test)
    ]

    def coverage_of(test: str) -> CoverageMap:
        if test not in matrix.coverage:
            logger.warning("Teste %s sem cobertura; tratado como vazio", test)
        return matrix.coverage.get(test, CoverageMap())

    counts = spectrum(
        [coverage_of(t) for t in failed_tests],
        [coverage_of(t) for t in passed_tests],
        universe.step_ids(),
    )
    step_scores: dict[str, dict[int, float]] = {}
    for (algorithm, step), count in counts.items():
        step_scores.setdefault(algorithm, {})[step] = formula(count)

    best: dict[str, int] = {
        algorithm: min(scores, key=lambda s: (-scores[s], s)) for algorithm, scores in step_scores.items()
    }
    entries = tuple(
        RankedAlgorithm(
            algorithm=algorithm,
            score=score,
            rank=position,
            step=best[algorithm],
            counts=counts[algorithm, best[algorithm]],
        )
        for algorithm, score, position in rank({a: step_scores[a][best[a]] for a in best})
    )
    name = next((key for key, value in FORMULAS.items() if value is formula), getattr(formula, "__name__", "custom"))
    logger.info(
        "Localização: %d falhos, %d aprovados; topo %s",
        len(failed_tests),
        len(passed_tests),
        entries[0].algorithm if entries else "-",
    )
    return SuspiciousnessRanking(
        formula=name,
        failed_tests=len(failed_tests),
        passed_tests=len(passed_tests),
        entries=entries,
        step_scores=step_scores,
    )
