"""Classificação por votação, agrupamento, espectro e ranking de algoritmos."""

from __future__ import annotations

import json

import pytest
from conftest import build_matrix
from pydantic import ValidationError

from minilang_testing.difftest import (
    BugReport,
    NoFailuresError,
    RankedAlgorithm,
    SpectrumCounts,
    SuspiciousnessRanking,
    Verdict,
    build_report,
    classify,
    cluster,
    default_threshold,
    er1b,
    failing_averages,
    localize,
    rank,
    spec_candidates,
    spectrum,
    write_report,
)
from minilang_testing.engines import RosterError, TestStatus
from minilang_testing.spec import CoverageMap
from minilang_testing.spec.model import SpecAlgorithm
from minilang_testing.spec.universe import SpecUniverse

P, F, C, T = TestStatus.PASS, TestStatus.FAIL, TestStatus.CRASH, TestStatus.TIMEOUT

UNIVERSE = SpecUniverse(
    algorithms={
        "A": SpecAlgorithm(name="A", steps=(1, 2)),
        "B": SpecAlgorithm(name="B", steps=(1, 2)),
        "C": SpecAlgorithm(name="C", steps=(1,)),
    },
)


def _coverage(*steps: tuple[str, int]) -> CoverageMap:
    return CoverageMap(steps=frozenset(steps))


class TestEr1b:
    @pytest.mark.parametrize(
        ("counts", "expected"),
        [
            (SpectrumCounts(n_ef=2, n_ep=1, n_np=3), 1.8),
            (SpectrumCounts(), 0.0),
            (SpectrumCounts(n_ef=3, n_nf=1), 3.0),
            (SpectrumCounts(n_ep=4), -0.8),
        ],
    )
    def test_values(self, counts: SpectrumCounts, expected: float) -> None:
        assert er1b(counts) == pytest.approx(expected)

    def test_negative_counts_are_rejected(self) -> None:
        with pytest.raises(ValidationError):
            SpectrumCounts(n_ef=-1)


class TestClassify:
    @pytest.mark.parametrize("engine_count", [2, 3, 4, 5, 7])
    def test_default_threshold_is_half_rounded_down(self, engine_count: int) -> None:
        assert default_threshold(engine_count) == engine_count // 2

    def test_votes_with_four_engines(self) -> None:
        matrix = build_matrix({
            "t1": [F, P, P, P],
            "t2": [F, F, F, F],
            "t3": [P, P, P, P],
            "t4": [F, F, F, P],
            "t5": [P, F, F, P],
        })

        reports = classify(matrix)

        assert [(r.test, r.verdict, r.engines) for r in reports] == [
            ("t1", Verdict.ENGINE_BUG, ("e1",)),
            ("t2", Verdict.SPEC_BUG_CANDIDATE, ("e1", "e2", "e3", "e4")),
            ("t4", Verdict.SPEC_BUG_CANDIDATE, ("e1", "e2", "e3")),
            ("t5", Verdict.ENGINE_BUG, ("e2", "e3")),
        ]
        assert spec_candidates(reports) == ["t2", "t4"]

    def test_threshold_override(self) -> None:
        matrix = build_matrix({"t1": [F, P, P, P]})

        (report,) = classify(matrix, threshold=0)

        assert report.verdict is Verdict.SPEC_BUG_CANDIDATE

    def test_crash_and_timeout_count_as_failures(self) -> None:
        matrix = build_matrix({"t1": [C, T, P, P]}, message="Crash: signal 11")

        (report,) = classify(matrix)

        assert report.failing_count == 2
        assert report.crashed
        assert report.verdict is Verdict.ENGINE_BUG

    def test_cluster_key_is_most_frequent_leading_token(self) -> None:
        matrix = build_matrix({"t1": [F, F, F, P]})

        (report,) = classify(matrix)

        assert report.cluster_key == (F, "Test262Error")

    def test_abort_tagged_tests_are_skipped(self) -> None:
        matrix = build_matrix({"t1": [F, F, F, F]}, tags={"t1": "Abort"})

        assert classify(matrix) == []

    def test_needs_two_engines(self) -> None:
        matrix = build_matrix({"t1": [F]}, engines=("e1",))

        with pytest.raises(RosterError):
            classify(matrix)


class TestCluster:
    def test_groups_by_verdict_key_and_engine_set(self) -> None:
        matrix = build_matrix({
            "t1": [F, P, P, P],
            "t2": [F, F, F, F],
            "t3": [F, P, P, P],
            "t4": [F, F, F, P],
            "t5": [F, F, P, P],
        })

        clusters = cluster(classify(matrix))

        assert [(c.verdict, c.engines, c.tests) for c in clusters] == [
            (Verdict.ENGINE_BUG, ("e1",), ("t1", "t3")),
            (Verdict.ENGINE_BUG, ("e1", "e2"), ("t5",)),
            (Verdict.SPEC_BUG_CANDIDATE, (), ("t2", "t4")),
        ]
        assert [c.size for c in clusters] == [2, 1, 2]

    def test_different_messages_split_clusters(self) -> None:
        reports = [
            BugReport(
                test="t1",
                verdict=Verdict.ENGINE_BUG,
                engines=("e1",),
                failing_count=1,
                cluster_key=(F, "TypeError"),
            ),
            BugReport(
                test="t2",
                verdict=Verdict.ENGINE_BUG,
                engines=("e1",),
                failing_count=1,
                cluster_key=(F, "Normal"),
            ),
        ]

        assert len(cluster(reports)) == 2

    def test_failing_averages(self) -> None:
        matrix = build_matrix({
            "t1": [F, P, P, P],
            "t2": [F, F, F, F],
            "t4": [F, F, F, P],
            "t5": [F, F, P, P],
        })

        averages = failing_averages(classify(matrix))

        assert averages == {Verdict.ENGINE_BUG: 1.5, Verdict.SPEC_BUG_CANDIDATE: 3.5}


class TestRank:
    def test_standard_competition_ranking(self) -> None:
        ranked = rank({"d": 0.1, "c": 0.5, "a": 1.0, "b": 0.5})

        assert ranked == [("a", 1.0, 1), ("b", 0.5, 2), ("c", 0.5, 2), ("d", 0.1, 4)]

    def test_scores_must_not_increase(self) -> None:
        counts = SpectrumCounts()
        low = RankedAlgorithm(algorithm="A", score=0.0, rank=1, step=1, counts=counts)
        high = RankedAlgorithm(algorithm="B", score=1.0, rank=2, step=1, counts=counts)

        with pytest.raises(ValidationError):
            SuspiciousnessRanking(entries=(low, high))


class TestLocalize:
    def _matrix(self, **kwargs: object):
        return build_matrix(
            {"t1": [F, F, F, F], "t2": [P, P, P, P], "t3": [P, P, P, P], "t4": [F, P, P, P]},
            coverage={
                "t1": _coverage(("A", 1), ("B", 1), ("B", 2)),
                "t2": _coverage(("B", 1), ("B", 2)),
                "t3": _coverage(("C", 1)),
                "t4": _coverage(("A", 1), ("A", 2)),
            },
            **kwargs,  # type: ignore[arg-type]
        )

    def test_spectrum_counts(self) -> None:
        counts = spectrum([_coverage(("A", 1))], [_coverage(("A", 1)), _coverage()], [("A", 1), ("A", 2)])

        assert counts["A", 1] == SpectrumCounts(n_ef=1, n_ep=1, n_nf=0, n_np=1)
        assert counts["A", 2] == SpectrumCounts(n_ef=0, n_ep=0, n_nf=1, n_np=2)

    def test_ranks_algorithms_by_best_step(self) -> None:
        ranking = localize(self._matrix(), ["t1"], universe=UNIVERSE)

        assert [(e.algorithm, e.rank, e.step) for e in ranking.entries] == [("A", 1, 1), ("B", 2, 1), ("C", 3, 1)]
        assert ranking.entries[0].score == pytest.approx(1.0)
        assert ranking.entries[1].score == pytest.approx(1 - 1 / 3)
        assert ranking.failed_tests == 1
        # t4 falha num engine: fica fora do espectro.
        assert ranking.passed_tests == 2
        assert ranking.step_scores["B"] == {1: pytest.approx(2 / 3), 2: pytest.approx(2 / 3)}
        assert ranking.rank_of("C") == 3
        assert ranking.rank_of("Z") is None

    def test_abort_tagged_tests_count_as_failed(self) -> None:
        ranking = localize(self._matrix(tags={"t4": "Abort"}), [], universe=UNIVERSE)

        assert ranking.failed_tests == 1
        assert ranking.entries[0].algorithm == "A"
        assert ranking.entries[0].step == 1

    def test_no_failures(self) -> None:
        with pytest.raises(NoFailuresError):
            localize(self._matrix(), [], universe=UNIVERSE)

    def test_missing_coverage_is_empty(self) -> None:
        matrix = build_matrix({"t1": [F, F, F, F], "t2": [P, P, P, P]})

        ranking = localize(matrix, ["t1"], universe=UNIVERSE)

        assert all(e.score == 0 for e in ranking.entries)
        assert [e.rank for e in ranking.entries] == [1, 1, 1]


class TestReport:
    def test_build_and_write(self, tmp_path) -> None:
        matrix = build_matrix(
            {"t1": [F, P, P, P], "t2": [F, F, F, F], "t3": [P, P, P, P]},
            coverage={"t1": _coverage(("A", 1)), "t2": _coverage(("B", 1)), "t3": _coverage(("C", 1))},
        )
        reports = classify(matrix)
        ranking = localize(matrix, spec_candidates(reports), universe=UNIVERSE)

        report = build_report(reports, ranking, top_k=1, abort_tagged=["t9", "t6"])
        path = write_report(report, tmp_path / "out" / "report.json")

        data = json.loads(path.read_text(encoding="utf-8"))
        assert [c["tests"] for c in data["engine_bugs"]] == [["t1"]]
        assert [c["tests"] for c in data["spec_candidates"]] == [["t2"]]
        assert data["abort_tagged"] == ["t6", "t9"]
        assert [e["algorithm"] for e in data["ranking"]] == ["B"]

    def test_report_without_ranking(self) -> None:
        report = build_report([])

        assert report.ranking == []
        assert report.engine_bugs == report.spec_candidates == []
