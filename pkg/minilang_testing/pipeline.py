"""Estágios do pipeline sobre artefatos em disco.

Cada estágio lê os artefatos do anterior e grava os seus; rodar os estágios um a um
produz os mesmos arquivos que o pipeline completo.
"""

from __future__ import annotations

import csv
import json
from contextlib import contextmanager
from logging import getLogger
from typing import TYPE_CHECKING

from pydantic import BaseModel, ConfigDict, TypeAdapter, ValidationError

from minilang_testing.difftest import (
    NoFailuresError,
    build_report,
    classify,
    localize,
    spec_candidates,
    write_report,
)
from minilang_testing.engines import ResultMatrix, load_roster, run_suite
from minilang_testing.exceptions import MiniLangTestingError, StageFailureError
from minilang_testing.generator import (
    SEED_ORIGIN,
    MutationMethod,
    PoolEntry,
    PoolRecord,
    ProgramPool,
    filter_seeds,
    grow_pool,
)
from minilang_testing.grammar import (
    BUILTIN_SIGNATURES,
    EarleyParser,
    coverage_of_alternatives,
    load_grammar,
    minilang_grammar,
    non_recursive_synthesize,
    parse,
    shortest_strings,
    synthesize_builtin_calls,
)
from minilang_testing.injector import ConformanceTest, inject, parse_test, render
from minilang_testing.session import Stage, write_metadata
from minilang_testing.spec import CoverageMap, ResourceLimitExceededError, evaluate

if TYPE_CHECKING:
    from collections.abc import Iterator
    from pathlib import Path

    from minilang_testing.difftest import BugReport, DiffReport, SuspiciousnessRanking
    from minilang_testing.generator import GrowthResult
    from minilang_testing.grammar import SyntacticCoverage, SyntaxTree
    from minilang_testing.session import SessionConfig

logger = getLogger(__name__)

SEEDS_DIR = "seeds"
POOL_DIR = "pool"
TESTS_DIR = "tests"
RESULTS_FILE = "results.json"
RANKING_FILE = "ranking.json"
REPORT_FILE = "report.json"

SEEDS_INDEX = "seeds.json"
POOL_INDEX = "pool.json"
COVERAGE_CSV = "coverage.csv"
METHODS_FILE = "methods.json"
MANIFEST_FILE = "manifest.json"


class SeedRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    file: str
    covered_alternatives: int


class ManifestRecord(BaseModel):
    """Linha de ``manifest.json``."""

    model_config = ConfigDict(frozen=True)

    file: str
    tag: str
    assertion_ids: list[str]
    source_program: str
    coverage: CoverageMap


_SEEDS_ADAPTER = TypeAdapter(list[SeedRecord])
_POOL_ADAPTER = TypeAdapter(list[PoolRecord])
_MANIFEST_ADAPTER = TypeAdapter(list[ManifestRecord])


@contextmanager
def stage(name: Stage | str) -> Iterator[None]:
    """Converte falhas previstas do estágio em ``StageFailureError`` com o nome do estágio."""
    logger.info("Estágio %s", name)
    try:
        yield
    except StageFailureError:
        raise
    except (MiniLangTestingError, OSError, ValidationError, ValueError) as exc:
        raise StageFailureError(str(name), str(exc)) from exc


def _write_json(path: Path, payload: object) -> None:
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def _clear(directory: Path, pattern: str) -> None:
    for stale in directory.glob(pattern):
        stale.unlink()


# -----------------------------------------------------------------------------
# synth
# -----------------------------------------------------------------------------


def synthesize_seeds(grammar_path: Path | None = None, start: str | None = None) -> list[str]:
    """Programas sem recursão a partir de ``start`` mais as chamadas de builtins (só MiniLang)."""
    grammar = load_grammar(grammar_path) if grammar_path is not None else minilang_grammar()
    shortest = shortest_strings(grammar)
    programs = non_recursive_synthesize(grammar, start, shortest)
    if grammar_path is None and start in {None, grammar.start}:
        programs += [call for sig in BUILTIN_SIGNATURES for call in synthesize_builtin_calls(sig, shortest)]
    return list(dict.fromkeys(programs))


def run_synth(config: SessionConfig, out_dir: Path) -> tuple[list[SeedRecord], SyntacticCoverage]:
    grammar = load_grammar(config.grammar) if config.grammar is not None else minilang_grammar()
    if config.start is not None:
        grammar = grammar.with_start(config.start)
    programs = synthesize_seeds(config.grammar, config.start)
    parser = EarleyParser(grammar)

    out_dir.mkdir(parents=True, exist_ok=True)
    _clear(out_dir, "s*.mls")
    records: list[SeedRecord] = []
    seen: set[tuple[str, int]] = set()
    for i, program in enumerate(programs, start=1):
        name = f"s{i:06d}.mls"
        (out_dir / name).write_text(program + "\n", encoding="utf-8")
        alternatives = parser.parse(program).alternatives()
        seen |= alternatives
        records.append(SeedRecord(file=name, covered_alternatives=len(alternatives)))
    (out_dir / SEEDS_INDEX).write_bytes(_SEEDS_ADAPTER.dump_json(records, indent=2) + b"\n")
    config.echo(out_dir)
    coverage = coverage_of_alternatives(seen, grammar)
    logger.info("Sementes: %d programas, cobertura sintática %.2f%%", len(programs), coverage.ratio * 100)
    return records, coverage


def load_programs(directory: Path, pattern: str) -> list[SyntaxTree]:
    """Lê e analisa os programas de ``directory`` em ordem de nome."""
    return [parse(path.read_text("utf-8")) for path in sorted(directory.glob(pattern))]


# -----------------------------------------------------------------------------
# filter / generate
# -----------------------------------------------------------------------------


def write_pool(pool: ProgramPool, out_dir: Path) -> list[PoolRecord]:
    out_dir.mkdir(parents=True, exist_ok=True)
    _clear(out_dir, "p*.mls")
    records: list[PoolRecord] = []
    for i, entry in enumerate(pool.entries, start=1):
        name = f"p{i:04d}.mls"
        (out_dir / name).write_text(entry.source + "\n", encoding="utf-8")
        records.append(
            PoolRecord(
                file=name,
                admitted_at_iteration=entry.admitted_at,
                method=entry.method.value if entry.method else SEED_ORIGIN,
                new_steps=entry.new_steps,
                new_branches=entry.new_branches,
            ),
        )
    (out_dir / POOL_INDEX).write_bytes(_POOL_ADAPTER.dump_json(records, indent=2) + b"\n")
    return records


def load_pool(directory: Path, config: SessionConfig) -> ProgramPool:
    """Reconstrói o pool de ``pool.json`` reavaliando cada programa (a avaliação é determinística)."""
    records = _POOL_ADAPTER.validate_json((directory / POOL_INDEX).read_bytes())
    pool = ProgramPool(rng_seed=config.rng_seed)
    for record in records:
        tree = parse((directory / record.file).read_text("utf-8"))
        _, coverage = evaluate(tree, config.spec_bugs)
        pool.admit(
            PoolEntry(
                tree=tree,
                coverage=coverage,
                source=tree.unparse(),
                admitted_at=record.admitted_at_iteration,
                method=None if record.method == SEED_ORIGIN else MutationMethod(record.method),
            ),
        )
    return pool


def run_filter(config: SessionConfig, seeds_dir: Path, out_dir: Path) -> ProgramPool:
    pool = filter_seeds(load_programs(seeds_dir, "s*.mls"), config.spec_bugs, rng_seed=config.rng_seed)
    write_pool(pool, out_dir)
    config.echo(out_dir)
    return pool


def run_generate(config: SessionConfig, source_dir: Path, out_dir: Path) -> GrowthResult:
    """Cresce o pool; ``source_dir`` é um pool filtrado (com ``pool.json``) ou um diretório de sementes."""
    if (source_dir / POOL_INDEX).exists():
        pool = load_pool(source_dir, config)
    else:
        pool = filter_seeds(load_programs(source_dir, "s*.mls"), config.spec_bugs, rng_seed=config.rng_seed)
    result = grow_pool(pool, config.budget, config.spec_bugs)

    write_pool(result.pool, out_dir)
    with (out_dir / COVERAGE_CSV).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["iteration", "stmt_ratio", "branch_ratio"])
        for point in result.history:
            writer.writerow([point.iteration, f"{point.stmt_ratio:.6f}", f"{point.branch_ratio:.6f}"])
    _write_json(
        out_dir / METHODS_FILE,
        [stats.model_dump(mode="json") for stats in result.stats.values()],
    )
    config.echo(out_dir)
    return result


# -----------------------------------------------------------------------------
# inject
# -----------------------------------------------------------------------------


def run_inject(config: SessionConfig, pool_dir: Path, out_dir: Path) -> list[ConformanceTest]:
    """Avalia cada programa do pool e grava ``tNNNN.test.mls`` e ``manifest.json``."""
    out_dir.mkdir(parents=True, exist_ok=True)
    _clear(out_dir, "t*.test.mls")
    tests: list[ConformanceTest] = []
    manifest: list[ManifestRecord] = []
    for i, tree in enumerate(load_programs(pool_dir, "p*.mls"), start=1):
        name = f"t{i:04d}"
        try:
            state, coverage = evaluate(tree, config.spec_bugs)
        except ResourceLimitExceededError as exc:
            logger.warning("Programa %d sem estado final (%s); ignorado", i, exc)
            continue
        test = inject(tree, state, name=name)
        file = f"{name}.test.mls"
        (out_dir / file).write_text(render(test), encoding="utf-8")
        tests.append(test)
        manifest.append(
            ManifestRecord(
                file=file,
                tag=test.tag,
                assertion_ids=test.assertion_ids,
                source_program=test.body,
                coverage=coverage,
            ),
        )
    (out_dir / MANIFEST_FILE).write_bytes(_MANIFEST_ADAPTER.dump_json(manifest, indent=2) + b"\n")
    config.echo(out_dir)
    logger.info("Injeção: %d testes", len(tests))
    return tests


def load_tests(directory: Path, config: SessionConfig) -> tuple[list[ConformanceTest], dict[str, CoverageMap]]:
    """Lê os testes e a cobertura da especificação de cada um.

    Sem ``manifest.json`` a cobertura é recalculada avaliando o corpo de cada teste.
    """
    manifest_path = directory / MANIFEST_FILE
    tests: list[ConformanceTest] = []
    coverage: dict[str, CoverageMap] = {}
    if manifest_path.exists():
        for record in _MANIFEST_ADAPTER.validate_json(manifest_path.read_bytes()):
            name = record.file.removesuffix(".test.mls")
            tests.append(parse_test((directory / record.file).read_text("utf-8"), name))
            coverage[name] = record.coverage
        return tests, coverage
    for path in sorted(directory.glob("*.test.mls")):
        name = path.name.removesuffix(".test.mls")
        test = parse_test(path.read_text("utf-8"), name)
        tests.append(test)
        try:
            _, coverage[name] = evaluate(parse(test.body), config.spec_bugs)
        except (MiniLangTestingError, ValueError) as exc:
            logger.warning("Sem cobertura para %s: %s", name, exc)
    return tests, coverage


# -----------------------------------------------------------------------------
# run / localize / report
# -----------------------------------------------------------------------------


def run_run(config: SessionConfig, tests_dir: Path, results_path: Path) -> ResultMatrix:
    engines = load_roster(config.engines, timeout=config.timeout)
    tests, coverage = load_tests(tests_dir, config)
    matrix = run_suite(engines, tests, coverage=coverage, workers=config.workers)
    results_path.parent.mkdir(parents=True, exist_ok=True)
    results_path.write_text(matrix.model_dump_json(by_alias=True, indent=2) + "\n", encoding="utf-8")
    return matrix


def load_results(path: Path, coverage_dir: Path | None = None, config: SessionConfig | None = None) -> ResultMatrix:
    """Lê ``results.json``; ``coverage_dir`` (um diretório de testes) substitui a cobertura."""
    matrix = ResultMatrix.model_validate_json(path.read_bytes())
    if coverage_dir is not None and config is not None:
        _, coverage = load_tests(coverage_dir, config)
        matrix = matrix.model_copy(update={"coverage": {**matrix.coverage, **coverage}})
    return matrix


def run_localize(
    config: SessionConfig,
    matrix: ResultMatrix,
    out_path: Path | None = None,
) -> tuple[list[BugReport], SuspiciousnessRanking | None]:
    """Classifica e localiza; sem candidatos o ranking é ``None``."""
    reports = classify(matrix, config.spec_threshold)
    try:
        ranking = localize(matrix, spec_candidates(reports))
    except NoFailuresError:
        logger.info("Sem candidatos a bug de especificação; localização omitida")
        ranking = None
    if out_path is not None and ranking is not None:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(ranking.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return reports, ranking


def run_report(config: SessionConfig, matrix: ResultMatrix, out_path: Path) -> DiffReport:
    reports, ranking = run_localize(config, matrix)
    aborts = [test for test in matrix.tests if matrix.is_abort_tagged(test)]
    report = build_report(reports, ranking, top_k=config.top_k, abort_tagged=aborts)
    write_report(report, out_path)
    return report


# -----------------------------------------------------------------------------
# pipeline
# -----------------------------------------------------------------------------


def run_session(config: SessionConfig, root: Path) -> DiffReport | None:
    """Roda os estágios selecionados de uma sessão em ``root``."""
    seeds_dir, pool_dir, tests_dir = root / SEEDS_DIR, root / POOL_DIR, root / TESTS_DIR
    results_path = root / RESULTS_FILE
    config.echo(root)
    report: DiffReport | None = None
    for current in config.stages:
        with stage(current):
            match current:
                case Stage.SYNTH:
                    run_synth(config, seeds_dir)
                case Stage.FILTER:
                    run_filter(config, seeds_dir, pool_dir)
                case Stage.GENERATE:
                    source = pool_dir if (pool_dir / POOL_INDEX).exists() else seeds_dir
                    run_generate(config, source, pool_dir)
                case Stage.INJECT:
                    run_inject(config, pool_dir, tests_dir)
                case Stage.RUN:
                    run_run(config, tests_dir, results_path)
                case Stage.LOCALIZE:
                    run_localize(config, load_results(results_path), root / RANKING_FILE)
                case Stage.REPORT:
                    report = run_report(config, load_results(results_path), root / REPORT_FILE)
    return report


def run_pipeline(config: SessionConfig) -> dict[int, DiffReport | None]:
    """Sessão única em ``out`` ou ``repeat`` sessões em ``out/run-<seed>``."""
    write_metadata(config.out, "pipeline")
    if config.repeat == 1:
        return {config.rng_seed: run_session(config, config.out)}
    config.echo(config.out)
    reports: dict[int, DiffReport | None] = {}
    for seed in range(config.rng_seed, config.rng_seed + config.repeat):
        root = config.out / f"run-{seed}"
        reports[seed] = run_session(config.for_seed(seed, root), root)
    return reports
