"""Execução de testes de conformidade em engines em processo e externos."""

from __future__ import annotations

import subprocess
import threading
from concurrent.futures import ThreadPoolExecutor
from logging import getLogger
from typing import TYPE_CHECKING

from minilang_testing.grammar import parse_program
from minilang_testing.grammar.exceptions import EarlySyntaxError, ParseFailureError
from minilang_testing.injector import NORMAL_TAG, THROW_TAG, render
from minilang_testing.runtime import HARNESS_ERROR

from .exceptions import EngineTimeoutError
from .interpreter import EngineInterpreter
from .model import EngineHandle, EngineKind, ResultMatrix, TestOutcome, TestStatus
from .roster import validate_roster

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from minilang_testing.injector import ConformanceTest
    from minilang_testing.spec.model import CoverageMap

    from .interpreter import Execution

logger = getLogger(__name__)

DEFAULT_WORKERS = 4


def _observed(interpreter: EngineInterpreter, execution: Execution) -> str:
    if not execution.thrown:
        return NORMAL_TAG
    return interpreter.error_name(execution.value) or THROW_TAG


def judge(
    engine_id: str,
    test: ConformanceTest,
    observed: str,
    failed_assertion: int | None = None,
) -> TestOutcome:
    """Compara o comportamento observado com a tag e as asserções do teste."""
    if test.abort_tagged:
        return TestOutcome(engine_id=engine_id, status=TestStatus.PASS, abort_tagged=True)
    if observed == test.tag:
        return TestOutcome(engine_id=engine_id, status=TestStatus.PASS)
    if observed == HARNESS_ERROR and failed_assertion is not None:
        ids = test.assertion_ids
        label = ids[failed_assertion - 1] if failed_assertion <= len(ids) else f"assertion {failed_assertion}"
        return TestOutcome(engine_id=engine_id, status=TestStatus.FAIL, message=f"{HARNESS_ERROR}: {label}")
    return TestOutcome(
        engine_id=engine_id,
        status=TestStatus.FAIL,
        message=f"{observed}: expected {test.tag}",
    )


def run_in_process(engine: EngineHandle, test: ConformanceTest) -> TestOutcome:
    """Executa o teste no interpretador em processo com os bugs do engine."""
    abort_tagged = test.abort_tagged
    try:
        program = parse_program(render(test))
    except (ParseFailureError, EarlySyntaxError):
        return judge(engine.id, test, "SyntaxError")
    interpreter = EngineInterpreter(engine.bugs, timeout=engine.timeout)
    try:
        execution = interpreter.execute(program)
    except EngineTimeoutError:
        return TestOutcome(
            engine_id=engine.id,
            status=TestStatus.TIMEOUT,
            message=f"Timeout: {engine.timeout}s",
            abort_tagged=abort_tagged,
        )
    except Exception as exc:
        logger.debug("Engine %s caiu em %s", engine.id, test.name, exc_info=True)
        return TestOutcome(
            engine_id=engine.id,
            status=TestStatus.CRASH,
            message=f"Crash: {type(exc).__name__}",
            abort_tagged=abort_tagged,
        )
    return judge(engine.id, test, _observed(interpreter, execution), execution.failed_assertion)


def run_external(engine: EngineHandle, test: ConformanceTest) -> TestOutcome:
    """Protocolo externo: teste no stdin; saída 0 = Pass, >0 = Fail, sinal = Crash."""
    abort_tagged = test.abort_tagged
    try:
        proc = subprocess.run(  # noqa: S603
            list(engine.command or ()),
            input=render(test),
            capture_output=True,
            text=True,
            timeout=engine.timeout,
            check=False,
        )
    except subprocess.TimeoutExpired:
        return TestOutcome(
            engine_id=engine.id,
            status=TestStatus.TIMEOUT,
            message=f"Timeout: {engine.timeout}s",
            abort_tagged=abort_tagged,
        )
    except OSError as exc:
        return TestOutcome(
            engine_id=engine.id,
            status=TestStatus.CRASH,
            message=f"Crash: {exc}",
            abort_tagged=abort_tagged,
        )
    stderr = proc.stderr.strip().splitlines()
    message = stderr[-1] if stderr else ""
    if proc.returncode < 0:
        return TestOutcome(
            engine_id=engine.id,
            status=TestStatus.CRASH,
            message=f"Crash: signal {-proc.returncode}",
            abort_tagged=abort_tagged,
        )
    if proc.returncode == 0 or abort_tagged:
        return TestOutcome(engine_id=engine.id, status=TestStatus.PASS, abort_tagged=abort_tagged)
    return TestOutcome(
        engine_id=engine.id,
        status=TestStatus.FAIL,
        message=message or f"Fail: exit {proc.returncode}",
    )


def run_test(engine: EngineHandle, test: ConformanceTest) -> TestOutcome:
    if engine.kind is EngineKind.EXTERNAL:
        return run_external(engine, test)
    return run_in_process(engine, test)


def run_suite(
    engines: Sequence[EngineHandle],
    tests: Sequence[ConformanceTest],
    *,
    coverage: Mapping[str, CoverageMap] | None = None,
    workers: int = DEFAULT_WORKERS,
) -> ResultMatrix:
    """Executa todos os testes em todos os engines e monta a matriz de resultados.

    Células são independentes: uma falha inesperada vira Crash naquela célula só.
    Engines externos não reentrantes executam um teste por vez.

    Args:
        engines: Pelo menos dois engines com ids únicos.
        tests: Testes a executar (nomes vazios viram ``tNNNN``).
        coverage: Cobertura da especificação por nome de teste.
        workers: Tamanho do pool de threads.

    Returns:
        Matriz completa, na ordem de ``tests`` x ``engines``.

    Raises:
        RosterError: Menos de dois engines ou ids repetidos.

    """
    validate_roster(list(engines))
    names = [test.name or f"t{i:04d}" for i, test in enumerate(tests, start=1)]
    locks = {
        engine.id: threading.Lock()
        for engine in engines
        if engine.kind is EngineKind.EXTERNAL and not engine.reentrant
    }

    def cell(engine: EngineHandle, test: ConformanceTest) -> TestOutcome:
        try:
            lock = locks.get(engine.id)
            if lock is None:
                return run_test(engine, test)
            with lock:
                return run_test(engine, test)
        except Exception as exc:
            logger.warning("Célula %s/%s falhou: %s", test.name, engine.id, exc)
            return TestOutcome(engine_id=engine.id, status=TestStatus.CRASH, message=f"Crash: {exc}")

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [[pool.submit(cell, engine, test) for engine in engines] for test in tests]
        cells = [[future.result() for future in row] for row in futures]

    logger.info("Execução: %d testes x %d engines", len(tests), len(engines))
    coverage = coverage or {}
    return ResultMatrix(
        tests=names,
        engines=[engine.id for engine in engines],
        cells=cells,
        coverage={name: coverage[name] for name in names if name in coverage},
        tags={name: test.tag for name, test in zip(names, tests, strict=True)},
    )
