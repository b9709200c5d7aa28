"""CLI do teste diferencial N+1-versões: estágios individuais e o pipeline completo."""

import json
import logging
import os
import sys
from collections.abc import Callable
from functools import wraps
from pathlib import Path
from typing import Any

import click
import typer
from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from display import SessionDisplayer, print_stage_error
from minilang_testing.engines import EngineBug, EngineHandle, TestStatus, run_in_process
from minilang_testing.exceptions import MiniLangTestingError, StageFailureError
from minilang_testing.grammar import parse
from minilang_testing.injector import parse_test
from minilang_testing.pipeline import (
    POOL_DIR,
    RANKING_FILE,
    REPORT_FILE,
    RESULTS_FILE,
    SEEDS_DIR,
    TESTS_DIR,
    load_results,
    run_filter,
    run_generate,
    run_inject,
    run_localize,
    run_pipeline,
    run_report,
    run_run,
    run_synth,
)
from minilang_testing.session import SessionConfig, Stage
from minilang_testing.spec import SpecBug, TerminationKind, evaluate

# -----------------------------------------------------------------------------
# Config
# -----------------------------------------------------------------------------

_PROJECT_ROOT = Path(__file__).resolve().parent

load_dotenv(_PROJECT_ROOT / ".env")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_STAGE_FAILURE = 2

logger = logging.getLogger(__name__)


def _configure_logging(*, verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True, show_path=verbose)],
        force=True,
    )


def handle_stage_error(stage: str) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    """Decorador: falha de estágio vira painel de erro e saída 2 (artefatos parciais ficam).

    Args:
        stage: Nome do estágio usado quando o erro não traz o seu.

    Returns:
        Decorador para comandos da CLI.

    """

    def decorator(func: Callable[..., Any]) -> Callable[..., Any]:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            try:
                return func(*args, **kwargs)
            except StageFailureError as e:
                logger.debug("Falha em %s", e.stage, exc_info=True)
                print_stage_error(e.stage, e)
            except (MiniLangTestingError, OSError, ValidationError, ValueError) as e:
                logger.debug("Falha em %s", stage, exc_info=True)
                print_stage_error(stage, e)
            raise typer.Exit(code=EXIT_STAGE_FAILURE)

        return wrapper

    return decorator


def _config(ctx: typer.Context, **overrides: Any) -> SessionConfig:
    """SessionConfig a partir do env, das opções globais e das opções do comando."""
    values = {**(ctx.obj or {}), **{k: v for k, v in overrides.items() if v is not None}}
    try:
        return SessionConfig(**values)
    except ValidationError as e:
        raise typer.BadParameter(str(e)) from e


# -----------------------------------------------------------------------------
# CLI
# -----------------------------------------------------------------------------

app = typer.Typer(no_args_is_help=True, help="Teste diferencial N+1-versões para MiniLang.")
_console = Console()
_displayer = SessionDisplayer(_console)


@app.callback()
def main(
    ctx: typer.Context,
    rng_seed: int | None = typer.Option(None, "--rng-seed", help="Semente do gerador aleatório."),
    out: Path | None = typer.Option(None, "--out", help="Diretório raiz dos artefatos."),
    *,
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log em nível DEBUG."),
) -> None:
    """Opções globais compartilhadas por todos os comandos."""
    _configure_logging(verbose=verbose)
    ctx.obj = {k: v for k, v in {"rng_seed": rng_seed, "out": out}.items() if v is not None}


@app.command()
@handle_stage_error(Stage.SYNTH)
def synth(
    ctx: typer.Context,
    grammar: Path | None = typer.Option(None, "--grammar", help="Arquivo de gramática (padrão: MiniLang)."),
    start: str | None = typer.Option(None, "--start", help="Não-terminal inicial."),
    out: Path | None = typer.Option(None, "--out", help="Diretório das sementes."),
) -> None:
    """Sintetiza o corpus de sementes sem recursão."""
    config = _config(ctx, grammar=grammar, start=start)
    records, coverage = run_synth(config, out or config.out / SEEDS_DIR)
    _displayer.show_seeds(len(records), coverage)


@app.command("filter")
@handle_stage_error(Stage.FILTER)
def filter_(
    ctx: typer.Context,
    seed_dir: Path | None = typer.Option(None, "--seed-dir", help="Diretório das sementes."),
    bug: list[SpecBug] | None = typer.Option(None, "--bug", help="Bug semeado na especificação."),
    out: Path | None = typer.Option(None, "--out", help="Diretório do pool."),
) -> None:
    """Mantém só as sementes que acrescentam cobertura semântica."""
    config = _config(ctx, spec_bugs=bug)
    root = config.out
    pool = run_filter(config, seed_dir or root / SEEDS_DIR, out or root / POOL_DIR)
    _displayer.show_pool(len(pool))


@app.command()
@handle_stage_error(Stage.GENERATE)
def generate(
    ctx: typer.Context,
    seed_dir: Path | None = typer.Option(None, "--seed-dir", help="Sementes ou pool filtrado."),
    budget: int | None = typer.Option(None, "--budget", help="Número de iterações."),
    bug: list[SpecBug] | None = typer.Option(None, "--bug", help="Bug semeado na especificação."),
    out: Path | None = typer.Option(None, "--out", help="Diretório do pool."),
) -> None:
    """Cresce o pool por mutação guiada por cobertura."""
    config = _config(ctx, budget=budget, spec_bugs=bug)
    root = config.out
    result = run_generate(config, seed_dir or root / SEEDS_DIR, out or root / POOL_DIR)
    _displayer.show_growth(result)


@app.command()
@handle_stage_error(Stage.INJECT)
def inject(
    ctx: typer.Context,
    pool: Path | None = typer.Option(None, "--pool", help="Diretório do pool."),
    bug: list[SpecBug] | None = typer.Option(None, "--bug", help="Bug semeado na especificação."),
    out: Path | None = typer.Option(None, "--out", help="Diretório dos testes."),
) -> None:
    """Converte o pool em testes de conformidade."""
    config = _config(ctx, spec_bugs=bug)
    root = config.out
    tests = run_inject(config, pool or root / POOL_DIR, out or root / TESTS_DIR)
    _displayer.show_tests(tests)


@app.command("run")
@handle_stage_error(Stage.RUN)
def run_stage(
    ctx: typer.Context,
    tests: Path | None = typer.Option(None, "--tests", help="Diretório dos testes."),
    engines: Path | None = typer.Option(None, "--engines", help="engines.json (padrão: 4 engines)."),
    timeout: float | None = typer.Option(None, "--timeout", help="Prazo por teste, em segundos."),
    workers: int | None = typer.Option(None, "--workers", help="Threads de execução."),
    out: Path | None = typer.Option(None, "--out", help="Arquivo results.json."),
) -> None:
    """Executa os testes em todos os engines."""
    config = _config(ctx, engines=engines, timeout=timeout, workers=workers)
    root = config.out
    matrix = run_run(config, tests or root / TESTS_DIR, out or root / RESULTS_FILE)
    _displayer.show_matrix(matrix)


@app.command()
@handle_stage_error(Stage.LOCALIZE)
def localize(
    ctx: typer.Context,
    results: Path | None = typer.Option(None, "--results", help="Arquivo results.json."),
    coverage: Path | None = typer.Option(None, "--coverage", help="Diretório de testes com manifest.json."),
    top: int | None = typer.Option(None, "--top", help="Tamanho do topo do ranking."),
    spec_threshold: int | None = typer.Option(None, "--spec-threshold", help="Máximo de falhas de engine."),
    out: Path | None = typer.Option(None, "--out", help="Arquivo ranking.json."),
) -> None:
    """Classifica as falhas e ordena os algoritmos suspeitos."""
    config = _config(ctx, top_k=top, spec_threshold=spec_threshold)
    root = config.out
    matrix = load_results(results or root / RESULTS_FILE, coverage, config)
    reports, ranking = run_localize(config, matrix, out or root / RANKING_FILE)
    _displayer.show_reports(reports)
    _displayer.show_ranking(ranking, config.top_k)


@app.command()
@handle_stage_error(Stage.REPORT)
def report(
    ctx: typer.Context,
    results: Path | None = typer.Option(None, "--results", help="Arquivo results.json."),
    top: int | None = typer.Option(None, "--top", help="Tamanho do topo do ranking."),
    spec_threshold: int | None = typer.Option(None, "--spec-threshold", help="Máximo de falhas de engine."),
    out: Path | None = typer.Option(None, "--out", help="Arquivo report.json."),
) -> None:
    """Gera report.json com os agrupamentos e o ranking."""
    config = _config(ctx, top_k=top, spec_threshold=spec_threshold)
    root = config.out
    summary = run_report(config, load_results(results or root / RESULTS_FILE), out or root / REPORT_FILE)
    _displayer.show_report(summary)


@app.command()
@handle_stage_error("pipeline")
def pipeline(
    ctx: typer.Context,
    grammar: Path | None = typer.Option(None, "--grammar", help="Gramática das sementes (padrão: MiniLang)."),
    start: str | None = typer.Option(None, "--start", help="Não-terminal inicial das sementes."),
    budget: int | None = typer.Option(None, "--budget", help="Número de iterações de geração."),
    bug: list[SpecBug] | None = typer.Option(None, "--bug", help="Bug semeado na especificação."),
    engines: Path | None = typer.Option(None, "--engines", help="engines.json (padrão: 4 engines)."),
    stage: list[Stage] | None = typer.Option(None, "--stage", help="Estágios a executar (padrão: todos)."),
    repeat: int | None = typer.Option(None, "--repeat", help="Sessões com sementes consecutivas."),
    spec_threshold: int | None = typer.Option(None, "--spec-threshold", help="Máximo de falhas de engine."),
    top: int | None = typer.Option(None, "--top", help="Tamanho do topo do ranking."),
    timeout: float | None = typer.Option(None, "--timeout", help="Prazo por teste, em segundos."),
    workers: int | None = typer.Option(None, "--workers", help="Threads de execução."),
) -> None:
    """Executa synth, filter, generate, inject, run, localize e report."""
    config = _config(
        ctx,
        grammar=grammar,
        start=start,
        budget=budget,
        spec_bugs=bug,
        engines=engines,
        stages=stage,
        repeat=repeat,
        spec_threshold=spec_threshold,
        top_k=top,
        timeout=timeout,
        workers=workers,
    )
    reports = run_pipeline(config)
    for seed, summary in reports.items():
        _console.print(f"\n[bold]Sessão rng-seed={seed}[/bold]")
        if summary is not None:
            _displayer.show_report(summary)
    _displayer.success_panel(f"Artefatos em {config.out}")


@app.command("spec-run")
@handle_stage_error("spec-run")
def spec_run(
    file: Path = typer.Argument(..., help="Programa MiniLang."),
    bug: list[SpecBug] | None = typer.Option(None, "--bug", help="Bug semeado na especificação."),
) -> None:
    """Avalia um programa na especificação e imprime estado final e cobertura em JSON."""
    state, coverage = evaluate(parse(file.read_text("utf-8")), bug or ())
    payload = {**state.to_json(), "coverage": coverage.model_dump(mode="json")}
    typer.echo(json.dumps(payload, indent=2, ensure_ascii=False))
    if state.termination.kind is TerminationKind.ABORT:
        raise typer.Exit(code=EXIT_STAGE_FAILURE)


@app.command("engine-run")
def engine_run(
    bug: list[EngineBug] | None = typer.Option(None, "--bug", help="Bug semeado no engine."),
    timeout: float = typer.Option(5.0, "--timeout", help="Prazo em segundos."),
) -> None:
    """Executa um teste lido do stdin num engine em processo (protocolo de engine externo)."""
    try:
        test = parse_test(sys.stdin.read(), "stdin")
    except ValueError as e:
        typer.echo(f"SyntaxError: {e}", err=True)
        raise typer.Exit(code=EXIT_USAGE) from e
    engine = EngineHandle(id="engine-run", bugs=frozenset(bug or ()), timeout=timeout)
    outcome = run_in_process(engine, test)
    if outcome.status is TestStatus.PASS:
        raise typer.Exit(code=EXIT_OK)
    typer.echo(outcome.message, err=True)
    if outcome.status is TestStatus.CRASH:
        os.abort()
    raise typer.Exit(code=1)


def run() -> None:
    """Entry point para o comando run-main (pyproject.toml)."""
    try:
        code = app(standalone_mode=False)
    except click.exceptions.Abort:
        code = EXIT_USAGE
    except click.ClickException as e:
        e.show()
        code = EXIT_USAGE
    sys.exit(code or EXIT_OK)


if __name__ == "__main__":
    run()
