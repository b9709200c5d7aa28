from collections import Counter
from collections.abc import Callable, Sequence
from logging import getLogger
from typing import Any

from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from minilang_testing.difftest import BugReport, DiffReport, SuspiciousnessRanking, Verdict, failing_averages
from minilang_testing.engines import ResultMatrix, TestStatus
from minilang_testing.generator import GrowthResult
from minilang_testing.grammar import SyntacticCoverage
from minilang_testing.injector import ConformanceTest

_logger = getLogger(__name__)
_stderr_console = Console(stderr=True)

MAX_UNCOVERED_SHOWN = 10

_STATUS_STYLES = {
    TestStatus.PASS: "green",
    TestStatus.FAIL: "red",
    TestStatus.CRASH: "bold magenta",
    TestStatus.TIMEOUT: "yellow",
}


def print_stage_error(stage: str, error: Exception) -> None:
    """Exibe só a mensagem principal do erro (primeiro erro Pydantic ou a mensagem)."""
    if isinstance(error, ValidationError):
        err = error.errors()[0]
        loc = ".".join(map(str, err["loc"]))
        msg = f"[bold white]{loc}:[/bold white] {err['msg']}"
    else:
        msg = str(error)

    try:
        _stderr_console.print(
            Panel(
                msg,
                title=f"[red]Falha no estágio: {stage}[/red]",
                border_style="red",
                expand=False,
            ),
        )
    except Exception:
        _logger.warning("Estágio '%s' falhou: %s", stage, msg)


def format_ratio(value: Any) -> str:
    if isinstance(value, float):
        return f"{value * 100:.2f}%"
    return str(value)


class SessionDisplayer[T: BaseModel]:
    """Painéis e tabelas dos estágios: sementes, pool, testes, matriz, relatórios e ranking."""

    def __init__(self, console: Console) -> None:
        """Inicializa o SessionDisplayer.

        Args:
            console: Console para exibição.

        """
        self._console = console

    def panel(self, title: str, content: str, border_style: str = "blue") -> None:
        self._console.print(Panel.fit(content, title=title, border_style=border_style))

    def _show_model_table(
        self,
        model_type: type[T],
        instances: Sequence[T],
        title: str,
        border_style: str = "blue",
        field_formatters: dict[str, Callable[[Any], str]] | None = None,
    ) -> None:
        """Renderiza uma tabela a partir dos campos (e campos computados) do modelo."""
        if not instances:
            return

        self._console.print()
        self._console.print(Panel.fit(title, border_style=border_style))

        columns = [
            *(name for name in model_type.model_fields if not name.startswith("_")),
            *model_type.model_computed_fields,
        ]
        table = Table(show_header=True, header_style="bold")
        formatters = field_formatters or {}
        for column in columns:
            table.add_column(column)
        for instance in instances:
            row = []
            for column in columns:
                value = getattr(instance, column, None)
                if column in formatters:
                    row.append(formatters[column](value))
                else:
                    row.append("" if value is None else str(value))
            table.add_row(*row)
        self._console.print(table)

    def show_seeds(self, count: int, coverage: SyntacticCoverage) -> None:
        """Exibe o total de sementes e a cobertura sintática.

        Args:
            count: Número de programas sintetizados.
            coverage: Cobertura de alternativas alcançáveis.

        """
        self.panel(
            "Síntese não-recursiva",
            f"{count} programas; alternativas cobertas: {coverage.covered}/{coverage.reachable} "
            f"({format_ratio(coverage.ratio)})",
            border_style="blue",
        )
        for production, alt in coverage.uncovered[:MAX_UNCOVERED_SHOWN]:
            self._console.print(f"  [dim]não coberta:[/dim] {production} #{alt}")

    def show_pool(self, size: int, admitted: int | None = None) -> None:
        extra = f" ({admitted} admitidos por mutação)" if admitted is not None else ""
        self._console.print(f"  [green]Pool:[/green] {size} programas{extra}")

    def show_growth(self, result: GrowthResult) -> None:
        last = result.history[-1]
        admitted = sum(1 for entry in result.pool.entries if entry.method is not None)
        self.panel(
            "Geração guiada por cobertura",
            f"{len(result.history) - 1} iterações; passos {format_ratio(last.stmt_ratio)}, "
            f"desvios {format_ratio(last.branch_ratio)}",
            border_style="green",
        )
        self.show_pool(len(result.pool), admitted)
        stats = list(result.stats.values())
        if stats:
            self._show_model_table(
                type(stats[0]),
                stats,
                title="Métodos de mutação",
                border_style="green",
            )

    def show_tests(self, tests: Sequence[ConformanceTest]) -> None:
        tags = Counter(test.tag for test in tests)
        assertions = sum(len(test.assertions) for test in tests)
        summary = ", ".join(f"{tag}: {n}" for tag, n in sorted(tags.items())) or "nenhum"
        self.panel(
            "Testes de conformidade",
            f"{len(tests)} testes, {assertions} asserções\n{summary}",
            border_style="cyan",
        )

    def show_matrix(self, matrix: ResultMatrix) -> None:
        """Contagem de status por engine."""
        self._console.print()
        self._console.print(Panel.fit(f"Resultados ({len(matrix.tests)} testes)", border_style="magenta"))
        table = Table(show_header=True, header_style="bold")
        table.add_column("engine")
        for status in TestStatus:
            table.add_column(status.value, style=_STATUS_STYLES[status])
        for column, engine in enumerate(matrix.engines):
            counts = Counter(row[column].status for row in matrix.cells)
            table.add_row(engine, *(str(counts.get(status, 0)) for status in TestStatus))
        self._console.print(table)

    def show_reports(self, reports: Sequence[BugReport]) -> None:
        averages = failing_averages(reports)
        for verdict in Verdict:
            count = sum(report.verdict is verdict for report in reports)
            average = averages.get(verdict)
            suffix = f" (média de engines falhando: {average:.2f})" if average is not None else ""
            self._console.print(f"  [cyan]{verdict.value}:[/cyan] {count}{suffix}")

    def show_ranking(self, ranking: SuspiciousnessRanking | None, top_k: int) -> None:
        if ranking is None:
            self._console.print("  [dim]Sem candidatos a bug de especificação.[/dim]")
            return
        self._console.print()
        self._console.print(
            Panel.fit(
                f"Suspeição ({ranking.formula}): {ranking.failed_tests} falhos, "
                f"{ranking.passed_tests} aprovados",
                border_style="red",
            ),
        )
        table = Table(show_header=True, header_style="bold")
        for column in ("rank", "algoritmo", "nota", "passo", "n_ef", "n_ep"):
            table.add_column(column)
        for entry in ranking.top(top_k):
            table.add_row(
                str(entry.rank),
                entry.algorithm,
                f"{entry.score:.3f}",
                str(entry.step),
                str(entry.counts.n_ef),
                str(entry.counts.n_ep),
            )
        self._console.print(table)

    def show_report(self, report: DiffReport) -> None:
        """Agrupamentos por veredito e o topo do ranking gravado no relatório."""
        for title, clusters, style in (
            ("Bugs de engine", report.engine_bugs, "yellow"),
            ("Candidatos a bug de especificação", report.spec_candidates, "red"),
        ):
            self._console.print()
            self._console.print(Panel.fit(f"{title}: {len(clusters)} grupos", border_style=style))
            for cluster in clusters:
                status, token = cluster.key
                engines = escape(f" [{', '.join(cluster.engines)}]") if cluster.engines else ""
                self._console.print(
                    f"  [cyan]{status}: {token or '-'}[/cyan]{engines} {cluster.size} teste(s): "
                    f"{', '.join(cluster.tests[:5])}",
                )
        if report.abort_tagged:
            self._console.print(f"  [dim]Tag Abort: {', '.join(report.abort_tagged)}[/dim]")
        for entry in report.ranking:
            self._console.print(f"  #{entry.rank} {entry.algorithm} ({entry.score:.3f}, passo {entry.step})")

    def success_panel(self, message: str) -> None:
        self._console.print()
        self._console.print(Panel.fit(message, border_style="green"))
