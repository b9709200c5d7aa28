"""Síntese não-recursiva de programas-semente e de chamadas a builtins."""

from __future__ import annotations

from collections.abc import Sequence
from logging import getLogger
from typing import TYPE_CHECKING, overload

from .lexer import render_tokens
from .model import SymbolKind
from .shortest import shortest_strings

if TYPE_CHECKING:
    from .model import BuiltinSignature, Grammar, ReductionRule, ShortestStringMap

logger = getLogger(__name__)

type Tokens = tuple[str, ...]
type _Key = tuple[str, frozenset[str]]

# Receptor canônico por tipo de valor para builtins no estilo receptor.
CANONICAL_RECEIVERS = {"array": "arr()", "object": "{}", "string": '""', "number": "0"}
NULL_RECEIVER = "null"


class _Synthesizer:
    """getProd/getAlt com conjunto de visitados local ao caminho.

    Cada chamada recebe os não-terminais já abertos entre a raiz e ela; um não-terminal
    que reaparece no próprio caminho contribui só com M[A]. Ramos irmãos não se afetam.

    ``count``/``pick`` dão o tamanho e o i-ésimo elemento de ``get_prod`` sem
    materializar a lista.
    """

    def __init__(self, grammar: Grammar, shortest: ShortestStringMap) -> None:
        self._grammar = grammar
        self._shortest = shortest
        self._memo: dict[_Key, list[Tokens]] = {}
        self._counts: dict[_Key, int] = {}

    def get_prod(self, nonterminal: str, visited: frozenset[str] = frozenset()) -> list[Tokens]:
        if nonterminal in visited:
            return [self._shortest[nonterminal]]
        key = (nonterminal, visited)
        if key not in self._memo:
            inner = visited | {nonterminal}
            self._memo[key] = [
                tokens
                for rule in self._grammar.alternatives(nonterminal)
                for tokens in self.get_alt(rule, inner)
            ]
        return self._memo[key]

    def get_alt(self, rule: ReductionRule, visited: frozenset[str]) -> list[Tokens]:
        parts: list[tuple[list[Tokens], Tokens]] = []
        for symbol in rule.alternative:
            if symbol.kind is SymbolKind.TERMINAL:
                parts.append(([(symbol.name,)], (symbol.name,)))
            elif symbol.kind is SymbolKind.LEXICAL:
                default = (self._grammar.lexical_defaults[symbol.name],)
                parts.append(([default], default))
            else:
                parts.append((self.get_prod(symbol.name, visited), self._shortest[symbol.name]))
        # Concatenação ponto a ponto; listas menores completam com a string mais curta.
        width = max((len(strings) for strings, _ in parts), default=1)
        out: list[Tokens] = []
        for i in range(width):
            tokens: list[str] = []
            for strings, default in parts:
                tokens.extend(strings[i] if i < len(strings) else default)
            out.append(tuple(tokens))
        return out

    def count(self, nonterminal: str, visited: frozenset[str] = frozenset()) -> int:
        if nonterminal in visited:
            return 1
        key = (nonterminal, visited)
        if key not in self._counts:
            inner = visited | {nonterminal}
            self._counts[key] = sum(self._width(rule, inner) for rule in self._grammar.alternatives(nonterminal))
        return self._counts[key]

    def _width(self, rule: ReductionRule, visited: frozenset[str]) -> int:
        return max(
            (self.count(s.name, visited) for s in rule.alternative if s.kind is SymbolKind.NONTERMINAL),
            default=1,
        )

    def pick(self, nonterminal: str, index: int, visited: frozenset[str] = frozenset()) -> Tokens:
        if nonterminal in visited:
            return self._shortest[nonterminal]
        inner = visited | {nonterminal}
        for rule in self._grammar.alternatives(nonterminal):
            width = self._width(rule, inner)
            if index < width:
                return self._pick_alt(rule, index, inner)
            index -= width
        raise IndexError(index)

    def _pick_alt(self, rule: ReductionRule, index: int, visited: frozenset[str]) -> Tokens:
        tokens: list[str] = []
        for symbol in rule.alternative:
            if symbol.kind is SymbolKind.TERMINAL:
                tokens.append(symbol.name)
            elif symbol.kind is SymbolKind.LEXICAL:
                tokens.append(self._grammar.lexical_defaults[symbol.name])
            elif index < self.count(symbol.name, visited):
                tokens.extend(self.pick(symbol.name, index, visited))
            else:
                tokens.extend(self._shortest[symbol.name])
        return tuple(tokens)


class SynthesizedStrings(Sequence[Tokens]):
    """Saída da síntese a partir de ``start``, gerada sob demanda por índice.

    Mantém a ordem e as repetições de getProd; só o tamanho fica em memória.
    """

    def __init__(self, synthesizer: _Synthesizer, start: str) -> None:
        self._synthesizer = synthesizer
        self._start = start

    def __len__(self) -> int:
        return self._synthesizer.count(self._start)

    @overload
    def __getitem__(self, index: int) -> Tokens: ...

    @overload
    def __getitem__(self, index: slice) -> list[Tokens]: ...

    def __getitem__(self, index: int | slice) -> Tokens | list[Tokens]:
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(len(self)))]
        size = len(self)
        if index < 0:
            index += size
        if not 0 <= index < size:
            raise IndexError(index)
        return self._synthesizer.pick(self._start, index)


def synthesized_sets(
    grammar: Grammar,
    shortest: ShortestStringMap | None = None,
) -> dict[str, SynthesizedStrings]:
    """Saída sob demanda da síntese a partir de cada não-terminal, em ordem de nome."""
    synthesizer = _Synthesizer(grammar, shortest or shortest_strings(grammar))
    return {nt: SynthesizedStrings(synthesizer, nt) for nt in sorted(grammar.nonterminals)}


def synthesize_tokens(
    grammar: Grammar,
    start: str | None = None,
    shortest: ShortestStringMap | None = None,
) -> list[Tokens]:
    """Igual a :func:`non_recursive_synthesize`, devolvendo sequências de tokens."""
    shortest = shortest or shortest_strings(grammar)
    produced = _Synthesizer(grammar, shortest).get_prod(start or grammar.start)
    return list(dict.fromkeys(produced))


def non_recursive_synthesize(
    grammar: Grammar,
    start: str | None = None,
    shortest: ShortestStringMap | None = None,
) -> list[str]:
    """Sintetiza o conjunto de programas sem recursão a partir de ``start``.

    Args:
        grammar: Gramática de entrada.
        start: Não-terminal inicial (padrão: o da gramática).
        shortest: Mapa M já calculado, se houver.

    Returns:
        Programas renderizados, sem repetição, na ordem de geração.

    Raises:
        NonProductiveGrammarError: Propagado do cálculo de strings mais curtas.

    """
    programs = [render_tokens(t) for t in synthesize_tokens(grammar, start, shortest)]
    logger.info("Síntese a partir de %s: %d programas", start or grammar.start, len(programs))
    return programs


def synthesize_builtin_calls(sig: BuiltinSignature, shortest: ShortestStringMap) -> list[str]:
    """Gera chamadas a um builtin cobrindo aridades opcionais/variádicas.

    Para ``k`` parâmetros opcionais gera as aridades ``required`` .. ``required + k``;
    variádicos geram 0, 1 e 2 argumentos extras. Builtins com receptor recebem o receptor
    como primeiro argumento, uma vez com o valor canônico e outra com ``null``.

    Args:
        sig: Assinatura do builtin.
        shortest: Mapa M (argumentos usam a string mais curta de ``Literal``).

    Returns:
        Programas de uma instrução cada.

    """
    argument = render_tokens(shortest["Literal"]) if "Literal" in shortest else "0"
    extra = range(3) if sig.variadic else range(sig.optional_params + 1)
    arities = [sig.required_params + k for k in extra]
    receivers: list[str | None] = [None]
    if sig.receiver_kind is not None:
        receivers = [CANONICAL_RECEIVERS.get(sig.receiver_kind, "{}"), NULL_RECEIVER]
    forms = ["new ", ""] if sig.constructor_style else [""]

    programs: list[str] = []
    for receiver in receivers:
        for prefix in forms:
            for arity in arities:
                args = [argument] * arity
                if receiver is not None:
                    args.insert(0, receiver)
                programs.append(f"{prefix}{sig.name}({', '.join(args)});")
    return programs
