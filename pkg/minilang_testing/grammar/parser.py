"""Parser Earley (lark) gerado a partir da gramática e árvores sintáticas concretas."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cache
from logging import getLogger
from typing import TYPE_CHECKING

from lark import Lark, Tree, UnexpectedInput
from lark import Token as LarkToken

from .exceptions import GrammarError, ParseFailureError
from .lexer import LEXICAL_PATTERNS, Token, render_tokens
from .model import SymbolKind

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator

    from .model import Grammar

logger = getLogger(__name__)

type Path = tuple[int, ...]

_IGNORED = r"""
LINE_COMMENT: "//" /[^\n]*/
%import common.WS
%ignore WS
%ignore LINE_COMMENT
"""


@dataclass(slots=True)
class SyntaxTree:
    """Nó da árvore concreta.

    Folhas têm ``token``; nós internos têm ``production``/``alt_index``/``children``.
    ``span`` é o intervalo [início, fim) de índices de token e não entra na igualdade.
    """

    production: str | None
    alt_index: int = -1
    children: list[SyntaxTree] = field(default_factory=list)
    token: Token | None = field(default=None, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)
    leaf_text: str | None = None

    @property
    def is_leaf(self) -> bool:
        return self.production is None

    def tokens(self) -> list[str]:
        if self.is_leaf:
            return [self.leaf_text or ""]
        out: list[str] = []
        for child in self.children:
            out.extend(child.tokens())
        return out

    def unparse(self) -> str:
        return render_tokens(self.tokens())

    def walk(self, path: Path = ()) -> Iterator[tuple[Path, SyntaxTree]]:
        """Percorre os nós em pré-ordem com o caminho de índices de filho."""
        yield path, self
        for i, child in enumerate(self.children):
            yield from child.walk((*path, i))

    def node_at(self, path: Path) -> SyntaxTree:
        node = self
        for i in path:
            node = node.children[i]
        return node

    def alternatives(self) -> set[tuple[str, int]]:
        return {
            (node.production, node.alt_index)
            for _, node in self.walk()
            if node.production is not None
        }


@dataclass(frozen=True, slots=True)
class LarkGrammar:
    """Gramática no formato do lark e os nomes que ligam o lark de volta à ``Grammar``.

    Cada alternativa vira um alias ``nI_K``, então a árvore do lark carrega o par
    (produção, alt_index) em ``Tree.data``.
    """

    text: str
    rule_names: dict[str, str]
    aliases: dict[str, tuple[str, int]]
    terminal_texts: dict[str, str]


def _lark_literal(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def to_lark(grammar: Grammar) -> LarkGrammar:
    """Traduz a gramática para o formato do lark, uma linha por alternativa."""
    order = list(dict.fromkeys(rule.lhs for rule in grammar.rules))
    rule_names = {nt: f"n{i}" for i, nt in enumerate(order)}
    terminal_names = {text: f"T{i}" for i, text in enumerate(sorted(grammar.terminals))}
    lexical = sorted({
        symbol.name
        for rule in grammar.rules
        for symbol in rule.alternative
        if symbol.kind is SymbolKind.LEXICAL
    })

    lines: list[str] = []
    aliases: dict[str, tuple[str, int]] = {}
    for lhs in order:
        expansions: list[str] = []
        for rule in grammar.alternatives(lhs):
            alias = f"{rule_names[lhs]}_{rule.alt_index}"
            aliases[alias] = (lhs, rule.alt_index)
            symbols = [
                rule_names[s.name]
                if s.kind is SymbolKind.NONTERMINAL
                else terminal_names.get(s.name, s.name)
                for s in rule.alternative
            ]
            expansions.append(f"{' '.join(symbols)} -> {alias}".strip())
        lines.append(f"{rule_names[lhs]}: " + "\n    | ".join(expansions))
    lines.extend(f"{name}: {_lark_literal(text)}" for text, name in terminal_names.items())
    lines.extend(f"{category}: {LEXICAL_PATTERNS[category]}" for category in lexical)

    return LarkGrammar(
        text="\n".join(lines) + "\n" + _IGNORED,
        rule_names=rule_names,
        aliases=aliases,
        terminal_texts={name: text for text, name in terminal_names.items()},
    )


@cache
def _build_lark(text: str, starts: tuple[str, ...]) -> Lark:
    logger.debug("Compilando gramática lark (%d regras iniciais)", len(starts))
    return Lark(
        text,
        parser="earley",
        lexer="basic",
        start=list(starts),
        keep_all_tokens=True,
    )


class EarleyParser:
    """Parser Earley do lark sobre a gramática traduzida, devolvendo ``SyntaxTree``.

    Ambiguidades são resolvidas pelo lark (prioridade e ordem das regras), então a
    árvore escolhida para uma entrada é sempre a mesma.
    """

    def __init__(self, grammar: Grammar) -> None:
        """Inicializa o parser compilando a gramática.

        Args:
            grammar: Gramática a ser reconhecida.

        """
        self._grammar = grammar
        self._compiled = to_lark(grammar)
        self._lark = _build_lark(self._compiled.text, tuple(self._compiled.rule_names.values()))

    @property
    def grammar(self) -> Grammar:
        return self._grammar

    def parse(self, source: str, start: str | None = None) -> SyntaxTree:
        """Analisa ``source`` a partir de ``start`` (padrão: o símbolo inicial da gramática).

        Raises:
            GrammarError: ``start`` não é um não-terminal da gramática.
            ParseFailureError: Posição e tokens esperados onde a análise parou.

        """
        start = start or self._grammar.start
        rule = self._compiled.rule_names.get(start)
        if rule is None:
            msg = f"Não-terminal inicial desconhecido: {start}"
            raise GrammarError(msg)
        try:
            tree = self._lark.parse(source, start=rule)
        except UnexpectedInput as exc:
            raise self._failure(exc, source) from exc
        return _TreeBuilder(self._compiled, self._token).build(tree)

    def tokenize(self, source: str) -> list[Token]:
        """Tokens de ``source`` sem análise sintática (espaços e comentários ``//`` somem).

        Raises:
            ParseFailureError: Caractere que não inicia nenhum token.

        """
        try:
            return [self._token(token) for token in self._lark.lex(source)]
        except UnexpectedInput as exc:
            raise self._failure(exc, source) from exc

    def _token(self, token: LarkToken) -> Token:
        kind = self._compiled.terminal_texts.get(token.type, token.type)
        return Token(kind, str(token), token.start_pos or 0)

    def _failure(self, exc: UnexpectedInput, source: str) -> ParseFailureError:
        offset = exc.pos_in_stream
        if offset is None or offset < 0:
            offset = len(source)
        names = getattr(exc, "expected", None) or getattr(exc, "allowed", None) or ()
        expected = {self._compiled.terminal_texts.get(name, name) for name in names}
        return ParseFailureError(offset, expected, source)


class _TreeBuilder:
    """Converte a árvore do lark em ``SyntaxTree``, numerando os tokens em ordem."""

    def __init__(self, compiled: LarkGrammar, make_token: Callable[[LarkToken], Token]) -> None:
        self._aliases = compiled.aliases
        self._make_token = make_token
        self._position = 0

    def build(self, node: Tree | LarkToken) -> SyntaxTree:
        start = self._position
        if isinstance(node, LarkToken):
            token = self._make_token(node)
            self._position += 1
            return SyntaxTree(production=None, token=token, span=(start, start + 1), leaf_text=token.text)
        production, alt_index = self._aliases[str(node.data)]
        children = [self.build(child) for child in node.children]
        return SyntaxTree(
            production=production,
            alt_index=alt_index,
            children=children,
            span=(start, self._position),
        )
