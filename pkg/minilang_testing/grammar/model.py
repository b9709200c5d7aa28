"""Modelos da gramática: símbolos, regras de redução, gramática, assinaturas de builtins."""

from __future__ import annotations

import re
from enum import StrEnum
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from .exceptions import GrammarError
from .lexer import render_tokens

LEXICAL_CATEGORIES = ("IDENT", "NUMBER", "STRING")
DEFAULT_LEXICAL_DEFAULTS = {"IDENT": "x", "NUMBER": "0", "STRING": '""'}
EPSILON = "ε"

_RULE_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*::=(.*)$")
_SYMBOL_RE = re.compile(r'"(?:[^"\\]|\\.)*"|\S+')


class SymbolKind(StrEnum):
    TERMINAL = "terminal"
    NONTERMINAL = "nonterminal"
    LEXICAL = "lexical"


class Symbol(BaseModel):
    """Símbolo de uma alternativa: terminal literal, não-terminal ou categoria léxica."""

    model_config = ConfigDict(frozen=True)

    kind: SymbolKind
    name: str

    @classmethod
    def terminal(cls, text: str) -> Self:
        return cls(kind=SymbolKind.TERMINAL, name=text)

    @classmethod
    def nonterminal(cls, name: str) -> Self:
        return cls(kind=SymbolKind.NONTERMINAL, name=name)

    @classmethod
    def lexical(cls, category: str) -> Self:
        return cls(kind=SymbolKind.LEXICAL, name=category)

    def __str__(self) -> str:
        if self.kind is SymbolKind.TERMINAL:
            return f'"{self.name}"'
        return self.name


class ReductionRule(BaseModel):
    """Par (A, α): uma alternativa de uma produção, com seu ordinal dentro da produção."""

    model_config = ConfigDict(frozen=True)

    lhs: str
    alternative: tuple[Symbol, ...]
    alt_index: int = Field(ge=0)

    @property
    def is_epsilon(self) -> bool:
        return not self.alternative

    def mentions(self, nonterminal: str) -> bool:
        return any(
            s.kind is SymbolKind.NONTERMINAL and s.name == nonterminal for s in self.alternative
        )

    def __str__(self) -> str:
        rhs = " ".join(map(str, self.alternative)) or EPSILON
        return f"{self.lhs} ::= {rhs}"


class Grammar(BaseModel):
    """Gramática livre de contexto com regras ordenadas e strings padrão por categoria léxica.

    A produtividade (todo não-terminal deriva alguma string) é validada em
    :meth:`from_text`, que roda o cálculo de strings mais curtas.
    """

    model_config = ConfigDict(frozen=True)

    nonterminals: frozenset[str]
    terminals: frozenset[str]
    rules: tuple[ReductionRule, ...]
    start: str
    lexical_defaults: dict[str, str] = Field(
        default_factory=lambda: dict(DEFAULT_LEXICAL_DEFAULTS),
    )

    _by_lhs: dict[str, tuple[ReductionRule, ...]] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_structure(self) -> Self:
        if self.start not in self.nonterminals:
            msg = f"Símbolo inicial não declarado: {self.start}"
            raise GrammarError(msg)
        seen: set[tuple[str, int]] = set()
        for rule in self.rules:
            if rule.lhs not in self.nonterminals:
                msg = f"Lado esquerdo não declarado: {rule.lhs}"
                raise GrammarError(msg)
            if (rule.lhs, rule.alt_index) in seen:
                msg = f"alt_index repetido em {rule.lhs}: {rule.alt_index}"
                raise GrammarError(msg)
            seen.add((rule.lhs, rule.alt_index))
            for symbol in rule.alternative:
                self._check_symbol(rule, symbol)
        return self

    def _check_symbol(self, rule: ReductionRule, symbol: Symbol) -> None:
        if symbol.kind is SymbolKind.NONTERMINAL and symbol.name not in self.nonterminals:
            msg = f"Não-terminal não declarado em '{rule}': {symbol.name}"
            raise GrammarError(msg)
        if symbol.kind is SymbolKind.LEXICAL and symbol.name not in self.lexical_defaults:
            msg = f"Categoria léxica sem string padrão: {symbol.name}"
            raise GrammarError(msg)
        if symbol.kind is SymbolKind.TERMINAL and symbol.name not in self.terminals:
            msg = f"Terminal não declarado em '{rule}': {symbol.name}"
            raise GrammarError(msg)

    def model_post_init(self, _context: object, /) -> None:
        index: dict[str, list[ReductionRule]] = {nt: [] for nt in self.nonterminals}
        for rule in self.rules:
            index[rule.lhs].append(rule)
        self._by_lhs = {nt: tuple(rs) for nt, rs in index.items()}

    def alternatives(self, lhs: str) -> tuple[ReductionRule, ...]:
        return self._by_lhs[lhs]

    @property
    def keywords(self) -> frozenset[str]:
        return frozenset(t for t in self.terminals if re.fullmatch(r"[A-Za-z_$][\w$]*", t))

    @property
    def punctuators(self) -> frozenset[str]:
        return self.terminals - self.keywords

    def reachable(self, start: str | None = None) -> list[str]:
        """Não-terminais alcançáveis a partir de ``start`` (ordem de descoberta)."""
        order = [start or self.start]
        seen = set(order)
        for nt in order:
            for rule in self.alternatives(nt):
                for symbol in rule.alternative:
                    if symbol.kind is SymbolKind.NONTERMINAL and symbol.name not in seen:
                        seen.add(symbol.name)
                        order.append(symbol.name)
        return order

    def with_start(self, start: str) -> Grammar:
        return self.model_copy(update={"start": start})

    @classmethod
    def from_text(
        cls,
        text: str,
        *,
        start: str | None = None,
        lexical_defaults: dict[str, str] | None = None,
        validate_productive: bool = True,
    ) -> Grammar:
        """Carrega uma gramática do formato texto ``NT ::= sym sym | sym``.

        Terminais ficam entre aspas, ``IDENT``/``NUMBER``/``STRING`` são categorias léxicas,
        ``ε`` (ou uma alternativa vazia) é a alternativa vazia e ``#`` inicia comentário.
        Várias linhas com o mesmo lado esquerdo acumulam alternativas.

        Args:
            text: Conteúdo do arquivo de gramática.
            start: Símbolo inicial; padrão é o lado esquerdo da primeira regra.
            lexical_defaults: Strings padrão por categoria léxica.
            validate_productive: Valida produtividade via strings mais curtas.

        Returns:
            Grammar: Gramática validada.

        Raises:
            GrammarError: Linha malformada ou símbolo não declarado.
            NonProductiveGrammarError: Algum não-terminal é improdutivo.

        """
        raw: dict[str, list[list[str]]] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            match = _RULE_RE.match(stripped)
            if match is None:
                msg = f"Linha {lineno} malformada: {line!r}"
                raise GrammarError(msg)
            lhs, body = match.groups()
            alts = raw.setdefault(lhs, [])
            current: list[str] = []
            for piece in _SYMBOL_RE.findall(body):
                if piece == "|":
                    alts.append(current)
                    current = []
                elif piece != EPSILON:
                    current.append(piece)
            alts.append(current)
        if not raw:
            msg = "Gramática vazia"
            raise GrammarError(msg)

        nonterminals = frozenset(raw)
        terminals: set[str] = set()
        rules: list[ReductionRule] = []
        for lhs, alts in raw.items():
            for alt_index, pieces in enumerate(alts):
                symbols = tuple(_to_symbol(p, nonterminals) for p in pieces)
                terminals.update(s.name for s in symbols if s.kind is SymbolKind.TERMINAL)
                rules.append(ReductionRule(lhs=lhs, alternative=symbols, alt_index=alt_index))

        grammar = cls(
            nonterminals=nonterminals,
            terminals=frozenset(terminals),
            rules=tuple(rules),
            start=start or next(iter(raw)),
            lexical_defaults=dict(lexical_defaults or DEFAULT_LEXICAL_DEFAULTS),
        )
        if validate_productive:
            from .shortest import shortest_strings

            shortest_strings(grammar)
        return grammar

    def to_text(self) -> str:
        lines = []
        for lhs in dict.fromkeys(rule.lhs for rule in self.rules):
            alts = [" ".join(map(str, r.alternative)) or EPSILON for r in self.alternatives(lhs)]
            lines.append(f"{lhs} ::= {' | '.join(alts)}")
        return "\n".join(lines) + "\n"


def _to_symbol(piece: str, nonterminals: frozenset[str]) -> Symbol:
    if piece.startswith('"') and piece.endswith('"') and len(piece) >= 2:  # noqa: PLR2004
        return Symbol.terminal(piece[1:-1].replace('\\"', '"').replace("\\\\", "\\"))
    if piece in LEXICAL_CATEGORIES and piece not in nonterminals:
        return Symbol.lexical(piece)
    return Symbol.nonterminal(piece)


class ShortestStringMap(BaseModel):
    """Mapa M: não-terminal -> sequência de tokens da string mais curta derivável."""

    model_config = ConfigDict(frozen=True)

    tokens: dict[str, tuple[str, ...]]

    def __getitem__(self, nonterminal: str) -> tuple[str, ...]:
        return self.tokens[nonterminal]

    def __contains__(self, nonterminal: object) -> bool:
        return nonterminal in self.tokens

    @property
    def entries(self) -> dict[str, str]:
        return {nt: render_tokens(toks) for nt, toks in self.tokens.items()}


class BuiltinSignature(BaseModel):
    """Assinatura de um builtin para síntese de chamadas com aridade opcional/variável."""

    model_config = ConfigDict(frozen=True)

    name: str
    receiver_kind: str | None = None
    required_params: int = Field(default=0, ge=0)
    optional_params: int = Field(default=0, ge=0)
    variadic: bool = False
    constructor_style: bool = False

    @model_validator(mode="after")
    def _check_variadic(self) -> Self:
        if self.variadic and self.optional_params:
            msg = f"Builtin variádico não aceita parâmetros opcionais: {self.name}"
            raise ValueError(msg)
        return self
