"""Os cinco métodos de mutação sobre árvores sintáticas.

Toda mutação troca um intervalo de tokens do programa alvo, renderiza o resultado e
analisa de novo; o mutante só é aceito se analisa e difere do alvo.
"""

from __future__ import annotations

from logging import getLogger
from typing import TYPE_CHECKING

from minilang_testing.grammar import minilang_grammar, parse, render_tokens
from minilang_testing.grammar.exceptions import ParseFailureError
from minilang_testing.grammar.lexer import encode_string
from minilang_testing.values import is_identifier_name

from .exceptions import MutationFailedError
from .model import MutationContext, MutationMethod

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence
    from random import Random

    from minilang_testing.grammar import SyntaxTree

logger = getLogger(__name__)

type Tokens = tuple[str, ...]
type Path = tuple[int, ...]

STATEMENT_PRODUCTIONS = frozenset({
    "Statement",
    "VariableStatement",
    "ExpressionStatement",
    "IfStatement",
    "WhileStatement",
    "Block",
    "ReturnStatement",
    "ThrowStatement",
    "BreakStatement",
    "TryStatement",
})
DECLARATION_PRODUCTIONS = frozenset({
    "FunctionDeclaration",
    "FormalParameters",
    "FormalParameter",
    "PropertyDefinition",
})
EXPRESSION_PRODUCTIONS = frozenset({
    "Expression",
    "AssignmentExpression",
    "EqualityExpression",
    "RelationalExpression",
    "AdditiveExpression",
    "MultiplicativeExpression",
    "UnaryExpression",
    "UpdateExpression",
    "LeftHandSideExpression",
    "CallExpression",
    "MemberExpression",
    "PrimaryExpression",
    "Literal",
    "ArrayLiteral",
    "ObjectLiteral",
    "FunctionExpression",
    "Arguments",
})
RANDOM_TARGETS = STATEMENT_PRODUCTIONS | DECLARATION_PRODUCTIONS | EXPRESSION_PRODUCTIONS

BLOCK_PRODUCTIONS = frozenset({"Block", "FunctionBody"})

DIVERTER_PROBABILITY = 0.5
MAX_OBJECT_KEYS = 2

OBJECT_VALUES: tuple[Tokens, ...] = (
    ("0",),
    ("-", "0"),
    ('""',),
    ("true",),
    ("null",),
    ("undefined",),
    ("{", "}"),
    ("function", "(", ")", "{", "return", "0", ";", "}"),
    ("function", "(", ")", "{", "return", "{", "}", ";", "}"),
    ("function", "(", ")", "{", "throw", '"err"', ";", "}"),
)


# -----------------------------------------------------------------------------
# Troca de intervalos
# -----------------------------------------------------------------------------


def splice(target: SyntaxTree, start: int, end: int, replacement: Sequence[str]) -> SyntaxTree | None:
    """Troca os tokens ``[start, end)`` por ``replacement`` e analisa de novo.

    Returns:
        O novo programa, ou ``None`` se não analisa ou ficou igual ao alvo.

    """
    tokens = target.tokens()
    mutated = [*tokens[:start], *replacement, *tokens[end:]]
    if mutated == tokens:
        return None
    try:
        return parse(render_tokens(mutated))
    except ParseFailureError:
        return None


def _nodes(target: SyntaxTree, productions: frozenset[str]) -> list[tuple[Path, SyntaxTree]]:
    return [(path, node) for path, node in target.walk() if node.production in productions]


def _replace_with_fragment(
    target: SyntaxTree,
    node: SyntaxTree,
    ctx: MutationContext,
    rng: Random,
) -> SyntaxTree | None:
    fragments = ctx.fragments.get(node.production or "", ())
    if not fragments:
        return None
    current = tuple(node.tokens())
    index = rng.randrange(len(fragments))
    replacement = fragments[index]
    if replacement == current:
        replacement = fragments[(index + 1) % len(fragments)]
        if replacement == current:
            return None
    start, end = node.span
    return splice(target, start, end, replacement)


def _first_success(
    method: MutationMethod,
    candidates: list[tuple[Path, SyntaxTree]],
    attempt: Callable[[SyntaxTree], SyntaxTree | None],
    rng: Random,
) -> SyntaxTree:
    if not candidates:
        raise MutationFailedError(method, "nenhum ponto aplicável")
    order = list(candidates)
    rng.shuffle(order)
    for _, node in order:
        mutant = attempt(node)
        if mutant is not None:
            return mutant
    raise MutationFailedError(method, "nenhum mutante válido")


# -----------------------------------------------------------------------------
# Métodos
# -----------------------------------------------------------------------------


def random_mutation(target: SyntaxTree, ctx: MutationContext, rng: Random) -> SyntaxTree:
    """Troca uma instrução, declaração ou expressão por um fragmento da mesma produção."""
    return _first_success(
        MutationMethod.RANDOM_MUTATION,
        _nodes(target, RANDOM_TARGETS),
        lambda node: _replace_with_fragment(target, node, ctx, rng),
        rng,
    )


def nearest_syntax_tree(target: SyntaxTree, ctx: MutationContext, rng: Random) -> SyntaxTree:
    """Troca o nó mais interno que levou ao algoritmo do desvio em foco.

    Sobe a partir do nó atribuído ao algoritmo até achar um ancestral com fragmentos.
    """
    method = MutationMethod.NEAREST_SYNTAX_TREE
    if ctx.focus is None:
        raise MutationFailedError(method, "sem desvio em foco")
    algorithm = ctx.focus[0]
    site = ctx.sites.get(algorithm)
    if site is None:
        raise MutationFailedError(method, f"{algorithm} não foi executado pelo alvo")
    path = tuple(site)
    while True:
        node = target.node_at(path)
        if node.production is not None and node.production != "Program":
            mutant = _replace_with_fragment(target, node, ctx, rng)
            if mutant is not None:
                return mutant
        if not path:
            break
        path = path[:-1]
    raise MutationFailedError(method, f"nenhum ancestral substituível para {algorithm}")


def string_substitution(target: SyntaxTree, ctx: MutationContext, rng: Random) -> SyntaxTree:
    """Troca uma expressão primária ou nome de propriedade por uma string da especificação."""
    method = MutationMethod.STRING_SUBSTITUTION
    if not ctx.string_bank:
        raise MutationFailedError(method, "banco de strings vazio")
    candidates = [
        (path, node)
        for path, node in _nodes(target, frozenset({"PrimaryExpression", "PropertyName"}))
        if node.production == "PrimaryExpression" or node.alt_index < 3  # noqa: PLR2004
    ]

    def attempt(node: SyntaxTree) -> SyntaxTree | None:
        start, end = node.span
        return splice(target, start, end, (encode_string(rng.choice(ctx.string_bank)),))

    return _first_success(method, candidates, attempt, rng)


def random_object(key_bank: Sequence[str], rng: Random) -> Tokens:
    """Literal de objeto com uma ou duas chaves do banco e valores variados."""
    count = rng.randint(1, min(MAX_OBJECT_KEYS, len(key_bank)))
    keys = rng.sample(list(key_bank), count)
    keywords = minilang_grammar().keywords
    tokens: list[str] = ["{"]
    for i, key in enumerate(keys):
        if i:
            tokens.append(",")
        name = key if is_identifier_name(key) and key not in keywords else encode_string(key)
        tokens.extend((name, ":", *rng.choice(OBJECT_VALUES)))
    tokens.append("}")
    return tuple(tokens)


def object_substitution(target: SyntaxTree, ctx: MutationContext, rng: Random) -> SyntaxTree:
    """Troca uma expressão primária por um objeto gerado com chaves da especificação."""
    method = MutationMethod.OBJECT_SUBSTITUTION
    if not ctx.key_bank:
        raise MutationFailedError(method, "banco de chaves vazio")

    def attempt(node: SyntaxTree) -> SyntaxTree | None:
        start, end = node.span
        return splice(target, start, end, random_object(ctx.key_bank, rng))

    return _first_success(method, _nodes(target, frozenset({"PrimaryExpression"})), attempt, rng)


def _diverters(target: SyntaxTree) -> list[Tokens]:
    names = sorted({node.leaf_text for _, node in target.walk() if node.token and node.token.kind == "IDENT"})
    name = names[0] if names else "x"
    return [(name, "(", ")", ";"), ("return", ";"), ("break", ";"), ("throw", name, ";")]


def statement_insertion(target: SyntaxTree, ctx: MutationContext, rng: Random) -> SyntaxTree:
    """Insere uma instrução no fim de um bloco (ou do programa).

    Metade das inserções são desvios de controle (chamada, return, break, throw).
    """
    method = MutationMethod.STATEMENT_INSERTION
    # Posições de inserção: antes do "}" de cada bloco e no fim do programa.
    positions = [node.span[1] - 1 for _, node in _nodes(target, BLOCK_PRODUCTIONS)]
    positions.append(len(target.tokens()))
    rng.shuffle(positions)
    diverters = _diverters(target)
    statements = ctx.fragments.get("Statement", ())
    for position in positions:
        if rng.random() < DIVERTER_PROBABILITY or not statements:
            statement = rng.choice(diverters)
        else:
            statement = rng.choice(statements)
        mutant = splice(target, position, position, statement)
        if mutant is not None:
            return mutant
    raise MutationFailedError(method, "nenhuma inserção analisou")


MUTATORS: dict[MutationMethod, Callable[[SyntaxTree, MutationContext, Random], SyntaxTree]] = {
    MutationMethod.RANDOM_MUTATION: random_mutation,
    MutationMethod.NEAREST_SYNTAX_TREE: nearest_syntax_tree,
    MutationMethod.STRING_SUBSTITUTION: string_substitution,
    MutationMethod.OBJECT_SUBSTITUTION: object_substitution,
    MutationMethod.STATEMENT_INSERTION: statement_insertion,
}


def mutate(target: SyntaxTree, method: MutationMethod, ctx: MutationContext, rng: Random) -> SyntaxTree:
    """Aplica ``method`` ao alvo.

    Args:
        target: Programa do pool.
        method: Método de mutação.
        ctx: Fragmentos, bancos e o desvio em foco.
        rng: Gerador da sessão (única fonte de aleatoriedade).

    Returns:
        Um programa que analisa e difere do alvo.

    Raises:
        MutationFailedError: Não há ponto aplicável.

    """
    mutant = MUTATORS[method](target, ctx, rng)
    logger.debug("%s: %s -> %s", method, target.unparse(), mutant.unparse())
    return mutant
