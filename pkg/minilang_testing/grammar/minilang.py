"""Instância MiniLang: gramática embarcada, parser padrão e assinaturas de builtins."""

from __future__ import annotations

from functools import cache
from importlib import resources
from typing import TYPE_CHECKING

from .ast import Program, lower
from .model import BuiltinSignature, Grammar
from .parser import EarleyParser
from .shortest import shortest_strings
from .synth import synthesized_sets

if TYPE_CHECKING:
    from pathlib import Path

    from .model import ShortestStringMap
    from .parser import SyntaxTree
    from .synth import SynthesizedStrings

BUILTIN_SIGNATURES: tuple[BuiltinSignature, ...] = (
    BuiltinSignature(name="arr", variadic=True),
    BuiltinSignature(name="keys", required_params=1),
    BuiltinSignature(name="freeze", required_params=1),
    BuiltinSignature(name="indexOf", receiver_kind="array", required_params=1, optional_params=1),
    BuiltinSignature(name="push", receiver_kind="array", variadic=True),
)


def load_grammar(path: Path | None = None, start: str | None = None) -> Grammar:
    """Carrega a gramática de um arquivo texto ou a embarcada no pacote."""
    if path is None:
        text = resources.files(__package__).joinpath("minilang.grammar").read_text("utf-8")
    else:
        text = path.read_text("utf-8")
    return Grammar.from_text(text, start=start)


@cache
def minilang_grammar() -> Grammar:
    return load_grammar()


@cache
def minilang_parser() -> EarleyParser:
    return EarleyParser(minilang_grammar())


@cache
def minilang_shortest() -> ShortestStringMap:
    return shortest_strings(minilang_grammar())


def parse(source: str) -> SyntaxTree:
    """Analisa um programa MiniLang.

    Raises:
        ParseFailureError: Offset e tokens esperados.

    """
    return minilang_parser().parse(source)


def parse_program(source: str) -> Program:
    """Analisa e rebaixa um programa (pode levantar ``EarlySyntaxError``)."""
    return lower(parse(source))


@cache
def fragment_bank() -> dict[str, SynthesizedStrings]:
    """Fragmentos sintetizados por não-terminal, usados como substitutos nas mutações.

    Cada entrada é gerada sob demanda: a síntese a partir de ``Statement`` sozinha tem dezenas
    de milhares de elementos.
    """
    return synthesized_sets(minilang_grammar(), minilang_shortest())
