"""Gramática: representação, strings mais curtas, síntese não-recursiva e parsing."""

from .ast import Program, declared_names, lower
from .coverage import SyntacticCoverage, coverage_of_alternatives, syntactic_coverage
from .exceptions import EarlySyntaxError, GrammarError, NonProductiveGrammarError, ParseFailureError
from .lexer import Token, render_tokens
from .minilang import (
    BUILTIN_SIGNATURES,
    fragment_bank,
    load_grammar,
    minilang_grammar,
    minilang_parser,
    minilang_shortest,
    parse,
    parse_program,
)
from .model import BuiltinSignature, Grammar, ReductionRule, ShortestStringMap, Symbol
from .parser import EarleyParser, SyntaxTree
from .shortest import shortest_strings
from .synth import non_recursive_synthesize, synthesize_builtin_calls

__all__ = [
    "BUILTIN_SIGNATURES",
    "BuiltinSignature",
    "EarleyParser",
    "EarlySyntaxError",
    "Grammar",
    "GrammarError",
    "NonProductiveGrammarError",
    "ParseFailureError",
    "Program",
    "ReductionRule",
    "ShortestStringMap",
    "Symbol",
    "SyntacticCoverage",
    "SyntaxTree",
    "Token",
    "coverage_of_alternatives",
    "declared_names",
    "fragment_bank",
    "load_grammar",
    "lower",
    "minilang_grammar",
    "minilang_parser",
    "minilang_shortest",
    "non_recursive_synthesize",
    "parse",
    "parse_program",
    "render_tokens",
    "shortest_strings",
    "syntactic_coverage",
    "synthesize_builtin_calls",
]
