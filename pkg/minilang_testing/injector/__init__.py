"""Conversão de programas do pool em testes de conformidade."""

from .format import classify_assertion, parse_test, read_tag, render
from .inject import child_path, inject, render_literal
from .model import ABORT_TAG, NORMAL_TAG, THROW_TAG, Assertion, AssertionKind, ConformanceTest, assertion_id

__all__ = [
    "ABORT_TAG",
    "NORMAL_TAG",
    "THROW_TAG",
    "Assertion",
    "AssertionKind",
    "ConformanceTest",
    "assertion_id",
    "child_path",
    "classify_assertion",
    "inject",
    "parse_test",
    "read_tag",
    "render",
    "render_literal",
]
