"""Injeção de asserções e formato textual dos testes."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import pytest

from minilang_testing.engines import EngineHandle, TestStatus, run_in_process
from minilang_testing.injector import (
    Assertion,
    AssertionKind,
    ConformanceTest,
    child_path,
    classify_assertion,
    parse_test,
    read_tag,
    render,
    render_literal,
)
from minilang_testing.spec import SpecBug
from minilang_testing.values import NULL, UNDEFINED

if TYPE_CHECKING:
    from collections.abc import Callable

type MakeTest = Callable[..., ConformanceTest]

THROWING_VALUEOF_PROGRAM = 'var obj = { valueOf: function() { throw "err"; } }; var result = 42 == obj;'

SELF_CONFORMANCE_PROGRAMS = [
    "var x = 1 + 2;",
    "var x = {}; var y = {}; var z = { p: x, q: y };",
    "var o = {}; o.self = o;",
    "var y = -0; var z = 0;",
    "var f = function(a, b = 1) { return a; }; var g = f;",
    'var a = arr(1, "s", null); push(a, undefined); var k = keys(a);',
    "var o = freeze({ p: 1 }); var n = NaN; var i = -Infinity;",
    'var s = "x\\ny"; var l = s.length;',
    "function f() { throw 1; } var r; try { f(); } catch (e) { r = e; }",
    "var u; var b = 1 == true;",
    "var Infinity = 0; var NaN = 1; var y = -0; var n = 0 / 0; var i = -1 / 0;",
]


class TestInject:
    def test_addition_golden(self, make_test: MakeTest) -> None:
        test = make_test("var x = 1 + 2;")

        assert render(test) == "// Normal\nvar x = 1 + 2;\n\n$assert.sameValue(x, 3);\n"
        assert test.assertion_ids == ["a001-VarValue"]

    def test_representative_paths(self, make_test: MakeTest) -> None:
        test = make_test("var x = {}; var y = {}; var z = {p: x, q: y};")
        sources = [a.source for a in test.assertions]

        assert "$assert.sameValue(z.p, x);" in sources
        assert "$assert.sameValue(z.q, y);" in sources
        assert '$assert.compareArray(keys(z), ["p", "q"]);' in sources

    def test_property_attributes(self, make_test: MakeTest) -> None:
        test = make_test("var x = {p: 42};")

        assert '$verifyProperty(x, "p", {value: 42, writable: true});' in [a.source for a in test.assertions]

    def test_negative_zero_sign_check(self, make_test: MakeTest) -> None:
        sources = [a.source for a in make_test("var y = -0;").assertions]

        assert sources == ["$assert.sameValue(y, -0);", "$assert.sameValue(1 / y, -1 / 0);"]

    def test_shadowed_constants(self, make_test: MakeTest) -> None:
        test = make_test("var Infinity = 0; var NaN = 0; var y = -0; var n = 0 / 0;")
        sources = [a.source for a in test.assertions]

        assert "$assert.sameValue(1 / y, -1 / 0);" in sources
        assert "$assert.sameValue(n, 0 / 0);" in sources
        assert run_in_process(EngineHandle(id="reference"), test).status is TestStatus.PASS

    def test_cycle_terminates(self, make_test: MakeTest) -> None:
        sources = [a.source for a in make_test("var o = {}; o.self = o;").assertions]

        assert "$assert.sameValue(o.self, o);" in sources

    def test_callable(self, make_test: MakeTest) -> None:
        test = make_test("var f = function(a) {};")

        assert test.assertions[0] == Assertion(
            id="a001-Callable",
            kind=AssertionKind.CALLABLE,
            source="$assert.callable(f);",
        )
        assert '$verifyProperty(f, "length", {value: 1, writable: false});' in [a.source for a in test.assertions]

    def test_builtin_reference(self, make_test: MakeTest) -> None:
        sources = [a.source for a in make_test("var k = keys;").assertions]

        assert sources == ["$assert.sameValue(k, keys);"]

    def test_throw_is_tag_only(self, make_test: MakeTest) -> None:
        test = make_test(THROWING_VALUEOF_PROGRAM)

        assert test.tag == "Throw"
        assert test.assertions == ()

    def test_abrupt_equality_flips_tag(self, make_test: MakeTest) -> None:
        test = make_test(THROWING_VALUEOF_PROGRAM, SpecBug.ABRUPT_EQ)

        assert test.tag == "Normal"
        assert "$assert.sameValue(result, false);" in [a.source for a in test.assertions]

    def test_abort_render(self, make_test: MakeTest) -> None:
        test = make_test("var x = 42; x++;", SpecBug.TYPO_UPDATE)

        assert test.abort_tagged
        assert render(test) == "// Abort\nvar x = 42; x++;\n"

    def test_named_error_tag(self, make_test: MakeTest) -> None:
        assert make_test("var o = freeze({}); o.p = 1;").tag == "TypeError"

    @pytest.mark.parametrize("source", SELF_CONFORMANCE_PROGRAMS)
    def test_self_conformance(self, make_test: MakeTest, source: str) -> None:
        outcome = run_in_process(EngineHandle(id="reference"), make_test(source))

        assert outcome.status is TestStatus.PASS, outcome.message


class TestFormat:
    def test_empty_body(self) -> None:
        assert render(ConformanceTest(tag="Normal", body="")) == "// Normal\n"

    @pytest.mark.parametrize("source", SELF_CONFORMANCE_PROGRAMS)
    def test_parse_back(self, make_test: MakeTest, source: str) -> None:
        test = make_test(source)

        assert parse_test(render(test), test.name) == test

    def test_read_tag(self) -> None:
        assert read_tag("// TypeError\nx;\n") == "TypeError"

    def test_missing_tag(self) -> None:
        with pytest.raises(ValueError, match="tag"):
            read_tag("x;\n")

    @pytest.mark.parametrize(
        ("line", "kind"),
        [
            ("$assert.sameValue(x, 3);", AssertionKind.VAR_VALUE),
            ("$assert.sameValue(x, 0 / 0);", AssertionKind.VAR_VALUE),
            ("$assert.sameValue(1 / y, -1 / 0);", AssertionKind.VAR_VALUE),
            ("$assert.sameValue(z.p, x);", AssertionKind.OBJ_VALUE),
            ('$verifyProperty(x, "p", {value: 1, writable: true});', AssertionKind.PROP_ATTR),
            ("$assert.compareArray(keys(x), []);", AssertionKind.KEY_ORDER),
            ("$assert.callable(f);", AssertionKind.CALLABLE),
            ("x = 1;", None),
        ],
    )
    def test_classify_assertion(self, line: str, kind: AssertionKind | None) -> None:
        assert classify_assertion(line) is kind


class TestLiterals:
    @pytest.mark.parametrize(
        ("value", "text"),
        [
            (UNDEFINED, "undefined"),
            (NULL, "null"),
            (True, "true"),
            (3.0, "3"),
            (1.5, "1.5"),
            (-2.0, "-2"),
            (-0.0, "-0"),
            (math.nan, "0 / 0"),
            (math.inf, "1 / 0"),
            (-math.inf, "-1 / 0"),
            ('a"b', '"a\\"b"'),
        ],
    )
    def test_render_literal(self, value: object, text: str) -> None:
        assert render_literal(value) == text

    @pytest.mark.parametrize(
        ("key", "path"),
        [("p", "x.p"), ("0", "x[0]"), ("a b", 'x["a b"]'), ("if", 'x["if"]')],
    )
    def test_child_path(self, key: str, path: str) -> None:
        assert child_path("x", key) == path
