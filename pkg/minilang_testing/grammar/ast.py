"""AST tipado da MiniLang e rebaixamento a partir da árvore concreta.

Cada nó guarda ``path``, o caminho (índices de filho) do nó concreto mais interno que o
originou; o gerador usa esse caminho para localizar o ponto de mutação.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from minilang_testing.values import NULL, UNDEFINED, Value, number_to_string

from .exceptions import EarlySyntaxError
from .lexer import decode_string

if TYPE_CHECKING:
    from collections.abc import Callable

    from .parser import Path, SyntaxTree


@dataclass(frozen=True, slots=True)
class Node:
    path: tuple[int, ...] = field(default=(), compare=False, kw_only=True)


# --- expressões ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Identifier(Node):
    name: str


@dataclass(frozen=True, slots=True)
class Literal(Node):
    value: Value


@dataclass(frozen=True, slots=True)
class ArrayLiteral(Node):
    elements: tuple[Expression, ...]


@dataclass(frozen=True, slots=True)
class Property(Node):
    key: str | None
    value: Expression
    computed: Expression | None = None


@dataclass(frozen=True, slots=True)
class ObjectLiteral(Node):
    properties: tuple[Property, ...]


@dataclass(frozen=True, slots=True)
class Param(Node):
    name: str
    default: Expression | None = None


@dataclass(frozen=True, slots=True)
class FunctionExpression(Node):
    params: tuple[Param, ...]
    body: tuple[Statement, ...]


@dataclass(frozen=True, slots=True)
class Member(Node):
    obj: Expression
    name: str | None = None
    index: Expression | None = None


@dataclass(frozen=True, slots=True)
class Call(Node):
    callee: Expression
    arguments: tuple[Expression, ...]


@dataclass(frozen=True, slots=True)
class Update(Node):
    op: str
    prefix: bool
    target: Identifier | Member


@dataclass(frozen=True, slots=True)
class Unary(Node):
    op: str
    argument: Expression


@dataclass(frozen=True, slots=True)
class Binary(Node):
    op: str
    left: Expression
    right: Expression


@dataclass(frozen=True, slots=True)
class Assign(Node):
    target: Identifier | Member
    value: Expression


type Expression = (
    Identifier
    | Literal
    | ArrayLiteral
    | ObjectLiteral
    | FunctionExpression
    | Member
    | Call
    | Update
    | Unary
    | Binary
    | Assign
)

# --- instruções ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class VarDecl(Node):
    name: str
    init: Expression | None = None


@dataclass(frozen=True, slots=True)
class ExprStmt(Node):
    expr: Expression


@dataclass(frozen=True, slots=True)
class Block(Node):
    body: tuple[Statement, ...]


@dataclass(frozen=True, slots=True)
class If(Node):
    test: Expression
    consequent: Block
    alternate: Block | None = None


@dataclass(frozen=True, slots=True)
class While(Node):
    test: Expression
    body: Block


@dataclass(frozen=True, slots=True)
class FunctionDecl(Node):
    name: str
    params: tuple[Param, ...]
    body: tuple[Statement, ...]


@dataclass(frozen=True, slots=True)
class Return(Node):
    argument: Expression | None = None


@dataclass(frozen=True, slots=True)
class Throw(Node):
    argument: Expression


@dataclass(frozen=True, slots=True)
class Break(Node):
    pass


@dataclass(frozen=True, slots=True)
class Try(Node):
    block: Block
    param: str
    handler: Block


type Statement = VarDecl | ExprStmt | Block | If | While | FunctionDecl | Return | Throw | Break | Try


@dataclass(frozen=True, slots=True)
class Program(Node):
    body: tuple[Statement, ...]


# -----------------------------------------------------------------------------
# Rebaixamento
# -----------------------------------------------------------------------------

_KEYWORD_LITERALS: dict[str, Value] = {
    "true": True,
    "false": False,
    "null": NULL,
    "undefined": UNDEFINED,
}


class _Lowering:
    def __init__(self) -> None:
        self._in_function = False
        self._loop_depth = 0
        self._dispatch: dict[str, Callable[[SyntaxTree, Path], object]] = {
            "Statement": self._single,
            "Expression": self._single,
            "LeftHandSideExpression": self._single,
            "VariableStatement": self._variable,
            "Block": self._block,
            "ExpressionStatement": self._expression_statement,
            "IfStatement": self._if,
            "WhileStatement": self._while,
            "FunctionDeclaration": self._function_declaration,
            "ReturnStatement": self._return,
            "ThrowStatement": self._throw,
            "BreakStatement": self._break,
            "TryStatement": self._try,
            "AssignmentExpression": self._assignment,
            "EqualityExpression": self._binary,
            "RelationalExpression": self._binary,
            "AdditiveExpression": self._binary,
            "MultiplicativeExpression": self._binary,
            "UnaryExpression": self._unary,
            "UpdateExpression": self._update,
            "CallExpression": self._call_or_member,
            "MemberExpression": self._call_or_member,
            "PrimaryExpression": self._primary,
            "Literal": self._literal,
            "ArrayLiteral": self._array,
            "ObjectLiteral": self._object,
            "FunctionExpression": self._function_expression,
        }

    def lower(self, node: SyntaxTree, path: Path) -> object:
        handler = self._dispatch.get(node.production or "")
        if handler is None:
            msg = f"Produção sem rebaixamento: {node.production}"
            raise EarlySyntaxError(msg)
        return handler(node, path)

    def program(self, tree: SyntaxTree) -> Program:
        body = self._statement_list(tree.children[0], (0,)) if tree.children else ()
        return Program(body, path=())

    # --- listas -------------------------------------------------------------------

    @staticmethod
    def _flatten(node: SyntaxTree, path: Path) -> list[tuple[SyntaxTree, Path]]:
        """Achata listas recursivas à esquerda (``L ::= X | L [","] X``)."""
        items: list[tuple[SyntaxTree, Path]] = []
        while len(node.children) > 1:
            last = len(node.children) - 1
            items.append((node.children[last], (*path, last)))
            node, path = node.children[0], (*path, 0)
        items.append((node.children[0], (*path, 0)))
        items.reverse()
        return items

    def _statement_list(self, node: SyntaxTree, path: Path) -> tuple[Statement, ...]:
        return tuple(self.lower(n, p) for n, p in self._flatten(node, path))  # type: ignore[misc]

    def _expression_list(self, node: SyntaxTree, path: Path) -> tuple[Expression, ...]:
        return tuple(self.lower(n, p) for n, p in self._flatten(node, path))  # type: ignore[misc]

    def _params(self, node: SyntaxTree, path: Path) -> tuple[Param, ...]:
        if not node.children:
            return ()
        params = []
        for item, item_path in self._flatten(node.children[0], (*path, 0)):
            name = item.children[0].leaf_text or ""
            default = None
            if len(item.children) > 1:
                default = self.lower(item.children[2], (*item_path, 2))
            params.append(Param(name, default, path=item_path))  # type: ignore[arg-type]
        return tuple(params)

    # --- instruções ---------------------------------------------------------------

    def _single(self, node: SyntaxTree, path: Path) -> object:
        return self.lower(node.children[0], (*path, 0))

    def _variable(self, node: SyntaxTree, path: Path) -> VarDecl:
        name = node.children[1].leaf_text or ""
        init = None
        if len(node.children) > 3:  # noqa: PLR2004
            init = self.lower(node.children[3], (*path, 3))
        return VarDecl(name, init, path=path)  # type: ignore[arg-type]

    def _block(self, node: SyntaxTree, path: Path) -> Block:
        if len(node.children) == 2:  # noqa: PLR2004
            return Block((), path=path)
        return Block(self._statement_list(node.children[1], (*path, 1)), path=path)

    def _body(self, node: SyntaxTree, path: Path) -> tuple[Statement, ...]:
        saved = (self._in_function, self._loop_depth)
        self._in_function, self._loop_depth = True, 0
        try:
            return self._block(node, path).body
        finally:
            self._in_function, self._loop_depth = saved

    def _expression_statement(self, node: SyntaxTree, path: Path) -> ExprStmt:
        return ExprStmt(self.lower(node.children[0], (*path, 0)), path=path)  # type: ignore[arg-type]

    def _if(self, node: SyntaxTree, path: Path) -> If:
        test = self.lower(node.children[2], (*path, 2))
        consequent = self._block(node.children[4], (*path, 4))
        alternate = None
        if len(node.children) > 5:  # noqa: PLR2004
            alternate = self._block(node.children[6], (*path, 6))
        return If(test, consequent, alternate, path=path)  # type: ignore[arg-type]

    def _while(self, node: SyntaxTree, path: Path) -> While:
        test = self.lower(node.children[2], (*path, 2))
        self._loop_depth += 1
        try:
            body = self._block(node.children[4], (*path, 4))
        finally:
            self._loop_depth -= 1
        return While(test, body, path=path)  # type: ignore[arg-type]

    def _function_declaration(self, node: SyntaxTree, path: Path) -> FunctionDecl:
        name = node.children[1].leaf_text or ""
        params = self._params(node.children[3], (*path, 3))
        body = self._body(node.children[5], (*path, 5))
        return FunctionDecl(name, params, body, path=path)

    def _return(self, node: SyntaxTree, path: Path) -> Return:
        if not self._in_function:
            msg = "return fora de função"
            raise EarlySyntaxError(msg)
        argument = None
        if len(node.children) > 2:  # noqa: PLR2004
            argument = self.lower(node.children[1], (*path, 1))
        return Return(argument, path=path)  # type: ignore[arg-type]

    def _throw(self, node: SyntaxTree, path: Path) -> Throw:
        return Throw(self.lower(node.children[1], (*path, 1)), path=path)  # type: ignore[arg-type]

    def _break(self, _node: SyntaxTree, path: Path) -> Break:
        if not self._loop_depth:
            msg = "break fora de laço"
            raise EarlySyntaxError(msg)
        return Break(path=path)

    def _try(self, node: SyntaxTree, path: Path) -> Try:
        block = self._block(node.children[1], (*path, 1))
        param = node.children[4].leaf_text or ""
        handler = self._block(node.children[6], (*path, 6))
        return Try(block, param, handler, path=path)

    # --- expressões ---------------------------------------------------------------

    @staticmethod
    def _target(expr: object, what: str) -> Identifier | Member:
        if isinstance(expr, (Identifier, Member)):
            return expr
        msg = f"Alvo inválido para {what}"
        raise EarlySyntaxError(msg)

    def _assignment(self, node: SyntaxTree, path: Path) -> object:
        if len(node.children) == 1:
            return self.lower(node.children[0], (*path, 0))
        target = self._target(self.lower(node.children[0], (*path, 0)), "atribuição")
        value = self.lower(node.children[2], (*path, 2))
        return Assign(target, value, path=path)  # type: ignore[arg-type]

    def _binary(self, node: SyntaxTree, path: Path) -> object:
        if len(node.children) == 1:
            return self.lower(node.children[0], (*path, 0))
        left = self.lower(node.children[0], (*path, 0))
        right = self.lower(node.children[2], (*path, 2))
        return Binary(node.children[1].leaf_text or "", left, right, path=path)  # type: ignore[arg-type]

    def _unary(self, node: SyntaxTree, path: Path) -> object:
        if len(node.children) == 1:
            return self.lower(node.children[0], (*path, 0))
        argument = self.lower(node.children[1], (*path, 1))
        return Unary(node.children[0].leaf_text or "", argument, path=path)  # type: ignore[arg-type]

    def _update(self, node: SyntaxTree, path: Path) -> object:
        if len(node.children) == 1:
            return self.lower(node.children[0], (*path, 0))
        first = node.children[0]
        if first.is_leaf:
            target = self._target(self.lower(node.children[1], (*path, 1)), first.leaf_text or "")
            return Update(first.leaf_text or "", True, target, path=path)  # noqa: FBT003
        op = node.children[1].leaf_text or ""
        target = self._target(self.lower(first, (*path, 0)), op)
        return Update(op, False, target, path=path)  # noqa: FBT003

    def _call_or_member(self, node: SyntaxTree, path: Path) -> object:
        if len(node.children) == 1:
            return self.lower(node.children[0], (*path, 0))
        base = self.lower(node.children[0], (*path, 0))
        second = node.children[1]
        if second.production == "Arguments":
            arguments: tuple[Expression, ...] = ()
            if len(second.children) == 3:  # noqa: PLR2004
                arguments = self._expression_list(second.children[1], (*path, 1, 1))
            return Call(base, arguments, path=path)  # type: ignore[arg-type]
        if second.leaf_text == ".":
            return Member(base, name=node.children[2].leaf_text, path=path)  # type: ignore[arg-type]
        index = self.lower(node.children[2], (*path, 2))
        return Member(base, index=index, path=path)  # type: ignore[arg-type]

    def _primary(self, node: SyntaxTree, path: Path) -> object:
        first = node.children[0]
        if len(node.children) == 3:  # noqa: PLR2004
            return self.lower(node.children[1], (*path, 1))
        if first.is_leaf:
            return Identifier(first.leaf_text or "", path=path)
        return self.lower(first, (*path, 0))

    def _literal(self, node: SyntaxTree, path: Path) -> Literal:
        leaf = node.children[0]
        text = leaf.leaf_text or ""
        kind = leaf.token.kind if leaf.token else text
        if kind == "NUMBER":
            return Literal(float(text), path=path)
        if kind == "STRING":
            return Literal(decode_string(text), path=path)
        return Literal(_KEYWORD_LITERALS[text], path=path)

    def _array(self, node: SyntaxTree, path: Path) -> ArrayLiteral:
        if len(node.children) == 2:  # noqa: PLR2004
            return ArrayLiteral((), path=path)
        return ArrayLiteral(self._expression_list(node.children[1], (*path, 1)), path=path)

    def _object(self, node: SyntaxTree, path: Path) -> ObjectLiteral:
        if len(node.children) == 2:  # noqa: PLR2004
            return ObjectLiteral((), path=path)
        props = []
        for item, item_path in self._flatten(node.children[1], (*path, 1)):
            props.append(self._property(item, item_path))
        return ObjectLiteral(tuple(props), path=path)

    def _property(self, node: SyntaxTree, path: Path) -> Property:
        name_node = node.children[0]
        value = self.lower(node.children[2], (*path, 2))
        if len(name_node.children) == 3:  # noqa: PLR2004
            computed = self.lower(name_node.children[1], (*path, 0, 1))
            return Property(None, value, computed, path=path)  # type: ignore[arg-type]
        leaf = name_node.children[0]
        text = leaf.leaf_text or ""
        kind = leaf.token.kind if leaf.token else "IDENT"
        if kind == "STRING":
            key = decode_string(text)
        elif kind == "NUMBER":
            key = number_to_string(float(text))
        else:
            key = text
        return Property(key, value, path=path)  # type: ignore[arg-type]

    def _function_expression(self, node: SyntaxTree, path: Path) -> FunctionExpression:
        params = self._params(node.children[2], (*path, 2))
        body = self._body(node.children[4], (*path, 4))
        return FunctionExpression(params, body, path=path)


def lower(tree: SyntaxTree) -> Program:
    """Rebaixa a árvore concreta de um ``Program`` para o AST tipado.

    Raises:
        EarlySyntaxError: ``break`` fora de laço, ``return`` fora de função ou alvo de
            atribuição/atualização inválido.

    """
    return _Lowering().program(tree)


def declared_names(body: tuple[Statement, ...]) -> tuple[list[str], list[FunctionDecl]]:
    """Declarações içadas de um corpo: nomes ``var`` e funções, em ordem de texto.

    Não desce em corpos de funções aninhadas.
    """
    names: list[str] = []
    functions: list[FunctionDecl] = []
    pending = list(reversed(body))
    while pending:
        stmt = pending.pop()
        match stmt:
            case VarDecl(name=name):
                if name not in names:
                    names.append(name)
            case FunctionDecl():
                functions.append(stmt)
            case Block(body=inner):
                pending.extend(reversed(inner))
            case If(consequent=consequent, alternate=alternate):
                if alternate is not None:
                    pending.append(alternate)
                pending.append(consequent)
            case While(body=loop):
                pending.append(loop)
            case Try(block=block, handler=handler):
                pending.append(handler)
                pending.append(block)
            case _:
                pass
    return names, functions
