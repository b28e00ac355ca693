"""Tiny expression language for building truth tables.

Grammar (operator precedence ! > & > ^ > |):

    expr  := or
    or    := xor ("|" xor)*
    xor   := and ("^" and)*
    and   := unary ("&" unary)*
    unary := "!" unary | atom
    atom  := "0" | "1" | var | name "(" args ")" | name | "(" expr ")"
    var   := "x" integer
    name  in {maj, parity, and, or, compose, iterate, paper_f}

Two kinds of meaning. A formula mentions variables x0..x{n-1} (contiguous,
no gaps) and is tabulated pointwise; builtin names applied to expression
arguments act pointwise too, e.g. "maj(x0, x1 & x2, x3)". A function
literal builds a whole table directly: "parity(8)" and friends take a single
integer arity, "paper_f" stands alone, and "compose(e1, e2)" / "iterate(e, k)"
combine standalone tables block-wise. Function literals are only legal where
a whole function is expected, not as a bit inside a larger formula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

import numpy as np

from ._util import MAX_VARS
from .errors import CapacityError, InputError, ParseError
from .truthtable import TruthTable, builtin, compose, iterate

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<var>x[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<op>[!&^|(),])
    """,
    re.VERBOSE,
)

_FUNCTION_NAMES = frozenset({"maj", "parity", "and", "or", "compose", "iterate", "paper_f"})
_TABLE_ARITY_NAMES = frozenset({"maj", "parity", "and", "or"})
_POINTWISE_NAMES = frozenset({"maj", "parity", "and", "or", "paper_f"})


@dataclass(frozen=True)
class Token:
    kind: str  # var | name | int | one of ! & ^ | ( ) , | end
    text: str
    start: int
    end: int


def _tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", source, pos)
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        text = m.group(0)
        if kind == "op":
            kind = text
        tokens.append(Token(kind, text, m.start(), m.end()))
    tokens.append(Token("end", "", len(source), len(source)))
    return tokens


@dataclass(frozen=True)
class Node:
    kind: str  # var | const | not | and | or | xor | call
    value: int | str | None
    children: tuple["Node", ...]
    span: tuple[int, int] = field(compare=False)


_ATOM_STARTERS = frozenset({"var", "name", "int", "(", "!"})


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"unexpected {self._describe(tok)}", self.source, tok.start, expected={kind}
            )
        return self.advance()

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "end" else f"token {tok.text!r}"

    def parse(self) -> Node:
        node = self.parse_or()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(
                f"unexpected {self._describe(tok)}",
                self.source,
                tok.start,
                expected={"&", "^", "|", "end of input"},
            )
        return node

    def _binary(self, op: str, kind: str, parse_operand) -> Node:
        node = parse_operand()
        while self.peek().kind == op:
            op_tok = self.advance()
            right = self._operand_after(op_tok, parse_operand)
            node = Node(kind, None, (node, right), (node.span[0], right.span[1]))
        return node

    def _operand_after(self, op_tok: Token, parse_operand) -> Node:
        nxt = self.peek()
        if nxt.kind not in _ATOM_STARTERS:
            # missing operand: report at the operator that demanded it
            raise ParseError(
                f"operator {op_tok.text!r} is missing its operand",
                self.source,
                op_tok.start,
                expected={"variable", "constant", "name", "(", "!"},
            )
        return parse_operand()

    def parse_or(self) -> Node:
        return self._binary("|", "or", self.parse_xor)

    def parse_xor(self) -> Node:
        return self._binary("^", "xor", self.parse_and)

    def parse_and(self) -> Node:
        return self._binary("&", "and", self.parse_unary)

    def parse_unary(self) -> Node:
        tok = self.peek()
        if tok.kind == "!":
            op_tok = self.advance()
            child = self._operand_after(op_tok, self.parse_unary)
            return Node("not", None, (child,), (op_tok.start, child.span[1]))
        return self.parse_atom()

    def parse_atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "var":
            self.advance()
            return Node("var", int(tok.text[1:]), (), (tok.start, tok.end))
        if tok.kind == "int":
            self.advance()
            return Node("const", int(tok.text), (), (tok.start, tok.end))
        if tok.kind == "name":
            self.advance()
            if self.peek().kind == "(":
                self.advance()
                args = []
                if self.peek().kind != ")":
                    args.append(self.parse_or())
                    while self.peek().kind == ",":
                        self.advance()
                        args.append(self.parse_or())
                closer = self.expect(")")
                return Node("call", tok.text, tuple(args), (tok.start, closer.end))
            return Node("call", tok.text, (), (tok.start, tok.end))
        if tok.kind == "(":
            self.advance()
            inner = self.parse_or()
            closer = self.expect(")")
            return replace(inner, span=(tok.start, closer.end))
        raise ParseError(
            f"unexpected {self._describe(tok)}",
            self.source,
            tok.start,
            expected={"variable", "constant", "name", "(", "!"},
        )


def parse(source: str) -> Node:
    return _Parser(source).parse()


_PREC = {"or": 1, "xor": 2, "and": 3, "not": 4, "var": 5, "const": 5, "call": 5}
_OP_TEXT = {"or": "|", "xor": "^", "and": "&"}


def unparse(node: Node) -> str:
    """Canonical rendering; parse(unparse(ast)) reproduces the ast."""

    def wrap(child: Node, need: int) -> str:
        text = unparse(child)
        return f"({text})" if _PREC[child.kind] < need else text

    if node.kind == "var":
        return f"x{node.value}"
    if node.kind == "const":
        return str(node.value)
    if node.kind == "not":
        return "!" + wrap(node.children[0], _PREC["not"])
    if node.kind == "call":
        if not node.children:
            return str(node.value)
        return f"{node.value}(" + ", ".join(unparse(c) for c in node.children) + ")"
    prec = _PREC[node.kind]
    left = wrap(node.children[0], prec)
    right = wrap(node.children[1], prec + 1)  # right sibling re-parenthesized to keep shape
    return f"{left} {_OP_TEXT[node.kind]} {right}"


def _is_function_literal(node: Node) -> bool:
    if node.kind != "call":
        return False
    name = node.value
    if name in ("compose", "iterate"):
        return True
    if name == "paper_f" and not node.children:
        return True
    if name in _TABLE_ARITY_NAMES:
        return len(node.children) == 1 and node.children[0].kind == "const"
    return False


def _literal_table(node: Node) -> TruthTable:
    name = node.value
    if name == "compose":
        if len(node.children) != 2:
            raise InputError("compose takes exactly two function arguments")
        return compose(elaborate_node(node.children[0]), elaborate_node(node.children[1]))
    if name == "iterate":
        if len(node.children) != 2 or node.children[1].kind != "const":
            raise InputError("iterate takes a function and an integer count")
        return iterate(elaborate_node(node.children[0]), int(node.children[1].value))
    if name == "paper_f":
        return builtin("paper_f", 4)
    arity = int(node.children[0].value)
    if arity < 1:
        raise InputError(f"{name} needs a positive arity, got {arity}")
    if arity > MAX_VARS:
        raise CapacityError(f"{name}({arity}) exceeds the {MAX_VARS}-variable cap")
    return builtin("majority" if name == "maj" else name, arity)


def _collect_vars(node: Node, out: set) -> None:
    if node.kind == "var":
        out.add(node.value)
        return
    if node.kind == "call":
        if _is_function_literal(node) or node.value in ("compose", "iterate"):
            raise InputError(
                f"function-valued expression {node.value!r} used where a bit is required"
            )
    for child in node.children:
        _collect_vars(child, out)


def _eval_formula(node: Node, columns: list[np.ndarray]) -> np.ndarray:
    kind = node.kind
    if kind == "var":
        return columns[node.value]
    if kind == "const":
        if node.value not in (0, 1):
            raise InputError(
                f"integer literal {node.value} is only valid as a builtin argument"
            )
        return np.full_like(columns[0], node.value)
    if kind == "not":
        return 1 - _eval_formula(node.children[0], columns)
    if kind == "and":
        return _eval_formula(node.children[0], columns) & _eval_formula(node.children[1], columns)
    if kind == "or":
        return _eval_formula(node.children[0], columns) | _eval_formula(node.children[1], columns)
    if kind == "xor":
        return _eval_formula(node.children[0], columns) ^ _eval_formula(node.children[1], columns)
    if kind == "call":
        name = node.value
        if name not in _FUNCTION_NAMES:
            raise InputError(f"unknown builtin {name!r}")
        if name not in _POINTWISE_NAMES:
            raise InputError(f"{name!r} builds a function and cannot be applied pointwise")
        arity = len(node.children)
        if arity == 0:
            raise InputError(f"{name} needs arguments when used inside a formula")
        table = builtin("majority" if name == "maj" else name, arity)
        packed = np.zeros_like(columns[0])
        for j, child in enumerate(node.children):
            packed |= _eval_formula(child, columns) << j
        return table.bits()[packed].astype(np.int64)
    raise InputError(f"cannot evaluate node kind {kind!r}")


def elaborate_node(node: Node) -> TruthTable:
    """Turn an AST into a truth table (function literal or tabulated formula)."""
    if _is_function_literal(node):
        return _literal_table(node)
    used: set = set()
    _collect_vars(node, used)
    if used:
        top = max(used)
        missing = sorted(set(range(top + 1)) - used)
        if missing:
            raise InputError(
                f"variables must be contiguous from x0; missing x{missing[0]}"
            )
        n = top + 1
        if n > MAX_VARS:
            raise CapacityError(f"formula uses {n} variables, cap is {MAX_VARS}")
    else:
        n = 1  # constant formulas become 1-variable constant tables
    idx = np.arange(1 << n, dtype=np.int64)
    columns = [(idx >> i) & 1 for i in range(n)]
    values = _eval_formula(node, columns)
    return TruthTable.from_bit_array((values & 1).astype(np.uint8))


def elaborate(source: str) -> TruthTable:
    return elaborate_node(parse(source))


def render_minterms(t: TruthTable) -> str:
    """XOR-of-minterms rendering; elaborate(render_minterms(t)) == t.

    Every minterm mentions all variables, so variable contiguity always
    holds. The all-zero table has no minterms and cannot be rendered at the
    same variable count; callers must special-case it.
    """
    terms = []
    for x in range(t.size):
        if t.bit_at(x):
            lits = [
                f"x{i}" if (x >> i) & 1 else f"!x{i}"
                for i in range(t.n)
            ]
            terms.append(" & ".join(lits))
    if not terms:
        raise InputError("the all-zero table has no minterm rendering")
    return " ^ ".join(f"({term})" for term in terms)


__all__ = ["Node", "Token", "elaborate", "elaborate_node", "parse", "render_minterms", "unparse"]
