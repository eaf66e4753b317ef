"""Parser and evaluator for SLA rule programs.

A program declares priced parameters and required metrics, then one
``payable`` expression that maps the agreed operational metrics to a
money amount.  The language is total (no loops, no user functions) and
evaluates in exact fixed-scale decimal arithmetic, so a given program and
input always produce the same payable on every platform.

Grammar::

    program := decl* "payable" ":" expr
    decl    := "param" IDENT "=" NUMBER | "metric" IDENT
    expr    := "if" cmp "then" expr "else" expr | sum
    cmp     := sum (">="|"<="|">"|"<"|"=="|"!=") sum
    sum     := term (("+"|"-") term)*
    term    := factor (("*"|"/") factor)*
    factor  := NUMBER | IDENT | "(" expr ")"
             | ("min"|"max") "(" expr "," expr ")"
             | "round" "(" expr "," INT ")"

``#`` starts a comment running to end of line.  NUMBER is an optionally
signed decimal with at most nine fractional digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from ags.crypto.hashes import sha256
from ags.decimals import (
    ScaleError,
    dadd,
    ddiv,
    ddiv_at,
    dec,
    dmul,
    dround,
    dsub,
    encode_decimal,
    format_decimal,
    pad_scale,
    parse_decimal,
)

KEYWORDS = {"param", "metric", "payable", "if", "then", "else", "min", "max", "round"}
CMP_OPS = (">=", "<=", "==", "!=", ">", "<")


class SlaError(ValueError):
    """Base for rule-program failures."""


class ParseError(SlaError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


class EvalError(SlaError):
    """Missing metric, unknown override, division by zero, scale overflow."""


# --- AST ----------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    value: Decimal


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Cmp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class If:
    test: Cmp
    then: "Expr"
    orelse: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple["Expr", ...]


Expr = Lit | Name | Bin | If | Call


@dataclass(frozen=True)
class Program:
    params: tuple[tuple[str, Decimal], ...]
    metrics: tuple[str, ...]
    body: Expr
    source: str
    digest: bytes

    def same_rule(self, other: "Program") -> bool:
        """Structural equality, ignoring source formatting."""
        return (
            self.params == other.params
            and self.metrics == other.metrics
            and self.body == other.body
        )


# --- Lexer ----------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER, IDENT, KEYWORD, OP, EOF
    text: str
    line: int
    col: int


_OPERAND_ENDERS = {"NUMBER", "IDENT"}


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)

    def prev_ends_operand() -> bool:
        if not tokens:
            return False
        t = tokens[-1]
        return t.kind in _OPERAND_ENDERS or t.text == ")"

    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch.isdigit() or (
            ch in "+-" and i + 1 < n and source[i + 1].isdigit() and not prev_ends_operand()
        ):
            j = i + 1
            while j < n and (source[j].isdigit() or source[j] == "."):
                j += 1
            text = source[i:j]
            try:
                parse_decimal(text)
            except ValueError:
                raise ParseError(f"bad number {text!r}", start_line, start_col) from None
            tokens.append(Token("NUMBER", text, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            kind = "KEYWORD" if text in KEYWORDS else "IDENT"
            tokens.append(Token(kind, text, start_line, start_col))
            col += j - i
            i = j
            continue
        for op in (">=", "<=", "==", "!="):
            if source.startswith(op, i):
                tokens.append(Token("OP", op, start_line, start_col))
                i += 2
                col += 2
                break
        else:
            if ch in "+-*/()<>,:=":
                tokens.append(Token("OP", ch, start_line, start_col))
                i += 1
                col += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", start_line, start_col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# --- Parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def here(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.here
        self.pos += 1
        return token

    def fail(self, message: str):
        raise ParseError(message, self.here.line, self.here.col)

    def expect(self, text: str) -> Token:
        if self.here.text != text:
            self.fail(f"expected {text!r}, found {self.here.text!r}")
        return self.advance()

    def ident(self) -> str:
        if self.here.kind != "IDENT":
            self.fail(f"expected identifier, found {self.here.text!r}")
        return self.advance().text

    def program(self) -> tuple[tuple[tuple[str, Decimal], ...], tuple[str, ...], Expr]:
        params: list[tuple[str, Decimal]] = []
        metrics: list[str] = []
        declared: set[str] = set()
        while self.here.text in ("param", "metric"):
            keyword = self.advance().text
            name_token = self.here
            name = self.ident()
            if name in declared:
                raise ParseError(
                    f"duplicate declaration of {name!r}", name_token.line, name_token.col
                )
            declared.add(name)
            if keyword == "param":
                self.expect("=")
                if self.here.kind != "NUMBER":
                    self.fail("expected a number as param default")
                params.append((name, parse_decimal(self.advance().text)))
            else:
                metrics.append(name)
        self.expect("payable")
        self.expect(":")
        body = self.expr()
        if self.here.kind != "EOF":
            self.fail(f"unexpected trailing input {self.here.text!r}")
        return tuple(params), tuple(metrics), body

    def expr(self) -> Expr:
        if self.here.text == "if":
            self.advance()
            test = self.comparison()
            self.expect("then")
            then = self.expr()
            self.expect("else")
            orelse = self.expr()
            return If(test, then, orelse)
        return self.sum()

    def comparison(self) -> Cmp:
        left = self.sum()
        if self.here.text not in CMP_OPS:
            self.fail(f"expected comparison operator, found {self.here.text!r}")
        op = self.advance().text
        right = self.sum()
        return Cmp(op, left, right)

    def sum(self) -> Expr:
        node = self.term()
        while self.here.text in ("+", "-"):
            op = self.advance().text
            node = Bin(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.here.text in ("*", "/"):
            op = self.advance().text
            node = Bin(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        token = self.here
        if token.kind == "NUMBER":
            return Lit(parse_decimal(self.advance().text))
        if token.kind == "IDENT":
            return Name(self.advance().text)
        if token.text in ("min", "max"):
            fn = self.advance().text
            self.expect("(")
            first = self.expr()
            self.expect(",")
            second = self.expr()
            self.expect(")")
            return Call(fn, (first, second))
        if token.text == "round":
            self.advance()
            self.expect("(")
            value = self.expr()
            self.expect(",")
            if self.here.kind != "NUMBER" or "." in self.here.text:
                self.fail("round() places must be an integer literal")
            places = Lit(parse_decimal(self.advance().text))
            self.expect(")")
            return Call("round", (value, places))
        if token.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail(f"expected an expression, found {token.text!r}")


def _check_names(body: Expr, declared: set[str], tokens_by_name: dict[str, Token]) -> None:
    def walk(node: Expr) -> None:
        if isinstance(node, Name):
            if node.ident not in declared:
                token = tokens_by_name.get(node.ident)
                line, col = (token.line, token.col) if token else (0, 0)
                raise ParseError(f"undeclared identifier {node.ident!r}", line, col)
        elif isinstance(node, Bin):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, Cmp):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, If):
            walk(node.test)
            walk(node.then)
            walk(node.orelse)
        elif isinstance(node, Call):
            for arg in node.args:
                walk(arg)

    walk(body)


def parse(source: str) -> Program:
    """Parse source text; errors carry line and column."""
    tokens = tokenize(source)
    parser = _Parser(tokens)
    params, metrics, body = parser.program()
    declared = {name for name, _ in params} | set(metrics)
    by_name = {t.text: t for t in tokens if t.kind == "IDENT"}
    _check_names(body, declared, by_name)
    return Program(
        params=params,
        metrics=metrics,
        body=body,
        source=source,
        digest=sha256(source.encode()),
    )


# --- Printer ----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt(node: Expr, ctx_prec: int) -> str:
    if isinstance(node, Lit):
        return format_decimal(node.value)
    if isinstance(node, Name):
        return node.ident
    if isinstance(node, Call):
        args = ", ".join(_fmt(a, 0) for a in node.args)
        return f"{node.fn}({args})"
    if isinstance(node, Cmp):
        return f"{_fmt(node.left, 1)} {node.op} {_fmt(node.right, 1)}"
    if isinstance(node, If):
        text = f"if {_fmt(node.test, 0)} then {_fmt(node.then, 0)} else {_fmt(node.orelse, 0)}"
        return f"({text})" if ctx_prec > 0 else text
    prec = _PREC[node.op]
    text = f"{_fmt(node.left, prec)} {node.op} {_fmt(node.right, prec + 1)}"
    return f"({text})" if prec < ctx_prec else text


def print_program(program: Program) -> str:
    """Canonical source form; reparsing yields the same rule."""
    lines = [f"param {name} = {format_decimal(value)}" for name, value in program.params]
    lines += [f"metric {name}" for name in program.metrics]
    lines.append(f"payable: {_fmt(program.body, 0)}")
    return "\n".join(lines) + "\n"


# --- Evaluation ----------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    label: str
    value: Decimal | bool


@dataclass(frozen=True)
class PayableStatement:
    """The financial output: labeled line items and their exact total."""

    line_items: tuple[tuple[str, Decimal], ...]
    total: Decimal
    input_digest: bytes
    program_digest: bytes


def _named_inputs_digest(
    metrics: dict[str, Decimal], overrides: dict[str, Decimal]
) -> bytes:
    def block(mapping: dict[str, Decimal]) -> bytes:
        parts = [len(mapping).to_bytes(4, "big")]
        for name in sorted(mapping):
            encoded_name = name.encode()
            parts.append(len(encoded_name).to_bytes(2, "big"))
            parts.append(encoded_name)
            parts.append(encode_decimal(mapping[name]))
        return b"".join(parts)

    return sha256(block(metrics) + block(overrides))


class _Evaluator:
    def __init__(self, env: dict[str, Decimal]):
        self.env = env
        self.trace: list[TraceEntry] = []

    def eval(self, node: Expr) -> Decimal:
        if isinstance(node, Lit):
            return node.value
        if isinstance(node, Name):
            return self.env[node.ident]
        if isinstance(node, Bin):
            left = self.eval(node.left)
            right = self.eval(node.right)
            try:
                if node.op == "+":
                    value = dadd(left, right)
                elif node.op == "-":
                    value = dsub(left, right)
                elif node.op == "*":
                    value = dmul(left, right)
                else:
                    value = ddiv(left, right)
            except ZeroDivisionError:
                raise EvalError(f"division by zero in {_fmt(node, 0)!r}") from None
            except ScaleError as exc:
                raise EvalError(f"scale overflow in {_fmt(node, 0)!r}: {exc}") from None
            self.trace.append(TraceEntry(_fmt(node, 0), value))
            return value
        if isinstance(node, If):
            taken = self.eval_test(node.test)
            return self.eval(node.then if taken else node.orelse)
        if isinstance(node, Call):
            if node.fn == "round":
                value = self.eval(node.args[0])
                places = node.args[1].value
                try:
                    result = dround(value, int(places))
                except ScaleError as exc:
                    raise EvalError(str(exc)) from None
            else:
                first = self.eval(node.args[0])
                second = self.eval(node.args[1])
                result = min(first, second) if node.fn == "min" else max(first, second)
            self.trace.append(TraceEntry(_fmt(node, 0), result))
            return result
        raise EvalError(f"unknown node {node!r}")

    def eval_test(self, test: Cmp) -> bool:
        left = self.eval(test.left)
        right = self.eval(test.right)
        result = {
            ">=": left >= right,
            "<=": left <= right,
            ">": left > right,
            "<": left < right,
            "==": left == right,
            "!=": left != right,
        }[test.op]
        self.trace.append(TraceEntry(_fmt(test, 0), result))
        return result


def _build_env(
    program: Program,
    metrics: dict[str, Decimal | str | int],
    param_overrides: dict[str, Decimal | str | int] | None,
) -> tuple[dict[str, Decimal], dict[str, Decimal], dict[str, Decimal]]:
    overrides = {name: dec(value) for name, value in (param_overrides or {}).items()}
    declared_params = {name for name, _ in program.params}
    unknown = set(overrides) - declared_params
    if unknown:
        raise EvalError(f"unknown parameter override(s): {', '.join(sorted(unknown))}")
    supplied = {name: dec(value) for name, value in metrics.items()}
    missing = [name for name in program.metrics if name not in supplied]
    if missing:
        raise EvalError(f"missing metric(s): {', '.join(missing)}")
    used_metrics = {name: supplied[name] for name in program.metrics}
    env = {name: value for name, value in program.params}
    env.update(overrides)
    env.update(used_metrics)
    return env, used_metrics, overrides


def explain(
    program: Program,
    metrics: dict[str, Decimal | str | int],
    param_overrides: dict[str, Decimal | str | int] | None = None,
) -> list[TraceEntry]:
    """Ordered evaluation trace ending with the payable total."""
    env, _, _ = _build_env(program, metrics, param_overrides)
    evaluator = _Evaluator(env)
    total = evaluator.eval(program.body)
    evaluator.trace.append(TraceEntry("payable", total))
    return evaluator.trace


def evaluate(
    program: Program,
    metrics: dict[str, Decimal | str | int],
    param_overrides: dict[str, Decimal | str | int] | None = None,
) -> PayableStatement:
    """Deterministic bottom-up evaluation of the payable expression."""
    env, used_metrics, overrides = _build_env(program, metrics, param_overrides)
    evaluator = _Evaluator(env)
    total = evaluator.eval(program.body)
    items = tuple(
        (entry.label, entry.value)
        for entry in evaluator.trace
        if isinstance(entry.value, Decimal)
    ) + (("payable", total),)
    return PayableStatement(
        line_items=items,
        total=total,
        input_digest=_named_inputs_digest(used_metrics, overrides),
        program_digest=program.digest,
    )


def payable_bytes(statement: PayableStatement) -> bytes:
    """Canonical byte form of a payable statement, for anchoring."""
    parts = [
        statement.program_digest,
        statement.input_digest,
        encode_decimal(statement.total),
        len(statement.line_items).to_bytes(4, "big"),
    ]
    for label, amount in statement.line_items:
        encoded = label.encode()
        parts.append(len(encoded).to_bytes(2, "big"))
        parts.append(encoded)
        parts.append(encode_decimal(amount))
    return b"".join(parts)


def payable_digest(statement: PayableStatement) -> bytes:
    return sha256(payable_bytes(statement))


def overbilling_pct(legacy: Decimal | str, automated: Decimal | str) -> Decimal:
    """Reduction percentage (legacy - automated) / legacy * 100 at scale 4."""
    legacy = dec(legacy)
    automated = dec(automated)
    if not legacy:
        raise EvalError("legacy amount must be nonzero")
    return pad_scale(ddiv_at(dmul(dsub(legacy, automated), Decimal(100)), legacy, 4), 4)
