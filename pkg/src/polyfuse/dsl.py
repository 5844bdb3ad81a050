"""Parser, AST, and pretty-printer for the algebra-definition language.

Grammar (whitespace-insensitive, ``#`` starts a line comment):

    program       := stmt*
    stmt          := algebraDef | letFuse | letSpecialize | query | verifyCmd
    algebraDef    := "algebra" IDENT ("(" IDENT ("," IDENT)* ")")?
                     "{" "phi" "=" poly ";" "}"
    letFuse       := "let" IDENT "=" "fuse" "(" ("J"|"K") "," IDENT ","
                     IDENT ")" ";"
    letSpecialize := "let" IDENT "=" "specialize" "(" IDENT
                     ("," IDENT "=" poly)* ")" ";"
    query         := ("phi"|"g"|"casimir"|"order"|"centrals") IDENT ";"
    verifyCmd     := "verify" (IDENT | "fuse" "(" ("J"|"K") "," IDENT ","
                     IDENT ")") ("with" "(" param ("," param)* ")")? ";"
    param         := IDENT "=" ("+"|"-")? rational
    poly          := ("+"|"-")? term (("+"|"-") term)*
    term          := (rational | factor) ("*" factor)*
    factor        := "P0" ("^" UINT)? | IDENT
    rational      := UINT ("/" UINT)?

Identifiers must be defined before use and are never redefined; the five
builtin algebras are pre-registered.  Inside an algebra definition the
symbols usable in phi are exactly the declared parameters; specialization
values may introduce new symbols but cannot mention P0.

The pretty-printer emits a canonical form (descending P0 powers, sorted
symbol monomials, explicit ``*``) that parses back to an equal program.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .coeffring import CoeffExpr, P0Poly
from .algebra import builtin_names

QUERY_KINDS = ("phi", "g", "casimir", "order", "centrals")

_PUNCT = set("{}(),;=^*+-/")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int,
                 expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        text = f"line {line}, col {col}: {message}"
        if expected:
            text += f" (expected: {', '.join(expected)})"
        super().__init__(text)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "int", a punctuation character, or "eof"
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)
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
        if ch.isdigit():
            start = i
            while i < n and source[i].isdigit():
                i += 1
            tokens.append(Token("int", source[start:i], line, col))
            col += i - start
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append(Token("ident", source[start:i], line, col))
            col += i - start
            continue
        if ch in _PUNCT:
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# -- AST ----------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraDef:
    name: str
    params: tuple[str, ...]
    phi: P0Poly
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class LetFuse:
    name: str
    kind: str  # "J" or "K"
    left: str
    right: str
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class LetSpecialize:
    name: str
    source: str
    assignments: tuple[tuple[str, CoeffExpr], ...]
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class Query:
    what: str  # one of QUERY_KINDS
    target: str
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


# A verify target is either a defined name or an inline fusion (kind, L, M).
VerifyTarget = Union[str, tuple[str, str, str]]


@dataclass(frozen=True)
class Verify:
    target: VerifyTarget
    params: tuple[tuple[str, Fraction], ...]
    pos: tuple[int, int] = field(compare=False, default=(0, 0))


Statement = Union[AlgebraDef, LetFuse, LetSpecialize, Query, Verify]


@dataclass(frozen=True)
class DslProgram:
    statements: tuple[Statement, ...]


# -- parser -------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.defined: set[str] = set(builtin_names())

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, token: Token, message: str, expected: tuple[str, ...] = ()):
        raise ParseError(message, token.line, token.col, expected)

    def expect(self, kind: str, expected_name: str | None = None) -> Token:
        token = self.peek()
        if token.kind != kind:
            name = expected_name or f"'{kind}'"
            self.fail(token, f"unexpected {describe(token)}", (name,))
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        token = self.peek()
        if token.kind != "ident" or token.text != word:
            self.fail(token, f"unexpected {describe(token)}", (f"'{word}'",))
        return self.advance()

    def expect_ident(self, role: str) -> Token:
        token = self.peek()
        if token.kind != "ident":
            self.fail(token, f"unexpected {describe(token)}", (role,))
        return self.advance()

    def require_defined(self, token: Token):
        if token.text not in self.defined:
            self.fail(token, f"unknown identifier {token.text!r}",
                      ("a defined algebra name",))

    def define(self, token: Token):
        if token.text in self.defined:
            self.fail(token, f"duplicate definition of {token.text!r}")
        self.defined.add(token.text)

    # statements ---------------------------------------------------------

    def parse_program(self) -> DslProgram:
        statements: list[Statement] = []
        while True:
            token = self.peek()
            if token.kind == "eof":
                break
            statements.append(self.parse_statement())
        return DslProgram(tuple(statements))

    def parse_statement(self) -> Statement:
        token = self.peek()
        if token.kind != "ident":
            self.fail(token, f"unexpected {describe(token)}",
                      ("'algebra'", "'let'", "'verify'") +
                      tuple(f"'{q}'" for q in QUERY_KINDS))
        if token.text == "algebra":
            return self.parse_algebra_def()
        if token.text == "let":
            return self.parse_let()
        if token.text == "verify":
            return self.parse_verify()
        if token.text in QUERY_KINDS:
            return self.parse_query()
        self.fail(token, f"unexpected identifier {token.text!r}",
                  ("'algebra'", "'let'", "'verify'") +
                  tuple(f"'{q}'" for q in QUERY_KINDS))

    def parse_algebra_def(self) -> AlgebraDef:
        start = self.expect_keyword("algebra")
        name = self.expect_ident("an algebra name")
        self.define(name)
        params: list[str] = []
        if self.peek().kind == "(":
            self.advance()
            params.append(self.expect_ident("a symbol name").text)
            while self.peek().kind == ",":
                self.advance()
                params.append(self.expect_ident("a symbol name").text)
            self.expect(")")
        self.expect("{")
        self.expect_keyword("phi")
        self.expect("=")
        phi = self.parse_poly(allowed_symbols=frozenset(params), allow_p0=True)
        self.expect(";")
        self.expect("}")
        return AlgebraDef(name.text, tuple(params), phi,
                          pos=(start.line, start.col))

    def parse_let(self) -> Statement:
        start = self.expect_keyword("let")
        name = self.expect_ident("a new name")
        self.define(name)
        self.expect("=")
        head = self.peek()
        if head.kind == "ident" and head.text == "fuse":
            kind, left, right = self.parse_fuse_call()
            self.expect(";")
            return LetFuse(name.text, kind, left, right,
                           pos=(start.line, start.col))
        if head.kind == "ident" and head.text == "specialize":
            self.advance()
            self.expect("(")
            source = self.expect_ident("a defined algebra name")
            self.require_defined(source)
            assignments: list[tuple[str, CoeffExpr]] = []
            while self.peek().kind == ",":
                self.advance()
                symbol = self.expect_ident("a symbol name")
                self.expect("=")
                value = self.parse_poly(allowed_symbols=None, allow_p0=False)
                assignments.append((symbol.text, value.constant_term()))
            self.expect(")")
            self.expect(";")
            return LetSpecialize(name.text, source.text, tuple(assignments),
                                 pos=(start.line, start.col))
        self.fail(head, f"unexpected {describe(head)}",
                  ("'fuse'", "'specialize'"))

    def parse_fuse_call(self) -> tuple[str, str, str]:
        self.expect_keyword("fuse")
        self.expect("(")
        kind = self.peek()
        if kind.kind != "ident" or kind.text not in ("J", "K"):
            self.fail(kind, f"unexpected {describe(kind)}", ("'J'", "'K'"))
        self.advance()
        self.expect(",")
        left = self.expect_ident("a defined algebra name")
        self.require_defined(left)
        self.expect(",")
        right = self.expect_ident("a defined algebra name")
        self.require_defined(right)
        self.expect(")")
        return kind.text, left.text, right.text

    def parse_query(self) -> Query:
        keyword = self.advance()
        target = self.expect_ident("a defined algebra name")
        self.require_defined(target)
        self.expect(";")
        return Query(keyword.text, target.text, pos=(keyword.line, keyword.col))

    def parse_verify(self) -> Verify:
        start = self.expect_keyword("verify")
        head = self.peek()
        target: VerifyTarget
        if head.kind == "ident" and head.text == "fuse":
            target = self.parse_fuse_call()
        else:
            name = self.expect_ident("a defined algebra name or 'fuse'")
            self.require_defined(name)
            target = name.text
        params: list[tuple[str, Fraction]] = []
        if self.peek().kind == "ident" and self.peek().text == "with":
            self.advance()
            self.expect("(")
            params.append(self.parse_param())
            while self.peek().kind == ",":
                self.advance()
                params.append(self.parse_param())
            self.expect(")")
        self.expect(";")
        return Verify(target, tuple(params), pos=(start.line, start.col))

    def parse_param(self) -> tuple[str, Fraction]:
        name = self.expect_ident("a parameter name")
        self.expect("=")
        sign = 1
        if self.peek().kind in ("+", "-"):
            sign = -1 if self.advance().kind == "-" else 1
        value = self.parse_rational()
        return name.text, sign * value

    # polynomials --------------------------------------------------------

    def parse_rational(self) -> Fraction:
        numerator = self.expect("int", "an integer")
        value = Fraction(int(numerator.text))
        if self.peek().kind == "/":
            self.advance()
            denominator = self.expect("int", "an integer")
            if int(denominator.text) == 0:
                self.fail(denominator, "zero denominator")
            value /= int(denominator.text)
        return value

    def parse_poly(self, allowed_symbols: frozenset[str] | None,
                   allow_p0: bool) -> P0Poly:
        sign = 1
        if self.peek().kind in ("+", "-"):
            sign = -1 if self.advance().kind == "-" else 1
        total = self.parse_term(allowed_symbols, allow_p0) * sign
        while self.peek().kind in ("+", "-"):
            sign = -1 if self.advance().kind == "-" else 1
            total = total + self.parse_term(allowed_symbols, allow_p0) * sign
        return total

    def parse_term(self, allowed_symbols: frozenset[str] | None,
                   allow_p0: bool) -> P0Poly:
        token = self.peek()
        if token.kind == "int":
            coeff = self.parse_rational()
            term = P0Poly.constant(coeff)
        elif token.kind == "ident":
            term = self.parse_factor(allowed_symbols, allow_p0)
        else:
            self.fail(token, f"unexpected {describe(token)}",
                      ("a rational", "'P0'", "a symbol name"))
        while self.peek().kind == "*":
            self.advance()
            term = term * self.parse_factor(allowed_symbols, allow_p0)
        return term

    def parse_factor(self, allowed_symbols: frozenset[str] | None,
                     allow_p0: bool) -> P0Poly:
        token = self.expect_ident("'P0' or a symbol name")
        if token.text == "P0":
            if not allow_p0:
                self.fail(token, "P0 cannot appear in a specialization value")
            power = 1
            if self.peek().kind == "^":
                self.advance()
                exponent = self.expect("int", "an integer")
                power = int(exponent.text)
            return P0Poly([0] * power + [1])
        if allowed_symbols is not None and token.text not in allowed_symbols:
            self.fail(token,
                      f"unknown symbol {token.text!r} (not a declared "
                      f"parameter of this algebra)")
        return P0Poly.constant(CoeffExpr.symbol(token.text))


def describe(token: Token) -> str:
    if token.kind == "eof":
        return "end of input"
    if token.kind == "ident":
        return f"identifier {token.text!r}"
    if token.kind == "int":
        return f"integer {token.text}"
    return f"token {token.text!r}"


def parse(source: str) -> DslProgram:
    """Parse a program, reporting the first error with line, column, and
    the expected-token set."""
    return _Parser(tokenize(source)).parse_program()


# -- pretty printer -----------------------------------------------------

def pretty(program: DslProgram) -> str:
    """Canonical source text; parse(pretty(parse(s))) == parse(s)."""
    return "\n".join(_pretty_statement(s) for s in program.statements) + "\n"


def _pretty_statement(statement: Statement) -> str:
    if isinstance(statement, AlgebraDef):
        params = f"({', '.join(statement.params)})" if statement.params else ""
        return (f"algebra {statement.name}{params} "
                f"{{ phi = {statement.phi}; }}")
    if isinstance(statement, LetFuse):
        return (f"let {statement.name} = fuse({statement.kind}, "
                f"{statement.left}, {statement.right});")
    if isinstance(statement, LetSpecialize):
        parts = [statement.source]
        parts += [f"{sym} = {value}" for sym, value in statement.assignments]
        return f"let {statement.name} = specialize({', '.join(parts)});"
    if isinstance(statement, Query):
        return f"{statement.what} {statement.target};"
    if isinstance(statement, Verify):
        if isinstance(statement.target, str):
            head = f"verify {statement.target}"
        else:
            kind, left, right = statement.target
            head = f"verify fuse({kind}, {left}, {right})"
        if statement.params:
            rendered = ", ".join(f"{k} = {v}" for k, v in statement.params)
            head += f" with ({rendered})"
        return head + ";"
    raise TypeError(f"not a statement: {statement!r}")


def roundtrip_stable(source: str) -> bool:
    """True iff pretty-printing is a parser fixed point for this source."""
    first = parse(source)
    printed = pretty(first)
    second = parse(printed)
    return first == second and pretty(second) == printed
