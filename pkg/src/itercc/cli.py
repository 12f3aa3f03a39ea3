"""Expression language and command-line driver.

A program is a sequence of line statements: a ring declaration, a variable
declaration, window directives, let-bindings, automorphism bindings and
commands.  Output is line-delimited JSON (or a pretty rendering), one object
per command, with exact rationals serialized as "p/q" strings.

    ring Q[e1^2]
    vars t1
    window 8
    let f = 1 + e1*t1^-1
    cc f t1
    res t1^-1

Oracle scripts used by extract-e / characterize are programs in the same
language that declare their own ring/vars/window and end with a single
`oracle <expr>` statement; the expression may refer to the slot parameters
f0, f1, ... and the builtins res, cc, tame, exp, log, inv, d, coeff, omega.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .analysis import (characterize_symbol, extract_residue_constant,
                       omega_invariance_check, reciprocity_check)
from .autos import Endomorphism
from .coeffring import Ring, RingElement
from .errors import ItersError, ProgramError
from .ratfun import Point, Poly, RationalFunction
from .residue import res_form, residue
from .series import INF, Series, lex_key
from .symbol import cc, sgn, tame_symbol

SIMPLE_COMMANDS = ("res", "cc", "sgn", "tame", "decompose", "classify",
                   "invert", "exp", "log", "apply", "check-aut", "matrix")
BUILTINS = ("res", "cc", "tame", "exp", "log", "inv", "d", "coeff", "omega")


# --- tokens -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<string>"[^"\n]*")
  | (?P<hyphenword>(?:check-aut|extract-e|omega-check)\b)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow>->)
  | (?P<op>[\^*/+\-=:,()\[\]])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int

    @property
    def end(self) -> int:
        return self.col + len(self.text)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ProgramError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "newline":
            tokens.append(Token("newline", "\n", line, col))
            line += 1
            col = 1
        else:
            if kind not in ("ws", "comment"):
                tokens.append(Token(kind, tok, line, col))
            col += len(tok)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# --- syntax tree ---------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class PowOp:
    base: object
    exponent: int


@dataclass(frozen=True)
class TupleLit:
    items: tuple


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple  # expressions and/or Str nodes


@dataclass(frozen=True)
class Str:
    value: str


@dataclass(frozen=True)
class RingDecl:
    gens: tuple  # of (name, bound)


@dataclass(frozen=True)
class VarsDecl:
    names: tuple


@dataclass(frozen=True)
class WindowDecl:
    bounds: tuple  # ints and/or "inf"


@dataclass(frozen=True)
class LetStmt:
    name: str
    expr: object


@dataclass(frozen=True)
class AutDecl:
    name: str
    images: tuple  # of (varname, expr)


@dataclass(frozen=True)
class OracleDecl:
    expr: object


@dataclass(frozen=True)
class Command:
    name: str
    args: tuple


@dataclass(frozen=True)
class ReciprocityCmd:
    f: object
    g: object
    points: tuple  # Fractions and/or "inf"


@dataclass(frozen=True)
class ScriptCmd:
    name: str  # extract-e | characterize
    path: str
    box: Optional[tuple]
    trials: Optional[int]


@dataclass(frozen=True)
class OmegaCheckCmd:
    path: str


@dataclass(frozen=True)
class Program:
    statements: tuple


# --- parser ---------------------------------------------------------------------

class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str):
        tok = self.peek()
        raise ProgramError(message + f", got {tok.text!r}" if tok.text else message,
                           tok.line, tok.col)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            self.fail(f"expected {text or kind}")
        return self.advance()

    def at_line_end(self) -> bool:
        return self.peek().kind in ("newline", "eof")

    def skip_newlines(self):
        while self.peek().kind == "newline":
            self.advance()

    def parse_program(self) -> Program:
        statements = []
        self.skip_newlines()
        while self.peek().kind != "eof":
            statements.append(self.parse_statement())
            if self.peek().kind == "newline":
                self.advance()
            elif self.peek().kind != "eof":
                self.fail("expected end of line")
            self.skip_newlines()
        return Program(tuple(statements))

    def parse_statement(self):
        tok = self.peek()
        if tok.kind == "hyphenword":
            word = tok.text
        elif tok.kind == "ident":
            word = tok.text
        else:
            self.fail("expected a statement")
        if word == "ring":
            return self.parse_ring()
        if word == "vars":
            return self.parse_vars()
        if word == "window":
            return self.parse_window()
        if word == "let":
            return self.parse_let()
        if word == "aut":
            return self.parse_aut()
        if word == "oracle":
            self.advance()
            return OracleDecl(self.parse_expr())
        if word == "reciprocity":
            return self.parse_reciprocity()
        if word in ("extract-e", "characterize"):
            return self.parse_script_cmd()
        if word == "omega-check":
            self.advance()
            return OmegaCheckCmd(self.parse_string())
        if word in SIMPLE_COMMANDS:
            return self.parse_simple_command()
        self.fail(f"unknown statement {word!r}")

    def parse_ring(self) -> RingDecl:
        self.advance()
        self.expect("ident", "Q")
        self.expect("op", "[")
        gens = []
        if not (self.peek().kind == "op" and self.peek().text == "]"):
            while True:
                name = self.expect("ident").text
                self.expect("op", "^")
                bound = int(self.expect("int").text)
                gens.append((name, bound))
                if self.peek().kind == "op" and self.peek().text == ",":
                    self.advance()
                    continue
                break
        self.expect("op", "]")
        return RingDecl(tuple(gens))

    def parse_vars(self) -> VarsDecl:
        self.advance()
        names = []
        while self.peek().kind == "ident":
            names.append(self.advance().text)
        if not names:
            self.fail("vars needs at least one name")
        return VarsDecl(tuple(names))

    def parse_window(self) -> WindowDecl:
        self.advance()
        bounds = []
        while not self.at_line_end():
            tok = self.peek()
            if tok.kind == "ident" and tok.text == "inf":
                self.advance()
                bounds.append("inf")
            else:
                bounds.append(self.parse_signed_int())
        if not bounds:
            self.fail("window needs at least one bound")
        return WindowDecl(tuple(bounds))

    def parse_let(self) -> LetStmt:
        self.advance()
        name = self.expect("ident").text
        self.expect("op", "=")
        return LetStmt(name, self.parse_expr())

    def parse_aut(self) -> AutDecl:
        self.advance()
        name = self.expect("ident").text
        self.expect("op", ":")
        images = []
        while True:
            var = self.expect("ident").text
            self.expect("arrow")
            images.append((var, self.parse_expr()))
            if self.peek().kind == "op" and self.peek().text == ",":
                self.advance()
                continue
            break
        return AutDecl(name, tuple(images))

    def parse_reciprocity(self) -> ReciprocityCmd:
        self.advance()
        f = self.parse_command_arg()
        g = self.parse_command_arg()
        tok = self.peek()
        if not (tok.kind == "ident" and tok.text == "points"):
            self.fail("expected 'points'")
        self.advance()
        points = []
        while not self.at_line_end():
            tok = self.peek()
            if tok.kind == "ident" and tok.text == "inf":
                self.advance()
                points.append("inf")
            else:
                points.append(self.parse_rational())
        if not points:
            self.fail("reciprocity needs at least one point")
        return ReciprocityCmd(f, g, tuple(points))

    def parse_script_cmd(self) -> ScriptCmd:
        name = self.advance().text
        path = self.parse_string()
        box = None
        trials = None
        while not self.at_line_end():
            tok = self.peek()
            if tok.kind == "ident" and tok.text == "box":
                self.advance()
                box = (self.parse_signed_int(), self.parse_signed_int())
            elif tok.kind == "ident" and tok.text == "trials":
                self.advance()
                trials = int(self.expect("int").text)
            else:
                self.fail("expected 'box' or 'trials'")
        return ScriptCmd(name, path, box, trials)

    def parse_simple_command(self) -> Command:
        name = self.advance().text
        args = []
        while not self.at_line_end():
            args.append(self.parse_command_arg())
        return Command(name, tuple(args))

    def parse_string(self) -> str:
        return self.expect("string").text[1:-1]

    def parse_signed_int(self) -> int:
        sign = 1
        if self.peek().kind == "op" and self.peek().text == "-":
            self.advance()
            sign = -1
        return sign * int(self.expect("int").text)

    def parse_rational(self) -> Fraction:
        num = self.parse_signed_int()
        if self.peek().kind == "op" and self.peek().text == "/":
            self.advance()
            return Fraction(num, int(self.expect("int").text))
        return Fraction(num)

    # command arguments are "tight" expressions: an atom with optional sign
    # and powers; anything larger must be parenthesized or let-bound
    def parse_command_arg(self):
        node = None
        if self.peek().kind == "op" and self.peek().text == "-":
            self.advance()
            node = Neg(self.parse_power_chain())
        else:
            node = self.parse_power_chain()
        return node

    def parse_power_chain(self):
        node = self.parse_atom()
        while self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            node = PowOp(node, self.parse_signed_int())
        return node

    # full expression grammar
    def parse_expr(self):
        node = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.parse_unary())
        return node

    def parse_unary(self):
        if self.peek().kind == "op" and self.peek().text == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        node = self.parse_atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            node = PowOp(node, self.parse_signed_int())
        return node

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return Num(int(tok.text))
        if tok.kind == "string":
            self.advance()
            return Str(tok.text[1:-1])
        if tok.kind == "ident":
            self.advance()
            nxt = self.peek()
            if (nxt.kind == "op" and nxt.text == "("
                    and nxt.line == tok.line and nxt.col == tok.end):
                self.advance()
                args = []
                if not (self.peek().kind == "op" and self.peek().text == ")"):
                    while True:
                        args.append(self.parse_expr() if self.peek().kind != "string"
                                    else self.parse_atom())
                        if self.peek().kind == "op" and self.peek().text == ",":
                            self.advance()
                            continue
                        break
                self.expect("op", ")")
                return Call(tok.text, tuple(args))
            return Name(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            items = [self.parse_expr()]
            while self.peek().kind == "op" and self.peek().text == ",":
                self.advance()
                items.append(self.parse_expr())
            self.expect("op", ")")
            if len(items) == 1:
                return items[0]
            return TupleLit(tuple(items))
        self.fail("expected an expression")


def parse_program(text: str) -> Program:
    return Parser(tokenize(text)).parse_program()


# --- printer ----------------------------------------------------------------------

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_UNARY, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _expr_level(node) -> int:
    if isinstance(node, BinOp):
        return _LEVEL_ADD if node.op in "+-" else _LEVEL_MUL
    if isinstance(node, Neg):
        return _LEVEL_UNARY
    if isinstance(node, PowOp):
        return _LEVEL_POW
    return _LEVEL_ATOM


def print_expr(node) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Name):
        return node.ident
    if isinstance(node, Str):
        return f'"{node.value}"'
    if isinstance(node, Neg):
        inner = print_expr(node.operand)
        if _expr_level(node.operand) < _LEVEL_UNARY:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, PowOp):
        base = print_expr(node.base)
        if _expr_level(node.base) < _LEVEL_ATOM:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, BinOp):
        level = _expr_level(node)
        left = print_expr(node.left)
        if _expr_level(node.left) < level:
            left = f"({left})"
        right = print_expr(node.right)
        if _expr_level(node.right) <= level:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    if isinstance(node, TupleLit):
        return "(" + ", ".join(print_expr(x) for x in node.items) + ")"
    if isinstance(node, Call):
        return node.func + "(" + ", ".join(print_expr(a) for a in node.args) + ")"
    raise ProgramError(f"cannot print {node!r}")


def _print_command_arg(node) -> str:
    # command arguments allow only sign/power chains over atoms
    if isinstance(node, Neg):
        return "-" + _print_command_arg(node.operand)
    if isinstance(node, PowOp):
        return _print_command_arg(node.base) + f"^{node.exponent}"
    if isinstance(node, (Num, Name, Str, TupleLit, Call)):
        return print_expr(node)
    return f"({print_expr(node)})"


def print_statement(stmt) -> str:
    if isinstance(stmt, RingDecl):
        inner = ", ".join(f"{n}^{b}" for n, b in stmt.gens)
        return f"ring Q[{inner}]"
    if isinstance(stmt, VarsDecl):
        return "vars " + " ".join(stmt.names)
    if isinstance(stmt, WindowDecl):
        return "window " + " ".join(str(b) for b in stmt.bounds)
    if isinstance(stmt, LetStmt):
        return f"let {stmt.name} = {print_expr(stmt.expr)}"
    if isinstance(stmt, AutDecl):
        inner = ", ".join(f"{v} -> {print_expr(e)}" for v, e in stmt.images)
        return f"aut {stmt.name}: {inner}"
    if isinstance(stmt, OracleDecl):
        return f"oracle {print_expr(stmt.expr)}"
    if isinstance(stmt, ReciprocityCmd):
        pts = " ".join(str(p) for p in stmt.points)
        return (f"reciprocity {_print_command_arg(stmt.f)} "
                f"{_print_command_arg(stmt.g)} points {pts}")
    if isinstance(stmt, ScriptCmd):
        out = f'{stmt.name} "{stmt.path}"'
        if stmt.box is not None:
            out += f" box {stmt.box[0]} {stmt.box[1]}"
        if stmt.trials is not None:
            out += f" trials {stmt.trials}"
        return out
    if isinstance(stmt, OmegaCheckCmd):
        return f'omega-check "{stmt.path}"'
    if isinstance(stmt, Command):
        return " ".join([stmt.name] + [_print_command_arg(a) for a in stmt.args])
    raise ProgramError(f"cannot print statement {stmt!r}")


def print_program(prog: Program) -> str:
    return "\n".join(print_statement(s) for s in prog.statements) + "\n"


# --- serialization ------------------------------------------------------------------

def _ser_fraction(q: Fraction) -> str:
    return str(q)


def _monomial_key(exp: tuple[int, ...]) -> str:
    if not any(exp):
        return "1"
    return "*".join(f"e{i+1}" + (f"^{e}" if e > 1 else "")
                    for i, e in enumerate(exp) if e > 0)


def ser_element(x: RingElement) -> dict:
    return {_monomial_key(e): _ser_fraction(c)
            for e, c in sorted(x.terms.items())}


def ser_value_auto(x: RingElement):
    """Rational constants as "p/q"; anything else as a monomial map."""
    if not x.terms:
        return "0"
    if set(x.terms) == {(0,) * x.ring.ngens}:
        return _ser_fraction(x.constant_term)
    return ser_element(x)


def ser_window(window) -> list:
    return ["inf" if p == INF else int(p) for p in window]


def _exp_key(l: tuple[int, ...]) -> str:
    return ",".join(str(x) for x in l)


def ser_series(s: Series) -> dict:
    return {
        "terms": {_exp_key(l): ser_element(s.terms[l])
                  for l in sorted(s.terms, key=lex_key)},
        "window": ser_window(s.window),
    }


def pretty_value(value) -> str:
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {pretty_value(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(pretty_value(v) for v in value) + "]"
    return str(value)


# --- interpreter ---------------------------------------------------------------------

class Interpreter:
    def __init__(self, seed: int = 0, window_override=None, base_dir: str = ".",
                 format: str = "json"):
        self.seed = seed
        self.window_override = window_override
        self.base_dir = Path(base_dir)
        self.format = format
        self.ring: Optional[Ring] = None
        self.gen_names: list[str] = []
        self.var_names: list[str] = []
        self.ambient: Optional[tuple] = None
        self.env: dict[str, object] = {}
        self._table_cache: dict[str, dict] = {}

    # -- state helpers

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    def _need_context(self):
        if self.ring is None or not self.var_names:
            raise ProgramError("ring and vars must be declared before series expressions")

    def _window(self) -> tuple:
        if self.ambient is not None:
            return self.ambient
        return (INF,) * self.nvars

    def _set_window(self, bounds):
        if self.window_override is not None:
            bounds = self.window_override
        if len(bounds) != self.nvars:
            raise ProgramError(
                f"window has {len(bounds)} bounds for {self.nvars} variables")
        self.ambient = tuple(INF if b == "inf" else int(b) for b in bounds)

    # -- expression evaluation (series semantics)

    def eval_expr(self, node) -> Series:
        self._need_context()
        return self._eval(node)

    def _eval(self, node) -> Series:
        if isinstance(node, Num):
            return Series.constant(self.ring, self.nvars, node.value, self._window())
        if isinstance(node, Name):
            ident = node.ident
            if ident in self.var_names:
                return Series.variable(self.ring, self.nvars,
                                       self.var_names.index(ident), self._window())
            if ident in self.gen_names:
                return Series.constant(self.ring, self.nvars,
                                       self.ring.gen(self.gen_names.index(ident)),
                                       self._window())
            if ident in self.env:
                value = self.env[ident]
                if not isinstance(value, Series):
                    raise ProgramError(f"{ident} is not a series")
                return value
            raise ProgramError(f"undefined name {ident!r}")
        if isinstance(node, Neg):
            return -self._eval(node.operand)
        if isinstance(node, BinOp):
            left = self._eval(node.left)
            right = self._eval(node.right)
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            if node.op == "*":
                return left * right
            if node.op == "/":
                return left * right.invert()
            raise ProgramError(f"unknown operator {node.op}")
        if isinstance(node, PowOp):
            return self._eval(node.base) ** node.exponent
        if isinstance(node, Call):
            return self._eval_call(node)
        if isinstance(node, TupleLit):
            raise ProgramError("tuple literal used outside sgn/coeff")
        if isinstance(node, Str):
            raise ProgramError("string literal used outside a script command")
        raise ProgramError(f"cannot evaluate {node!r}")

    def _as_constant(self, value: Series) -> RingElement:
        extra = [l for l in value.terms if any(l)]
        if extra:
            raise ProgramError(f"expected a constant value, got terms at {extra}")
        return value.terms.get((0,) * self.nvars, self.ring.zero)

    def _eval_call(self, node: Call) -> Series:
        fn = node.func
        if fn not in BUILTINS:
            raise ProgramError(f"unknown function {fn!r}")
        if fn == "omega":
            if not node.args or not isinstance(node.args[0], Str):
                raise ProgramError('omega needs a table path: omega("t.json", f0, ...)')
            table = self._load_table(node.args[0].value)
            args = [self._eval(a) for a in node.args[1:]]
            vs = [a.classify(require_valuation=True).v for a in args]
            from .analysis import omega_eval
            value = omega_eval(table, vs)
            return Series.constant(self.ring, self.nvars, value)
        if fn == "coeff":
            if len(node.args) != 2:
                raise ProgramError("coeff(f, (l1, ..., ln)) takes two arguments")
            f = self._eval(node.args[0])
            vec = self._as_vector(node.args[1])
            return Series.constant(self.ring, self.nvars, f.coeff(vec))
        if fn == "d":
            if len(node.args) != 2:
                raise ProgramError("d(f, i) takes a series and a variable index")
            f = self._eval(node.args[0])
            i = self._as_int(node.args[1])
            return f.derivative(i - 1)
        args = [self._eval(a) for a in node.args]
        if fn == "res":
            return Series.constant(self.ring, self.nvars, res_form(*args))
        if fn == "cc":
            return Series.constant(self.ring, self.nvars, cc(*args))
        if fn == "tame":
            return Series.constant(self.ring, self.nvars, tame_symbol(*args))
        if fn == "exp":
            return args[0].exp()
        if fn == "log":
            return args[0].log()
        if fn == "inv":
            return args[0].invert()
        raise ProgramError(f"unknown function {fn!r}")

    def _as_int(self, node) -> int:
        if isinstance(node, Num):
            return node.value
        if isinstance(node, Neg):
            return -self._as_int(node.operand)
        raise ProgramError(f"expected an integer literal, got {print_expr(node)}")

    def _as_vector(self, node) -> tuple[int, ...]:
        if isinstance(node, TupleLit):
            return tuple(self._as_int(x) for x in node.items)
        return (self._as_int(node),)

    def _load_table(self, relpath: str) -> dict:
        key = str(relpath)
        if key not in self._table_cache:
            path = self.base_dir / relpath
            raw = json.loads(path.read_text())
            table = {}
            for k, v in raw.items():
                idx = tuple(int(x) for x in k.split(","))
                table[idx] = Fraction(v)
            self._table_cache[key] = table
        return self._table_cache[key]

    # -- statements

    def run_program(self, prog: Program) -> list[dict]:
        results = []
        for stmt in prog.statements:
            if isinstance(stmt, (RingDecl, VarsDecl, WindowDecl, LetStmt,
                                 AutDecl, OracleDecl)):
                self.run_declaration(stmt)
            else:
                results.append(self.run_command(stmt))
        return results

    def run_declaration(self, stmt):
        if isinstance(stmt, RingDecl):
            if self.ring is not None:
                raise ProgramError("ring declared twice")
            self.ring = Ring([b for _, b in stmt.gens])
            self.gen_names = [n for n, _ in stmt.gens]
        elif isinstance(stmt, VarsDecl):
            if self.var_names:
                raise ProgramError("vars declared twice")
            if self.ring is None:
                raise ProgramError("declare the ring before the variables")
            self.var_names = list(stmt.names)
        elif isinstance(stmt, WindowDecl):
            self._need_context()
            self._set_window(stmt.bounds)
        elif isinstance(stmt, LetStmt):
            self.env[stmt.name] = self.eval_expr(stmt.expr)
        elif isinstance(stmt, AutDecl):
            self._need_context()
            given = [v for v, _ in stmt.images]
            if given != self.var_names:
                raise ProgramError(
                    f"automorphism must map every variable once, in order: {self.var_names}")
            images = [self.eval_expr(e) for _, e in stmt.images]
            self.env[stmt.name] = Endomorphism(images)
        elif isinstance(stmt, OracleDecl):
            raise ProgramError("oracle declarations belong in oracle script files")

    def run_command(self, stmt) -> dict:
        echo = print_statement(stmt)
        try:
            value, diagnostics = self.eval_command(stmt)
        except (ItersError, OSError, json.JSONDecodeError) as exc:
            err = {"type": type(exc).__name__, "message": str(exc)}
            if hasattr(exc, "automorphism") and exc.automorphism is not None:
                err["witness_automorphism"] = [
                    ser_series(im) for im in exc.automorphism.images]
            if hasattr(exc, "arguments") and exc.arguments is not None:
                try:
                    err["witness_arguments"] = [ser_series(a) for a in exc.arguments]
                except Exception:  # noqa: BLE001 - witnesses are best effort
                    pass
            return {"command": echo, "error": err}
        out = {"command": echo, "value": value}
        if diagnostics:
            out["diagnostics"] = diagnostics
        return out

    def _get_endo(self, node) -> Endomorphism:
        if not isinstance(node, Name) or node.ident not in self.env:
            raise ProgramError("expected the name of a bound automorphism")
        value = self.env[node.ident]
        if not isinstance(value, Endomorphism):
            raise ProgramError(f"{node.ident} is not an automorphism")
        return value

    def eval_command(self, stmt):
        if isinstance(stmt, ReciprocityCmd):
            return self._cmd_reciprocity(stmt)
        if isinstance(stmt, ScriptCmd):
            return self._cmd_script(stmt)
        if isinstance(stmt, OmegaCheckCmd):
            table = self._load_table(stmt.path)
            nv = max(i for idx in table for i in idx)
            res = omega_invariance_check(table, nv)
            return ({"pass": res.ok,
                     "violations": [{"triple": list(v[0]),
                                     "got": _ser_fraction(v[1]) if isinstance(v[1], Fraction) else str(v[1]),
                                     "expected": _ser_fraction(v[2]) if isinstance(v[2], Fraction) else str(v[2])}
                                    for v in res.violations]}, [])
        name, args = stmt.name, stmt.args
        if name == "sgn":
            vectors = [self._as_vector(a) for a in args]
            return (sgn(*vectors), [])
        if name in ("apply",):
            phi = self._get_endo(args[0])
            f = self.eval_expr(args[1])
            return (ser_series(phi.apply(f)), [])
        if name == "check-aut":
            phi = self._get_endo(args[0])
            return ({"is_automorphism": phi.is_automorphism,
                     "matrix": [list(r) for r in phi.matrix]}, [])
        if name == "matrix":
            phi = self._get_endo(args[0])
            return ([list(r) for r in phi.matrix], [])
        series = [self.eval_expr(a) for a in args]
        if name == "res":
            # one argument: residue of the top form f dt1 ^ ... ^ dtn;
            # n+1 arguments: the residue form Res(f0 df1 ^ ... ^ dfn)
            if len(series) == 1:
                return (ser_value_auto(residue(series[0])), [])
            return (ser_value_auto(res_form(*series)), [])
        if name == "cc":
            return (ser_value_auto(cc(*series)), [])
        if name == "tame":
            return (ser_value_auto(tame_symbol(*series)), [])
        if name == "decompose":
            dec = series[0].decompose()
            return ({"a": ser_element(dec.a), "fplus": ser_series(dec.fplus),
                     "fminus": ser_series(dec.fminus), "v": list(dec.v)}, [])
        if name == "classify":
            cls = series[0].classify()
            return ({"is_unit": cls.is_unit,
                     "is_top_nilpotent": cls.is_top_nilpotent,
                     "v": list(cls.v) if cls.v is not None else None,
                     "leading": ser_element(cls.leading) if cls.leading is not None else None},
                    [])
        if name == "invert":
            return (ser_series(series[0].invert()), [])
        if name == "exp":
            return (ser_series(series[0].exp()), [])
        if name == "log":
            return (ser_series(series[0].log()), [])
        raise ProgramError(f"unknown command {name!r}")

    # -- rational-function commands

    def _eval_ratfun(self, node) -> RationalFunction:
        self._need_context()
        if self.nvars != 1:
            raise ProgramError("reciprocity works over one variable")
        one = Poly(self.ring, {0: 1})
        if isinstance(node, Num):
            return RationalFunction(Poly(self.ring, {0: node.value}), one)
        if isinstance(node, Name):
            if node.ident == self.var_names[0]:
                return RationalFunction(Poly(self.ring, {1: 1}), one)
            if node.ident in self.gen_names:
                g = self.ring.gen(self.gen_names.index(node.ident))
                return RationalFunction(Poly(self.ring, {0: g}), one)
            raise ProgramError(f"unknown name {node.ident!r} in a rational function")
        if isinstance(node, Neg):
            return -self._eval_ratfun(node.operand)
        if isinstance(node, BinOp):
            left = self._eval_ratfun(node.left)
            right = self._eval_ratfun(node.right)
            return {"+": left.__add__, "-": left.__sub__,
                    "*": left.__mul__, "/": left.__truediv__}[node.op](right)
        if isinstance(node, PowOp):
            base = self._eval_ratfun(node.base)
            k = node.exponent
            if k >= 0:
                return RationalFunction(base.num ** k, base.den ** k)
            return RationalFunction(base.den ** (-k), base.num ** (-k))
        raise ProgramError(f"cannot use {print_expr(node)} in a rational function")

    def _cmd_reciprocity(self, stmt: ReciprocityCmd):
        f = self._eval_ratfun(stmt.f)
        g = self._eval_ratfun(stmt.g)
        points = [Point.infinity() if p == "inf" else Point.finite(p)
                  for p in stmt.points]
        window = 10
        if self.ambient is not None and self.ambient[0] != INF:
            window = max(4, int(self.ambient[0]))
        result = reciprocity_check(f, g, points, window)
        return ({"per_point": [ser_value_auto(v) for v in result.per_point],
                 "product": ser_value_auto(result.product)},
                [f"holds: {result.holds}"])

    # -- oracle scripts

    def _load_oracle(self, relpath: str):
        path = self.base_dir / relpath
        prog = parse_program(path.read_text())
        sub = Interpreter(seed=self.seed, window_override=self.window_override,
                          base_dir=str(path.parent))
        oracle_expr = None
        for s in prog.statements:
            if isinstance(s, OracleDecl):
                if oracle_expr is not None:
                    raise ProgramError("oracle script declares two oracles")
                oracle_expr = s.expr
            elif isinstance(s, (RingDecl, VarsDecl, WindowDecl, LetStmt, AutDecl)):
                sub.run_declaration(s)
            else:
                raise ProgramError("oracle scripts may not run commands")
        if oracle_expr is None:
            raise ProgramError(f"{relpath} does not contain an oracle statement")
        sub._need_context()

        def oracle(*series):
            saved = dict(sub.env)
            try:
                for i, f in enumerate(series):
                    sub.env[f"f{i}"] = f
                return sub._as_constant(sub._eval(oracle_expr))
            finally:
                sub.env = saved

        return sub, oracle

    def _cmd_script(self, stmt: ScriptCmd):
        sub, oracle = self._load_oracle(stmt.path)
        box = stmt.box or (-2, 2)
        trials = stmt.trials or 10
        if stmt.name == "extract-e":
            e = extract_residue_constant(sub.ring, sub.nvars, oracle, box=box,
                                         trials=trials, seed=self.seed)
            return ({"e": ser_value_auto(e)}, [])
        result = characterize_symbol(sub.ring, sub.nvars, oracle, box=box,
                                     trials=trials, seed=self.seed)
        omega = {",".join(str(i) for i in idx): ser_value_auto(val)
                 for idx, val in sorted(result.omega.items())}
        report = [{"name": r.name, "passed": r.passed, "detail": r.detail}
                  for r in result.report]
        return ({"m": result.m, "omega": omega, "report": report}, [])


# --- entry point -------------------------------------------------------------------

def run_text(text: str, seed: int = 0, window_override=None, base_dir: str = ".",
             format: str = "pretty") -> tuple[list[dict], int]:
    prog = parse_program(text)
    interp = Interpreter(seed=seed, window_override=window_override,
                         base_dir=base_dir, format=format)
    results = []
    errored = False
    for stmt in prog.statements:
        if isinstance(stmt, (RingDecl, VarsDecl, WindowDecl, LetStmt, AutDecl,
                             OracleDecl)):
            try:
                interp.run_declaration(stmt)
            except (ItersError, OSError) as exc:
                results.append({"command": print_statement(stmt),
                                "error": {"type": type(exc).__name__,
                                          "message": str(exc)}})
                errored = True
                break
        else:
            out = interp.run_command(stmt)
            if "error" in out:
                errored = True
            results.append(out)
    return results, (1 if errored else 0)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="itercc",
        description="exact iterated-Laurent-series calculator: residues, "
                    "Contou-Carrere symbols, reciprocity, characterization")
    ap.add_argument("input", help="program file, or - for stdin")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for all sampled verification (default 0)")
    ap.add_argument("--window", nargs="+", default=None, metavar="P",
                    help="override every window directive (ints or 'inf')")
    ap.add_argument("--format", choices=("json", "pretty"), default="json")
    args = ap.parse_args(argv)

    if args.input == "-":
        text = sys.stdin.read()
        base_dir = "."
    else:
        path = Path(args.input)
        text = path.read_text()
        base_dir = str(path.parent)

    override = None
    if args.window is not None:
        override = tuple("inf" if w == "inf" else int(w) for w in args.window)

    try:
        results, code = run_text(text, seed=args.seed, window_override=override,
                                 base_dir=base_dir, format=args.format)
    except ProgramError as exc:
        print(json.dumps({"error": {"type": "ProgramError", "message": str(exc)}},
                         sort_keys=True))
        return 1

    for r in results:
        if args.format == "json":
            print(json.dumps(r, sort_keys=True))
        else:
            if "error" in r:
                print(f"{r['command']}\n  !! {r['error']['type']}: {r['error']['message']}")
            else:
                print(f"{r['command']}\n  = {pretty_value(r['value'])}")
    return code


if __name__ == "__main__":
    sys.exit(main())
