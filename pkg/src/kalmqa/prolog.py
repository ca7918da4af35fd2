"""A small reader for the Prolog-style facts used in data files.

Only what the file formats need: atoms (quoted or bare), variables,
integers, lists, compound terms and the operators ``:-``, ``;``, ``,``,
``=`` and ``\\=``.
"""
import re
from dataclasses import dataclass

from .errors import PrologSyntaxError


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Compound:
    name: str
    args: tuple


@dataclass(frozen=True)
class PList:
    items: tuple


_OPS = {
    ":-": (1200, "xfx"),
    ";": (1100, "xfy"),
    ",": (1000, "xfy"),
    "=": (700, "xfx"),
    "\\=": (700, "xfx"),
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<quoted>'(?:[^'\\]|\\.|'')*')
  | (?P<num>-?\d+(?![\w]))
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<atom>[a-z][A-Za-z0-9_]*)
  | (?P<op>:-|\\=|[;,=])
  | (?P<end>\.(?=\s|$|%))
  | (?P<punct>[()\[\]|])
    """,
    re.VERBOSE,
)


def _unquote(text):
    body = text[1:-1]
    return re.sub(r"''|\\(.)", lambda m: "'" if m.group(0) == "''" else m.group(1), body)


def quote_atom(name):
    """Render an atom the way Prolog would print it with writeq."""
    if re.fullmatch(r"[a-z][A-Za-z0-9_]*", name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _tokenize(text):
    tokens = []
    pos = 0
    space_before = True
    line = 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise PrologSyntaxError(f"line {line}: unexpected character {text[pos]!r}")
        kind = m.lastgroup
        value = m.group(0)
        if kind == "ws":
            space_before = True
        else:
            tokens.append((kind, value, space_before, line))
            space_before = False
        line += value.count("\n")
        pos = m.end()
    return tokens


class _Reader:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise PrologSyntaxError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.next()
        if tok[1] != value:
            raise PrologSyntaxError(f"line {tok[3]}: expected {value!r}, got {tok[1]!r}")

    def term(self, max_prec=1200):
        left = self.primary()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in _OPS:
                return left
            prec, assoc = _OPS[tok[1]]
            if prec > max_prec:
                return left
            self.next()
            right = self.term(prec if assoc == "xfy" else prec - 1)
            left = Compound(tok[1], (left, right))

    def primary(self):
        kind, value, _, line = self.next()
        if kind == "num":
            return int(value)
        if kind == "var":
            return Var(value)
        if kind in ("atom", "quoted"):
            name = value if kind == "atom" else _unquote(value)
            nxt = self.peek()
            if nxt is not None and nxt[1] == "(" and not nxt[2]:
                self.next()
                args = [self.term(999)]
                while self.peek() is not None and self.peek()[1] == ",":
                    self.next()
                    args.append(self.term(999))
                self.expect(")")
                return Compound(name, tuple(args))
            return Atom(name)
        if value == "(":
            inner = self.term(1200)
            self.expect(")")
            return inner
        if value == "[":
            items = []
            if self.peek() is not None and self.peek()[1] == "]":
                self.next()
                return PList(())
            items.append(self.term(999))
            while self.peek() is not None and self.peek()[1] == ",":
                self.next()
                items.append(self.term(999))
            self.expect("]")
            return PList(tuple(items))
        raise PrologSyntaxError(f"line {line}: unexpected token {value!r}")


def read_clauses(text):
    """Yield ``(line_number, term)`` for every ``.``-terminated clause."""
    tokens = _tokenize(text)
    reader = _Reader(tokens)
    while reader.peek() is not None:
        line = reader.peek()[3]
        term = reader.term(1200)
        tok = reader.next()
        if tok[0] != "end":
            raise PrologSyntaxError(f"line {tok[3]}: expected '.', got {tok[1]!r}")
        yield line, term


def read_term(text):
    """Parse a single clause (the trailing period is optional)."""
    text = text.strip()
    if not text.endswith("."):
        text += "."
    clauses = list(read_clauses(text))
    if len(clauses) != 1:
        raise PrologSyntaxError(f"expected one clause, found {len(clauses)}")
    return clauses[0][1]


def flatten(term, op):
    """Flatten a right-nested chain of binary ``op`` compounds."""
    out = []
    while isinstance(term, Compound) and term.name == op and len(term.args) == 2:
        out.append(term.args[0])
        term = term.args[1]
    out.append(term)
    return out
