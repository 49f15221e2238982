"""Untyped lambda terms over interned variables.

Variables are interned once and compared by their interning index, which
also serves as the global order used whenever a "least" variable has to be
chosen.  Terms are immutable and compared syntactically, binder names
included.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterator, Union

__all__ = [
    "VarId",
    "Var",
    "App",
    "Abs",
    "Term",
    "Interner",
    "TermSyntaxError",
    "intern",
    "interner",
    "var",
    "lam",
    "app",
    "parse_term",
    "print_term",
    "term_eq",
    "term_size",
    "term_depth",
    "subterms",
    "variables",
]


@dataclass(frozen=True, slots=True, order=True)
class VarId:
    index: int
    name: str = field(compare=False)

    def __repr__(self) -> str:
        return self.name

    __str__ = __repr__


class Interner:
    """Thread-safe name pool.  Indices grow monotonically and never change."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._by_name: dict[str, VarId] = {}
        self._pool: list[VarId] = []
        self._fresh_counter = 0

    def intern(self, name: str) -> VarId:
        found = self._by_name.get(name)
        if found is not None:
            return found
        if not _is_identifier(name):
            raise ValueError(f"not a variable name: {name!r}")
        with self._lock:
            found = self._by_name.get(name)
            if found is None:
                found = VarId(len(self._pool), name)
                self._pool.append(found)
                self._by_name[name] = found
            return found

    def new_variable(self) -> VarId:
        """Intern a variable whose name was never seen before."""
        with self._lock:
            while True:
                name = f"v{self._fresh_counter}"
                self._fresh_counter += 1
                if name not in self._by_name:
                    found = VarId(len(self._pool), name)
                    self._pool.append(found)
                    self._by_name[name] = found
                    return found

    def lookup(self, name: str) -> VarId | None:
        return self._by_name.get(name)

    def __len__(self) -> int:
        return len(self._pool)

    def __getitem__(self, index: int) -> VarId:
        return self._pool[index]

    def __iter__(self) -> Iterator[VarId]:
        # the pool is append-only, so walking by index is safe under concurrent interning
        i = 0
        while i < len(self._pool):
            yield self._pool[i]
            i += 1


_INTERNER = Interner()


def interner() -> Interner:
    return _INTERNER


def intern(name: str) -> VarId:
    return _INTERNER.intern(name)


@dataclass(frozen=True, slots=True)
class Var:
    v: VarId

    def __repr__(self) -> str:
        return print_term(self)


@dataclass(frozen=True, slots=True)
class App:
    fun: Term
    arg: Term

    def __repr__(self) -> str:
        return print_term(self)


@dataclass(frozen=True, slots=True)
class Abs:
    binder: VarId
    body: Term

    def __repr__(self) -> str:
        return print_term(self)


Term = Union[Var, App, Abs]


def _as_var(x: VarId | str) -> VarId:
    return intern(x) if isinstance(x, str) else x


def _as_term(t: Term | VarId | str) -> Term:
    if isinstance(t, str):
        return Var(intern(t))
    if isinstance(t, VarId):
        return Var(t)
    return t


def var(name: VarId | str) -> Var:
    return Var(_as_var(name))


def lam(x: VarId | str, body: Term | VarId | str) -> Abs:
    return Abs(_as_var(x), _as_term(body))


def app(f: Term | VarId | str, *args: Term | VarId | str) -> Term:
    """Left-nested application ``f a1 a2 ...``."""
    out = _as_term(f)
    for a in args:
        out = App(out, _as_term(a))
    return out


def term_eq(a: Term, b: Term) -> bool:
    return a == b


def term_size(t: Term) -> int:
    size = 0
    stack = [t]
    while stack:
        node = stack.pop()
        size += 1
        if isinstance(node, App):
            stack.append(node.fun)
            stack.append(node.arg)
        elif isinstance(node, Abs):
            stack.append(node.body)
    return size


def term_depth(t: Term) -> int:
    """Length of the longest root-to-leaf path, counting nodes."""
    best = 0
    stack = [(t, 1)]
    while stack:
        node, d = stack.pop()
        if d > best:
            best = d
        if isinstance(node, App):
            stack.append((node.fun, d + 1))
            stack.append((node.arg, d + 1))
        elif isinstance(node, Abs):
            stack.append((node.body, d + 1))
    return best


def subterms(t: Term) -> Iterator[Term]:
    """Pre-order walk over every subterm, ``t`` included."""
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, App):
            stack.append(node.arg)
            stack.append(node.fun)
        elif isinstance(node, Abs):
            stack.append(node.body)


def variables(t: Term) -> set[VarId]:
    """Every variable occurring in ``t``, binders included."""
    out = set()
    for node in subterms(t):
        if isinstance(node, Var):
            out.add(node.v)
        elif isinstance(node, Abs):
            out.add(node.binder)
    return out


# --- printing ---------------------------------------------------------------


def print_term(t: Term, style: str = "minimal", lam: str = "\\") -> str:
    """Render ``t``.

    ``full`` gives the fully bracketed word form ``[A B]`` / ``[λx A]``.
    ``minimal`` uses ``\\x.body`` with the usual conventions: application is
    left associative and an abstraction body extends as far right as possible.
    """
    if style in ("full", "full-brackets"):
        return _print_full(t)
    if style == "minimal":
        return _print_minimal(t, lam)
    raise ValueError(f"unknown style {style!r}")


def _print_full(t: Term) -> str:
    match t:
        case Var(v):
            return v.name
        case App(f, a):
            return f"[{_print_full(f)} {_print_full(a)}]"
        case Abs(x, body):
            return f"[λ{x.name} {_print_full(body)}]"
    raise TypeError(t)


def _print_minimal(t: Term, lam: str) -> str:
    match t:
        case Var(v):
            return v.name
        case Abs(x, body):
            return f"{lam}{x.name}.{_print_minimal(body, lam)}"
        case App(f, a):
            left = _print_minimal(f, lam)
            if isinstance(f, Abs):
                left = f"({left})"
            right = _print_minimal(a, lam)
            if not isinstance(a, Var):
                right = f"({right})"
            return f"{left} {right}"
    raise TypeError(t)


# --- parsing ----------------------------------------------------------------


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position
        self.text = text

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.position}^"


def _is_identifier(name: str) -> bool:
    if not name or not _is_letter(name[0]):
        return False
    return all(_is_ident_char(c) for c in name[1:])


def _is_letter(c: str) -> bool:
    return c.isascii() and c.isalpha()


def _is_ident_char(c: str) -> bool:
    return (c.isascii() and c.isalnum()) or c in "_'"


_LAMBDAS = ("\\", "λ")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in _LAMBDAS:
            tokens.append(("lam", c, i))
            i += 1
        elif c in "()[].":
            tokens.append((c, c, i))
            i += 1
        elif _is_letter(c):
            j = i + 1
            while j < len(text) and _is_ident_char(text[j]):
                j += 1
            tokens.append(("var", text[i:j], i))
            i = j
        else:
            raise TermSyntaxError(f"unexpected character {c!r}", i, text)
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        if tok[0] != kind:
            self.fail(f"expected {_describe(kind)}, found {_describe(tok[0], tok[1])}", tok[2])
        self.pos += 1
        return tok

    def fail(self, message: str, position: int):
        raise TermSyntaxError(message, position, self.text)

    def sequence(self) -> Term:
        """Juxtaposition of atoms; a trailing abstraction swallows the rest."""
        items: list[Term] = []
        while True:
            kind = self.peek()[0]
            if kind == "lam":
                items.append(self.abstraction())
                break
            if kind in ("var", "(", "["):
                items.append(self.atom())
            else:
                break
        if not items:
            tok = self.peek()
            self.fail(f"expected a term, found {_describe(tok[0], tok[1])}", tok[2])
        out = items[0]
        for a in items[1:]:
            out = App(out, a)
        return out

    def abstraction(self) -> Term:
        self.take("lam")
        x = intern(self.take("var")[1])
        self.take(".")
        return Abs(x, self.sequence())

    def atom(self) -> Term:
        kind, value, at = self.peek()
        if kind == "var":
            self.pos += 1
            return Var(intern(value))
        if kind == "(":
            self.pos += 1
            t = self.sequence()
            self.take(")")
            return t
        if kind == "[":
            self.pos += 1
            if self.peek()[0] == "lam":
                self.pos += 1
                x = intern(self.take("var")[1])
                if self.peek()[0] == ".":
                    self.pos += 1
                body = self.sequence()
                self.take("]")
                return Abs(x, body)
            t = self.sequence()
            if not isinstance(t, App):
                self.fail("a bracketed application needs two terms", at)
            self.take("]")
            return t
        self.fail(f"expected a term, found {_describe(kind, value)}", at)


def _describe(kind: str, value: str = "") -> str:
    if kind == "eof":
        return "end of input"
    if kind == "var":
        return f"variable {value!r}" if value else "a variable"
    if kind == "lam":
        return "lambda"
    return repr(kind)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.sequence()
    tok = p.peek()
    if tok[0] != "eof":
        p.fail(f"unexpected {_describe(tok[0], tok[1])}", tok[2])
    return t
