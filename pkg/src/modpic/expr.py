"""Tiny expression language for the ``modpic class`` command.

Examples::

    bn(3)
    fprime*(w(5))
    gprime*(pi1*(bn(5))) - 2*w2
    bubble1_2*(omega(4,3,1)) + 1/2*delta(4,2,0,{1,2})

Constructors: ``bn(g)``, ``w(g)``, ``w2`` (lambda-free W on M_{2,1}),
``theta(g,n,i,{S})``, ``epsilon(m,i)``, ``lambda(g,n)``, ``delta0(g,n)``,
``omega(g,n,i)``, ``psi(g,n,i)``, ``delta(g,n,i,{S})``.
Pullbacks: ``pi*`` (forget a new last mark), ``pi<j>*``, ``fprime*``,
``gprime*``, ``bubble<i>_<j>*``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any

from . import basis as B
from .classes import bn_class, epsilon_class, theta_class, weierstrass_class
from .errors import ModpicError, ParseError
from .maps import (
    apply, bubble_pullback, elliptic_tails_pullback, forgetful_pullback,
    genus2_tail_pullback, w2,
)
from .theta import ThetaClass

_TOKEN = re.compile(r"""
    \s*(?:
      (?P<pull>pi\d*\*|fprime\*|gprime\*|bubble\d+_\d+\*)
    | (?P<num>\d+)
    | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<op>[-+*/(),{}])
    )""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


def _is_class(v: Any) -> bool:
    return isinstance(v, (B.DivisorClass, ThetaClass))


class _Parser:
    def __init__(self, text: str, sign: int):
        self.toks = _tokenize(text)
        self.i = 0
        self.sign = sign

    def peek(self) -> tuple[str, str] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, value: str | None = None) -> tuple[str, str]:
        tok = self.peek()
        if tok is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'}, got {tok[1] if tok else 'end of input'}")
        self.i += 1
        return tok

    def parse(self) -> Any:
        v = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input at {self.peek()[1]!r}")
        return v

    def expr(self) -> Any:
        if self.peek() and self.peek()[1] == "-":
            self.take()
            v = _scale(self.term(), -1)
        else:
            v = self.term()
        while self.peek() and self.peek()[1] in "+-":
            op = self.take()[1]
            v = _add(v, self.term(), 1 if op == "+" else -1)
        return v

    def term(self) -> Any:
        v = self.factor()
        while self.peek() and self.peek()[1] in "*/":
            op = self.take()[1]
            w = self.factor()
            if op == "/":
                if _is_class(w):
                    raise ParseError("cannot divide by a class")
                v = _scale(v, 1 / Fraction(w))
            elif _is_class(v) and _is_class(w):
                raise ParseError("products of classes are not supported")
            else:
                v = _scale(w, v) if _is_class(w) else _scale(v, w)
        return v

    def factor(self) -> Any:
        kind, val = self.take()
        if kind == "num":
            return Fraction(int(val))
        if val == "(":
            v = self.expr()
            self.take(")")
            return v
        if kind == "pull":
            self.take("(")
            arg = self.expr()
            self.take(")")
            return self.pullback(val[:-1], arg)
        if kind == "name":
            if val == "w2":
                return w2()
            self.take("(")
            args = self.args()
            return self.construct(val, args)
        raise ParseError(f"unexpected {val!r}")

    def args(self) -> list[Any]:
        out: list[Any] = []
        if self.peek() and self.peek()[1] == ")":
            self.take()
            return out
        while True:
            if self.peek() and self.peek()[1] == "{":
                self.take()
                marks = []
                while self.peek() and self.peek()[1] != "}":
                    marks.append(int(self.take()[1]))
                    if self.peek() and self.peek()[1] == ",":
                        self.take()
                self.take("}")
                out.append(frozenset(marks))
            else:
                out.append(int(self.take()[1]))
            if self.take()[1] == ")":
                return out

    def construct(self, name: str, args: list[Any]) -> Any:
        table = {
            "bn": lambda g: bn_class(g),
            "w": lambda g: weierstrass_class(g),
            "theta": lambda g, n, i, S: theta_class(g, n, i, S),
            "epsilon": lambda m, i: epsilon_class(m, i),
            "lambda": lambda g, n: B.DivisorClass.of((g, n), B.LAMBDA),
            "delta0": lambda g, n: B.DivisorClass.of((g, n), B.DELTA_IRR),
            "omega": lambda g, n, i: B.DivisorClass.of((g, n), B.omega(i)),
            "psi": lambda g, n, i: B.DivisorClass((g, n), {B.psi(i): 1}),
            "delta": lambda g, n, i, S: B.DivisorClass.of((g, n), B.delta((g, n), i, S)),
        }
        if name not in table:
            raise ParseError(f"unknown constructor {name!r}")
        try:
            return table[name](*args)
        except TypeError as exc:
            raise ParseError(f"bad arguments to {name}: {exc}") from exc

    def pullback(self, name: str, d: Any) -> Any:
        if not isinstance(d, B.DivisorClass):
            raise ParseError(f"{name}* needs a divisor class argument")
        g, n = d.space.g, d.space.n
        if name == "pi":
            m = forgetful_pullback(g, n + 1, n + 1)
        elif name.startswith("pi"):
            m = forgetful_pullback(g, n + 1, int(name[2:]))
        elif name == "fprime":
            m = elliptic_tails_pullback(g)
        elif name == "gprime":
            m = genus2_tail_pullback(g, n, self.sign)
        else:
            i, j = map(int, name[len("bubble"):].split("_"))
            m = bubble_pullback(g, n - 1, i, j)
        return apply(m, d)


def _scale(v: Any, s: Any) -> Any:
    if _is_class(s):
        raise ParseError("products of classes are not supported")
    return v * Fraction(s)


def _add(a: Any, b: Any, sign: int) -> Any:
    if _is_class(a) != _is_class(b):
        raise ParseError("cannot add a number to a class")
    if _is_class(a):
        return a.combine(1, b, sign)
    return a + sign * b


def evaluate(text: str, g2_sign: int = -1) -> B.DivisorClass | ThetaClass:
    """Evaluate an expression to a class; numbers alone are rejected."""
    try:
        v = _Parser(text, g2_sign).parse()
    except ParseError:
        raise
    except ModpicError as exc:
        raise ParseError(str(exc)) from exc
    if not _is_class(v):
        raise ParseError("expression does not evaluate to a class")
    return v
