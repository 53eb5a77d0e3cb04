"""Test-function expressions: rational functions of z1, z2, w1, w2 and conjugates.

Grammar (EBNF):
    expr   := ["-"] term {("+"|"-") term}
    term   := factor {("*"|"/") factor}
    factor := base ["^" int]
    base   := "z1" | "z2" | "w1" | "w2" | "i" | number
            | "conj(" expr ")" | "(" expr ")"

Expressions evaluate either numerically over numpy arrays (fast path for
quadrature) or as jets (leaves resolved through the dual-map jets), and the
two evaluations agree: the jet of an expression is the expression of the
leaf jets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ExpressionSyntaxError, NearZeroDenominator
from .jets import Jet, div

VAR_NAMES = ("z1", "z2", "w1", "w2")


# -- AST ---------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Conj:
    arg: "Expr"


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Const | Var | Conj | Neg | Add | Sub | Mul | Div | Pow

ONE = Const(1.0 + 0j)
ZERO = Const(0.0 + 0j)


# -- parser ------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)|(?P<name>z1|z2|w1|w2|conj|i)"
    r"|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                raise ExpressionSyntaxError(pos, "a token", stripped[0])
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.next()
        if text != value:
            raise ExpressionSyntaxError(pos, repr(value), text)

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, pos = self.peek()
        if kind is not None:
            raise ExpressionSyntaxError(pos, "end of input", text)
        return e

    def expr(self) -> Expr:
        kind, text, _ = self.peek()
        negate = False
        if text == "-":
            self.next()
            negate = True
        e = self.term()
        if negate:
            e = Neg(e)
        while True:
            kind, text, _ = self.peek()
            if text == "+":
                self.next()
                e = Add(e, self.term())
            elif text == "-":
                self.next()
                e = Sub(e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.factor()
        while True:
            kind, text, _ = self.peek()
            if text == "*":
                self.next()
                e = Mul(e, self.factor())
            elif text == "/":
                self.next()
                e = Div(e, self.factor())
            else:
                return e

    def factor(self) -> Expr:
        e = self.base()
        kind, text, _ = self.peek()
        if text == "^":
            self.next()
            kind, text, pos = self.next()
            if kind != "num" or "." in text:
                raise ExpressionSyntaxError(pos, "an integer exponent", text)
            e = Pow(e, int(text))
        return e

    def base(self) -> Expr:
        kind, text, pos = self.next()
        if kind == "num":
            return Const(complex(float(text)))
        if kind == "name":
            if text == "i":
                return Const(1j)
            if text == "conj":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Conj(inner)
            return Var(text)
        if text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ExpressionSyntaxError(pos, "a value", text)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# -- pretty printer ----------------------------------------------------

def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return 1
    if isinstance(e, (Mul, Div)):
        return 2
    if isinstance(e, Neg):
        return 1
    if isinstance(e, Pow):
        return 3
    return 4


def to_string(e: Expr) -> str:
    def wrap(child, parent_prec, strict=False):
        s = to_string(child)
        p = _prec(child)
        if p < parent_prec or (strict and p == parent_prec):
            return f"({s})"
        return s

    if isinstance(e, Const):
        v = e.value
        if v == 1j:
            return "i"
        if v.imag == 0:
            r = v.real
            return str(int(r)) if r == int(r) and r >= 0 else f"({r})" if r < 0 else str(r)
        return f"({v.real}+{v.imag}*i)" if v.imag >= 0 else f"({v.real}-{-v.imag}*i)"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Conj):
        return f"conj({to_string(e.arg)})"
    if isinstance(e, Neg):
        return f"-{wrap(e.arg, 2)}"
    if isinstance(e, Add):
        return f"{wrap(e.left, 1)} + {wrap(e.right, 1)}"
    if isinstance(e, Sub):
        return f"{wrap(e.left, 1)} - {wrap(e.right, 1, strict=True)}"
    if isinstance(e, Mul):
        return f"{wrap(e.left, 2)}*{wrap(e.right, 2)}"
    if isinstance(e, Div):
        return f"{wrap(e.left, 2)}/{wrap(e.right, 2, strict=True)}"
    if isinstance(e, Pow):
        return f"{wrap(e.base, 3, strict=True)}^{e.exponent}"
    raise TypeError(f"not an expression: {e!r}")


# -- numeric evaluation ------------------------------------------------

def eval_values(e: Expr, env: dict):
    """Evaluate over an environment of numpy arrays (or scalars) for
    z1, z2, w1, w2."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Conj):
        return np.conj(eval_values(e.arg, env))
    if isinstance(e, Neg):
        return -eval_values(e.arg, env)
    if isinstance(e, Add):
        return eval_values(e.left, env) + eval_values(e.right, env)
    if isinstance(e, Sub):
        return eval_values(e.left, env) - eval_values(e.right, env)
    if isinstance(e, Mul):
        return eval_values(e.left, env) * eval_values(e.right, env)
    if isinstance(e, Div):
        return eval_values(e.left, env) / eval_values(e.right, env)
    if isinstance(e, Pow):
        return eval_values(e.base, env) ** e.exponent
    raise TypeError(f"not an expression: {e!r}")


def admissible_mask(e: Expr, env: dict, delta: float):
    """Boolean mask marking points where every denominator subexpression
    of e stays at magnitude >= delta."""
    some = next(v for v in env.values())
    mask = np.ones(np.shape(some), dtype=bool)

    def walk(node):
        nonlocal mask
        if isinstance(node, (Const, Var)):
            return
        if isinstance(node, (Conj, Neg)):
            walk(node.arg)
        elif isinstance(node, Pow):
            walk(node.base)
            if node.exponent < 0:
                mask &= np.abs(eval_values(node.base, env)) >= delta
        elif isinstance(node, Div):
            walk(node.left)
            walk(node.right)
            mask &= np.abs(eval_values(node.right, env)) >= delta
        else:
            walk(node.left)
            walk(node.right)

    walk(e)
    return mask


def eval_derivatives(e: Expr, env: dict, denv: dict):
    """Value and the four Wirtinger derivatives of e, vectorized.

    denv maps each leaf name to its (4,)+shape stack of derivatives with
    respect to (z1, z2, zb1, zb2); for the coordinate leaves these are
    constant unit stacks, for w-leaves the ambient dual-map derivatives.
    Returns (value, derivs) with derivs of shape (4,) + value.shape.
    """
    if isinstance(e, Const):
        return e.value, 0.0
    if isinstance(e, Var):
        return env[e.name], denv[e.name]
    if isinstance(e, Conj):
        v, d = eval_derivatives(e.arg, env, denv)
        if isinstance(d, float):
            return np.conj(v), 0.0
        # d(conj f)/dzeta_k = conj(df/dzeta_{swap(k)})
        return np.conj(v), np.conj(d[[2, 3, 0, 1]])
    if isinstance(e, Neg):
        v, d = eval_derivatives(e.arg, env, denv)
        return -v, -d if not isinstance(d, float) else 0.0
    if isinstance(e, Add):
        va, da = eval_derivatives(e.left, env, denv)
        vb, db = eval_derivatives(e.right, env, denv)
        return va + vb, da + db
    if isinstance(e, Sub):
        va, da = eval_derivatives(e.left, env, denv)
        vb, db = eval_derivatives(e.right, env, denv)
        return va - vb, da - db
    if isinstance(e, Mul):
        va, da = eval_derivatives(e.left, env, denv)
        vb, db = eval_derivatives(e.right, env, denv)
        return va * vb, da * vb + va * db
    if isinstance(e, Div):
        va, da = eval_derivatives(e.left, env, denv)
        vb, db = eval_derivatives(e.right, env, denv)
        return va / vb, da / vb - va * db / vb**2
    if isinstance(e, Pow):
        v, d = eval_derivatives(e.base, env, denv)
        n = e.exponent
        return v**n, n * v ** (n - 1) * d
    raise TypeError(f"not an expression: {e!r}")


# -- jet evaluation ----------------------------------------------------

def eval_jet(e: Expr, leaves: dict, eps_div: float = 1e-12) -> Jet:
    """Evaluate an expression in the jet ring; leaves maps each variable
    name to its jet at the evaluation point."""
    if isinstance(e, Const):
        order = next(iter(leaves.values())).order
        return Jet.constant(e.value, order)
    if isinstance(e, Var):
        return leaves[e.name]
    if isinstance(e, Conj):
        return eval_jet(e.arg, leaves, eps_div).conj()
    if isinstance(e, Neg):
        return -eval_jet(e.arg, leaves, eps_div)
    if isinstance(e, Add):
        return eval_jet(e.left, leaves, eps_div) + eval_jet(e.right, leaves, eps_div)
    if isinstance(e, Sub):
        return eval_jet(e.left, leaves, eps_div) - eval_jet(e.right, leaves, eps_div)
    if isinstance(e, Mul):
        return eval_jet(e.left, leaves, eps_div) * eval_jet(e.right, leaves, eps_div)
    if isinstance(e, Div):
        num = eval_jet(e.left, leaves, eps_div)
        den = eval_jet(e.right, leaves, eps_div)
        try:
            return div(num, den, eps_div)
        except NearZeroDenominator as exc:
            raise NearZeroDenominator(exc.magnitude, to_string(e.right)) from None
    if isinstance(e, Pow):
        base = eval_jet(e.base, leaves, eps_div)
        if e.exponent < 0:
            try:
                return base**e.exponent
            except NearZeroDenominator as exc:
                raise NearZeroDenominator(exc.magnitude, to_string(e.base)) from None
        return base**e.exponent
    raise TypeError(f"not an expression: {e!r}")


# -- builders ----------------------------------------------------------

def const(value) -> Expr:
    return Const(complex(value))


def add(*terms: Expr) -> Expr:
    terms = [t for t in terms if t != ZERO]
    if not terms:
        return ZERO
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


def mul(*factors: Expr) -> Expr:
    out = factors[0]
    for f in factors[1:]:
        out = Mul(out, f)
    return out


def monomial(var_pair, degrees, coefficient=1.0) -> Expr:
    """coefficient * v1^a * v2^b over a variable pair like ("z1", "z2")."""
    a, b = degrees
    factors = []
    if coefficient != 1.0 or (a == 0 and b == 0):
        factors.append(const(coefficient))
    if a:
        factors.append(Var(var_pair[0]) if a == 1 else Pow(Var(var_pair[0]), a))
    if b:
        factors.append(Var(var_pair[1]) if b == 1 else Pow(Var(var_pair[1]), b))
    return mul(*factors)


def polynomial(var_pair, coeffs: dict) -> Expr:
    """Polynomial from a {(a, b): coefficient} mapping."""
    terms = [
        monomial(var_pair, ab, c) for ab, c in sorted(coeffs.items()) if c != 0
    ]
    return add(*terms) if terms else ZERO


def conjugated(e: Expr) -> Expr:
    return Conj(e)
