"""Exact arithmetic in the rationals and in real quadratic fields Q(sqrt d).

Elements are stored as ``a + b*sqrt(d)`` with ``Fraction`` components.  An
element whose irrational part is zero is always stored with ``d == 1`` so that
equality and hashing are structural and agree with ``Fraction``.
"""

from __future__ import annotations

import ast
import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import DivisionByZero, MixedFields, ParseError, ValidationError

Number = Union["FieldElement", int, Fraction]


@lru_cache(maxsize=None)
def _squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(k, r)`` with ``n == k*k*r`` and ``r`` squarefree (n >= 1)."""
    k, r = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            r *= p
        p += 1 if p == 2 else 2
    r *= m
    return k, r


def is_squarefree(n: int) -> bool:
    return n >= 1 and _squarefree_split(n)[0] == 1


@dataclass(frozen=True)
class FieldDescriptor:
    """The rationals (``d == 1``) or the real quadratic field Q(sqrt d)."""

    d: int = 1

    def __post_init__(self) -> None:
        if self.d != 1 and (self.d < 2 or not is_squarefree(self.d)):
            raise ValidationError(f"sqrt({self.d}) does not define a quadratic field", "squarefree")

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    def __str__(self) -> str:
        return "Q" if self.d == 1 else f"Q(sqrt({self.d}))"

    def join(self, other: FieldDescriptor) -> FieldDescriptor:
        if self.d == 1:
            return other
        if other.d == 1 or other.d == self.d:
            return self
        raise MixedFields(f"cannot combine {self} with {other}")


RATIONALS = FieldDescriptor(1)


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def _fsign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


class FieldElement:
    """An immutable exact real number ``a + b*sqrt(d)``."""

    __slots__ = ("a", "b", "d")

    a: Fraction
    b: Fraction
    d: int

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0, d: int = 1) -> None:
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            d = 1
        elif d == 1:
            raise ValidationError("a nonzero irrational part needs d >= 2", "squarefree")
        else:
            FieldDescriptor(d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> FieldElement:
        obj = object.__new__(cls)
        if b == 0:
            d = 1
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "d", d)
        return obj

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("FieldElement is immutable")

    def __reduce__(self):
        return (FieldElement, (self.a, self.b, self.d))

    @property
    def field(self) -> FieldDescriptor:
        return FieldDescriptor(self.d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    # -- arithmetic -----------------------------------------------------

    def _common(self, other: Number) -> tuple[FieldElement, int]:
        other = as_element(other)
        if self.d == other.d or other.d == 1:
            return other, self.d
        if self.d == 1:
            return other, other.d
        raise MixedFields(f"cannot combine Q(sqrt({self.d})) with Q(sqrt({other.d}))")

    def __add__(self, other: Number) -> FieldElement:
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        return FieldElement._raw(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __sub__(self, other: Number) -> FieldElement:
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        return FieldElement._raw(self.a - o.a, self.b - o.b, d)

    def __rsub__(self, other: Number) -> FieldElement:
        return as_element(other) - self

    def __neg__(self) -> FieldElement:
        return FieldElement._raw(-self.a, -self.b, self.d)

    def __pos__(self) -> FieldElement:
        return self

    def __mul__(self, other: Number) -> FieldElement:
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        if o.b == 0:
            return FieldElement._raw(self.a * o.a, self.b * o.a, d)
        if self.b == 0:
            return FieldElement._raw(self.a * o.a, self.a * o.b, d)
        return FieldElement._raw(self.a * o.a + self.b * o.b * d, self.a * o.b + o.a * self.b, d)

    __rmul__ = __mul__

    def conjugate(self) -> FieldElement:
        return FieldElement._raw(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> FieldElement:
        if self.b == 0:
            if self.a == 0:
                raise DivisionByZero("division by zero")
            return FieldElement._raw(1 / self.a, Fraction(0), 1)
        n = self.norm()
        return FieldElement._raw(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other: Number) -> FieldElement:
        try:
            o, _ = self._common(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Number) -> FieldElement:
        return as_element(other) / self

    def __pow__(self, n: int) -> FieldElement:
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = ONE
        for _ in range(abs(n)):
            result = result * base
        return result

    # -- order ----------------------------------------------------------

    def sign(self) -> Sign:
        sa, sb = _fsign(self.a), _fsign(self.b)
        if sb == 0:
            return Sign(sa)
        if sa == 0 or sa == sb:
            return Sign(sb)
        return Sign(sa if self.a * self.a > self.b * self.b * self.d else sb)

    def _cmp(self, other: Number) -> int:
        if not isinstance(other, FieldElement):
            if isinstance(other, (int, Fraction)) and self.b == 0:
                return (self.a > other) - (self.a < other)
        elif self.b == 0 and other.b == 0:
            return (self.a > other.a) - (self.a < other.a)
        return int((self - other).sign())

    def __lt__(self, other: Number) -> bool:
        try:
            return self._cmp(other) < 0
        except TypeError:
            return NotImplemented

    def __le__(self, other: Number) -> bool:
        try:
            return self._cmp(other) <= 0
        except TypeError:
            return NotImplemented

    def __gt__(self, other: Number) -> bool:
        try:
            return self._cmp(other) > 0
        except TypeError:
            return NotImplemented

    def __ge__(self, other: Number) -> bool:
        try:
            return self._cmp(other) >= 0
        except TypeError:
            return NotImplemented

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __abs__(self) -> FieldElement:
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    # -- text -----------------------------------------------------------

    def __str__(self) -> str:
        if self.b == 0:
            return _fmt_fraction(self.a)
        mag = abs(self.b)
        root = f"sqrt({self.d})"
        irr = root if mag == 1 else f"{_fmt_fraction(mag)}*{root}"
        if self.a == 0:
            return irr if self.b > 0 else f"-{irr}"
        op = "+" if self.b > 0 else "-"
        return f"{_fmt_fraction(self.a)} {op} {irr}"

    def __repr__(self) -> str:
        return f"FieldElement({self})"


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


ZERO = FieldElement(0)
ONE = FieldElement(1)


def as_element(x: object) -> FieldElement:
    """Coerce ints, Fractions, strings and FieldElements to FieldElement."""
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not field elements")
    if isinstance(x, (int, Fraction)):
        return FieldElement._raw(Fraction(x), Fraction(0), 1)
    if isinstance(x, str):
        return parse_element(x)
    raise TypeError(f"cannot interpret {x!r} as an exact field element")


def sqrt(x: int | Fraction) -> FieldElement:
    """Exact square root of a nonnegative rational."""
    q = Fraction(x)
    if q < 0:
        raise ValidationError(f"sqrt of negative number {q}", "nonnegative")
    if q == 0:
        return ZERO
    m = q.numerator * q.denominator
    k, r = _squarefree_split(m)
    coeff = Fraction(k, q.denominator)
    if r == 1:
        return FieldElement(coeff)
    return FieldElement(0, coeff, r)


def field_arith(op: str, x: Number, y: Number) -> FieldElement:
    x, y = as_element(x), as_element(y)
    if op in ("+", "add"):
        return x + y
    if op in ("-", "−", "sub"):
        return x - y
    if op in ("*", "×", "mul"):
        return x * y
    if op in ("/", "÷", "div"):
        return x / y
    raise ValueError(f"unknown operator {op!r}")


def field_sign(x: Number) -> Sign:
    return as_element(x).sign()


_SQRT_NAME = re.compile(r"sqrt(\d+)$")


def parse_element(text: str) -> FieldElement:
    """Parse expressions such as ``3/4``, ``1 - 1/2*sqrt(2)`` or ``(sqrt5-1)/2``."""
    src = text.strip()
    if not src:
        raise ParseError("empty number", 1, 1, text)
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"invalid number {text!r}: {exc.msg}", exc.lineno, exc.offset, text) from None
    return _eval_node(tree.body, text)


def _fail(node: ast.AST, text: str, msg: str) -> ParseError:
    return ParseError(f"{msg} in {text!r}", getattr(node, "lineno", 1), getattr(node, "col_offset", 0) + 1, text)


def _eval_node(node: ast.AST, text: str) -> FieldElement:
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return as_element(node.value)
        raise _fail(node, text, "only integer literals are allowed (no floats)")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left = _eval_node(node.left, text)
        if isinstance(node.op, ast.Pow):
            exp = _eval_node(node.right, text)
            if not exp.is_rational or exp.a.denominator != 1 or abs(exp.a) > 64:
                raise _fail(node, text, "exponent must be a small integer")
            return left ** int(exp.a)
        right = _eval_node(node.right, text)
        try:
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
        except DivisionByZero:
            raise _fail(node, text, "division by zero") from None
        except MixedFields as exc:
            raise _fail(node, text, str(exc)) from None
        raise _fail(node, text, "unsupported operator")
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        if len(node.args) != 1 or node.keywords:
            raise _fail(node, text, "sqrt takes one argument")
        arg = _eval_node(node.args[0], text)
        if not arg.is_rational or arg.a < 0:
            raise _fail(node, text, "sqrt needs a nonnegative rational argument")
        return sqrt(arg.a)
    if isinstance(node, ast.Name):
        m = _SQRT_NAME.match(node.id)
        if m:
            return sqrt(int(m.group(1)))
        raise _fail(node, text, f"unknown name {node.id!r}")
    raise _fail(node, text, "unsupported syntax")
