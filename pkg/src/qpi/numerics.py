"""Arbitrary-precision reals and second-order jets.

BigReal wraps an MPFR float together with the precision it was rounded to.
Every arithmetic operation rounds once, at the maximum precision of its
operands, so the relative rounding error of a single operation is at most
2^(1-p).  Exact operands (int, Fraction) are converted without rounding and
only the result is rounded.

Jet2 carries (value, first derivative, second derivative) with respect to a
single formal parameter and works over any component field, in particular
Fraction and BigReal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

import gmpy2

from .errors import PrecisionError

MIN_PRECISION = 16

_EXACT_TYPES = (int, Fraction)


@lru_cache(maxsize=None)
def _context(bits: int) -> Any:
    return gmpy2.context(precision=bits)


def _to_ground(value):
    """Convert an exact operand to something gmpy2 consumes losslessly."""
    if isinstance(value, Fraction):
        return gmpy2.mpq(value.numerator, value.denominator)
    return value


class BigReal:
    """A real number rounded to a stated binary precision.

    Arithmetic with another BigReal yields the maximum of the two
    precisions; arithmetic with int or Fraction treats the other operand
    as exact and keeps this operand's precision.
    """

    __slots__ = ("_v", "precision_bits")

    def __init__(self, value, precision_bits: int):
        if precision_bits < MIN_PRECISION:
            raise PrecisionError(
                f"precision_bits={precision_bits} is below the floor {MIN_PRECISION}"
            )
        if isinstance(value, Fraction):
            v = gmpy2.mpfr(gmpy2.mpq(value.numerator, value.denominator), precision_bits)
        else:
            v = gmpy2.mpfr(value, precision_bits)
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "precision_bits", precision_bits)

    def __setattr__(self, name, value):
        raise AttributeError("BigReal is immutable")

    @property
    def raw(self):
        """The underlying mpfr value."""
        return self._v

    def _binary(self, other, op, swap=False):
        if isinstance(other, BigReal):
            p = max(self.precision_bits, other.precision_bits)
            rhs = other._v
        elif isinstance(other, _EXACT_TYPES):
            p = self.precision_bits
            rhs = _to_ground(other)
        else:
            return NotImplemented
        ctx = _context(p)
        a, b = (rhs, self._v) if swap else (self._v, rhs)
        return BigReal(getattr(ctx, op)(a, b), p)

    def __add__(self, other):
        return self._binary(other, "add")

    def __radd__(self, other):
        return self._binary(other, "add", swap=True)

    def __sub__(self, other):
        return self._binary(other, "sub")

    def __rsub__(self, other):
        return self._binary(other, "sub", swap=True)

    def __mul__(self, other):
        return self._binary(other, "mul")

    def __rmul__(self, other):
        return self._binary(other, "mul", swap=True)

    def __truediv__(self, other):
        if _is_exact_zero(other):
            raise ZeroDivisionError("BigReal division by zero")
        return self._binary(other, "div")

    def __rtruediv__(self, other):
        if self._v == 0:
            raise ZeroDivisionError("BigReal division by zero")
        return self._binary(other, "div", swap=True)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return 1 / (self ** (-exponent))
        ctx = _context(self.precision_bits)
        return BigReal(ctx.pow(self._v, exponent), self.precision_bits)

    def __neg__(self):
        ctx = _context(self.precision_bits)
        return BigReal(ctx.minus(self._v), self.precision_bits)

    def __pos__(self):
        return self

    def __abs__(self):
        return BigReal(abs(self._v), self.precision_bits)

    def sqrt(self):
        if self._v < 0:
            raise ValueError("sqrt of a negative BigReal")
        ctx = _context(self.precision_bits)
        return BigReal(ctx.sqrt(self._v), self.precision_bits)

    def expm1(self):
        ctx = _context(self.precision_bits)
        return BigReal(ctx.expm1(self._v), self.precision_bits)

    def _cmp_value(self, other):
        if isinstance(other, BigReal):
            return other._v
        if isinstance(other, _EXACT_TYPES):
            return _to_ground(other)
        return None

    def __eq__(self, other):
        rhs = self._cmp_value(other)
        return NotImplemented if rhs is None else self._v == rhs

    def __lt__(self, other):
        rhs = self._cmp_value(other)
        return NotImplemented if rhs is None else self._v < rhs

    def __le__(self, other):
        rhs = self._cmp_value(other)
        return NotImplemented if rhs is None else self._v <= rhs

    def __gt__(self, other):
        rhs = self._cmp_value(other)
        return NotImplemented if rhs is None else self._v > rhs

    def __ge__(self, other):
        rhs = self._cmp_value(other)
        return NotImplemented if rhs is None else self._v >= rhs

    def __hash__(self):
        return hash(self._v)

    def __bool__(self):
        return self._v != 0

    def __float__(self):
        return float(self._v)

    def __repr__(self):
        return f"BigReal({self._v!r}, precision_bits={self.precision_bits})"

    def to_decimal(self, digits: int | None = None) -> str:
        """Decimal string with `digits` significant digits (default: full)."""
        if digits is None:
            digits = decimal_digits(self.precision_bits)
        mantissa, exp, _ = self._v.digits(10, digits)
        sign = ""
        if mantissa.startswith("-"):
            sign, mantissa = "-", mantissa[1:]
        if mantissa.rstrip("0") == "":
            return "0"
        head, tail = mantissa[0], mantissa[1:].rstrip("0")
        body = head if not tail else f"{head}.{tail}"
        return f"{sign}{body}e{exp - 1:+d}"


def _is_exact_zero(x) -> bool:
    if isinstance(x, BigReal):
        return x._v == 0
    if isinstance(x, _EXACT_TYPES):
        return x == 0
    return False


def decimal_digits(precision_bits: int) -> int:
    """Significant decimal digits carried by `precision_bits` binary digits."""
    return max(1, int(precision_bits * 0.30103))


def big(value, precision_bits: int) -> BigReal:
    """Shorthand constructor."""
    return BigReal(value, precision_bits)


def pi(precision_bits: int) -> BigReal:
    """pi rounded to `precision_bits` bits; error below 2^(4-p).

    Precisions under 16 bits are refused rather than silently degraded.
    """
    if precision_bits < MIN_PRECISION:
        raise PrecisionError(
            f"pi requires precision_bits >= {MIN_PRECISION}, got {precision_bits}"
        )
    ctx = _context(precision_bits)
    return BigReal(ctx.const_pi(), precision_bits)


@dataclass(frozen=True)
class Jet2:
    """Second-order jet (f, f', f'') with respect to one parameter.

    Components may be Fraction (exact mode) or BigReal.  Scalars combine
    with jets as constants, so series code written for plain numbers runs
    unchanged on jets.
    """

    v: Any
    d1: Any
    d2: Any

    @classmethod
    def constant(cls, c) -> "Jet2":
        zero = c * 0
        return cls(c, zero, zero)

    @classmethod
    def variable(cls, b0) -> "Jet2":
        zero = b0 * 0
        return cls(b0, zero + 1, zero)

    def _lift(self, other):
        if isinstance(other, Jet2):
            return other
        if isinstance(other, (int, Fraction, BigReal)):
            return Jet2.constant(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet2(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet2(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet2(
            self.v * o.v,
            self.v * o.d1 + self.d1 * o.v,
            self.v * o.d2 + 2 * (self.d1 * o.d1) + self.d2 * o.v,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return jet_div(self, o)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return jet_div(o, self)

    def __neg__(self):
        return Jet2(-self.v, -self.d1, -self.d2)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return jet_div(Jet2.constant(self.v ** 0), self ** (-exponent))
        result = Jet2.constant(self.v ** 0)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def jet_mul(x: Jet2, y: Jet2) -> Jet2:
    """Jet product; second component uses the Leibniz rule."""
    return x * y


def jet_div(x: Jet2, y: Jet2) -> Jet2:
    """Jet quotient w = x / y, solved from x = w * y.

    Raises ZeroDivisionError when the value component of y is zero.
    """
    if _is_exact_zero(y.v):
        raise ZeroDivisionError("jet division by a jet with zero value")
    wv = x.v / y.v
    wd1 = (x.d1 - wv * y.d1) / y.v
    wd2 = (x.d2 - 2 * (wd1 * y.d1) - wv * y.d2) / y.v
    return Jet2(wv, wd1, wd2)
