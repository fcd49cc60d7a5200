"""Pochhammer symbols, q-integers and q-Pochhammer products.

All functions are generic over the scalar type: exact Fractions, BigReal,
or Jet2 built on either.  Infinite products return a value together with a
certified bound on the truncation error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .errors import ParameterError, PoleError

_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)


@dataclass(frozen=True)
class QParams:
    """A q base with its provenance.

    `derived(e)` produces the base q^e recomputed from the originally
    supplied q in a single operation, so repeated derivation never stacks
    roundings: QParams(q).derived(2).derived(2) rounds q^4 once.
    """

    q: Any
    origin_q: Any = None
    origin_exp: int = 1

    def __post_init__(self):
        if self.origin_q is None:
            object.__setattr__(self, "origin_q", self.q)
        if not (0 < self.q < 1):
            raise ParameterError(f"q must satisfy 0 < q < 1, got {self.q!r}")

    def derived(self, exponent: int) -> "QParams":
        if not isinstance(exponent, int) or exponent < 1:
            raise ParameterError(f"derived exponent must be a positive int, got {exponent!r}")
        e = self.origin_exp * exponent
        return QParams(self.origin_q ** e, origin_q=self.origin_q, origin_exp=e)

    @property
    def one_minus_q(self):
        return 1 - self.q


@dataclass(frozen=True)
class InfProduct:
    """A truncated infinite product with a certified relative error bound.

    |true / value - 1| <= bound, and bound <= the eps that was requested.
    """

    value: Any
    bound: Any
    factors_used: int


def pochhammer(x, n: int):
    """Rising factorial (x)_n = x (x+1) ... (x+n-1); (x)_0 = 1."""
    if n < 0:
        raise ParameterError(f"pochhammer needs n >= 0, got {n}")
    result = None
    for i in range(n):
        factor = x + i
        result = factor if result is None else result * factor
    if result is None:
        return _one_like(x)
    return result


def q_integer(n: int, qp: QParams):
    """[n]_q = (1 - q^n) / (1 - q) for n >= 1."""
    if n < 1:
        raise ParameterError(f"q_integer needs n >= 1, got {n}")
    q = qp.q
    return (1 - q ** n) / (1 - q)


def q_pochhammer(x, qp: QParams, n: int):
    """(x; q)_n = prod_{i=0}^{n-1} (1 - x q^i); empty product is 1."""
    if n < 0:
        raise ParameterError(f"q_pochhammer needs n >= 0, got {n}")
    q = qp.q
    result = None
    qpow = None
    for _ in range(n):
        qpow = _one_like(q) if qpow is None else qpow * q
        factor = 1 - x * qpow
        result = factor if result is None else result * factor
    if result is None:
        return _one_like(x * q)
    return result


def q_pochhammer_inf(x, qp: QParams, eps) -> InfProduct:
    """(x; q)_inf truncated once the certified tail bound drops below eps.

    Truncate after m factors when s = |x| q^m / (1-q) <= min(eps/2, 1/4).
    The dropped factors satisfy |log prod_{i>=m}(1 - x q^i)| <= t with
    t = s / (1 - |x q^m|), so the relative error is below e^t - 1, which
    is itself below t + t^2 for t <= 1/2.  The returned bound is t + t^2.
    """
    if not _positive(eps):
        raise ParameterError("q_pochhammer_inf needs eps > 0")
    q = qp.q
    cap = _minimum(_scale(eps, _HALF), _QUARTER)
    value = None
    qpow = _one_like(q)
    m = 0
    while True:
        s = abs(x) * qpow / (1 - q)
        if s <= cap:
            break
        factor = 1 - x * qpow
        if factor == 0:
            raise PoleError(f"q_pochhammer_inf factor 1 - x q^{m} is zero (x={x!r})")
        value = factor if value is None else value * factor
        qpow = qpow * q
        m += 1
        if m > 10 ** 7:
            raise ParameterError("q_pochhammer_inf did not reach its tolerance")
    u = abs(x) * qpow
    t = s / (1 - u)
    bound = t + t * t
    if value is None:
        value = _one_like(q)
    return InfProduct(value=value, bound=bound, factors_used=m)


def multi_q_pochhammer(xs: Sequence, qp: QParams, n: int):
    """prod_j (x_j; q)_n."""
    result = None
    for x in xs:
        piece = q_pochhammer(x, qp, n)
        result = piece if result is None else result * piece
    if result is None:
        raise ParameterError("multi_q_pochhammer needs at least one argument")
    return result


def multi_q_pochhammer_inf(xs: Sequence, qp: QParams, eps) -> InfProduct:
    """prod_j (x_j; q)_inf with a combined certified bound below eps.

    Each factor gets an eps/(2k) budget; the combined relative bound is
    prod(1 + b_j) - 1 <= e^(sum b_j) - 1 <= eps for small budgets.
    """
    if not xs:
        raise ParameterError("multi_q_pochhammer_inf needs at least one argument")
    share = _scale(eps, Fraction(1, 2 * len(xs)))
    value = None
    grown = None
    factors = 0
    for x in xs:
        piece = q_pochhammer_inf(x, qp, share)
        value = piece.value if value is None else value * piece.value
        g = 1 + piece.bound
        grown = g if grown is None else grown * g
        factors += piece.factors_used
    return InfProduct(value=value, bound=grown - 1, factors_used=factors)


def _one_like(x):
    return x * 0 + 1


def _positive(x) -> bool:
    try:
        return x > 0
    except TypeError:
        return False


def _scale(x, frac: Fraction):
    return x * frac


def _minimum(a, b):
    return a if a <= b else b
