"""Generalized harmonic numbers and derivative coefficient functions.

The coefficient functions A, B, C, D are the weights that appear when a
terminating summation with a free parameter b is differentiated with
respect to b once (A on the sum side, B on the product side) and twice
(A^2 + C against B^2 + D).  Three flavors are implemented:

- "classical":    hypergeometric kernel, coefficients built from H_k(x)
                  and second-order H_k^(2)(x)
- "q_quadratic":  q-kernel mixing base q and base q^2 factors
- "q_linear":     q-kernel in a single base

In the q_linear flavor the second sum of D carries 1/c^2, not 1/c: the
1/c variant fails the exact jet cross-check D = d/db B (see the tests),
so the consistent form is the one evaluated here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from .errors import MissingParameterError, ParameterError, PoleError
from .qkernel import QParams

FLAVORS = ("classical", "q_quadratic", "q_linear")


def harmonic(k: int, x) -> Any:
    """H_k(x) = sum_{i=1}^{k} 1/(x+i); poles are reported before summing."""
    return harmonic_m(k, 1, x)


def harmonic_m(k: int, m: int, x) -> Any:
    """H_k^(m)(x) = sum_{i=1}^{k} 1/(x+i)^m."""
    if k < 0:
        raise ParameterError(f"harmonic numbers need k >= 0, got {k}")
    if m < 1:
        raise ParameterError(f"harmonic order must be >= 1, got {m}")
    for i in range(1, k + 1):
        if x + i == 0:
            raise PoleError(f"harmonic pole: x + {i} = 0 for x = {x!r}")
    total = x * 0
    for i in range(1, k + 1):
        total = total + 1 / ((x + i) ** m)
    return total


@dataclass(frozen=True)
class ABCDArgs:
    """Arguments shared by the coefficient functions.

    count is the upper summation limit (k for A and C, n for B and D).
    c may stay None for A and C; qp must be set exactly when the flavor
    is a q flavor.
    """

    flavor: str
    a: Any
    b: Any
    count: int
    c: Any = None
    qp: Optional[QParams] = None

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ParameterError(f"unknown flavor {self.flavor!r}, expected one of {FLAVORS}")
        if self.count < 0:
            raise ParameterError(f"count must be >= 0, got {self.count}")
        if self.flavor == "classical":
            if self.qp is not None:
                raise ParameterError("classical flavor takes no q")
        elif self.qp is None:
            raise ParameterError(f"{self.flavor} flavor needs qp")

    def need_c(self):
        if self.c is None:
            raise MissingParameterError(f"coefficient needs c for flavor {self.flavor!r}")
        return self.c


def _den(value, label: str):
    if value == 0:
        raise PoleError(f"coefficient pole: {label} vanishes")
    return value


def coeff_A(args: ABCDArgs):
    a, b, k = args.a, args.b, args.count
    if args.flavor == "classical":
        return (
            harmonic(k, b - 1)
            - harmonic(k, -b)
            + harmonic(k, (a - b) / 2) / 2
            - harmonic(k, (a + b - 1) / 2) / 2
        )
    q = args.qp.q
    total = q * 0
    step = 2 if args.flavor == "q_quadratic" else 1
    for i in range(1, k + 1):
        qi1 = q ** (i - 1)
        qi = q ** i
        qs = q ** (step * i)
        qs1 = q ** (step * i - 1)
        total = total + (
            -qi1 / _den(1 - b * qi1, f"1 - b q^{i - 1}")
            + (qi / b ** 2) / _den(1 - qi / b, f"1 - q^{i}/b")
            - (a * qs / b ** 2) / _den(1 - a * qs / b, f"1 - a q^{step * i}/b")
            + (a * qs1) / _den(1 - a * b * qs1, f"1 - a b q^{step * i - 1}")
        )
    return total


def coeff_B(args: ABCDArgs):
    a, b, n = args.a, args.b, args.count
    c = args.need_c()
    if args.flavor == "classical":
        return (
            harmonic(n, (a + b - 1) / 2 - c) / 2
            - harmonic(n, (a - b) / 2 - c) / 2
            - harmonic(n, (a + b - 1) / 2) / 2
            + harmonic(n, (a - b) / 2) / 2
        )
    q = args.qp.q
    total = q * 0
    if args.flavor == "q_quadratic":
        cc = c ** 2
        for i in range(1, n + 1):
            q2i = q ** (2 * i)
            q2i1 = q ** (2 * i - 1)
            total = total + (
                (a * q2i / (b ** 2 * cc)) / _den(1 - a * q2i / (b * cc), f"1 - a q^{2 * i}/(b c^2)")
                - (a * q2i1 / cc) / _den(1 - a * b * q2i1 / cc, f"1 - a b q^{2 * i - 1}/c^2")
                - (a * q2i / b ** 2) / _den(1 - a * q2i / b, f"1 - a q^{2 * i}/b")
                + (a * q2i1) / _den(1 - a * b * q2i1, f"1 - a b q^{2 * i - 1}")
            )
        return total
    for i in range(1, n + 1):
        qi = q ** i
        qi1 = q ** (i - 1)
        total = total + (
            (a * qi / (b ** 2 * c)) / _den(1 - a * qi / (b * c), f"1 - a q^{i}/(b c)")
            - (a * qi1 / c) / _den(1 - a * b * qi1 / c, f"1 - a b q^{i - 1}/c")
            - (a * qi / b ** 2) / _den(1 - a * qi / b, f"1 - a q^{i}/b")
            + (a * qi1) / _den(1 - a * b * qi1, f"1 - a b q^{i - 1}")
        )
    return total


def coeff_C(args: ABCDArgs):
    a, b, k = args.a, args.b, args.count
    if args.flavor == "classical":
        return (
            -harmonic_m(k, 2, b - 1)
            - harmonic_m(k, 2, -b)
            + harmonic_m(k, 2, (a - b) / 2) / 4
            + harmonic_m(k, 2, (a + b - 1) / 2) / 4
        )
    q = args.qp.q
    total = q * 0
    step = 2 if args.flavor == "q_quadratic" else 1
    for i in range(1, k + 1):
        qi1 = q ** (i - 1)
        qi = q ** i
        qs = q ** (step * i)
        qs1 = q ** (step * i - 1)
        u = qi / b
        v = a * qs / b
        total = total + (
            -(qi1 ** 2) / _den(1 - b * qi1, f"1 - b q^{i - 1}") ** 2
            + (u / b ** 2) * (u - 2) / _den(1 - u, f"1 - q^{i}/b") ** 2
            - (v / b ** 2) * (v - 2) / _den(1 - v, f"1 - a q^{step * i}/b") ** 2
            + (a ** 2 * qs1 ** 2) / _den(1 - a * b * qs1, f"1 - a b q^{step * i - 1}") ** 2
        )
    return total


def coeff_D(args: ABCDArgs):
    a, b, n = args.a, args.b, args.count
    c = args.need_c()
    if args.flavor == "classical":
        return (
            -harmonic_m(n, 2, (a + b - 1) / 2 - c) / 4
            - harmonic_m(n, 2, (a - b) / 2 - c) / 4
            + harmonic_m(n, 2, (a + b - 1) / 2) / 4
            + harmonic_m(n, 2, (a - b) / 2) / 4
        )
    q = args.qp.q
    total = q * 0
    if args.flavor == "q_quadratic":
        cc = c ** 2
        for i in range(1, n + 1):
            q2i = q ** (2 * i)
            q2i1 = q ** (2 * i - 1)
            u = a * q2i / (b * cc)
            v = a * q2i / b
            total = total + (
                (u / b ** 2) * (u - 2) / _den(1 - u, f"1 - a q^{2 * i}/(b c^2)") ** 2
                - (a ** 2 * q2i1 ** 2 / cc ** 2) / _den(1 - a * b * q2i1 / cc, f"1 - a b q^{2 * i - 1}/c^2") ** 2
                - (v / b ** 2) * (v - 2) / _den(1 - v, f"1 - a q^{2 * i}/b") ** 2
                + (a ** 2 * q2i1 ** 2) / _den(1 - a * b * q2i1, f"1 - a b q^{2 * i - 1}") ** 2
            )
        return total
    for i in range(1, n + 1):
        qi = q ** i
        qi1 = q ** (i - 1)
        u = a * qi / (b * c)
        v = a * qi / b
        total = total + (
            (u / b ** 2) * (u - 2) / _den(1 - u, f"1 - a q^{i}/(b c)") ** 2
            # the 1/c variant of this sum breaks D = d/db B; 1/c^2 restores it
            - (a ** 2 * qi1 ** 2 / c ** 2) / _den(1 - a * b * qi1 / c, f"1 - a b q^{i - 1}/c") ** 2
            - (v / b ** 2) * (v - 2) / _den(1 - v, f"1 - a q^{i}/b") ** 2
            + (a ** 2 * qi1 ** 2) / _den(1 - a * b * qi1, f"1 - a b q^{i - 1}") ** 2
        )
    return total
