"""Streams and right-hand sides for the infinite double series.

Each left-hand side is a TermStream whose terms are advanced by O(1)
rational-factor recurrences in BigReal arithmetic, paired with a tail
certificate:

- kernels decaying like 4^-k or q^(2k) carry a GeometricCert whose bound
  dominates every later term ratio and decreases in k;
- kernels decaying polynomially carry an AbsoluteTailCert with an
  envelope constant derived by hand (the tests check the envelopes
  against brute-force partial tails);
- alternating kernels carry an AlternatingCert validated while summing.

Right-hand sides are closed forms in pi (zero tail), or for the
q-analogues a product of q-Pochhammer infinite products times an inner
single series, with the two error budgets combined into one absolute
bound.

The inner sums of three q right-hand sides exist in two transcriptions.
The "literal" variants carry an extra term of the shape
(1-q) q^(4i+c) / (2 [2i+c']^2) that is inconsistent with the d/db
derivation of the kernels (it matches the 1/c variant of the linear
flavor D); the "corrected" variants drop it.  Catalog entries pin which
variant each identity verifies against; both stay available here so the
discrepancy itself can be measured.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional

from ..errors import MissingParameterError, UnknownIdentityError
from ..numerics import BigReal, big, pi
from ..qkernel import QParams, multi_q_pochhammer_inf, q_integer
from .engine import (
    AbsoluteTailCert,
    AlternatingCert,
    GeometricCert,
    SumResult,
    TermStream,
    sum_adaptive,
)

DEFAULT_TOL = Fraction(1, 10 ** 30)


# -- classical left-hand sides ------------------------------------------


def _ramanujan_stream(p: int) -> TermStream:
    def terms() -> Iterator[BigReal]:
        t = big(1, p)
        k = 0
        while True:
            yield t
            t = t * Fraction((2 * k + 1) ** 3 * (6 * k + 7), (2 * k + 2) ** 3 * (6 * k + 1) * 4)
            k += 1

    # ratio <= (6k+7)/(4(6k+1)), decreasing, below 1 from k = 1 on
    return TermStream(
        name="ramanujan",
        first_index=0,
        make_terms=terms,
        ratio_hint=lambda k: Fraction(6 * k + 7, 4 * (6 * k + 1)),
        zero=big(0, p),
    )


def _wallis_weighted_stream(name: str, p: int, eighth: bool) -> TermStream:
    # sum (6k+1) W_k^3 / 4^k (or (-1)^k, /8^k) times the partial sums of
    # 1/(2j-1)^2 - 1/(16 j^2)
    base = 8 if eighth else 4

    def terms() -> Iterator[BigReal]:
        u = big(Fraction((-1 if eighth else 1) * 7, 8 * base), p)
        e = big(Fraction(15, 16), p)
        k = 1
        while True:
            yield u * e
            ratio = Fraction((2 * k + 1) ** 3 * (6 * k + 7), (2 * k + 2) ** 3 * (6 * k + 1) * base)
            u = u * (-ratio if eighth else ratio)
            k += 1
            e = e + Fraction(1, (2 * k - 1) ** 2) - Fraction(1, 16 * k ** 2)

    # the inner sum grows toward its limit; each step multiplies it by at
    # most 1 + (16/15)/(2k+1)^2 since e_1 = 15/16
    def ratio_bound(k: int) -> Fraction:
        growth = 1 + Fraction(16, 15 * (2 * k + 1) ** 2)
        return Fraction(6 * k + 7, base * (6 * k + 1)) * growth

    return TermStream(
        name=name, first_index=1, make_terms=terms, ratio_hint=ratio_bound, zero=big(0, p)
    )


def _eq12_stream(p: int) -> TermStream:
    def terms() -> Iterator[BigReal]:
        w3 = big(Fraction(1, 8), p)  # W_k^3 at k = 1
        g = big(Fraction(-3, 4), p)  # sum_{i<=2k} (-1)^i / i^2 at k = 1
        k = 1
        while True:
            yield Fraction((-1) ** k * (4 * k + 1)) * w3 * g
            w3 = w3 * Fraction((2 * k + 1) ** 3, (2 * k + 2) ** 3)
            k += 1
            g = g - Fraction(1, (2 * k - 1) ** 2) + Fraction(1, (2 * k) ** 2)

    return TermStream(
        name="eq1.2", first_index=1, make_terms=terms, certificate=AlternatingCert(), zero=big(0, p)
    )


def _eq21_stream(p: int) -> TermStream:
    def terms() -> Iterator[BigReal]:
        v = big(Fraction(1, 24), p)  # (-1/2)_k^2 / (4^k k! (3/2)_k) at k = 1
        o = big(1, p)  # sum 1/(2i-1)^2 at k = 1
        k = 1
        while True:
            yield Fraction(6 * k - 1) * v * o
            v = v * Fraction((2 * k - 1) ** 2, 8 * (k + 1) * (2 * k + 3))
            k += 1
            o = o + Fraction(1, (2 * k - 1) ** 2)

    def ratio_bound(k: int) -> Fraction:
        growth = 1 + Fraction(1, (2 * k + 1) ** 2)
        return Fraction(6 * k + 5, 4 * (6 * k - 1)) * growth

    return TermStream(
        name="eq2.1", first_index=1, make_terms=terms, ratio_hint=ratio_bound, zero=big(0, p)
    )


def _eq23_stream(p: int) -> TermStream:
    def terms() -> Iterator[BigReal]:
        m = big(Fraction(-1, 32), p)  # (-1/2)_k (1/2)_k^3 / ((k+1)! k!^3) at k = 1
        g = big(Fraction(3, 4), p)  # sum_{i<=2k} (-1)^(i-1) / i^2 at k = 1
        k = 1
        while True:
            yield Fraction(4 * k + 1) * m * g
            m = m * Fraction((2 * k - 1) * (2 * k + 1) ** 3, 16 * (k + 2) * (k + 1) ** 3)
            k += 1
            g = g + Fraction(1, (2 * k - 1) ** 2) - Fraction(1, (2 * k) ** 2)

    # |t_k| = (4k+1) W_k^4 g_k / ((2k-1)(k+1)) <= 3 * eta(2) / (pi^2 k^3)
    # <= 0.25 / k^3, so the tail beyond K is below 0.125 / K^2
    return TermStream(
        name="eq2.3",
        first_index=1,
        make_terms=terms,
        certificate=AbsoluteTailCert(lambda K: Fraction(13, 100) * Fraction(1, K ** 2)),
        zero=big(0, p),
    )


def _eq24_stream(p: int) -> TermStream:
    def terms() -> Iterator[BigReal]:
        m = big(Fraction(-1, 128), p)  # (-1/2)_k (1/2)_k^2 (3/2)_k / (k!(k+1)!^2(k+2)!), k = 1
        h = big(Fraction(15, 16), p)  # sum 1/(2i-1)^2 - 1/(4(i+1)^2) at k = 1
        k = 1
        while True:
            yield Fraction(4 * k + 3) * m * h
            m = m * Fraction(
                (2 * k - 1) * (2 * k + 1) ** 2 * (2 * k + 3),
                16 * (k + 1) * (k + 2) ** 2 * (k + 3),
            )
            k += 1
            h = h + Fraction(1, (2 * k - 1) ** 2) - Fraction(1, 4 * (k + 1) ** 2)

    # |t_k| <= 4 * 1.08 / (pi^2 k^5) <= 0.44 / k^5; tail <= 0.11 / K^4
    return TermStream(
        name="eq2.4",
        first_index=1,
        make_terms=terms,
        certificate=AbsoluteTailCert(lambda K: Fraction(11, 100) * Fraction(1, K ** 4)),
        zero=big(0, p),
    )


def _eq25_stream(p: int) -> TermStream:
    def terms() -> Iterator[BigReal]:
        m = big(Fraction(3, 128), p)  # (3/2)_k (1/2)_k^3 / (k! (k+1)!^3) at k = 1
        h = big(Fraction(15, 16), p)
        k = 1
        while True:
            yield Fraction(4 * k + 3) * m * h
            m = m * Fraction((2 * k + 3) * (2 * k + 1) ** 3, 16 * (k + 1) * (k + 2) ** 3)
            k += 1
            h = h + Fraction(1, (2 * k - 1) ** 2) - Fraction(1, 4 * (k + 1) ** 2)

    # |t_k| <= 8 * 1.08 / (pi^2 k^3) <= 0.88 / k^3; tail <= 0.44 / K^2
    return TermStream(
        name="eq2.5",
        first_index=1,
        make_terms=terms,
        certificate=AbsoluteTailCert(lambda K: Fraction(44, 100) * Fraction(1, K ** 2)),
        zero=big(0, p),
    )


def _eq26_stream(p: int) -> TermStream:
    def terms() -> Iterator[BigReal]:
        m = big(Fraction(3, 32), p)  # (3/2)_k (1/2)_k^2 / (k! (k+1)!^2) at k = 1
        f = big(Fraction(-15, 4), p)  # sum 1/(1+i)^2 - 4/(2i-1)^2 at k = 1
        k = 1
        while True:
            yield Fraction((-1) ** k * (4 * k + 3)) * m * f
            m = m * Fraction((2 * k + 3) * (2 * k + 1) ** 2, 8 * (k + 1) * (k + 2) ** 2)
            k += 1
            f = f + Fraction(1, (k + 1) ** 2) - Fraction(4, (2 * k - 1) ** 2)

    return TermStream(
        name="eq2.6", first_index=1, make_terms=terms, certificate=AlternatingCert(), zero=big(0, p)
    )


def euler_zeta2_stream(precision_bits: Optional[int] = None) -> TermStream:
    """sum 1/i^2 with the integral tail bound sum_{j>K} 1/j^2 <= 1/K."""

    def terms():
        i = 1
        while True:
            if precision_bits is None:
                yield Fraction(1, i * i)
            else:
                yield big(Fraction(1, i * i), precision_bits)
            i += 1

    return TermStream(
        name="euler",
        first_index=1,
        make_terms=terms,
        certificate=AbsoluteTailCert(lambda K: Fraction(1, K)),
        zero=Fraction(0) if precision_bits is None else big(0, precision_bits),
    )


# -- classical right-hand sides -----------------------------------------


def _classical_rhs(identity_id: str, p: int) -> BigReal:
    pv = pi(p)
    if identity_id == "ramanujan":
        return 4 / pv
    if identity_id == "eq1.1a":
        return pv / 12
    if identity_id == "eq1.1b":
        return -big(2, p).sqrt() * pv / 48
    if identity_id == "eq1.2":
        return pv / 12
    if identity_id == "eq2.1":
        return pv ** 3 / 144
    if identity_id == "eq2.3":
        return Fraction(2, 3) - 8 / pv ** 2
    if identity_id == "eq2.4":
        return Fraction(32, 27) - 992 / (81 * pv ** 2)
    if identity_id == "eq2.5":
        return Fraction(8, 3) - 24 / pv ** 2
    if identity_id == "eq2.6":
        return 4 * pv / 3 - 8 / pv
    raise UnknownIdentityError(identity_id)


_CLASSICAL_STREAMS = {
    "ramanujan": _ramanujan_stream,
    "eq1.1a": lambda p: _wallis_weighted_stream("eq1.1a", p, eighth=False),
    "eq1.1b": lambda p: _wallis_weighted_stream("eq1.1b", p, eighth=True),
    "eq1.2": _eq12_stream,
    "eq2.1": _eq21_stream,
    "eq2.3": _eq23_stream,
    "eq2.4": _eq24_stream,
    "eq2.5": _eq25_stream,
    "eq2.6": _eq26_stream,
}


# -- q left-hand sides ---------------------------------------------------


def _eq13_stream(qp: QParams, p: int) -> TermStream:
    q = qp.q

    def terms() -> Iterator[BigReal]:
        qsq = q  # q^(k^2)
        b3 = ((1 - q) / (1 - q ** 2)) ** 3  # ((q;q^2)_k / (q^2;q^2)_k)^3
        e = -q + q ** 2 / q_integer(2, qp) ** 2
        k = 1
        while True:
            yield Fraction((-1) ** k) * qsq * q_integer(4 * k + 1, qp) * b3 * e
            qsq = qsq * q ** (2 * k + 1)
            k += 1
            b3 = b3 * ((1 - q ** (2 * k - 1)) / (1 - q ** (2 * k))) ** 3
            e = e - q ** (2 * k - 1) / q_integer(2 * k - 1, qp) ** 2
            e = e + q ** (2 * k) / q_integer(2 * k, qp) ** 2

    def ratio_bound(k: int):
        lead = q ** (2 * k + 1) / (1 - q ** (4 * k + 1))
        growth = 1 + q ** (2 * k + 1) / (q_integer(2 * k + 1, qp) ** 2 * (Fraction(3, 4) * q))
        return lead * growth

    return TermStream(
        name="eq1.3", first_index=1, make_terms=terms, ratio_hint=ratio_bound, zero=big(0, p)
    )


def _eq22_stream(qp: QParams, p: int) -> TermStream:
    q = qp.q

    def terms() -> Iterator[BigReal]:
        # ratio of the two mixed-base factor groups at k = 1
        num = (1 - q) ** 3 * (1 - q ** 2) / q ** 3
        den = (1 - q ** 4) * (1 - q ** 2) ** 2 * (1 - q ** 3)
        kernel = num / den
        qpow = q ** 4  # q^((k+1)^2)
        w = q - q ** 2 / q_integer(2, qp) ** 2
        k = 1
        while True:
            yield q_integer(6 * k - 1, qp) * kernel * qpow * w
            kernel = kernel * (
                (1 - q ** (2 * k - 1)) * (1 - q ** (2 * k + 1)) ** 2 * (1 - q ** (4 * k - 2))
            ) / ((1 - q ** (4 * k + 4)) * (1 - q ** (4 * k + 2)) ** 2 * (1 - q ** (2 * k + 3)))
            qpow = qpow * q ** (2 * k + 3)
            k += 1
            w = w + q ** (2 * k - 1) / q_integer(2 * k - 1, qp) ** 2
            w = w - q ** (4 * k - 2) / q_integer(4 * k - 2, qp) ** 2

    w1 = q - q ** 2 / q_integer(2, qp) ** 2

    def ratio_bound(k: int):
        lead = q ** (2 * k + 3) / (1 - q ** (6 * k - 1))
        den = (
            (1 - q ** (4 * k + 4)) * (1 - q ** (4 * k + 2)) ** 2 * (1 - q ** (2 * k + 3))
        )
        growth = 1 + q ** (2 * k + 1) / (q_integer(2 * k + 1, qp) ** 2 * w1)
        return lead / den * growth

    return TermStream(
        name="eq2.2", first_index=1, make_terms=terms, ratio_hint=ratio_bound, zero=big(0, p)
    )


def _q_right_tail_stream(
    ident: str,
    qp: QParams,
    p: int,
    weight_shift: int,
    num_exps,
    den_exps,
    qstep: int,
    inner_upshift: bool,
) -> TermStream:
    """Shared shape of the four q right-tail kernels.

    num_exps/den_exps name the k = 1 exponents of the base-q^2 factor
    groups; stepping k multiplies each factor exponent by q^2.  The inner
    sum adds q^(2i+2)/[2i+2]^2 - q^(2i-1)/[2i-1]^2 when inner_upshift is
    set, else q^(2i)/[2i]^2 - q^(2i-1)/[2i-1]^2.
    """
    q = qp.q

    def inner_delta(i: int):
        hi = 2 * i + 2 if inner_upshift else 2 * i
        return q ** hi / q_integer(hi, qp) ** 2 - q ** (2 * i - 1) / q_integer(2 * i - 1, qp) ** 2

    def terms() -> Iterator[BigReal]:
        kernel = big(1, p)
        for e in num_exps:
            kernel = kernel * (1 - q ** e)
        for e in den_exps:
            kernel = kernel / (1 - q ** e)
        qpow = q ** qstep
        s = inner_delta(1)
        k = 1
        while True:
            yield q_integer(4 * k + weight_shift, qp) * kernel * qpow * s
            kernel = kernel * _step_factor(q, k, num_exps, den_exps)
            qpow = qpow * q ** qstep
            k += 1
            s = s + inner_delta(k)

    s1_abs = abs(inner_delta(1))

    def ratio_bound(k: int):
        lead = q ** qstep / (1 - q ** (4 * k + weight_shift))
        den = big(1, p)
        for e in den_exps:
            den = den * (1 - q ** (e + 2 * k))
        growth = 1 + q ** (2 * k + 1) / (q_integer(2 * k + 1, qp) ** 2 * s1_abs)
        return lead / den * growth

    return TermStream(
        name=ident, first_index=1, make_terms=terms, ratio_hint=ratio_bound, zero=big(0, p)
    )


def _step_factor(q, k: int, num_exps, den_exps):
    factor = 1
    for e in num_exps:
        factor = factor * (1 - q ** (e + 2 * k))
    for e in den_exps:
        factor = factor / (1 - q ** (e + 2 * k))
    return factor


def _eq210_stream(qp: QParams, p: int) -> TermStream:
    q = qp.q

    def inner_delta(i: int):
        return (
            q ** (2 * i + 2) / q_integer(2 * i + 2, qp) ** 2
            - q ** (2 * i - 1) / q_integer(2 * i - 1, qp) ** 2
        )

    def terms() -> Iterator[BigReal]:
        # (q;q^2)_(k+1) (q;q^2)_k^2 / ((q^2;q^2)_k (q^4;q^2)_k^2) at k = 1
        kernel = (1 - q) ** 3 * (1 - q ** 3) / ((1 - q ** 2) * (1 - q ** 4) ** 2)
        qpow = 1 / q ** 5  # q^(-k(k+4))
        s = inner_delta(1)
        k = 1
        while True:
            t = Fraction((-1) ** k) * q_integer(4 * k + 3, qp) * kernel * qpow * s
            yield t
            kernel = kernel * (1 - q ** (2 * k + 1)) ** 2 * (1 - q ** (2 * k + 3)) / (
                (1 - q ** (2 * k + 2)) * (1 - q ** (2 * k + 4)) ** 2
            )
            qpow = qpow / q ** (2 * k + 5)
            k += 1
            s = s + inner_delta(k)

    # |t_(k+1)/t_k| >= q^(-(2k+5)) * const > 1: no certificate exists
    return TermStream(name="eq2.10", first_index=1, make_terms=terms, zero=big(0, p))


def _q_lhs_stream(identity_id: str, qp: QParams, p: int) -> TermStream:
    if identity_id == "eq1.3":
        return _eq13_stream(qp, p)
    if identity_id == "eq2.2":
        return _eq22_stream(qp, p)
    if identity_id == "eq2.7":
        # [4k+1] (q;q^2)_k^3 (q^-1;q^2)_k / ((q^2;q^2)_k^3 (q^4;q^2)_k) q^(2k)
        return _q_right_tail_stream(
            "eq2.7", qp, p, weight_shift=1,
            num_exps=[1, 1, 1, -1], den_exps=[2, 2, 2, 4], qstep=2, inner_upshift=False,
        )
    if identity_id == "eq2.8":
        # [4k+3] (q;q^2)_k^2 (q^3;q^2)_k (q^-1;q^2)_k /
        #        ((q^4;q^2)_k^2 (q^2;q^2)_k (q^6;q^2)_k) q^(4k)
        return _q_right_tail_stream(
            "eq2.8", qp, p, weight_shift=3,
            num_exps=[1, 1, 3, -1], den_exps=[4, 4, 2, 6], qstep=4, inner_upshift=True,
        )
    if identity_id == "eq2.9":
        # [4k+3] (q;q^2)_k^3 (q^3;q^2)_k / ((q^4;q^2)_k^3 (q^2;q^2)_k) q^(2k)
        return _q_right_tail_stream(
            "eq2.9", qp, p, weight_shift=3,
            num_exps=[1, 1, 1, 3], den_exps=[4, 4, 4, 2], qstep=2, inner_upshift=True,
        )
    if identity_id == "eq2.10":
        return _eq210_stream(qp, p)
    raise UnknownIdentityError(identity_id)


# -- q right-hand sides --------------------------------------------------

# (numerator exponents, denominator exponents) of the base-q^2 infinite
# products, plus whether a loose 1/(1-q) multiplies the prefix
_Q_RHS_PREFIX = {
    "eq1.3": ([1, 3], [2, 2], False),
    "eq2.2": (None, None, False),  # base q^4, handled separately
    "eq2.7": ([3, 3, 3, 1], [2, 2, 2, 4], False),
    "eq2.8": ([3, 3, 5, 5], [4, 4, 4, 6], True),
    "eq2.9": ([3, 3, 3, 3], [4, 4, 4, 2], True),
    "eq2.10": ([3, 3], [4, 4], False),
}


def _alternating_inner(qp: QParams, p: int, offset: int, start_sign: int, name: str) -> TermStream:
    # sum of start_sign * (-1)^(i+1) q^(i+offset) / [i+offset]^2
    q = qp.q

    def terms() -> Iterator[BigReal]:
        i = 1
        while True:
            t = q ** (i + offset) / q_integer(i + offset, qp) ** 2
            if (i % 2 == 0) == (start_sign > 0):
                t = -t
            yield t
            i += 1

    return TermStream(
        name=name, first_index=1, make_terms=terms, certificate=AlternatingCert(), zero=big(0, p)
    )


def _literal_inner(qp: QParams, p: int, offset: int, start_sign: int, spur_sign: int,
                   spur_qshift: int, spur_den_off: int, name: str) -> TermStream:
    # the as-printed inner sums: the alternating piece plus a small extra
    # term (1-q)-weighted; bounded by a geometric majorant with ratio q
    q = qp.q

    def piece(i: int):
        main = q ** (i + offset) / q_integer(i + offset, qp) ** 2
        if (i % 2 == 0) == (start_sign > 0):
            main = -main
        spur = (
            (1 - q) * q ** (4 * i + spur_qshift)
            / (2 * q_integer(2 * i + spur_den_off, qp) ** 2)
        )
        return main + Fraction(spur_sign) * spur

    def terms() -> Iterator[BigReal]:
        i = 1
        while True:
            yield piece(i)
            i += 1

    def majorant_tail(i: int):
        nxt = (
            q ** (i + 1 + offset) / q_integer(i + 1 + offset, qp) ** 2
            + (1 - q) * q ** (4 * i + 4 + spur_qshift)
            / (2 * q_integer(2 * i + 2 + spur_den_off, qp) ** 2)
        )
        return nxt / (1 - q)

    return TermStream(
        name=name,
        first_index=1,
        make_terms=terms,
        certificate=AbsoluteTailCert(majorant_tail),
        zero=big(0, p),
    )


def _positive_inner(qp: QParams, p: int, name: str) -> TermStream:
    # sum q^(2i+2) / [2i+2]^2
    q = qp.q

    def terms() -> Iterator[BigReal]:
        i = 1
        while True:
            yield q ** (2 * i + 2) / q_integer(2 * i + 2, qp) ** 2
            i += 1

    def tail(i: int):
        return q ** (2 * i + 4) / (q_integer(2 * i + 4, qp) ** 2 * (1 - q ** 2))

    return TermStream(
        name=name, first_index=1, make_terms=terms,
        certificate=AbsoluteTailCert(tail), zero=big(0, p),
    )


def _q_rhs_inner_stream(identity_id: str, variant: str, qp: QParams, p: int) -> TermStream:
    name = f"{identity_id}-rhs-{variant}"
    if identity_id == "eq1.3":
        q = qp.q

        def terms() -> Iterator[BigReal]:
            j = 1
            while True:
                yield q ** (2 * j) / q_integer(2 * j, qp) ** 2
                j += 1

        return TermStream(
            name=name, first_index=1, make_terms=terms,
            certificate=AbsoluteTailCert(
                lambda j: qp.q ** (2 * j + 2) / (q_integer(2 * j + 2, qp) ** 2 * (1 - qp.q ** 2))
            ),
            zero=big(0, p),
        )
    if identity_id == "eq2.2":
        q = qp.q

        def terms22() -> Iterator[BigReal]:
            i = 1
            while True:
                yield (
                    q ** (4 * i - 2) / q_integer(4 * i - 2, qp) ** 2
                    - q ** (4 * i) / q_integer(4 * i, qp) ** 2
                )
                i += 1

        return TermStream(
            name=name, first_index=1, make_terms=terms22,
            certificate=AbsoluteTailCert(
                lambda i: qp.q ** (4 * i + 2)
                / (q_integer(4 * i + 2, qp) ** 2 * (1 - qp.q ** 4))
            ),
            zero=big(0, p),
        )
    if identity_id == "eq2.10":
        return _positive_inner(qp, p, name)
    shapes = {
        # offset, sign at i = 1, extra-term sign, q-shift, [..] offset
        "eq2.7": (1, +1, -1, 1, 1),
        "eq2.8": (3, +1, -1, 5, 3),
        "eq2.9": (2, -1, +1, 2, 1),
    }
    offset, start_sign, spur_sign, spur_qshift, spur_den_off = shapes[identity_id]
    if variant == "corrected":
        return _alternating_inner(qp, p, offset, start_sign, name)
    return _literal_inner(
        qp, p, offset, start_sign, spur_sign, spur_qshift, spur_den_off, name
    )


def eval_q_rhs(
    identity_id: str,
    qp: QParams,
    p: int,
    tol,
    max_terms: int,
    variant: str = "corrected",
) -> SumResult:
    """Prefix product times inner sum, with one combined absolute bound."""
    num, den, one_minus_q_inv = _Q_RHS_PREFIX[identity_id]
    q = qp.q
    share = tol * Fraction(1, 4)
    if identity_id == "eq2.2":
        qp4 = qp.derived(4)
        prefix = multi_q_pochhammer_inf([q, q ** 4, q ** 4], qp4, share)
        prefix_den = multi_q_pochhammer_inf([q ** 5, q ** 2, q ** 2], qp4, share)
    else:
        qp2 = qp.derived(2)
        prefix = multi_q_pochhammer_inf([q ** e for e in num], qp2, share)
        prefix_den = multi_q_pochhammer_inf([q ** e for e in den], qp2, share)
    value = prefix.value / prefix_den.value
    # relative error of a quotient of two bounded factors
    rel = (1 + prefix.bound) / (1 - prefix_den.bound) - 1
    if one_minus_q_inv:
        value = value / (1 - q)
    inner = sum_adaptive(
        _q_rhs_inner_stream(identity_id, variant, qp, p), tol * Fraction(1, 4), max_terms
    )
    combined = abs(value) * (abs(inner.value) * rel + inner.tail_bound * (1 + rel))
    return SumResult(
        value=value * inner.value,
        terms_used=inner.terms_used + prefix.factors_used + prefix_den.factors_used,
        tail_bound=combined,
        terminated=False,
    )


CLASSICAL_IDS = tuple(sorted(_CLASSICAL_STREAMS))
Q_IDS = ("eq1.3", "eq2.2", "eq2.7", "eq2.8", "eq2.9", "eq2.10")


def lhs_stream(identity_id: str, precision_bits: int, q: Optional[Fraction] = None) -> TermStream:
    """The left-hand side as a TermStream."""
    if identity_id in _CLASSICAL_STREAMS:
        return _CLASSICAL_STREAMS[identity_id](precision_bits)
    if identity_id in Q_IDS:
        if q is None:
            raise MissingParameterError(f"identity {identity_id} needs q")
        qp = QParams(big(q, precision_bits)) if not isinstance(q, BigReal) else QParams(q)
        return _q_lhs_stream(identity_id, qp, precision_bits)
    raise UnknownIdentityError(identity_id)


def eval_identity_series(
    identity_id: str,
    *,
    precision_bits: int = 192,
    tol=DEFAULT_TOL,
    max_terms: int = 20000,
    q: Optional[Fraction] = None,
    rhs_variant: str = "corrected",
):
    """Evaluate both sides; returns (lhs SumResult, rhs SumResult).

    Raises NonConvergence if either side cannot certify its tolerance.
    """
    p = precision_bits
    half = tol * Fraction(1, 2)
    if identity_id in _CLASSICAL_STREAMS:
        lhs = sum_adaptive(lhs_stream(identity_id, p), half, max_terms)
        rhs_value = _classical_rhs(identity_id, p)
        rhs = SumResult(value=rhs_value, terms_used=0, tail_bound=big(0, p), terminated=True)
        return lhs, rhs
    if identity_id in Q_IDS:
        if q is None:
            raise MissingParameterError(f"identity {identity_id} needs q")
        qbig = big(q, p) if not isinstance(q, BigReal) else q
        qp = QParams(qbig)
        lhs = sum_adaptive(_q_lhs_stream(identity_id, qp, p), half, max_terms)
        rhs = eval_q_rhs(identity_id, qp, p, half, max_terms, variant=rhs_variant)
        return lhs, rhs
    raise UnknownIdentityError(identity_id)
