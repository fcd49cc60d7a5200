"""Terminating summation identities, evaluated exactly.

Every evaluator returns the pair (lhs, rhs).  All arithmetic is generic:
Fraction arguments give exact rational values, BigReal arguments carry
their precision through, and the parameter b may be a Jet2 to
differentiate a base identity in place.

Evaluators come in base/weighted pairs.  The weighted forms insert the
derivative coefficients of `qpi.harmonics`: weight A_k against B_n after
one derivative in b, weight A_k^2 + C_k against B_n^2 + D_n after two.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import BalanceError, PoleError
from ..harmonics import ABCDArgs, coeff_A, coeff_B, coeff_C, coeff_D
from ..numerics import BigReal, Jet2
from ..qkernel import QParams


def _value_of(x):
    return x.v if isinstance(x, Jet2) else x


def _check_den(value, label: str):
    if _value_of(value) == 0:
        raise PoleError(f"denominator factor {label} vanishes")
    return value


def _one_like(x):
    return x * 0 + 1


def _as_qparams(q) -> QParams:
    return q if isinstance(q, QParams) else QParams(q)


def _poch_ratio_terms(uppers, lowers, n: int):
    """Yield T_0 .. T_n for prod_u (u)_k / prod_l (l)_k.

    lowers is a list of (value, label) pairs so a vanishing factor can be
    named.
    """
    t = _one_like(uppers[0])
    yield t
    for k in range(1, n + 1):
        for u in uppers:
            t = t * (u + (k - 1))
        for value, label in lowers:
            t = t / _check_den(value + (k - 1), f"({label}) + {k - 1}")
        yield t


def _poch_product_ratio(uppers, lowers, n: int):
    """prod_u (u)_n / prod_l (l)_n with named pole checks."""
    num = _one_like(uppers[0])
    for u in uppers:
        for i in range(n):
            num = num * (u + i)
    for value, label in lowers:
        for i in range(n):
            num = num / _check_den(value + i, f"({label}) + {i}")
    return num


def _q_ratio_terms(groups, qp: QParams, n: int, lead_exp: int, a):
    """Yield T_0 .. T_n for a very well poised q-kernel.

    groups is a list of (base_qp, uppers, lowers-with-labels); each factor
    group advances by one q-Pochhammer step per k.  The yielded term
    includes the leading (1 - a q^(lead_exp * k)) / (1 - a) factor and the
    q^k weight; lead_exp = 0 drops the leading factor.
    """
    q = qp.q
    one = _one_like(q)
    _check_den(1 - a, "1 - a")
    powers = [_one_like(g[0].q) for g in groups]
    ratio = one
    qk = _one_like(q)
    lead_pow = _one_like(q)
    yield one
    for k in range(1, n + 1):
        for gi, (gqp, uppers, lowers) in enumerate(groups):
            p = powers[gi]  # base^(k-1)
            for u in uppers:
                ratio = ratio * (1 - u * p)
            for value, label in lowers:
                ratio = ratio / _check_den(1 - value * p, f"1 - ({label}) * base^{k - 1}")
            powers[gi] = p * gqp.q
        qk = qk * q
        if lead_exp:
            for _ in range(lead_exp):
                lead_pow = lead_pow * q
            lead = (1 - a * lead_pow) / (1 - a)
        else:
            lead = one
        yield lead * ratio * qk


def _q_poch_product_ratio(uppers, lowers, qp: QParams, n: int):
    """prod_u (u; q)_n / prod_l (l; q)_n with named pole checks."""
    q = qp.q
    result = _one_like(q)
    for u in uppers:
        p = _one_like(q)
        for _ in range(n):
            result = result * (1 - u * p)
            p = p * q
    for value, label in lowers:
        p = _one_like(q)
        for i in range(n):
            result = result / _check_den(1 - value * p, f"1 - ({label}) q^{i}")
            p = p * q
    return result


def _balance_ok(x, y) -> bool:
    if isinstance(x, BigReal) or isinstance(y, BigReal):
        bits = min(
            v.precision_bits for v in (x, y) if isinstance(v, BigReal)
        )
        gap = abs(x - y)
        scale = max(abs(x), abs(y), 1)
        return gap <= scale * Fraction(2) ** (16 - bits)
    return x == y


# classical kernel: the factor lists of the 7F6 summation


def _classical_factors(a, b, c, n: int):
    uppers = [a, 1 + a * Fraction(1, 3), b, 1 - b, c, Fraction(1, 2) + a - c + n, -n]
    lowers = [
        (1, "1"),
        (a * Fraction(1, 3), "a/3"),
        ((2 + a - b) / 2, "(2+a-b)/2"),
        ((1 + a + b) / 2, "(1+a+b)/2"),
        (1 + a + 2 * n, "1+a+2n"),
        (1 + a - 2 * c, "1+a-2c"),
        (2 * c - a - 2 * n, "2c-a-2n"),
    ]
    return uppers, lowers


def _classical_rhs_factors(a, b, c):
    uppers = [(1 + a) / 2, 1 + a / 2, (1 + a + b) / 2 - c, 1 + (a - b) / 2 - c]
    lowers = [
        ((1 + a + b) / 2, "(1+a+b)/2"),
        (1 + (a - b) / 2, "1+(a-b)/2"),
        ((1 + a) / 2 - c, "(1+a)/2-c"),
        (1 + a / 2 - c, "1+a/2-c"),
    ]
    return uppers, lowers


def eval_7F6_lhs(a, b, c, n: int):
    uppers, lowers = _classical_factors(a, b, c, n)
    total = None
    for t in _poch_ratio_terms(uppers, lowers, n):
        total = t if total is None else total + t
    return total


def eval_7F6_rhs(a, b, c, n: int):
    uppers, lowers = _classical_rhs_factors(a, b, c)
    return _poch_product_ratio(uppers, lowers, n)


def _eval_classical_weighted(a, b, c, n: int, second: bool):
    uppers, lowers = _classical_factors(a, b, c, n)
    total = None
    for k, t in enumerate(_poch_ratio_terms(uppers, lowers, n)):
        if k == 0:
            total = t * 0
            continue
        args = ABCDArgs(flavor="classical", a=a, b=b, c=c, count=k)
        w = coeff_A(args) ** 2 + coeff_C(args) if second else coeff_A(args)
        total = total + t * w
    rhs_u, rhs_l = _classical_rhs_factors(a, b, c)
    prefix = _poch_product_ratio(rhs_u, rhs_l, n)
    args_n = ABCDArgs(flavor="classical", a=a, b=b, c=c, count=n)
    wn = (
        coeff_B(args_n) ** 2 + coeff_D(args_n) if second else coeff_B(args_n)
    )
    return total, prefix * wn


def eval_eq32(a, b, c, n: int):
    """One derivative in b: kernel weighted by A_k against prefix * B_n."""
    return _eval_classical_weighted(a, b, c, n, second=False)


def eval_eq33(a, b, c, n: int):
    """Two derivatives in b: weights A_k^2 + C_k against B_n^2 + D_n."""
    return _eval_classical_weighted(a, b, c, n, second=True)


# quadratic q-kernel: factors in bases q and q^2


def _quadratic_groups(a, b, c, n: int, qp: QParams):
    q = qp.q
    qp2 = qp.derived(2)
    q2 = qp2.q
    g_linear = (
        qp,
        [a, b, q / b],
        [
            (a * q ** (2 * n + 1), "a q^(2n+1)"),
            (a * q / c ** 2, "a q/c^2"),
            (c ** 2 / (a * q ** (2 * n)), "c^2 q^(-2n)/a"),
        ],
    )
    g_quad = (
        qp2,
        [1 / (q2 ** n), c ** 2, a ** 2 * q ** (2 * n + 1) / c ** 2],
        [
            (q2, "q^2"),
            (a * q2 / b, "a q^2/b"),
            (a * b * q, "a b q"),
        ],
    )
    return [g_linear, g_quad]


def _quadratic_rhs(a, b, c, n: int, qp: QParams):
    qp2 = qp.derived(2)
    q = qp.q
    uppers = [a * q, a * q ** 2, a * q ** 2 / (b * c ** 2), a * b * q / c ** 2]
    lowers = [
        (a * q / c ** 2, "a q/c^2"),
        (a * q ** 2 / c ** 2, "a q^2/c^2"),
        (a * q ** 2 / b, "a q^2/b"),
        (a * b * q, "a b q"),
    ]
    return _q_poch_product_ratio(uppers, lowers, qp2, n)


def eval_quadratic_truncated(a, b, c, n: int, q):
    """Base quadratic summation, truncated at n."""
    qp = _as_qparams(q)
    groups = _quadratic_groups(a, b, c, n, qp)
    total = None
    for t in _q_ratio_terms(groups, qp, n, lead_exp=3, a=a):
        total = t if total is None else total + t
    return total, _quadratic_rhs(a, b, c, n, qp)


def eval_eq42(a, b, c, n: int, q):
    """Quadratic summation after two derivatives in b."""
    qp = _as_qparams(q)
    groups = _quadratic_groups(a, b, c, n, qp)
    total = None
    for k, t in enumerate(_q_ratio_terms(groups, qp, n, lead_exp=3, a=a)):
        if k == 0:
            total = t * 0
            continue
        args = ABCDArgs(flavor="q_quadratic", a=a, b=b, c=c, count=k, qp=qp)
        total = total + t * (coeff_A(args) ** 2 + coeff_C(args))
    args_n = ABCDArgs(flavor="q_quadratic", a=a, b=b, c=c, count=n, qp=qp)
    rhs = _quadratic_rhs(a, b, c, n, qp) * (coeff_B(args_n) ** 2 + coeff_D(args_n))
    return total, rhs


# linear q-kernel: Jackson's terminating sum and its derivatives


def _linear_groups(a, b, c, n: int, qp: QParams):
    q = qp.q
    return [
        (
            qp,
            [a, b, c, q / b, a ** 2 * q ** n / c, 1 / (q ** n)],
            [
                (q, "q"),
                (a * q / b, "a q/b"),
                (a * q / c, "a q/c"),
                (a * b, "a b"),
                (c * q ** (1 - n) / a, "c q^(1-n)/a"),
                (a * q ** (n + 1), "a q^(n+1)"),
            ],
        )
    ]


def _linear_rhs(a, b, c, n: int, qp: QParams):
    uppers = [a * qp.q, a * qp.q / (b * c), a, a * b / c]
    lowers = [
        (a * qp.q / b, "a q/b"),
        (a * qp.q / c, "a q/c"),
        (a * b, "a b"),
        (a / c, "a/c"),
    ]
    return _q_poch_product_ratio(uppers, lowers, qp, n)


def eval_lemma51_base(a, b, c, n: int, q):
    """Base linear summation, the d -> q/b, e -> a^2 q^n / c special case."""
    qp = _as_qparams(q)
    groups = _linear_groups(a, b, c, n, qp)
    total = None
    for t in _q_ratio_terms(groups, qp, n, lead_exp=2, a=a):
        total = t if total is None else total + t
    return total, _linear_rhs(a, b, c, n, qp)


def eval_lemma51(a, b, c, n: int, q):
    """Linear summation after two derivatives in b."""
    qp = _as_qparams(q)
    groups = _linear_groups(a, b, c, n, qp)
    total = None
    for k, t in enumerate(_q_ratio_terms(groups, qp, n, lead_exp=2, a=a)):
        if k == 0:
            total = t * 0
            continue
        args = ABCDArgs(flavor="q_linear", a=a, b=b, c=c, count=k, qp=qp)
        total = total + t * (coeff_A(args) ** 2 + coeff_C(args))
    args_n = ABCDArgs(flavor="q_linear", a=a, b=b, c=c, count=n, qp=qp)
    rhs = _linear_rhs(a, b, c, n, qp) * (coeff_B(args_n) ** 2 + coeff_D(args_n))
    return total, rhs


def eval_jackson(a, b, c, d, e, n: int, q):
    """Terminating very well poised 8phi7 summation.

    Requires the balance q^(n+1) a^2 = b c d e.
    """
    qp = _as_qparams(q)
    qq = qp.q
    if not _balance_ok(qq ** (n + 1) * a ** 2, b * c * d * e):
        raise BalanceError(
            "eval_jackson needs q^(n+1) a^2 = b c d e; "
            f"got {qq ** (n + 1) * a ** 2!r} vs {b * c * d * e!r}"
        )
    groups = [
        (
            qp,
            [a, b, c, d, e, 1 / (qq ** n)],
            [
                (qq, "q"),
                (a * qq / b, "a q/b"),
                (a * qq / c, "a q/c"),
                (a * qq / d, "a q/d"),
                (a * qq / e, "a q/e"),
                (a * qq ** (n + 1), "a q^(n+1)"),
            ],
        )
    ]
    total = None
    for t in _q_ratio_terms(groups, qp, n, lead_exp=2, a=a):
        total = t if total is None else total + t
    uppers = [a * qq, a * qq / (b * c), a * qq / (b * d), a * qq / (c * d)]
    lowers = [
        (a * qq / b, "a q/b"),
        (a * qq / c, "a q/c"),
        (a * qq / d, "a q/d"),
        (a * qq / (b * c * d), "a q/(b c d)"),
    ]
    return total, _q_poch_product_ratio(uppers, lowers, qp, n)


def eval_dougall(a, b, c, d, e, n: int):
    """Terminating 2-balanced classical summation.

    Requires e = 1 + 2a - b - c - d + n.
    """
    if not _balance_ok(e, 1 + 2 * a - b - c - d + n):
        raise BalanceError(
            "eval_dougall needs e = 1 + 2a - b - c - d + n; "
            f"got e = {e!r} with balance value {1 + 2 * a - b - c - d + n!r}"
        )
    uppers = [a, 1 + a / 2, b, c, d, e, -n]
    lowers = [
        (1, "1"),
        (a / 2, "a/2"),
        (1 + a - b, "1+a-b"),
        (1 + a - c, "1+a-c"),
        (1 + a - d, "1+a-d"),
        (1 + a - e, "1+a-e"),
        (1 + a + n, "1+a+n"),
    ]
    total = None
    for t in _poch_ratio_terms(uppers, lowers, n):
        total = t if total is None else total + t
    rhs_u = [1 + a, 1 + a - b - c, 1 + a - b - d, 1 + a - c - d]
    rhs_l = [
        (1 + a - b, "1+a-b"),
        (1 + a - c, "1+a-c"),
        (1 + a - d, "1+a-d"),
        (1 + a - b - c - d, "1+a-b-c-d"),
    ]
    return total, _poch_product_ratio(rhs_u, rhs_l, n)
