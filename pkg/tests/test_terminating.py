"""Exact checks of the terminating summations in rational arithmetic."""

import random
from fractions import Fraction

import pytest

from qpi.errors import BalanceError, PoleError
from qpi.numerics import Jet2
from qpi.series import terminating as T


def rising(x, n):
    out = Fraction(1)
    for i in range(n):
        out *= x + i
    return out


def hsum(k, x, m=1):
    return sum(Fraction(1, (x + i) ** m) for i in range(1, k + 1))


def test_7F6_frozen_value():
    a, b, c = Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)
    lhs = T.eval_7F6_lhs(a, b, c, 1)
    assert lhs == Fraction(150, 143)
    assert lhs == T.eval_7F6_rhs(a, b, c, 1)


def test_7F6_against_direct_summation():
    # independent oracle: the series summed straight from its factor list
    a, b, c, n = Fraction(2, 3), Fraction(1, 5), Fraction(3, 7), 3
    uppers = [a, 1 + a / 3, b, 1 - b, c, Fraction(1, 2) + a - c + n, -n]
    lowers = [1, a / 3, (2 + a - b) / 2, (1 + a + b) / 2, 1 + a + 2 * n, 1 + a - 2 * c,
              2 * c - a - 2 * n]
    total = Fraction(0)
    for k in range(n + 1):
        num = Fraction(1)
        for u in uppers:
            num *= rising(u, k)
        den = Fraction(1)
        for w in lowers:
            den *= rising(w, k)
        total += num / den
    assert T.eval_7F6_lhs(a, b, c, n) == total
    assert T.eval_7F6_rhs(a, b, c, n) == total


def test_eq32_against_direct_summation():
    # rebuild the A-weighted sum from scratch: A_k as printed, terms as
    # explicit Pochhammer ratios
    a, b, c, n = Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), 2
    uppers = [a, 1 + a / 3, b, 1 - b, c, Fraction(1, 2) + a - c + n, -n]
    lowers = [1, a / 3, (2 + a - b) / 2, (1 + a + b) / 2, 1 + a + 2 * n, 1 + a - 2 * c,
              2 * c - a - 2 * n]
    lhs = Fraction(0)
    for k in range(1, n + 1):
        t = Fraction(1)
        for u in uppers:
            t *= rising(u, k)
        for w in lowers:
            t /= rising(w, k)
        A = (hsum(k, b - 1) - hsum(k, -b)
             + Fraction(1, 2) * hsum(k, (a - b) / 2)
             - Fraction(1, 2) * hsum(k, (a + b - 1) / 2))
        lhs += t * A
    got_lhs, got_rhs = T.eval_eq32(a, b, c, n)
    assert got_lhs == lhs
    assert got_lhs == got_rhs
    assert got_lhs == Fraction(1501983, 19668220)


def test_eq33_frozen_value():
    a, b, c = Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)
    lhs, rhs = T.eval_eq33(a, b, c, 1)
    assert lhs == rhs == Fraction(-1250235, 2924207)


def test_quadratic_truncated_frozen_value():
    q = Fraction(1, 4)
    a, b, c = Fraction(1, 2), Fraction(2, 3), Fraction(3, 5)
    lhs, rhs = T.eval_quadratic_truncated(a, b, c, 2, q)
    assert lhs == rhs == Fraction(16912965575131119, 15499591206450479)


def test_eq42_frozen_value():
    q = Fraction(1, 4)
    a, b, c = Fraction(1, 2), Fraction(2, 3), Fraction(3, 5)
    lhs, rhs = T.eval_eq42(a, b, c, 1, q)
    assert lhs == rhs == Fraction(-2664122922720, 3734402859671)


def test_lemma51_frozen_values():
    q = Fraction(1, 4)
    a, b, c = Fraction(1, 2), Fraction(2, 3), Fraction(3, 5)
    base_lhs, base_rhs = T.eval_lemma51_base(a, b, c, 1, q)
    assert base_lhs == base_rhs == Fraction(462, 247)
    lhs, rhs = T.eval_lemma51(a, b, c, 1, q)
    assert lhs == rhs == Fraction(-2299941, 333944)


def test_jackson_frozen_value():
    q = Fraction(1, 4)
    a, b, c, d = Fraction(1, 2), Fraction(2, 3), Fraction(3, 5), Fraction(5, 2)
    e = a * a * q ** 2 / (b * c * d)
    lhs, rhs = T.eval_jackson(a, b, c, d, e, 1, q)
    assert lhs == rhs == Fraction(4477, 4693)


def _random_point(rng, n_min=0):
    def frac():
        num = rng.choice([-3, -2, -1, 1, 2, 3, 4, 5])
        den = rng.choice([2, 3, 5, 7, 11])
        return Fraction(num, den)

    return frac(), frac(), frac(), rng.randrange(n_min, 5)


def test_classical_identities_hold_at_random_points():
    rng = random.Random(9)
    checked = 0
    while checked < 8:
        a, b, c, n = _random_point(rng)
        try:
            assert T.eval_7F6_lhs(a, b, c, n) == T.eval_7F6_rhs(a, b, c, n)
            for ev in (T.eval_eq32, T.eval_eq33):
                lhs, rhs = ev(a, b, c, n)
                assert lhs == rhs
            d = a + b + 1
            e = 1 + 2 * a - b - c - d + n
            lhs, rhs = T.eval_dougall(a, b, c, d, e, n)
            assert lhs == rhs
        except (PoleError, ZeroDivisionError):
            continue
        checked += 1


def test_q_identities_hold_at_random_points():
    rng = random.Random(10)
    checked = 0
    while checked < 8:
        a, b, c, n = _random_point(rng)
        q = Fraction(rng.randrange(1, 5), rng.randrange(5, 9))
        if not 0 < q < 1:
            continue
        try:
            for ev in (T.eval_quadratic_truncated, T.eval_eq42,
                       T.eval_lemma51_base, T.eval_lemma51):
                lhs, rhs = ev(a, b, c, n, q)
                assert lhs == rhs
            d = rng.choice([Fraction(5, 2), Fraction(3, 7), Fraction(-2, 3)])
            e = a * a * q ** (n + 1) / (b * c * d)
            lhs, rhs = T.eval_jackson(a, b, c, d, e, n, q)
            assert lhs == rhs
        except (PoleError, ZeroDivisionError):
            continue
        checked += 1


def test_n_zero_is_trivial():
    a, b, c = Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)
    q = Fraction(1, 3)
    assert T.eval_7F6_lhs(a, b, c, 0) == T.eval_7F6_rhs(a, b, c, 0) == 1
    assert T.eval_eq32(a, b, c, 0) == (0, 0)
    assert T.eval_eq33(a, b, c, 0) == (0, 0)
    lhs, rhs = T.eval_quadratic_truncated(a, b, c, 0, q)
    assert lhs == rhs == 1
    assert T.eval_eq42(a, b, c, 0, q) == (0, 0)
    lhs, rhs = T.eval_lemma51_base(a, b, c, 0, q)
    assert lhs == rhs == 1
    assert T.eval_lemma51(a, b, c, 0, q) == (0, 0)
    e = a * a * q / (b * c * Fraction(5, 2))
    lhs, rhs = T.eval_jackson(a, b, c, Fraction(5, 2), e, 0, q)
    assert lhs == rhs == 1
    e = 1 + 2 * a - b - c - Fraction(1, 5)
    lhs, rhs = T.eval_dougall(a, b, c, Fraction(1, 5), e, 0)
    assert lhs == rhs == 1


def test_jackson_balance_enforced():
    with pytest.raises(BalanceError, match="q\\^\\(n\\+1\\) a\\^2"):
        T.eval_jackson(Fraction(1, 2), Fraction(1, 3), Fraction(1, 4),
                       Fraction(1, 5), Fraction(1, 7), 2, Fraction(1, 3))


def test_dougall_balance_enforced():
    with pytest.raises(BalanceError, match="1 \\+ 2a - b - c - d \\+ n"):
        T.eval_dougall(Fraction(1, 2), Fraction(1, 3), Fraction(1, 4),
                       Fraction(1, 5), Fraction(1, 7), 2)


def test_lemma51_base_is_substituted_jackson():
    # d -> q/b, e -> a^2 q^n / c turns the balanced summation into the
    # lemma's base identity; the balance condition holds automatically
    rng = random.Random(11)
    checked = 0
    while checked < 5:
        a, b, c, n = _random_point(rng)
        q = Fraction(rng.randrange(1, 4), rng.randrange(4, 8))
        if not 0 < q < 1:
            continue
        try:
            base = T.eval_lemma51_base(a, b, c, n, q)
            sub = T.eval_jackson(a, b, c, q / b, a * a * q ** n / c, n, q)
        except (PoleError, ZeroDivisionError):
            continue
        assert base == sub
        checked += 1


def test_vanishing_denominator_reported():
    # b = a + 2 zeroes the ((2+a-b)/2)_k factor
    with pytest.raises(PoleError, match="denominator factor"):
        T.eval_7F6_lhs(Fraction(1, 2), Fraction(5, 2), Fraction(1, 4), 2)
    # b = q is a pole of the quadratic-flavor coefficients
    with pytest.raises(PoleError, match="coefficient pole"):
        T.eval_eq42(Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), 1, Fraction(1, 3))


def _jet_pair(ev, a, b, c, n, *rest):
    jb = Jet2.variable(b)
    return ev(a, jb, c, n, *rest)


def test_jet_matches_first_derivative_display():
    rng = random.Random(12)
    checked = 0
    while checked < 6:
        a, b, c, n = _random_point(rng, n_min=1)
        try:
            jl = _jet_pair(T.eval_7F6_lhs, a, b, c, n)
            jr = _jet_pair(T.eval_7F6_rhs, a, b, c, n)
            wl, wr = T.eval_eq32(a, b, c, n)
        except (PoleError, ZeroDivisionError):
            continue
        assert jl.d1 == wl
        assert jr.d1 == wr
        checked += 1


def test_jet_matches_second_derivative_display():
    rng = random.Random(13)
    checked = 0
    while checked < 6:
        a, b, c, n = _random_point(rng, n_min=1)
        try:
            jl = _jet_pair(T.eval_7F6_lhs, a, b, c, n)
            jr = _jet_pair(T.eval_7F6_rhs, a, b, c, n)
            wl, wr = T.eval_eq33(a, b, c, n)
        except (PoleError, ZeroDivisionError):
            continue
        assert jl.d2 == wl
        assert jr.d2 == wr
        checked += 1


def test_jet_matches_quadratic_display():
    rng = random.Random(14)
    checked = 0
    while checked < 6:
        a, b, c, n = _random_point(rng, n_min=1)
        q = Fraction(rng.randrange(1, 4), rng.randrange(4, 8))
        if not 0 < q < 1:
            continue
        try:
            jl = _jet_pair(T.eval_quadratic_truncated, a, b, c, n, q)
            wl, wr = T.eval_eq42(a, b, c, n, q)
        except (PoleError, ZeroDivisionError):
            continue
        assert (jl[0].d2, jl[1].d2) == (wl, wr)
        checked += 1


def test_jet_matches_linear_display():
    rng = random.Random(15)
    checked = 0
    while checked < 6:
        a, b, c, n = _random_point(rng, n_min=1)
        q = Fraction(rng.randrange(1, 4), rng.randrange(4, 8))
        if not 0 < q < 1:
            continue
        try:
            jl = _jet_pair(T.eval_lemma51_base, a, b, c, n, q)
            wl, wr = T.eval_lemma51(a, b, c, n, q)
        except (PoleError, ZeroDivisionError):
            continue
        assert (jl[0].d2, jl[1].d2) == (wl, wr)
        checked += 1
