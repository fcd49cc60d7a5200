from fractions import Fraction

import pytest

from qpi.errors import NonConvergence
from qpi.numerics import big
from qpi.series.engine import (
    AbsoluteTailCert,
    AlternatingCert,
    GeometricCert,
    SumResult,
    TermStream,
    sum_adaptive,
)


def geometric_stream(ratio: Fraction) -> TermStream:
    def terms():
        t = Fraction(1)
        while True:
            yield t
            t *= ratio

    return TermStream(
        name="geometric",
        first_index=0,
        make_terms=terms,
        ratio_hint=lambda k: ratio,
    )


def zero_stream() -> TermStream:
    def terms():
        for _ in range(3):
            yield Fraction(0)

    return TermStream(name="zeros", first_index=0, make_terms=terms, terminates_at=2)


class TestSumAdaptive:
    def test_geometric_value_and_bound(self):
        res = sum_adaptive(geometric_stream(Fraction(1, 2)), Fraction(1, 10 ** 12))
        exact = Fraction(2)
        assert abs(res.value - exact) <= res.tail_bound
        assert res.tail_bound <= Fraction(2, 10 ** 12)
        assert not res.terminated

    def test_zero_stream_terminates(self):
        res = sum_adaptive(zero_stream(), Fraction(1, 100))
        assert res == SumResult(Fraction(0), 3, Fraction(0), True)

    def test_terminating_stream_is_summed_exactly(self):
        def terms():
            yield from (Fraction(5), Fraction(-3), Fraction(1, 7))

        stream = TermStream(name="finite", first_index=1, make_terms=terms, terminates_at=3)
        res = sum_adaptive(stream, Fraction(1, 10 ** 30))
        assert res.value == Fraction(5) - 3 + Fraction(1, 7)
        assert res.tail_bound == 0 and res.terminated

    def test_tolerance_monotonicity(self):
        # x10 tolerance never costs more terms
        used = [
            sum_adaptive(geometric_stream(Fraction(3, 4)), Fraction(1, 10 ** d)).terms_used
            for d in (6, 9, 12, 15)
        ]
        assert used == sorted(used)

    def test_max_terms_exhaustion(self):
        def slow():
            k = 1
            while True:
                yield Fraction(1, k)
                k += 1

        stream = TermStream(
            name="harmonic", first_index=1, make_terms=slow, ratio_hint=lambda k: None
        )
        with pytest.raises(NonConvergence) as err:
            sum_adaptive(stream, Fraction(1, 1000), max_terms=500)
        assert err.value.diagnostics["terms_used"] == 500
        assert err.value.diagnostics["ratio_estimate"] is not None

    def test_no_certificate_never_converges_silently(self):
        def terms():
            t = Fraction(1)
            while True:
                yield t
                t /= 3

        stream = TermStream(name="uncertified", first_index=0, make_terms=terms)
        with pytest.raises(NonConvergence):
            sum_adaptive(stream, Fraction(1, 10 ** 6), max_terms=200)

    def test_ratio_at_least_one_gives_no_bound(self):
        stream = geometric_stream(Fraction(1, 2))
        stream.certificate = GeometricCert(lambda k: Fraction(1))
        with pytest.raises(NonConvergence):
            sum_adaptive(stream, Fraction(1, 10 ** 6), max_terms=300)

    def test_divergence_is_cut_short(self):
        def terms():
            t = Fraction(1)
            while True:
                yield t
                t *= 4

        stream = TermStream(name="doubling", first_index=0, make_terms=terms)
        with pytest.raises(NonConvergence, match="increase without bound") as err:
            sum_adaptive(stream, Fraction(1, 100), max_terms=20000)
        assert err.value.diagnostics["terms_used"] < 1000

    def test_exhausting_iterator_without_termination_marker(self):
        def terms():
            yield Fraction(1)

        stream = TermStream(name="truncated", first_index=0, make_terms=terms)
        with pytest.raises(NonConvergence, match="without declaring termination"):
            sum_adaptive(stream, Fraction(1, 100))


class TestCertificates:
    def test_absolute_tail_cert(self):
        # sum 1/j^2 from j > k is below 1/k
        def terms():
            j = 1
            while True:
                yield Fraction(1, j * j)
                j += 1

        stream = TermStream(
            name="zeta2",
            first_index=1,
            make_terms=terms,
            certificate=AbsoluteTailCert(lambda k: Fraction(1, k)),
        )
        res = sum_adaptive(stream, Fraction(1, 2000), max_terms=10 ** 6)
        zeta2 = Fraction(16449340668482264365, 10 ** 19)  # pi^2/6 to 19 places
        assert abs(res.value - zeta2) <= res.tail_bound
        assert res.tail_bound <= Fraction(1, 2000) * 2

    def test_alternating_cert_certifies_valid_series(self):
        def terms():
            j = 1
            while True:
                yield Fraction((-1) ** (j + 1), j * j)
                j += 1

        stream = TermStream(
            name="eta2", first_index=1, make_terms=terms, certificate=AlternatingCert()
        )
        res = sum_adaptive(stream, Fraction(1, 10 ** 4), max_terms=10 ** 4)
        # eta(2) = pi^2/12 = 0.822467...
        assert abs(res.value - Fraction(822467, 10 ** 6)) < Fraction(2, 10 ** 4)

    def test_alternating_cert_rejects_sign_violation(self):
        def terms():
            j = 1
            while True:
                # one same-sign pair poisons the certificate for good
                sign = 1 if j in (5, 6) else (-1) ** (j + 1)
                yield Fraction(sign, j * j * j)
                j += 1

        stream = TermStream(
            name="broken", first_index=1, make_terms=terms, certificate=AlternatingCert()
        )
        with pytest.raises(NonConvergence):
            sum_adaptive(stream, Fraction(1, 10 ** 6), max_terms=400)

    def test_alternating_cert_rejects_growth(self):
        cert = AlternatingCert()
        cert.observe(Fraction(-1), Fraction(1))
        cert.observe(Fraction(1, 2), Fraction(1, 2))
        assert cert.valid
        cert.observe(Fraction(-3, 4), Fraction(3, 4))
        assert not cert.valid
        assert cert.tail(3, Fraction(3, 4)) is None

    def test_bigreal_terms(self):
        p = 128
        def terms():
            t = big(1, p)
            while True:
                yield t
                t = t * Fraction(1, 3)

        stream = TermStream(
            name="geo3",
            first_index=0,
            make_terms=terms,
            ratio_hint=lambda k: Fraction(1, 3),
            zero=big(0, p),
        )
        res = sum_adaptive(stream, big(Fraction(1, 10 ** 25), p))
        assert res.value.precision_bits == p
        assert abs(res.value - Fraction(3, 2)) <= res.tail_bound + Fraction(1, 2 ** 120)
