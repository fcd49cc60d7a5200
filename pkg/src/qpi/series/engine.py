"""Adaptive summation with certified tail bounds.

A TermStream yields terms lazily and carries a certificate that can turn
"the terms look small" into a proven bound on the dropped tail.  Three
certificate shapes cover the series in the catalog:

- GeometricCert: a nonincreasing bound r(k) on sup_{j>=k} |t_{j+1}/t_j|,
  giving tail <= |t_k| r/(1-r) once r < 1.
- AbsoluteTailCert: a direct bound fn(k) >= sum_{j>k} |t_j|, used where a
  hand-derived envelope (c/k^p, or a geometric majorant) is sharper than
  term ratios.
- AlternatingCert: validated at run time; once signs have alternated and
  |t| has decreased strictly through every step, the dropped tail is
  bounded by the last added |t_k|.

Summation stops when three consecutive terms fall below tol*max(1,|S|)
and the certificate confirms a tail bound below the same threshold.  A
stream with no usable certificate never stops silently: it raises
NonConvergence with diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional

from ..errors import NonConvergence

# a term magnitude this large with a sustained growth streak is reported
# as divergence instead of burning the remaining term budget
_DIVERGENCE_CAP = Fraction(2) ** 1024
_GROWTH_STREAK = 10


@dataclass(frozen=True)
class SumResult:
    """Outcome of an adaptive summation.

    tail_bound is a certified bound on |true sum - value|; it is exactly
    zero when the stream terminated.
    """

    value: Any
    terms_used: int
    tail_bound: Any
    terminated: bool


class GeometricCert:
    """Ratio-based tail certificate.

    ratio_bound(k) must bound sup_{j>=k} |t_{j+1}/t_j| and be
    nonincreasing in k; return None where no bound below 1 holds yet.
    """

    def __init__(self, ratio_bound: Callable[[int], Any]):
        self.ratio_bound = ratio_bound

    def tail(self, k: int, abs_term):
        r = self.ratio_bound(k)
        if r is None or not r < 1:
            return None
        return abs_term * r / (1 - r)


class AbsoluteTailCert:
    """Tail certificate from a hand-derived envelope.

    bound(k) must dominate sum_{j>k} |t_j|; return None below its range
    of validity.
    """

    def __init__(self, bound: Callable[[int], Any]):
        self.bound = bound

    def tail(self, k: int, abs_term):
        return self.bound(k)


class AlternatingCert:
    """Certificate for strictly alternating series with decreasing |t|.

    The pattern is checked while summing; the certificate only certifies
    a tail once every observed step upheld it.
    """

    def __init__(self):
        self._prev_abs = None
        self._prev_positive = None
        self.valid = True

    def observe(self, term, abs_term):
        if not self.valid:
            return
        if term == 0:
            self.valid = False
            return
        positive = term > 0
        if self._prev_positive is not None:
            if positive == self._prev_positive or not abs_term < self._prev_abs:
                self.valid = False
                return
        self._prev_abs = abs_term
        self._prev_positive = positive

    def tail(self, k: int, abs_term):
        if not self.valid or self._prev_positive is None:
            return None
        return abs_term


@dataclass
class TermStream:
    """A lazily evaluated series with convergence metadata.

    make_terms() must return a fresh iterator each call.  terminates_at
    marks the last index that can be nonzero; the iterator is expected to
    stop by itself at that point.  ratio_hint is shorthand for attaching
    a GeometricCert.
    """

    name: str
    first_index: int
    make_terms: Callable[[], Iterator]
    certificate: Any = None
    terminates_at: Optional[int] = None
    ratio_hint: Optional[Callable[[int], Any]] = None
    zero: Any = field(default_factory=lambda: Fraction(0))

    def __post_init__(self):
        if self.certificate is None and self.ratio_hint is not None:
            self.certificate = GeometricCert(self.ratio_hint)


def _threshold(tol, value):
    scale = abs(value)
    if not scale > 1:
        scale = scale * 0 + 1
    return tol * scale


def sum_adaptive(stream: TermStream, tol, max_terms: int = 20000) -> SumResult:
    """Sum a TermStream until the certified tail drops below tol*max(1,|S|).

    Terminating streams are summed through their last index and report a
    zero tail.  Raises NonConvergence when max_terms is exhausted, when
    the certificate never validates, or when terms grow past any
    reasonable magnitude for a convergent series.
    """
    if max_terms < 1:
        raise NonConvergence("max_terms must be at least 1", {"terms_used": 0})
    cert = stream.certificate
    alternating = isinstance(cert, AlternatingCert)
    if alternating:
        cert = AlternatingCert()  # fresh run state
    total = stream.zero
    used = 0
    consecutive_small = 0
    growth_streak = 0
    last_abs = None
    max_abs = None
    ratio_estimate = None
    k = stream.first_index - 1
    for term in stream.make_terms():
        k += 1
        used += 1
        total = total + term
        abs_term = abs(term)
        if alternating:
            cert.observe(term, abs_term)
        if last_abs is not None:
            if last_abs > 0:
                ratio_estimate = abs_term / last_abs
            growth_streak = growth_streak + 1 if abs_term > last_abs else 0
        if max_abs is None or abs_term > max_abs:
            max_abs = abs_term
        if growth_streak >= _GROWTH_STREAK and abs_term > _DIVERGENCE_CAP:
            raise NonConvergence(
                f"stream {stream.name}: terms increase without bound",
                _diag(used, abs_term, max_abs, ratio_estimate),
            )
        limit = _threshold(tol, total)
        if abs_term < limit:
            consecutive_small += 1
            if consecutive_small >= 3 and cert is not None and stream.terminates_at is None:
                bound = cert.tail(k, abs_term)
                if bound is not None and bound <= limit:
                    return SumResult(
                        value=total, terms_used=used, tail_bound=bound, terminated=False
                    )
        else:
            consecutive_small = 0
        last_abs = abs_term
        if used >= max_terms:
            raise NonConvergence(
                f"stream {stream.name}: no certified tail below tolerance "
                f"within {max_terms} terms",
                _diag(used, abs_term, max_abs, ratio_estimate),
            )
    if stream.terminates_at is not None:
        return SumResult(
            value=total, terms_used=used, tail_bound=total * 0, terminated=True
        )
    raise NonConvergence(
        f"stream {stream.name}: iterator stopped without declaring termination",
        _diag(used, last_abs, max_abs, ratio_estimate),
    )


def _diag(used, last_abs, max_abs, ratio_estimate):
    return {
        "terms_used": used,
        "last_abs_term": last_abs,
        "max_abs_term": max_abs,
        "ratio_estimate": ratio_estimate,
    }
