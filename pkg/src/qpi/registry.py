"""Identity catalog, verification reports, sweeps, and limit studies.

The catalog is a frozen JSON manifest bundled with the package: one
record per identity with its statement, family, parameter contract, and
expected status.  verify() runs one identity at one parameter point and
returns a VerificationReport whose numbers are decimal strings at the
working precision (exact p/q strings in rational mode).  verify_all()
iterates the catalog, expanding each terminating identity over the
committed seed-driven parameter draws.

The PASS rule compares the absolute residual against the sum of both
certified tails plus a rounding allowance of 2^(10-precision) times the
result scale.  A residual above that bound on an entry expected to be
verified is a FAIL; on an entry expected to be suspect it is a
MISMATCH.  Violated preconditions never raise out of verify(); they
produce SKIPPED reports with the reason attached.

Timing is recorded per report but excluded from the canonical
serialization, so identical inputs serialize to identical bytes.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import (
    BalanceError,
    NonConvergence,
    ParameterError,
    PoleError,
    UnknownIdentityError,
)
from .numerics import BigReal, big
from .series import terminating
from .series.doubles import (
    CLASSICAL_IDS,
    Q_IDS,
    eval_identity_series,
    lhs_stream,
)
from .series.engine import sum_adaptive

DEFAULT_TOL = Fraction(1, 10 ** 30)
DEFAULT_MAX_TERMS = 20000
DEFAULT_PRECISION = 192

DRAW_SEED = 20260819
DRAW_COUNT = 20

PASS = "PASS"
FAIL = "FAIL"
MISMATCH = "MISMATCH"
SKIPPED = "SKIPPED"

FAMILIES = ("terminating", "infinite_classical", "infinite_q")


@dataclass(frozen=True)
class IdentitySpec:
    """One catalog record.

    transcription pins which reading of the source display verify()
    runs: "literal" is the display as printed, "corrected" repairs a
    defect that notes describes.  tol_floor, when set, is the tightest
    tolerance the series can certify within the term budget; verify()
    clamps requests below it.
    """

    id: str
    family: str
    citation: str
    required_params: tuple
    constraints: str
    expected_status: str
    transcription: str
    notes: str = ""
    tol_floor: Fraction | None = None


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one verification run.

    Numeric fields are decimal strings rounded at precision_bits, or
    exact p/q strings in rational mode, or "nan" when the quantity was
    never computed (skips and non-convergent runs).
    """

    id: str
    params: dict
    lhs: str
    rhs: str
    abs_residual: str
    rel_residual: str
    lhs_tail: str
    rhs_tail: str
    lhs_terms: int
    rhs_terms: int
    status: str
    reason: str
    precision_bits: int
    wall_time: float


REPORT_FIELDS = (
    "id",
    "params",
    "lhs",
    "rhs",
    "abs_residual",
    "rel_residual",
    "lhs_tail",
    "rhs_tail",
    "lhs_terms",
    "rhs_terms",
    "status",
    "reason",
    "precision_bits",
)


def report_to_dict(report: VerificationReport, include_wall_time: bool = False) -> dict:
    """Plain-dict form of a report, canonical unless timing is asked for."""
    data = {name: getattr(report, name) for name in REPORT_FIELDS}
    if include_wall_time:
        data["wall_time"] = report.wall_time
    return data


def reports_to_json(reports: Iterable[VerificationReport]) -> str:
    """Canonical JSON for a report sequence; byte-stable across runs."""
    rows = [report_to_dict(r) for r in reports]
    return json.dumps(rows, sort_keys=True, indent=2)


# catalog loading

_CATALOG: "dict[str, IdentitySpec] | None" = None


def _load_catalog() -> "dict[str, IdentitySpec]":
    text = resources.files("qpi").joinpath("data/catalog.json").read_text("utf-8")
    specs: "dict[str, IdentitySpec]" = {}
    for raw in json.loads(text):
        floor = raw.get("tol_floor")
        spec = IdentitySpec(
            id=raw["id"],
            family=raw["family"],
            citation=raw["citation"],
            required_params=tuple(raw["required_params"]),
            constraints=raw["constraints"],
            expected_status=raw["expected_status"],
            transcription=raw["transcription"],
            notes=raw.get("notes", ""),
            tol_floor=Fraction(floor) if floor else None,
        )
        if spec.family not in FAMILIES:
            raise ValueError(f"catalog entry {spec.id} has unknown family {spec.family!r}")
        if spec.id in specs:
            raise ValueError(f"catalog id {spec.id} duplicated")
        specs[spec.id] = spec
    return specs


def catalog() -> "dict[str, IdentitySpec]":
    """The identity catalog, loaded once per process."""
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _load_catalog()
    return _CATALOG


def get_spec(identity_id: str) -> IdentitySpec:
    spec = catalog().get(identity_id)
    if spec is None:
        raise UnknownIdentityError(f"unknown identity {identity_id!r}")
    return spec


# terminating evaluator dispatch; every entry returns (lhs, rhs) exactly


def _eval_eq31(p: Mapping[str, Any]):
    args = (p["a"], p["b"], p["c"], p["n"])
    return terminating.eval_7F6_lhs(*args), terminating.eval_7F6_rhs(*args)


def _eval_jackson(p: Mapping[str, Any]):
    a, b, c, d, n, q = p["a"], p["b"], p["c"], p["d"], p["n"], p["q"]
    # balance: e is determined by the other parameters
    e = a * a * q ** (n + 1) / (b * c * d)
    return terminating.eval_jackson(a, b, c, d, e, n, q)


def _eval_dougall(p: Mapping[str, Any]):
    a, b, c, d, n = p["a"], p["b"], p["c"], p["d"], p["n"]
    e = 1 + 2 * a - b - c - d + n
    return terminating.eval_dougall(a, b, c, d, e, n)


TERMINATING_EVALUATORS: "dict[str, Callable[[Mapping[str, Any]], tuple]]" = {
    "eq3.1": _eval_eq31,
    "eq3.2": lambda p: terminating.eval_eq32(p["a"], p["b"], p["c"], p["n"]),
    "eq3.3": lambda p: terminating.eval_eq33(p["a"], p["b"], p["c"], p["n"]),
    "eq4.trunc": lambda p: terminating.eval_quadratic_truncated(
        p["a"], p["b"], p["c"], p["n"], p["q"]
    ),
    "eq4.2": lambda p: terminating.eval_eq42(p["a"], p["b"], p["c"], p["n"], p["q"]),
    "lemma5.1": lambda p: terminating.eval_lemma51(p["a"], p["b"], p["c"], p["n"], p["q"]),
    "jackson": _eval_jackson,
    "dougall": _eval_dougall,
}

# lhs sums starting at k=1 have n terms, the rest n+1
_SUM_FROM_ONE = frozenset({"eq3.2", "eq3.3", "eq4.2", "lemma5.1"})


def _as_fraction(value: Any, name: str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"parameter {name}={value!r} is not rational") from exc


def _normalize_params(spec: IdentitySpec, params: "Mapping[str, Any] | None") -> dict:
    given = dict(params or {})
    missing = [name for name in spec.required_params if name not in given]
    if missing:
        raise ParameterError(f"{spec.id}: {', '.join(missing)} required")
    clean = {}
    for name in spec.required_params:
        value = given[name]
        if name == "n":
            clean[name] = int(value)
        else:
            clean[name] = _as_fraction(value, name)
    return clean


def _params_to_strings(params: Mapping[str, Any]) -> dict:
    return {name: str(value) for name, value in params.items()}


def _decimal(value: Any, precision_bits: int, digits: "int | None" = None) -> str:
    if isinstance(value, BigReal):
        return value.to_decimal(digits)
    return big(value, precision_bits).to_decimal(digits)


def _report(
    spec: IdentitySpec,
    params: Mapping[str, Any],
    *,
    precision_bits: int,
    start: float,
    status: str,
    reason: str = "",
    lhs: str = "nan",
    rhs: str = "nan",
    abs_residual: str = "nan",
    rel_residual: str = "nan",
    lhs_tail: str = "nan",
    rhs_tail: str = "nan",
    lhs_terms: int = 0,
    rhs_terms: int = 0,
) -> VerificationReport:
    return VerificationReport(
        id=spec.id,
        params=_params_to_strings(params),
        lhs=lhs,
        rhs=rhs,
        abs_residual=abs_residual,
        rel_residual=rel_residual,
        lhs_tail=lhs_tail,
        rhs_tail=rhs_tail,
        lhs_terms=lhs_terms,
        rhs_terms=rhs_terms,
        status=status,
        reason=reason,
        precision_bits=precision_bits,
        wall_time=time.perf_counter() - start,
    )


def _bound_status(spec: IdentitySpec, within: bool) -> str:
    if within:
        return PASS
    return MISMATCH if spec.expected_status == "suspect" else FAIL


def _verify_terminating(
    spec: IdentitySpec,
    params: Mapping[str, Any],
    precision_bits: int,
    rational: bool,
    start: float,
) -> VerificationReport:
    try:
        lhs, rhs = TERMINATING_EVALUATORS[spec.id](params)
    except (PoleError, BalanceError, ZeroDivisionError) as exc:
        return _report(
            spec, params, precision_bits=precision_bits, start=start,
            status=SKIPPED, reason=str(exc),
        )
    residual = abs(lhs - rhs)
    n_terms = params["n"] + (0 if spec.id in _SUM_FROM_ONE else 1)
    if rational:
        status = _bound_status(spec, residual == 0)
        return _report(
            spec, params, precision_bits=precision_bits, start=start,
            status=status,
            reason="" if status == PASS else f"exact residual {residual}",
            lhs=str(lhs), rhs=str(rhs),
            abs_residual=str(residual),
            rel_residual=str(residual / max(abs(lhs), abs(rhs))) if residual else "0",
            lhs_tail="0", rhs_tail="0",
            lhs_terms=n_terms, rhs_terms=0,
        )
    scale = max(abs(lhs), abs(rhs))
    allowance = Fraction(1, 2 ** (precision_bits - 10)) * scale
    status = _bound_status(spec, residual <= allowance)
    rel = residual / scale if scale else residual
    return _report(
        spec, params, precision_bits=precision_bits, start=start,
        status=status,
        reason="" if status == PASS else "residual exceeds rounding allowance",
        lhs=_decimal(lhs, precision_bits), rhs=_decimal(rhs, precision_bits),
        abs_residual=_decimal(residual, precision_bits),
        rel_residual=_decimal(rel, precision_bits),
        lhs_tail="0", rhs_tail="0",
        lhs_terms=n_terms, rhs_terms=0,
    )


def _verify_infinite(
    spec: IdentitySpec,
    params: Mapping[str, Any],
    tol: Fraction,
    max_terms: int,
    precision_bits: int,
    start: float,
) -> VerificationReport:
    effective_tol = tol
    if spec.tol_floor is not None and spec.tol_floor > effective_tol:
        effective_tol = spec.tol_floor
    try:
        lhs, rhs = eval_identity_series(
            spec.id,
            precision_bits=precision_bits,
            tol=effective_tol,
            max_terms=max_terms,
            q=params.get("q"),
            rhs_variant=spec.transcription,
        )
    except NonConvergence as exc:
        status = MISMATCH if spec.expected_status == "suspect" else FAIL
        details = ", ".join(
            f"{key}={_decimal(value, precision_bits, 8) if isinstance(value, BigReal) else value}"
            for key, value in sorted(exc.diagnostics.items())
        )
        return _report(
            spec, params, precision_bits=precision_bits, start=start,
            status=status,
            reason=f"no convergence: {exc.reason} ({details})",
            lhs_terms=exc.diagnostics.get("terms_used", 0),
        )
    residual = abs(lhs.value - rhs.value)
    scale = max(abs(lhs.value), abs(rhs.value))
    allowance = scale * Fraction(1, 2 ** (precision_bits - 10))
    bound = lhs.tail_bound + rhs.tail_bound + allowance
    status = _bound_status(spec, residual <= bound)
    rel = residual / scale if scale > 0 else residual
    reason = ""
    if status != PASS:
        reason = f"residual exceeds certified bound {_decimal(bound, precision_bits, 12)}"
    elif effective_tol != tol:
        reason = f"tolerance clamped to floor {spec.tol_floor}"
    return _report(
        spec, params, precision_bits=precision_bits, start=start,
        status=status, reason=reason,
        lhs=_decimal(lhs.value, precision_bits),
        rhs=_decimal(rhs.value, precision_bits),
        abs_residual=_decimal(residual, precision_bits),
        rel_residual=_decimal(rel, precision_bits),
        lhs_tail=_decimal(lhs.tail_bound, precision_bits),
        rhs_tail=_decimal(rhs.tail_bound, precision_bits),
        lhs_terms=lhs.terms_used, rhs_terms=rhs.terms_used,
    )


def verify(
    identity_id: str,
    params: "Mapping[str, Any] | None" = None,
    tol: Any = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    *,
    precision_bits: int = DEFAULT_PRECISION,
    rational: bool = False,
) -> VerificationReport:
    """Verify one identity at one parameter point.

    Precondition violations (missing or out-of-range parameters, poles,
    unbalanced draws) come back as SKIPPED reports; only an unknown id
    raises.
    """
    spec = get_spec(identity_id)
    start = time.perf_counter()
    try:
        clean = _normalize_params(spec, params)
    except ParameterError as exc:
        return _report(
            spec, dict(params or {}), precision_bits=precision_bits, start=start,
            status=SKIPPED, reason=str(exc),
        )
    if rational and spec.family != "terminating":
        return _report(
            spec, clean, precision_bits=precision_bits, start=start,
            status=SKIPPED, reason="rational mode covers terminating identities only",
        )
    if spec.family == "terminating":
        return _verify_terminating(spec, clean, precision_bits, rational, start)
    if spec.family == "infinite_q" and not 0 < clean["q"] < 1:
        return _report(
            spec, clean, precision_bits=precision_bits, start=start,
            status=SKIPPED, reason="q must lie in (0, 1)",
        )
    tol_frac = tol if isinstance(tol, Fraction) else _as_fraction(tol, "tol")
    if tol_frac <= 0:
        raise ParameterError("tol must be positive")
    return _verify_infinite(spec, clean, tol_frac, max_terms, precision_bits, start)


def verify_all(
    family: "str | None" = None,
    tol: Any = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    *,
    q: Any = None,
    precision_bits: int = DEFAULT_PRECISION,
    rational: bool = False,
    draws: "Mapping[str, list] | None" = None,
) -> "list[VerificationReport]":
    """Run every catalog entry matching the family filter.

    Terminating identities expand over the committed parameter draws
    (or a caller-supplied draw table), one report per draw.
    q-identities verify at the given q, or come back SKIPPED when q is
    absent.  Reports are sorted by id.
    """
    if family is not None and family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}")
    table = committed_draws() if draws is None else draws
    reports: "list[VerificationReport]" = []
    for spec in sorted(catalog().values(), key=lambda s: s.id):
        if family is not None and spec.family != family:
            continue
        kwargs = dict(precision_bits=precision_bits, rational=rational)
        if spec.family == "terminating":
            for draw in table[spec.id]:
                reports.append(verify(spec.id, draw, tol, max_terms, **kwargs))
        elif spec.family == "infinite_q" and q is None:
            reports.append(verify(spec.id, {}, tol, max_terms, **kwargs))
        elif spec.family == "infinite_q":
            reports.append(verify(spec.id, {"q": q}, tol, max_terms, **kwargs))
        else:
            reports.append(verify(spec.id, {}, tol, max_terms, **kwargs))
    return reports


def sweep_q(
    identity_id: str,
    q_values: Sequence[Any],
    tol: Any = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    *,
    precision_bits: int = DEFAULT_PRECISION,
) -> "list[VerificationReport]":
    """Verify one q-identity at each q in order; one report per q."""
    spec = get_spec(identity_id)
    if spec.family != "infinite_q":
        raise ParameterError(f"{identity_id} is not a q-identity")
    return [
        verify(identity_id, {"q": value}, tol, max_terms, precision_bits=precision_bits)
        for value in q_values
    ]


# committed parameter draws for the terminating identities

_DRAWS: "dict[str, list[dict]] | None" = None

_DRAW_NUMERATORS = (-3, -2, -1, 1, 2, 3, 4, 5)
_DRAW_DENOMINATORS = (2, 3, 5, 7, 11)

# (names of rational slots, n range, whether the identity takes q)
_DRAW_SHAPES = {
    "eq3.1": (("a", "b", "c"), 5, False),
    "eq3.2": (("a", "b", "c"), 5, False),
    "eq3.3": (("a", "b", "c"), 5, False),
    "dougall": (("a", "b", "c", "d"), 5, False),
    "eq4.trunc": (("a", "b", "c"), 4, True),
    "eq4.2": (("a", "b", "c"), 4, True),
    "lemma5.1": (("a", "b", "c"), 4, True),
    "jackson": (("a", "b", "c", "d"), 4, True),
}


class _Lcg:
    """Deterministic 64-bit linear congruential generator.

    Fixed here rather than taken from random so the committed draws can
    never drift with library versions.
    """

    MULTIPLIER = 6364136223846793005
    INCREMENT = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_int(self) -> int:
        self.state = (self.MULTIPLIER * self.state + self.INCREMENT) & self.MASK
        return self.state >> 33

    def pick(self, options: Sequence[Any]) -> Any:
        return options[self.next_int() % len(options)]


def generate_param_draws(seed: int = DRAW_SEED, count: int = DRAW_COUNT) -> dict:
    """Regenerate the draw table; equality with the committed file is tested.

    Each draw is rejection-sampled until the evaluator accepts it, so
    every committed point is known pole-free and balanced.
    """
    rng = _Lcg(seed)
    table: "dict[str, list[dict]]" = {}
    for identity_id in sorted(_DRAW_SHAPES):
        names, n_max, takes_q = _DRAW_SHAPES[identity_id]
        evaluator = TERMINATING_EVALUATORS[identity_id]
        draws = []
        while len(draws) < count:
            params: "dict[str, Any]" = {}
            for name in names:
                params[name] = Fraction(
                    rng.pick(_DRAW_NUMERATORS), rng.pick(_DRAW_DENOMINATORS)
                )
            if takes_q:
                den = rng.pick(_DRAW_DENOMINATORS)
                params["q"] = Fraction(1 + rng.next_int() % (den - 1), den)
            params["n"] = 1 + rng.next_int() % n_max
            try:
                evaluator(params)
            except (PoleError, BalanceError, ZeroDivisionError):
                continue
            draws.append(params)
        table[identity_id] = draws
    return {"seed": seed, "count": count, "draws": table}


def draws_to_json(table: dict) -> str:
    """Serialize a draw table with rationals as p/q strings."""
    encoded = {
        identity_id: [
            {name: value if isinstance(value, int) else str(value)
             for name, value in draw.items()}
            for draw in draws
        ]
        for identity_id, draws in table["draws"].items()
    }
    payload = {"seed": table["seed"], "count": table["count"], "draws": encoded}
    return json.dumps(payload, sort_keys=True, indent=2)


def committed_draws() -> "dict[str, list[dict]]":
    """The committed parameter draws, decoded to exact rationals."""
    global _DRAWS
    if _DRAWS is None:
        text = resources.files("qpi").joinpath("data/param_draws.json").read_text("utf-8")
        payload = json.loads(text)
        table: "dict[str, list[dict]]" = {}
        for identity_id, draws in payload["draws"].items():
            table[identity_id] = [
                {
                    name: value if name == "n" else Fraction(value)
                    for name, value in draw.items()
                }
                for draw in draws
            ]
        _DRAWS = table
    return _DRAWS


# q -> 1 limit studies over the hard-coded pairing table


@dataclass(frozen=True)
class LimitRung:
    """One ladder step: q = 1 - 2^-j."""

    j: int
    q: str
    q_lhs: str
    error: str
    note: str = ""


@dataclass(frozen=True)
class LimitStudy:
    pair_id: str
    q_id: str
    classical_id: str
    orientation: int
    classical_lhs: str
    rungs: tuple
    verdict: str


# pair -> (q id, classical id, orientation, q-side tol, classical tol);
# the q-side left-hand sum tends to orientation * classical lhs
_PAIRS = {
    "pair-2.7-2.3": ("eq2.7", "eq2.3", -1, Fraction(1, 10 ** 8), Fraction(1, 10 ** 8)),
    "pair-2.9-2.5": ("eq2.9", "eq2.5", -1, Fraction(1, 10 ** 8), Fraction(1, 10 ** 8)),
    "pair-2.8-2.4": ("eq2.8", "eq2.4", -2, Fraction(1, 10 ** 8), Fraction(1, 10 ** 10)),
    "pair-2.10-2.6": ("eq2.10", "eq2.6", -1, Fraction(1, 10 ** 8), Fraction(1, 10 ** 4)),
}

LIMIT_PAIR_IDS = tuple(sorted(_PAIRS))


def limit_study(
    pair_id: str,
    ladder: Iterable[int] = range(3, 9),
    *,
    max_terms: int = DEFAULT_MAX_TERMS,
    precision_bits: int = DEFAULT_PRECISION,
) -> LimitStudy:
    """Evaluate a q-side left-hand sum along q = 1 - 2^-j.

    The per-rung error is |lhs_q - orientation * lhs_classical|.  The
    verdict reads the last three rungs: strictly decreasing errors give
    "decreasing"; any non-convergent rung gives "divergent"; fewer than
    three rungs cannot support a verdict.
    """
    if pair_id not in _PAIRS:
        raise UnknownIdentityError(f"unknown limit pair {pair_id!r}")
    q_id, classical_id, orientation, q_tol, classical_tol = _PAIRS[pair_id]
    classical = sum_adaptive(
        lhs_stream(classical_id, precision_bits), classical_tol, max_terms
    )
    target = classical.value * orientation
    rungs = []
    diverged = False
    errors = []
    for j in ladder:
        q_j = Fraction((1 << j) - 1, 1 << j)
        try:
            q_sum = sum_adaptive(
                lhs_stream(q_id, precision_bits, q=q_j), q_tol, max_terms
            )
        except NonConvergence as exc:
            diverged = True
            rungs.append(
                LimitRung(
                    j=j, q=str(q_j), q_lhs="nan", error="nan",
                    note=f"no convergence: {exc.reason}",
                )
            )
            continue
        error = abs(q_sum.value - target)
        errors.append(error)
        rungs.append(
            LimitRung(
                j=j, q=str(q_j),
                q_lhs=q_sum.value.to_decimal(),
                error=error.to_decimal(),
            )
        )
    if diverged:
        verdict = "divergent"
    elif len(errors) < 3:
        verdict = "insufficient rungs"
    elif errors[-3] > errors[-2] > errors[-1]:
        verdict = "decreasing"
    else:
        verdict = "not decreasing"
    return LimitStudy(
        pair_id=pair_id,
        q_id=q_id,
        classical_id=classical_id,
        orientation=orientation,
        classical_lhs=classical.value.to_decimal(),
        rungs=tuple(rungs),
        verdict=verdict,
    )
