"""Catalog, report, sweep, and limit-study behavior."""

import json
from collections import Counter
from fractions import Fraction

import pytest

from qpi import registry
from qpi.errors import ParameterError, UnknownIdentityError
from qpi.series.doubles import CLASSICAL_IDS, Q_IDS

# frozen manifest: the full display set, asserted verbatim
MANIFEST = (
    "dougall",
    "eq1.1a",
    "eq1.1b",
    "eq1.2",
    "eq1.3",
    "eq2.1",
    "eq2.10",
    "eq2.2",
    "eq2.3",
    "eq2.4",
    "eq2.5",
    "eq2.6",
    "eq2.7",
    "eq2.8",
    "eq2.9",
    "eq3.1",
    "eq3.2",
    "eq3.3",
    "eq4.2",
    "eq4.trunc",
    "jackson",
    "lemma5.1",
    "ramanujan",
)


def test_catalog_matches_frozen_manifest():
    assert tuple(sorted(registry.catalog())) == MANIFEST


def test_every_entry_names_an_existing_evaluator():
    for spec in registry.catalog().values():
        if spec.family == "terminating":
            assert spec.id in registry.TERMINATING_EVALUATORS
        elif spec.family == "infinite_classical":
            assert spec.id in CLASSICAL_IDS
        else:
            assert spec.id in Q_IDS


def test_suspect_entries_are_exactly_the_two_flagged():
    suspects = {s.id for s in registry.catalog().values() if s.expected_status == "suspect"}
    assert suspects == {"eq2.8", "eq2.10"}


def test_corrected_transcriptions():
    corrected = {s.id for s in registry.catalog().values() if s.transcription == "corrected"}
    assert corrected == {"lemma5.1", "eq2.7", "eq2.9"}


def test_catalog_notes_explain_every_deviation():
    specs = registry.catalog()
    for ident in ("lemma5.1", "eq2.7", "eq2.8", "eq2.9", "eq2.10"):
        assert specs[ident].notes
    for ident in ("eq1.2", "eq2.3", "eq2.4", "eq2.5", "eq2.6"):
        assert specs[ident].tol_floor is not None
        assert specs[ident].notes


def test_verify_eq21_passes():
    report = registry.verify("eq2.1")
    assert report.status == "PASS"
    assert report.lhs_terms < 100
    assert report.precision_bits == 192


def test_verify_is_deterministic():
    a = registry.verify("eq2.2", {"q": Fraction(1, 2)})
    b = registry.verify("eq2.2", {"q": Fraction(1, 2)})
    assert registry.report_to_dict(a) == registry.report_to_dict(b)
    assert "wall_time" not in registry.report_to_dict(a)
    assert "wall_time" in registry.report_to_dict(a, include_wall_time=True)


def test_reports_json_round_trips():
    reports = [registry.verify("eq2.1"), registry.verify("eq1.3", {"q": "1/2"})]
    text = registry.reports_to_json(reports)
    assert json.dumps(json.loads(text), sort_keys=True, indent=2) == text


def test_rational_mode_is_exact():
    report = registry.verify(
        "eq3.1", {"a": Fraction(1, 2), "b": Fraction(1, 3), "c": Fraction(1, 4), "n": 1},
        rational=True,
    )
    assert report.status == "PASS"
    assert report.lhs == "150/143"
    assert report.abs_residual == "0"


def test_rational_mode_skips_infinite_families():
    report = registry.verify("eq2.1", rational=True)
    assert report.status == "SKIPPED"
    assert "terminating" in report.reason


def test_missing_q_is_skipped():
    report = registry.verify("eq1.3")
    assert report.status == "SKIPPED"
    assert "q required" in report.reason


def test_q_outside_unit_interval_is_skipped():
    report = registry.verify("eq1.3", {"q": Fraction(3, 2)})
    assert report.status == "SKIPPED"
    assert "(0, 1)" in report.reason


def test_unknown_identity_raises():
    with pytest.raises(UnknownIdentityError):
        registry.verify("eq9.9")


def test_pole_draw_is_skipped_not_raised():
    # b - a = 2 makes a lower factor hit a nonpositive integer
    report = registry.verify(
        "eq3.1", {"a": Fraction(1, 2), "b": Fraction(5, 2), "c": Fraction(1, 4), "n": 3}
    )
    assert report.status == "SKIPPED"
    assert report.reason


def test_suspect_mismatch_at_half():
    report = registry.verify("eq2.8", {"q": Fraction(1, 2)})
    assert report.status == "MISMATCH"
    assert "exceeds" in report.reason


def test_divergent_entry_reports_structured_mismatch():
    report = registry.verify("eq2.10", {"q": Fraction(1, 2)})
    assert report.status == "MISMATCH"
    assert "no convergence" in report.reason
    assert "last_abs_term" in report.reason
    assert report.lhs == "nan"


def test_tol_floor_clamps_and_says_so():
    report = registry.verify("eq1.2")
    assert report.status == "PASS"
    assert "floor" in report.reason
    # the tail bound reflects the clamped tolerance, not the request
    assert Fraction(1, 10 ** 30) < Fraction(1, 100)


def test_verify_all_terminating_rational_all_pass():
    reports = registry.verify_all("terminating", rational=True)
    assert len(reports) == 8 * registry.DRAW_COUNT
    assert Counter(r.status for r in reports) == {"PASS": len(reports)}
    ids = [r.id for r in reports]
    assert ids == sorted(ids)


def test_verify_all_classical_all_pass():
    reports = registry.verify_all("infinite_classical")
    assert Counter(r.status for r in reports) == {"PASS": 9}


def test_verify_all_q_family_without_q_skips():
    reports = registry.verify_all("infinite_q")
    assert Counter(r.status for r in reports) == {"SKIPPED": 6}


def test_verify_all_unknown_family_raises():
    with pytest.raises(ParameterError):
        registry.verify_all("infinite_wrong")


def test_sweep_five_points_pass():
    values = [Fraction(1, 10), Fraction(3, 10), Fraction(1, 2), Fraction(7, 10), Fraction(9, 10)]
    reports = registry.sweep_q("eq1.3", values)
    assert [r.status for r in reports] == ["PASS"] * 5
    assert [r.params["q"] for r in reports] == [str(v) for v in values]


def test_sweep_empty_list_is_empty():
    assert registry.sweep_q("eq1.3", []) == []


def test_sweep_rejects_non_q_identity():
    with pytest.raises(ParameterError):
        registry.sweep_q("eq2.1", [Fraction(1, 2)])


def test_sweep_near_one_converges_slower():
    fast = registry.verify("eq2.2", {"q": Fraction(1, 2)})
    slow = registry.verify("eq2.2", {"q": Fraction(99, 100)})
    assert fast.status == "PASS" and slow.status == "PASS"
    assert slow.lhs_terms > fast.lhs_terms


def test_tolerance_monotonicity():
    loose = registry.verify("eq2.1", tol=Fraction(1, 10 ** 10))
    tight = registry.verify("eq2.1", tol=Fraction(1, 10 ** 30))
    assert loose.status == tight.status == "PASS"
    assert loose.lhs_terms <= tight.lhs_terms


def test_limit_pair_27_23_decreasing():
    study = registry.limit_study("pair-2.7-2.3")
    assert study.verdict == "decreasing"
    assert study.orientation == -1
    assert len(study.rungs) == 6
    assert study.classical_lhs.startswith("-")


def test_limit_pair_210_26_divergent():
    study = registry.limit_study("pair-2.10-2.6")
    assert study.verdict == "divergent"
    assert all("no convergence" in rung.note for rung in study.rungs)


def test_limit_single_rung_insufficient():
    study = registry.limit_study("pair-2.7-2.3", ladder=[5])
    assert study.verdict == "insufficient rungs"


def test_limit_unknown_pair_raises():
    with pytest.raises(UnknownIdentityError):
        registry.limit_study("pair-1.1-1.2")


def test_committed_draws_regenerate_from_seed():
    from importlib import resources

    committed = json.loads(
        resources.files("qpi").joinpath("data/param_draws.json").read_text("utf-8")
    )
    regenerated = json.loads(
        registry.draws_to_json(registry.generate_param_draws(registry.DRAW_SEED))
    )
    assert committed == regenerated


def test_committed_draws_cover_all_terminating_ids():
    table = registry.committed_draws()
    expected = {s.id for s in registry.catalog().values() if s.family == "terminating"}
    assert set(table) == expected
    for draws in table.values():
        assert len(draws) == registry.DRAW_COUNT
