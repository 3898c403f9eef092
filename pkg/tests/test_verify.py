import json
from dataclasses import replace

import pytest

from openchainq import verify
from openchainq.exactq import InadmissibleError
from openchainq.verify import (REGISTRY, SUITE_IDS, random_words, resolve_suites, run_all, run_suite,
                               to_json_lines, to_tsv, trial_points)


def test_registry_ids_are_unique_and_anchored():
    assert len(SUITE_IDS) == len(set(SUITE_IDS))
    for spec in REGISTRY.values():
        assert spec.anchor and spec.arena in ("window", "blocks", "scalar")


def test_resolve():
    assert resolve_suites(["all"]) == list(SUITE_IDS)
    assert resolve_suites(["qseries", "qseries"]) == ["qseries"]
    with pytest.raises(KeyError):
        resolve_suites(["no-such-suite"])


def test_unknown_suite(point):
    with pytest.raises(KeyError):
        run_suite("no-such-suite", point, 10, 10)


def test_truncation_too_small(point):
    with pytest.raises(ValueError):
        run_suite("fusion-K", point, 3, 3)


def test_missing_spectral_value(point):
    bare = replace(point, spectral=(("z", point.s("z")),))
    with pytest.raises(ValueError, match="w"):
        run_suite("R-defining-rho-rhobar", bare, 8, 8)


def test_inadmissible_is_not_a_failure(point):
    bad = point.with_values(z=1 / point.q)
    with pytest.raises(InadmissibleError):
        run_suite("RE-right-rho", bad, 8, 8)


def test_trials_must_be_positive():
    with pytest.raises(ValueError):
        run_all(0, 0, 10, 10)


@pytest.mark.parametrize("suite", ["qseries", "R-defining-upsilon-phi", "boundary-factorization-reduced"])
def test_suite_passes(point, suite):
    report = run_suite(suite, point, 10, 10)
    assert report.passed and report.status == "pass" and report.checks > 0


def test_boundary_passes_with_anchor_check(point):
    report = run_suite("boundary-factorization-right", point, 10, 10)
    assert report.passed and report.details["max_block"] == 10
    assert report.checks == 5


@pytest.mark.parametrize("suite", ["boundary-factorization-right", "boundary-factorization-left"])
def test_tampering_gives_block_one_witness(point, suite):
    report = run_suite(suite, point, 10, 10, tamper=True)
    assert not report.passed and report.status == "fail"
    assert report.details["witness_block"] == 1
    assert sum(report.witness.basis) == 1


def test_block_bound_is_clamped(point):
    report = run_suite("oracle-R-upsilon-phi", point, 8, 10)
    assert report.passed and report.details["max_block"] == 5


def test_fusion_scalars_recorded(point):
    report = run_suite("fusion-K", point, 8, 8)
    assert report.passed and len(report.details["scalars"]) == 2


def test_isolation(monkeypatch):
    def broken(ctx):
        raise RuntimeError("corrupted entry")

    spec = REGISTRY["O-intertwining"]
    monkeypatch.setitem(REGISTRY, "O-intertwining", replace(spec, check=broken))
    reports = run_all(3, 1, 8, 8, ["qseries", "O-intertwining", "O-minus"])
    status = {r.suite: r.status for r in reports}
    assert status == {"qseries": "pass", "O-intertwining": "error", "O-minus": "pass"}
    assert not verify.all_passed(reports)


def test_failing_check_does_not_leak(monkeypatch):
    def failing(ctx):
        ctx.record("always false", False)

    spec = REGISTRY["qseries"]
    monkeypatch.setitem(REGISTRY, "qseries", replace(spec, check=failing))
    reports = run_all(3, 2, 8, 8, ["qseries", "fusion-SES"])
    assert [r.status for r in reports] == ["fail", "fail", "pass", "pass"]


def test_serialisation_is_deterministic():
    a = run_all(5, 2, 8, 8, ["qseries", "fusion-SES"])
    b = run_all(5, 2, 8, 8, ["qseries", "fusion-SES"])
    assert to_json_lines(a) == to_json_lines(b)
    assert to_tsv(a) == to_tsv(b)
    rows = [json.loads(line) for line in to_json_lines(a).splitlines()]
    assert [r["suite"] for r in rows] == ["qseries", "qseries", "fusion-SES", "fusion-SES"]
    assert "seconds" not in rows[0] and rows[0]["params"]["q"].count("/") == 1
    assert to_tsv(a).splitlines()[1] == "qseries\t2\t2\t-\t-"


def test_words_are_deterministic(point):
    assert random_words(point) == random_words(point)
    assert len(random_words(point)) == 50
    assert max(len(w) for w in random_words(point)) <= 6


def test_trial_points_respect_overrides():
    pts = trial_points(1, 3, 10, {"q": "3/4"})
    assert len(pts) == 3 and all(p.q.numerator == 3 for p in pts)
