"""Acceptance criteria, one test each, with exact equality and wall-clock limits.

Each test prints a single PASS/FAIL line; the lines are repeated in the
terminal summary under "acceptance criteria".
"""
import time

import pytest

from conftest import ACCEPTANCE_LINES
from openchainq.verify import run_all, run_suite, trial_points

SEED = 7
L_REPS = ("rho", "rhobar", "upsilon", "phi")


def judge(number, title, limit, body):
    start = time.perf_counter()
    ok, note = body()
    elapsed = time.perf_counter() - start
    passed = ok and elapsed < limit
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'} ({elapsed:5.1f}s < {limit}s) {title}"
    if note:
        line += f" [{note}]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, note
    assert elapsed < limit, f"took {elapsed:.1f}s"


def summarise(reports):
    bad = [f"{r.suite}:{r.status}" for r in reports if r.status != "pass"]
    return not bad and bool(reports), ", ".join(bad)


def test_criterion_01_qseries():
    judge(1, "q-series identities, 5 points, nilpotent dims 1-8", 5,
          lambda: summarise(run_all(SEED, 5, 10, 10, ["qseries"])))


def test_criterion_02_oscillator():
    judge(2, "oscillator identities, N=10, m_max=10, 5 trials", 30,
          lambda: summarise(run_all(SEED, 5, 10, 10, ["oscillator"])))


def test_criterion_03_representations():
    judge(3, "relations, grading and twist tables for all representations", 30,
          lambda: summarise(run_all(SEED, 5, 10, 10, ["rep-relations"])))


def test_criterion_04_intertwiner_and_bulk():
    suites = ["O-intertwining", "O-minus", "bulk-factorization", "bulk-factorization-minus"]
    judge(4, "intertwiner and bulk factorisation on windows, N=10, 5 trials", 60,
          lambda: summarise(run_all(SEED, 5, 10, 10, suites)))


def test_criterion_05_normalisations():
    judge(5, "K/R anchors, block preservation and link identities", 30,
          lambda: summarise(run_all(SEED, 5, 10, 10, ["normalizations"])))


def test_criterion_06_reflection():
    suites = [f"RE-{side}-{rep}" for side in ("right", "left") for rep in L_REPS]
    judge(6, "right and left reflection equations for four representations, 5 trials", 120,
          lambda: summarise(run_all(SEED, 5, 10, 10, suites)))


def test_criterion_07_boundary_factorisation():
    suites = ["boundary-factorization-right", "boundary-factorization-left", "boundary-factorization-reduced"]

    def body():
        reports = run_all(SEED, 5, 12, 12, suites)
        ok, note = summarise(reports)
        if any(r.details.get("max_block") != 12 for r in reports):
            return False, "not every block up to 12 was checked"
        point = trial_points(SEED, 1, 12)[0]
        for sid in suites[:2]:
            tampered = run_suite(sid, point, 12, 12, tamper=True)
            block = tampered.details.get("witness_block")
            if tampered.status != "fail" or tampered.witness is None or block is None or block > 2:
                return False, f"tampered {sid} was not caught at a low block"
            note = (note + ", " if note else "") + f"tamper witness at block {block}"
        return ok, note

    judge(7, "boundary factorisation on blocks m <= 12 at N=12, plus tampering", 60, body)


def test_criterion_08_oracles():
    suites = ["oracle-K-RE", "oracle-K-intertwining", "oracle-R-upsilon-phi", "oracle-R-rho-rhobar"]

    def body():
        reports = run_all(SEED, 3, 10, 10, suites)
        ok, note = summarise(reports)
        dims = [d for r in reports for d in r.details.get("dimensions", {}).values()]
        if len(dims) != 3 * 7 or any(d != 1 for d in dims):
            return False, f"dimensions {dims}"
        return ok, note or "all solution dimensions 1"

    judge(8, "solvers reproduce closed K and R operators, 3 points", 120, body)


def test_criterion_09_fusion():
    def body():
        reports = run_all(SEED, 3, 10, 10, ["fusion-SES", "fusion-K"])
        ok, note = summarise(reports)
        scalars = [r.details.get("scalars", {}) for r in reports if r.suite == "fusion-K"]
        if len(scalars) != 3 or any(len(s) != 2 for s in scalars):
            return False, "fusion scalars missing"
        return ok, note or "scalars " + "; ".join(", ".join(s.values()) for s in scalars)

    judge(9, "fusion sequence exactness and K fusion relations, 3 trials", 120, body)


def test_criterion_10_window_soundness():
    judge(10, "50 random words agree between truncations N and N+4", 30,
          lambda: summarise(run_all(SEED, 1, 10, 10, ["window-soundness"], words=50)))


@pytest.mark.parametrize("criterion", range(1, 11))
def test_every_criterion_reported(criterion):
    # runs after the criteria above, in file order
    assert any(line.startswith(f"criterion {criterion:2d}:") for line in ACCEPTANCE_LINES)
