"""Acceptance criteria 1-10 at full scale, each under its time budget.

Every criterion prints one line: number, PASS/FAIL, counts and seconds.
Run directly (python tests/test_acceptance.py) or through pytest.
"""
import random
import sys
import time

import pytest

from omegagames import randomgen
from omegagames.constructions import build_R1, r1_block_configurations, run_builder_R1
from omegagames.games import (GSArena, Winner, play_gs, random_mealy, reduction_to_wadge_strategy,
                              copycat, identity_transducer, same_behaviour)
from omegagames.membership import (Outcome, SearchBounds, bounded_run_search, counter_cutoff,
                                   cutoff_counter_verdict, lasso_in_buchi, lasso_in_counter,
                                   lassopair_in_2tape, validate_certificate)
from omegagames.suites import (PASS, SIGMA, SOLE_WITNESS_SCHEDULES, _counter_case, check_sole_witness,
                               closure_agrees, closure_sample, extraction_round_trip,
                               phi_guards, phi_games, phi_play, phi_sample, r2_case, transfer_family,
                               transfer_play, universality_case, universality_fixed, wadge_case,
                               winning_case, winning_pair, winning_set_for)
from omegagames.codings import phi_guard_predicates
from omegagames.words import AlphaWord, HCode, LassoWord, PairWord

SEED = 2026
BOUNDS = SearchBounds(60, 30, 30)


def rng_for(criterion, i):
    return random.Random(f"acceptance:{SEED}:{criterion}:{i}")


_capture = {}


@pytest.fixture(autouse=True)
def _terminal(capsys):
    _capture["capsys"] = capsys
    yield
    _capture.pop("capsys", None)


def report(n, ok, seconds, limit, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  ({seconds:.1f}s, limit {limit}s)"
    capsys = _capture.get("capsys")
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    sys.stdout.flush()


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# 1 --------------------------------------------------------------------------

def criterion_1():
    ok = 0
    for i in range(100):
        found = _counter_case(rng_for(1, i), True)
        if found is None:
            continue
        A, x, v = found
        R = build_R1(A)
        cert = run_builder_R1(A, x, v.evidence["run"], R)
        ok += validate_certificate(R, cert, BOUNDS.max_blocks)
    return ok == 100, f"{ok}/100 certificates validate at probe {BOUNDS.max_blocks}"


def test_criterion_1_r1_forward():
    (passed, detail), s = timed(criterion_1)
    report(1, passed and s < 60, s, 60, detail)
    assert passed and s < 60, detail


# 2 --------------------------------------------------------------------------

def criterion_2():
    never_accept = configs = 0
    outcomes = {o: 0 for o in Outcome}
    for i in range(100):
        found = _counter_case(rng_for(2, i), False)
        if found is None:
            continue
        A, x, _ = found
        R = build_R1(A)
        v = bounded_run_search(R, PairWord(HCode(x), AlphaWord()), BOUNDS)
        outcomes[v.outcome] += 1
        never_accept += not v.accepted
        got, want = r1_block_configurations(A, x, 10, R)
        configs += got == want
    tally = ", ".join(f"{o.value}={k}" for o, k in outcomes.items() if k)
    return (never_accept == 100 and configs == 100,
            f"{never_accept}/100 never Accept ({tally}); {configs}/100 block configurations match for i<=10")


def test_criterion_2_r1_backward():
    (passed, detail), s = timed(criterion_2)
    report(2, passed and s < 120, s, 120, detail)
    assert passed and s < 120, detail


# 3 --------------------------------------------------------------------------

def criterion_3():
    ok = sum(r2_case(rng_for(3, i), i)[0] == PASS for i in range(500))
    sole = sum(check_sole_witness(t, BOUNDS) for t in SOLE_WITNESS_SCHEDULES)
    return ok == 500 and sole == 6, f"{ok}/500 lasso pairs in R2 with a witness; {sole}/6 sole-witness pairs"


def test_criterion_3_complement():
    (passed, detail), s = timed(criterion_3)
    report(3, passed and s < 30, s, 30, detail)
    assert passed and s < 30, detail


# 4 --------------------------------------------------------------------------

def criterion_4():
    counts = []
    for second in (False, True):
        counts.append(sum(closure_agrees(closure_sample(rng_for(4, (second, i)), second), second)[0]
                          for i in range(500)))
    return counts == [500, 500], f"H {counts[0]}/500, H' {counts[1]}/500"


def test_criterion_4_closure_identity():
    (passed, detail), s = timed(criterion_4)
    report(4, passed and s < 20, s, 20, detail)
    assert passed and s < 20, detail


# 5 --------------------------------------------------------------------------

def criterion_5():
    W = winning_set_for(SEED)
    ok = sum(winning_case(W, winning_pair(rng_for(5, i), i))[0] for i in range(300))
    zeros = LassoWord("", "0")
    in_c = lassopair_in_2tape(W.C, (zeros, zeros))
    return ok == 300 and in_c, f"{ok}/300 decompositions agree; (0^w, 0^w) in C: {in_c}"


def test_criterion_5_winning_set():
    (passed, detail), s = timed(criterion_5)
    report(5, passed and s < 30, s, 30, detail)
    assert passed and s < 30, detail


# 6 --------------------------------------------------------------------------

def criterion_6():
    adverse, unknown, exact = 0, 0, 0
    for name, A, win, base in transfer_family():
        want = Winner.P1 if win == 1 else Winner.P2
        for i in range(50):
            rec = transfer_play(name, A, win, base, rng_for(6, (name, i)), 400)
            if rec.verdict is Winner.UNKNOWN:
                unknown += 1
            elif rec.verdict is want:
                exact += 1
            else:
                adverse += 1
    rng = rng_for(6, "extract")
    rounds = sum(extraction_round_trip(rng, o, depth=8) for o in (1, 2) for _ in range(3))
    return (adverse == 0 and rounds == 6,
            f"{adverse} adverse of 150 plays ({exact} exact wins, {unknown} Unknown); "
            f"{rounds}/6 extraction round trips to depth 8")


def test_criterion_6_transfer():
    (passed, detail), s = timed(criterion_6)
    report(6, passed and s < 120, s, 120, detail)
    assert passed and s < 120, detail


# 7 --------------------------------------------------------------------------

def criterion_7():
    auts = phi_guards()
    agree = 0
    for k, key in enumerate(("D2", "D3", "D4")):
        for i in range(200):
            w = phi_sample(rng_for(7, (key, i)))
            agree += lasso_in_buchi(auts[key], w) == phi_guard_predicates(w)[key]
    kept = total = 0
    for g in phi_games():
        rng = rng_for(7, g.name)
        for _ in range(20):
            win, rec = phi_play(g, rng, 300)
            total += 1
            kept += rec.verdict is (Winner.P1 if win == 1 else Winner.P2)
    return agree == 600 and kept == total, f"{agree}/600 guard checks; {kept}/{total} phi plays keep the winner"


def test_criterion_7_phi_coding():
    (passed, detail), s = timed(criterion_7)
    report(7, passed and s < 60, s, 60, detail)
    assert passed and s < 60, detail


# 8 --------------------------------------------------------------------------

def criterion_8():
    ok = sum(universality_case(rng_for(8, i), 20, 200)[0] == PASS for i in range(50))
    fixed = universality_fixed()
    return ok == 50 and all(fixed.values()), f"{ok}/50 automata with 20 plays each; fixed {fixed}"


def test_criterion_8_universality():
    (passed, detail), s = timed(criterion_8)
    report(8, passed and s < 60, s, 60, detail)
    assert passed and s < 60, detail


# 9 --------------------------------------------------------------------------

def criterion_9():
    stats = {}
    bounds = SearchBounds(60, 30, 30)

    def tally(kind, exact, v):
        agree, conclusive, n = stats.get(kind, (0, 0, 0))
        if v.outcome is not Outcome.UNKNOWN:
            conclusive += 1
            agree += v.accepted == exact
        stats[kind] = (agree, conclusive, n + 1)

    for i in range(1000):
        rng = rng_for(9, ("buchi", i))
        B = randomgen.buchi(rng, rng.randint(1, 5), ["0", "1"])
        w = randomgen.lasso(rng, ("0", "1"))
        tally("buchi", lasso_in_buchi(B, w), bounded_run_search(B, w, bounds))
    for i in range(500):
        rng = rng_for(9, ("2tape", i))
        T = randomgen.two_tape(rng, rng.randint(1, 4), ["a", "b"], ["0", "1"])
        x, y = randomgen.lasso(rng, ("a", "b")), randomgen.lasso(rng, ("0", "1"))
        tally("2tape", lassopair_in_2tape(T, (x, y)), bounded_run_search(T, PairWord(x, y), bounds))
    stable = 0
    for i in range(300):
        rng = rng_for(9, ("counter", i))
        A = randomgen.counter_machine(rng, rng.randint(1, 4), ["a", "b"])
        w = randomgen.lasso(rng, ("a", "b"))
        exact = lasso_in_counter(A, w).accepted
        c = counter_cutoff(A, w)
        stable += cutoff_counter_verdict(A, w, c) == cutoff_counter_verdict(A, w, c + 5) == exact
        tally("counter", exact, bounded_run_search(A, w, bounds))
    ok = all(a == c for a, c, _ in stats.values()) and stable == 300
    parts = [f"{k} {a}/{c} agree ({n - c} Unknown of {n})" for k, (a, c, n) in stats.items()]
    return ok, "; ".join(parts) + f"; cutoff+5 stable {stable}/300"


def test_criterion_9_engine_agreement():
    (passed, detail), s = timed(criterion_9)
    report(9, passed and s < 90, s, 90, detail)
    assert passed and s < 90, detail


# 10 -------------------------------------------------------------------------

def criterion_10():
    ok = sum(wadge_case(rng_for(10, i), 10, 100)[0] == PASS for i in range(20))
    ident = same_behaviour(copycat("01"), reduction_to_wadge_strategy(identity_transducer("01"), "01"), "01", 8)
    return ok == 20 and ident, f"{ok}/20 languages (copycat wins, all-skip loses); identity is copycat: {ident}"


def test_criterion_10_wadge():
    (passed, detail), s = timed(criterion_10)
    report(10, passed and s < 30, s, 30, detail)
    assert passed and s < 30, detail


if __name__ == "__main__":
    limits = {1: 60, 2: 120, 3: 30, 4: 20, 5: 30, 6: 120, 7: 60, 8: 60, 9: 90, 10: 30}
    failed = 0
    for n, limit in limits.items():
        (passed, detail), s = timed(globals()[f"criterion_{n}"])
        report(n, passed and s < limit, s, limit, detail)
        failed += not (passed and s < limit)
    sys.exit(1 if failed else 0)
