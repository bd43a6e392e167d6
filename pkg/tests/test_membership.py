import dataclasses
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import lassos, seeds
from oracles import buchi_accepts_lasso
from omegagames import randomgen
from omegagames.automata import BuchiAutomaton, CounterBuchiAutomaton, TwoTapeBuchiAutomaton
from omegagames.constructions import build_R1, run_builder_R1
from omegagames.membership import (CertificateError, Outcome, SearchBounds, Segment,
                                   bounded_run_search, check_counter_run, counter_cutoff,
                                   cutoff_counter_verdict, explicit_counter_search, lasso_in_buchi,
                                   lasso_in_counter, lassopair_in_2tape, unroll_certificate,
                                   validate_certificate)
from omegagames.words import AlphaWord, HCode, LassoWord, PairWord, RunSchedule

INF_ONES = BuchiAutomaton([0, 1], "01", [(p, a, 1 if a == "1" else 0) for p in (0, 1) for a in "01"], 0, [1])


def test_infinitely_many_ones():
    assert lasso_in_buchi(INF_ONES, LassoWord("", "1"))
    assert not lasso_in_buchi(INF_ONES, LassoWord("", "0"))
    assert not lasso_in_buchi(INF_ONES, LassoWord("1", "0"))
    assert lasso_in_buchi(INF_ONES, LassoWord("000", "01"))


@given(seeds(), lassos("01"))
def test_buchi_engine_matches_relation_oracle(seed, w):
    rng = random.Random(seed)
    B = randomgen.buchi(rng, rng.randint(1, 5), ["0", "1"])
    assert lasso_in_buchi(B, w) == buchi_accepts_lasso(B, w)


@given(seeds(), lassos("01"), st.integers(5, 40))
def test_buchi_bounded_search_never_contradicts(seed, w, depth):
    rng = random.Random(seed)
    B = randomgen.buchi(rng, rng.randint(1, 5), ["0", "1"])
    v = bounded_run_search(B, w, SearchBounds(depth, 10, 10))
    if v.outcome is not Outcome.UNKNOWN:
        assert v.accepted == lasso_in_buchi(B, w)


@given(seeds(), lassos("01", 3, 3))
def test_bounded_search_is_monotone_in_depth(seed, w):
    rng = random.Random(seed)
    B = randomgen.buchi(rng, 4, ["0", "1"])
    seen = set()
    for d in (4, 8, 16, 32):
        v = bounded_run_search(B, w, SearchBounds(d, 10, 10))
        if v.outcome is not Outcome.UNKNOWN:
            seen.add(v.outcome)
    assert len(seen) <= 1


def test_zero_depth_is_unknown():
    assert bounded_run_search(INF_ONES, LassoWord("", "1"), SearchBounds(0, 0, 0)).outcome is Outcome.UNKNOWN


def test_negative_bounds():
    with pytest.raises(ValueError):
        SearchBounds(-1, 2, 3)
    assert SearchBounds.parse("5,6,7") == SearchBounds(5, 6, 7)


# two-tape

LOCKSTEP = TwoTapeBuchiAutomaton(["q"], "a", "b", [("q", ("a",), ("b",), "q")], "q", ["q"])
ASYNC = TwoTapeBuchiAutomaton(["q"], "a", "b", [("q", ("a",), (), "q"), ("q", (), ("b", "b"), "q")], "q", ["q"])


def test_two_tape_examples():
    aw, bw = LassoWord("", "a"), LassoWord("", "b")
    assert lassopair_in_2tape(LOCKSTEP, (aw, bw))
    T = TwoTapeBuchiAutomaton(["q"], "a", "ab", [("q", ("a",), ("b",), "q")], "q", ["q"])
    assert not lassopair_in_2tape(T, (aw, LassoWord("a", "b")))
    assert lassopair_in_2tape(ASYNC, (aw, bw))


def test_both_tapes_must_advance():
    only_first = TwoTapeBuchiAutomaton(["q"], "a", "b", [("q", ("a",), (), "q")], "q", ["q"])
    assert not lassopair_in_2tape(only_first, (LassoWord("", "a"), LassoWord("", "b")))


@given(seeds(), lassos("ab", 3, 3), lassos("01", 3, 3))
def test_two_tape_engine_agrees_with_bounded_search(seed, x, y):
    rng = random.Random(seed)
    T = randomgen.two_tape(rng, rng.randint(1, 4), ["a", "b"], ["0", "1"])
    v = bounded_run_search(T, PairWord(x, y), SearchBounds(40, 10, 10))
    if v.outcome is not Outcome.UNKNOWN:
        assert v.accepted == lassopair_in_2tape(T, (x, y))


# one counter

def matched_ab():
    """Counts a's, pops them on b's, then loops on b once the counter is zero."""
    ts = [("q0", "a", (0,), "q0", (1,)), ("q0", "a", (1,), "q0", (1,)),
          ("q0", "b", (1,), "q1", (-1,)), ("q1", "b", (1,), "q1", (-1,)),
          ("q1", "b", (0,), "q2", (0,)), ("q2", "b", (0,), "q2", (0,))]
    return CounterBuchiAutomaton(["q0", "q1", "q2"], "ab", 1, ts, "q0", ["q2"])


def test_counter_examples():
    A = matched_ab()
    assert lasso_in_counter(A, LassoWord("aabb", "b")).accepted
    assert lasso_in_counter(A, LassoWord("aab", "ab")).rejected
    assert lasso_in_counter(A, LassoWord("", "a")).rejected


def test_counter_without_accepting_states_rejects():
    A = CounterBuchiAutomaton([0], "a", 1, [(0, "a", (0,), 0, (1,)), (0, "a", (1,), 0, (1,))], 0, [])
    assert lasso_in_counter(A, LassoWord("", "a")).rejected


def test_growing_counter_run_is_found():
    # only accepting runs push forever: needs the pumping argument, not a finite cycle
    ts = [(0, "a", (0,), 1, (1,)), (1, "a", (1,), 1, (1,))]
    A = CounterBuchiAutomaton([0, 1], "a", 1, ts, 0, [1])
    v = lasso_in_counter(A, LassoWord("", "a"))
    assert v.accepted
    assert check_counter_run(A, LassoWord("", "a"), v.evidence["run"])


@given(seeds(), lassos("ab", 3, 3))
def test_counter_verdict_stable_under_larger_cutoff(seed, w):
    rng = random.Random(seed)
    A = randomgen.counter_machine(rng, rng.randint(1, 4), ["a", "b"])
    c = counter_cutoff(A, w)
    exact = lasso_in_counter(A, w).accepted
    assert cutoff_counter_verdict(A, w, c) == cutoff_counter_verdict(A, w, c + 5) == exact


@given(seeds(), lassos("ab", 3, 3))
def test_accepted_counter_lassos_carry_replayable_runs(seed, w):
    rng = random.Random(seed)
    A = randomgen.counter_machine(rng, rng.randint(1, 4), ["a", "b"])
    v = lasso_in_counter(A, w)
    if v.accepted:
        assert check_counter_run(A, w, v.evidence["run"], rounds=4)


@given(seeds(), lassos("ab", 3, 3))
def test_counter_bounded_search_never_contradicts(seed, w):
    rng = random.Random(seed)
    A = randomgen.counter_machine(rng, rng.randint(1, 3), ["a", "b"])
    v = bounded_run_search(A, w, SearchBounds(30, 12, 10))
    if v.outcome is not Outcome.UNKNOWN:
        assert v.accepted == lasso_in_counter(A, w).accepted


def test_two_counter_engine_is_bounded():
    ts = [(0, "a", (0, 0), 0, (1, 1)), (0, "a", (1, 1), 0, (1, 1))]
    A = CounterBuchiAutomaton([0], "a", 2, ts, 0, [0])
    v = lasso_in_counter(A, LassoWord("", "a"), SearchBounds(20, 8, 8))
    assert v.outcome in (Outcome.ACCEPT, Outcome.UNKNOWN)
    assert explicit_counter_search(A, LassoWord("", "a"), 8, 20)[0] is not Outcome.REJECT


# certificates on R1

def universal_counter():
    ts = [(0, a, (t,), 0, (0,)) for a in "ab" for t in (0, 1)]
    return CounterBuchiAutomaton([0], "ab", 1, ts, 0, [0])


@pytest.fixture(scope="module")
def r1_certificate():
    A = universal_counter()
    x = LassoWord("", "a")
    R = build_R1(A)
    run = lasso_in_counter(A, x).evidence["run"]
    return R, run_builder_R1(A, x, run, R)


def test_built_certificate_validates(r1_certificate):
    R, cert = r1_certificate
    assert validate_certificate(R, cert, 30)
    assert bounded_run_search(R, cert.word, SearchBounds(10, 5, 10), hint=cert).accepted


def test_certificate_without_witness_fails(r1_certificate):
    R, cert = r1_certificate
    assert not validate_certificate(R, dataclasses.replace(cert, accepting_witness=None), 5)


def test_certificate_with_shifted_schedule_fails(r1_certificate):
    R, cert = r1_certificate
    loop = [dataclasses.replace(s, b=s.b + 1) if s.a else s for s in cert.loop]
    assert not validate_certificate(R, dataclasses.replace(cert, loop=loop), 2)


def test_negative_schedule_is_malformed(r1_certificate):
    R, cert = r1_certificate
    loop = [Segment(s.choices, -1, 0, s.role) for s in cert.loop]
    with pytest.raises(CertificateError):
        validate_certificate(R, dataclasses.replace(cert, loop=loop), 2)


def test_validated_certificate_unrolls_to_a_run_visiting_accepting_states(r1_certificate):
    R, cert = r1_certificate
    steps = unroll_certificate(R, cert, 6)
    assert steps is not None
    visits = sum(1 for t in steps[len(cert.prefix):] if t[3] in R.accepting)
    assert visits >= 2


def test_corrupted_block_lengths_die_early():
    R = build_R1(universal_counter())
    x = LassoWord("", "a")
    bad = PairWord(HCode(x, RunSchedule(overrides=((2, 5),))), AlphaWord())
    assert bounded_run_search(R, bad, SearchBounds(40, 20, 10)).rejected
