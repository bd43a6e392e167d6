import random

import pytest
from hypothesis import given

from conftest import lassos, seeds
from oracles import buchi_accepts_lasso, universal_by_enumeration
from omegagames import randomgen
from omegagames.automata import (AutomatonError, BuchiAutomaton, CounterBuchiAutomaton,
                                 TwoTapeBuchiAutomaton, closure_automaton, constrained_product_2tape,
                                 prefix_automaton, product_of_languages, rejected_lasso,
                                 union_2tape, universal_det_buchi)
from omegagames.membership import lasso_in_buchi, lassopair_in_2tape


def test_undeclared_state():
    with pytest.raises(AutomatonError, match="undeclared"):
        BuchiAutomaton([0], "a", [(0, "a", 1)], 0, [0])


def test_letter_outside_alphabet():
    with pytest.raises(AutomatonError, match="alphabet"):
        BuchiAutomaton([0], "a", [(0, "b", 0)], 0, [0])


def test_bad_initial_state():
    with pytest.raises(AutomatonError, match="initial"):
        BuchiAutomaton([0], "a", [], 1, [])


def test_counter_machine_rejects_decrement_under_zero_test():
    with pytest.raises(AutomatonError, match="decrement under zero-test"):
        CounterBuchiAutomaton([0], "a", 1, [(0, "a", (0,), 0, (-1,))], 0, [0])


def test_counter_component_count():
    with pytest.raises(AutomatonError):
        CounterBuchiAutomaton([0], "a", 2, [(0, "a", (0,), 0, (1,))], 0, [0])


def test_real_time_flag_is_inferred_and_enforced():
    rt = CounterBuchiAutomaton([0], "a", 1, [(0, "a", (0,), 0, (1,))], 0, [0])
    assert rt.real_time
    lam = CounterBuchiAutomaton([0], "a", 1, [(0, None, (0,), 0, (1,))], 0, [0])
    assert not lam.real_time
    with pytest.raises(AutomatonError, match="lambda"):
        CounterBuchiAutomaton([0], "a", 1, [(0, None, (0,), 0, (1,))], 0, [0], real_time=True)


def test_enabled_respects_zero_tests():
    A = CounterBuchiAutomaton([0], "a", 1, [(0, "a", (0,), 0, (1,)), (0, "a", (1,), 0, (-1,))], 0, [0])
    assert [t[2] for t in A.enabled(0, (0,))] == [(0,)]
    assert [t[2] for t in A.enabled(0, (3,))] == [(1,)]


def test_two_tape_labels_checked():
    with pytest.raises(AutomatonError):
        TwoTapeBuchiAutomaton([0], "a", "b", [(0, ("b",), (), 0)], 0, [0])
    T = TwoTapeBuchiAutomaton([0], "a", "b", [(0, (), ("b",), 0), (0, ("a",), (), 0)], 0, [0])
    assert len(T.transitions) == 2


def test_determinism_and_completeness():
    B = BuchiAutomaton([0, 1], "ab", [(0, "a", 1), (0, "b", 0), (1, "a", 1), (1, "b", 0)], 0, [1])
    assert B.is_deterministic() and B.is_complete()
    B2 = BuchiAutomaton([0, 1], "ab", [(0, "a", 1), (0, "a", 0)], 0, [1])
    assert not B2.is_deterministic() and not B2.is_complete()


def _live(B):
    """States from which some accepting lasso run exists (graph search)."""
    succ = {p: {q for _, q in B.out[p]} for p in B.states}

    def reach(p):
        seen, todo = set(), [p]
        while todo:
            for q in succ[todo.pop()]:
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        return seen
    cyc = {q for q in B.accepting if q in reach(q)}
    return {p for p in B.states if (reach(p) | {p}) & cyc}


def _closure_oracle(B, w):
    live = _live(B)
    cur = {B.initial} & live
    for n in range(1, len(w.stem) + 12 * len(w.period) + 1):
        cur = {q for p in cur for q in B.successors(p, w.letter(n))} & live
        if not cur:
            return False
    return True


@given(seeds(), lassos("01", 3, 3))
def test_closure_automaton_accepts_words_whose_prefixes_extend(seed, w):
    B = randomgen.buchi(random.Random(seed), 3, ["0", "1"])
    assert lasso_in_buchi(closure_automaton(B), w) == _closure_oracle(B, w)


@given(seeds())
def test_prefix_automaton_keeps_only_live_states(seed):
    B = randomgen.buchi(random.Random(seed), 4, ["0", "1"])
    P = prefix_automaton(B)
    assert set(P.final) <= _live(B) | {B.initial}


@given(seeds())
def test_universality_matches_enumeration(seed):
    rng = random.Random(seed)
    B = randomgen.det_buchi(rng, rng.randint(1, 3), ["0", "1"])
    assert universal_det_buchi(B) == universal_by_enumeration(B)
    w = rejected_lasso(B)
    if w is not None:
        assert not buchi_accepts_lasso(B, w)


def test_rejected_lasso_for_infinitely_many_ones():
    B = BuchiAutomaton([0, 1], "01", [(p, a, 1 if a == "1" else 0) for p in (0, 1) for a in "01"], 0, [1])
    assert rejected_lasso(B).same_word(randomgen.LassoWord("", "0"))


def test_rejected_lasso_needs_det_complete():
    with pytest.raises(AutomatonError):
        rejected_lasso(BuchiAutomaton([0], "01", [(0, "0", 0)], 0, [0]))


@given(seeds(), lassos("ab", 2, 2), lassos("01", 2, 2))
def test_union_is_disjunction(seed, x, y):
    rng = random.Random(seed)
    T1 = randomgen.two_tape(rng, 3, ["a", "b"], ["0", "1"])
    T2 = randomgen.two_tape(rng, 3, ["a", "b"], ["0", "1"])
    U = union_2tape(T1, T2)
    assert lassopair_in_2tape(U, (x, y)) == (lassopair_in_2tape(T1, (x, y)) or lassopair_in_2tape(T2, (x, y)))


@given(seeds(), lassos("ab", 3, 3), lassos("01", 3, 3))
def test_product_of_languages_is_conjunction(seed, x, y):
    rng = random.Random(seed)
    G1 = randomgen.buchi(rng, 3, ["a", "b"])
    G2 = randomgen.buchi(rng, 3, ["0", "1"])
    P = product_of_languages(G1, G2)
    assert lassopair_in_2tape(P, (x, y)) == (buchi_accepts_lasso(G1, x) and buchi_accepts_lasso(G2, y))


@given(seeds(), lassos("ab", 2, 2), lassos("01", 2, 2))
def test_constrained_product_is_intersection(seed, x, y):
    rng = random.Random(seed)
    T = randomgen.two_tape(rng, 3, ["a", "b"], ["0", "1"])
    G1 = randomgen.buchi(rng, 2, ["a", "b"], density=0.9)
    G2 = randomgen.buchi(rng, 2, ["0", "1"], density=0.9)
    P = constrained_product_2tape(T, G1, G2)
    want = lassopair_in_2tape(T, (x, y)) and buchi_accepts_lasso(G1, x) and buchi_accepts_lasso(G2, y)
    assert lassopair_in_2tape(P, (x, y)) == want
