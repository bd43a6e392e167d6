import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import seeds
from oracles import integer_game_value
from omegagames.automata import BuchiAutomaton, universal_det_buchi
from omegagames import randomgen
from omegagames.codings import in_pref_h, in_pref_h2, phi_guard_predicates
from omegagames.games import (FiniteMemory, GSArena, IntegerOpenGame, StrategyError, WadgeArena,
                              Winner, coded_arena, constant, copycat, delay_transducer,
                              extract_strategy_from_coded, identity_transducer, play_gs,
                              play_wadge, random_mealy, reduction_to_wadge_strategy,
                              same_behaviour, solve_universality_game, transfer_phi_strategy,
                              transfer_strategy_to_coded, universality_arena)
from omegagames.membership import lasso_in_buchi
from omegagames.suites import (SIGMA, _one_state, extraction_round_trip, phi_games, phi_play,
                               transfer_family, transfer_play, universality_fixed)
from omegagames.words import LassoWord

INF_ONES = BuchiAutomaton([0, 1], "01", [(p, a, 1 if a == "1" else 0) for p in (0, 1) for a in "01"], 0, [1])
INF_ONES_ARENA = GSArena(("0", "1"), lambda w: lasso_in_buchi(INF_ONES, w))


def p1_alternating():
    # flips after each of its own moves
    s = FiniteMemory(1, "01", 0, {0: "0", 1: "1"}, {})
    s.observe = lambda mem, letter, own: 1 - mem if own else mem
    return s


# plays

def test_constant_plays():
    rec = play_gs(INF_ONES_ARENA, constant(1, "01", "1"), constant(2, "01", "1"), 10)
    assert rec.verdict is Winner.P1 and rec.word.same_word(LassoWord("", "1"))
    rec = play_gs(INF_ONES_ARENA, constant(1, "01", "0"), constant(2, "01", "0"), 10)
    assert rec.verdict is Winner.P2


def test_alternating_player_one():
    rec = play_gs(INF_ONES_ARENA, p1_alternating(), constant(2, "01", "0"), 10)
    assert rec.word.same_word(LassoWord("", "0010"))
    assert rec.verdict is Winner.P1


@given(seeds(), st.integers(1, 30))
def test_authors_alternate(seed, horizon):
    rng = random.Random(seed)
    rec = play_gs(INF_ONES_ARENA, random_mealy(rng, 1, "01"), random_mealy(rng, 2, "01"), horizon)
    assert rec.authors == [1 + k % 2 for k in range(len(rec.moves))]


@given(seeds())
def test_finite_memory_plays_close_into_lassos(seed):
    rng = random.Random(seed)
    s1, s2 = random_mealy(rng, 1, "01", 3), random_mealy(rng, 2, "01", 3)
    rec = play_gs(INF_ONES_ARENA, s1, s2, 20)
    assert rec.word is not None
    # the lasso reproduces every move played
    assert tuple(rec.moves) == rec.word.prefix(len(rec.moves))


def test_letters_outside_the_arena_are_refused():
    with pytest.raises(StrategyError):
        play_gs(INF_ONES_ARENA, constant(1, "012", "2"), constant(2, "01", "0"), 5)
    with pytest.raises(StrategyError):
        play_gs(INF_ONES_ARENA, constant(2, "01", "0"), constant(2, "01", "0"), 5)


def test_callback_strategies_give_unknown():
    from omegagames.games import Callback
    s1 = Callback(1, "01", lambda h: "1")
    rec = play_gs(INF_ONES_ARENA, s1, constant(2, "01", "0"), 10)
    assert rec.verdict is Winner.UNKNOWN and len(rec.moves) == 20


# coding monitor

def test_non_coding_letters_leave_the_guards():
    """At every coded position of some prefix, any letter other than the
    coded ones either stays a guard prefix only while still decoding, or
    is flagged by the monitor."""
    arena = coded_arena(SIGMA)
    mon = arena.monitor
    for n in range(1, 40):
        e1, e2, _ = mon.expected(n)
        base = [(e1 if e1 != "?" else "a", e2) for e1, e2, _ in (mon.expected(k) for k in range(1, n))]
        for letter in arena.alphabet:
            u = [a for a, _ in base] + [letter[0]]
            v = [b for _, b in base] + [letter[1]]
            coding = mon.in_coding(n, letter)
            assert coding == (letter[1] == e2 and (letter[0] == e1 or (e1 == "?" and letter[0] in SIGMA)))
            if coding:
                assert in_pref_h(u, SIGMA) and in_pref_h2(v)


@given(seeds())
@settings(max_examples=40)
def test_exit_events_match_coding_prefixes(seed):
    from omegagames.codings import is_pref_of_coding
    from omegagames.games import random_coded_opponent
    rng = random.Random(seed)
    arena = coded_arena(SIGMA)
    s1 = random_coded_opponent(rng, 1, SIGMA, arena.monitor)
    s2 = random_coded_opponent(rng, 2, SIGMA, arena.monitor)
    rec = play_gs(arena, s1, s2, 30)
    moves = rec.moves
    first = next((n for n in range(1, len(moves) + 1)
                  if not is_pref_of_coding([a for a, _ in moves[:n]], [b for _, b in moves[:n]])), None)
    if first is not None:
        assert rec.exit == (2 - first % 2, first)


# transfer into the coded game

@pytest.mark.parametrize("name,A,win,base", transfer_family(), ids=lambda v: v if isinstance(v, str) else "")
def test_transferred_strategy_never_loses(name, A, win, base):
    rng = random.Random(name)
    want = Winner.P1 if win == 1 else Winner.P2
    for _ in range(15):
        rec = transfer_play(name, A, win, base, rng, 200)
        assert rec.verdict in (want, Winner.UNKNOWN)


def test_owner_mismatch():
    with pytest.raises(StrategyError):
        transfer_strategy_to_coded(_one_state(True), constant(2, SIGMA, "a"), 1)


def test_player_one_stays_in_guards_after_opponent_exit():
    arena = coded_arena(SIGMA)
    S = transfer_strategy_to_coded(_one_state(True), constant(1, SIGMA, "a"), 1)
    bad = constant(2, arena.alphabet, ("A", "A"))
    rec = play_gs(arena, S, bad, 50)
    # ("A", "A") matches the coding at position 2 and leaves it at 4
    assert rec.exit == (2, 4)
    assert rec.verdict is Winner.P1


def test_constant_coded_strategy_exits_at_once():
    A = _one_state(True)
    arena = coded_arena(SIGMA)
    E = extract_strategy_from_coded(A, constant(1, arena.alphabet, ("a", "0")), 1)
    assert E.exit_event(E.start()) == 1


@given(seeds(), st.sampled_from([1, 2]))
@settings(max_examples=20)
def test_extraction_inverts_transfer(seed, owner):
    assert extraction_round_trip(random.Random(seed), owner, depth=6)


# integer games and the binary coding

@pytest.mark.parametrize("game", phi_games(), ids=lambda g: g.name)
def test_integer_game_winner_matches_minimax(game):
    assert game.p1_wins_from(()) == integer_game_value(game.words, game.bound)
    assert game.winner() == (1 if integer_game_value(game.words, game.bound) else 2)


@given(st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=6))
def test_random_integer_games_match_minimax(words):
    game = IntegerOpenGame(2, words)
    assert game.p1_wins_from(()) == integer_game_value(game.words, 2)


@pytest.mark.parametrize("game", phi_games(), ids=lambda g: g.name)
def test_phi_transfer_keeps_the_winner(game):
    rng = random.Random(game.name)
    for _ in range(10):
        win, rec = phi_play(game, rng, 150)
        assert rec.verdict is (Winner.P1 if win == 1 else Winner.P2)


def test_phi_zero_move_emits_two_ones():
    s = transfer_phi_strategy(constant(1, range(4), 0), 2, "BaireToCantor")
    m = s.start()
    out = []
    for k in range(3):
        a = s.move(m) if k != 1 else "1"
        m = s.observe(m, a, k != 1)
        out.append(a)
    assert "".join(out) == "110"


def test_phi_opponent_never_closing_lands_in_d3():
    game = phi_games()[0]
    S = transfer_phi_strategy(game.winning_strategy(), game.bound, "BaireToCantor")
    from omegagames.games import phi_winning_oracle
    arena = GSArena(("0", "1"), phi_winning_oracle(game))
    rec = play_gs(arena, S, constant(2, "01", "1"), 50)
    assert rec.verdict is Winner.P1


def test_phi_early_close_by_opponent_is_d2_or_d4():
    # player 2 closes player 1's block: that is a d2 / d4 shaped prefix
    game = phi_games()[2]
    S = transfer_phi_strategy(game.winning_strategy(), game.bound, "BaireToCantor")
    from omegagames.games import phi_winning_oracle
    rec = play_gs(GSArena(("0", "1"), phi_winning_oracle(game)), S, constant(2, "01", "0"), 50)
    tags = phi_guard_predicates(rec.word)
    assert tags["D2"] or tags["D4"] or tags["D3"]
    assert rec.verdict is Winner.P1


def test_unknown_phi_direction():
    with pytest.raises(StrategyError):
        transfer_phi_strategy(constant(1, range(3), 0), 1, "sideways")


@pytest.mark.parametrize("game", phi_games(), ids=lambda g: g.name)
def test_phi_round_trip(game):
    s = game.winning_strategy()
    back = transfer_phi_strategy(transfer_phi_strategy(s, game.bound, "BaireToCantor"),
                                 game.bound, "CantorToBaire")
    assert same_behaviour(s, back, game.alphabet, 4)


# universality

def test_universality_fixed_cases():
    assert all(universality_fixed().values())


@given(seeds())
@settings(max_examples=40)
def test_universality_winner(seed):
    rng = random.Random(seed)
    T = randomgen.det_buchi(rng, rng.randint(1, 4), ["0", "1"])
    win, strategy = solve_universality_game(T)
    assert (win == 1) == universal_det_buchi(T)
    arena = universality_arena(T)
    for _ in range(5):
        opp = random_mealy(rng, 3 - win, "01", 2)
        rec = play_gs(arena, strategy, opp, 60) if win == 1 else play_gs(arena, opp, strategy, 60)
        assert rec.verdict is (Winner.P1 if win == 1 else Winner.P2)


def test_universality_needs_determinism():
    nd = BuchiAutomaton([0, 1], "01", [(0, "0", 0), (0, "0", 1), (0, "1", 0), (1, "0", 1), (1, "1", 1)], 0, [1])
    with pytest.raises(ValueError):
        solve_universality_game(nd)


# Wadge

def test_copycat_wins_against_itself():
    L = lambda w: lasso_in_buchi(INF_ONES, w)
    arena = WadgeArena(("0", "1"), ("0", "1"), L, L)
    for s1 in (constant(1, "01", "1"), p1_alternating()):
        assert play_wadge(arena, s1, copycat("01"), 30).verdict is Winner.P2


def test_skipping_forever_loses():
    L = lambda w: lasso_in_buchi(INF_ONES, w)
    arena = WadgeArena(("0", "1"), ("0", "1"), L, L)
    rec = play_wadge(arena, constant(1, "01", "1"), constant(2, "01~", "~"), 30)
    assert rec.verdict is Winner.P1 and rec.notes["b"] == "finite"


def test_wrong_side_loses():
    L = lambda w: lasso_in_buchi(INF_ONES, w)
    only_zeros = lambda w: set(w.period) == {"0"} and set(w.stem) <= {"0"}
    arena = WadgeArena(("0", "1"), ("0", "1"), L, only_zeros)
    rec = play_wadge(arena, constant(1, "01", "1"), copycat("01"), 30)
    assert rec.verdict is Winner.P1


def test_identity_reduction_is_copycat():
    assert same_behaviour(copycat("01"), reduction_to_wadge_strategy(identity_transducer("01"), "01"), "01", 7)


def test_delay_reduction_skips_once_then_copies():
    s = reduction_to_wadge_strategy(delay_transducer("01"), "01")
    rec = play_wadge(WadgeArena(("0", "1"), ("0", "1"), bool, bool), p1_alternating(), s, 50)
    p2 = rec.moves[1::2]
    p1 = rec.moves[0::2]
    assert p2[0] == "~"
    assert p2[1:] == p1[:len(p2) - 1]


def test_swap_reduction_reaches_the_complement():
    swap = {"0": "1", "1": "0"}
    from omegagames.games import SequentialTransducer
    f = SequentialTransducer(0, {(0, a): (0, (swap[a],)) for a in "01"})
    L = lambda w: lasso_in_buchi(INF_ONES, w)
    inf_zeros = lambda w: "0" in w.period
    arena = WadgeArena(("0", "1"), ("0", "1"), L, inf_zeros)
    rng = random.Random(5)
    for _ in range(10):
        rec = play_wadge(arena, random_mealy(rng, 1, "01", 3), reduction_to_wadge_strategy(f, "01"), 40)
        assert rec.verdict is Winner.P2
