"""Seeded generators of random machines and lassos for suites and tests."""
import random

from .automata import BuchiAutomaton, CounterBuchiAutomaton, TwoTapeBuchiAutomaton
from .words import LassoWord


def lasso(rng: random.Random, alphabet, max_stem=3, max_period=3, min_period=1):
    alphabet = list(alphabet)
    s = rng.randint(0, max_stem)
    p = rng.randint(min_period, max_period)
    return LassoWord([rng.choice(alphabet) for _ in range(s)],
                     [rng.choice(alphabet) for _ in range(p)])


def buchi(rng, n_states, alphabet, density=0.6):
    states = list(range(n_states))
    ts = [(p, a, q) for p in states for a in alphabet for q in states
          if rng.random() < density / n_states]
    acc = [p for p in states if rng.random() < 0.4]
    return BuchiAutomaton(states, alphabet, ts, 0, acc)


def det_buchi(rng, n_states, alphabet):
    states = list(range(n_states))
    ts = [(p, a, rng.randrange(n_states)) for p in states for a in alphabet]
    acc = [p for p in states if rng.random() < 0.5]
    return BuchiAutomaton(states, alphabet, ts, 0, acc)


def counter_machine(rng, n_states, alphabet, density=0.5, lambdas=False):
    """Random one-counter Buchi machine (real-time unless lambdas)."""
    states = list(range(n_states))
    letters = list(alphabet) + ([None] if lambdas else [])
    ts = []
    for p in states:
        for a in letters:
            for test in (0, 1):
                for d in ((0, 1) if test == 0 else (-1, 0, 1)):
                    for q in states:
                        if rng.random() < density / (n_states * (1.5 if test else 1)):
                            if a is None and rng.random() < 0.6:
                                continue
                            ts.append((p, a, (test,), q, (d,)))
    acc = [p for p in states if rng.random() < 0.5]
    return CounterBuchiAutomaton(states, alphabet, 1, ts, 0, acc)


def two_tape(rng, n_states, alphabet1, alphabet2, max_label=2, n_trans=None):
    states = list(range(n_states))
    n_trans = n_trans or rng.randint(n_states, 3 * n_states)
    ts = []
    for _ in range(n_trans):
        u = tuple(rng.choice(alphabet1) for _ in range(rng.randint(0, max_label)))
        v = tuple(rng.choice(alphabet2) for _ in range(rng.randint(0, max_label)))
        ts.append((rng.randrange(n_states), u, v, rng.randrange(n_states)))
    acc = [p for p in states if rng.random() < 0.5]
    return TwoTapeBuchiAutomaton(states, alphabet1, alphabet2, ts, 0, acc)


def _coded_tape(rng, sigma, lengths, second, first=1):
    out = []
    for i, r in enumerate(lengths, first):
        out += ["0"] * r
        if second:
            out += ["A", "A"] if i % 2 else ["A"]
        else:
            out += (["A"] if i % 2 else []) + [rng.choice(sigma)]
    return out


def near_coded_pair(rng, sigma, noise=0.3):
    """Lasso pair shaped like (h(x), alpha) on an initial segment, with run
    lengths perturbed and a periodic tail of blocks."""
    sigma = list(sigma)
    n = rng.randint(3, 7)
    base = list(range(1, n + 1))
    tapes = []
    for second in (False, True):
        lengths = [max(0, r + rng.choice([-1, 1])) if rng.random() < noise else r for r in base]
        tail = [rng.randint(1, n + 2) for _ in range(rng.choice([2, 2, 4]))]
        stem = _coded_tape(rng, sigma, lengths, second)
        period = _coded_tape(rng, sigma, tail, second)
        if rng.random() < noise / 3:
            k = rng.randrange(len(stem))
            stem[k] = rng.choice(sigma + ["0", "A"]) if not second else rng.choice(["0", "A"])
        if rng.random() < 0.05:
            period = ["0"]
        tapes.append(LassoWord(stem, period))
    return tuple(tapes)


def guard_walk_pair(rng, guards, max_len=14):
    """Lasso pair whose stem follows Pref(H) x Pref(H') for a while, then
    possibly breaks it; the period is a short random guard walk."""
    state = guards.pref_start
    letters = [(a, b) for a in guards.H.alphabet for b in guards.H2.alphabet]
    stem = []
    for _ in range(rng.randint(0, max_len)):
        ok = [l for l in letters if guards.pref_step(state, l) is not None]
        l = rng.choice(ok)
        stem.append(l)
        state = guards.pref_step(state, l)
    if rng.random() < 0.5:
        stem.append(rng.choice(letters))
    period = []
    for _ in range(rng.randint(1, 6)):
        ok = [l for l in letters if guards.pref_step(state, l) is not None] or letters
        l = rng.choice(ok) if rng.random() < 0.8 else rng.choice(letters)
        period.append(l)
        state = guards.pref_step(state, l) or guards.pref_start
    return (LassoWord([a for a, _ in stem], [a for a, _ in period]),
            LassoWord([b for _, b in stem], [b for _, b in period]))


def guard_shaped_pair(rng, sigma, max_run=5):
    """Lasso pair in H x H': odd-indexed runs have odd length, even-indexed
    runs even positive length, and the period holds an even number of blocks."""
    sigma = list(sigma)

    def run(i):
        k = rng.randint(0, max_run // 2)
        return 2 * k + 1 if i % 2 else 2 * k + 2

    n = rng.randint(0, 4)
    m = 2 * rng.randint(1, 2)
    lengths = [run(i) for i in range(1, n + m + 1)]
    if rng.random() < 0.5:
        other = lengths
    else:
        other = [run(i) for i in range(1, n + m + 1)]
    tapes = []
    for second, ls in ((False, lengths), (True, other)):
        stem = _coded_tape(rng, sigma, ls[:n], second)
        tail = _coded_tape(rng, sigma, ls[n:], second, first=n + 1)
        tapes.append((stem, tail))
    return tuple(LassoWord(s, p) for s, p in tapes)
