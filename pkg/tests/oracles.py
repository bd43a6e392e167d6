"""Brute-force reference implementations used to freeze and check values.

They favour obviousness over speed and share no code with the library
beyond the word and automaton containers.
"""
import itertools
from functools import lru_cache

from omegagames.words import LassoWord


def h_literal(x, n_blocks):
    """First blocks of h(x) spelled out literally."""
    out = ""
    for i in range(1, n_blocks + 1):
        out += "0" * i + ("A" if i % 2 else "") + x(i)
    return out


def alpha_literal(n_blocks):
    return "".join("0" * i + ("AA" if i % 2 else "A") for i in range(1, n_blocks + 1))


def phi_literal(ns):
    return "".join("1" * (2 * (n + 1)) + "0" for n in ns)


def theta_literal(xs, S):
    return "".join(a + "E" * S ** i for i, a in enumerate(xs, 1))


def _compose(r, s):
    """Relations as sets of (p, q, saw_accepting)."""
    out = set()
    for p, q, f in r:
        for q2, t, g in s:
            if q == q2:
                out.add((p, t, f or g))
    return out


def _letter_relation(B, a):
    return {(p, q, q in B.accepting) for p in B.states for q in B.successors(p, a)}


def _word_relation(B, word):
    rel = {(p, p, False) for p in B.states}
    for a in word:
        rel = _compose(rel, _letter_relation(B, a))
    return rel


def _closure(rel, step):
    out = set(rel)
    while True:
        new = _compose(out, step) - out
        if not new:
            return out
        out |= new


def buchi_accepts_lasso(B, w: LassoWord) -> bool:
    """Relation semantics: some state q is reached at a period boundary and
    period^k leads from q back to q through an accepting state."""
    stem = _word_relation(B, w.stem)
    per = _word_relation(B, w.period)
    plus = _closure(per, per)
    boundary = {q for p, q, _ in stem if p == B.initial}
    boundary |= {q for p, q, _ in plus if p in boundary}
    return any((q, q, True) in plus for q in boundary)


def all_lassos(alphabet, max_stem, max_period):
    for s in range(max_stem + 1):
        for stem in itertools.product(alphabet, repeat=s):
            for p in range(1, max_period + 1):
                for period in itertools.product(alphabet, repeat=p):
                    yield LassoWord(stem, period)


def universal_by_enumeration(B, max_stem=3, max_period=3) -> bool:
    return all(buchi_accepts_lasso(B, w) for w in all_lassos(B.alphabet, max_stem, max_period))


def in_pref_h_brute(u, sigma):
    """u is a prefix of a word of the H guard language: odd-indexed 0-runs of
    odd length followed by A and a letter, even-indexed runs of even positive
    length followed by a letter. Tries every run length that fits."""
    u = "".join(u)

    @lru_cache(maxsize=None)
    def ok(pos, odd):
        rest = u[pos:]
        if not rest:
            return True
        for r in range(0, len(rest) + 2):
            if (r % 2 == 0) == odd or (not odd and r == 0):
                continue
            if len(rest) <= r:
                if rest == "0" * len(rest):
                    return True
                continue
            if rest[:r] != "0" * r:
                continue
            k = pos + r
            if odd:
                if u[k] != "A":
                    continue
                k += 1
                if k == len(u):
                    return True
            if u[k] in sigma and ok(k + 1, not odd):
                return True
        return False

    return ok(0, True)


def integer_game_value(words, bound, history=()):
    """Player 1 wins the open game from `history` (exhaustive minimax)."""
    depth = max((len(w) for w in words), default=0)
    if any(tuple(history[:len(w)]) == tuple(w) for w in words):
        return True
    if len(history) >= depth:
        return False
    vals = [integer_game_value(words, bound, history + (a,)) for a in range(bound + 2)]
    return any(vals) if len(history) % 2 == 0 else all(vals)
