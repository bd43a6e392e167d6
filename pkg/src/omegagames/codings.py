"""Codings of words and games, their regular guard languages, and the
classifiers of coding violations.

Schedule checks are written twice on purpose: once as automata (built
here) and once as direct predicates (regular expressions and run scans).
"""
import itertools
import re
from dataclasses import dataclass

from .automata import BuchiAutomaton, FiniteAutomaton, closure_automaton, prefix_automaton
from .membership import SearchBounds
from .words import (AlphaWord, HCode, LassoWord, PairWord, PhiCode, ThetaCode,
                    WordError, normalize_lasso)

ZERO, MARK = "0", "A"
GAMMA = (ZERO, MARK)


class DecodeError(ValueError):
    def __init__(self, position, reason):
        super().__init__(f"position {position}: {reason}")
        self.position = position
        self.reason = reason


@dataclass(frozen=True)
class CodingAlphabets:
    base: tuple

    def __post_init__(self):
        if ZERO in self.base or MARK in self.base:
            raise WordError("letters 0 and A are reserved by the coding")

    @property
    def extended(self):
        return tuple(self.base) + (ZERO, MARK)

    @property
    def gamma(self):
        return GAMMA

    @property
    def product(self):
        return tuple((a, b) for a in self.extended for b in GAMMA)


# ---------------------------------------------------------------------------
# h and alpha

def encode_h(x: LassoWord) -> HCode:
    return HCode(x)


def decode_h(prefix) -> tuple:
    """Letters x(1..m) carried by a prefix of some h(x); DecodeError at the
    first position breaking the schedule."""
    out = []
    n = 0
    i = 1
    L = len(prefix)
    while n < L:
        for _ in range(i):
            if n >= L:
                return tuple(out)
            if prefix[n] != ZERO:
                raise DecodeError(n + 1, f"0-run {i} must have length {i}")
            n += 1
        if n >= L:
            return tuple(out)
        if i % 2:
            if prefix[n] != MARK:
                raise DecodeError(n + 1, f"expected A before letter {i}")
            n += 1
            if n >= L:
                return tuple(out)
        a = prefix[n]
        if a in (ZERO, MARK):
            raise DecodeError(n + 1, f"0-run {i} must have length {i}" if a == ZERO
                              else f"reserved letter A in place of letter {i}")
        out.append(a)
        n += 1
        i += 1
    return tuple(out)


def is_alpha_prefix(v) -> bool:
    return tuple(v) == AlphaWord().prefix(len(v))


def is_pref_of_coding(u, v) -> bool:
    try:
        decode_h(tuple(u))
    except DecodeError:
        return False
    return is_alpha_prefix(v)


def coded_position_of(i: int) -> int:
    """Position of x(i) inside h(x)."""
    n = 0
    for j in range(1, i + 1):
        n += j + (j % 2) + 1
    return n


# ---------------------------------------------------------------------------
# guard automata

def h_guard(sigma) -> BuchiAutomaton:
    """[(00)* 0 A S (00)+ S]^w, deterministic."""
    S = list(sigma)
    ts = [("b", ZERO, "odd"), ("odd", ZERO, "even"), ("even", ZERO, "odd"),
          ("odd", MARK, "mark"),
          ("s1", ZERO, "z1"), ("z1", ZERO, "z2"), ("z2", ZERO, "z1")]
    ts += [("mark", a, "s1") for a in S] + [("z2", a, "b") for a in S]
    states = ["b", "odd", "even", "mark", "s1", "z1", "z2"]
    return BuchiAutomaton(states, S + [ZERO, MARK], ts, "b", ["b"], name="H")


def h2_guard() -> BuchiAutomaton:
    """[(00)* 0 AA (00)+ A]^w, deterministic."""
    ts = [("b", ZERO, "odd"), ("odd", ZERO, "even"), ("even", ZERO, "odd"),
          ("odd", MARK, "mark"), ("mark", MARK, "s1"),
          ("s1", ZERO, "z1"), ("z1", ZERO, "z2"), ("z2", ZERO, "z1"), ("z2", MARK, "b")]
    states = ["b", "odd", "even", "mark", "s1", "z1", "z2"]
    return BuchiAutomaton(states, list(GAMMA), ts, "b", ["b"], name="H'")


def ends_with_zero(P: FiniteAutomaton, name) -> FiniteAutomaton:
    """Pref(L) restricted to words whose last letter is 0."""
    states = [("s", q) for q in P.states] + [("z", q) for q in P.states]
    ts = []
    for p, a, q in P.transitions:
        for tag in ("s", "z"):
            ts.append(((tag, p), a, ("z" if a == ZERO else "s", q)))
    final = [("z", q) for q in P.final]
    return FiniteAutomaton(states, P.alphabet, ts, ("s", P.initial), final, name=name)


def then_zeros(V: FiniteAutomaton, name) -> BuchiAutomaton:
    """V.0^w as a Buchi automaton."""
    states = list(V.states) + ["zeros"]
    ts = list(V.transitions)
    ts += [(p, a, "zeros") for p, a, q in V.transitions if q in V.final and a == ZERO]
    ts.append(("zeros", ZERO, "zeros"))
    init = V.initial
    return BuchiAutomaton(states, V.alphabet, ts, init, ["zeros"], name=name)


def u_automaton(H: BuchiAutomaton, H2: BuchiAutomaton) -> FiniteAutomaton:
    """Even-length words over pair letters whose prefix one shorter lies in
    Pref(H) x Pref(H') while the word itself does not."""
    letters = [(a, b) for a in H.alphabet for b in H2.alphabet]
    start = (H.initial, H2.initial, 0)
    states = {start, "hit"}
    ts = []
    todo = [start]
    while todo:
        s = todo.pop()
        g1, g2, par = s
        for a, b in letters:
            n1, n2 = H.step(g1, a), H2.step(g2, b)
            if n1 is None or n2 is None:
                if par == 1:
                    ts.append((s, (a, b), "hit"))
                continue
            s2 = (n1, n2, 1 - par)
            ts.append((s, (a, b), s2))
            if s2 not in states:
                states.add(s2)
                todo.append(s2)
    return FiniteAutomaton(states, letters, ts, start, ["hit"], name="U")


@dataclass
class GuardAutomata:
    sigma: tuple
    H: BuchiAutomaton
    H2: BuchiAutomaton
    ClH: BuchiAutomaton
    ClH2: BuchiAutomaton
    V: FiniteAutomaton
    V2: FiniteAutomaton
    V0: BuchiAutomaton
    V20: BuchiAutomaton
    U: FiniteAutomaton

    def pref_step(self, state, letter):
        """One step of the deterministic Pref(H) x Pref(H') reader; None once out."""
        if state is None:
            return None
        g1, g2 = state
        n1, n2 = self.H.step(g1, letter[0]), self.H2.step(g2, letter[1])
        if n1 is None or n2 is None:
            return None
        return (n1, n2)

    @property
    def pref_start(self):
        return (self.H.initial, self.H2.initial)


def build_guard_automata(sigma) -> GuardAutomata:
    sigma = tuple(sigma)
    CodingAlphabets(sigma)
    H, H2 = h_guard(sigma), h2_guard()
    V = ends_with_zero(prefix_automaton(H), "V")
    V2 = ends_with_zero(prefix_automaton(H2), "V'")
    return GuardAutomata(sigma, H, H2, closure_automaton(H), closure_automaton(H2),
                         V, V2, then_zeros(V, "V.0w"), then_zeros(V2, "V'.0w"),
                         u_automaton(H, H2))


# direct predicates -------------------------------------------------------

def _cls(sigma):
    return "[" + "".join(re.escape(a) for a in sigma) + "]"


def h_prefix_regex(sigma):
    s = _cls(sigma)
    return re.compile(rf"(?:(?:00)*0A{s}(?:00)+{s})*(?:0*|(?:00)*0A(?:{s}0*)?)")


H2_PREFIX = re.compile(r"(?:(?:00)*0AA(?:00)+A)*(?:0*|(?:00)*0A|(?:00)*0AA0*)")


def _unrolled(w: LassoWord, periods):
    return "".join(w.stem) + "".join(w.period) * periods


def in_pref_h(u, sigma) -> bool:
    return h_prefix_regex(sigma).fullmatch("".join(u)) is not None


def in_pref_h2(v) -> bool:
    return H2_PREFIX.fullmatch("".join(v)) is not None


def direct_in_closure(w: LassoWord, sigma=None, second=False) -> bool:
    """Every prefix of w is a prefix of H (or H')."""
    text = _unrolled(w, 9)
    rx = H2_PREFIX if second else h_prefix_regex(sigma)
    return rx.fullmatch(text) is not None


def direct_in_h(w: LassoWord, sigma=None, second=False) -> bool:
    return direct_in_closure(w, sigma, second) and any(a != ZERO for a in w.period)


def direct_in_v0(w: LassoWord, sigma=None, second=False) -> bool:
    w = normalize_lasso(w)
    if w.period != (ZERO,):
        return False
    u = w.stem + (ZERO,)
    return in_pref_h2(u) if second else in_pref_h(u, sigma)


# ---------------------------------------------------------------------------
# complement classification

@dataclass(frozen=True)
class ComplementClass:
    tag: str
    witness: tuple = ()

    def __str__(self):
        return f"{self.tag}{list(self.witness)}"


H_HEAD = ("0", "A", None, "0", "0", None, "0", "0", "0", "A", None)
ALPHA_HEAD = tuple("0AA00A000AA")


def _segments(word, limit):
    """Split into (zero-count, closing letter) pairs, scanning at most
    `limit` positions; a final (count, None) marks an endless 0-run."""
    out = []
    n = 1
    endless = None
    if isinstance(word, LassoWord):
        if all(a == ZERO for a in word.period):
            endless = len(word.stem) + 1
        letters = itertools.chain(word.stem, itertools.cycle(word.period))
    else:
        letters = (word.letter(k) for k in itertools.count(1))
    while n <= limit:
        z = 0
        while True:
            if endless is not None and n >= endless:
                out.append((None, None))
                return out
            if n > limit:
                return out
            a = next(letters)
            n += 1
            if a != ZERO:
                out.append((z, a))
                break
            z += 1
    return out


def _conforming_blocks(segs, second):
    """Number of leading double blocks of the shape 0+A S 0+ S (tape 1) or
    0+ AA 0+ A (tape 2)."""
    n = 0
    while 3 * n + 3 <= len(segs):
        (r1, a1), (r0, a2), (r2, a3) = segs[3 * n:3 * n + 3]
        if None in (r1, r0, r2):
            break
        if second:
            ok = r1 >= 1 and a1 == MARK and r0 == 0 and a2 == MARK and r2 >= 1 and a3 == MARK
        else:
            ok = (r1 >= 1 and a1 == MARK and r0 == 0 and a2 not in (ZERO, MARK)
                  and r2 >= 1 and a3 not in (ZERO, MARK))
        if not ok:
            break
        n += 1
    return n


def _seg(segs, i):
    return segs[i] if i < len(segs) else (None, None)


def _is_sigma(a):
    return a is not None and a not in (ZERO, MARK)


def _shape_violation(word, second, limit):
    """First position (within limit) showing word is outside the shape
    language, or None. Exact for lassos."""
    if isinstance(word, LassoWord):
        if all(a == ZERO for a in word.period):
            return len(word.stem) + 1
        rx = SHAPE2_PREFIX if second else SHAPE1_PREFIX
        text = _unrolled(word, 7)
        if rx.fullmatch(text):
            return None
        for n in range(1, len(text) + 1):
            if not rx.fullmatch(text[:n]):
                return n
    rx = SHAPE2_PREFIX if second else SHAPE1_PREFIX
    text = "".join(str(a) if len(str(a)) == 1 else "?" for a in word.prefix(limit))
    for n in range(1, len(text) + 1):
        if not rx.fullmatch(text[:n]):
            return n
    return None


SHAPE2_PREFIX = re.compile(r"(?:0+AA0+A)*(?:0*|0+A|0+AA0*)")
SHAPE1_PREFIX = re.compile(r"(?:0+A[^0A]0+[^0A])*(?:0*|0+A(?:[^0A]0*)?)")


def _block_limit(p):
    x, y = p.first, p.second
    if isinstance(x, LassoWord) and isinstance(y, LassoWord):
        return (len(x.stem) + len(y.stem) + len(x.period) * len(y.period)
                + len(x.period) + len(y.period) + 4)
    return None


def classify_complement(p, probe: SearchBounds = None) -> set:
    """All classes C1..C6 whose pattern the pair matches. Exact for lasso
    pairs; for pattern words the scan covers probe.max_blocks double blocks."""
    if not isinstance(p, PairWord):
        p = PairWord(*p)
    probe = probe or SearchBounds()
    x, y = p.first, p.second
    out = set()
    head1 = x.prefix(len(H_HEAD))
    for i, (e, a) in enumerate(zip(H_HEAD, head1), 1):
        if (e is None and not _is_sigma(a)) or (e is not None and a != e):
            out.add(ComplementClass("C1", ("tape1", i)))
            break
    head2 = y.prefix(len(ALPHA_HEAD))
    for i, (e, a) in enumerate(zip(ALPHA_HEAD, head2), 1):
        if a != e:
            out.add(ComplementClass("C1", ("tape2", i)))
            break
    blocks = _block_limit(p) or probe.max_blocks
    limit = 2 * (blocks + 2) * (blocks + 3) + 50 if _block_limit(p) is None else \
        (len(x.stem) + len(y.stem) + 10 * (blocks + 2) * max(len(x.period), len(y.period)) + 20)
    bad2 = _shape_violation(y, True, limit)
    if bad2 is not None:
        out.add(ComplementClass("C2", ("tape2", bad2)))
    bad1 = _shape_violation(x, False, limit)
    if bad1 is not None:
        out.add(ComplementClass("C2", ("tape1", bad1)))
    s1 = _segments(x, limit)
    s2 = _segments(y, limit)
    n1 = _conforming_blocks(s1, False)
    n2 = _conforming_blocks(s2, True)
    for n in range(1, min(n1, n2, blocks) + 1):
        b1, b2 = 3 * n, 3 * n
        (u, ua), (z0, b), (w, c), (w2, wa) = (_seg(s1, b1), _seg(s1, b1 + 1),
                                              _seg(s1, b1 + 2), _seg(s1, b1 + 3))
        (v, va), (y0, ya), (w1, w1a) = _seg(s2, b2), _seg(s2, b2 + 1), _seg(s2, b2 + 2)
        tape1_u = u is not None and u >= 1 and ua == MARK
        tape2_v = v is not None and v >= 1 and va == MARK
        if tape1_u and tape2_v and u != v:
            out.add(ComplementClass("C3", (n, u, v)))
        tape1_b = tape1_u and z0 == 0 and _is_sigma(b)
        tape1_w = tape1_b and w is not None and w >= 1 and _is_sigma(c)
        tape2_aa = tape2_v and y0 == 0 and ya == MARK
        tape2_w1 = tape2_aa and w1 is not None and w1 >= 1 and w1a == MARK
        if tape1_w and tape2_w1 and w != w1:
            out.add(ComplementClass("C4", (n, w, w1)))
        if tape1_w and tape2_v and w != v + 1:
            out.add(ComplementClass("C5", (n, w, v)))
        tape1_w2 = tape1_w and w2 is not None and w2 >= 1 and wa == MARK
        if tape1_w2 and tape2_w1 and w2 != w1 + 1:
            out.add(ComplementClass("C6", (n, w2, w1)))
    return out


def complement_tags(p, probe=None) -> set:
    return {c.tag for c in classify_complement(p, probe)}


# ---------------------------------------------------------------------------
# phi

def encode_phi(s: LassoWord) -> PhiCode:
    return PhiCode(s)


def decode_phi(prefix) -> tuple:
    """Integers of the complete blocks of a prefix of phi(n)."""
    out = []
    ones = 0
    for i, a in enumerate(prefix, 1):
        if a == "1":
            ones += 1
        elif a == "0":
            if ones == 0 or ones % 2:
                raise DecodeError(i, "a block needs a positive even number of 1s")
            out.append(ones // 2 - 1)
            ones = 0
        else:
            raise DecodeError(i, f"letter {a!r} outside {{0,1}}")
    return tuple(out)


def build_phi_guards() -> dict:
    B = ["0", "1"]
    image = BuchiAutomaton(["s", "o", "e"], B,
                           [("s", "1", "o"), ("o", "1", "e"), ("e", "1", "o"), ("e", "0", "s")],
                           "s", ["s"], name="phi-image")
    # block parser: s0/s1 = even/odd number of complete blocks so far
    core = [("s0", "1", "o0"), ("o0", "1", "e0"), ("e0", "1", "o0"), ("e0", "0", "s1"),
            ("s1", "1", "o1"), ("o1", "1", "e1"), ("e1", "1", "o1"), ("e1", "0", "s0")]
    states = ["s0", "o0", "e0", "s1", "o1", "e1", "all"]
    anything = [("all", "0", "all"), ("all", "1", "all")]
    d2 = BuchiAutomaton(states, B, core + anything + [("o0", "0", "all")], "s0", ["all"], name="D2")
    d3 = BuchiAutomaton(states + ["ones"], B, core + [("s1", "1", "ones"), ("ones", "1", "ones")],
                        "s0", ["ones"], name="D3")
    d4 = BuchiAutomaton(states, B, core + anything + [("s1", "0", "all")], "s0", ["all"], name="D4")
    return {"D2": d2, "D3": d3, "D4": d4, "image": image}


_BLOCK = r"(?:11)+0"
D2_RX = re.compile(rf"(?:{_BLOCK}{_BLOCK})*(?:11)*10")
D3_RX = re.compile(rf"(?:{_BLOCK}{_BLOCK})*{_BLOCK}")
D4_RX = re.compile(rf"(?:{_BLOCK}{_BLOCK})*{_BLOCK}0")
IMAGE_PREFIX_RX = re.compile(rf"(?:{_BLOCK})*1*")


def phi_guard_predicates(w: LassoWord) -> dict:
    """Direct pattern checks for D2, D3, D4 and the image on a binary lasso."""
    text = _unrolled(w, 8)
    nw = normalize_lasso(w)
    return {
        "D2": D2_RX.match(text) is not None,
        "D3": nw.period == ("1",) and D3_RX.fullmatch("".join(nw.stem)) is not None,
        "D4": D4_RX.match(text) is not None,
        "image": IMAGE_PREFIX_RX.fullmatch(text) is not None and "0" in w.period,
    }


def phi_tags(w: LassoWord) -> set:
    return {k for k, v in phi_guard_predicates(w).items() if v and k != "image"}


# ---------------------------------------------------------------------------
# theta

def encode_theta(x: LassoWord, S: int) -> ThetaCode:
    return ThetaCode(x, S)


def decode_theta(prefix, S: int) -> tuple:
    out = []
    n = 0
    i = 1
    while n < len(prefix):
        a = prefix[n]
        if a == "E":
            raise DecodeError(n + 1, f"expected letter {i}")
        out.append(a)
        n += 1
        for _ in range(S ** i):
            if n >= len(prefix):
                return tuple(out)
            if prefix[n] != "E":
                raise DecodeError(n + 1, f"E-run {i} must have length {S ** i}")
            n += 1
        i += 1
    return tuple(out)
