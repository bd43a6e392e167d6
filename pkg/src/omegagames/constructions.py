"""Effective automaton constructions: the coded relation of a one-counter
machine, the complement of the coded pairs, the game winning set, the
interleaved universality game and the Wadge sum."""
from dataclasses import dataclass, field

from .automata import (AutomatonError, BuchiAutomaton, CounterBuchiAutomaton,
                       TwoTapeBuchiAutomaton, constrained_product_2tape,
                       product_of_languages, union_2tape, union_many)
from .codings import (GAMMA, MARK, ZERO, build_guard_automata, coded_position_of,
                      direct_in_closure, in_pref_h, in_pref_h2)
from .membership import CounterRun, RunCertificate, Segment, check_counter_run
from .words import AlphaWord, HCode, LassoWord, PairWord, normalize_lasso, suffix_lasso

EPS = ()


# ---------------------------------------------------------------------------
# R1: pairs (h(x), alpha) with x accepted by a real-time one-counter machine
#
# Tape-1 0-run i is split u_i v_i, tape-2 0-run i is split w_i z_i. Block i
# guesses the transition t_i of A reading x(i); |v_i| is the counter before
# and |w_i| the counter after t_i. v_i and w_i are read side by side with
# one unpaired 0 for a counter change; z_i is read side by side with
# u_{i+1} plus one extra 0 on tape 1, so |u_{i+1}| = |z_i| + 1 and hence
# |v_{i+1}| = |w_i| on the coded pair.

def _require_r1_source(A):
    if not isinstance(A, CounterBuchiAutomaton) or A.k != 1:
        raise AutomatonError("R1 needs a one-counter machine")
    if not A.real_time:
        raise AutomatonError("R1 needs a real-time machine")


def _r1_parts(A):
    """States, transitions and roles of the R1 phase machine."""
    ts, roles = [], {}
    start = ("start",)
    roles[start] = "u1"
    ts.append((start, (ZERO,), EPS, start))

    def add(p, u, v, q, role_p=None):
        ts.append((p, u, v, q))
        if role_p:
            roles.setdefault(p, role_p)

    for ti, t in enumerate(A.transitions):
        p, a, tests, q, deltas = t
        test, d = tests[0], deltas[0]
        for par in (0, 1):
            B = ("B", p, par)
            V, Vp, D = ("V", ti, par), ("V+", ti, par), ("D", ti, par)
            M, X, Z = ("M", ti, par), ("X", ti, par), ("Z", q, par)
            roles[B] = "block-start"
            if test == 0:
                add(B, EPS, EPS, D)
                if par == 1 and p == A.initial:
                    add(start, EPS, EPS, D)
            elif d == -1:
                add(B, EPS, EPS, V)
                add(V, (ZERO,), (ZERO,), V, "v/w")
                add(V, EPS, EPS, D)
            else:
                add(B, EPS, EPS, V)
                add(V, (ZERO,), (ZERO,), Vp, "v/w")
                add(Vp, (ZERO,), (ZERO,), Vp, "v/w")
                add(Vp, EPS, EPS, D)
            diff = {1: (EPS, (ZERO,)), -1: ((ZERO,), EPS), 0: (EPS, EPS)}[d]
            add(D, diff[0], diff[1], M, "diff")
            add(M, (MARK,) if par else EPS, EPS, X, "mark")
            add(X, (a,), EPS, Z, "letter")
    for q in A.states:
        for par in (0, 1):
            Z, S, S2, B2 = ("Z", q, par), ("S", q, par), ("S2", q, par), ("B", q, 1 - par)
            roles[Z], roles[S] = "z/u", "sep"
            roles.setdefault(B2, "block-start")
            ts.append((Z, (ZERO,), (ZERO,), Z))
            ts.append((Z, (ZERO,), EPS, S))
            if par:
                roles[S2] = "sep"
                ts.append((S, EPS, (MARK,), S2))
                ts.append((S2, EPS, (MARK,), B2))
            else:
                ts.append((S, EPS, (MARK,), B2))
    states = [start] + sorted({s for t in ts for s in (t[0], t[3])} - {start}, key=repr)
    return states, ts, roles


def build_R1(A: CounterBuchiAutomaton) -> TwoTapeBuchiAutomaton:
    _require_r1_source(A)
    states, ts, roles = _r1_parts(A)
    sigma1 = tuple(A.alphabet) + (ZERO, MARK)
    acc = [s for s in states if s[0] == "B" and s[1] in A.accepting]
    return TwoTapeBuchiAutomaton(states, sigma1, GAMMA, ts, ("start",), acc, name="R1",
                                 roles=roles,
                                 notes=["coded relation: (h(x), alpha) accepted iff x in L(A)"])


def _find(R, p, u, v, q):
    t = (p, tuple(u), tuple(v), q)
    if t not in R.out[p]:
        raise AutomatonError(f"R1 has no transition {t!r}")
    return t


class _Affine:
    """a*r + b"""

    def __init__(self, a, b):
        self.a, self.b = a, b

    def at(self, r):
        return self.a * r + self.b


def _block_segments(R, A, i, t, par, c_prev, c_next, first):
    """Segments (choices, count) for block i, counts given as _Affine."""
    ti = A.transitions.index(t)
    p, a, tests, q, deltas = t
    test, d = tests[0], deltas[0]
    one = _Affine(0, 1)
    segs = []
    if first:
        segs.append(((_find(R, ("start",), (ZERO,), EPS, ("start",)),), one, "u1"))
        segs.append(((_find(R, ("start",), EPS, EPS, ("D", ti, 1)),), one, "enter"))
    else:
        B = ("B", p, par)
        if test == 0:
            segs.append(((_find(R, B, EPS, EPS, ("D", ti, par)),), one, "enter"))
        elif d == -1:
            V = ("V", ti, par)
            segs.append(((_find(R, B, EPS, EPS, V),), one, "enter"))
            segs.append(((_find(R, V, (ZERO,), (ZERO,), V),),
                         _Affine(c_prev.a, c_prev.b - 1), "v/w"))
            segs.append(((_find(R, V, EPS, EPS, ("D", ti, par)),), one, "close"))
        else:
            V, Vp = ("V", ti, par), ("V+", ti, par)
            segs.append(((_find(R, B, EPS, EPS, V),), one, "enter"))
            segs.append(((_find(R, V, (ZERO,), (ZERO,), Vp), _find(R, Vp, (ZERO,), (ZERO,), Vp)),
                         c_prev, "v/w"))
            segs.append(((_find(R, Vp, EPS, EPS, ("D", ti, par)),), one, "close"))
    D, M, X = ("D", ti, par), ("M", ti, par), ("X", ti, par)
    diff = {1: (EPS, (ZERO,)), -1: ((ZERO,), EPS), 0: (EPS, EPS)}[d]
    segs.append(((_find(R, D, diff[0], diff[1], M),), one, "diff"))
    segs.append(((_find(R, M, (MARK,) if par else EPS, EPS, X),), one, "mark"))
    segs.append(((_find(R, X, (a,), EPS, ("Z", q, par)),), one, "letter"))
    Z, S = ("Z", q, par), ("S", q, par)
    # z_i = i - c_i
    segs.append(((_find(R, Z, (ZERO,), (ZERO,), Z),), _Affine(i.a - c_next.a, i.b - c_next.b), "z/u"))
    segs.append(((_find(R, Z, (ZERO,), EPS, S),), one, "extra"))
    if par:
        S2 = ("S2", q, par)
        segs.append(((_find(R, S, EPS, (MARK,), S2), _find(R, S2, EPS, (MARK,), ("B", q, 0))),
                     _Affine(0, 2), "sep"))
    else:
        segs.append(((_find(R, S, EPS, (MARK,), ("B", q, 1)),), one, "sep"))
    return segs


def _rotate_if_needed(A, x, run: CounterRun):
    """Make block 1 explicit and give the loop an even number of blocks."""
    prefix, loop = list(run.prefix), list(run.loop)
    start, gain = run.start_counters[0], run.gain[0]
    if not prefix:
        t = loop[0]
        prefix = [t]
        start += t[4][0]
        loop = loop[1:] + loop[:1]
    if len(loop) % 2:
        loop = loop + loop
        gain *= 2
    return prefix, loop, start, gain


def run_builder_R1(A: CounterBuchiAutomaton, x: LassoWord, run: CounterRun,
                   R: TwoTapeBuchiAutomaton = None) -> RunCertificate:
    """Certificate for R1 on (h(x), alpha) from an accepting run of A on x."""
    _require_r1_source(A)
    if run is None or not check_counter_run(A, x, run):
        raise ValueError("not an accepting run of the machine on this word")
    R = R or build_R1(A)
    prefix, loop, start, gain = _rotate_if_needed(A, x, run)
    cert_prefix = []
    c = 0
    for i, t in enumerate(prefix, 1):
        c2 = c + t[4][0]
        for choices, n, _ in _block_segments(R, A, _Affine(0, i), t, i % 2,
                                             _Affine(0, c), _Affine(0, c2), i == 1):
            for k in range(n.at(0)):
                cert_prefix.append(choices[0] if len(choices) == 1 or k == 0 else choices[1])
        c = c2
    if c != start:
        raise ValueError("run prefix does not reach the loop counters")
    segs = []
    witness = None
    L = len(loop)
    c = _Affine(gain, start)
    for j, t in enumerate(loop):
        i = _Affine(L, len(prefix) + j + 1)
        c2 = _Affine(gain, c.b + t[4][0])
        for choices, n, role in _block_segments(R, A, i, t, i.b % 2, c, c2, False):
            segs.append(Segment(tuple(choices), n.a, n.b, role))
            if role == "sep" and t[3] in A.accepting and witness is None:
                witness = len(segs) - 1
        c = c2
    return RunCertificate(R, PairWord(HCode(x), AlphaWord()), cert_prefix, segs, witness)


def _block_of_position(n1):
    """Number of complete coded blocks before tape-1 position n1, and the
    offset of n1 inside the next 0-run."""
    i = 0
    while coded_position_of(i + 1) < n1:
        i += 1
    return i, n1 - 1 - coded_position_of(i)


def r1_block_configurations(A, x: LassoWord, max_block: int, R=None):
    """(state, counter) sets at R1 block boundaries on (h(x), alpha), next to
    A's reachable configurations after i letters, for i = 0..max_block."""
    from .membership import _step_generic
    R = R or build_R1(A)
    word = PairWord(HCode(x), AlphaWord())
    limit1 = coded_position_of(max_block) + max_block + 2
    limit2 = len(AlphaWord().prefix(0)) + sum(j + 1 + (j % 2) for j in range(1, max_block + 2))
    seen = {(R.initial, 1, 1)}
    todo = [(R.initial, 1, 1)]
    r1 = [set() for _ in range(max_block + 1)]
    r1[0].add((A.initial, 0))
    while todo:
        cfg = todo.pop()
        s, n1, n2 = cfg
        if s[0] == "B":
            i, off = _block_of_position(n1)
            if i <= max_block:
                r1[i].add((s[1], i + 1 - off))
        for _, c2 in _step_generic(R, word, cfg):
            if c2[1] > limit1 or c2[2] > limit2 or c2 in seen:
                continue
            seen.add(c2)
            todo.append(c2)
    direct = [{(A.initial, 0)}]
    for i in range(1, max_block + 1):
        a = x.letter(i)
        nxt = set()
        for q, c in direct[-1]:
            for t in A.enabled(q, (c,), letter=a):
                nxt.add((t[3], c + t[4][0]))
        direct.append(nxt)
    return r1, direct


# ---------------------------------------------------------------------------
# R2 = union of C1..C6

class _Builder:
    def __init__(self, sigma, name):
        self.sigma = tuple(sigma)
        self.sigma1 = self.sigma + (ZERO, MARK)
        self.ts = []
        self.name = name

    def t(self, p, u, v, q):
        self.ts.append((p, tuple(u), tuple(v), q))

    def all_state(self, s="all"):
        for a in self.sigma1:
            self.t(s, (a,), EPS, s)
        for b in GAMMA:
            self.t(s, EPS, (b,), s)
        return s

    def done(self, init="i", accepting=("all",), notes=()):
        states = [init] + sorted({s for t in self.ts for s in (t[0], t[3])} - {init}, key=repr)
        return TwoTapeBuchiAutomaton(states, self.sigma1, GAMMA, self.ts, init, accepting,
                                     name=self.name, notes=list(notes))

    def word1(self, src, pattern, dst, tag):
        """Read a tape-1 pattern given as a list of letter classes, '+' marking
        a 0+ run."""
        self._word(src, pattern, dst, tag, 1)

    def word2(self, src, pattern, dst, tag):
        self._word(src, pattern, dst, tag, 2)

    def _word(self, src, pattern, dst, tag, tape):
        cur = src
        for k, item in enumerate(pattern):
            nxt = dst if k == len(pattern) - 1 else (tag, k)
            if item == "+":
                loop = (tag, k, "loop")
                self._letter(cur, ZERO, loop, tape)
                self._letter(loop, ZERO, loop, tape)
                self.t(loop, EPS, EPS, nxt)
            else:
                letters = self.sigma if item == "S" else (item,)
                for a in letters:
                    self._letter(cur, a, nxt, tape)
            cur = nxt

    def _letter(self, p, a, q, tape):
        if tape == 1:
            self.t(p, (a,), EPS, q)
        else:
            self.t(p, EPS, (a,), q)

    def compare(self, src, closers1, closers2, tag, pre1=0, min1=1, min2=1):
        """From src: tape-1 run m (after `pre1` extra zeros) closed by a letter
        of closers1, tape-2 run n closed by a letter of closers2, m != n."""
        cur = src
        for k in range(pre1):
            nxt = (tag, "pre", k)
            self.t(cur, (ZERO,), EPS, nxt)
            cur = nxt
        p0, p1 = (tag, "p0"), (tag, "p1")
        self.t(cur, EPS, EPS, p0)
        self.t(p0, (ZERO,), (ZERO,), p1)
        self.t(p1, (ZERO,), (ZERO,), p1)
        # m < n: tape 1 closes, tape 2 still has zeros
        lt, lt2 = (tag, "lt"), (tag, "lt2")
        for src_p, k in ((p0, 0), (p1, 1)):
            if k >= min1:
                for c in closers1:
                    self.t(src_p, (c,), EPS, lt)
            if k >= min2:
                for c in closers2:
                    self.t(src_p, EPS, (c,), (tag, "gt"))
        self.t(lt, EPS, (ZERO,), lt2)
        self.t(lt2, EPS, (ZERO,), lt2)
        for c in closers2:
            self.t(lt2, EPS, (c,), "all")
        gt, gt2 = (tag, "gt"), (tag, "gt2")
        self.t(gt, (ZERO,), EPS, gt2)
        self.t(gt2, (ZERO,), EPS, gt2)
        for c in closers1:
            self.t(gt2, (c,), EPS, "all")


def _c1(sigma):
    from .codings import ALPHA_HEAD, H_HEAD
    b = _Builder(sigma, "C1")
    b.all_state()
    sig1 = b.sigma1
    for tape, head, alph in ((1, H_HEAD, sig1), (2, ALPHA_HEAD, GAMMA)):
        cur = "i"
        for k, e in enumerate(head):
            ok = set(b.sigma) if e is None else {e}
            nxt = (tape, k + 1)
            for a in alph:
                b._letter(cur, a, nxt if a in ok else "all", tape)
            cur = nxt
    return b.done(notes=["C1: wrong initial segment on a tape"])


def _c2(sigma):
    """A tape leaves its block shape: the shape reader dies, or the tape
    ends in 0^w."""
    b = _Builder(sigma, "C2")
    b.all_state()
    S = b.sigma
    shape1 = {"b": {ZERO: "z1"}, "z1": {ZERO: "z1", MARK: "m"}, "m": {a: "s" for a in S},
              "s": {ZERO: "z2"}, "z2": {ZERO: "z2", **{a: "b" for a in S}}}
    shape2 = {"b": {ZERO: "z1"}, "z1": {ZERO: "z1", MARK: "m"}, "m": {MARK: "s"},
              "s": {ZERO: "z2"}, "z2": {ZERO: "z2", MARK: "b"}}
    for tape, shape, alph in ((1, shape1, b.sigma1), (2, shape2, GAMMA)):
        for p, row in shape.items():
            src = "i" if p == "b" else (tape, p)
            if p == "b":
                b.t("i", EPS, EPS, (tape, "b"))
                src = (tape, "b")
            for a in alph:
                b._letter(src, a, (tape, row[a]) if a in row else "all", tape)
        # ends in 0^w: skip anything on this tape, then zeros forever
        pre, z, zz = (tape, "pre"), (tape, "zeros"), (tape, "zeros'")
        b.t("i", EPS, EPS, pre)
        for a in alph:
            b._letter(pre, a, pre, tape)
        b._letter(pre, ZERO, z, tape)
        b._letter(z, ZERO, z, tape)
        other = GAMMA if tape == 1 else b.sigma1
        for a in other:
            b._letter(z, a, zz, 3 - tape)
        b._letter(zz, ZERO, z, tape)
    acc = ["all", (1, "zeros'"), (2, "zeros'")]
    return b.done(accepting=acc, notes=["C2: a tape outside its block shape"])


def _double_blocks(b, tag):
    """n >= 1 conforming double blocks on both tapes, ending in (tag, 'mid')."""
    S = ["+", MARK, "S", "+", "S"]
    b.word1("i", S, (tag, "t2"), (tag, "d1"))
    b.word2((tag, "t2"), ["+", MARK, MARK, "+", MARK], (tag, "mid"), (tag, "d2"))
    b.word1((tag, "mid"), S, (tag, "t2"), (tag, "d1r"))
    return (tag, "mid")


def _c3(sigma):
    b = _Builder(sigma, "C3")
    b.all_state()
    mid = _double_blocks(b, "c3")
    b.compare(mid, (MARK,), (MARK,), "cmp")
    return b.done(notes=["C3: odd runs 2n+1 differ across tapes"])


def _c4(sigma):
    b = _Builder(sigma, "C4")
    b.all_state()
    mid = _double_blocks(b, "c4")
    b.word1(mid, ["+", MARK, "S"], ("c4", "h1"), ("c4", "w1"))
    b.word2(("c4", "h1"), ["+", MARK, MARK], ("c4", "h2"), ("c4", "w2"))
    b.compare(("c4", "h2"), b.sigma, (MARK,), "cmp")
    return b.done(notes=["C4: even runs 2n+2 differ across tapes"])


def _c5(sigma):
    b = _Builder(sigma, "C5")
    b.all_state()
    mid = _double_blocks(b, "c5")
    b.word1(mid, ["+", MARK, "S"], ("c5", "h1"), ("c5", "w1"))
    b.compare(("c5", "h1"), b.sigma, (MARK,), "cmp", pre1=1, min1=0, min2=1)
    return b.done(notes=["C5: tape-1 run 2n+2 is not tape-2 run 2n+1 plus one"])


def _c6(sigma):
    b = _Builder(sigma, "C6")
    b.all_state()
    mid = _double_blocks(b, "c6")
    b.word1(mid, ["+", MARK, "S", "+", "S"], ("c6", "h1"), ("c6", "w1"))
    b.word2(("c6", "h1"), ["+", MARK, MARK], ("c6", "h2"), ("c6", "w2"))
    b.compare(("c6", "h2"), (MARK,), (MARK,), "cmp", pre1=1, min1=0, min2=1)
    return b.done(notes=["C6: tape-1 run 2n+3 is not tape-2 run 2n+2 plus one"])


COMPLEMENT_PARTS = {"C1": _c1, "C2": _c2, "C3": _c3, "C4": _c4, "C5": _c5, "C6": _c6}


def build_complement_parts(sigma) -> dict:
    return {tag: f(sigma) for tag, f in COMPLEMENT_PARTS.items()}


def build_R2(sigma, parts=None) -> TwoTapeBuchiAutomaton:
    parts = parts or build_complement_parts(sigma)
    return union_many([parts[k] for k in sorted(parts)], name="R2")


# ---------------------------------------------------------------------------
# winning set

@dataclass
class WinningSetBundle:
    Bprime: TwoTapeBuchiAutomaton
    C: TwoTapeBuchiAutomaton
    Cprime: TwoTapeBuchiAutomaton
    D: TwoTapeBuchiAutomaton
    provenance: dict = field(default_factory=dict)


def _u_then_all(G) -> TwoTapeBuchiAutomaton:
    U = G.U
    ts = [(p, (a,), (b,), q) for p, (a, b), q in U.transitions]
    sig1 = tuple(G.H.alphabet)
    for a in sig1:
        for b in GAMMA:
            ts.append(("hit", (a,), (b,), "hit"))
    return TwoTapeBuchiAutomaton(U.states, sig1, GAMMA, ts, U.initial, ["hit"], name="C'")


def build_winning_set(A: CounterBuchiAutomaton) -> WinningSetBundle:
    _require_r1_source(A)
    G = build_guard_automata(A.alphabet)
    R1 = build_R1(A)
    R2 = build_R2(A.alphabet)
    Bp = constrained_product_2tape(union_2tape(R1, R2), G.H, G.H2, name="B'")
    C = union_2tape(product_of_languages(G.V0, G.ClH2), product_of_languages(G.ClH, G.V20), name="C")
    Cp = _u_then_all(G)
    D = union_many([Bp, C, Cp], name="D")
    prov = {"B'": "coded pairs accepted by R1 together with R2, restricted to H x H'",
            "C": "V.0^w x Cl(H') together with Cl(H) x V'.0^w",
            "C'": "first exit from Pref(H) x Pref(H') at an even position, then anything"}
    return WinningSetBundle(Bp, C, Cp, D, prov)


def first_exit(x, y, sigma, limit):
    """First n <= limit with (x[n], y[n]) outside Pref(H) x Pref(H'), or None."""
    for n in range(1, limit + 1):
        if not in_pref_h(x.prefix(n), sigma) or not in_pref_h2(y.prefix(n)):
            return n
    return None


def winning_set_lasso_oracle(sigma, pair) -> bool:
    """Membership of a lasso pair in the winning set, by direct schedule
    checks: lasso pairs are never coded, so the pair is in the set iff it
    never leaves Pref(H) x Pref(H'), or first leaves it at an even position."""
    x, y = (pair.first, pair.second) if isinstance(pair, PairWord) else pair
    if direct_in_closure(x, sigma) and direct_in_closure(y, second=True):
        return True
    limit = max(len(x.stem) + 9 * len(x.period), len(y.stem) + 9 * len(y.period))
    n = first_exit(x, y, sigma, limit)
    return n is not None and n % 2 == 0


# ---------------------------------------------------------------------------
# interleaved universality game

def build_interleaved_game(T: BuchiAutomaton) -> BuchiAutomaton:
    """Words x (x) x' over T's alphabet with x' accepted by T."""
    ts = []
    for q in T.states:
        for a in T.alphabet:
            ts.append(((q, 0), a, (q, 1)))
    for p, a, q in T.transitions:
        ts.append(((p, 1), a, (q, 0)))
    states = [(q, k) for q in T.states for k in (0, 1)]
    return BuchiAutomaton(states, T.alphabet, ts, (T.initial, 0),
                          [(q, 0) for q in T.accepting], name=f"any(x){T.name}")


# ---------------------------------------------------------------------------
# Wadge sum

def wadge_sum_oracle(Lp, L, plus, minus, base_alphabet):
    """Oracle for L' + L on lassos: stay in the base alphabet and be in L,
    or leave it once with a `plus` letter followed by a word of L', or a
    `minus` letter followed by a word outside L'."""
    plus, minus, base = set(plus), set(minus), set(base_alphabet)
    if not plus or not minus or plus & minus or (plus | minus) & base:
        raise ValueError("plus and minus must be nonempty disjoint sets outside the base alphabet")

    def oracle(w: LassoWord) -> bool:
        w = normalize_lasso(w)
        for n in range(1, len(w.stem) + len(w.period) + 1):
            a = w.letter(n)
            if a in base:
                continue
            rest = suffix_lasso(w, n)
            if a in plus:
                return bool(Lp(rest))
            if a in minus:
                return not Lp(rest)
            raise ValueError(f"letter {a!r} outside the extended alphabet")
        return bool(L(w))
    return oracle
