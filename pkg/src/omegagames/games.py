"""Gale-Stewart and Wadge play engines, strategies and strategy transfer.

A strategy is driven through start() / move(mem) / observe(mem, letter, own).
Memory values are immutable; when both strategies report finite(mem), the
joint memory at a round boundary identifies the rest of the play, so a
repeat closes the play into a lasso and the verdict is exact.
"""
import itertools
import random
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .automata import BuchiAutomaton, rejected_lasso, require_det_complete
from .codings import GAMMA, MARK, ZERO, build_guard_automata, phi_guard_predicates, decode_phi
from .constructions import build_interleaved_game, winning_set_lasso_oracle
from .membership import lasso_in_buchi
from .words import AlphaWord, HCode, LassoWord

SKIP = "~"


class StrategyError(ValueError):
    pass


class Winner(str, Enum):
    P1 = "P1Wins"
    P2 = "P2Wins"
    UNKNOWN = "Unknown"


class Strategy:
    kind = "callback"

    def __init__(self, owner: int, alphabet):
        if owner not in (1, 2):
            raise StrategyError("owner must be player 1 or 2")
        self.owner = owner
        self.alphabet = tuple(alphabet)

    def start(self):
        raise NotImplementedError

    def move(self, mem):
        raise NotImplementedError

    def observe(self, mem, letter, own):
        raise NotImplementedError

    def finite(self, mem) -> bool:
        return False


class FiniteMemory(Strategy):
    """Deterministic transducer: output[state] is the move, update maps
    (state, letter) to the next state; missing entries keep the state."""

    kind = "finite"

    def __init__(self, owner, alphabet, initial, output, update, name=""):
        super().__init__(owner, alphabet)
        self.initial = initial
        self.output = dict(output)
        self.update = dict(update)
        self.name = name

    def start(self):
        return self.initial

    def move(self, mem):
        return self.output[mem]

    def observe(self, mem, letter, own):
        return self.update.get((mem, letter), self.update.get((mem, None), mem))

    def finite(self, mem):
        return True

    @property
    def states(self):
        return set(self.output) | {s for s, _ in self.update} | set(self.update.values())


def constant(owner, alphabet, letter) -> FiniteMemory:
    return FiniteMemory(owner, alphabet, 0, {0: letter}, {}, name=f"const{{{letter}}}")


class WitnessStrategy(Strategy):
    """Plays the letters of a lasso in order at its own turns."""

    kind = "finite"

    def __init__(self, owner, alphabet, w: LassoWord):
        super().__init__(owner, alphabet)
        self.word = w

    def start(self):
        return 0

    def finite(self, mem):
        return True

    def move(self, mem):
        return self.word.letter_at_phase(mem)

    def observe(self, mem, letter, own):
        return self.word.next_phase(mem) if own else mem


def witness(owner, alphabet, w: LassoWord) -> WitnessStrategy:
    return WitnessStrategy(owner, alphabet, w)


class Callback(Strategy):
    """History to letter; memory is the whole history."""

    def __init__(self, owner, alphabet, fn):
        super().__init__(owner, alphabet)
        self.fn = fn

    def start(self):
        return ()

    def move(self, mem):
        return self.fn(mem)

    def observe(self, mem, letter, own):
        return mem + (letter,)


# ---------------------------------------------------------------------------
# Gale-Stewart plays

@dataclass
class GSArena:
    alphabet: tuple
    oracle: object          # lasso -> bool, membership in the winning set
    name: str = ""
    monitor: object = None  # optional coding monitor


@dataclass
class PlayRecord:
    moves: list
    authors: list
    verdict: Winner
    word: LassoWord = None
    exit: tuple = None       # (player, step) of the first departure from the coding
    guard_exit: int = None   # first step outside Pref(H) x Pref(H')
    notes: dict = field(default_factory=dict)


def _exits(monitor, letters, steps, found=(None, None)):
    """Coding exit (player, step) and first step outside Pref(H) x Pref(H')."""
    exit_event, guard_exit = found
    g = monitor.start()
    for step in range(1, steps + 1):
        a = letters(step)
        if exit_event is None and not monitor.in_coding(step, a):
            exit_event = (2 - step % 2, step)
        if guard_exit is None:
            g = monitor.guard_step(g, a)
            if g is None:
                guard_exit = step
        if exit_event is not None and guard_exit is not None:
            break
    return exit_event, guard_exit


def _run_play(s1, s2, horizon, alphabets):
    mems = [s1.start(), s2.start()]
    players = (s1, s2)
    moves, authors = [], []
    seen = {}
    for r in range(horizon):
        if s1.finite(mems[0]) and s2.finite(mems[1]):
            key = (mems[0], mems[1])
            if key in seen:
                return moves, authors, seen[key]
            seen[key] = r
        for k in (0, 1):
            s = players[k]
            a = s.move(mems[k])
            if a not in alphabets[k]:
                raise StrategyError(f"player {k + 1} played {a!r} outside the arena alphabet")
            moves.append(a)
            authors.append(k + 1)
            mems[k] = s.observe(mems[k], a, True)
            mems[1 - k] = players[1 - k].observe(mems[1 - k], a, False)
    return moves, authors, None


def play_gs(arena: GSArena, s1: Strategy, s2: Strategy, horizon: int) -> PlayRecord:
    if s1.owner != 1 or s2.owner != 2:
        raise StrategyError("play_gs needs a player-1 and a player-2 strategy")
    X = set(arena.alphabet)
    moves, authors, r0 = _run_play(s1, s2, horizon, (X, X))
    rec = PlayRecord(moves, authors, Winner.UNKNOWN)
    if r0 is not None:
        w = LassoWord(moves[:2 * r0], moves[2 * r0:])
        rec.word = w
        rec.verdict = Winner.P1 if arena.oracle(w) else Winner.P2
    if arena.monitor:
        if rec.word is not None:
            rec.exit, rec.guard_exit = _exits(arena.monitor, rec.word.letter, 2 * horizon)
        else:
            rec.exit, rec.guard_exit = _exits(arena.monitor, lambda n: moves[n - 1], len(moves))
    return rec


# ---------------------------------------------------------------------------
# the coded game over X = Sigma_1 x Gamma

class CodingMonitor:
    """Tracks whether a play over product letters is still a prefix of some
    (h(x), alpha), and the joint Pref(H) x Pref(H') reader."""

    def __init__(self, sigma):
        self.sigma = tuple(sigma)
        self.guards = build_guard_automata(sigma)
        self._slots = HCode(LassoWord((), ("?",)))
        self._alpha = AlphaWord()

    def expected(self, n):
        """Tape-1 letter at position n of every h(x) ('?' for a letter slot),
        tape-2 letter of alpha, and the slot index."""
        i, _ = self._slots.locate(n)
        return self._slots.letter(n), self._alpha.letter(n), i

    def in_coding(self, n, letter):
        e1, e2, _ = self.expected(n)
        a, b = letter
        return b == e2 and (a == e1 if e1 != "?" else a in self.sigma)

    def start(self):
        return self.guards.pref_start

    def guard_step(self, state, letter):
        return self.guards.pref_step(state, letter)


def coded_arena(sigma) -> GSArena:
    sigma = tuple(sigma)
    X = tuple((a, b) for a in sigma + (ZERO, MARK) for b in GAMMA)
    return GSArena(X, lambda w: winning_set_lasso_oracle(sigma, _split(w)),
                   name="coded winning set", monitor=CodingMonitor(sigma))


def _split(w: LassoWord):
    return (LassoWord([a for a, _ in w.stem], [a for a, _ in w.period]),
            LassoWord([b for _, b in w.stem], [b for _, b in w.period]))


class CodedTransfer(Strategy):
    """Strategy in the coded game built from a strategy `base` of the game
    over Sigma. While the play follows the coding it emits the coding
    letters and base's moves at its own letter slots; the position counter
    is its one counter. After the opponent leaves the coding it switches to
    a finite punish mode: player 1 keeps the play inside Pref(H) x Pref(H')
    (so the play ends in Cl(H) x Cl(H') or the opponent leaves it at an
    even step), player 2 plays a constant letter (player 1 has already
    left Pref(H) x Pref(H') at an odd step)."""

    kind = "counter"

    def __init__(self, base: Strategy, sigma, monitor: CodingMonitor = None):
        sigma = tuple(sigma)
        X = tuple((a, b) for a in sigma + (ZERO, MARK) for b in GAMMA)
        super().__init__(base.owner, X)
        self.base = base
        self.sigma = sigma
        self.monitor = monitor or CodingMonitor(sigma)
        self.guards = self.monitor.guards
        self._letters = sorted(X, key=repr)

    def start(self):
        return ("code", 0, self.base.start(), self.guards.pref_start)

    def finite(self, mem):
        return mem[0] == "punish"

    def move(self, mem):
        if mem[0] == "code":
            _, n, bm, g = mem
            e1, e2, _ = self.monitor.expected(n + 1)
            return (self.base.move(bm) if e1 == "?" else e1, e2)
        g = mem[1]
        if self.owner == 1 and g is not None:
            for l in self._letters:
                if self.guards.pref_step(g, l) is not None:
                    return l
        return self._letters[0]

    def observe(self, mem, letter, own):
        if mem[0] == "code":
            _, n, bm, g = mem
            g2 = self.guards.pref_step(g, letter)
            if not self.monitor.in_coding(n + 1, letter):
                return ("punish", g2) if self.owner == 1 else ("punish", None)
            e1, _, _ = self.monitor.expected(n + 1)
            if e1 == "?":
                bm = self.base.observe(bm, letter[0], own)
            return ("code", n + 1, bm, g2)
        return ("punish", self.guards.pref_step(mem[1], letter) if mem[1] is not None else None)


def transfer_strategy_to_coded(A, sigma_strategy: Strategy, owner: int) -> CodedTransfer:
    if sigma_strategy.owner != owner:
        raise StrategyError("strategy owner does not match")
    return CodedTransfer(sigma_strategy, A.alphabet)


class ExtractedStrategy(Strategy):
    """Strategy over Sigma read off a coded strategy: the coded strategy is
    fed the coding of the play so far and its letters at its own slots are
    returned. If it leaves the coding on its own move, the event is recorded
    in memory and a fallback letter is played."""

    kind = "counter"

    def __init__(self, coded: Strategy, sigma, monitor=None):
        super().__init__(coded.owner, sigma)
        self.coded = coded
        self.sigma = tuple(sigma)
        self.monitor = monitor or CodingMonitor(sigma)

    def start(self):
        return (0, 0, self.coded.start(), None)   # position, letters seen, memory, exit

    def _advance(self, mem):
        """Feed coding letters up to the next letter slot; returns the memory
        positioned just before that slot."""
        n, i, cm, ex = mem
        while ex is None:
            e1, e2, slot = self.monitor.expected(n + 1)
            if e1 == "?":
                break
            own = (n + 1) % 2 == (1 if self.owner == 1 else 0)
            if own:
                got = self.coded.move(cm)
                if got != (e1, e2):
                    ex = n + 1
                    break
            cm = self.coded.observe(cm, (e1, e2), own)
            n += 1
        return (n, i, cm, ex)

    def move(self, mem):
        n, i, cm, ex = self._advance(mem)
        if ex is not None:
            return self.sigma[0]
        got = self.coded.move(cm)
        e1, e2, _ = self.monitor.expected(n + 1)
        if got[1] != e2 or got[0] not in self.sigma:
            return self.sigma[0]
        return got[0]

    def observe(self, mem, letter, own):
        n, i, cm, ex = self._advance(mem)
        if ex is not None:
            return (n, i + 1, cm, ex)
        e1, e2, _ = self.monitor.expected(n + 1)
        cm = self.coded.observe(cm, (letter, e2), own)
        return (n + 1, i + 1, cm, None)

    def exit_event(self, mem):
        return self._advance(mem)[3] if mem[3] is None else mem[3]


def extract_strategy_from_coded(A, coded: Strategy, owner: int) -> ExtractedStrategy:
    if coded.owner != owner:
        raise StrategyError("strategy owner does not match")
    return ExtractedStrategy(coded, A.alphabet)


def same_behaviour(s: Strategy, t: Strategy, alphabet, depth: int) -> bool:
    """s and t choose the same move after every history of length < depth
    ending at their owner's turn."""
    first = 0 if s.owner == 1 else 1
    for n in range(first, depth, 2):
        for h in itertools.product(alphabet, repeat=n):
            ms, mt = s.start(), t.start()
            for k, a in enumerate(h):
                own = (k % 2) == (s.owner - 1)
                ms, mt = s.observe(ms, a, own), t.observe(mt, a, own)
            if s.move(ms) != t.move(mt):
                return False
    return True


# ---------------------------------------------------------------------------
# random opponents (all finite memory)

def random_mealy(rng: random.Random, owner, alphabet, n_states=3) -> FiniteMemory:
    alphabet = list(alphabet)
    out = {s: rng.choice(alphabet) for s in range(n_states)}
    upd = {(s, a): rng.randrange(n_states) for s in range(n_states) for a in alphabet}
    return FiniteMemory(owner, alphabet, 0, out, upd, name="random-mealy")


class CodingFollower(Strategy):
    """Follows the coding for `steps` letters (letter slots filled by a
    position hash), then hands over to a random Mealy machine."""

    kind = "finite"

    def __init__(self, rng, owner, sigma, steps, monitor=None):
        self.sigma = tuple(sigma)
        X = tuple((a, b) for a in self.sigma + (ZERO, MARK) for b in GAMMA)
        super().__init__(owner, X)
        self.steps = steps
        self.monitor = monitor or CodingMonitor(sigma)
        self.after = random_mealy(rng, owner, X, rng.randint(1, 3))
        self.salt = rng.randrange(1 << 16)

    def start(self):
        return (0, self.after.start() if self.steps == 0 else None)

    def finite(self, mem):
        return True

    def move(self, mem):
        n, m = mem
        if n < self.steps:
            e1, e2, slot = self.monitor.expected(n + 1)
            if e1 == "?":
                e1 = self.sigma[(slot * 7 + self.salt) % len(self.sigma)]
            return (e1, e2)
        return self.after.move(m)

    def observe(self, mem, letter, own):
        n, m = mem
        if n + 1 < self.steps:
            return (n + 1, None)
        m = self.after.start() if m is None else self.after.observe(m, letter, own)
        return (self.steps, m)


class GuardWalker(Strategy):
    """Pseudo-random player that stays inside Pref(H) x Pref(H') while it
    can, driven by a small linear congruential state."""

    kind = "finite"

    def __init__(self, rng, owner, sigma, modulus=5, monitor=None):
        self.sigma = tuple(sigma)
        X = tuple((a, b) for a in self.sigma + (ZERO, MARK) for b in GAMMA)
        super().__init__(owner, X)
        self.guards = (monitor or CodingMonitor(sigma)).guards
        self.mod = modulus
        self.mult = rng.randrange(1, modulus)
        self.seed = rng.randrange(modulus)
        self._letters = sorted(X, key=repr)

    def start(self):
        return (self.guards.pref_start, self.seed)

    def finite(self, mem):
        return True

    def move(self, mem):
        g, r = mem
        ok = [l for l in self._letters if g is not None and self.guards.pref_step(g, l) is not None]
        pool = ok or self._letters
        return pool[r % len(pool)]

    def observe(self, mem, letter, own):
        g, r = mem
        g2 = self.guards.pref_step(g, letter) if g is not None else None
        return (g2, (r * self.mult + 1) % self.mod)


def random_coded_opponent(rng, owner, sigma, monitor=None):
    kind = rng.randrange(3)
    if kind == 0:
        X = tuple((a, b) for a in tuple(sigma) + (ZERO, MARK) for b in GAMMA)
        return random_mealy(rng, owner, X, rng.randint(1, 4))
    if kind == 1:
        return CodingFollower(rng, owner, sigma, rng.randint(0, 60), monitor)
    return GuardWalker(rng, owner, sigma, rng.choice([3, 5, 7]), monitor)


# ---------------------------------------------------------------------------
# integer games and the phi transfer

@dataclass
class IntegerOpenGame:
    """Integers 0..bound (bound+1 stands for every larger integer); player 1
    wins iff the play has a prefix in `words`."""

    bound: int
    words: frozenset
    name: str = ""

    def __post_init__(self):
        self.words = frozenset(tuple(w) for w in self.words)
        self.depth = max((len(w) for w in self.words), default=0)

    @property
    def alphabet(self):
        return tuple(range(self.bound + 2))

    def wins(self, history) -> bool:
        return any(tuple(history[:len(w)]) == w for w in self.words)

    def p1_wins_from(self, h=()):
        return _solve(self, tuple(h))

    def winner(self):
        return 1 if self.p1_wins_from(()) else 2

    def oracle(self, w: LassoWord) -> bool:
        return self.wins(w.prefix(self.depth))

    def winning_strategy(self) -> Strategy:
        """Minimax strategy of the winner, with the history (cut at the
        game's depth) as memory."""
        win = self.winner()
        game = self

        class _S(Strategy):
            kind = "finite"

            def start(s):
                return ()

            def finite(s, mem):
                return True

            def observe(s, mem, letter, own):
                return mem + (min(letter, game.bound + 1),) if len(mem) < game.depth else mem

            def move(s, mem):
                if len(mem) >= game.depth:
                    return 0
                for a in game.alphabet:
                    ok = game.p1_wins_from(mem + (a,))
                    if ok == (win == 1):
                        return a
                return 0
        return _S(win, self.alphabet)


def _solve(game, h):
    return _solve_cached(game.words, game.bound, game.depth, h)


@lru_cache(maxsize=None)
def _solve_cached(words, bound, depth, h):
    if any(h[:len(w)] == w for w in words):
        return True
    if len(h) >= depth:
        return False
    moves = [_solve_cached(words, bound, depth, h + (a,)) for a in range(bound + 2)]
    return any(moves) if len(h) % 2 == 0 else all(moves)


def phi_winning_oracle(game: IntegerOpenGame):
    """Binary lassos in phi(L) or in one of D2, D3, D4."""
    def oracle(w: LassoWord) -> bool:
        tags = phi_guard_predicates(w)
        if tags["D2"] or tags["D3"] or tags["D4"]:
            return True
        if not tags["image"]:
            return False
        n = len(w.stem) + len(w.period) * 2 * (game.depth + 2) * (game.bound + 3)
        ints = decode_phi(w.prefix(n))
        return game.wins(tuple(min(a, game.bound + 1) for a in ints))
    return oracle


class PhiTransfer(Strategy):
    """Binary strategy from an integer strategy. Odd blocks are closed by
    player 1, even blocks by player 2; the closer of block i plays its
    integer n_i as 2(n_i+1) ones. A deviation by the opponent lands in
    D2/D3/D4 (for player 1) or outside the coded set (for player 2); the
    strategy then plays the constant '1'."""

    kind = "finite"

    def __init__(self, base: Strategy, bound: int):
        super().__init__(base.owner, ("0", "1"))
        self.base = base
        self.bound = bound
        self.cap = 2 * (bound + 2)

    def start(self):
        return ("blk", 0, 0, self.base.start())   # block parity (0: odd block), ones, base memory

    def finite(self, mem):
        return mem[0] == "punish" or self.base.finite(mem[3])

    def _closer(self, parity):
        return 1 if parity == 0 else 2

    def move(self, mem):
        if mem[0] == "punish":
            return "1"
        _, par, ones, bm = mem
        if self._closer(par) == self.owner:
            n = min(self.base.move(bm), self.bound + 1)
            return "0" if ones >= 2 * (n + 1) else "1"
        return "1"

    def observe(self, mem, letter, own):
        if mem[0] == "punish":
            return mem
        _, par, ones, bm = mem
        if letter == "1":
            return ("blk", par, min(ones + 1, self.cap), bm)
        closer = self._closer(par)
        author = self.owner if own else 3 - self.owner
        if author != closer or ones == 0 or ones % 2:
            return ("punish",)
        n = min(ones // 2 - 1, self.bound + 1)
        return ("blk", 1 - par, 0, self.base.observe(bm, n, own))


class PhiExtract(Strategy):
    """Integer strategy from a binary one: each integer move is simulated
    as a block, the opponent's ones being filled in."""

    kind = "finite"

    def __init__(self, coded: Strategy, bound: int):
        super().__init__(coded.owner, tuple(range(bound + 2)))
        self.coded = coded
        self.bound = bound
        self.cap = 2 * (bound + 2)

    def start(self):
        return (0, self.coded.start(), None)   # block parity, binary memory, exit

    def finite(self, mem):
        return self.coded.finite(mem[1])

    def _block(self, mem, n=None):
        """Play one block; n is the integer of the opponent closing it, or
        None when the owner closes. Returns (integer, memory)."""
        par, cm, ex = mem
        if ex is not None:
            return 0, mem
        closer = 1 if par == 0 else 2
        # block starts at an odd position for odd blocks
        pos_owner = 0 if (par == 0) == (self.owner == 1) else 1
        ones = 0
        for k in range(2 * self.cap + 4):
            mine = k % 2 == pos_owner
            if mine:
                a = self.coded.move(cm)
            else:
                a = "0" if (closer != self.owner and ones >= 2 * (n + 1)) else "1"
            if a == "0":
                if (self.owner if mine else 3 - self.owner) != closer or ones == 0 or ones % 2:
                    return 0, (1 - par, cm, k)
                cm = self.coded.observe(cm, a, mine)
                return min(ones // 2 - 1, self.bound + 1), (1 - par, cm, None)
            cm = self.coded.observe(cm, a, mine)
            ones += 1
        return self.bound + 1, (1 - par, cm, "open")

    def move(self, mem):
        n, _ = self._block(mem)
        return n

    def observe(self, mem, letter, own):
        if own:
            _, m2 = self._block(mem)
        else:
            _, m2 = self._block(mem, letter)
        return m2


def transfer_phi_strategy(s: Strategy, bound: int, direction: str) -> Strategy:
    if direction == "BaireToCantor":
        return PhiTransfer(s, bound)
    if direction == "CantorToBaire":
        return PhiExtract(s, bound)
    raise StrategyError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# universality game

def universality_arena(T: BuchiAutomaton) -> GSArena:
    G = build_interleaved_game(T)
    return GSArena(tuple(T.alphabet), lambda w: lasso_in_buchi(G, w), name=G.name)


def solve_universality_game(T: BuchiAutomaton):
    require_det_complete(T)
    w = rejected_lasso(T)
    if w is None:
        return 1, constant(1, T.alphabet, T.alphabet[0])
    return 2, witness(2, T.alphabet, w)


# ---------------------------------------------------------------------------
# Wadge games

@dataclass
class WadgeArena:
    X: tuple
    Y: tuple
    L: object       # oracle on lassos over X
    Lp: object      # oracle on lassos over Y


def play_wadge(arena: WadgeArena, s1: Strategy, s2: Strategy, horizon: int) -> PlayRecord:
    moves, authors, r0 = _run_play(s1, s2, horizon, (set(arena.X), set(arena.Y) | {SKIP}))
    rec = PlayRecord(moves, authors, Winner.UNKNOWN)
    if r0 is None:
        return rec
    a_stem, a_per = moves[0:2 * r0:2], moves[2 * r0::2]
    b_stem = [b for b in moves[1:2 * r0:2] if b != SKIP]
    b_per = [b for b in moves[2 * r0 + 1::2] if b != SKIP]
    a = LassoWord(a_stem, a_per)
    rec.word = a
    if not b_per:
        rec.notes["b"] = "finite"
        rec.verdict = Winner.P1
        return rec
    b = LassoWord(b_stem, b_per)
    rec.notes["b"] = str(b)
    rec.verdict = Winner.P2 if bool(arena.L(a)) == bool(arena.Lp(b)) else Winner.P1
    return rec


def copycat(X) -> FiniteMemory:
    out = {"start": SKIP, **{a: a for a in X}}
    upd = {(s, a): a for s in out for a in X}
    return FiniteMemory(2, tuple(X) + (SKIP,), "start", out, upd, name="copycat")


@dataclass
class SequentialTransducer:
    initial: object
    delta: dict      # (state, letter) -> (state, output tuple)


def identity_transducer(X):
    return SequentialTransducer(0, {(0, a): (0, (a,)) for a in X})


def delay_transducer(X):
    d = {("start", a): (a, ()) for a in X}
    d.update({(b, a): (a, (b,)) for a in X for b in X})
    return SequentialTransducer("start", d)


class ReductionStrategy(Strategy):
    """Player 2 in the Wadge game emitting a transducer's output, one letter
    per round, skipping while nothing is pending."""

    kind = "finite"

    def __init__(self, f: SequentialTransducer, Y, max_buffer=16):
        super().__init__(2, tuple(Y) + (SKIP,))
        self.f = f
        self.max_buffer = max_buffer

    def start(self):
        return (self.f.initial, ())

    def finite(self, mem):
        return True

    def move(self, mem):
        return mem[1][0] if mem[1] else SKIP

    def observe(self, mem, letter, own):
        q, buf = mem
        if own:
            return (q, buf[1:]) if letter != SKIP else mem
        q2, out = self.f.delta[(q, letter)]
        buf = buf + tuple(out)
        if len(buf) > self.max_buffer:
            raise StrategyError("transducer output outruns one letter per round")
        return (q2, buf)


def reduction_to_wadge_strategy(f: SequentialTransducer, Y) -> ReductionStrategy:
    return ReductionStrategy(f, Y)
