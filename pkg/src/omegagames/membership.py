"""Decision procedures: exact lasso engines, bounded run search and run
certificates.

Exact engines work on the finite product of a machine with the position
graph of a lasso. The one-counter engine is exact through level summaries
(pushdown-style saturation); an explicit configuration search with a counter
cutoff supplies concrete witness runs and serves as a second route.
"""
from collections import defaultdict, deque
from dataclasses import dataclass
from enum import Enum

from .automata import (BuchiAutomaton, CounterBuchiAutomaton, TwoTapeBuchiAutomaton,
                       _live_states, sccs)
from .words import LassoWord, PairWord

F_BIT, C_BIT = 1, 2
FULL = F_BIT | C_BIT


class Outcome(str, Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"
    UNKNOWN = "Unknown"


@dataclass
class Verdict:
    outcome: Outcome
    evidence: object = None

    @property
    def accepted(self):
        return self.outcome is Outcome.ACCEPT

    @property
    def rejected(self):
        return self.outcome is Outcome.REJECT

    def __str__(self):
        return self.outcome.value


@dataclass(frozen=True)
class SearchBounds:
    max_depth: int = 60
    max_counter: int = 30
    max_blocks: int = 30

    def __post_init__(self):
        if min(self.max_depth, self.max_counter, self.max_blocks) < 0:
            raise ValueError("search bounds must be nonnegative")

    @classmethod
    def parse(cls, text):
        d, c, b = (int(t) for t in text.split(","))
        return cls(d, c, b)


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Segment:
    """At loop round r the segment takes a*r+b steps, each step using the
    first of `choices` that fits the current state and input letters."""

    choices: tuple
    a: int = 0
    b: int = 1
    role: str = ""

    def count(self, r):
        return self.a * r + self.b


@dataclass
class RunCertificate:
    machine: object
    word: object
    prefix: list
    loop: list
    accepting_witness: object = None  # index of a loop segment entering F

    def summary(self):
        return (f"certificate: prefix {len(self.prefix)} steps, loop of "
                f"{len(self.loop)} segments, witness segment {self.accepting_witness}")


# ---------------------------------------------------------------------------
# Buchi automata on lassos

def _buchi_product(B: BuchiAutomaton, w: LassoWord):
    start = (B.initial, 0)
    succ = defaultdict(list)
    seen = {start}
    todo = [start]
    while todo:
        q, k = todo.pop()
        a = w.letter_at_phase(k)
        k2 = w.next_phase(k)
        for q2 in B.successors(q, a):
            n2 = (q2, k2)
            succ[(q, k)].append(n2)
            if n2 not in seen:
                seen.add(n2)
                todo.append(n2)
    return seen, succ


def lasso_in_buchi(B: BuchiAutomaton, w: LassoWord) -> bool:
    nodes, succ = _buchi_product(B, w)
    for comp in sccs(list(nodes), lambda v: succ[v]):
        if len(comp) == 1 and comp[0] not in succ[comp[0]]:
            continue
        if any(q in B.accepting for q, _ in comp):
            return True
    return False


# ---------------------------------------------------------------------------
# 2-tape automata on pairs of lassos

class _LabelReader:
    """Reads finite labels off a lasso from a phase, with memoized results."""

    def __init__(self, word: LassoWord):
        self.seq = word.stem + word.period
        self.loop = len(word.stem)
        self.memo = {}

    def __call__(self, k, label):
        key = (k, label)
        if key in self.memo:
            return self.memo[key]
        seq, last = self.seq, len(self.seq)
        j = k
        for a in label:
            if seq[j] != a:
                j = None
                break
            j += 1
            if j == last:
                j = self.loop
        self.memo[key] = j
        return j


def _pair_edges(T: TwoTapeBuchiAutomaton, read1, read2, node):
    q, k1, k2 = node
    for t in T.out[q]:
        _, u, v, q2 = t
        j1 = read1(k1, u)
        if j1 is None:
            continue
        j2 = read2(k2, v)
        if j2 is None:
            continue
        yield t, (q2, j1, j2)


def lassopair_in_2tape(T: TwoTapeBuchiAutomaton, p) -> bool:
    x, y = _as_pair(p)
    read1, read2 = _LabelReader(x), _LabelReader(y)
    start = (T.initial, 0, 0)
    seen = {start}
    succ = defaultdict(list)
    todo = [start]
    while todo:
        n = todo.pop()
        for t, n2 in _pair_edges(T, read1, read2, n):
            succ[n].append((n2, bool(t[1]), bool(t[2])))
            if n2 not in seen:
                seen.add(n2)
                todo.append(n2)
    plain = {n: [m for m, _, _ in es] for n, es in succ.items()}
    for comp in sccs(list(seen), lambda v: plain.get(v, ())):
        cs = set(comp)
        if not any(n[0] in T.accepting for n in comp):
            continue
        adv1 = adv2 = False
        for n in comp:
            for m, a1, a2 in succ[n]:
                if m in cs:
                    adv1 |= a1
                    adv2 |= a2
        if adv1 and adv2:
            return True
    return False


def _as_pair(p):
    if isinstance(p, PairWord):
        return p.first, p.second
    return p


# ---------------------------------------------------------------------------
# one-counter machines: exact engine through level summaries

def _counter_edges(A: CounterBuchiAutomaton, w: LassoWord):
    """Edges of the control x phase graph: (u, v, test, delta, mask, transition)."""
    nodes = [(q, k) for q in A.states for k in range(w.size)]
    edges = []
    for q, k in nodes:
        a = w.letter_at_phase(k)
        for t in A.out[q]:
            _, b, tests, q2, deltas = t
            if b is None:
                v, consume = (q2, k), 0
            elif b == a:
                v, consume = (q2, w.next_phase(k)), C_BIT
            else:
                continue
            mask = consume | (F_BIT if q2 in A.accepting else 0)
            edges.append(((q, k), v, tests[0], deltas[0], mask, t))
    return nodes, edges


class _Summary:
    """Set of facts (u, v, mask) closed under concatenation and nesting,
    keeping only masks that are not dominated."""

    def __init__(self):
        self.fwd = defaultdict(dict)   # u -> v -> set(masks)
        self.bwd = defaultdict(dict)   # v -> u -> set(masks)

    def has(self, u, v, m):
        return any(m | x == x for x in self.fwd[u].get(v, ()))

    def add(self, u, v, m):
        if self.has(u, v, m):
            return False
        s = self.fwd[u].setdefault(v, set())
        for x in [x for x in s if x | m == m]:
            s.discard(x)
        s.add(m)
        self.bwd[v].setdefault(u, set()).add(m)
        return True

    def out(self, u):
        for v, ms in self.fwd[u].items():
            for m in ms:
                yield v, m

    def into(self, v):
        for u, ms in self.bwd[v].items():
            for m in ms:
                yield u, m


def _saturate(nodes, base, incs, decs, outer=None, outer_incs=None):
    """Level-preserving path summaries.

    base: (u, v, mask) steps that keep the level; incs/decs: (u, v, mask)
    counter moves used for nested excursions one level up, which are
    themselves summarised by `outer` (or by the relation being built).
    """
    Z = _Summary()
    work = deque()

    def push(u, v, m):
        if Z.add(u, v, m):
            work.append((u, v, m))

    for u in nodes:
        push(u, u, 0)
    for u, v, m in base:
        push(u, v, m)
    inc_into = defaultdict(list)
    for p, u2, m in (outer_incs if outer_incs is not None else incs):
        inc_into[u2].append((p, m))
    dec_from = defaultdict(list)
    for v2, r, m in decs:
        dec_from[v2].append((r, m))
    inner = outer if outer is not None else Z
    if outer is not None:
        for u2 in list(inner.fwd):
            for v2, m in list(inner.out(u2)):
                for p, m1 in inc_into[u2]:
                    for r, m2 in dec_from[v2]:
                        push(p, r, m | m1 | m2)
    while work:
        u, v, m = work.popleft()
        for w, m2 in list(Z.out(v)):
            push(u, w, m | m2)
        for w, m2 in list(Z.into(u)):
            push(w, v, m | m2)
        if outer is None:
            for p, m1 in inc_into[u]:
                for r, m2 in dec_from[v]:
                    push(p, r, m | m1 | m2)
    return Z


def _flag_cycle(graph, v):
    """Is there a nonempty cycle v -> v in `graph` (u -> [(w, mask)]) whose
    union of masks is FULL?"""
    start = (v, 0)
    seen = set()
    todo = [start]
    while todo:
        n, m = todo.pop()
        for w, em in graph.get(n, ()):
            s = (w, m | em)
            if w == v and s[1] == FULL:
                return True
            if s not in seen:
                seen.add(s)
                todo.append(s)
    return False


def summary_counter_verdict(A: CounterBuchiAutomaton, w: LassoWord) -> bool:
    """Exact acceptance for a one-counter machine on a lasso."""
    if A.k != 1:
        raise ValueError("the summary engine handles exactly one counter")
    nodes, edges = _counter_edges(A, w)
    pos_base = [(u, v, m) for u, v, t, d, m, _ in edges if t == 1 and d == 0]
    pos_inc = [(u, v, m) for u, v, t, d, m, _ in edges if t == 1 and d == 1]
    pos_dec = [(u, v, m) for u, v, t, d, m, _ in edges if t == 1 and d == -1]
    zero_base = [(u, v, m) for u, v, t, d, m, _ in edges if t == 0 and d == 0]
    zero_inc = [(u, v, m) for u, v, t, d, m, _ in edges if t == 0 and d == 1]
    Z = _saturate(nodes, pos_base, pos_inc, pos_dec)
    Z0 = _saturate(nodes, zero_base, None, pos_dec, outer=Z, outer_incs=zero_inc)
    init = (A.initial, 0)
    reach0 = {v for v, _ in Z0.out(init)}
    for v in reach0:
        if Z0.has(v, v, FULL):
            return True
    # graph of summaries and increments at levels >= 1
    gplus = defaultdict(list)
    for u in nodes:
        for v, m in Z.out(u):
            if m or u != v:
                gplus[u].append((v, m))
    for u, v, m in pos_inc:
        gplus[u].append((v, m))
    starts = {v for u in reach0 for p, v, m in zero_inc if p == u}
    reach_plus = set(starts)
    todo = list(starts)
    while todo:
        u = todo.pop()
        for v, _ in gplus[u]:
            if v not in reach_plus:
                reach_plus.add(v)
                todo.append(v)
    return any(_flag_cycle(gplus, v) for v in reach_plus)


# ---------------------------------------------------------------------------
# one-counter and k-counter machines: explicit configuration search

@dataclass
class CounterRun:
    """prefix reaches configuration (state, phase, counters); loop returns to
    the same state and phase with counters raised by `gain` (all >= 0)."""

    prefix: list
    loop: list
    start_counters: tuple
    gain: tuple

    def transitions(self, rounds):
        return list(self.prefix) + list(self.loop) * rounds


def counter_cutoff(A, w: LassoWord) -> int:
    return len(A.states) * (len(w.stem) + len(w.period)) + 2


def _config_graph(A, w, max_counter, max_depth=None):
    """Explore configurations (state, phase, counters). Returns
    (nodes, succ, parent, pruned) where succ entries are (node, mask, t)."""
    start = (A.initial, 0, (0,) * A.k)
    depth = {start: 0}
    parent = {start: None}
    succ = defaultdict(list)
    pruned = False
    todo = deque([start])
    while todo:
        n = todo.popleft()
        q, k, cs = n
        if max_depth is not None and depth[n] >= max_depth:
            pruned = True
            continue
        a = w.letter_at_phase(k)
        for t in A.enabled(q, cs):
            _, b, tests, q2, deltas = t
            if b is None:
                k2, consume = k, 0
            elif b == a:
                k2, consume = w.next_phase(k), C_BIT
            else:
                continue
            cs2 = tuple(c + d for c, d in zip(cs, deltas))
            if max(cs2) > max_counter:
                pruned = True
                continue
            n2 = (q2, k2, cs2)
            succ[n].append((n2, consume | (F_BIT if q2 in A.accepting else 0), t))
            if n2 not in depth:
                depth[n2] = depth[n] + 1
                parent[n2] = (n, t)
                todo.append(n2)
    return depth, succ, parent, pruned


def _path_to(parent, n):
    out = []
    while parent[n] is not None:
        n, t = parent[n]
        out.append(t)
    return out[::-1]


def _flag_cycle_path(succ, start, allowed):
    """Cycle start -> start inside `allowed` with FULL mask, as transitions."""
    prev = {}
    todo = deque([(start, 0)])
    seen = {(start, 0)}
    while todo:
        n, m = todo.popleft()
        for n2, em, t in succ.get(n, ()):
            if n2 not in allowed:
                continue
            s = (n2, m | em)
            if s in seen:
                continue
            seen.add(s)
            prev[s] = ((n, m), t)
            if n2 == start and s[1] == FULL:
                path = []
                cur = s
                while cur != (start, 0):
                    p, t = prev[cur]
                    path.append(t)
                    cur = p
                return path[::-1]
            todo.append(s)
    return None


def _pump_path(A, w, node):
    """Path from (q, k) at relative level 0 back to (q, k) at a higher level,
    never below 0, using only positive-tested transitions (k = 1), with FULL
    mask. Relative levels are bounded by the size of the phase graph."""
    q0, k0 = node
    limit = len(A.states) * w.size + 1
    start = (q0, k0, 0, 0)
    prev = {start: None}
    todo = deque([start])
    while todo:
        s = todo.popleft()
        q, k, c, m = s
        a = w.letter_at_phase(k)
        for t in A.out[q]:
            _, b, tests, q2, deltas = t
            if tests[0] != 1:
                continue
            if b is None:
                k2, consume = k, 0
            elif b == a:
                k2, consume = w.next_phase(k), C_BIT
            else:
                continue
            c2 = c + deltas[0]
            if c2 < 0 or c2 > limit:
                continue
            m2 = m | consume | (F_BIT if q2 in A.accepting else 0)
            s2 = (q2, k2, c2, m2)
            if s2 in prev:
                continue
            prev[s2] = (s, t)
            if (q2, k2) == (q0, k0) and c2 > 0 and m2 == FULL:
                path = []
                cur = s2
                while prev[cur] is not None:
                    cur, t = prev[cur]
                    path.append(t)
                return path[::-1], c2
            todo.append(s2)
    return None


def explicit_counter_search(A, w: LassoWord, max_counter, max_depth=None):
    """Returns (outcome, CounterRun or None). Reject only when the explored
    configuration space was not cut by the bounds."""
    depth, succ, parent, pruned = _config_graph(A, w, max_counter, max_depth)
    nodes = list(depth)
    plain = {n: [m for m, _, _ in es] for n, es in succ.items()}
    for comp in sccs(nodes, lambda v: plain.get(v, ())):
        cs = set(comp)
        if len(comp) == 1 and comp[0] not in plain.get(comp[0], ()):
            continue
        masks = 0
        for n in comp:
            for n2, m, _ in succ[n]:
                if n2 in cs:
                    masks |= m
        if masks != FULL:
            continue
        x = min(comp, key=lambda n: depth[n])
        loop = _flag_cycle_path(succ, x, cs)
        if loop is not None:
            return Outcome.ACCEPT, CounterRun(_path_to(parent, x), loop, x[2], (0,) * A.k)
    if A.k == 1:
        tried = set()
        for n in sorted(nodes, key=lambda n: depth[n]):
            q, k, cs = n
            if cs[0] < 1 or (q, k) in tried:
                continue
            tried.add((q, k))
            found = _pump_path(A, w, (q, k))
            if found is not None:
                loop, gain = found
                return Outcome.ACCEPT, CounterRun(_path_to(parent, n), loop, cs, (gain,))
    return (Outcome.UNKNOWN if pruned else Outcome.REJECT), None


def cutoff_counter_verdict(A, w, cutoff=None) -> bool:
    """Accept iff the configuration graph truncated at `cutoff` shows an
    accepting lasso run or a pumpable accepting cycle."""
    if cutoff is None:
        cutoff = counter_cutoff(A, w)
    outcome, _ = explicit_counter_search(A, w, cutoff)
    return outcome is Outcome.ACCEPT


def counter_witness(A, w, cutoff=None, limit=4096):
    """An explicit accepting CounterRun, raising the cutoff until one shows up."""
    c = cutoff or counter_cutoff(A, w)
    while c <= limit:
        outcome, run = explicit_counter_search(A, w, c)
        if outcome is Outcome.ACCEPT:
            return run
        c *= 2
    return None


def lasso_in_counter(A: CounterBuchiAutomaton, w: LassoWord, bounds: SearchBounds = None) -> Verdict:
    bounds = bounds or SearchBounds()
    if A.k == 1:
        if not summary_counter_verdict(A, w):
            return Verdict(Outcome.REJECT, {"engine": "exact-summary"})
        run = counter_witness(A, w)
        return Verdict(Outcome.ACCEPT, {"engine": "exact-summary", "run": run,
                                        "cutoff": counter_cutoff(A, w)})
    outcome, run = explicit_counter_search(A, w, bounds.max_counter, bounds.max_depth)
    return Verdict(outcome, {"engine": "bounded", "run": run, "bounds": bounds})


def check_counter_run(A, w, run: CounterRun, rounds=3) -> bool:
    """Replay a witness run for a few loop rounds."""
    q, k, cs = A.initial, 0, (0,) * A.k
    visits = 0
    for i, t in enumerate(run.transitions(rounds)):
        p, b, tests, q2, deltas = t
        if p != q or t not in A.out[p]:
            return False
        if not all((c > 0) == bool(x) for c, x in zip(cs, tests)):
            return False
        if b is not None:
            if b != w.letter_at_phase(k):
                return False
            k = w.next_phase(k)
        cs = tuple(c + d for c, d in zip(cs, deltas))
        q = q2
        if i >= len(run.prefix) and q in A.accepting:
            visits += 1
    return visits >= rounds


# ---------------------------------------------------------------------------
# bounded search

def _positional(word):
    return word.letter


def _universal_loop(M, s):
    """Does state s carry self-loops that read any continuation?"""
    if isinstance(M, TwoTapeBuchiAutomaton):
        labels = {(u, v) for _, u, v, q in M.out[s] if q == s}
        lock = all(((a,), (b,)) in labels for a in M.alphabet1 for b in M.alphabet2)
        split = (all(((a,), ()) in labels for a in M.alphabet1)
                 and all(((), (b,)) in labels for b in M.alphabet2))
        return lock or split
    if isinstance(M, BuchiAutomaton):
        return all(s in M.successors(s, a) for a in M.alphabet)
    return False


def _universal_certificate(M, word, prefix, s):
    if isinstance(M, TwoTapeBuchiAutomaton):
        loops = tuple(t for t in M.out[s] if t[3] == s)
        lock = tuple(t for t in loops if len(t[1]) == 1 and len(t[2]) == 1)
        if lock and all(((a,), (b,)) in {(t[1], t[2]) for t in lock}
                        for a in M.alphabet1 for b in M.alphabet2):
            seg = [Segment(lock, 0, 1, "any")]
        else:
            seg = [Segment(tuple(t for t in loops if t[1] and not t[2]), 0, 1, "any-1"),
                   Segment(tuple(t for t in loops if t[2] and not t[1]), 0, 1, "any-2")]
        return RunCertificate(M, word, list(prefix), seg, 0)
    loops = tuple((s, a, s) for a in M.alphabet)
    return RunCertificate(M, word, list(prefix), [Segment(loops, 0, 1, "any")], 0)


def _step_generic(M, word, config):
    """Successor configurations with the transition used and flags."""
    if isinstance(M, TwoTapeBuchiAutomaton):
        q, n1, n2 = config
        x, y = _as_pair(word)
        for t in M.out[q]:
            _, u, v, q2 = t
            if all(x.letter(n1 + i) == a for i, a in enumerate(u)) and \
                    all(y.letter(n2 + i) == b for i, b in enumerate(v)):
                yield t, (q2, n1 + len(u), n2 + len(v))
    elif isinstance(M, BuchiAutomaton):
        q, n = config
        for q2 in M.successors(q, word.letter(n)):
            yield (q, word.letter(n), q2), (q2, n + 1)
    else:
        q, n, cs = config
        a = word.letter(n)
        for t in M.enabled(q, cs):
            _, b, tests, q2, deltas = t
            if b is not None and b != a:
                continue
            yield t, (q2, n + (b is not None), tuple(c + d for c, d in zip(cs, deltas)))


def _initial_config(M):
    if isinstance(M, TwoTapeBuchiAutomaton):
        return (M.initial, 1, 1)
    if isinstance(M, BuchiAutomaton):
        return (M.initial, 1)
    return (M.initial, 1, (0,) * M.k)


def _lasso_key(M, word, config):
    """Fold absolute positions of lasso inputs into phases."""
    if isinstance(M, TwoTapeBuchiAutomaton):
        x, y = _as_pair(word)
        if isinstance(x, LassoWord) and isinstance(y, LassoWord):
            return (config[0], x.phase(config[1]), y.phase(config[2]))
        return None
    if isinstance(word, LassoWord):
        return (config[0], word.phase(config[1])) + tuple(config[2:])
    return None


def _flags(M, t):
    if isinstance(M, TwoTapeBuchiAutomaton):
        return (F_BIT if t[3] in M.accepting else 0), bool(t[1]), bool(t[2])
    if isinstance(M, BuchiAutomaton):
        return (F_BIT if t[2] in M.accepting else 0), True, True
    return (F_BIT if t[3] in M.accepting else 0), t[1] is not None, t[1] is not None


def _live_control_states(M):
    """Control states that can still reach an accepting cycle; runs through
    any other state are never accepting."""
    target = 2 if isinstance(M, BuchiAutomaton) else 3
    return _live_states(M.states, [(t[0], t[target]) for t in M.transitions], M.accepting)


def bounded_run_search(M, word, bounds: SearchBounds, hint: RunCertificate = None) -> Verdict:
    """Layered exploration of run prefixes up to bounds.max_depth steps.

    Accept needs a closing certificate: a repeated lasso-folded
    configuration with an accepting visit and progress on every tape, a
    universal self-loop in an accepting state, or a supplied certificate
    that validates at bounds.max_blocks rounds. Reject means every run
    prefix died before max_depth.
    """
    if hint is not None and validate_certificate(M, hint, max(1, bounds.max_blocks)):
        return Verdict(Outcome.ACCEPT, hint)
    if bounds.max_depth == 0:
        return Verdict(Outcome.UNKNOWN, {"reason": "no exploration", "bounds": bounds})
    counters = isinstance(M, CounterBuchiAutomaton)
    live = _live_control_states(M)
    start = _initial_config(M)
    if start[0] not in live:
        return Verdict(Outcome.REJECT, {"died_at_depth": 0, "bounds": bounds})
    layer = {start}
    parent = {start: None}
    folded = defaultdict(set)      # lasso key -> successor keys with flags
    first_config = {}
    cut = False
    size = 0
    for depth in range(bounds.max_depth):
        nxt = set()
        for c in layer:
            key = _lasso_key(M, word, c)
            if key is not None:
                first_config.setdefault(key, c)
            if c[0] in getattr(M, "accepting", ()) and _universal_loop(M, c[0]):
                return Verdict(Outcome.ACCEPT, _universal_certificate(M, word, _path(parent, c), c[0]))
            for t, c2 in _step_generic(M, word, c):
                if c2[0] not in live:
                    continue
                if counters and max(c2[2]) > bounds.max_counter:
                    cut = True
                    continue
                if key is not None:
                    k2 = _lasso_key(M, word, c2)
                    first_config.setdefault(k2, c2)
                    folded[key].add((k2, _flags(M, t), t))
                if c2 not in parent:
                    parent[c2] = (c, t)
                nxt.add(c2)
        if not nxt:
            if cut:
                return Verdict(Outcome.UNKNOWN, {"bounds": bounds, "counter_cut": True})
            return Verdict(Outcome.REJECT, {"died_at_depth": depth + 1, "bounds": bounds})
        layer = nxt
        grown = sum(len(v) for v in folded.values())
        if grown > size:
            size = grown
            cert = _close_folded(M, word, folded, first_config, parent)
            if cert is not None:
                return Verdict(Outcome.ACCEPT, cert)
    return Verdict(Outcome.UNKNOWN, {"bounds": bounds, "counter_cut": cut})


def _path(parent, c):
    out = []
    while parent.get(c) is not None:
        c, t = parent[c]
        out.append(t)
    return out[::-1]


def _close_folded(M, word, folded, first_config, parent):
    """Nested search: from each accepting folded node, look for a cycle back
    to it advancing every tape and visiting an accepting state."""
    acc = getattr(M, "accepting", frozenset())
    for key in list(folded):
        if key[0] not in acc:
            continue
        # flags: bit0 accepting visit, bit1 tape-1 progress, bit2 tape-2 progress
        start = (key, 0)
        prev = {start: None}
        todo = deque([start])
        while todo:
            node, m = todo.popleft()
            for k2, (fa, p1, p2), t in folded.get(node, ()):
                m2 = m | (1 if fa else 0) | (2 if p1 else 0) | (4 if p2 else 0)
                s = (k2, m2)
                if s in prev:
                    continue
                prev[s] = ((node, m), t)
                if k2 == key and m2 == 7:
                    loop = []
                    cur = s
                    while prev[cur] is not None:
                        cur, t = prev[cur]
                        loop.append(t)
                    loop = loop[::-1]
                    segs = [Segment((t,), 0, 1) for t in loop]
                    wit = next(i for i, t in enumerate(loop) if _flags(M, t)[0])
                    cert = RunCertificate(M, word, _path(parent, first_config[key]), segs, wit)
                    if validate_certificate(M, cert, 3):
                        return cert
                todo.append(s)
    return None


# ---------------------------------------------------------------------------
# certificates

def _fits(M, word, config, t):
    for t2, c2 in _step_generic(M, word, config):
        if t2 == t:
            return c2
    return None


def unroll_certificate(M, cert: RunCertificate, rounds: int):
    """The explicit transition list of prefix plus `rounds` loop rounds, or
    None when some step does not fit the machine and the input."""
    for seg in cert.loop:
        if seg.a < 0 or seg.b < 0:
            raise CertificateError("negative block length in the loop schedule")
    config = _initial_config(M)
    steps = []
    for t in cert.prefix:
        c2 = _fits(M, cert.word, config, t)
        if c2 is None:
            return None
        steps.append(t)
        config = c2
    for r in range(rounds):
        for seg in cert.loop:
            for _ in range(seg.count(r)):
                for t in seg.choices:
                    c2 = _fits(M, cert.word, config, t)
                    if c2 is not None:
                        break
                else:
                    return None
                steps.append(t)
                config = c2
    return steps


def validate_certificate(M, cert: RunCertificate, probe_depth: int) -> bool:
    for seg in cert.loop:
        if seg.a < 0 or seg.b < 0:
            raise CertificateError("negative block length in the loop schedule")
    if cert.machine is not M:
        return False
    if cert.accepting_witness is None or not cert.loop:
        return False
    w = cert.loop[cert.accepting_witness]
    if not any(_flags(M, t)[0] for t in w.choices):
        return False
    config = _initial_config(M)
    for t in cert.prefix:
        config = _fits(M, cert.word, config, t)
        if config is None:
            return False
    for r in range(probe_depth):
        seen_f = p1 = p2 = False
        for i, seg in enumerate(cert.loop):
            for _ in range(seg.count(r)):
                for t in seg.choices:
                    c2 = _fits(M, cert.word, config, t)
                    if c2 is not None:
                        break
                else:
                    return False
                fa, a1, a2 = _flags(M, t)
                if i == cert.accepting_witness and fa:
                    seen_f = True
                p1 |= a1
                p2 |= a2
                config = c2
        if not (seen_f and p1 and p2):
            return False
    return True
