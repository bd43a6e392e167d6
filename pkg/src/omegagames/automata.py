"""Automaton data model and the regular scaffolding operations."""
from collections import defaultdict, deque

from .words import LassoWord


class AutomatonError(ValueError):
    pass


def _check_core(states, initial, accepting):
    if initial not in states:
        raise AutomatonError(f"initial state {initial!r} is not declared")
    extra = set(accepting) - set(states)
    if extra:
        raise AutomatonError(f"accepting states not declared: {sorted(map(str, extra))}")


class BuchiAutomaton:
    def __init__(self, states, alphabet, transitions, initial, accepting, name=""):
        self.states = tuple(dict.fromkeys(states))
        self.alphabet = tuple(alphabet)
        self.transitions = tuple(dict.fromkeys((p, a, q) for p, a, q in transitions))
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.name = name
        _check_core(set(self.states), initial, self.accepting)
        sset, aset = set(self.states), set(self.alphabet)
        self.out = defaultdict(list)
        for p, a, q in self.transitions:
            if p not in sset or q not in sset:
                raise AutomatonError(f"transition {(p, a, q)!r} uses an undeclared state")
            if a not in aset:
                raise AutomatonError(f"transition {(p, a, q)!r} uses letter outside the alphabet")
            self.out[p].append((a, q))

    def successors(self, p, a):
        return [q for b, q in self.out[p] if b == a]

    def is_deterministic(self):
        seen = set()
        for p, a, _ in self.transitions:
            if (p, a) in seen:
                return False
            seen.add((p, a))
        return True

    def is_complete(self):
        have = {(p, a) for p, a, _ in self.transitions}
        return all((p, a) in have for p in self.states for a in self.alphabet)

    def step(self, p, a):
        """Deterministic successor or None."""
        for b, q in self.out[p]:
            if b == a:
                return q
        return None

    def reachable(self):
        seen = {self.initial}
        todo = [self.initial]
        while todo:
            p = todo.pop()
            for _, q in self.out[p]:
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        return seen

    def __repr__(self):
        return f"BuchiAutomaton({self.name or '?'}, {len(self.states)} states)"


class FiniteAutomaton:
    """Nondeterministic automaton on finite words."""

    def __init__(self, states, alphabet, transitions, initial, final, name=""):
        self.states = tuple(dict.fromkeys(states))
        self.alphabet = tuple(alphabet)
        self.transitions = tuple(dict.fromkeys(transitions))
        self.initial = initial
        self.final = frozenset(final)
        self.name = name
        _check_core(set(self.states), initial, self.final)
        self.out = defaultdict(list)
        for p, a, q in self.transitions:
            self.out[p].append((a, q))

    def run(self, word, start=None):
        cur = {self.initial} if start is None else set(start)
        for a in word:
            cur = {q for p in cur for b, q in self.out[p] if b == a}
            if not cur:
                break
        return cur

    def accepts(self, word) -> bool:
        return bool(self.run(word) & self.final)


class CounterBuchiAutomaton:
    """k-counter Buchi machine.

    A transition is (source, letter or None, tests, target, deltas): tests[m]
    is 0 when counter m must be zero and 1 when it must be positive.
    """

    def __init__(self, states, alphabet, k, transitions, initial, accepting,
                 real_time=None, name=""):
        self.states = tuple(dict.fromkeys(states))
        self.alphabet = tuple(alphabet)
        self.k = k
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.name = name
        if k < 1:
            raise AutomatonError("a counter machine needs at least one counter")
        _check_core(set(self.states), initial, self.accepting)
        ts = []
        for t in transitions:
            p, a, tests, q, deltas = t
            tests, deltas = tuple(tests), tuple(deltas)
            if len(tests) != k or len(deltas) != k:
                raise AutomatonError(f"transition {t!r} does not have {k} counter components")
            for i, j in zip(tests, deltas):
                if i not in (0, 1) or j not in (-1, 0, 1):
                    raise AutomatonError(f"transition {t!r} has malformed counter data")
                if i == 0 and j == -1:
                    raise AutomatonError(f"transition {t!r}: decrement under zero-test")
            if p not in self.states or q not in self.states:
                raise AutomatonError(f"transition {t!r} uses an undeclared state")
            if a is not None and a not in self.alphabet:
                raise AutomatonError(f"transition {t!r} uses letter outside the alphabet")
            ts.append((p, a, tests, q, deltas))
        self.transitions = tuple(dict.fromkeys(ts))
        has_lambda = any(a is None for _, a, _, _, _ in self.transitions)
        if real_time is None:
            real_time = not has_lambda
        if real_time and has_lambda:
            raise AutomatonError("a real-time machine has no lambda-transitions")
        self.real_time = real_time
        self.out = defaultdict(list)
        for t in self.transitions:
            self.out[t[0]].append(t)

    def enabled(self, p, counters, letter=...):
        """Transitions from p whose zero-tests match the counter vector;
        `letter` restricts to that letter (None meaning lambda)."""
        res = []
        for t in self.out[p]:
            if letter is not ... and t[1] != letter:
                continue
            if all((c > 0) == bool(i) for c, i in zip(counters, t[2])):
                res.append(t)
        return res

    def __repr__(self):
        return f"CounterBuchiAutomaton({self.name or '?'}, {len(self.states)} states, k={self.k})"


class TwoTapeBuchiAutomaton:
    """Transitions (p, u, v, q) with u, v finite words (tuples) over the tapes."""

    def __init__(self, states, alphabet1, alphabet2, transitions, initial, accepting,
                 name="", roles=None, notes=None):
        self.states = tuple(dict.fromkeys(states))
        self.alphabet1 = tuple(alphabet1)
        self.alphabet2 = tuple(alphabet2)
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.name = name
        self.roles = dict(roles or {})
        self.notes = list(notes or [])
        _check_core(set(self.states), initial, self.accepting)
        sset, a1, a2 = set(self.states), set(self.alphabet1), set(self.alphabet2)
        ts = []
        for p, u, v, q in transitions:
            u, v = tuple(u), tuple(v)
            if p not in sset or q not in sset:
                raise AutomatonError(f"transition {(p, u, v, q)!r} uses an undeclared state")
            if not set(u) <= a1 or not set(v) <= a2:
                raise AutomatonError(f"transition {(p, u, v, q)!r} uses letters outside the tapes")
            ts.append((p, u, v, q))
        self.transitions = tuple(dict.fromkeys(ts))
        self.out = defaultdict(list)
        for t in self.transitions:
            self.out[t[0]].append(t)

    def __repr__(self):
        return f"TwoTapeBuchiAutomaton({self.name or '?'}, {len(self.states)} states)"


# ---------------------------------------------------------------------------
# graph helpers

def sccs(nodes, succ):
    """Tarjan, iterative. Returns a list of components (lists)."""
    index, low, on, stack, comps = {}, {}, set(), [], []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def _live_states(states, edges, accepting):
    """States from which some accepting state lying on a cycle is reachable."""
    succ = defaultdict(set)
    pred = defaultdict(set)
    for p, q in edges:
        succ[p].add(q)
        pred[q].add(p)
    good = set()
    for comp in sccs(states, lambda v: succ[v]):
        cs = set(comp)
        cyclic = len(comp) > 1 or comp[0] in succ[comp[0]]
        if cyclic and cs & set(accepting):
            good |= cs
    todo = list(good)
    while todo:
        q = todo.pop()
        for p in pred[q]:
            if p not in good:
                good.add(p)
                todo.append(p)
    return good


# ---------------------------------------------------------------------------
# operations

def union_2tape(A: TwoTapeBuchiAutomaton, B: TwoTapeBuchiAutomaton, name="") -> TwoTapeBuchiAutomaton:
    if set(A.alphabet1) != set(B.alphabet1) or set(A.alphabet2) != set(B.alphabet2):
        raise AutomatonError("union needs identical tape alphabets")
    init = ("init",)
    states = [init] + [(0, q) for q in A.states] + [(1, q) for q in B.states]
    ts = []
    for tag, M in ((0, A), (1, B)):
        for p, u, v, q in M.transitions:
            ts.append(((tag, p), u, v, (tag, q)))
            if p == M.initial:
                ts.append((init, u, v, (tag, q)))
    acc = [(0, q) for q in A.accepting] + [(1, q) for q in B.accepting]
    roles = {}
    for tag, M in ((0, A), (1, B)):
        for q, r in M.roles.items():
            roles[(tag, q)] = r
    return TwoTapeBuchiAutomaton(states, A.alphabet1, A.alphabet2, ts, init, acc,
                                 name=name or f"{A.name}|{B.name}", roles=roles,
                                 notes=A.notes + B.notes)


def union_many(parts, name=""):
    out = parts[0]
    for p in parts[1:]:
        out = union_2tape(out, p)
    out.name = name or out.name
    return out


def prefix_automaton(B: BuchiAutomaton) -> FiniteAutomaton:
    reach = B.reachable()
    edges = [(p, q) for p, _, q in B.transitions if p in reach and q in reach]
    live = _live_states(reach, edges, B.accepting & reach)
    ts = [(p, a, q) for p, a, q in B.transitions if p in live and q in live]
    states = list(live) if B.initial in live else [B.initial]
    return FiniteAutomaton(states, B.alphabet, ts if B.initial in live else [],
                           B.initial, live, name=f"Pref({B.name})")


def closure_automaton(B: BuchiAutomaton) -> BuchiAutomaton:
    P = prefix_automaton(B)
    return BuchiAutomaton(P.states, B.alphabet, P.transitions, P.initial, P.final,
                          name=f"Cl({B.name})")


def require_det_complete(B: BuchiAutomaton):
    if not B.is_deterministic():
        raise AutomatonError("automaton is not deterministic")
    if not B.is_complete():
        raise AutomatonError("automaton is not complete")


def rejected_lasso(B: BuchiAutomaton):
    """For deterministic complete B: a lasso outside L(B), or None if universal."""
    require_det_complete(B)
    reach = B.reachable()
    bad = [p for p in B.states if p in reach and p not in B.accepting]
    badset = set(bad)
    succ = {p: [q for _, q in B.out[p] if q in badset] for p in bad}
    for comp in sccs(bad, lambda v: succ[v]):
        if len(comp) == 1 and comp[0] not in succ[comp[0]]:
            continue
        target = comp[0]
        stem = _word_path(B, B.initial, {target}, set(B.states))
        return LassoWord(stem, _word_path_cycle(B, target, set(comp)))
    return None


def _word_path(B, src, targets, allowed):
    prev = {src: None}
    todo = deque([src])
    while todo:
        p = todo.popleft()
        if p in targets:
            word = []
            while prev[p] is not None:
                a, r = prev[p]
                word.append(a)
                p = r
            return word[::-1]
        for a, q in sorted(B.out[p], key=lambda x: str(x[0])):
            if q in allowed and q not in prev:
                prev[q] = (a, p)
                todo.append(q)
    return None


def _word_path_cycle(B, target, comp):
    prev = {}
    todo = deque()
    for a, q in B.out[target]:
        if q in comp and q not in prev:
            prev[q] = (a, None)
            todo.append(q)
    while todo:
        p = todo.popleft()
        if p == target:
            break
        for a, q in B.out[p]:
            if q in comp and q not in prev:
                prev[q] = (a, p)
                todo.append(q)
    word = []
    p = target
    while True:
        a, r = prev[p]
        word.append(a)
        if r is None:
            break
        p = r
    return word[::-1]


def universal_det_buchi(B: BuchiAutomaton) -> bool:
    return rejected_lasso(B) is None


def universal_2tape(alphabet1, alphabet2, name="all") -> TwoTapeBuchiAutomaton:
    ts = [("u", (a,), (b,), "u") for a in alphabet1 for b in alphabet2]
    return TwoTapeBuchiAutomaton(["u"], alphabet1, alphabet2, ts, "u", ["u"], name=name)


def _label_paths(G: BuchiAutomaton, g, word):
    """Endpoints of G-paths reading `word` from g, with an accepting-visit flag."""
    cur = {(g, False)}
    for a in word:
        cur = {(q, f or q in G.accepting) for p, f in cur for q in G.successors(p, a)}
        if not cur:
            break
    return cur


def constrained_product_2tape(T: TwoTapeBuchiAutomaton, G1: BuchiAutomaton,
                              G2: BuchiAutomaton, name="") -> TwoTapeBuchiAutomaton:
    """L(T) intersected with L(G1) x L(G2).

    Three acceptance sets (T, G1, G2) are chained by a round index 0, 1, 2;
    index 3 marks a completed round and is the Buchi set.
    """
    if not set(T.alphabet1) <= set(G1.alphabet) or not set(T.alphabet2) <= set(G2.alphabet):
        raise AutomatonError("guard alphabets do not match the tapes")
    init = (T.initial, G1.initial, G2.initial, 0)
    states = {init}
    ts = []
    todo = [init]
    while todo:
        s = todo.pop()
        t, g1, g2, k = s
        k0 = 0 if k == 3 else k
        for _, u, v, t2 in T.out[t]:
            for h1, f1 in _label_paths(G1, g1, u):
                for h2, f2 in _label_paths(G2, g2, v):
                    k2 = k0
                    if k2 == 0 and t2 in T.accepting:
                        k2 = 1
                    if k2 == 1 and f1:
                        k2 = 2
                    if k2 == 2 and f2:
                        k2 = 3
                    s2 = (t2, h1, h2, k2)
                    ts.append((s, u, v, s2))
                    if s2 not in states:
                        states.add(s2)
                        todo.append(s2)
    acc = [s for s in states if s[3] == 3]
    roles = {s: T.roles[s[0]] for s in states if s[0] in T.roles}
    return TwoTapeBuchiAutomaton(states, T.alphabet1, T.alphabet2, ts, init, acc,
                                 name=name or f"{T.name}&({G1.name}x{G2.name})", roles=roles,
                                 notes=T.notes)


def product_of_languages(G1: BuchiAutomaton, G2: BuchiAutomaton, name="") -> TwoTapeBuchiAutomaton:
    """L(G1) x L(G2) as a lockstep 2-tape automaton."""
    T = universal_2tape(G1.alphabet, G2.alphabet)
    return constrained_product_2tape(T, G1, G2, name=name or f"{G1.name}x{G2.name}")
