"""Text interchange format for automata.

    kind: buchi | counter | 2tape | finite
    name: <free text>
    alphabet: a b [a,0]          (alphabet1:/alphabet2: for 2tape)
    counters: 1                  (counter only)
    real_time: true|false        (counter only)
    states: q0 q1
    initial: q0
    accepting: q1                (final: for finite)
    q0 a q1                      buchi / finite
    q0 a [1] q1 [-1]             counter, '~' for lambda
    q0 "ab" "" q1                2tape, quoted label words
"""
import re

from .automata import (AutomatonError, BuchiAutomaton, CounterBuchiAutomaton,
                       FiniteAutomaton, TwoTapeBuchiAutomaton)
from .words import _tokens, format_letter


class FormatError(ValueError):
    def __init__(self, line, column, msg):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.line, self.column, self.msg = line, column, msg


HEADERS = {"kind", "name", "alphabet", "alphabet1", "alphabet2", "counters", "real_time",
           "states", "initial", "accepting", "final"}
COUNTER_LINE = re.compile(r"^(\S+)\s+(\S+)\s+\[([^\]]*)\]\s+(\S+)\s+\[([^\]]*)\]\s*$")
TAPE_LINE = re.compile(r'^(\S+)\s+"([^"]*)"\s+"([^"]*)"\s+(\S+)\s*$')


def _ints(text, line, col):
    try:
        return tuple(int(t) for t in re.split(r"[,\s]+", text.strip()) if t)
    except ValueError:
        raise FormatError(line, col, f"expected integers, got [{text}]") from None


def _letter(tok):
    got = _tokens(tok)
    if len(got) != 1:
        raise ValueError(tok)
    return got[0]


def parse_automaton(text: str):
    head, body = {}, []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = re.match(r"^\s*([a-z_0-9]+)\s*:(.*)$", line)
        if m and m.group(1) in HEADERS and not body:
            head[m.group(1)] = (m.group(2).strip(), ln)
            continue
        if m and m.group(1) in HEADERS:
            raise FormatError(ln, 1, f"header {m.group(1)!r} after the transitions")
        if not head.get("kind"):
            raise FormatError(ln, 1, "missing 'kind:' header")
        body.append((ln, line))
    if "kind" not in head:
        raise FormatError(1, 1, "missing 'kind:' header")
    kind = head["kind"][0]

    def need(key):
        if key not in head:
            raise FormatError(1, 1, f"missing {key!r} header")
        return head[key]

    def letters(key):
        val, ln = need(key)
        return tuple(_tokens(val))

    states = tuple(need("states")[0].split())
    initial = need("initial")[0]
    name = head.get("name", ("", 0))[0]
    try:
        if kind in ("buchi", "finite"):
            alphabet = letters("alphabet")
            ts = []
            for ln, line in body:
                parts = line.split()
                if len(parts) != 3:
                    raise FormatError(ln, 1, "expected 'state letter state'")
                try:
                    a = _letter(parts[1])
                except ValueError:
                    raise FormatError(ln, line.index(parts[1]) + 1, f"bad letter {parts[1]!r}") from None
                ts.append((parts[0], a, parts[2]))
            if kind == "buchi":
                return BuchiAutomaton(states, alphabet, ts, initial,
                                      head.get("accepting", ("", 0))[0].split(), name=name)
            return FiniteAutomaton(states, alphabet, ts, initial,
                                   head.get("final", ("", 0))[0].split(), name=name)
        if kind == "counter":
            alphabet = letters("alphabet")
            k = int(head.get("counters", ("1", 0))[0])
            rt_text = head.get("real_time", (None, 0))[0]
            ts = []
            for ln, line in body:
                m = COUNTER_LINE.match(line)
                if not m:
                    raise FormatError(ln, 1, "expected 'state letter|~ [tests] state [deltas]'")
                p, a, tests, q, deltas = m.groups()
                tests = _ints(tests, ln, m.start(3) + 1)
                deltas = _ints(deltas, ln, m.start(5) + 1)
                if len(tests) != k or len(deltas) != k:
                    raise FormatError(ln, m.start(3) + 1, f"expected {k} counter components")
                for i, j in zip(tests, deltas):
                    if i == 0 and j == -1:
                        raise FormatError(ln, m.start(5) + 1, "decrement under zero-test")
                ts.append((p, None if a == "~" else _letter(a), tests, q, deltas))
            rt = None if rt_text is None else rt_text.lower() == "true"
            return CounterBuchiAutomaton(states, alphabet, k, ts, initial,
                                         head.get("accepting", ("", 0))[0].split(),
                                         real_time=rt, name=name)
        if kind == "2tape":
            a1, a2 = letters("alphabet1"), letters("alphabet2")
            ts = []
            for ln, line in body:
                m = TAPE_LINE.match(line)
                if not m:
                    raise FormatError(ln, 1, "expected 'state \"u\" \"v\" state'")
                p, u, v, q = m.groups()
                ts.append((p, tuple(_tokens(u)), tuple(_tokens(v)), q))
            return TwoTapeBuchiAutomaton(states, a1, a2, ts, initial,
                                         head.get("accepting", ("", 0))[0].split(), name=name)
    except AutomatonError as e:
        raise FormatError(0, 0, str(e)) from None
    raise FormatError(head["kind"][1], 1, f"unknown kind {kind!r}")


def import_automaton(path):
    with open(path, encoding="utf-8") as f:
        return parse_automaton(f.read())


def _state_names(states):
    simple = all(isinstance(s, str) and s and not re.search(r'[\s"#\[\]]', s) for s in states)
    if simple:
        return {s: s for s in states}
    return {s: f"s{i}" for i, s in enumerate(states)}


def _word(ws):
    return "".join(format_letter(a) for a in ws)


def format_automaton(M, comments=()) -> str:
    names = _state_names(M.states)
    out = [f"# {c}" for c in comments]
    if isinstance(M, TwoTapeBuchiAutomaton):
        kind = "2tape"
    elif isinstance(M, CounterBuchiAutomaton):
        kind = "counter"
    elif isinstance(M, BuchiAutomaton):
        kind = "buchi"
    else:
        kind = "finite"
    out.append(f"kind: {kind}")
    if M.name:
        out.append(f"name: {M.name}")
    if kind == "2tape":
        out.append("alphabet1: " + " ".join(format_letter(a) for a in M.alphabet1))
        out.append("alphabet2: " + " ".join(format_letter(a) for a in M.alphabet2))
    else:
        out.append("alphabet: " + " ".join(format_letter(a) for a in M.alphabet))
    if kind == "counter":
        out.append(f"counters: {M.k}")
        out.append(f"real_time: {'true' if M.real_time else 'false'}")
    out.append("states: " + " ".join(names[s] for s in M.states))
    out.append(f"initial: {names[M.initial]}")
    final = M.final if kind == "finite" else M.accepting
    out.append(("final: " if kind == "finite" else "accepting: ")
               + " ".join(names[s] for s in M.states if s in final))
    if any(names[s] != s for s in M.states):
        for s in M.states:
            out.append(f"# {names[s]} = {s!r}")
    for note in getattr(M, "notes", ()):
        out.append(f"# {note}")
    for t in M.transitions:
        if kind == "2tape":
            p, u, v, q = t
            out.append(f'{names[p]} "{_word(u)}" "{_word(v)}" {names[q]}')
        elif kind == "counter":
            p, a, tests, q, deltas = t
            a = "~" if a is None else format_letter(a)
            out.append(f"{names[p]} {a} [{','.join(map(str, tests))}] {names[q]} "
                       f"[{','.join(map(str, deltas))}]")
        else:
            p, a, q = t
            out.append(f"{names[p]} {format_letter(a)} {names[q]}")
    return "\n".join(out) + "\n"


def export_automaton(M, path, comments=()):
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_automaton(M, comments))
