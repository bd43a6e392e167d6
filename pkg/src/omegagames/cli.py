import argparse
import json
import random
import sys
import time

from . import io as aio
from . import suites
from .automata import BuchiAutomaton, CounterBuchiAutomaton, TwoTapeBuchiAutomaton
from .codings import (DecodeError, build_guard_automata, build_phi_guards, classify_complement,
                      decode_h, decode_phi, decode_theta, phi_guard_predicates)
from .constructions import (build_interleaved_game, build_R1, build_R2, build_winning_set,
                            run_builder_R1)
from .games import (SKIP, FiniteMemory, GSArena, IntegerOpenGame, Strategy, StrategyError,
                    WadgeArena, Winner, coded_arena, constant, extract_strategy_from_coded,
                    phi_winning_oracle, play_gs, play_wadge, random_coded_opponent, random_mealy,
                    solve_universality_game, transfer_phi_strategy, transfer_strategy_to_coded,
                    witness)
from .membership import (SearchBounds, bounded_run_search, lasso_in_buchi, lasso_in_counter,
                         lassopair_in_2tape)
from .words import (AlphaWord, HCode, LassoWord, WordError, _tokens, format_finite, format_lasso,
                    format_letter, parse_lasso, parse_pair, parse_word, split_top_level)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # exit status 2 is reserved for inconclusive results
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# strategy expressions

class CounterStrategy(Strategy):
    """One-counter transducer: output depends on (state, counter is zero);
    rules move the state and add -1/0/+1 to the counter (floored at 0)."""

    kind = "counter"

    def __init__(self, owner, alphabet, initial, output, rules, name=""):
        super().__init__(owner, alphabet)
        self.initial, self.output, self.rules, self.name = initial, output, rules, name

    def start(self):
        return (self.initial, 0)

    def finite(self, mem):
        return True  # deterministic in mem, so a repeated mem closes a lasso

    def move(self, mem):
        q, c = mem
        return self.output.get((q, c == 0), self.output.get((q, None)))

    def observe(self, mem, letter, own):
        q, c = mem
        if own:
            return mem
        nq, d = self.rules.get((q, letter), self.rules.get((q, None), (q, 0)))
        return nq, max(0, c + d)


class ReactiveMealy(FiniteMemory):
    """Mealy strategy whose state only moves on the opponent's letters."""

    def observe(self, mem, letter, own):
        return mem if own else super().observe(mem, letter, own)


def _letter(tok, integers):
    (a,) = _tokens(tok)
    return int(a) if integers else a


def parse_strategy(text: str, owner: int, alphabet, integers=False) -> Strategy:
    """const{a} | witness{<lasso>} | mealy{s=a,...;s x t,...} | counter{s:z=a,s:p=b;s x t +1,...}

    Rules of mealy and counter strategies react to the opponent's letters;
    `*` matches any letter."""
    text = text.strip()
    head, _, body = text.partition("{")
    if not body.endswith("}"):
        raise UsageError(f"bad strategy expression {text!r}")
    body = body[:-1]
    if head == "const":
        a = _letter(body, integers)
        if a not in alphabet:
            raise UsageError(f"letter {a!r} outside the player's alphabet")
        return constant(owner, alphabet, a)
    if head == "witness":
        w = parse_lasso(body, integers=integers)
        if not w.letters() <= set(alphabet):
            raise UsageError("witness letters outside the player's alphabet")
        return witness(owner, alphabet, w)
    if head not in ("mealy", "counter"):
        raise UsageError(f"unknown strategy kind {head!r}")
    outs, _, rules = body.partition(";")
    output, initial = {}, None
    for item in split_top_level(outs):
        key, _, a = item.partition("=")
        key = key.strip()
        if head == "counter":
            q, _, flag = key.partition(":")
            zero = {"z": True, "p": False, "": None}[flag]
            output[(q, zero)] = _letter(a, integers)
        else:
            q = key
            output[q] = _letter(a, integers)
        initial = initial or q
    table = {}
    for item in split_top_level(rules) if rules.strip() else []:
        parts = item.split()
        if head == "counter":
            q, a, nq, d = parts
            table[(q, None if a == "*" else _letter(a, integers))] = (nq, int(d))
        else:
            q, a, nq = parts
            table[(q, None if a == "*" else _letter(a, integers))] = nq
    bad = [a for a in output.values() if a not in alphabet]
    if bad:
        raise UsageError(f"letter {bad[0]!r} outside the player's alphabet")
    if head == "counter":
        return CounterStrategy(owner, alphabet, initial, output, table, name=text)
    return ReactiveMealy(owner, alphabet, initial, output, table, name=text)


# ---------------------------------------------------------------------------
# builtins

def _one_state_counter(accepting, sigma=("a", "b")):
    ts = [(0, a, (t,), 0, (0,)) for a in sigma for t in (0, 1)]
    return CounterBuchiAutomaton([0], list(sigma), 1, ts, 0, [0] if accepting else [],
                                 name="universal" if accepting else "empty")


def builtin(name: str):
    if name == "inf-ones":
        return BuchiAutomaton([0, 1], "01", [(p, a, 1 if a == "1" else 0) for p in (0, 1) for a in "01"],
                              0, [1], name="inf-ones")
    if name == "universal01":
        return BuchiAutomaton([0], "01", [(0, "0", 0), (0, "1", 0)], 0, [0], name="universal01")
    if name == "empty-counter":
        return _one_state_counter(False)
    if name == "universal-counter":
        return _one_state_counter(True)
    if name == "inf-a-counter":
        ts = [(p, a, (t,), 1 if a == "a" else 0, (0,)) for p in (0, 1) for a in "ab" for t in (0, 1)]
        return CounterBuchiAutomaton([0, 1], ["a", "b"], 1, ts, 0, [1], name="inf-a")
    if name.startswith("r2:"):
        return build_R2(tuple(name[3:]))
    raise UsageError(f"unknown builtin {name!r}")


def load(ref: str):
    if ref.startswith("builtin:"):
        return builtin(ref[len("builtin:"):])
    return aio.import_automaton(ref)


# ---------------------------------------------------------------------------
# output

def emit(args, data: dict, text: str):
    if args.format == "json":
        print(json.dumps(data, indent=2, default=str))
    else:
        print(text)


def _record(rec, shown=40):
    return {"verdict": rec.verdict.value,
            "moves": format_finite(rec.moves[:shown]),
            "word": format_lasso(rec.word) if rec.word else None,
            "coding_exit": list(rec.exit) if rec.exit else None,
            "guard_exit": rec.guard_exit}


def _record_text(d):
    lines = [f"verdict: {d['verdict']}", f"moves: {d['moves']}"]
    if d["word"]:
        lines.append(f"play: {d['word']}")
    if d["coding_exit"]:
        lines.append(f"first coding exit: player {d['coding_exit'][0]} at step {d['coding_exit'][1]}")
    if d.get("guard_exit"):
        lines.append(f"first guard exit: step {d['guard_exit']}")
    return "\n".join(lines)


VERDICT_CODE = {Winner.P1: 0, Winner.P2: 0, Winner.UNKNOWN: 2}


# ---------------------------------------------------------------------------
# commands

def cmd_build(args):
    if args.what in ("r2", "guards", "phi-guards"):
        sigma = tuple(args.sigma)
    if args.what == "r1":
        A = load(args.input)
        out = {"R1": build_R1(A)}
    elif args.what == "r2":
        out = {"R2": build_R2(sigma)}
    elif args.what == "winning-set":
        A = load(args.input)
        W = build_winning_set(A)
        out = {"D": W.D, "Bprime": W.Bprime, "C": W.C, "Cprime": W.Cprime}
        if args.part:
            out = {args.part: out[args.part]}
    elif args.what == "interleave":
        out = {"interleaved": build_interleaved_game(load(args.input))}
    elif args.what == "guards":
        G = build_guard_automata(sigma)
        out = {k: getattr(G, k) for k in ("H", "H2", "ClH", "ClH2", "V", "V2", "V0", "V20", "U")}
    else:
        out = build_phi_guards()
    written = {}
    for key, M in out.items():
        path = args.out if len(out) == 1 else f"{args.out}.{key}.aut"
        if args.out:
            aio.export_automaton(M, path)
        written[key] = {"path": path if args.out else None, "states": len(M.states),
                        "transitions": len(M.transitions)}
    if not args.out and len(out) == 1:
        print(aio.format_automaton(next(iter(out.values()))), end="")
        return 0
    emit(args, written, "\n".join(f"{k}: {v['states']} states, {v['transitions']} transitions"
                                  + (f" -> {v['path']}" if v["path"] else "")
                                  for k, v in written.items()))
    return 0


def _strip_comments(text):
    return [l for l in text.splitlines() if not l.startswith("#")]


def _r1_with_hint(args, M, p):
    """Rebuild R1 from its source machine so a certificate for (h(x), alpha)
    can name its states; the file must be that R1 up to state names."""
    if not args.r1_source or not isinstance(p.first, HCode) or not isinstance(p.second, AlphaWord):
        return M, None
    A = load(args.r1_source)
    R = build_R1(A)
    if _strip_comments(aio.format_automaton(R)) != _strip_comments(aio.format_automaton(M)):
        raise UsageError("the machine is not R1 of the given source")
    v = lasso_in_counter(A, p.first.base)
    if not v.accepted:
        return R, None
    return R, run_builder_R1(A, p.first.base, v.evidence["run"], R)


def cmd_member(args):
    M = load(args.machine)
    bounds = args.bounds
    if isinstance(M, TwoTapeBuchiAutomaton):
        p = parse_pair(args.word)
        if isinstance(p.first, LassoWord) and isinstance(p.second, LassoWord):
            ok = lassopair_in_2tape(M, (p.first, p.second))
            verdict, engine = ("Accept" if ok else "Reject"), "lasso-pair product"
        else:
            M, hint = _r1_with_hint(args, M, p)
            v = bounded_run_search(M, p, bounds, hint=hint)
            verdict, engine = v.outcome.value, "bounded run search"
    else:
        w = parse_word(args.word)
        if isinstance(w, LassoWord) and isinstance(M, BuchiAutomaton):
            verdict, engine = ("Accept" if lasso_in_buchi(M, w) else "Reject"), "lasso product"
        elif isinstance(w, LassoWord):
            verdict, engine = lasso_in_counter(M, w, bounds).outcome.value, "counter summaries"
        else:
            verdict, engine = bounded_run_search(M, w, bounds).outcome.value, "bounded run search"
    emit(args, {"verdict": verdict, "engine": engine, "bounds": vars(bounds)},
         f"{verdict} ({engine})")
    return {"Accept": 0, "Reject": 1}.get(verdict, 2)


def cmd_code(args):
    if args.scheme == "classify":
        if args.pair:
            p = parse_pair(args.pair)
            found = sorted(classify_complement(p), key=lambda c: c.tag)
            data = [{"tag": c.tag, "witness": str(c.witness)} for c in found]
        else:
            w = parse_lasso(args.word)
            got = phi_guard_predicates(w)
            data = [{"tag": k, "witness": format_lasso(w)} for k in ("D2", "D3", "D4") if got[k]]
        emit(args, {"tags": data}, "\n".join(f"{d['tag']}: {d['witness']}" for d in data) or "none")
        return 0
    if args.decode is not None:
        prefix = tuple(_tokens(args.decode))
        try:
            if args.scheme == "h":
                got = decode_h(prefix)
            elif args.scheme == "phi":
                got = decode_phi(prefix)
            else:
                got = decode_theta(prefix, args.S)
        except DecodeError as e:
            emit(args, {"error": str(e), "position": e.position}, f"decode error: {e}")
            return 1
        emit(args, {"decoded": [format_letter(a) for a in got]},
             " ".join(format_letter(a) for a in got))
        return 0
    expr = {"h": "h{%s}", "phi": "phi{%s}", "theta": "theta{S=%d;%%s}" % args.S,
            "alpha": "alpha"}[args.scheme]
    w = parse_word(expr % args.word if "%s" in expr else expr)
    prefix = format_finite(w.prefix(args.prefix))
    emit(args, {"prefix": prefix, "length": args.prefix}, prefix)
    return 0


def _gs_arena(ref):
    if ref.startswith("coded:"):
        return coded_arena(tuple(ref[len("coded:"):]))
    M = load(ref)
    return GSArena(tuple(M.alphabet), lambda w: lasso_in_buchi(M, w), name=M.name)


def _wadge_language(ref):
    M = load(ref)
    return tuple(M.alphabet), (lambda w: lasso_in_buchi(M, w))


def cmd_play(args):
    horizon = args.horizon or 400
    if args.game == "gs":
        arena = _gs_arena(args.arena)
        s1 = parse_strategy(args.s1, 1, arena.alphabet)
        s2 = parse_strategy(args.s2, 2, arena.alphabet)
        rec = play_gs(arena, s1, s2, horizon)
    else:
        X, L = _wadge_language(args.arena)
        Y, Lp = _wadge_language(args.arena2 or args.arena)
        arena = WadgeArena(X, Y, L, Lp)
        s1 = parse_strategy(args.s1, 1, X)
        s2 = parse_strategy(args.s2, 2, tuple(Y) + (SKIP,))
        rec = play_wadge(arena, s1, s2, horizon)
    d = _record(rec)
    emit(args, d, _record_text(d))
    return VERDICT_CODE[rec.verdict]


def cmd_transfer(args):
    rng = random.Random(args.seed)
    horizon = args.horizon or 400
    if args.direction == "phi":
        words = [tuple(int(t) for t in w.split()) for w in args.words.split(";")]
        game = IntegerOpenGame(args.bound, words, "cli")
        base = (parse_strategy(args.strategy, args.owner, game.alphabet, integers=True)
                if args.strategy else game.winning_strategy())
        S = transfer_phi_strategy(base, args.bound, "BaireToCantor")
        arena = GSArena(("0", "1"), phi_winning_oracle(game), "phi")
        opp = (parse_strategy(args.opponent, 3 - base.owner, "01") if args.opponent
               else random_mealy(rng, 3 - base.owner, "01", 3))
        rec = play_gs(arena, S, opp, horizon) if base.owner == 1 else play_gs(arena, opp, S, horizon)
        d = _record(rec)
        d["integer_game_winner"] = game.winner()
        emit(args, d, _record_text(d) + f"\ninteger game winner: P{game.winner()}")
        return VERDICT_CODE[rec.verdict]
    A = load(args.automaton)
    sigma = tuple(A.alphabet)
    arena = coded_arena(sigma)
    if args.direction == "code":
        base = parse_strategy(args.strategy, args.owner, sigma)
        S = transfer_strategy_to_coded(A, base, args.owner)
        opp = (parse_strategy(args.opponent, 3 - args.owner, arena.alphabet) if args.opponent
               else random_coded_opponent(rng, 3 - args.owner, sigma, arena.monitor))
        rec = play_gs(arena, S, opp, horizon) if args.owner == 1 else play_gs(arena, opp, S, horizon)
        d = _record(rec)
        emit(args, d, _record_text(d))
        return VERDICT_CODE[rec.verdict]
    coded = parse_strategy(args.strategy, args.owner, arena.alphabet)
    E = extract_strategy_from_coded(A, coded, args.owner)
    opp = (parse_strategy(args.opponent, 3 - args.owner, sigma) if args.opponent
           else random_mealy(rng, 3 - args.owner, sigma, 2))
    players = (E, opp) if args.owner == 1 else (opp, E)
    mems = [p.start() for p in players]
    moves = []
    for _ in range(min(horizon, 40)):
        for k in (0, 1):
            a = players[k].move(mems[k])
            moves.append(a)
            mems[k] = players[k].observe(mems[k], a, True)
            mems[1 - k] = players[1 - k].observe(mems[1 - k], a, False)
    m = mems[0] if args.owner == 1 else mems[1]
    ev = E.exit_event(m)
    d = {"moves": format_finite(moves), "exit": ev}
    emit(args, d, f"moves: {d['moves']}" + (f"\ncoded strategy left the coding: {ev}" if ev else ""))
    return 0


def cmd_solve(args):
    T = load(args.automaton)
    win, strat = solve_universality_game(T)
    d = {"winner": f"P{win}", "strategy": getattr(strat, "name", "") or type(strat).__name__}
    text = f"winner: P{win}"
    if win == 2:
        d["witness"] = format_lasso(strat.word)
        text += f"\nrejected word: {d['witness']}"
    else:
        text += f"\nstrategy: {d['strategy']}"
    emit(args, d, text)
    return 0


def cmd_check(args):
    cfg = suites.SuiteConfig(seed=args.seed, cases=args.cases or 0, bounds=args.bounds,
                             horizon=args.horizon or 0, format=args.format, only=args.only,
                             jobs=args.jobs)
    names = list(suites.SUITES) if args.suite == "all" else [args.suite]
    codes = []
    for name in names:
        t0 = time.perf_counter()
        report = suites.run_suite(name, cfg)
        if args.format == "json":
            print(json.dumps(report, indent=2, default=str))
        else:
            print(suites.format_report(report))
        print(f"{name}: {time.perf_counter() - t0:.2f} s", file=sys.stderr)
        codes.append(suites.exit_code(report))
    return max(codes)


def cmd_import(args):
    M = aio.import_automaton(args.path)
    kind = aio.format_automaton(M).split("kind: ", 1)[1].split("\n", 1)[0]
    d = {"kind": kind, "name": M.name, "states": len(M.states), "transitions": len(M.transitions)}
    if isinstance(M, CounterBuchiAutomaton):
        d["real_time"] = M.real_time
        d["counters"] = M.k
    emit(args, d, ", ".join(f"{k}: {v}" for k, v in d.items()))
    return 0


def cmd_export(args):
    M = load(args.source)
    if args.out:
        aio.export_automaton(M, args.out)
    else:
        print(aio.format_automaton(M), end="")
    return 0


# ---------------------------------------------------------------------------

def _bounds(text):
    try:
        return SearchBounds.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bounds must be depth,counter,blocks: {e}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--bounds", type=_bounds, default=argparse.SUPPRESS,
                   help="search bounds depth,counter,blocks (default 60,30,30)")
    g.add_argument("--horizon", type=int, default=argparse.SUPPRESS)
    g.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)

    p = _Parser(prog="omegagames", parents=[common],
                                description="Coded omega-games: automata, codings, strategies.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", parents=[common], help="build a construction and export it")
    b.add_argument("what", choices=("r1", "r2", "winning-set", "interleave", "guards", "phi-guards"))
    b.add_argument("--in", dest="input", help="source automaton file or builtin:NAME")
    b.add_argument("--sigma", default="ab", help="letters of the base alphabet")
    b.add_argument("--part", choices=("D", "Bprime", "C", "Cprime"))
    b.add_argument("--out", help="output file (prefix when several automata are built)")
    b.set_defaults(fn=cmd_build)

    m = sub.add_parser("member", parents=[common], help="membership of a word or pair")
    m.add_argument("--machine", required=True)
    m.add_argument("--word", required=True, help="lasso, pattern word, or pair 'x,y' for 2-tape")
    m.add_argument("--r1-source", help="counter machine the 2-tape machine was built from by 'build r1'")
    m.set_defaults(fn=cmd_member)

    c = sub.add_parser("code", parents=[common], help="encode, decode or classify")
    c.add_argument("scheme", choices=("h", "alpha", "phi", "theta", "classify"))
    c.add_argument("--word", default="")
    c.add_argument("--prefix", type=int, default=40)
    c.add_argument("--S", type=int, default=2)
    c.add_argument("--decode", help="finite word to decode instead of encoding")
    c.add_argument("--pair", help="lasso or pattern pair to classify")
    c.set_defaults(fn=cmd_code)

    pl = sub.add_parser("play", parents=[common], help="play two strategies")
    pl.add_argument("game", choices=("gs", "wadge"))
    pl.add_argument("--arena", required=True, help="Buchi file, builtin:NAME or coded:LETTERS")
    pl.add_argument("--arena2", help="target language for wadge")
    pl.add_argument("--s1", required=True)
    pl.add_argument("--s2", required=True)
    pl.set_defaults(fn=cmd_play)

    t = sub.add_parser("transfer", parents=[common], help="transfer a strategy through a coding")
    t.add_argument("--automaton", help="one-counter automaton file or builtin:NAME")
    t.add_argument("--strategy")
    t.add_argument("--owner", type=int, choices=(1, 2), default=1)
    t.add_argument("--direction", choices=("code", "decode", "phi"), default="code")
    t.add_argument("--opponent")
    t.add_argument("--bound", type=int, default=2)
    t.add_argument("--words", default="0", help="phi: ';'-separated integer words of the open set")
    t.set_defaults(fn=cmd_transfer)

    s = sub.add_parser("solve-universality", parents=[common], help="solve the interleaved game")
    s.add_argument("--automaton", required=True)
    s.set_defaults(fn=cmd_solve)

    k = sub.add_parser("check", parents=[common], help="run a property suite")
    k.add_argument("suite", help="one of: " + ", ".join(suites.SUITES) + ", all")
    k.add_argument("--cases", type=int)
    k.add_argument("--only", type=int, help="replay a single case index")
    k.add_argument("--jobs", type=int, default=1)
    k.set_defaults(fn=cmd_check)

    i = sub.add_parser("import", parents=[common], help="parse and validate an automaton file")
    i.add_argument("path")
    i.set_defaults(fn=cmd_import)

    e = sub.add_parser("export", parents=[common], help="write an automaton in normal form")
    e.add_argument("source", help="file or builtin:NAME")
    e.add_argument("--out")
    e.set_defaults(fn=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for key, default in (("seed", 0), ("bounds", SearchBounds()), ("horizon", 0), ("format", "text")):
        if not hasattr(args, key):
            setattr(args, key, default)
    try:
        return args.fn(args)
    except (suites.UnknownSuite, aio.FormatError, UsageError, WordError, StrategyError, OSError, ValueError,
            KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
