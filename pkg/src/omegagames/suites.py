"""Seeded property suites behind the `check` command.

Each case draws from its own generator seeded by (seed, suite, case index),
so a single failing case can be replayed with `--only`.
"""
import collections
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import randomgen
from .automata import BuchiAutomaton, CounterBuchiAutomaton, universal_det_buchi
from .codings import (build_guard_automata, build_phi_guards, complement_tags,
                      direct_in_closure, direct_in_h, direct_in_v0, phi_guard_predicates)
from .constructions import (build_complement_parts, build_R1, build_R2, build_winning_set,
                            r1_block_configurations, run_builder_R1, winning_set_lasso_oracle)
from .games import (GSArena, IntegerOpenGame, WadgeArena, Winner, coded_arena, constant, copycat,
                    extract_strategy_from_coded, identity_transducer, phi_winning_oracle,
                    play_gs, play_wadge, random_coded_opponent, random_mealy,
                    reduction_to_wadge_strategy, same_behaviour, solve_universality_game,
                    transfer_phi_strategy, transfer_strategy_to_coded, universality_arena)
from .membership import (SearchBounds, bounded_run_search, lasso_in_buchi, lasso_in_counter,
                         lassopair_in_2tape, validate_certificate)
from .words import AlphaWord, HCode, LassoWord, PairWord, RunSchedule, format_lasso

SCHEMA = "omegagames.suite-report/1"
SIGMA = ("a", "b")
PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"


@dataclass
class SuiteConfig:
    seed: int = 0
    cases: int = 0                 # 0 means the suite default
    bounds: SearchBounds = field(default_factory=SearchBounds)
    horizon: int = 0               # 0 means the suite default
    format: str = "text"
    only: int = None
    jobs: int = 1

    def __post_init__(self):
        if self.cases < 0 or self.horizon < 0:
            raise ValueError("case counts and horizon must be positive")
        if self.format not in ("text", "json"):
            raise ValueError(f"unknown format {self.format!r}")


@dataclass
class CaseResult:
    index: int
    status: str
    coverage: tuple = ()
    words: tuple = ()
    detail: str = ""


def _pair_text(p):
    return tuple(format_lasso(w) if isinstance(w, LassoWord) else repr(w) for w in p)


# ---------------------------------------------------------------------------
# r1-equivalence

def _counter_case(rng, want_accept, attempts=400):
    for _ in range(attempts):
        A = randomgen.counter_machine(rng, rng.randint(1, 4), list(SIGMA))
        x = randomgen.lasso(rng, SIGMA)
        v = lasso_in_counter(A, x)
        if v.accepted == want_accept and (v.accepted or v.rejected):
            return A, x, v
    return None


def r1_forward_case(rng, bounds):
    found = _counter_case(rng, True)
    if found is None:
        return UNKNOWN, ("no accepted sample",), (), "generator exhausted"
    A, x, v = found
    R = build_R1(A)
    cert = run_builder_R1(A, x, v.evidence["run"], R)
    ok = validate_certificate(R, cert, bounds.max_blocks)
    return (PASS if ok else FAIL), ("accept",), (format_lasso(x),), f"{len(A.states)} states"


def r1_backward_case(rng, bounds, max_block=10):
    found = _counter_case(rng, False)
    if found is None:
        return UNKNOWN, ("no rejected sample",), (), "generator exhausted"
    A, x, _ = found
    R = build_R1(A)
    r = bounded_run_search(R, PairWord(HCode(x), AlphaWord()), bounds)
    if r.accepted:
        return FAIL, ("reject",), (format_lasso(x),), "bounded search accepted"
    got, want = r1_block_configurations(A, x, max_block, R)
    if got != want:
        return FAIL, ("reject",), (format_lasso(x),), "block configurations differ"
    return PASS, ("reject", "bounded-" + r.outcome.value.lower()), (format_lasso(x),), ""


def _r1_case(i, rng, cfg):
    if i % 2 == 0:
        return r1_forward_case(rng, cfg.bounds)
    return r1_backward_case(rng, cfg.bounds)


# ---------------------------------------------------------------------------
# r2-complement

_R2_CACHE = {}


def _r2_parts():
    if not _R2_CACHE:
        parts = build_complement_parts(SIGMA)
        _R2_CACHE["parts"] = parts
        _R2_CACHE["R2"] = build_R2(SIGMA, parts)
    return _R2_CACHE["parts"], _R2_CACHE["R2"]


def random_mixed_pair(rng, i):
    if i % 2:
        return randomgen.near_coded_pair(rng, SIGMA)
    return (randomgen.lasso(rng, SIGMA + ("0", "A"), 4, 4), randomgen.lasso(rng, ("0", "A"), 4, 4))


def r2_case(rng, i):
    parts, R2 = _r2_parts()
    p = random_mixed_pair(rng, i)
    tags = complement_tags(PairWord(*p))
    if not tags:
        return FAIL, (), _pair_text(p), "no complement witness"
    if not lassopair_in_2tape(R2, p):
        return FAIL, tuple(sorted(tags)), _pair_text(p), "R2 rejects"
    for name, M in parts.items():
        if lassopair_in_2tape(M, p) != (name in tags):
            return FAIL, tuple(sorted(tags)), _pair_text(p), f"component {name} disagrees"
    return PASS, tuple(sorted(tags)), _pair_text(p), ""


_S = RunSchedule
SOLE_WITNESS_SCHEDULES = {
    "C1": (_S(overrides=((1, 3),)), _S()),
    "C2": (_S(), _S(overrides=((4, 0),))),
    "C3": (_S(6, 2), _S(5, 2)),
    "C4": (_S(5, 2), _S(4, 2)),
    "C5": (_S(4, 2), _S(4, 2)),
    "C6": (_S(5, 2), _S(5, 2)),
}


def sole_witness_pair(tag, x=LassoWord("", "ab")):
    s1, s2 = SOLE_WITNESS_SCHEDULES[tag]
    return PairWord(HCode(x, s1), AlphaWord(s2))


def check_sole_witness(tag, bounds):
    """Only `tag` classifies the crafted pair, and only that component accepts it."""
    parts, _ = _r2_parts()
    p = sole_witness_pair(tag)
    if complement_tags(p) != {tag}:
        return False
    for name, M in parts.items():
        accepted = bounded_run_search(M, p, bounds).accepted
        if accepted != (name == tag):
            return False
    return True


def _r2_fixed(cfg):
    return {f"sole-{t}": check_sole_witness(t, cfg.bounds) for t in SOLE_WITNESS_SCHEDULES}


# ---------------------------------------------------------------------------
# closure-identity

_GUARDS = {}


def guards():
    if "g" not in _GUARDS:
        _GUARDS["g"] = build_guard_automata(SIGMA)
    return _GUARDS["g"]


def closure_sample(rng, second):
    alphabet = ("0", "A") if second else SIGMA + ("0", "A")
    kind = rng.randrange(3)
    if kind == 0:
        return randomgen.lasso(rng, alphabet, 5, 4)
    tape = randomgen.near_coded_pair(rng, SIGMA, noise=rng.choice([0.0, 0.2]))[1 if second else 0]
    if kind == 2:
        return LassoWord(tape.stem[:rng.randint(0, len(tape.stem))], ("0",))
    return tape


def closure_agrees(w, second):
    G = guards()
    aut = G.ClH2 if second else G.ClH
    got = lasso_in_buchi(aut, w)
    union = direct_in_h(w, SIGMA, second) or direct_in_v0(w, SIGMA, second)
    return got == union == direct_in_closure(w, SIGMA, second), got


def _closure_case(i, rng, cfg):
    out, cov = [], []
    for second in (False, True):
        w = closure_sample(rng, second)
        ok, inside = closure_agrees(w, second)
        cov.append(("H'" if second else "H") + (":in" if inside else ":out"))
        out.append(format_lasso(w))
        if not ok:
            return FAIL, tuple(cov), tuple(out), "closure automaton disagrees with H or V.0^w"
    return PASS, tuple(cov), tuple(out), ""


# ---------------------------------------------------------------------------
# winning-set-decomposition

_WS = {}


def winning_set_for(seed):
    if seed not in _WS:
        A = randomgen.counter_machine(random.Random(seed), 3, list(SIGMA))
        _WS[seed] = build_winning_set(A)
    return _WS[seed]


def winning_pair(rng, i):
    k = i % 4
    if k == 0:
        return randomgen.guard_walk_pair(rng, guards())
    if k == 1:
        return randomgen.near_coded_pair(rng, SIGMA)
    if k == 2:
        return randomgen.guard_shaped_pair(rng, SIGMA)
    return (randomgen.lasso(rng, SIGMA + ("0", "A"), 4, 4), randomgen.lasso(rng, ("0", "A"), 4, 4))


def winning_case(W, p):
    d = lassopair_in_2tape(W.D, p)
    parts = [lassopair_in_2tape(M, p) for M in (W.Bprime, W.C, W.Cprime)]
    oracle = winning_set_lasso_oracle(SIGMA, p)
    cov = tuple(n for n, b in zip(("B'", "C", "C'"), parts) if b) or ("none",)
    ok = d == any(parts) == oracle
    return ok, cov


def _winning_case(i, rng, cfg):
    W = winning_set_for(cfg.seed)
    p = winning_pair(rng, i)
    ok, cov = winning_case(W, p)
    return (PASS if ok else FAIL), cov, _pair_text(p), "" if ok else "D differs from B' | C | C'"


def _winning_fixed(cfg):
    W = winning_set_for(cfg.seed)
    zeros = LassoWord("", "0")
    return {"zeros-in-C": lassopair_in_2tape(W.C, (zeros, zeros))}


# ---------------------------------------------------------------------------
# transfer-tournament

def _one_state(accepting):
    ts = [(0, a, (t,), 0, (0,)) for a in SIGMA for t in (0, 1)]
    return CounterBuchiAutomaton([0], list(SIGMA), 1, ts, 0, [0] if accepting else [])


def _infinitely_many_a():
    ts = [(p, a, (t,), 1 if a == "a" else 0, (0,)) for p in (0, 1) for a in SIGMA for t in (0, 1)]
    return CounterBuchiAutomaton([0, 1], list(SIGMA), 1, ts, 0, [1])


def transfer_family():
    """(name, A, winner of the game on L(A), a winning strategy over Sigma)."""
    return [
        ("empty", _one_state(False), 2, constant(2, SIGMA, "a")),
        ("universal", _one_state(True), 1, constant(1, SIGMA, "a")),
        ("inf-a", _infinitely_many_a(), 1, constant(1, SIGMA, "a")),
    ]


def transfer_play(name, A, win, base, rng, horizon):
    arena = coded_arena(SIGMA)
    S = transfer_strategy_to_coded(A, base, win)
    opp = random_coded_opponent(rng, 3 - win, SIGMA, arena.monitor)
    rec = play_gs(arena, S, opp, horizon) if win == 1 else play_gs(arena, opp, S, horizon)
    return rec


def _transfer_case(i, rng, cfg):
    fam = transfer_family()
    name, A, win, base = fam[i % len(fam)]
    rec = transfer_play(name, A, win, base, rng, cfg.horizon)
    want = Winner.P1 if win == 1 else Winner.P2
    cov = (f"{name}:{rec.verdict.value}",)
    words = (format_lasso(rec.word),) if rec.word else ()
    if rec.verdict is Winner.UNKNOWN:
        return UNKNOWN, cov, words, "no lasso within the horizon"
    if rec.verdict is not want:
        return FAIL, cov, words, f"adverse verdict {rec.verdict.value}"
    return PASS, cov, words, ""


def extraction_round_trip(rng, owner, depth=8):
    A = _one_state(True)
    base = random_mealy(rng, owner, SIGMA, 3)
    S = transfer_strategy_to_coded(A, base, owner)
    E = extract_strategy_from_coded(A, S, owner)
    return same_behaviour(base, E, SIGMA, depth)


def _transfer_fixed(cfg):
    rng = random.Random(f"{cfg.seed}:extract")
    return {f"extract-owner{o}-{k}": extraction_round_trip(rng, o) for o in (1, 2) for k in range(3)}


# ---------------------------------------------------------------------------
# phi-coding

PHI_KEYS = ("D2", "D3", "D4")


def phi_games():
    return [
        IntegerOpenGame(2, {(0,)}, "p1-first-zero"),
        IntegerOpenGame(2, {(a, a) for a in range(3)}, "p2-avoid-repeat"),
        IntegerOpenGame(2, {(a, b) for a in range(4) for b in range(4) if a + b >= 3}, "p1-sum-three"),
    ]


def phi_sample(rng):
    if rng.random() < 0.5:
        return randomgen.lasso(rng, ("0", "1"), 6, 5)
    blocks = []
    for _ in range(rng.randint(1, 4)):
        n = rng.randint(0, 5)
        blocks += ["1"] * n + (["0"] if rng.random() < 0.9 else [])
    period = ["1"] * rng.randint(0, 4) + ["0"] * rng.randint(0, 1) or ["1"]
    return LassoWord(blocks, period)


_PHI = {}


def phi_guards():
    if "g" not in _PHI:
        _PHI["g"] = build_phi_guards()
    return _PHI["g"]


def phi_guard_agreement(w):
    auts = phi_guards()
    direct = phi_guard_predicates(w)
    return {k: lasso_in_buchi(auts[k], w) == direct[k] for k in PHI_KEYS}, direct


def phi_play(game, rng, horizon):
    win = game.winner()
    S = transfer_phi_strategy(game.winning_strategy(), game.bound, "BaireToCantor")
    arena = GSArena(("0", "1"), phi_winning_oracle(game), game.name)
    opp = random_mealy(rng, 3 - win, "01", rng.randint(1, 4))
    rec = play_gs(arena, S, opp, horizon) if win == 1 else play_gs(arena, opp, S, horizon)
    return win, rec


def _phi_case(i, rng, cfg):
    w = phi_sample(rng)
    agree, direct = phi_guard_agreement(w)
    cov = tuple(k for k in PHI_KEYS if direct[k])
    if not all(agree.values()):
        bad = ",".join(k for k, v in agree.items() if not v)
        return FAIL, cov, (format_lasso(w),), f"guard automata {bad} disagree"
    game = phi_games()[i % 3]
    win, rec = phi_play(game, rng, cfg.horizon)
    cov += (f"{game.name}:{rec.verdict.value}",)
    if rec.verdict is Winner.UNKNOWN:
        return UNKNOWN, cov, (format_lasso(w),), "no lasso within the horizon"
    if rec.verdict.value != ("P1Wins" if win == 1 else "P2Wins"):
        return FAIL, cov, (format_lasso(w), format_lasso(rec.word)), "adverse verdict"
    return PASS, cov, (format_lasso(w),), ""


def _phi_fixed(cfg):
    out = {}
    for g in phi_games():
        s = g.winning_strategy()
        back = transfer_phi_strategy(transfer_phi_strategy(s, g.bound, "BaireToCantor"),
                                     g.bound, "CantorToBaire")
        out[f"round-trip-{g.name}"] = same_behaviour(s, back, g.alphabet, 5)
    return out


# ---------------------------------------------------------------------------
# interleave-universality

def universality_case(rng, plays, horizon):
    T = randomgen.det_buchi(rng, rng.randint(1, 4), ["0", "1"])
    win, strategy = solve_universality_game(T)
    if (win == 1) != universal_det_buchi(T):
        return FAIL, "winner disagrees with universality"
    arena = universality_arena(T)
    for _ in range(plays):
        opp = random_mealy(rng, 3 - win, "01", rng.randint(1, 3))
        rec = play_gs(arena, strategy, opp, horizon) if win == 1 else play_gs(arena, opp, strategy, horizon)
        if rec.verdict is not (Winner.P1 if win == 1 else Winner.P2):
            return FAIL, f"play verdict {rec.verdict.value}"
    return PASS, f"P{win}"


def _universality_case(i, rng, cfg):
    status, detail = universality_case(rng, 20, cfg.horizon)
    return status, (detail if status == PASS else "fail",), (), "" if status == PASS else detail


def universality_fixed():
    uni = BuchiAutomaton([0], "01", [(0, "0", 0), (0, "1", 0)], 0, [0])
    inf1 = BuchiAutomaton([0, 1], "01", [(p, a, 1 if a == "1" else 0) for p in (0, 1) for a in "01"], 0, [1])
    w1, _ = solve_universality_game(uni)
    w2, st = solve_universality_game(inf1)
    seen = getattr(st, "word", None)
    return {"universal-is-P1": w1 == 1,
            "inf-ones-is-P2": w2 == 2,
            "inf-ones-witness": seen is not None and seen.same_word(LassoWord("", "0"))}


# ---------------------------------------------------------------------------
# wadge-basics

def wadge_case(rng, plays, horizon):
    B = randomgen.buchi(rng, 3, ["0", "1"])
    L = lambda w: lasso_in_buchi(B, w)
    arena = WadgeArena(("0", "1"), ("0", "1"), L, L)
    for _ in range(plays):
        rec = play_wadge(arena, random_mealy(rng, 1, "01", 3), copycat("01"), horizon)
        if rec.verdict is not Winner.P2:
            return FAIL, f"copycat verdict {rec.verdict.value}"
        rec = play_wadge(arena, random_mealy(rng, 1, "01", 3), constant(2, "01~", "~"), horizon)
        if rec.verdict is not Winner.P1:
            return FAIL, f"all-skip verdict {rec.verdict.value}"
    return PASS, ""


def _wadge_case(i, rng, cfg):
    status, detail = wadge_case(rng, 10, cfg.horizon)
    return status, (status,), (), detail


def _wadge_fixed(cfg):
    ident = reduction_to_wadge_strategy(identity_transducer("01"), "01")
    return {"identity-is-copycat": same_behaviour(copycat("01"), ident, "01", 8)}


# ---------------------------------------------------------------------------
# registry and runner

@dataclass(frozen=True)
class Suite:
    name: str
    header: str
    case: object
    cases: int
    horizon: int = 0
    fixed: object = None


SUITES = {s.name: s for s in [
    Suite("r1-equivalence",
          "Accepted lassos of random real-time one-counter machines yield certificates for the "
          "coded pair in R1; rejected lassos never get an accepting bounded run, and R1's block "
          "configurations equal the counter machine's",
          _r1_case, 40),
    Suite("r2-complement",
          "R2 accepts every lasso pair, each pair has a complement witness, and every component "
          "automaton agrees with the direct classifier",
          lambda i, rng, cfg: r2_case(rng, i), 500, fixed=_r2_fixed),
    Suite("closure-identity",
          "Closure automata of the H and H' guards agree with H united with V.0^w on lassos",
          _closure_case, 500),
    Suite("winning-set-decomposition",
          "Membership in D equals membership in B', C or C', and matches the prefix-exit oracle",
          _winning_case, 300, fixed=_winning_fixed),
    Suite("transfer-tournament",
          "Strategies transferred into the coded game keep their winning side against random "
          "opponents, and extraction inverts transfer",
          _transfer_case, 150, horizon=400, fixed=_transfer_fixed),
    Suite("phi-coding",
          "Binary-coding guard automata agree with direct pattern checks, and transferred "
          "integer-game strategies keep their winning side",
          _phi_case, 200, horizon=300, fixed=_phi_fixed),
    Suite("interleave-universality",
          "The interleaved game on a deterministic Buchi automaton is won by Player 1 exactly when "
          "the automaton is universal, and the solver's strategy wins its plays",
          _universality_case, 50, horizon=200, fixed=lambda cfg: universality_fixed()),
    Suite("wadge-basics",
          "Copycat wins the Wadge game of a language against itself and a Player 2 who only skips "
          "loses; the identity reduction behaves as copycat",
          _wadge_case, 20, horizon=100, fixed=_wadge_fixed),
]}


class UnknownSuite(LookupError):
    pass


def _run_one(args):
    name, i, cfg = args
    suite = SUITES[name]
    rng = random.Random(f"{cfg.seed}:{name}:{i}")
    status, cov, words, detail = suite.case(i, rng, cfg)
    return CaseResult(i, status, tuple(cov), tuple(words), detail)


def replay_command(name, cfg, i):
    d, c, b = cfg.bounds.max_depth, cfg.bounds.max_counter, cfg.bounds.max_blocks
    return (f"omegagames check {name} --seed {cfg.seed} --bounds {d},{c},{b} "
            f"--horizon {cfg.horizon} --only {i}")


def run_suite(name: str, config: SuiteConfig = None) -> dict:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    suite = SUITES[name]
    cfg = config or SuiteConfig()
    cfg = SuiteConfig(cfg.seed, cfg.cases or suite.cases, cfg.bounds, cfg.horizon or suite.horizon,
                      cfg.format, cfg.only, cfg.jobs)
    indices = [cfg.only] if cfg.only is not None else list(range(cfg.cases))
    jobs = [(name, i, cfg) for i in indices]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            results = list(ex.map(_run_one, jobs, chunksize=max(1, len(jobs) // (4 * cfg.jobs))))
    else:
        results = [_run_one(j) for j in jobs]
    results.sort(key=lambda r: r.index)
    counts = collections.Counter(r.status for r in results)
    coverage = collections.Counter(t for r in results for t in r.coverage)
    fixed = suite.fixed(cfg) if suite.fixed and cfg.only is None else {}
    failures = [{"case": r.index, "words": list(r.words), "detail": r.detail,
                 "replay": replay_command(name, cfg, r.index)}
                for r in results if r.status == FAIL]
    for k, ok in fixed.items():
        if not ok:
            failures.append({"case": k, "words": [], "detail": "fixed check failed",
                             "replay": f"omegagames check {name} --seed {cfg.seed}"})
    return {
        "schema": SCHEMA,
        "suite": name,
        "header": suite.header,
        "seed": cfg.seed,
        "cases": len(indices),
        "bounds": asdict(cfg.bounds),
        "horizon": cfg.horizon,
        "passed": counts[PASS],
        "failed": counts[FAIL] + sum(not ok for ok in fixed.values()),
        "unknown": counts[UNKNOWN],
        "fixed": fixed,
        "coverage": dict(sorted(coverage.items())),
        "counterexamples": failures,
    }


def exit_code(report) -> int:
    if report["failed"]:
        return 1
    if report["unknown"] > report["passed"]:
        return 2
    return 0


def format_report(report) -> str:
    lines = [f"{report['suite']}: {report['header']}",
             f"  seed {report['seed']}, {report['cases']} cases, horizon {report['horizon']}, "
             f"bounds {report['bounds']}",
             f"  pass {report['passed']}  fail {report['failed']}  unknown {report['unknown']}"]
    if report["coverage"]:
        lines.append("  coverage: " + ", ".join(f"{k}={v}" for k, v in report["coverage"].items()))
    for k, ok in report["fixed"].items():
        lines.append(f"  fixed {k}: {'ok' if ok else 'FAILED'}")
    for c in report["counterexamples"]:
        lines.append(f"  counterexample {c['case']}: {' , '.join(c['words'])} {c['detail']}")
        lines.append(f"    replay: {c['replay']}")
    return "\n".join(lines)
