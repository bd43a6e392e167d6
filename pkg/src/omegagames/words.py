"""Finite words, lasso words and positional pattern words.

Letters are opaque hashable tokens: one-character strings for plain
alphabets, tuples for product alphabets, ints for integer alphabets.
Positions are 1-indexed everywhere.
"""
import bisect
from dataclasses import dataclass
from math import lcm
from typing import Hashable, Iterable, Sequence

Letter = Hashable


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    letters: tuple

    def __post_init__(self):
        if not self.letters:
            raise WordError("alphabet must be nonempty")
        if len(set(self.letters)) != len(self.letters):
            raise WordError("alphabet has duplicate letters")

    def __contains__(self, a):
        return a in self.letters

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def product(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(tuple((a, b) for a in self.letters for b in other.letters))


def check_word(word: Iterable, alphabet) -> None:
    for i, a in enumerate(word, 1):
        if a not in alphabet:
            raise WordError(f"letter {a!r} at position {i} is not in the alphabet")


@dataclass(frozen=True)
class LassoWord:
    """The word stem . period . period . ..."""

    stem: tuple
    period: tuple

    def __init__(self, stem: Sequence = (), period: Sequence = ()):
        object.__setattr__(self, "stem", tuple(stem))
        object.__setattr__(self, "period", tuple(period))
        if not self.period:
            raise WordError("lasso period must be nonempty")

    def letter(self, n: int):
        if n < 1:
            raise WordError("positions start at 1")
        s = len(self.stem)
        if n <= s:
            return self.stem[n - 1]
        return self.period[(n - s - 1) % len(self.period)]

    def prefix(self, n: int) -> tuple:
        return tuple(self.letter(i) for i in range(1, n + 1))

    def letters(self) -> set:
        return set(self.stem) | set(self.period)

    def phase(self, n: int) -> int:
        """Index in 0..|stem|+|period|-1 of the position n (for product graphs)."""
        s = len(self.stem)
        if n <= s:
            return n - 1
        return s + (n - s - 1) % len(self.period)

    @property
    def size(self) -> int:
        return len(self.stem) + len(self.period)

    def next_phase(self, k: int) -> int:
        k += 1
        if k == self.size:
            k = len(self.stem)
        return k

    def letter_at_phase(self, k: int):
        s = len(self.stem)
        return self.stem[k] if k < s else self.period[k - s]

    def normalized(self) -> "LassoWord":
        return normalize_lasso(self)

    def same_word(self, other: "LassoWord") -> bool:
        return normalize_lasso(self) == normalize_lasso(other)

    def __str__(self):
        return format_lasso(self)


def normalize_lasso(w: LassoWord) -> LassoWord:
    """Minimal period first, then the shortest stem."""
    p = w.period
    n = len(p)
    for d in range(1, n + 1):
        if n % d == 0 and all(p[i] == p[i % d] for i in range(n)):
            p = p[:d]
            break
    stem = list(w.stem)
    while stem and stem[-1] == p[-1]:
        stem.pop()
        p = (p[-1],) + p[:-1]
    return LassoWord(tuple(stem), p)


def interleave(x: LassoWord, y: LassoWord, alphabet=None) -> LassoWord:
    """r(2n-1) = x(n), r(2n) = y(n)."""
    if alphabet is not None:
        check_word(x.stem + x.period, alphabet)
        check_word(y.stem + y.period, alphabet)
    s = max(len(x.stem), len(y.stem))
    p = lcm(len(x.period), len(y.period))
    stem = []
    for n in range(1, s + 1):
        stem += [x.letter(n), y.letter(n)]
    period = []
    for n in range(s + 1, s + p + 1):
        period += [x.letter(n), y.letter(n)]
    return LassoWord(stem, period)


def split_interleaved(w: LassoWord) -> tuple:
    """Inverse of interleave: the odd-position and even-position words."""
    s = len(w.stem) + (len(w.stem) % 2)
    p = len(w.period) * (2 if len(w.period) % 2 else 1)
    odd = [w.letter(n) for n in range(1, s + 1, 2)]
    even = [w.letter(n) for n in range(2, s + 1, 2)]
    podd = [w.letter(n) for n in range(s + 1, s + p + 1, 2)]
    peven = [w.letter(n) for n in range(s + 2, s + p + 1, 2)]
    return LassoWord(odd, podd), LassoWord(even, peven)


def pair_to_product(x: LassoWord, y: LassoWord) -> LassoWord:
    """The lasso over pair letters whose n-th letter is (x(n), y(n))."""
    s = max(len(x.stem), len(y.stem))
    p = lcm(len(x.period), len(y.period))
    stem = [(x.letter(n), y.letter(n)) for n in range(1, s + 1)]
    period = [(x.letter(n), y.letter(n)) for n in range(s + 1, s + p + 1)]
    return LassoWord(stem, period)


def product_to_pair(w: LassoWord) -> tuple:
    return (LassoWord([a for a, _ in w.stem], [a for a, _ in w.period]),
            LassoWord([b for _, b in w.stem], [b for _, b in w.period]))


# ---------------------------------------------------------------------------
# pattern words

class PatternWord:
    """A non-periodic word known only through positional access."""

    def letter(self, n: int):
        raise NotImplementedError

    def prefix(self, n: int) -> tuple:
        return tuple(self.letter(i) for i in range(1, n + 1))


@dataclass(frozen=True)
class RunSchedule:
    """Length of the i-th 0-run: i, shifted by `shift` from run `start` on,
    with explicit overrides. The identity schedule is the genuine coding."""

    start: int = 0
    shift: int = 0
    overrides: tuple = ()

    def length(self, i: int) -> int:
        for k, v in self.overrides:
            if k == i:
                return v
        if self.start and i >= self.start:
            return i + self.shift
        return i

    @property
    def is_identity(self) -> bool:
        return not self.overrides and not (self.start and self.shift)


IDENTITY = RunSchedule()


class _BlockWord(PatternWord):
    """Concatenation of finite blocks b(1) b(2) ... each of positive length."""

    def block(self, i: int) -> tuple:
        raise NotImplementedError

    def _offsets(self, n):
        """Cumulative block ends, extended until they cover position n."""
        ends = self.__dict__.setdefault("_ends", [0])
        while ends[-1] < n:
            ends.append(ends[-1] + len(self.block(len(ends))))
        return ends

    def locate(self, n: int):
        """(block index, offset inside the block) of position n."""
        if n < 1:
            raise WordError("positions start at 1")
        ends = self._offsets(n)
        i = bisect.bisect_left(ends, n)
        return i, n - ends[i - 1] - 1

    def letter(self, n: int):
        i, k = self.locate(n)
        return self.block(i)[k]

    def prefix(self, n: int) -> tuple:
        out = []
        i = 1
        while len(out) < n:
            out.extend(self.block(i))
            i += 1
        return tuple(out[:n])


class HCode(_BlockWord):
    """0 A x1 00 x2 000 A x3 0000 x4 ...: A precedes the odd-indexed letters."""

    def __init__(self, base: LassoWord, schedule: RunSchedule = IDENTITY):
        for a in base.letters():
            if a in ("0", "A"):
                raise WordError(f"reserved letter {a!r} in the coded word")
        self.base = base
        self.schedule = schedule

    def block(self, i):
        run = ("0",) * self.schedule.length(i)
        return run + (("A",) if i % 2 else ()) + (self.base.letter(i),)

    def __repr__(self):
        return f"HCode({self.base})"


class AlphaWord(_BlockWord):
    """0 AA 00 A 000 AA 0000 A ...: AA after odd runs, A after even runs."""

    def __init__(self, schedule: RunSchedule = IDENTITY):
        self.schedule = schedule

    def block(self, i):
        return ("0",) * self.schedule.length(i) + (("A", "A") if i % 2 else ("A",))

    def __repr__(self):
        return "AlphaWord()"


class PhiCode(_BlockWord):
    """(11)^(n1+1) 0 (11)^(n2+1) 0 ... for an integer sequence n."""

    def __init__(self, base: LassoWord):
        for a in base.letters():
            if not isinstance(a, int) or a < 0:
                raise WordError(f"phi needs nonnegative integers, got {a!r}")
        self.base = base

    def block(self, i):
        return ("1",) * (2 * (self.base.letter(i) + 1)) + ("0",)

    def __repr__(self):
        return f"PhiCode({self.base})"


class ThetaCode(_BlockWord):
    """x1 E^S x2 E^(S^2) x3 E^(S^3) ..."""

    def __init__(self, base: LassoWord, S: int):
        if S < 2:
            raise WordError("theta needs S >= 2")
        if "E" in base.letters():
            raise WordError("letter 'E' is reserved for theta")
        self.base = base
        self.S = S

    def block(self, i):
        return (self.base.letter(i),) + ("E",) * (self.S ** i)

    def __repr__(self):
        return f"ThetaCode(S={self.S}, {self.base})"


class PatchedWord(PatternWord):
    """`head` followed by `base` read from position skip+1 onward."""

    def __init__(self, head: Sequence, base, skip: int = 0):
        self.head = tuple(head)
        self.base = base
        self.skip = skip

    def letter(self, n):
        if n <= len(self.head):
            return self.head[n - 1]
        return self.base.letter(n - len(self.head) + self.skip)


@dataclass(frozen=True)
class PairWord:
    first: object
    second: object


def letter_at(w, n: int):
    return w.letter(n)


def is_lasso(w) -> bool:
    return isinstance(w, LassoWord)


# ---------------------------------------------------------------------------
# text syntax: stem(period)^w, [a,0] pair letters, [12] multi-char tokens

def _tokens(text: str) -> list:
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "[":
            j = text.index("]", i)
            body = text[i + 1:j]
            if "," in body:
                out.append(tuple(_atom(t.strip()) for t in body.split(",")))
            else:
                out.append(_atom(body.strip()))
            i = j + 1
            continue
        out.append(c)
        i += 1
    return out


def _atom(t: str):
    return int(t) if t.isdigit() and len(t) > 1 else t


def parse_lasso(text: str, integers: bool = False) -> LassoWord:
    text = text.strip()
    if not text.endswith(")^w"):
        raise WordError(f"lasso expression must end with '(...)^w': {text!r}")
    depth = 0
    open_at = None
    for i in range(len(text) - 3, -1, -1):
        c = text[i]
        if c == "]":
            depth += 1
        elif c == "[":
            depth -= 1
        elif c == "(" and depth == 0:
            open_at = i
            break
    if open_at is None:
        raise WordError(f"unbalanced lasso expression: {text!r}")
    stem = _tokens(text[:open_at])
    period = _tokens(text[open_at + 1:-3])
    if integers:
        stem = [int(a) for a in stem]
        period = [int(a) for a in period]
    return LassoWord(stem, period)


def parse_word(text: str):
    """Lasso or pattern word expression."""
    text = text.strip()
    if text == "alpha":
        return AlphaWord()
    if text.startswith("h{") and text.endswith("}"):
        return HCode(parse_lasso(text[2:-1]))
    if text.startswith("phi{") and text.endswith("}"):
        return PhiCode(parse_lasso(text[4:-1], integers=True))
    if text.startswith("theta{") and text.endswith("}"):
        head, _, rest = text[6:-1].partition(";")
        key, _, val = head.partition("=")
        if key.strip() != "S":
            raise WordError("theta expects theta{S=<k>;<lasso>}")
        return ThetaCode(parse_lasso(rest), int(val))
    return parse_lasso(text)


def split_top_level(text: str, sep: str = ",") -> list:
    parts, depth, cur = [], 0, []
    for c in text:
        if c in "[({":
            depth += 1
        elif c in "])}":
            depth -= 1
        if c == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(c)
    parts.append("".join(cur))
    return parts


def parse_pair(text: str) -> PairWord:
    parts = split_top_level(text)
    if len(parts) != 2:
        raise WordError(f"expected '<word>,<word>', got {text!r}")
    return PairWord(parse_word(parts[0]), parse_word(parts[1]))


def format_letter(a) -> str:
    if isinstance(a, tuple):
        return "[" + ",".join(format_letter(b) for b in a) + "]"
    s = str(a)
    return s if len(s) == 1 else f"[{s}]"


def format_finite(word: Iterable) -> str:
    return "".join(format_letter(a) for a in word)


def format_lasso(w: LassoWord) -> str:
    return f"{format_finite(w.stem)}({format_finite(w.period)})^w"


def word_from_string(s: str) -> tuple:
    return tuple(s)


def suffix_lasso(w: LassoWord, k: int) -> LassoWord:
    """The word w(k+1) w(k+2) ..."""
    if k <= len(w.stem):
        return LassoWord(w.stem[k:], w.period)
    r = (k - len(w.stem)) % len(w.period)
    return LassoWord((), w.period[r:] + w.period[:r])
