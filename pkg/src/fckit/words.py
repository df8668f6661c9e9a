"""Signed-letter words over a finite alphabet.

A letter is a pair ``(index, sign)`` with ``sign in (+1, -1)``. Words are
immutable; every operation returns a new word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Letter = tuple[int, int]

_NAME_RE = re.compile(r"[^\W\d]\w*")


class WordError(ValueError):
    """Malformed word or alphabet mismatch."""


class ParseError(WordError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.column = col


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise WordError("alphabet must contain at least one generator")
        for n in names:
            if not isinstance(n, str) or not _NAME_RE.fullmatch(n):
                raise WordError(f"invalid generator name {n!r}")
        if len(set(names)) != len(names):
            raise WordError(f"duplicate generator names in {names}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise WordError(f"unknown generator {name!r}") from None

    def word(self, text: str) -> "Word":
        return parse_word(text, self)

    def generator(self, name_or_index) -> "Word":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return Word(self, ((i, 1),))


@dataclass(frozen=True)
class Word:
    alphabet: Alphabet
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = tuple((int(i), int(s)) for i, s in self.letters)
        n = len(self.alphabet)
        for i, s in letters:
            if not 0 <= i < n:
                raise WordError(f"letter index {i} out of range for alphabet of size {n}")
            if s not in (1, -1):
                raise WordError(f"letter sign must be +1 or -1, got {s}")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else invert(self)
        return free_reduce(Word(self.alphabet, base.letters * abs(k)))

    def __str__(self):
        return format_word(self)

    @property
    def is_reduced(self) -> bool:
        return all(not _cancels(a, b) for a, b in zip(self.letters, self.letters[1:]))


def _cancels(a: Letter, b: Letter) -> bool:
    return a[0] == b[0] and a[1] == -b[1]


def free_reduce_letters(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for x in letters:
        if stack and _cancels(stack[-1], x):
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def free_reduce(w: Word) -> Word:
    return Word(w.alphabet, free_reduce_letters(w.letters))


def invert_letters(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple((i, -s) for i, s in reversed(letters))


def invert(w: Word) -> Word:
    return Word(w.alphabet, invert_letters(w.letters))


def _check_same(u: Word, v: Word):
    if u.alphabet != v.alphabet:
        raise WordError("words are over different alphabets")


def concat(u: Word, v: Word) -> Word:
    _check_same(u, v)
    return Word(u.alphabet, free_reduce_letters(u.letters + v.letters))


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split a freely reduced word as ``conjugator * core * conjugator^-1``.

    ``core`` is cyclically reduced.
    """
    letters = free_reduce_letters(w.letters)
    i, j = 0, len(letters) - 1
    while i < j and _cancels(letters[i], letters[j]):
        i += 1
        j -= 1
    return Word(w.alphabet, letters[i:j + 1]), Word(w.alphabet, letters[:i])


def substitute(w: Word, images: Sequence[Word]) -> Word:
    """Apply the free-group homomorphism sending generator ``i`` to ``images[i]``."""
    if len(images) != len(w.alphabet):
        raise WordError("need one image per generator")
    target = images[0].alphabet if images else w.alphabet
    out: list[Letter] = []
    for i, s in w.letters:
        img = images[i]
        out.extend(img.letters if s == 1 else invert_letters(img.letters))
    return Word(target, free_reduce_letters(out))


# -- text syntax ------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[^\W\d]\w*)|(?P<one>1(?![\d\w]))|(?P<star>\*))")
_EXP_RE = re.compile(r"\s*(?:\^\s*(?P<exp>[+-]?\s*\d+)|(?P<prime>'))")


def _parse_word_at(text: str, pos: int, alphabet: Alphabet, stop: str) -> tuple[list[Letter], int]:
    letters: list[Letter] = []
    expect_term = True
    seen_term = False
    while True:
        m = _TOKEN_RE.match(text, pos)
        if not m:
            rest = text[pos:].lstrip()
            if rest == "" or rest[0] in stop:
                break
            raise ParseError(f"unexpected character {rest[0]!r}", text, len(text) - len(rest))
        if m.group("star"):
            if expect_term:
                raise ParseError("'*' without a preceding term", text, m.start("star"))
            expect_term = True
            pos = m.end()
            continue
        if m.group("one"):
            pos = m.end()
            expect_term = False
            seen_term = True
            continue
        name = m.group("name")
        try:
            idx = alphabet.index(name)
        except WordError:
            raise ParseError(f"unknown generator {name!r}", text, m.start("name")) from None
        pos = m.end()
        exp = 1
        e = _EXP_RE.match(text, pos)
        if e:
            if e.group("prime"):
                exp = -1
            else:
                exp = int(e.group("exp").replace(" ", ""))
            pos = e.end()
        letters.extend([(idx, 1 if exp > 0 else -1)] * abs(exp))
        expect_term = False
        seen_term = True
    if expect_term and seen_term:
        raise ParseError("dangling '*'", text, pos)
    if not seen_term:
        raise ParseError("expected a word", text, pos)
    return letters, pos


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse ``x*y^-2*x'``-style text. ``1`` denotes the empty word.

    Letters are kept exactly as written (no reduction), so
    ``parse_word(format_word(w)) == w``.
    """
    letters, pos = _parse_word_at(text, 0, alphabet, stop="")
    if text[pos:].strip():
        raise ParseError("trailing input", text, pos)
    return Word(alphabet, letters)


def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    parts = []
    runs: list[list] = []
    for i, s in w.letters:
        if runs and runs[-1][0] == i and runs[-1][1] == s:
            runs[-1][2] += 1
        else:
            runs.append([i, s, 1])
    for i, s, k in runs:
        name = w.alphabet.names[i]
        e = s * k
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)
