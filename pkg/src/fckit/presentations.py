"""Finite presentations ``< generators | relators >``.

Relations may be written as equations ``u = v``; they are stored as the
freely reduced relator ``u * v^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .words import (
    Alphabet,
    ParseError,
    Word,
    WordError,
    _parse_word_at,
    format_word,
    free_reduce,
    free_reduce_letters,
    invert_letters,
)


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        rels = tuple(self.relators)
        for r in rels:
            if r.alphabet != self.alphabet:
                raise WordError("relator over a different alphabet")
            if not r.is_reduced or not r.letters:
                raise WordError(f"relator {format_word(r)} must be freely reduced and nonempty")
        object.__setattr__(self, "relators", rels)

    @classmethod
    def from_strings(cls, names, relators=()) -> "Presentation":
        alphabet = Alphabet(tuple(names))
        rels = []
        for text in relators:
            w = free_reduce(parse_relation(text, alphabet))
            if w.letters:
                rels.append(w)
        return cls(alphabet, tuple(rels))

    def __str__(self):
        return format_presentation(self)


_NAMES_RE = re.compile(r"\s*([^\W\d]\w*)\s*")


def parse_relation(text: str, alphabet: Alphabet) -> Word:
    letters, pos = _parse_relation_at(text, 0, alphabet, stop="")
    if text[pos:].strip():
        raise ParseError("trailing input", text, pos)
    return Word(alphabet, letters)


def _parse_relation_at(text, pos, alphabet, stop):
    lhs, pos = _parse_word_at(text, pos, alphabet, stop=stop + "=")
    rest = text[pos:]
    stripped = rest.lstrip()
    if stripped.startswith("="):
        pos = len(text) - len(stripped) + 1
        rhs, pos = _parse_word_at(text, pos, alphabet, stop=stop)
        lhs = list(lhs) + list(invert_letters(rhs))
    return list(free_reduce_letters(lhs)), pos


def parse_presentation(text: str) -> Presentation:
    """Parse ``< x, y | x^2, x*y*x = y^-1 >``."""
    pos = 0
    stripped = text.lstrip()
    if not stripped.startswith("<"):
        raise ParseError("presentation must start with '<'", text, len(text) - len(stripped))
    pos = len(text) - len(stripped) + 1
    bar = text.find("|", pos)
    if bar < 0:
        raise ParseError("missing '|'", text, len(text))
    if not text[pos:bar].strip():
        raise ParseError("empty generator list", text, pos)
    names = []
    for chunk_start, chunk in _split_commas(text, pos, bar):
        m = _NAMES_RE.fullmatch(chunk)
        if not m:
            raise ParseError(f"bad generator name {chunk.strip()!r}", text, chunk_start)
        names.append(m.group(1))
    try:
        alphabet = Alphabet(tuple(names))
    except WordError as e:
        raise ParseError(str(e), text, pos) from None

    pos = bar + 1
    relators: list[Word] = []
    while True:
        rest = text[pos:].lstrip()
        pos = len(text) - len(rest)
        if rest.startswith(">"):
            pos += 1
            break
        if not rest:
            raise ParseError("missing '>'", text, pos)
        letters, pos = _parse_relation_at(text, pos, alphabet, stop=",>")
        if letters:
            relators.append(Word(alphabet, tuple(letters)))
        rest = text[pos:].lstrip()
        pos = len(text) - len(rest)
        if rest.startswith(","):
            pos += 1
            if text[pos:].lstrip().startswith(">"):
                raise ParseError("trailing ','", text, pos)
        elif not rest.startswith(">"):
            raise ParseError("expected ',' or '>'", text, pos)
    if text[pos:].strip():
        raise ParseError("trailing input after '>'", text, pos)
    return Presentation(alphabet, tuple(relators))


def _split_commas(text, start, end):
    pos = start
    while True:
        comma = text.find(",", pos, end)
        if comma < 0:
            yield pos, text[pos:end]
            return
        yield pos, text[pos:comma]
        pos = comma + 1


def format_presentation(p: Presentation) -> str:
    rels = ", ".join(format_word(r) for r in p.relators)
    return f"< {', '.join(p.alphabet.names)} | {rels} >"


def relator_holds(model, r: Word) -> bool:
    """True iff ``r`` evaluates to the identity in ``model``."""
    if r.alphabet != model.alphabet:
        raise WordError("relator alphabet does not match the model")
    return model.is_identity(model.eval(r))
