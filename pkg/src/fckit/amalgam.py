"""Free products with amalgamation of two finite-table groups.

An element is stored as ``(head, tail)``: ``head`` is an element of the
amalgamated subgroup (an index into ``spec.gamma0``) and ``tail`` is an
alternating tuple of ``(factor, rep)`` pairs, where ``rep`` is a nontrivial
right-coset representative of the amalgamated subgroup in that factor.
The element is ``head * rep_1 * ... * rep_k``; this form is unique.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Sequence

from .models import FiniteTableGroup, GroupModel, ModelError
from .presentations import Presentation
from .words import Alphabet, Word, invert_letters


class Inapplicable(Exception):
    """A construction's hypothesis does not hold for this input."""


@dataclass(eq=False)
class AmalgamSpec:
    factor1: FiniteTableGroup
    factor2: FiniteTableGroup
    gamma0: FiniteTableGroup
    e1: tuple[int, ...]
    e2: tuple[int, ...]
    split: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.e1, self.e2 = tuple(self.e1), tuple(self.e2)
        g0 = self.gamma0
        for f, emb in ((self.factor1, self.e1), (self.factor2, self.e2)):
            if len(emb) != g0.order():
                raise ModelError("embedding must list one image per element of gamma0")
            if len(set(emb)) != len(emb):
                raise ModelError("embedding is not injective")
            for a in g0.elements():
                for b in g0.elements():
                    if emb[g0.mul(a, b)] != f.mul(emb[a], emb[b]):
                        raise ModelError("embedding is not a homomorphism")
        self.split = {1: self._coset_split(self.factor1, self.e1), 2: self._coset_split(self.factor2, self.e2)}

    @staticmethod
    def _coset_split(f: FiniteTableGroup, emb) -> dict[int, tuple[int, int]]:
        # g = emb[c] * rep, rep = smallest index in the right coset, identity for the subgroup
        back = {x: c for c, x in enumerate(emb)}
        out = {}
        for g in f.elements():
            if g in out:
                continue
            coset = [f.mul(x, g) for x in emb]
            rep = f.identity() if f.identity() in coset else min(coset)
            rinv = f.inv(rep)
            for h in coset:
                out[h] = (back[f.mul(h, rinv)], rep)
        return out

    def factor(self, f: int) -> FiniteTableGroup:
        return self.factor1 if f == 1 else self.factor2

    def emb(self, f: int) -> tuple[int, ...]:
        return self.e1 if f == 1 else self.e2

    def index(self, f: int) -> int:
        return self.factor(f).order() // self.gamma0.order()

    def reps(self, f: int) -> list[int]:
        ident = self.factor(f).identity()
        return sorted({r for _, r in self.split[f].values()} - {ident})

    def big_factor(self) -> int | None:
        """A factor of index at least 3 over the amalgamated subgroup."""
        for f in (1, 2):
            if self.index(f) >= 3:
                return f
        return None

    @classmethod
    def from_pairs(cls, factor1: FiniteTableGroup, factor2: FiniteTableGroup,
                   pairs: Sequence[tuple[int, int]]) -> "AmalgamSpec":
        """Amalgamate the subgroup generated by ``pairs[i][0]`` in ``factor1`` with
        the one generated by ``pairs[i][1]`` in ``factor2``."""
        iso = {factor1.identity(): factor2.identity()}
        frontier = [factor1.identity()]
        while frontier:
            nxt = []
            for a in frontier:
                for g1, g2 in pairs:
                    b1, b2 = factor1.mul(a, g1), factor2.mul(iso[a], g2)
                    if b1 in iso:
                        if iso[b1] != b2:
                            raise ModelError("amalgamation pairs do not define an isomorphism")
                    else:
                        iso[b1] = b2
                        nxt.append(b1)
            frontier = nxt
        elems = sorted(iso, key=lambda x: (x != factor1.identity(), x))
        pos = {x: i for i, x in enumerate(elems)}
        table = [[pos[factor1.mul(a, b)] for b in elems] for a in elems]
        gens = [pos[g1] for g1, _ in pairs] or [0]
        gamma0 = FiniteTableGroup(table, gens, [f"c{i}" for i in range(len(gens))])
        return cls(factor1, factor2, gamma0, tuple(elems), tuple(iso[x] for x in elems))


class Amalgam(GroupModel):
    def __init__(self, spec: AmalgamSpec):
        self.spec = spec
        f1, f2 = spec.factor1, spec.factor2
        self._k = len(f1.alphabet)
        try:
            self.alphabet = Alphabet(f1.alphabet.names + f2.alphabet.names)
        except ValueError as e:
            raise ModelError(f"factor generator names must be distinct: {e}") from None

    # -- core arithmetic

    def _prepend(self, f: int, x: int, elem):
        """Normal form of ``x * elem`` for ``x`` in factor ``f``."""
        c, tail = elem
        spec = self.spec
        F = spec.factor(f)
        y = F.mul(x, spec.emb(f)[c])
        if tail and tail[0][0] == f:
            y = F.mul(y, tail[0][1])
            tail = tail[1:]
        c2, r = spec.split[f][y]
        if r != F.identity():
            tail = ((f, r),) + tail
        return (c2, tail)

    def identity(self):
        return (self.spec.gamma0.identity(), ())

    def from_factor(self, f: int, x: int):
        return self._prepend(f, x, self.identity())

    def mul(self, a, b):
        out = b
        for f, r in reversed(a[1]):
            out = self._prepend(f, r, out)
        return (self.spec.gamma0.mul(a[0], out[0]), out[1])

    def inv(self, a):
        out = (self.spec.gamma0.inv(a[0]), ())
        for f, r in a[1]:
            out = self._prepend(f, self.spec.factor(f).inv(r), out)
        return out

    def generator(self, i):
        if i < self._k:
            return self.from_factor(1, self.spec.factor1.generator(i))
        return self.from_factor(2, self.spec.factor2.generator(i - self._k))

    def _factor_word(self, f, x) -> tuple:
        letters = self.spec.factor(f).to_word(x).letters
        off = 0 if f == 1 else self._k
        return tuple((i + off, s) for i, s in letters)

    def to_word(self, g) -> Word:
        letters = self._factor_word(1, self.spec.e1[g[0]])
        for f, r in g[1]:
            letters += self._factor_word(f, r)
        return Word(self.alphabet, letters)

    def presentation(self) -> Presentation:
        a = self.alphabet
        rels = [Word(a, r.letters) for r in self.spec.factor1.presentation().relators]
        rels += [Word(a, tuple((i + self._k, s) for i, s in r.letters))
                 for r in self.spec.factor2.presentation().relators]
        g0 = self.spec.gamma0
        for c in g0.gens:
            u = self._factor_word(1, self.spec.e1[c])
            v = self._factor_word(2, self.spec.e2[c])
            if u or v:
                rels.append(Word(a, u + invert_letters(v)))
        return Presentation(a, tuple(rels))

    # -- structure

    def syllables(self, g) -> list[tuple[int, int]]:
        """Factor elements whose product is ``g``, with the head folded into the first."""
        c, tail = g
        if not tail:
            return [(1, self.spec.e1[c])] if c != self.spec.gamma0.identity() else []
        f, r = tail[0]
        first = (f, self.spec.factor(f).mul(self.spec.emb(f)[c], r))
        return [first] + list(tail[1:])

    def in_gamma0(self, g) -> bool:
        return not g[1]

    def cyclic_reduce(self, g):
        """Return ``(core, u)`` with ``g = u * core * u^-1`` and ``core`` cyclically reduced."""
        u = self.identity()
        while len(g[1]) >= 2 and g[1][0][0] == g[1][-1][0]:
            f, x = self.syllables(g)[0]
            s = self.from_factor(f, x)
            g = self.mul(self.mul(self.inv(s), g), s)
            u = self.mul(u, s)
        return g, u

    def infinite_conjugacy_witness(self, g, m_max: int):
        core, u = self.cyclic_reduce(g)
        try:
            w = conjugate_growth_witness(self, core, m_max)
        except Inapplicable:
            return None
        w.prefix = u
        return w

    def __repr__(self):
        s = self.spec
        return f"Amalgam({s.factor1!r} *_[{s.gamma0.order()}] {s.factor2!r})"


def amalgam_mul(model: Amalgam, a, b):
    return model.mul(a, b)


def reduced_length(g) -> int:
    return len(g[1])


def amalgam_centre(model: Amalgam) -> set:
    """Centre of the amalgam as the intersection of the factor centres inside gamma0.

    Requires one factor of index at least 3 (then this set is also the
    FC-centre).
    """
    spec = model.spec
    if spec.big_factor() is None:
        raise Inapplicable("both factors have index <= 2 over the amalgamated subgroup")
    z1, z2 = set(spec.factor1.centre()), set(spec.factor2.centre())
    return {(c, ()) for c in spec.gamma0.elements() if spec.e1[c] in z1 and spec.e2[c] in z2}


@dataclass
class GrowthWitness:
    """Conjugates ``x^-m * g * x^m`` (m = 1..m_max) with pairwise distinct normal forms."""
    element: object
    conjugator: object
    conjugates: list
    lengths: list
    pattern: str
    prefix: object = None

    def as_dict(self, model: GroupModel) -> dict:
        from .words import format_word
        out = {
            "pattern": self.pattern,
            "element": format_word(model.to_word(self.element)),
            "conjugator": format_word(model.to_word(self.conjugator)),
            "lengths": list(self.lengths),
            "conjugates": [format_word(model.to_word(c)) for c in self.conjugates],
        }
        if self.prefix is not None:
            out["reduced_by"] = format_word(model.to_word(self.prefix))
        return out


def _conjugates(model, g, x, m_max):
    xi = model.inv(x)
    out = []
    cur = g
    for _ in range(m_max):
        cur = model.mul(model.mul(xi, cur), x)
        out.append(cur)
    return out


def conjugate_growth_witness(model: Amalgam, g, m_max: int) -> GrowthWitness:
    """Pairwise distinct conjugates certifying that ``g`` is not in the FC-centre.

    ``g`` must be cyclically reduced. For ``g`` outside gamma0 the conjugates
    ``(ab)^-m g (ab)^m`` (or ``(ba)``), with ``a`` a coset rep in a factor of
    index >= 3 and ``b`` one in the other factor, have syllable length growing
    by exactly 4 per step. For a non-central ``g`` inside gamma0, ``x1 x2`` with ``g^-1 x1 x2 g != x1 x2`` is used instead:
    no power of ``x1 x2`` centralizes ``g``.
    """
    spec = model.spec
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    big = spec.big_factor()
    if big is None:
        raise Inapplicable("no factor has index >= 3 over the amalgamated subgroup")
    tail = g[1]
    if len(tail) >= 2 and tail[0][0] == tail[-1][0]:
        raise Inapplicable("element is not cyclically reduced")
    other = 3 - big
    A = [model.from_factor(big, a) for a in spec.reps(big)]
    B = [model.from_factor(other, b) for b in spec.reps(other)]
    L = len(tail)

    if L == 0:
        return _gamma0_witness(model, g, m_max)

    ba = ([model.mul(b, a) for a in A for b in B], "x^-m g x^m, x = (small-index rep)(large-index rep)")
    ab = ([model.mul(a, b) for a in A for b in B], "x^-m g x^m, x = (large-index rep)(small-index rep)")
    order = [ba, ab] if L == 1 and tail[0][0] == big else [ab, ba]
    for candidates, name in order:
        for x in candidates:
            conj = _conjugates(model, g, x, m_max)
            lengths = [reduced_length(c) for c in conj]
            # at most one end syllable merges with the conjugator; after that
            # each step adds four syllables
            if lengths[0] >= L + 2 and all(q - p == 4 for p, q in zip(lengths, lengths[1:])):
                return GrowthWitness(g, x, conj, lengths, name)
    raise Inapplicable("no conjugator yields a linearly growing pattern")


def _gamma0_witness(model: Amalgam, g, m_max):
    spec = model.spec
    c = g[0]
    gi = model.inv(g)
    for x1 in spec.reps(1):
        for x2 in spec.reps(2):
            x = model.mul(model.from_factor(1, x1), model.from_factor(2, x2))
            if not model.equal(model.mul(model.mul(gi, x), g), x):
                conj = [model.mul(model.mul(model.power(x, -m), g), model.power(x, m))
                        for m in range(1, m_max + 1)]
                if len({model.canon(h) for h in conj}) == m_max:
                    return GrowthWitness(g, x, conj, [reduced_length(h) for h in conj],
                                         "x^-m g x^m with g^-1 x g != x, x = x1 x2")
    raise Inapplicable(f"element {c} of gamma0 is central")


# -- independent reduction by random rewriting --------------------------------

def rewrite_reduce(model: Amalgam, raw: Sequence[tuple[int, int]], rng: random.Random | None = None):
    """Normal form of a product of factor elements ``(f, x)`` computed by
    rewriting in random order.

    Length-reducing moves (drop an identity, merge equal-factor neighbours,
    absorb a gamma0 syllable into a neighbour) are applied at random until
    none is left; gamma0 parts are then pushed to the front. Used only to
    cross-check ``Amalgam.mul``.
    """
    rng = rng or random.Random(0)
    spec = model.spec
    back = {1: {x: c for c, x in enumerate(spec.e1)}, 2: {x: c for c, x in enumerate(spec.e2)}}
    toks = [(f, x) for f, x in raw]
    while True:
        moves = []
        for i, (f, x) in enumerate(toks):
            if x == spec.factor(f).identity():
                moves.append(("drop", i))
            elif x in back[f] and len(toks) > 1:
                moves.append(("absorb", i))
            if i + 1 < len(toks) and toks[i + 1][0] == f:
                moves.append(("merge", i))
        if not moves:
            break
        kind, i = rng.choice(moves)
        if kind == "drop":
            del toks[i]
        elif kind == "merge":
            f = toks[i][0]
            toks[i:i + 2] = [(f, spec.factor(f).mul(toks[i][1], toks[i + 1][1]))]
        else:
            c = back[toks[i][0]][toks[i][1]]
            nbrs = [j for j in (i - 1, i + 1) if 0 <= j < len(toks)]
            j = rng.choice(nbrs)
            g = toks[j][0]
            F = spec.factor(g)
            y = F.mul(toks[j][1], spec.emb(g)[c]) if j < i else F.mul(spec.emb(g)[c], toks[j][1])
            toks[j] = (g, y)
            del toks[i]
    c = spec.gamma0.identity()
    tail: list = []
    for f, x in reversed(toks):
        F = spec.factor(f)
        c, r = spec.split[f][F.mul(x, spec.emb(f)[c])]
        tail.append((f, r))
    tail.reverse()
    return (c, tuple((f, r) for f, r in tail if r != spec.factor(f).identity()))


# -- JSON construction -------------------------------------------------------

def _factor_from_json(doc, default_name):
    if isinstance(doc, int):
        return FiniteTableGroup.cyclic(doc, default_name)
    if "cyclic" in doc and "name" not in doc and "names" not in doc:
        doc = dict(doc, name=default_name)
    return FiniteTableGroup.from_json(doc)


def amalgam_from_json(doc) -> Amalgam:
    """``{factor1, factor2, amalgam: [[word-in-factor1, word-in-factor2], ...]}``."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    f1 = _factor_from_json(doc["factor1"], "a")
    f2 = _factor_from_json(doc["factor2"], "b")
    pairs = [(f1.word(u), f2.word(v)) for u, v in doc.get("amalgam", [])]
    return Amalgam(AmalgamSpec.from_pairs(f1, f2, pairs))
