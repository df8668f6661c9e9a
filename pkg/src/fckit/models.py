"""Group models: exact multiplication, inversion and canonical forms.

Every model's elements are hashable values that already are their own
canonical form, so ``canon`` defaults to the identity map. Equality of
canonical keys is equality in the group; no model may merge two distinct
elements.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from collections import deque
from functools import cached_property
from itertools import groupby
from typing import Any, Hashable, Sequence

import numpy as np

from .presentations import Presentation
from .words import Alphabet, Word, WordError, free_reduce_letters, invert_letters


class ModelError(ValueError):
    """Invalid model construction data."""


class GroupModel(ABC):
    alphabet: Alphabet

    @abstractmethod
    def identity(self) -> Any: ...

    @abstractmethod
    def mul(self, a, b) -> Any: ...

    @abstractmethod
    def inv(self, a) -> Any: ...

    @abstractmethod
    def generator(self, i: int) -> Any:
        """Element named by letter ``i`` of the alphabet."""

    @abstractmethod
    def to_word(self, g) -> Word:
        """Some word evaluating to ``g`` (not necessarily geodesic)."""

    @abstractmethod
    def presentation(self) -> Presentation: ...

    def canon(self, g) -> Hashable:
        return g

    def order(self) -> int | None:
        """Group order, or None if infinite."""
        return None

    def is_finite(self) -> int | None:
        return self.order()

    def generators(self) -> list[tuple[str, Any]]:
        return [(n, self.generator(i)) for i, n in enumerate(self.alphabet.names)]

    def eval(self, w: Word):
        if w.alphabet != self.alphabet:
            raise WordError("word alphabet does not match the model")
        g = self.identity()
        gens = [self.generator(i) for i in range(len(self.alphabet))]
        invs = [self.inv(x) for x in gens]
        for i, s in w.letters:
            g = self.mul(g, gens[i] if s == 1 else invs[i])
        return g

    def runs(self, g) -> list[tuple[int, int, int]]:
        """``to_word(g)`` as ``(generator, sign, count)`` runs."""
        return [(i, e, sum(1 for _ in r)) for (i, e), r in groupby(self.to_word(g).letters)]

    def equal(self, a, b) -> bool:
        return self.canon(a) == self.canon(b)

    def is_identity(self, g) -> bool:
        return self.canon(g) == self.canon(self.identity())

    def power(self, g, k: int):
        if k < 0:
            g, k = self.inv(g), -k
        out = self.identity()
        while k:
            if k & 1:
                out = self.mul(out, g)
            g = self.mul(g, g)
            k >>= 1
        return out

    def conjugate(self, g, by):
        """``by * g * by^-1``."""
        return self.mul(self.mul(by, g), self.inv(by))

    def commutator(self, a, b):
        """``a b a^-1 b^-1``."""
        return self.mul(self.mul(a, b), self.inv(self.mul(b, a)))

    def commutes(self, a, b) -> bool:
        return self.equal(self.mul(a, b), self.mul(b, a))

    def symmetric_generators(self) -> list[tuple[Word, Any]]:
        """Generators and inverses (as one-letter words), deduplicated by canon."""
        out, seen = [], set()
        for i in range(len(self.alphabet)):
            for s in (1, -1):
                g = self.generator(i) if s == 1 else self.inv(self.generator(i))
                key = self.canon(g)
                if key in seen:
                    continue
                seen.add(key)
                out.append((Word(self.alphabet, ((i, s),)), g))
        return out

    def word(self, text: str):
        """Evaluate word text."""
        return self.eval(self.alphabet.word(text))

    def infinite_conjugacy_witness(self, g, m_max: int):
        """Structured certificate that ``g`` has infinitely many conjugates, or None."""
        return None


def element_order(m: GroupModel, g, cap: int) -> int | None:
    """Least ``k <= cap`` with ``g^k = 1``; None if there is none."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    x = g
    for k in range(1, cap + 1):
        if m.is_identity(x):
            return k
        x = m.mul(x, g)
    return None


# -- finite groups by multiplication table ----------------------------------

class FiniteTableGroup(GroupModel):
    """A finite group given by its Cayley table on ``0..n-1``."""

    def __init__(self, table, generators: Sequence[int], names: Sequence[str] | None = None,
                 max_size: int = 256):
        t = np.asarray(table, dtype=np.int64)
        n = t.shape[0]
        if t.ndim != 2 or t.shape != (n, n) or n == 0:
            raise ModelError("table must be a nonempty square matrix")
        if n > max_size:
            raise ModelError(f"table of size {n} exceeds the validation cap {max_size}")
        if t.min() < 0 or t.max() >= n:
            raise ModelError("table entries out of range")
        if not all(len(set(row)) == n for row in t) or not all(len(set(col)) == n for col in t.T):
            raise ModelError("table is not a Latin square")
        for lo in range(0, n, 32):
            a = np.arange(lo, min(lo + 32, n))
            lhs = t[t[a][:, :, None], np.arange(n)[None, None, :]]   # (ab)c
            rhs = t[a[:, None, None], t[None, :, :]]                 # a(bc)
            if not np.array_equal(lhs, rhs):
                raise ModelError("table is not associative")
        ids = [e for e in range(n) if np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))]
        if len(ids) != 1:
            raise ModelError("table has no two-sided identity")
        self._e = ids[0]
        self.table = t.tolist()
        self._inv = [row.index(self._e) for row in self.table]
        if any(self.table[self._inv[a]][a] != self._e for a in range(n)):
            raise ModelError("left and right inverses disagree")
        self.gens = [int(g) for g in generators]
        if any(not 0 <= g < n for g in self.gens):
            raise ModelError("generator index out of range")
        if names is None:
            names = [f"g{i}" for i in range(len(self.gens))]
        if not self.gens:
            raise ModelError("at least one generator is required")
        self.alphabet = Alphabet(tuple(names))
        if len(self.alphabet) != len(self.gens):
            raise ModelError("one name per generator required")
        if len(self._geodesics) != n:
            raise ModelError("generators do not generate the whole table")
        self.n = n

    @cached_property
    def _geodesics(self) -> dict[int, Word]:
        words = {self._e: ()}
        queue = deque([self._e])
        steps = []
        for i, g in enumerate(self.gens):
            steps.append(((i, 1), g))
            steps.append(((i, -1), self._inv[g]))
        while queue:
            a = queue.popleft()
            for letter, s in steps:
                b = self.table[a][s]
                if b not in words:
                    words[b] = words[a] + (letter,)
                    queue.append(b)
        return {k: Word(self.alphabet, v) for k, v in words.items()}

    def identity(self):
        return self._e

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def generator(self, i):
        return self.gens[i]

    def order(self):
        return self.n

    def elements(self) -> range:
        return range(self.n)

    def to_word(self, g) -> Word:
        return self._geodesics[g]

    def centre(self) -> list[int]:
        return [z for z in range(self.n) if all(self.table[z][g] == self.table[g][z] for g in range(self.n))]

    def subgroup_closure(self, seeds) -> set[int]:
        out = {self._e}
        frontier = list(out)
        seeds = list(seeds)
        while frontier:
            nxt = []
            for a in frontier:
                for s in seeds:
                    b = self.table[a][s]
                    if b not in out:
                        out.add(b)
                        nxt.append(b)
            frontier = nxt
        return out

    def presentation(self) -> Presentation:
        # one relator per Cayley-graph edge outside the BFS spanning tree
        geo = self._geodesics
        rels = set()
        for a in range(self.n):
            for i, g in enumerate(self.gens):
                b = self.table[a][g]
                lhs = geo[a].letters + ((i, 1),)
                r = free_reduce_letters(lhs + invert_letters(geo[b].letters))
                if r:
                    rels.add(_cyclic_min(r))
        return Presentation(self.alphabet, tuple(Word(self.alphabet, r) for r in sorted(rels)))

    @classmethod
    def cyclic(cls, n: int, name: str = "a") -> "FiniteTableGroup":
        if n < 1:
            raise ModelError("cyclic order must be positive")
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return cls(table, [1 % n], [name])

    @classmethod
    def from_json(cls, doc) -> "FiniteTableGroup":
        if isinstance(doc, str):
            doc = json.loads(doc)
        if "cyclic" in doc:
            return cls.cyclic(int(doc["cyclic"]), doc.get("name", (doc.get("names") or ["a"])[0]))
        size = int(doc["size"])
        table = doc["table"]
        if len(table) != size:
            raise ModelError("table size does not match 'size'")
        return cls(table, doc["generators"], doc.get("names"))

    def to_json(self) -> dict:
        return {"size": self.n, "table": self.table, "generators": self.gens,
                "names": list(self.alphabet.names)}

    def __repr__(self):
        return f"FiniteTableGroup(n={self.n}, gens={list(self.alphabet.names)})"


def _cyclic_min(r):
    # relators equal up to cyclic permutation describe the same relation
    while len(r) > 1 and r[0][0] == r[-1][0] and r[0][1] == -r[-1][1]:
        r = r[1:-1]
    rots = [r[i:] + r[:i] for i in range(len(r))]
    return min(rots)


def cyclic(n: int, name: str = "a") -> FiniteTableGroup:
    return FiniteTableGroup.cyclic(n, name)


# -- free abelian and free groups -------------------------------------------

class FreeAbelianGroup(GroupModel):
    def __init__(self, rank: int, names: Sequence[str] | None = None):
        if rank < 1:
            raise ModelError("rank must be positive")
        self.rank = rank
        if names is None:
            names = ["x", "y", "z"][:rank] if rank <= 3 else [f"e{i}" for i in range(rank)]
        self.alphabet = Alphabet(tuple(names))
        if len(self.alphabet) != rank:
            raise ModelError("one name per coordinate required")

    def identity(self):
        return (0,) * self.rank

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def generator(self, i):
        return tuple(int(j == i) for j in range(self.rank))

    def eval(self, w):
        if w.alphabet != self.alphabet:
            raise WordError("word alphabet does not match the model")
        v = [0] * self.rank
        for i, s in w.letters:
            v[i] += s
        return tuple(v)

    def power(self, g, k):
        return tuple(k * x for x in g)

    def runs(self, g):
        return [(i, 1 if x > 0 else -1, abs(x)) for i, x in enumerate(g) if x]

    def to_word(self, g) -> Word:
        letters = []
        for i, x in enumerate(g):
            letters.extend([(i, 1 if x > 0 else -1)] * abs(x))
        return Word(self.alphabet, tuple(letters))

    def presentation(self):
        a = self.alphabet
        rels = []
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                rels.append(Word(a, ((i, 1), (j, 1), (i, -1), (j, -1))))
        return Presentation(a, tuple(rels))

    def __repr__(self):
        return f"FreeAbelianGroup({self.rank})"


class FreeGroup(GroupModel):
    """Elements are freely reduced letter tuples."""

    def __init__(self, rank: int, names: Sequence[str] | None = None):
        if rank < 1:
            raise ModelError("rank must be positive")
        if names is None:
            names = ["x", "y", "z", "w"][:rank] if rank <= 4 else [f"x{i}" for i in range(rank)]
        self.alphabet = Alphabet(tuple(names))
        self.rank = len(self.alphabet)

    def identity(self):
        return ()

    def mul(self, a, b):
        return free_reduce_letters(a + b)

    def inv(self, a):
        return invert_letters(a)

    def generator(self, i):
        return ((i, 1),)

    def eval(self, w):
        if w.alphabet != self.alphabet:
            raise WordError("word alphabet does not match the model")
        return free_reduce_letters(w.letters)

    def to_word(self, g):
        return Word(self.alphabet, g)

    def presentation(self):
        return Presentation(self.alphabet, ())

    def __repr__(self):
        return f"FreeGroup({self.rank})"


class DirectProductGroup(GroupModel):
    def __init__(self, left: GroupModel, right: GroupModel):
        self.left, self.right = left, right
        self.alphabet = Alphabet(left.alphabet.names + right.alphabet.names)
        self._k = len(left.alphabet)

    def identity(self):
        return (self.left.identity(), self.right.identity())

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a):
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    def canon(self, a):
        return (self.left.canon(a[0]), self.right.canon(a[1]))

    def generator(self, i):
        if i < self._k:
            return (self.left.generator(i), self.right.identity())
        return (self.left.identity(), self.right.generator(i - self._k))

    def order(self):
        a, b = self.left.order(), self.right.order()
        return a * b if a is not None and b is not None else None

    def to_word(self, g):
        u = self.left.to_word(g[0]).letters
        v = tuple((i + self._k, s) for i, s in self.right.to_word(g[1]).letters)
        return Word(self.alphabet, u + v)

    def presentation(self):
        a = self.alphabet
        rels = [Word(a, r.letters) for r in self.left.presentation().relators]
        rels += [Word(a, tuple((i + self._k, s) for i, s in r.letters))
                 for r in self.right.presentation().relators]
        for i in range(self._k):
            for j in range(self._k, len(a)):
                rels.append(Word(a, ((i, 1), (j, 1), (i, -1), (j, -1))))
        return Presentation(a, tuple(rels))


class InfiniteDihedral(GroupModel):
    """``< x, y | x^2, x y x = y^-1 >``; element ``(e, k)`` stands for ``x^e y^k``."""

    def __init__(self, names=("x", "y")):
        self.alphabet = Alphabet(tuple(names))

    def identity(self):
        return (0, 0)

    def mul(self, a, b):
        # y^k x = x y^-k
        return ((a[0] + b[0]) % 2, (-a[1] if b[0] else a[1]) + b[1])

    def inv(self, a):
        return (a[0], a[1] if a[0] else -a[1])

    def generator(self, i):
        return (1, 0) if i == 0 else (0, 1)

    def to_word(self, g):
        k = g[1]
        letters = ((0, 1),) * g[0] + ((1, 1 if k > 0 else -1),) * abs(k)
        return Word(self.alphabet, letters)

    def runs(self, g):
        out = [(0, 1, 1)] if g[0] else []
        return out + ([(1, 1 if g[1] > 0 else -1, abs(g[1]))] if g[1] else [])

    def presentation(self):
        return Presentation.from_strings(self.alphabet.names, [
            f"{self.alphabet.names[0]}^2",
            "{0}*{1}*{0}*{1}".format(*self.alphabet.names),
        ])

    def __repr__(self):
        return "InfiniteDihedral()"
