"""Word metric by breadth-first search on the Cayley graph, and empirical
quasi-isometry constants on finite balls."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable

from .models import GroupModel
from .words import Word, format_word

DEFAULT_BALL_CAP = 2_000_000


class BallBudgetError(RuntimeError):
    def __init__(self, cap: int, radius_reached: int):
        super().__init__(f"ball exceeds {cap} elements after completing radius {radius_reached}")
        self.cap = cap
        self.radius_reached = radius_reached


@dataclass
class BallIndex:
    model: GroupModel
    radius: int
    entries: dict[Hashable, tuple[Any, int, Hashable | None, tuple | None]]
    spheres: list[list[Hashable]] = field(repr=False, default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, g):
        return self.model.canon(g) in self.entries

    def elements(self) -> Iterable:
        return (e[0] for e in self.entries.values())

    def length(self, g) -> int | None:
        e = self.entries.get(self.model.canon(g))
        return None if e is None else e[1]

    def geodesic(self, g) -> Word:
        key = self.model.canon(g)
        if key not in self.entries:
            raise KeyError("element is not in the ball")
        letters = []
        while True:
            _, _, parent, letter = self.entries[key]
            if parent is None:
                break
            letters.append(letter)
            key = parent
        return Word(self.model.alphabet, tuple(reversed(letters)))

    def sphere_sizes(self) -> list[int]:
        return [len(s) for s in self.spheres]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["canon", "length", "geodesic"])
        for key, (g, n, _, _) in self.entries.items():
            w.writerow([repr(key), n, format_word(self.geodesic(g))])
        return buf.getvalue()


def enumerate_ball(m: GroupModel, R: int, cap: int = DEFAULT_BALL_CAP) -> BallIndex:
    """All elements within word length ``R`` of the identity."""
    if R < 0 or cap < 1:
        raise ValueError("need R >= 0 and cap >= 1")
    steps = [(w.letters[0], g) for w, g in m.symmetric_generators()]
    e = m.identity()
    k0 = m.canon(e)
    entries = {k0: (e, 0, None, None)}
    spheres = [[k0]]
    frontier = [e]
    for r in range(1, R + 1):
        nxt, keys = [], []
        for g in frontier:
            gk = m.canon(g)
            for letter, s in steps:
                h = m.mul(g, s)
                hk = m.canon(h)
                if hk not in entries:
                    if len(entries) >= cap:
                        raise BallBudgetError(cap, r - 1)
                    entries[hk] = (h, r, gk, letter)
                    nxt.append(h)
                    keys.append(hk)
        spheres.append(keys)
        frontier = nxt
    return BallIndex(m, R, entries, spheres)


def word_length(ball: BallIndex, g) -> int | None:
    return ball.length(g)


class WordMetric:
    """Exact word metric backed by a ball that grows on demand."""

    def __init__(self, m: GroupModel, cap: int = DEFAULT_BALL_CAP):
        self.model = m
        self.cap = cap
        self.ball = enumerate_ball(m, 0, cap)

    def norm(self, g) -> int:
        n = self.ball.length(g)
        while n is None:
            self.ball = enumerate_ball(self.model, self.ball.radius + max(1, self.ball.radius // 2), self.cap)
            n = self.ball.length(g)
        return n

    def dist(self, g, h) -> int:
        return self.norm(self.model.mul(self.model.inv(g), h))


class DistortionError(RuntimeError):
    def __init__(self, message, worst_pair):
        super().__init__(message)
        self.worst_pair = worst_pair


@dataclass
class QICertificate:
    lam: float
    epsilon: int
    codensity: int
    radius: int
    pairs_checked: int
    epsilon_witness: tuple | None = None
    codensity_witness: Any = None
    policy: str = "all pairs"

    def as_dict(self, source: GroupModel | None = None, target: GroupModel | None = None) -> dict:
        def fmt(m, g):
            return format_word(m.to_word(g)) if m is not None else repr(g)
        d = {
            "lambda": self.lam, "epsilon": self.epsilon, "C": self.codensity,
            "radius": self.radius, "pairs_checked": self.pairs_checked, "policy": self.policy,
        }
        if self.epsilon_witness is not None:
            d["epsilon_witness"] = [fmt(source, g) for g in self.epsilon_witness]
        if self.codensity_witness is not None:
            d["codensity_witness"] = fmt(target, self.codensity_witness)
        return d

    def to_json(self, source=None, target=None) -> str:
        return json.dumps(self.as_dict(source, target), indent=2)


LAMBDA_GRID = tuple(1 + 0.25 * i for i in range(29))   # 1, 1.25, ..., 8


def certify_qi(f: Callable[[Any], Any] | dict, source: BallIndex, target: BallIndex,
               eps_max: int | None = None) -> QICertificate:
    """Smallest (epsilon, lambda) on the grid, in that order, valid for every pair
    of source-ball points, plus the exact codensity over the target ball.

    ``f`` is a callable or a dict keyed by source canonical forms.
    """
    sm, tm = source.model, target.model
    pts = list(source.elements())
    if callable(f):
        imgs = [f(p) for p in pts]
    else:
        imgs = [f[sm.canon(p)] for p in pts]
    dsrc, dtgt = WordMetric(sm), WordMetric(tm)
    pairs = []
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            pairs.append((i, j, dsrc.dist(pts[i], pts[j]), dtgt.dist(imgs[i], imgs[j])))

    best = None
    for lam in LAMBDA_GRID:
        eps, wit = 0, None
        for i, j, d, d2 in pairs:
            need = max(d / lam - d2, d2 - lam * d)
            need = math.ceil(need - 1e-12)
            if need > eps:
                eps, wit = need, (pts[i], pts[j])
        if best is None or eps < best[1]:
            best = (lam, eps, wit)
        if eps == 0:
            break
    lam, eps, wit = best
    if eps_max is None:
        eps_max = max(source.radius, 1)
    if eps > eps_max:
        raise DistortionError(f"no (lambda, epsilon) on the grid with epsilon <= {eps_max}; "
                              f"best is lambda={lam}, epsilon={eps}", wit)

    # codensity: distance from each target ball point to the image
    C, cwit = 0, None
    image_keys = {tm.canon(y) for y in imgs}
    for y in target.elements():
        if tm.canon(y) in image_keys:
            continue
        dmin = min(dtgt.dist(y, z) for z in imgs)
        if dmin > C:
            C, cwit = dmin, y
    return QICertificate(lam, eps, C, source.radius, len(pairs), wit, cwit)


def homomorphism(source: GroupModel, target: GroupModel, images) -> Callable[[Any], Any]:
    """Map ``source -> target`` given generator images (words or word strings,
    as a list or a dict by generator name); relators must map to the identity."""
    from .words import substitute
    names = source.alphabet.names
    if isinstance(images, dict):
        missing = set(names) - set(images)
        if missing:
            raise ValueError(f"no image given for {sorted(missing)}")
        images = [images[n] for n in names]
    if len(images) != len(names):
        raise ValueError("need exactly one image per source generator")
    words = [w if isinstance(w, Word) else target.alphabet.word(w) for w in images]
    for r in source.presentation().relators:
        if not target.is_identity(target.eval(substitute(r, words))):
            raise ValueError(f"relator {format_word(r)} is not sent to the identity")
    img = [target.eval(w) for w in words]
    img_inv = [target.inv(x) for x in img]

    def f(g):
        out = target.identity()
        for i, e, n in source.runs(g):
            out = target.mul(out, target.power(img[i] if e > 0 else img_inv[i], n))
        return out
    return f
