"""Automorphisms given by generator images, bounded-automorphism tests, and
rational virtual automorphisms of Z^n."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import lattice as lat
from .fc import Status, Verdict, centre_test, coset_bfs, default_cap, fc_membership, DEFAULT_COSET_CAP
from .geometry import BallIndex
from .models import GroupModel, element_order
from .presentations import relator_holds
from .words import Word, format_word, substitute


PAIRWISE_RECHECK = 256


class AutomorphismError(ValueError):
    pass


@dataclass(eq=False)
class GenAutomorphism:
    model: GroupModel
    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...]

    def __post_init__(self):
        m = self.model
        self._img = [m.eval(w) for w in self.images]
        self._img_inv = [m.inv(x) for x in self._img]

    def apply_word(self, w: Word) -> Word:
        return substitute(w, self.images)

    def __call__(self, g):
        m = self.model
        out = m.identity()
        for i, e, n in m.runs(g):
            out = m.mul(out, m.power(self._img[i] if e > 0 else self._img_inv[i], n))
        return out

    def inverse(self) -> "GenAutomorphism":
        return GenAutomorphism(self.model, self.inverse_images, self.images)

    def as_dict(self) -> dict:
        names = self.model.alphabet.names
        return {"images": {n: format_word(w) for n, w in zip(names, self.images)},
                "inverse_images": {n: format_word(w) for n, w in zip(names, self.inverse_images)}}


def _as_words(m: GroupModel, ws) -> tuple[Word, ...]:
    names = m.alphabet.names
    if isinstance(ws, Mapping):
        missing = set(names) - set(ws)
        if missing:
            raise AutomorphismError(f"no image given for {sorted(missing)}")
        ws = [ws[n] for n in names]
    out = tuple(w if isinstance(w, Word) else m.alphabet.word(w) for w in ws)
    if len(out) != len(names):
        raise AutomorphismError("need exactly one image per generator")
    return out


def validate_automorphism(m: GroupModel, images, inverse_images) -> GenAutomorphism:
    """Check both maps are homomorphisms (relators go to 1) and mutually inverse
    on generators."""
    imgs, invs = _as_words(m, images), _as_words(m, inverse_images)
    pres = m.presentation()
    for label, ws in (("images", imgs), ("inverse_images", invs)):
        for r in pres.relators:
            if not relator_holds(m, substitute(r, ws)):
                raise AutomorphismError(f"{label}: relator {format_word(r)} is not sent to the identity")
    for i, name in enumerate(m.alphabet.names):
        gen = m.generator(i)
        if not m.equal(m.eval(substitute(imgs[i], invs)), gen):
            raise AutomorphismError(f"round trip fails on {name}: inverse(image({name})) != {name}")
        if not m.equal(m.eval(substitute(invs[i], imgs)), gen):
            raise AutomorphismError(f"round trip fails on {name}: image(inverse({name})) != {name}")
    return GenAutomorphism(m, imgs, invs)


def automorphism_from_json(m: GroupModel, doc) -> GenAutomorphism:
    if isinstance(doc, str):
        doc = json.loads(doc)
    return validate_automorphism(m, doc["images"], doc["inverse_images"])


def inner_automorphism(m: GroupModel, g) -> GenAutomorphism:
    """``x -> g x g^-1``."""
    w = m.to_word(g)
    wi = ~w
    a = m.alphabet
    imgs = [w * a.generator(i) * wi for i in range(len(a))]
    invs = [wi * a.generator(i) * w for i in range(len(a))]
    return validate_automorphism(m, imgs, invs)


# -- displacement sets ---------------------------------------------------------

@dataclass
class DisplacementSet:
    radius: int
    elements: dict            # canon -> element
    sizes_by_radius: list     # |S_r| for r = 0..radius
    saturated: bool

    def __len__(self):
        return len(self.elements)


def displacement_set(phi: GenAutomorphism, ball: BallIndex) -> DisplacementSet:
    """``{phi(g) g^-1 : g in ball}`` with the sizes of the partial sets by radius."""
    m = phi.model
    if ball.model is not m:
        raise ValueError("ball was built on a different model")
    S: dict = {}
    sizes = []
    for sphere in ball.spheres:
        for key in sphere:
            g = ball.entries[key][0]
            d = m.mul(phi(g), m.inv(g))
            S.setdefault(m.canon(d), d)
        sizes.append(len(S))
    saturated = len(sizes) >= 3 and sizes[-1] == sizes[-2] == sizes[-3]
    return DisplacementSet(ball.radius, S, sizes, saturated)


def bounded_test(phi: GenAutomorphism, cap: int | None = None, max_radius: int = 12) -> Verdict:
    """Is ``Fix(phi)`` of finite index?

    Proved carries the index ``s`` and a saturated displacement set of size
    ``s`` (the two must agree).
    """
    from .geometry import enumerate_ball
    m = phi.model
    cap = default_cap(DEFAULT_COSET_CAP) if cap is None else cap
    budget = {"coset_cap": cap, "max_radius": max_radius}
    def fixed(h):
        return m.equal(phi(h), h)

    # H a == H b iff a^-1 phi(a) == b^-1 phi(b)
    idx = coset_bfs(m, fixed, cap, key=lambda a: m.canon(m.mul(m.inv(a), phi(a))))
    if idx is not None and idx <= PAIRWISE_RECHECK and coset_bfs(m, fixed, cap) != idx:
        raise AssertionError("keyed and pairwise coset searches disagree")
    if idx is None:
        return Verdict(Status.INCONCLUSIVE, {"kind": "coset_cap_hit", "cosets_at_cap": cap}, budget)
    S = None
    for R in range(2, max_radius + 1):
        S = displacement_set(phi, enumerate_ball(m, R))
        if S.saturated and len(S) == idx:
            break
    cert = {
        "kind": "fixed_subgroup_index",
        "index": idx,
        "displacement_size": len(S),
        "displacement_saturated": S.saturated,
        "displacement": sorted(format_word(m.to_word(x)) for x in S.elements.values()),
        "radius": S.radius,
    }
    if not (S.saturated and len(S) == idx):
        cert["kind"] = "index_displacement_mismatch"
        return Verdict(Status.INCONCLUSIVE, cert, budget)
    return Verdict(Status.PROVED, cert, budget)


@dataclass
class FcReport:
    passed: bool
    verdicts: dict


class FcViolation(AssertionError):
    pass


def displacement_in_fc(phi: GenAutomorphism, ball: BallIndex, orbit_cap: int | None = None) -> FcReport:
    """Every displacement ``phi(g) g^-1`` of a bounded automorphism must lie in
    the FC-centre; a refutation means a bug somewhere."""
    m = phi.model
    S = displacement_set(phi, ball)
    verdicts = {}
    for key, d in S.elements.items():
        v = fc_membership(m, d, orbit_cap)
        verdicts[format_word(m.to_word(d))] = v
        if v.refuted:
            raise FcViolation(f"displacement {format_word(m.to_word(d))} refuted as FC element")
    return FcReport(all(v.proved for v in verdicts.values()), verdicts)


@dataclass
class LambdaReport:
    applicable: bool
    multiplicative: bool = False
    pairs_checked: int = 0
    image_size: int = 0
    trivial_on_ball: bool = False
    torsion_free_image: bool | None = None
    note: str = ""


def lambda_check(phi: GenAutomorphism, ball: BallIndex, order_cap: int = 64) -> LambdaReport:
    """Check ``g -> phi(g) g^-1`` is a homomorphism on in-ball pairs, given that
    all its values are central."""
    m = phi.model
    vals = {}
    for key, (g, _, _, _) in ball.entries.items():
        d = m.mul(phi(g), m.inv(g))
        if not centre_test(m, d):
            return LambdaReport(False, note=f"displacement {format_word(m.to_word(d))} is not central")
        vals[key] = d
    pts = [e[0] for e in ball.entries.values()]
    n = 0
    ok = True
    for a in pts:
        la = vals[m.canon(a)]
        for b in pts:
            ab = m.canon(m.mul(a, b))
            if ab not in vals:
                continue
            n += 1
            if not m.equal(vals[ab], m.mul(la, vals[m.canon(b)])):
                ok = False
    image = {m.canon(v) for v in vals.values()}
    nontrivial = [v for v in vals.values() if not m.is_identity(v)]
    torsion_free = all(element_order(m, v, order_cap) is None for v in nontrivial)
    return LambdaReport(True, ok, n, len(image), len(image) == 1, torsion_free)


# -- virtual automorphisms of Z^n ------------------------------------------------

@dataclass(frozen=True)
class RationalVirtualAut:
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.matrix)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        if lat.determinant(rows) == 0:
            raise ValueError("singular matrix is not a virtual automorphism")
        object.__setattr__(self, "matrix", rows)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def is_identity(self) -> bool:
        return all(x == (i == j) for i, r in enumerate(self.matrix) for j, x in enumerate(r))

    def denominator(self) -> int:
        from math import lcm
        return lcm(*(x.denominator for r in self.matrix for x in r))

    @classmethod
    def identity(cls, n: int) -> "RationalVirtualAut":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def vaut_compose(f: RationalVirtualAut, g: RationalVirtualAut) -> RationalVirtualAut:
    """``f o g``."""
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    return RationalVirtualAut(tuple(lat.mat_mul(f.matrix, g.matrix)))


def vaut_qi_trivial(f: RationalVirtualAut, R: int) -> Verdict:
    """Trivial in QI(Z^n) iff the matrix is the identity.

    A refutation restricts ``f`` to ``d Z^n`` (``d`` clears denominators) and
    exhibits lattice vectors ``v_k = k d e_j`` whose displacement
    ``(A - I) v_k`` grows linearly in ``k``, so the displacement set is infinite.
    """
    budget = {"radius": R}
    if f.is_identity():
        return Verdict(Status.PROVED, {"kind": "identity_matrix"}, budget)
    n, d = f.dim, f.denominator()
    j = next(c for c in range(n) if any(f.matrix[r][c] != (r == c) for r in range(n)))
    col = [f.matrix[r][j] - (r == j) for r in range(n)]
    steps = max(1, R // d)
    vs, norms = [], []
    for k in range(1, steps + 1):
        v = [0] * n
        v[j] = k * d
        disp = [int(c * k * d) for c in col]
        vs.append(v)
        norms.append(sum(abs(x) for x in disp))
    cert = {
        "kind": "linear_displacement_growth",
        "sublattice_scale": d,
        "direction": j,
        "witness": vs[-1],
        "displacement": [int(c * steps * d) for c in col],
        "displacement_norms": norms,
        "growth_per_step": norms[0],
    }
    return Verdict(Status.REFUTED, cert, budget)
