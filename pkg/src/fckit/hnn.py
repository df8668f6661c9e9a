"""HNN extensions ``< G, t | t^-1 g t = phi(g), g in D >`` over a finite-table or
free-abelian base ``G``.

Elements are kept in normal form ``(g0, ((n1, r1), ..., (nk, rk)))`` meaning
``g0 t^n1 r1 ... t^nk rk``. After a positive run ``t^n`` the representative is
a right-coset representative of ``phi(D)`` in ``G``; after a negative run it
is one of ``D``. Representatives inside a run are trivial and only the last
one may be trivial. The form is unique.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import lattice as lat
from .amalgam import Inapplicable
from .models import FiniteTableGroup, FreeAbelianGroup, GroupModel, ModelError
from .presentations import Presentation
from .words import Alphabet, Word, format_word, invert_letters


@dataclass(frozen=True)
class TPower:
    """A power of the stable letter inside a raw HNN sequence."""
    n: int


# -- associated-subgroup machinery for the two supported kinds of base -------

class _FiniteAssoc:
    def __init__(self, base: FiniteTableGroup, dom_gens, img_gens):
        self.base = base
        phi = {base.identity(): base.identity()}
        frontier = [base.identity()]
        while frontier:
            nxt = []
            for a in frontier:
                for d, p in zip(dom_gens, img_gens):
                    b, c = base.mul(a, d), base.mul(phi[a], p)
                    if b in phi:
                        if phi[b] != c:
                            raise ModelError("phi does not extend to a homomorphism on the domain")
                    else:
                        phi[b] = c
                        nxt.append(b)
            frontier = nxt
        if len(set(phi.values())) != len(phi):
            raise ModelError("phi is not injective")
        self.phi_map = phi
        self.phi_inv_map = {v: k for k, v in phi.items()}
        self.dom = frozenset(phi)
        self.img = frozenset(phi.values())
        self._split = {-1: self._coset_split(self.dom), 1: self._coset_split(self.img)}

    def _coset_split(self, sub):
        b = self.base
        out = {}
        for g in b.elements():
            if g in out:
                continue
            coset = [b.mul(h, g) for h in sub]
            rep = b.identity() if b.identity() in coset else min(coset)
            rinv = b.inv(rep)
            for x in coset:
                out[x] = (b.mul(x, rinv), rep)
        return out

    def in_dom(self, g):
        return g in self.dom

    def in_img(self, g):
        return g in self.img

    def phi(self, g):
        return self.phi_map[g]

    def phi_inv(self, g):
        return self.phi_inv_map[g]

    def split(self, side: int, g):
        """``g = h * rep`` with ``h`` in the image (side +1) or domain (side -1)."""
        return self._split[side][g]

    def index(self, side: int) -> int | None:
        sub = self.img if side == 1 else self.dom
        return self.base.order() // len(sub)


class _LatticeAssoc:
    def __init__(self, base: FreeAbelianGroup, dom_gens, img_gens):
        self.base = base
        n = base.rank
        self.D = [tuple(v) for v in dom_gens]
        self.P = [tuple(v) for v in img_gens]
        if len(self.D) != len(self.P):
            raise ModelError("need one image per domain generator")
        try:
            self.Dinv = lat.left_inverse(self.D)
            self.Pinv = lat.left_inverse(self.P)
        except ValueError:
            raise ModelError("domain and image generators must be linearly independent") from None
        self.k = len(self.D)
        self.dom_basis = lat.echelon(self.D, n)
        self.img_basis = lat.echelon(self.P, n)
        # phi and its inverse as integer matrices over a common denominator
        self._fwd = self._linear(self.P, self.Dinv)
        self._bwd = self._linear(self.D, self.Pinv)
        # (pivot, row) pairs so split does not rescan for pivots
        self._rows = {s: [(lat._pivot(r), r) for r in b] for s, b in ((1, self.img_basis), (-1, self.dom_basis))}

    def _linear(self, gens, inv):
        n = self.base.rank
        q = [[sum(Fraction(gens[i][r]) * inv[i][c] for i in range(self.k)) for c in range(n)]
             for r in range(n)]
        den = math.lcm(*(x.denominator for row in q for x in row))
        return [[int(x * den) for x in row] for row in q], den

    def _apply(self, lin, g):
        mat, den = lin
        out = []
        for row in mat:
            v, r = divmod(sum(a * b for a, b in zip(row, g)), den)
            if r:
                return None
            out.append(v)
        return tuple(out)

    def coords(self, g, side=-1) -> tuple[int, ...] | None:
        """Integer coefficients of ``g`` on the domain (or image) generators."""
        inv = self.Dinv if side == -1 else self.Pinv
        gens = self.D if side == -1 else self.P
        x = lat.mat_vec(inv, g)
        if any(c.denominator != 1 for c in x):
            return None
        x = tuple(int(c) for c in x)
        return x if self._combo(gens, x) == tuple(g) else None

    def _combo(self, gens, x):
        n = self.base.rank
        return tuple(sum(xi * v[j] for xi, v in zip(x, gens)) for j in range(n))

    def in_dom(self, g):
        return lat.contains(self.dom_basis, g)

    def in_img(self, g):
        return lat.contains(self.img_basis, g)

    # callers only pass domain (resp. image) elements; membership is checked by split
    def phi(self, g):
        y = self._apply(self._fwd, g)
        if y is None:
            raise ValueError(f"{g} is not in the domain of phi")
        return y

    def phi_inv(self, g):
        y = self._apply(self._bwd, g)
        if y is None:
            raise ValueError(f"{g} is not in the image of phi")
        return y

    def split(self, side: int, g):
        rep = g
        for p, row in self._rows[side]:
            q = rep[p] // row[p]
            if q:
                rep = tuple(a - q * b for a, b in zip(rep, row))
        return tuple(a - b for a, b in zip(g, rep)), rep

    def index(self, side: int) -> int | None:
        return lat.index_in_full(self.img_basis if side == 1 else self.dom_basis, self.base.rank)


# -- the model ---------------------------------------------------------------

class HnnExtension(GroupModel):
    def __init__(self, base: FiniteTableGroup | FreeAbelianGroup, dom_generators: Sequence,
                 phi_images: Sequence, stable: str = "t"):
        self.base = base
        if len(dom_generators) != len(phi_images):
            raise ModelError("need one image per domain generator")
        if isinstance(base, FiniteTableGroup):
            self.assoc = _FiniteAssoc(base, list(dom_generators), list(phi_images))
        elif isinstance(base, FreeAbelianGroup):
            self.assoc = _LatticeAssoc(base, list(dom_generators), list(phi_images))
        else:
            raise ModelError("HNN base must be a finite-table or free-abelian group")
        self.dom_generators = list(dom_generators)
        self.phi_images = list(phi_images)
        self.alphabet = Alphabet(base.alphabet.names + (stable,))
        self._t = len(base.alphabet)

    # -- normal form arithmetic

    def _prepend_t(self, eps: int, elem):
        c, syl = elem
        a = self.assoc
        h, r = a.split(eps, c)
        c2 = a.phi_inv(h) if eps == 1 else a.phi(h)
        if r != self.base.identity():
            return (c2, ((eps, r),) + syl)
        if not syl:
            return (c2, ((eps, r),))
        n1, r1 = syl[0]
        n = n1 + eps
        if n == 0:
            return (self.base.mul(c2, r1), syl[1:])
        return (c2, ((n, r1),) + syl[1:])

    def _prepend_base(self, b, elem):
        return (self.base.mul(b, elem[0]), elem[1])

    def _prepend_run(self, n: int, elem):
        eps = 1 if n > 0 else -1
        for _ in range(abs(n)):
            elem = self._prepend_t(eps, elem)
        return elem

    def identity(self):
        return (self.base.identity(), ())

    def mul(self, a, b):
        out = b
        for n, r in reversed(a[1]):
            out = self._prepend_run(n, self._prepend_base(r, out))
        return self._prepend_base(a[0], out)

    def inv(self, a):
        b = self.base
        out = (b.inv(a[0]), ())
        for n, r in a[1]:
            out = self._prepend_base(b.inv(r), self._prepend_run(-n, out))
        return out

    def generator(self, i):
        if i == self._t:
            return self.t_power(1)
        return (self.base.generator(i), ())

    def t_power(self, n: int):
        return self._prepend_run(n, self.identity())

    def base_element(self, g):
        return (g, ())

    def to_word(self, g) -> Word:
        letters = self.base.to_word(g[0]).letters
        for n, r in g[1]:
            letters += ((self._t, 1 if n > 0 else -1),) * abs(n) + self.base.to_word(r).letters
        return Word(self.alphabet, letters)

    def runs(self, g):
        out = list(self.base.runs(g[0]))
        for n, r in g[1]:
            out.append((self._t, 1 if n > 0 else -1, abs(n)))
            out.extend(self.base.runs(r))
        return out

    def presentation(self) -> Presentation:
        a = self.alphabet
        rels = [Word(a, r.letters) for r in self.base.presentation().relators]
        t = self._t
        for d, p in zip(self.dom_generators, self.phi_images):
            u = self.base.to_word(d).letters
            v = self.base.to_word(p).letters
            rels.append(Word(a, ((t, -1),) + u + ((t, 1),) + invert_letters(v)))
        return Presentation(a, tuple(rels))

    @staticmethod
    def t_length(g) -> int:
        return sum(abs(n) for n, _ in g[1])

    def in_base(self, g) -> bool:
        return not g[1]

    def index(self, side: int = -1) -> int | None:
        """Index of the domain (side -1) or image (side +1) in the base; None if infinite."""
        return self.assoc.index(side)

    def infinite_conjugacy_witness(self, g, m_max: int):
        """Conjugates ``s^-m g s^m`` by a generator whose t-length grows linearly.

        t-length is an invariant of the element (Britton), so distinct
        lengths certify distinct conjugates.
        """
        from .amalgam import GrowthWitness
        L0 = self.t_length(g)
        for _, s in self.symmetric_generators():
            si = self.inv(s)
            cur, lengths, conj = g, [], []
            for _ in range(m_max):
                cur = self.mul(self.mul(si, cur), s)
                conj.append(cur)
                lengths.append(self.t_length(cur))
            delta = lengths[0] - L0
            if delta > 0 and lengths == [L0 + delta * m for m in range(1, m_max + 1)]:
                return GrowthWitness(g, s, conj, lengths, f"s^-m g s^m, t-length +{delta} per step")
        return None

    def __repr__(self):
        return f"HnnExtension(base={self.base!r}, dom={self.dom_generators}, phi={self.phi_images})"


def hnn_mul(model: HnnExtension, x, y):
    return model.mul(x, y)


def hnn_inv(model: HnnExtension, x):
    return model.inv(x)


def britton_reduce(model: HnnExtension, raw: Sequence) -> Any:
    """Normal form of a raw product of base elements and ``TPower`` items."""
    out = model.identity()
    for item in reversed(list(raw)):
        if isinstance(item, TPower):
            out = model._prepend_run(item.n, out)
        else:
            out = model._prepend_base(item, out)
    return out


def pinch_reduce(model: HnnExtension, raw: Sequence, rng: random.Random | None = None) -> list:
    """Britton-reduce a raw sequence by applying pinches in random order.

    Returns the reduced sequence (base elements and unit ``TPower`` items);
    independent of the normal-form routine, used as a confluence check.
    """
    rng = rng or random.Random(0)
    a = model.assoc
    b = model.base
    toks: list = []
    for item in raw:
        if isinstance(item, TPower):
            toks.extend([TPower(1 if item.n > 0 else -1)] * abs(item.n))
        else:
            toks.append(item)
    while True:
        # merge base runs and drop identities
        merged: list = []
        for x in toks:
            if not isinstance(x, TPower) and merged and not isinstance(merged[-1], TPower):
                merged[-1] = b.mul(merged[-1], x)
            else:
                merged.append(x)
        toks = [x for x in merged if isinstance(x, TPower) or x != b.identity()]
        sites = []
        for i, x in enumerate(toks):
            if not isinstance(x, TPower):
                continue
            if i + 1 < len(toks) and isinstance(toks[i + 1], TPower) and toks[i + 1].n == -x.n:
                sites.append((i, 2, None))
            elif (i + 2 < len(toks) and not isinstance(toks[i + 1], TPower)
                  and isinstance(toks[i + 2], TPower) and toks[i + 2].n == -x.n):
                g = toks[i + 1]
                if x.n == -1 and a.in_dom(g):
                    sites.append((i, 3, a.phi(g)))
                elif x.n == 1 and a.in_img(g):
                    sites.append((i, 3, a.phi_inv(g)))
        if not sites:
            return toks
        i, width, repl = rng.choice(sites)
        toks[i:i + width] = [] if repl is None else [repl]


# -- fixed-point subgroups ---------------------------------------------------

@dataclass
class SubgroupData:
    """A subgroup of the base: generators always, elements when finite."""
    generators: list
    elements: list | None = None
    coords: list | None = field(default=None, repr=False)

    @property
    def trivial(self) -> bool:
        return not self.generators


def _fmt(model, g):
    return format_word(model.base.to_word(g))


@dataclass
class CentreReport:
    applicable: bool
    centre: SubgroupData | None
    note: str = ""

    def as_dict(self, model) -> dict:
        d = {"applicable": self.applicable, "note": self.note}
        if self.centre is not None:
            d["generators"] = [_fmt(model, g) for g in self.centre.generators]
            d["trivial"] = self.centre.trivial
        return d


def _require_proper(model: HnnExtension):
    i0, i1 = model.index(-1), model.index(1)
    if i0 == 1 and i1 == 1:
        raise Inapplicable("domain and image both equal the base group (index 1); "
                           "the centre formula fails here, e.g. the Klein bottle group has "
                           "centre <t^2> although Fix(phi) is trivial")


def fixed_subgroup(model: HnnExtension) -> SubgroupData:
    """Fix(phi) inside the domain."""
    a = model.assoc
    if isinstance(a, _FiniteAssoc):
        els = sorted(g for g in a.dom if a.phi(g) == g)
        return _finite_subgroup_data(model.base, els)
    n = model.base.rank
    diff = [[a.P[j][i] - a.D[j][i] for j in range(a.k)] for i in range(n)]
    ker = lat.integer_kernel(diff, a.k)
    return SubgroupData([a._combo(a.D, x) for x in ker], None if ker else [model.base.identity()], ker)


def _finite_subgroup_data(base: FiniteTableGroup, els) -> SubgroupData:
    gens: list = []
    span = {base.identity()}
    for g in els:
        if g not in span:
            gens.append(g)
            span = base.subgroup_closure(gens)
    return SubgroupData(gens, sorted(els))


def hnn_centre(model: HnnExtension) -> CentreReport:
    """Centre as ``Z(base) & Fix(phi)``; valid when a side has index > 1."""
    try:
        _require_proper(model)
    except Inapplicable as e:
        return CentreReport(False, None, str(e))
    fix = fixed_subgroup(model)
    if isinstance(model.base, FiniteTableGroup):
        z = set(model.base.centre())
        els = [g for g in fix.elements if g in z]
        return CentreReport(True, _finite_subgroup_data(model.base, els))
    return CentreReport(True, fix)


@dataclass
class FkTower:
    k_max: int
    domains: list       # domains[k-1] = Gamma_{0,k}
    fixed: list         # fixed[k-1] = F_k
    union: SubgroupData  # subgroup generated by F_1..F_kmax
    stabilized: bool

    def F(self, k: int) -> SubgroupData:
        return self.fixed[k - 1]


def fk_tower(model: HnnExtension, k_max: int) -> FkTower:
    """Iterated domains ``Gamma_{0,k}`` and fixed groups ``F_k`` for ``k <= k_max``."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    a = model.assoc
    if isinstance(a, _FiniteAssoc):
        return _fk_finite(model, a, k_max)
    return _fk_lattice(model, a, k_max)


def _iterate(a, g, k):
    for _ in range(k):
        g = a.phi(g)
    return g


def _fk_finite(model, a: _FiniteAssoc, k_max):
    base = model.base
    domains, fixed, unions = [], [], []
    dom = set(a.dom)
    acc = {base.identity()}
    for k in range(1, k_max + 1):
        if k > 1:
            dom = {g for g in a.dom if a.phi(g) in dom}
        fk = sorted(g for g in dom if _iterate(a, g, k) == g)
        domains.append(_finite_subgroup_data(base, sorted(dom)))
        fixed.append(_finite_subgroup_data(base, fk))
        acc = base.subgroup_closure(acc | set(fk))
        unions.append(frozenset(acc))
    stable = len(unions) >= 3 and unions[-1] == unions[-2] == unions[-3]
    return FkTower(k_max, domains, fixed, _finite_subgroup_data(base, sorted(unions[-1])), stable)


def _fk_lattice(model, a: _LatticeAssoc, k_max):
    k, n = a.k, model.base.rank
    ident = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    coord_phi = lat.mat_mul(a.Dinv, [tuple(a.P[j][i] for j in range(k)) for i in range(n)])
    P_cols = [[a.P[j][i] for j in range(k)] for i in range(n)]   # n x k
    D_cols = [[a.D[j][i] for j in range(k)] for i in range(n)]
    domains, fixed, unions = [], [], []
    L = lat.echelon(ident, k)
    power = [tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k)]   # coord_phi^(j-1)
    acc: list = []
    for j in range(1, k_max + 1):
        if j > 1:
            # x with P x in D * L
            DB = [[sum(D_cols[i][c] * b[c] for c in range(k)) for b in L] for i in range(n)]
            M = [P_cols[i] + [-v for v in DB[i]] for i in range(n)]
            ker = lat.integer_kernel(M, k + len(L))
            L = lat.echelon([x[:k] for x in ker], k) if ker else []
            power = lat.mat_mul(coord_phi, power)
        # F_j: x = B^T z in L with P power x = D x
        PM = lat.mat_mul(P_cols, power)
        diff = [[PM[i][c] - D_cols[i][c] for c in range(k)] for i in range(n)]
        if L:
            Bt = [[b[c] for b in L] for c in range(k)]
            rel = lat.mat_mul(diff, Bt)
            zk = lat.integer_kernel(rel, len(L))
            fx = lat.echelon([tuple(sum(z[i] * L[i][c] for i in range(len(L))) for c in range(k)) for z in zk], k) if zk else []
        else:
            fx = []
        domains.append(_lattice_data(model, a, L))
        fixed.append(_lattice_data(model, a, fx))
        acc = lat.echelon(acc + fx, k) if (acc or fx) else []
        unions.append(acc)
    stable = len(unions) >= 3 and unions[-1] == unions[-2] == unions[-3]
    return FkTower(k_max, domains, fixed, _lattice_data(model, a, unions[-1]), stable)


def _lattice_data(model, a, coords_basis):
    gens = [a._combo(a.D, x) for x in coords_basis]
    return SubgroupData(gens, None if gens else [model.base.identity()], list(coords_basis))


def in_subgroup(model: HnnExtension, data: SubgroupData, g) -> bool:
    a = model.assoc
    if data.elements is not None:
        return g in data.elements
    x = a.coords(g, -1)
    return x is not None and lat.contains(data.coords, x)


def t_power_centralizes(model: HnnExtension, g, k: int) -> bool:
    """True iff ``t^k`` commutes with the base element ``g``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    c = britton_reduce(model, [TPower(k), g, TPower(-k), model.base.inv(g)])
    return model.is_identity(c)


@dataclass
class FcBoundReport:
    applicable: bool
    bound: SubgroupData | None
    exact: bool = False
    note: str = ""

    def as_dict(self, model) -> dict:
        d = {"applicable": self.applicable, "exact": self.exact, "note": self.note}
        if self.bound is not None:
            d["bound_generators"] = [_fmt(model, g) for g in self.bound.generators]
        return d


def hnn_fc_bound(model: HnnExtension, tower: FkTower) -> FcBoundReport:
    """Superset ``K(base) & F_inf`` of the FC-centre, exact when ``F_inf = Fix(phi)``
    is normal in the base."""
    try:
        _require_proper(model)
    except Inapplicable as e:
        return FcBoundReport(False, None, note=str(e))
    # the base is finite or abelian, so its FC-centre is all of it
    bound = tower.union
    fix = tower.F(1)
    same = _same(model, bound, fix)
    normal = _is_normal(model, fix)
    note = "" if tower.stabilized else "F_inf approximation not yet stable at k_max"
    return FcBoundReport(True, bound, exact=same and normal and tower.stabilized, note=note)


def _same(model, x: SubgroupData, y: SubgroupData) -> bool:
    if x.elements is not None and y.elements is not None:
        return sorted(x.elements) == sorted(y.elements)
    if x.coords is not None and y.coords is not None:
        return list(x.coords) == list(y.coords)
    return False


def _is_normal(model, sub: SubgroupData) -> bool:
    base = model.base
    if isinstance(base, FreeAbelianGroup):
        return True
    s = set(sub.elements)
    return all(base.mul(base.mul(g, h), base.inv(g)) in s for g in base.elements() for h in s)


# -- JSON --------------------------------------------------------------------

def base_from_json(doc):
    if isinstance(doc, dict) and "free_abelian" in doc:
        return FreeAbelianGroup(int(doc["free_abelian"]), doc.get("names"))
    return FiniteTableGroup.from_json(doc)


def hnn_from_json(doc) -> HnnExtension:
    """``{base, dom_generators: [word...], phi_images: [word...], stable?}``."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    base = base_from_json(doc["base"])
    dom = [base.word(w) for w in doc["dom_generators"]]
    img = [base.word(w) for w in doc["phi_images"]]
    return HnnExtension(base, dom, img, doc.get("stable", "t"))
