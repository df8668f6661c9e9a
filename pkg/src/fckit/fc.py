"""Certified FC-centre and centre computations.

An element lies in the FC-centre when it has finitely many conjugates,
equivalently when its centralizer has finite index. Membership is only
semi-decidable from a model, so answers are three-valued ``Verdict``s:
``Proved`` and ``Refuted`` always carry a checkable certificate, and a
budget running out is reported as ``Inconclusive``.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Hashable, Iterable

from .models import GroupModel
from .words import Word, format_word

DEFAULT_ORBIT_CAP = 10_000
DEFAULT_COSET_CAP = 10_000
DEFAULT_WITNESS_STEPS = 10


def default_cap(fallback: int) -> int:
    env = os.environ.get("FC_KIT_CAP")
    return int(env) if env else fallback


class Status(str, Enum):
    PROVED = "Proved"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class Verdict:
    status: Status
    certificate: dict = field(default_factory=dict)
    budget: dict = field(default_factory=dict)

    @property
    def proved(self) -> bool:
        return self.status is Status.PROVED

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    def as_dict(self) -> dict:
        return {"status": self.status.value, "certificate": self.certificate, "budget": self.budget}

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)


class OracleError(ValueError):
    """A membership oracle or finite set failed its subgroup sanity checks."""


# -- conjugation orbits ------------------------------------------------------

@dataclass
class OrbitResult:
    seed: Any
    elements: list
    parents: list               # (index of parent orbit element, letter) or None
    closed: bool
    cap: int
    model: GroupModel = field(repr=False, default=None)

    @property
    def size(self) -> int:
        return len(self.elements)

    def conjugator(self, i: int) -> Word:
        """Word ``w`` with ``w * seed * w^-1 == elements[i]``."""
        letters = []
        while self.parents[i] is not None:
            i, letter = self.parents[i]
            letters.append(letter)
        return Word(self.model.alphabet, tuple(letters))

    @property
    def conjugators(self) -> list[Word]:
        return [self.conjugator(i) for i in range(self.size)]


def conjugation_orbit(m: GroupModel, g, cap: int | None = None) -> OrbitResult:
    """Closure of ``{g}`` under ``h -> s h s^-1`` for generators and inverses ``s``."""
    cap = default_cap(DEFAULT_ORBIT_CAP) if cap is None else cap
    if cap < 1:
        raise ValueError("cap must be >= 1")
    steps = [(w.letters[0], s, m.inv(s)) for w, s in m.symmetric_generators()]
    seen = {m.canon(g)}
    elements, parents = [g], [None]
    head = 0
    while head < len(elements):
        h = elements[head]
        for letter, s, si in steps:
            x = m.mul(m.mul(s, h), si)
            k = m.canon(x)
            if k in seen:
                continue
            if len(elements) >= cap:
                return OrbitResult(g, elements, parents, False, cap, m)
            seen.add(k)
            elements.append(x)
            parents.append((head, letter))
        head += 1
    return OrbitResult(g, elements, parents, True, cap, m)


def orbit_is_stable(m: GroupModel, elements: Iterable) -> bool:
    keys = {m.canon(x) for x in elements}
    for x in elements:
        for _, s in m.symmetric_generators():
            if m.canon(m.conjugate(x, s)) not in keys:
                return False
    return True


# -- coset enumeration with a membership oracle ------------------------------

def coset_bfs(m: GroupModel, member: Callable[[Any], bool], cap: int | None = None,
              sample_check: int = 12, rng: random.Random | None = None,
              key: Callable[[Any], Hashable] | None = None) -> int | None:
    """Index of the subgroup ``{h : member(h)}``, or None when more than ``cap``
    right cosets are found.

    Cosets ``H a`` and ``H b`` coincide iff ``member(a b^-1)``. Each new
    candidate is tested against every representative, so the cost is
    quadratic in the index. ``key`` may supply an exact coset invariant
    (``key(a) == key(b)`` iff ``H a == H b``); the search is then linear and
    the invariant is spot-checked against ``member``.
    """
    cap = default_cap(DEFAULT_COSET_CAP) if cap is None else cap
    if not member(m.identity()):
        raise OracleError("membership oracle rejects the identity")
    steps = [s for _, s in m.symmetric_generators()]
    reps = [m.identity()]
    rep_inv = [m.identity()]
    keys = {key(m.identity()): 0} if key else None
    head = 0
    while head < len(reps):
        a = reps[head]
        head += 1
        for s in steps:
            b = m.mul(a, s)
            if key:
                kb = key(b)
                if kb in keys:
                    continue
            elif any(member(m.mul(b, ri)) for ri in rep_inv):
                continue
            if len(reps) >= cap:
                return None
            if key:
                keys[kb] = len(reps)
            reps.append(b)
            rep_inv.append(m.inv(b))
    _spot_check_subgroup(m, member, reps, sample_check, rng)
    if key:
        _spot_check_key(m, member, key, reps, sample_check, rng)
    return len(reps)


def _spot_check_key(m, member, key, reps, n, rng):
    rng = rng or random.Random(2)
    idx = list(range(len(reps)))
    for _ in range(n):
        i, j = rng.choice(idx), rng.choice(idx)
        if i != j and member(m.mul(reps[i], m.inv(reps[j]))):
            raise OracleError("coset key separates two elements of the same coset")
        s = rng.choice(m.symmetric_generators())[1]
        b = m.mul(reps[i], s)
        j = next(k for k, r in enumerate(reps) if key(r) == key(b))
        if not member(m.mul(b, m.inv(reps[j]))):
            raise OracleError("coset key merges two different cosets")


def _spot_check_subgroup(m, member, reps, n, rng):
    # elements of H found as a s b^-1 between coset representatives
    rng = rng or random.Random(1)
    hs = []
    steps = [s for _, s in m.symmetric_generators()]
    rep_inv = [m.inv(r) for r in reps]
    for a in reps:
        for s in steps:
            b = m.mul(a, s)
            for ri in rep_inv:
                h = m.mul(b, ri)
                if member(h):
                    hs.append(h)
                    break
    hs = rng.sample(hs, min(n, len(hs)))
    for x in hs:
        if not member(m.inv(x)):
            raise OracleError("membership oracle is not closed under inverses")
        for y in hs:
            if not member(m.mul(x, y)):
                raise OracleError("membership oracle is not closed under products")


def centralizer_index(m: GroupModel, g, cap: int | None = None) -> int | None:
    return coset_bfs(m, lambda h: m.commutes(h, g), cap)


# -- centre and FC-centre ----------------------------------------------------

def centre_test(m: GroupModel, g) -> bool:
    return all(m.commutes(g, s) for _, s in m.generators())


def _fmt(m, g) -> str:
    return format_word(m.to_word(g))


def fc_membership(m: GroupModel, g, orbit_cap: int | None = None,
                  witness_steps: int = DEFAULT_WITNESS_STEPS) -> Verdict:
    """Decide ``g in K(G)`` within budget.

    A model-specific growth witness is tried first (cheap when it exists),
    then the conjugation orbit is closed up to ``orbit_cap``.
    """
    orbit_cap = default_cap(DEFAULT_ORBIT_CAP) if orbit_cap is None else orbit_cap
    budget = {"orbit_cap": orbit_cap, "witness_steps": witness_steps}
    w = m.infinite_conjugacy_witness(g, witness_steps)
    if w is not None:
        keys = {m.canon(c) for c in w.conjugates}
        if len(keys) == len(w.conjugates):
            cert = {"kind": "growth_witness"}
            cert.update(w.as_dict(m))
            return Verdict(Status.REFUTED, cert, budget)
    orb = conjugation_orbit(m, g, orbit_cap)
    if orb.closed:
        if not orbit_is_stable(m, orb.elements):
            raise AssertionError("closed orbit is not stable under conjugation")
        cert = {
            "kind": "closed_orbit",
            "index": orb.size,
            "orbit": [_fmt(m, x) for x in orb.elements],
            "conjugators": [format_word(c) for c in orb.conjugators],
        }
        return Verdict(Status.PROVED, cert, budget)
    cert = {
        "kind": "orbit_cap_hit",
        "orbit_size_at_cap": orb.size,
        "orbit_sample": [_fmt(m, x) for x in orb.elements[:20]],
    }
    return Verdict(Status.INCONCLUSIVE, cert, budget)


# -- relative centralizers (FC-centre of a quotient by a finite subgroup) -----

def _check_finite_set(m: GroupModel, K: Iterable) -> list:
    K = list(K)
    keys = {m.canon(k) for k in K}
    if m.canon(m.identity()) not in keys:
        raise OracleError("finite set must contain the identity")
    if any(m.canon(m.inv(k)) not in keys for k in K):
        raise OracleError("finite set must be closed under inverses")
    return K


def relative_centralizer_index(m: GroupModel, g, K: Iterable, cap: int | None = None) -> int | None:
    """Index of ``{h : [g, h] in K}`` with ``[a, b] = a b a^-1 b^-1``."""
    K = _check_finite_set(m, K)
    keys = {m.canon(k) for k in K}
    return coset_bfs(m, lambda h: m.canon(m.commutator(g, h)) in keys, cap)


@dataclass
class PsiReport:
    ok: bool
    pairs_checked: int
    failures: list = field(default_factory=list)


class PreconditionError(ValueError):
    def __init__(self, message, offenders):
        super().__init__(message)
        self.offenders = offenders


def psi_homomorphism_check(m: GroupModel, g, H: Iterable, K: Iterable) -> PsiReport:
    """Check that ``h -> [g, h]`` is multiplicative on ``H``.

    Every ``h`` must satisfy ``[g, h] in K`` and centralize ``K``.
    """
    K = _check_finite_set(m, K)
    keys = {m.canon(k) for k in K}
    H = list(H)
    bad = []
    for h in H:
        if m.canon(m.commutator(g, h)) not in keys:
            bad.append((_fmt(m, h), "[g,h] not in K"))
        elif not all(m.commutes(h, k) for k in K):
            bad.append((_fmt(m, h), "h does not centralize K"))
    if bad:
        raise PreconditionError("elements outside C(g;K) or not centralizing K", bad)
    fails = []
    for a in H:
        pa = m.commutator(g, a)
        for b in H:
            lhs = m.commutator(g, m.mul(a, b))
            if not m.equal(lhs, m.mul(pa, m.commutator(g, b))):
                fails.append((_fmt(m, a), _fmt(m, b)))
    return PsiReport(not fails, len(H) ** 2, fails)
