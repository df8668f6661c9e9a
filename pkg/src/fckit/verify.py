"""Regression checks over the catalog groups, one per acceptance criterion.

Each check returns a ``CheckResult``; ``run_all`` runs the full suite and is
what ``fc-kit verify-paper`` reports.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import catalog
from .amalgam import amalgam_centre, rewrite_reduce
from .autos import (RationalVirtualAut, bounded_test, displacement_in_fc, inner_automorphism,
                    validate_automorphism, vaut_compose, vaut_qi_trivial)
from .fc import centralizer_index, centre_test, conjugation_orbit, fc_membership
from .geometry import certify_qi, enumerate_ball, homomorphism
from .hnn import (HnnExtension, TPower, britton_reduce, fk_tower, hnn_centre, in_subgroup,
                  pinch_reduce, t_power_centralizes)
from .models import GroupModel
from .words import format_word


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float | None
    details: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "seconds": round(self.seconds, 3), "limit_seconds": self.limit, "details": self.details}


class _Log:
    def __init__(self):
        self.ok = True
        self.details = []

    def check(self, cond: bool, what: str):
        self.details.append(("ok " if cond else "FAILED ") + what)
        self.ok = self.ok and bool(cond)


def _timed(number: int, name: str, limit: float | None, body: Callable[[_Log], None]) -> CheckResult:
    log = _Log()
    t0 = time.perf_counter()
    try:
        body(log)
    except Exception as e:   # a crash is a failed check, reported with its message
        log.check(False, f"raised {type(e).__name__}: {e}")
    dt = time.perf_counter() - t0
    if limit is not None:
        log.check(dt < limit, f"runtime {dt:.3f}s < {limit}s")
    return CheckResult(number, name, log.ok, dt, limit, log.details)


def _fmt(m, g):
    return format_word(m.to_word(g))


def _keys(m, xs):
    return {m.canon(x) for x in xs}


# -- 1 ------------------------------------------------------------------------

def _dihedral(log: _Log):
    D = catalog.dihedral_inf()
    y, x = D.word("y"), D.word("x")
    v = fc_membership(D, y)
    log.check(v.proved and _keys(D, map(D.word, v.certificate["orbit"])) == _keys(D, [y, D.inv(y)]),
              "y has closed orbit {y, y^-1}")
    v = fc_membership(D, x)
    log.check(not v.proved, "x is not proved in the FC-centre at the default cap")
    orb = conjugation_orbit(D, x, 10_000)
    pattern = {D.canon(D.mul(x, D.power(y, 2 * k))) for k in range(-200, 201)}
    hits = [e for e in orb.elements if D.canon(e) in pattern]
    log.check(not orb.closed and len(hits) >= 20, f"{len(hits)} distinct conjugates x y^2k")
    phi = validate_automorphism(D, {"x": "x*y", "y": "y"}, {"x": "x*y^-1", "y": "y"})
    b = bounded_test(phi)
    log.check(b.proved and b.certificate["index"] == 2 and b.certificate["displacement_size"] == 2,
              "x -> xy is bounded with index 2 and |S| = 2")


# -- 2 ------------------------------------------------------------------------

def _klein(log: _Log):
    K = catalog.klein_bottle()
    g, t = K.word("g"), K.word("t")
    log.check(centre_test(K, K.word("t^2")), "t^2 is central")
    log.check(not centre_test(K, g), "g is not central")
    v = fc_membership(K, g)
    log.check(v.proved and _keys(K, map(K.word, v.certificate["orbit"])) == _keys(K, [g, K.inv(g)]),
              "g has closed orbit {g, g^-1}")
    orb = conjugation_orbit(K, t, 10_000)
    pattern = {K.canon(K.mul(K.power(g, 2 * a), t)) for a in range(-200, 201)}
    hits = [e for e in orb.elements if K.canon(e) in pattern]
    log.check(not orb.closed and len(hits) >= 20, f"orbit of t exceeds the cap; {len(hits)} conjugates g^2a t")


# -- 3 ------------------------------------------------------------------------

def _sl2z(log: _Log):
    S = catalog.sl2z_amalgam()
    centre = amalgam_centre(S)
    expect = _keys(S, [S.identity(), S.word("a^2")])
    log.check({S.canon(c) for c in centre} == expect, "amalgam centre is {1, a^2}")
    ball = enumerate_ball(S, 6)
    proved, bad = set(), []
    for h in ball.elements():
        v = fc_membership(S, h, witness_steps=10)
        if v.proved:
            proved.add(S.canon(h))
        elif not (v.refuted or not centre_test(S, h)):
            bad.append(_fmt(S, h))
    log.check(proved == expect, f"Proved exactly on {{1, a^2}} in the radius-6 ball ({len(ball)} elements)")
    log.check(not bad, f"every other ball element refuted ({len(bad)} undecided)")


# -- 4 ------------------------------------------------------------------------

def _bs23(log: _Log):
    B = catalog.bs(2, 3)
    log.check(hnn_centre(B).centre.trivial, "centre is trivial")
    tower = fk_tower(B, 6)
    log.check(all(f.trivial for f in tower.fixed), "F_k trivial for k <= 6")
    a2 = B.base.word("a^2")
    log.check(not any(t_power_centralizes(B, a2, k) for k in range(1, 7)), "t^k does not centralize a^2, k <= 6")


# -- 5 ------------------------------------------------------------------------

def _flip(log: _Log):
    F = catalog.hnn_flip()
    tower = fk_tower(F, 6)
    a2 = (2,)
    log.check(tower.fixed[0].trivial, "F_1 is trivial")
    log.check(in_subgroup(F, tower.fixed[1], a2) and not in_subgroup(F, tower.fixed[1], (1,))
              and not tower.fixed[1].trivial, "F_2 = <a^2>")
    log.check(tower.stabilized and tower.union.coords == tower.fixed[1].coords, "F_inf = F_2")
    log.check(hnn_centre(F).centre.trivial, "Fix(phi) and the centre are trivial")
    v = fc_membership(F, F.word("a^2"))
    log.check(v.proved and _keys(F, map(F.word, v.certificate["orbit"])) == _keys(F, [F.word("a^2"), F.word("a^-2")]),
              "a^2 has closed orbit {a^2, a^-2}")


# -- 6 ------------------------------------------------------------------------

def random_element(m: GroupModel, rng: random.Random, max_len: int = 10):
    gens = [s for _, s in m.symmetric_generators()]
    g = m.identity()
    for _ in range(rng.randint(0, max_len)):
        g = m.mul(g, rng.choice(gens))
    return g


def _random_hnn_raw(m: HnnExtension, rng: random.Random, n: int):
    base = [s for _, s in m.base.symmetric_generators()]
    raw = []
    for _ in range(n):
        if rng.random() < 0.4:
            raw.append(TPower(rng.choice((-2, -1, 1, 2))))
        else:
            x = m.base.identity()
            for _ in range(rng.randint(1, 3)):
                x = m.base.mul(x, rng.choice(base))
            raw.append(x)
    return raw


def _confluence(log: _Log, trials: int = 1000, seed: int = 7):
    rng = random.Random(seed)
    for name in ("bs(2,3)", "hnn_flip", "klein_bottle", "bs(1,2)"):
        m = catalog.resolve(name)
        bad = 0
        for _ in range(trials):
            raw = _random_hnn_raw(m, rng, rng.randint(0, 10))
            nf = britton_reduce(m, raw)
            red = pinch_reduce(m, raw, random.Random(rng.random()))
            tl = sum(abs(x.n) for x in red if isinstance(x, TPower))
            if britton_reduce(m, red) != nf or tl != m.t_length(nf):
                bad += 1
        log.check(bad == 0, f"{name}: {trials} random pinch orders agree ({bad} mismatches)")
    for name in ("sl2z_amalgam", "psl2z", "z4_z2_z4", "dihedral_amalgam"):
        m = catalog.resolve(name)
        bad = 0
        for _ in range(trials):
            raw = [(f, rng.randrange(m.spec.factor(f).order()))
                   for f in (rng.choice((1, 2)) for _ in range(rng.randint(0, 12)))]
            ref = m.identity()
            for f, x in raw:
                ref = m.mul(ref, m.from_factor(f, x))
            if rewrite_reduce(m, raw, random.Random(rng.random())) != ref:
                bad += 1
        log.check(bad == 0, f"{name}: {trials} random rewritings agree ({bad} mismatches)")
    for name in ("dihedral_inf", "klein_bottle", "sl2z_amalgam", "psl2z", "bs(2,3)", "hnn_flip",
                 "free(2)", "zn(3)"):
        m = catalog.resolve(name)
        bad = 0
        e = m.identity()
        for _ in range(trials):
            a, b, c = (random_element(m, rng) for _ in range(3))
            ok = (m.equal(m.mul(m.mul(a, b), c), m.mul(a, m.mul(b, c)))
                  and m.is_identity(m.mul(a, m.inv(a))) and m.is_identity(m.mul(m.inv(a), a))
                  and m.equal(m.mul(a, e), a) and m.equal(m.mul(e, a), a))
            bad += not ok
        log.check(bad == 0, f"{name}: group laws on {trials} random triples ({bad} failures)")


# -- 7 ------------------------------------------------------------------------

ORBIT_CASES = [("dihedral_inf", "y"), ("dihedral_inf", "y^3"), ("klein_bottle", "g"),
               ("klein_bottle", "t^2"), ("klein_bottle", "g^3*t^2"), ("sl2z_amalgam", "a^2"),
               ("hnn_flip", "a^2"), ("hnn_flip", "a^-2"), ("psl2z", "1"), ("zn(2)", "x")]

INNER_CASES = [("dihedral_inf", "y"), ("dihedral_inf", "x"), ("dihedral_inf", "y^2"),
               ("klein_bottle", "g"), ("klein_bottle", "t^2"), ("klein_bottle", "t"),
               ("sl2z_amalgam", "a^2"), ("sl2z_amalgam", "a*b"), ("hnn_flip", "a^2"), ("bs(2,3)", "a")]


def _cross(log: _Log, cap: int = 1000):
    for name, w in ORBIT_CASES:
        m = catalog.resolve(name)
        g = m.word(w)
        orb = conjugation_orbit(m, g, cap)
        idx = centralizer_index(m, g, cap)
        log.check(orb.closed and idx == orb.size, f"{name} {w}: |orbit| = {orb.size}, [G:C(g)] = {idx}")
    for name in catalog.AUTOMORPHISMS:
        m, auts = catalog.automorphisms(name)
        for label, phi in auts:
            v = bounded_test(phi, cap)
            if v.proved:
                c = v.certificate
                log.check(c["displacement_saturated"] and c["index"] == c["displacement_size"],
                          f"{name} {label}: index {c['index']} = |S| {c['displacement_size']}")
    for name, w in INNER_CASES:
        m = catalog.resolve(name)
        g = m.word(w)
        b = bounded_test(inner_automorphism(m, g), cap)
        f = fc_membership(m, g, cap)
        same = b.proved == f.proved and (not b.proved or b.certificate["index"] == f.certificate["index"])
        log.check(same, f"{name} inner by {w}: bounded {b.status.value}, FC {f.status.value}")


# -- 8 ------------------------------------------------------------------------

def _displacements(log: _Log, cap: int = 1000):
    for name in catalog.AUTOMORPHISMS:
        m, auts = catalog.automorphisms(name)
        for label, phi in auts:
            if not bounded_test(phi, cap).proved:
                continue
            rep = displacement_in_fc(phi, enumerate_ball(m, 4))
            log.check(rep.passed, f"{name} {label}: all {len(rep.verdicts)} displacements Proved in FC")


# -- 9 ------------------------------------------------------------------------

def _qi_identity(log: _Log):
    D = catalog.dihedral_inf()
    ball = enumerate_ball(D, 4)
    c = certify_qi(lambda g: g, ball, ball)
    log.check((c.lam, c.epsilon, c.codensity) == (1, 0, 0), f"identity map: {(c.lam, c.epsilon, c.codensity)}")


def _qi_inclusion(log: _Log):
    Z = catalog.zn(1)
    f = homomorphism(Z, Z, ["x^2"])
    c = certify_qi(f, enumerate_ball(Z, 8), enumerate_ball(Z, 16))
    log.check((c.lam, c.epsilon, c.codensity) == (2, 0, 1), f"2Z -> Z at R=8: {(c.lam, c.epsilon, c.codensity)}")


def _qi_vaut(log: _Log):
    cases = [
        ((1, 0), (0, 1)), ((2, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (0, 1)),
        ((Fraction(1, 2), 0), (0, 1)), ((Fraction(1, 3), 1), (0, 1)), ((-1, 0), (0, -1)),
    ]
    for mat in cases:
        f = RationalVirtualAut(mat)
        v = vaut_qi_trivial(f, 12)
        ident = f.is_identity()
        ok = v.proved if ident else v.refuted and _linear(v.certificate["displacement_norms"])
        log.check(ok, f"A={[[str(x) for x in r] for r in f.matrix]}: {v.status.value}")
    h = vaut_compose(RationalVirtualAut(((Fraction(1, 2), 0), (0, 1))), RationalVirtualAut(((2, 0), (0, 1))))
    log.check(vaut_qi_trivial(h, 8).proved, "diag(1/2,1) diag(2,1) is QI-trivial")


def _linear(norms) -> bool:
    return len(norms) >= 2 and norms[0] > 0 and all(n == (i + 1) * norms[0] for i, n in enumerate(norms))


CHECKS = [
    (1, "infinite dihedral", 1.0, _dihedral),
    (2, "Klein bottle", 1.0, _klein),
    (3, "SL(2,Z) amalgam", 30.0, _sl2z),
    (4, "BS(2,3)", 5.0, _bs23),
    (5, "<a,t | t^-1 a^2 t = a^-2>", 5.0, _flip),
    (6, "normal-form confluence and group laws", None, _confluence),
    (7, "cross-oracle agreement", None, _cross),
    (8, "displacements lie in the FC-centre", None, _displacements),
    (9, "QI identity map", 1.0, _qi_identity),
    (9, "QI inclusion 2Z -> Z", 1.0, _qi_inclusion),
    (9, "Z^n virtual automorphisms", 1.0, _qi_vaut),
]


def run_all(only: set[int] | None = None) -> list[CheckResult]:
    return [_timed(n, name, limit, body) for n, name, limit, body in CHECKS if only is None or n in only]
