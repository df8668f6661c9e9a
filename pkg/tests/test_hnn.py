import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fckit import catalog
from fckit.hnn import (TPower, britton_reduce, fixed_subgroup, fk_tower, hnn_centre, hnn_fc_bound,
                       hnn_from_json, in_subgroup, pinch_reduce, t_power_centralizes)
from fckit.models import ModelError
from fckit.words import Word
from oracles import BS23_GENS, eval_matrices, klein_eval

KLEIN = catalog.klein_bottle()
BS23 = catalog.bs(2, 3)
BS12 = catalog.bs(1, 2)
FLIP = catalog.hnn_flip()

# a: x -> x + 1, t: x -> x / 2 gives a faithful copy of BS(1,2)
BS12_GENS = {"a": ((1, 1), (0, 1)), "t": ((Fraction(1, 2), 0), (0, 1))}


def words(m, max_size=14):
    n = len(m.alphabet)
    return st.lists(st.tuples(st.integers(0, n - 1), st.sampled_from((1, -1))), max_size=max_size).map(
        lambda ls: Word(m.alphabet, tuple(ls)))


@given(words(KLEIN), words(KLEIN))
def test_klein_matches_closed_form(u, v):
    names = KLEIN.alphabet.names
    assert KLEIN.equal(KLEIN.eval(u), KLEIN.eval(v)) == (klein_eval(u, names) == klein_eval(v, names))


@given(words(BS12), words(BS12))
def test_bs12_matches_affine_maps(u, v):
    names = BS12.alphabet.names
    same = eval_matrices(u, BS12_GENS, names) == eval_matrices(v, BS12_GENS, names)
    assert BS12.equal(BS12.eval(u), BS12.eval(v)) == same


@given(words(BS23))
def test_bs23_normal_form_preserves_affine_image(u):
    names = BS23.alphabet.names
    nf = BS23.to_word(BS23.eval(u))
    assert eval_matrices(nf, BS23_GENS, names) == eval_matrices(u, BS23_GENS, names)


def test_bs23_pinches():
    assert BS23.equal(BS23.word("t^-1*a^2*t"), BS23.word("a^3"))
    assert BS23.equal(BS23.word("t*a^3*t^-1"), BS23.word("a^2"))
    # no pinch: a is not in <a^2>
    g = BS23.word("t^-1*a*t")
    assert BS23.t_length(g) == 2
    assert BS23.t_length(BS23.word("t^-1*a^4*t")) == 0
    assert BS23.equal(BS23.word("t^-1*a^4*t"), BS23.word("a^6"))


def _raw(m, rng, n):
    out = []
    for _ in range(n):
        if rng.random() < 0.5:
            out.append(TPower(rng.choice((1, -1))))
        else:
            out.append(m.base.eval(m.base.alphabet.word(f"a^{rng.randint(-6, 6)}")))
    return out


@pytest.mark.parametrize("m", [BS23, BS12, FLIP, catalog.bs(2, 2)], ids=repr)
def test_pinch_order_confluence(m):
    rng = random.Random(7)
    for _ in range(200):
        raw = _raw(m, rng, rng.randint(0, 14))
        nf = britton_reduce(m, raw)
        red = pinch_reduce(m, raw, random.Random(rng.random()))
        assert britton_reduce(m, red) == nf
        assert sum(1 for x in red if isinstance(x, TPower)) == m.t_length(nf)


def test_centres():
    assert not hnn_centre(KLEIN).applicable
    assert hnn_centre(BS23).centre.trivial
    assert hnn_centre(FLIP).centre.trivial
    z = hnn_centre(catalog.bs(2, 2)).centre
    assert [FLIP.base.to_word(g) for g in z.generators] == [FLIP.base.alphabet.word("a^2")]


def test_fk_examples():
    t = fk_tower(BS23, 6)
    assert all(f.trivial for f in t.fixed) and t.stabilized
    t = fk_tower(FLIP, 6)
    base = FLIP.base
    assert t.F(1).trivial
    assert [base.to_word(g) for g in t.F(2).generators] == [base.alphabet.word("a^2")]
    assert [base.to_word(g) for g in t.union.generators] == [base.alphabet.word("a^2")]
    assert t.stabilized
    assert fixed_subgroup(FLIP).trivial
    rep = hnn_fc_bound(FLIP, t)
    assert rep.applicable and not rep.exact


@pytest.mark.parametrize("m", [BS23, FLIP, catalog.bs(2, 2), catalog.bs(4, 2), catalog.bs(2, -2)], ids=repr)
def test_t_power_agrees_with_fk(m):
    t = fk_tower(m, 6)
    for j in range(-8, 9):
        g = m.base.eval(m.base.alphabet.word(f"a^{j}"))
        for k in range(1, 7):
            assert t_power_centralizes(m, g, k) == in_subgroup(m, t.F(k), g), (j, k)


def test_finite_base():
    m = hnn_from_json({"base": {"cyclic": 6}, "dom_generators": ["a^2"], "phi_images": ["a^4"]})
    assert m.index(-1) == 2
    assert fixed_subgroup(m).elements == [m.base.identity()]
    assert hnn_centre(m).centre.trivial
    # inversion has order 2 on <a^2>, so F_2 is all of it
    assert len(fk_tower(m, 4).F(2).elements) == 3
    same = hnn_from_json({"base": {"cyclic": 6}, "dom_generators": ["a^3"], "phi_images": ["a^3"]})
    assert len(hnn_centre(same).centre.elements) == 2


def test_bad_hnn():
    with pytest.raises(ModelError):
        hnn_from_json({"base": {"cyclic": 6}, "dom_generators": ["a^2"], "phi_images": ["a^3"]})
    with pytest.raises(ValueError):
        catalog.bs(0, 2)
