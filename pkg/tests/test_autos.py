from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fckit import catalog
from fckit.autos import (AutomorphismError, RationalVirtualAut, automorphism_from_json, bounded_test,
                         displacement_in_fc, displacement_set, inner_automorphism, lambda_check,
                         validate_automorphism, vaut_compose, vaut_qi_trivial)
from fckit.fc import Status
from fckit.geometry import enumerate_ball
from fckit.words import Word

D = catalog.dihedral_inf()
PHI_XY = validate_automorphism(D, {"x": "x*y", "y": "y"}, {"x": "x*y^-1", "y": "y"})


def test_dihedral_shift_is_bounded():
    v = bounded_test(PHI_XY)
    c = v.certificate
    assert v.proved and c["index"] == 2 and c["displacement_size"] == 2
    assert sorted(c["displacement"]) == ["1", "y^-1"]


def test_dihedral_shift_displacements_by_hand():
    # phi(y^k) = y^k, phi(x y^k) = x y^(k+1), so displacements are 1 and x y x^-1 = y^-1
    S = displacement_set(PHI_XY, enumerate_ball(D, 6))
    assert {D.canon(s) for s in S.elements.values()} == {D.canon(D.identity()), D.canon(D.word("y^-1"))}
    assert S.saturated


@given(st.lists(st.tuples(st.integers(0, 1), st.sampled_from((1, -1))), max_size=16))
def test_automorphism_is_homomorphism(ls):
    w = Word(D.alphabet, tuple(ls))
    g = D.eval(w)
    assert D.equal(PHI_XY(g), D.eval(PHI_XY.apply_word(w)))
    assert D.equal(PHI_XY.inverse()(PHI_XY(g)), g)


def test_validation_errors():
    with pytest.raises(AutomorphismError):
        validate_automorphism(D, {"x": "y", "y": "y"}, {"x": "y", "y": "y"})
    with pytest.raises(AutomorphismError):
        validate_automorphism(D, {"x": "x"}, {"x": "x", "y": "y"})
    Z2 = catalog.zn(2)
    with pytest.raises(AutomorphismError):
        # x -> 2x is an injective endomorphism but not onto
        validate_automorphism(Z2, {"x": "x^2", "y": "y"}, {"x": "x", "y": "y"})


def test_from_json():
    phi = automorphism_from_json(D, '{"images": {"x": "x*y", "y": "y"}, "inverse_images": {"x": "x*y^-1", "y": "y"}}')
    assert phi.as_dict()["images"] == {"x": "x*y", "y": "y"}


@pytest.mark.parametrize("name", sorted(catalog.AUTOMORPHISMS))
def test_catalog_automorphisms_consistent(name):
    m, auts = catalog.automorphisms(name)
    ball = enumerate_ball(m, 3)
    for _, phi in auts:
        for g in ball.elements():
            assert m.equal(phi.inverse()(phi(g)), g)
        v = bounded_test(phi, 1000)
        if v.proved:
            assert v.certificate["index"] == v.certificate["displacement_size"]
            assert displacement_in_fc(phi, enumerate_ball(m, 3), 1000).passed


def test_inner_matches_fc_index():
    for m, w, idx in [(D, "y", 2), (catalog.klein_bottle(), "g", 2), (catalog.sl2z_amalgam(), "a^2", 1)]:
        v = bounded_test(inner_automorphism(m, m.word(w)), 1000)
        assert v.proved and v.certificate["index"] == idx


def test_unbounded_is_inconclusive():
    v = bounded_test(inner_automorphism(D, D.word("x")), 200)
    assert v.status is Status.INCONCLUSIVE and v.certificate["kind"] == "coset_cap_hit"


def test_lambda_on_central_displacements():
    K = catalog.klein_bottle()
    ident = inner_automorphism(K, K.word("t^2"))
    rep = lambda_check(ident, enumerate_ball(K, 3))
    assert rep.applicable and rep.multiplicative and rep.trivial_on_ball
    rep = lambda_check(inner_automorphism(D, D.word("x")), enumerate_ball(D, 3))
    assert not rep.applicable


def test_lambda_nontrivial():
    Z2 = catalog.zn(2)
    shear = validate_automorphism(Z2, {"x": "x", "y": "x*y"}, {"x": "x", "y": "x^-1*y"})
    rep = lambda_check(shear, enumerate_ball(Z2, 3))
    assert rep.applicable and rep.multiplicative and rep.image_size == 7 and rep.torsion_free_image


def test_vaut_identity_and_refutation():
    assert vaut_qi_trivial(RationalVirtualAut.identity(3), 5).proved
    v = vaut_qi_trivial(RationalVirtualAut(((Fraction(1, 3), 1), (0, 1))), 12)
    c = v.certificate
    assert v.refuted and c["sublattice_scale"] == 3 and c["direction"] == 0
    assert c["displacement_norms"] == [2 * k for k in range(1, 5)]
    with pytest.raises(ValueError):
        RationalVirtualAut(((1, 2), (2, 4)))


fracs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@given(st.lists(fracs, min_size=12, max_size=12))
def test_vaut_composition_associative(xs):
    mats = [((xs[4 * i], xs[4 * i + 1]), (xs[4 * i + 2], xs[4 * i + 3])) for i in range(3)]
    try:
        f, g, h = (RationalVirtualAut(m) for m in mats)
    except ValueError:
        return
    assert vaut_compose(vaut_compose(f, g), h) == vaut_compose(f, vaut_compose(g, h))
    e = RationalVirtualAut.identity(2)
    assert vaut_compose(e, f) == f == vaut_compose(f, e)
