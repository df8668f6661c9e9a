import pytest
from hypothesis import given, settings, strategies as st

from fckit import catalog
from fckit.geometry import (BallBudgetError, DistortionError, WordMetric, certify_qi, enumerate_ball,
                            homomorphism, word_length)
from oracles import brute_ball

SMALL = {
    "z1": catalog.zn(1),
    "z2": catalog.zn(2),
    "free2": catalog.free(2),
    "dinf": catalog.dihedral_inf(),
    "psl2z": catalog.psl2z(),
    "klein": catalog.klein_bottle(),
    "bs12": catalog.bs(1, 2),
    "sl2z": catalog.sl2z_amalgam(),
}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_ball_matches_brute_force(name):
    m = SMALL[name]
    ball = enumerate_ball(m, 4)
    brute = brute_ball(m, 4)
    assert {k: v[1] for k, v in ball.entries.items()} == brute


@pytest.mark.parametrize("name,R,size", [("z1", 3, 7), ("free2", 2, 17), ("dinf", 2, 8), ("z2", 2, 13)])
def test_ball_sizes(name, R, size):
    assert len(enumerate_ball(SMALL[name], R)) == size


def test_free_group_sphere_sizes():
    assert enumerate_ball(catalog.free(2), 4).sphere_sizes() == [1, 4, 12, 36, 108]


@pytest.mark.parametrize("name", sorted(SMALL))
def test_geodesics_evaluate_back(name):
    m = SMALL[name]
    ball = enumerate_ball(m, 4)
    for g in ball.elements():
        w = ball.geodesic(g)
        assert len(w) == ball.length(g) and m.equal(m.eval(w), g)


@pytest.mark.parametrize("name", ["free2", "dinf", "klein", "psl2z"])
@settings(max_examples=30)
@given(data=st.data())
def test_metric_axioms(name, data):
    m = SMALL[name]
    ball = enumerate_ball(m, 3)
    pts = list(ball.elements())
    g, h, k = (data.draw(st.sampled_from(pts)) for _ in range(3))
    d = WordMetric(m)
    assert d.dist(g, h) == d.dist(h, g)
    assert d.dist(g, k) <= d.dist(g, h) + d.dist(h, k)
    assert d.dist(m.mul(k, g), m.mul(k, h)) == d.dist(g, h)
    assert (d.dist(g, h) == 0) == m.equal(g, h)
    assert word_length(ball, g) == d.norm(g)


def test_ball_budget():
    with pytest.raises(BallBudgetError) as e:
        enumerate_ball(catalog.free(2), 6, cap=100)
    assert e.value.radius_reached == 3


def test_qi_identity():
    ball = enumerate_ball(catalog.dihedral_inf(), 4)
    c = certify_qi(lambda g: g, ball, ball)
    assert (c.lam, c.epsilon, c.codensity) == (1, 0, 0)


def test_qi_doubling_inclusion():
    Z = catalog.zn(1)
    f = homomorphism(Z, Z, ["x^2"])
    c = certify_qi(f, enumerate_ball(Z, 8), enumerate_ball(Z, 16))
    assert (c.lam, c.epsilon, c.codensity) == (2, 0, 1)
    assert c.pairs_checked == 17 * 16 // 2


def test_qi_cyclic_subgroup_of_dihedral():
    Z, D = catalog.zn(1), catalog.dihedral_inf()
    f = homomorphism(Z, D, ["y"])
    c = certify_qi(f, enumerate_ball(Z, 6), enumerate_ball(D, 6))
    assert (c.lam, c.epsilon, c.codensity) == (1, 0, 1)


def test_qi_dict_form_and_distortion():
    Z = catalog.zn(1)
    src = enumerate_ball(Z, 4)
    f = {Z.canon(g): Z.power(g, 9) for g in src.elements()}
    with pytest.raises(DistortionError):
        certify_qi(f, src, enumerate_ball(Z, 36), eps_max=2)


def test_homomorphism_rejects_bad_images():
    with pytest.raises(ValueError):
        homomorphism(catalog.dihedral_inf(), catalog.zn(1), {"x": "x", "y": "x"})
    with pytest.raises(ValueError):
        homomorphism(catalog.zn(1), catalog.zn(1), [])
