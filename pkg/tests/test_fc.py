import pytest
from hypothesis import given, settings, strategies as st

from fckit import catalog
from fckit.fc import (OracleError, PreconditionError, Status, centralizer_index, centre_test, conjugation_orbit,
                      coset_bfs, fc_membership, orbit_is_stable, psi_homomorphism_check,
                      relative_centralizer_index)
from fckit.geometry import enumerate_ball
from fckit.models import cyclic

D = catalog.dihedral_inf()
K = catalog.klein_bottle()
S = catalog.sl2z_amalgam()


def test_orbit_conjugators_reproduce_elements():
    for m, w in [(D, "y"), (K, "g^3*t^2"), (S, "a*b"), (catalog.hnn_flip(), "a^2")]:
        g = m.word(w)
        orb = conjugation_orbit(m, g, 200)
        for i, c in enumerate(orb.conjugators):
            assert m.equal(m.conjugate(g, m.eval(c)), orb.elements[i])
        if orb.closed:
            assert orbit_is_stable(m, orb.elements)


def test_dihedral_verdicts():
    v = fc_membership(D, D.word("y"))
    assert v.proved and v.certificate["index"] == 2
    v = fc_membership(D, D.word("x"), 2000)
    assert v.status is Status.INCONCLUSIVE and v.certificate["orbit_size_at_cap"] == 2000


def test_sl2z_witness_refutes():
    v = fc_membership(S, S.word("a*b"))
    assert v.refuted and v.certificate["kind"] == "growth_witness"
    assert len(set(v.certificate["conjugates"])) == 10
    assert fc_membership(S, S.word("a^2")).proved


def test_finite_group_everything_fc():
    m = catalog.resolve("z4_z2_z4")
    z6 = cyclic(6)
    for g in z6.elements():
        v = fc_membership(z6, g)
        assert v.proved and v.certificate["index"] == 1
    assert fc_membership(m, m.word("a^2")).proved


@pytest.mark.parametrize("m,w,index", [(D, "y", 2), (D, "y^2", 2), (K, "g", 2), (K, "t^2", 1),
                                        (S, "a^2", 1), (catalog.zn(2), "x", 1)])
def test_centralizer_index_matches_orbit(m, w, index):
    g = m.word(w)
    assert centralizer_index(m, g, 500) == index == conjugation_orbit(m, g, 500).size


@settings(max_examples=25)
@given(st.integers(-6, 6), st.integers(0, 1))
def test_klein_orbit_sizes(a, b):
    # g^a t^(2b): central iff a = 0; otherwise the orbit is {g^a t^2b, g^-a t^2b}
    g = K.word(f"g^{a}*t^{2 * b}")
    orb = conjugation_orbit(K, g, 500)
    assert orb.closed and orb.size == (1 if a == 0 else 2)
    assert centre_test(K, g) == (a == 0)


def test_keyed_coset_bfs_agrees_with_pairwise():
    Z2 = catalog.zn(2)
    # subgroup {(u, v) : u + 2v = 0 mod 5}, index 5
    member = lambda h: (h[0] + 2 * h[1]) % 5 == 0
    assert coset_bfs(Z2, member, 100) == 5
    assert coset_bfs(Z2, member, 100, key=lambda h: (h[0] + 2 * h[1]) % 5) == 5
    with pytest.raises(OracleError):
        coset_bfs(Z2, member, 100, key=lambda h: h[0] % 5)
    assert coset_bfs(Z2, member, 3) is None


def test_coset_bfs_rejects_bad_oracles():
    Z = catalog.zn(1)
    with pytest.raises(OracleError):
        coset_bfs(Z, lambda h: False, 10)
    with pytest.raises(OracleError):
        coset_bfs(Z, lambda h: abs(h[0]) <= 1, 10)


def test_relative_centralizer():
    y = D.word("y")
    K0 = [D.identity()]
    assert relative_centralizer_index(D, y, K0, 100) == centralizer_index(D, y, 100) == 2
    # [y, x] = y^2, so every h has [y, h] in {1, y^2, y^-2}
    K1 = [D.identity(), D.word("y^2"), D.word("y^-2")]
    assert relative_centralizer_index(D, y, K1, 100) == 1
    ball = enumerate_ball(D, 5)
    keys = {D.canon(k) for k in K1}
    assert all(D.canon(D.commutator(y, h)) in keys for h in ball.elements())
    with pytest.raises(OracleError):
        relative_centralizer_index(D, y, [D.word("y^2")], 100)


def test_psi_homomorphism():
    y = D.word("y")
    K1 = [D.identity(), D.word("y^2"), D.word("y^-2")]
    H = [D.word(f"y^{k}") for k in range(-3, 4)]
    rep = psi_homomorphism_check(D, y, H, K1)
    assert rep.ok and rep.pairs_checked == 49
    with pytest.raises(PreconditionError) as e:
        psi_homomorphism_check(D, y, H + [D.word("x")], K1)
    assert e.value.offenders


def test_verdict_json():
    v = fc_membership(D, D.word("y"))
    d = v.as_dict()
    assert d["status"] == "Proved" and d["budget"]["orbit_cap"] == 10_000
    assert '"Proved"' in v.to_json()


def test_relative_centralizer_of_reflection():
    # [x, y^k] = y^-2k and [x, x y^k] = y^2k, so only 1 and x land in {1, y, y^-1}
    x = D.word("x")
    K1 = [D.identity(), D.word("y"), D.word("y^-1")]
    keys = {D.canon(k) for k in K1}
    hits = {D.canon(h) for h in enumerate_ball(D, 6).elements() if D.canon(D.commutator(x, h)) in keys}
    assert hits == {D.canon(D.identity()), D.canon(x)}
    assert relative_centralizer_index(D, x, K1, 200) is None
