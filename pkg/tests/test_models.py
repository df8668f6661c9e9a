import itertools

import pytest
from hypothesis import given, strategies as st

from fckit import catalog
from fckit.models import (DirectProductGroup, FiniteTableGroup, FreeAbelianGroup, FreeGroup,
                          InfiniteDihedral, ModelError, cyclic, element_order)
from fckit.presentations import relator_holds
from fckit.words import Word, WordError, concat
from oracles import dihedral_affine


def s3_table():
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
    return table, idx[(1, 0, 2)], idx[(1, 2, 0)]


S3_TABLE, S3_S, S3_R = s3_table()

MODELS = {
    "z6": cyclic(6),
    "s3": FiniteTableGroup(S3_TABLE, [S3_S, S3_R], ["s", "r"]),
    "z3": FreeAbelianGroup(3),
    "f2": FreeGroup(2),
    "dinf": InfiniteDihedral(),
    "prod": DirectProductGroup(cyclic(4), FreeAbelianGroup(1, ("u",))),
    "sl2z": catalog.sl2z_amalgam(),
    "klein": catalog.klein_bottle(),
    "bs23": catalog.bs(2, 3),
}


def word_strategy(m, max_size=12):
    n = len(m.alphabet)
    return st.lists(st.tuples(st.integers(0, n - 1), st.sampled_from((1, -1))), max_size=max_size).map(
        lambda ls: Word(m.alphabet, tuple(ls)))


@pytest.mark.parametrize("name", sorted(MODELS))
@given(data=st.data())
def test_group_laws(name, data):
    m = MODELS[name]
    ws = word_strategy(m)
    a, b, c = (m.eval(data.draw(ws)) for _ in range(3))
    assert m.equal(m.mul(m.mul(a, b), c), m.mul(a, m.mul(b, c)))
    assert m.is_identity(m.mul(a, m.inv(a)))
    assert m.equal(m.mul(m.identity(), a), a) and m.equal(m.mul(a, m.identity()), a)
    assert m.equal(m.eval(m.to_word(a)), a)


@pytest.mark.parametrize("name", sorted(MODELS))
@given(data=st.data())
def test_eval_is_homomorphism(name, data):
    m = MODELS[name]
    u, v = data.draw(word_strategy(m)), data.draw(word_strategy(m))
    assert m.equal(m.eval(concat(u, v)), m.mul(m.eval(u), m.eval(v)))
    assert m.equal(m.eval(u * v), m.eval(concat(u, v)))


@pytest.mark.parametrize("name", sorted(MODELS))
def test_presentation_relators_hold(name):
    m = MODELS[name]
    assert all(relator_holds(m, r) for r in m.presentation().relators)


def test_eval_examples():
    Z2 = FreeAbelianGroup(2)
    assert Z2.eval(Z2.alphabet.word("x*y*x")) == (2, 1)
    C2 = cyclic(2, "x")
    assert C2.is_identity(C2.word("x^2"))
    D = InfiniteDihedral()
    assert D.equal(D.word("x*y*x"), D.word("y^-1"))


@given(st.lists(st.tuples(st.integers(0, 1), st.sampled_from((1, -1))), max_size=20))
def test_dihedral_matches_affine_maps(ls):
    D = InfiniteDihedral()
    u = Word(D.alphabet, tuple(ls))
    v = D.to_word(D.eval(u))
    assert dihedral_affine(u, D.alphabet.names) == dihedral_affine(v, D.alphabet.names)


def test_element_order_examples():
    assert element_order(cyclic(6), cyclic(6).generator(0), 100) == 6
    assert element_order(FreeAbelianGroup(2), (1, 0), 100) is None
    S = catalog.sl2z_amalgam()
    assert element_order(S, S.word("a^2"), 100) == 2
    assert element_order(S, S.word("a"), 3) is None


def test_s3_structure():
    m = MODELS["s3"]
    assert m.order() == 6
    assert m.centre() == [m.identity()]
    assert len(m.subgroup_closure([m.generator(1)])) == 3


def test_table_json_round_trip():
    m = MODELS["s3"]
    back = FiniteTableGroup.from_json(m.to_json())
    assert back.table == m.table and back.alphabet == m.alphabet
    c = FiniteTableGroup.from_json({"cyclic": 5, "name": "q"})
    assert c.order() == 5 and c.alphabet.names == ("q",)
    assert str(cyclic(4).presentation()) == "< a | a^4 >"


@pytest.mark.parametrize("table,gens", [
    ([[0, 1], [1, 1]], [1]),
    ([[0, 1, 2], [1, 0, 2], [2, 2, 0]], [1]),
    ([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]], [1]),   # does not generate
])
def test_table_rejected(table, gens):
    with pytest.raises(ModelError):
        FiniteTableGroup(table, gens)


def test_table_identity_need_not_be_zero():
    m = FiniteTableGroup([[1, 0], [0, 1]], [0])
    assert m.order() == 2 and m.is_identity(1)


def test_non_associative_latin_square_rejected():
    # a Latin square with identity 0 that is not a group (order 5 loop)
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(ModelError):
        FiniteTableGroup(t, [1, 2])


def test_size_cap():
    with pytest.raises(ModelError):
        cyclic(300)


def test_eval_alphabet_mismatch():
    with pytest.raises(WordError):
        FreeGroup(2).eval(FreeGroup(3).alphabet.word("x"))
