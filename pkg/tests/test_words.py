import pytest
from hypothesis import given, strategies as st

from fckit.words import (Alphabet, ParseError, Word, WordError, concat, cyclic_reduce, format_word,
                         free_reduce, invert, parse_word, substitute)
from oracles import reduce_by_rescan, reduce_right_to_left, reduce_stack

A = Alphabet(("x", "y", "z"))
letters = st.tuples(st.integers(0, 2), st.sampled_from((1, -1)))
raw_words = st.lists(letters, max_size=64).map(lambda ls: Word(A, tuple(ls)))
reduced_words = raw_words.map(free_reduce)


def w(text):
    return parse_word(text, A)


def test_free_reduce_examples():
    assert free_reduce(w("x*x^-1*y")) == w("y")
    assert free_reduce(Word(A, ())) == Word(A, ())
    assert free_reduce(w("x*y*y^-1*x^-1*z")) == w("z")


def test_cyclic_reduce_examples():
    assert cyclic_reduce(w("x*y*x^-1")) == (w("y"), w("x"))
    assert cyclic_reduce(w("y*x")) == (w("y*x"), Word(A, ()))
    assert cyclic_reduce(w("x*z*y*z^-1*x^-1")) == (w("y"), w("x*z"))


def test_invert_concat_examples():
    assert invert(w("x*y")) == w("y^-1*x^-1")
    assert concat(w("x"), w("x^-1")) == Word(A, ())
    assert concat(w("x*y"), w("y^-1*z")) == w("x*z")


def test_concat_alphabet_mismatch():
    with pytest.raises(WordError):
        concat(w("x"), parse_word("x", Alphabet(("x", "q"))))


def test_bad_letter_index():
    with pytest.raises(WordError):
        Word(A, ((3, 1),))
    with pytest.raises(WordError):
        Word(A, ((0, 2),))


@pytest.mark.parametrize("names", [(), ("x", "x"), ("1a",), ("a b",)])
def test_bad_alphabets(names):
    with pytest.raises(WordError):
        Alphabet(names)


@given(raw_words)
def test_free_reduce_matches_other_scans(u):
    r = free_reduce(u).letters
    assert r == reduce_stack(u.letters) == reduce_right_to_left(u.letters) == reduce_by_rescan(u.letters)


@given(raw_words)
def test_free_reduce_idempotent_and_shortening(u):
    r = free_reduce(u)
    assert free_reduce(r) == r
    assert len(r) <= len(u)
    assert r.is_reduced


@given(raw_words)
def test_invert_involution(u):
    assert invert(invert(u)) == u
    assert concat(u, invert(u)) == Word(A, ())


@given(raw_words, raw_words, raw_words)
def test_concat_associative(u, v, x):
    assert concat(concat(u, v), x) == concat(u, concat(v, x))


@given(reduced_words)
def test_cyclic_reduce_reconstructs(u):
    core, c = cyclic_reduce(u)
    assert free_reduce(c * core * ~c) == u
    if len(core) >= 2:
        (i, s), (j, t) = core.letters[0], core.letters[-1]
        assert not (i == j and s == -t)


@given(raw_words)
def test_format_parse_round_trip(u):
    assert parse_word(format_word(u), A) == u


def test_parse_syntax_variants():
    assert w("x y^-2 x'") == w("x*y^-2*x^-1")
    assert w("x^3") == w("x*x*x")
    assert w("1") == Word(A, ())
    assert w("x ^ -1") == w("x'")
    assert format_word(w("x*x*y^-1*y^-1*z")) == "x^2*y^-2*z"


@pytest.mark.parametrize("text,line,col", [("x*", 1, 3), ("x*q", 1, 3), ("x\n*?", 2, 2), ("", 1, 1)])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_word(text, A)
    assert (e.value.line, e.value.column) == (line, col)


@given(raw_words, raw_words)
def test_substitute_is_homomorphism(u, v):
    images = [w("y*x"), w("z^-1"), w("x*x")]
    assert substitute(concat(u, v), images) == concat(substitute(u, images), substitute(v, images))
