import pytest
from hypothesis import given, strategies as st

from filling.presentation import (ParseError, Presentation, PresentationError, abelian_lattice,
                                  cyclic_permutations, exponent_vector, free_reduce, in_lattice,
                                  inverse, is_null_homotopic_bounded, is_reduced, parse_presentation,
                                  parse_word, reduced_words, triangularize)

from conftest import z2

words = st.lists(st.integers(0, 5), max_size=30).map(tuple)


def test_parse_and_render_round_trip():
    p = z2()
    assert p.generators == ("a", "b")
    assert p.render_word(p.relators[0]) == "abAB"
    assert parse_presentation(p.render()) == p
    assert str(p) == "<a, b | abAB>"


def test_comments_and_blank_lines():
    p = parse_presentation("# Z^2\n\ngens: a b   # two\nrel: abAB\n")
    assert p == z2()


@pytest.mark.parametrize("text, line", [
    ("gens: a b\nrel: abXB\n", 2),
    ("rel: ab\n", 1),
    ("gens: a\nfoo: a\n", 2),
    ("gens: a\ngens: b\n", 2),
])
def test_parse_errors_report_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_presentation(text)
    assert info.value.line == line


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_presentation("gens: a b\nrel: abXB\n")
    assert info.value.position == 2


def test_bad_presentations():
    with pytest.raises(PresentationError):
        Presentation(("a", "a"), ())
    with pytest.raises(PresentationError):
        Presentation(("ab",), ())
    with pytest.raises(PresentationError):
        Presentation(("a",), ((),))
    with pytest.raises(ParseError):
        parse_presentation("# nothing\n")


def test_free_reduce_is_not_cyclic():
    p = z2()
    assert free_reduce(p.parse_word("abBA")) == ()
    assert free_reduce(p.parse_word("aBbA")) == ()
    assert p.render_word(free_reduce(p.parse_word("abA"))) == "abA"


@given(words)
def test_free_reduce_properties(w):
    r = free_reduce(w)
    assert is_reduced(r)
    assert free_reduce(r) == r
    assert free_reduce(w + inverse(w)) == ()
    assert len(r) % 2 == len(w) % 2


@given(words, words)
def test_free_reduce_is_a_homomorphism(u, v):
    assert free_reduce(free_reduce(u) + free_reduce(v)) == free_reduce(u + v)


@pytest.mark.parametrize("length, count", [(0, 1), (1, 4), (2, 12), (3, 36), (4, 108)])
def test_reduced_word_counts(length, count):
    ws = list(reduced_words(4, length))
    assert len(ws) == len(set(ws)) == count
    assert all(is_reduced(w) for w in ws)


def test_face_words():
    p = z2()
    faces = {p.render_word(u) for u in p.face_words()}
    assert faces == {"abAB", "bABa", "ABab", "BabA", "baBA", "aBAb", "BAba", "AbaB"}
    assert p.is_face_word(p.parse_word("BabA"))
    assert not p.is_face_word(p.parse_word("abBA"))
    assert cyclic_permutations(()) == [()]


def test_triangularize_z2():
    t = triangularize(z2())
    assert t.generators == ("a", "b", "t")
    assert [t.render_word(r) for r in t.relators] == ["Tab", "tAB"]
    assert t.is_triangular() and t.max_relator_length == 3


def test_triangularize_long_relator():
    p = parse_presentation("gens: a b\nrel: aaaaabbbb\n")
    t = triangularize(p)
    assert len(t.generators) == 2 + 9 - 3
    assert t.max_relator_length <= 3
    assert len(t.relators) == 9 - 2


def test_triangularize_is_identity_on_triangular():
    t = triangularize(z2())
    assert triangularize(t) == t


def test_triangularize_avoids_used_names():
    p = parse_presentation("gens: t u\nrel: tutu\n")
    t = triangularize(p)
    assert t.generators == ("t", "u", "v")


@given(st.lists(st.lists(st.integers(0, 3), min_size=1, max_size=10), min_size=1, max_size=3))
def test_triangularize_keeps_relators_in_normal_closure(rels):
    """Each original relator rewrites to a product of conjugates of new ones; here checked abelianly."""
    p = Presentation(("a", "b"), [tuple(r) for r in rels])
    t = triangularize(p)
    assert t.max_relator_length <= 3
    lattice = abelian_lattice(t)
    for r in p.relators:
        assert in_lattice(exponent_vector(r, len(t.generators)), lattice)


def test_abelian_lattice():
    p = parse_presentation("gens: a b\nrel: aa\nrel: abAB\n")
    basis = abelian_lattice(p)
    assert in_lattice([2, 0], basis)
    assert in_lattice([4, 0], basis)
    assert not in_lattice([1, 0], basis)
    assert not in_lattice([0, 2], basis)


def test_null_homotopy_after_triangularizing():
    t = triangularize(z2())
    w = parse_word("abAB", t.generators)
    d = is_null_homotopic_bounded(t, w, 2)
    assert d is not None and d.area == 2
    assert is_null_homotopic_bounded(t, w, 1) is None
    assert is_null_homotopic_bounded(t, parse_word("ab", t.generators), 4) is None
