import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from filling.diagram import VanKampenDiagram
from filling.enumerate import AreaOracle, enumerate_diagrams, iter_diagrams
from filling.homotopy import (HomotopyState, IllegalMoveError, Move, NotTriangularError,
                              SearchBudgetExceeded, apply_move, fl_exact, fl_exact_full,
                              fl_schedule, legal_moves, filling_length_bound, replay,
                              shelling_loop_bound, trace_from_dict)
from filling.invariants import fl_word_search
from filling.presentation import parse_presentation, reduced_words

from conftest import grid_diagram, tri_z2, z2


def test_filling_length_bound_values():
    assert filling_length_bound(0, 0, 0) == 2
    assert filling_length_bound(2, 1, 4) == pytest.approx(3 * (math.log2(3) + 1) + 9)
    assert filling_length_bound(2, 1, 4) == pytest.approx(16.7549, abs=1e-4)
    assert filling_length_bound(7, 2, 5) == 34
    assert shelling_loop_bound(7, 2) == 20


def test_trivial_diagram_has_empty_trace(p):
    d = VanKampenDiagram.trivial(p)
    t = fl_schedule(d)
    assert t.moves == [] and t.realized_fl == 0
    assert fl_exact(d) == 0


@pytest.mark.parametrize("w, h, fl", [(1, 1, 5), (2, 1, 7), (2, 2, 9)])
def test_grid_filling_length(p, w, h, fl):
    d = grid_diagram(p, w, h)
    assert fl_exact(d) == fl_exact_full(d) == fl
    t = fl_schedule(d)
    m = d.metrics
    assert fl <= t.realized_fl <= filling_length_bound(m.area, m.diameter, m.boundary_length)


def test_square_schedule(square):
    t = fl_schedule(square)
    assert t.realized_fl <= 6
    assert t.profile[0] == 4 and t.profile[-1] == 0


def test_triangle_filling_length(triangle):
    # the only first move replaces one edge by the other two, then a spur collapses
    assert fl_exact(triangle) == 4
    assert fl_word_search(triangle.presentation, triangle.boundary_word, 1) == 4
    t = fl_schedule(triangle)
    assert t.realized_fl == 4 <= filling_length_bound(1, 1, 3)


def test_one_cell_collapse(p):
    # aA: a single edge out and back
    d = next(iter(enumerate_diagrams(p, p.parse_word("aA"), 0)))
    s = HomotopyState.initial(d)
    moves = legal_moves(s)
    assert [m.kind for m in moves] == ["1cell"]
    s2 = apply_move(s, moves[0])
    assert s2.is_trivial()
    assert len(s2.vertices()) == len(s.vertices()) - 1
    assert len(s2.edges()) == len(s.edges()) - 1
    assert fl_exact(d) == 2


def test_two_cell_collapse_keeps_vertices(square):
    s = HomotopyState.initial(square)
    m = next(m for m in legal_moves(s) if m.kind == "2cell")
    s2 = apply_move(s, m)
    assert s2.vertices() == s.vertices()
    assert len(s2.faces) == 1
    # one boundary edge replaced by the two other edges of a triangle
    assert s2.length == s.length + 1
    w = s.word
    i = s.boundary.index(m.dart)
    face = square.faces[m.face]
    k = face.index(square.twin[m.dart])
    assert s2.word == w[:i] + tuple(square.label[x] for x in face[k + 1:] + face[:k]) + w[i + 1:]


def test_collapsing_an_ear_then_spur_shortens(triangle):
    s = HomotopyState.initial(triangle)
    m = legal_moves(s)[0]
    s = apply_move(s, m)
    assert s.length == 4
    s = apply_move(s, legal_moves(s)[0])
    assert s.length == 2


def test_illegal_moves(square):
    s = HomotopyState.initial(square)
    with pytest.raises(IllegalMoveError):
        apply_move(s, Move("1cell", s.boundary[0]))
    with pytest.raises(IllegalMoveError):
        apply_move(s, Move("2cell", s.boundary[0], 5))
    with pytest.raises(IllegalMoveError):
        apply_move(s, Move("flip", 0))
    with pytest.raises(IllegalMoveError):
        replay(square, [])


def test_replay_reproduces_trace(p):
    d = grid_diagram(p, 2, 2)
    t = fl_schedule(d)
    again = replay(d, t.moves)
    assert again.profile == t.profile
    loaded = trace_from_dict(json.loads(t.to_json()))
    assert loaded.moves == t.moves and loaded.profile == t.profile


def test_node_budget(p):
    with pytest.raises(SearchBudgetExceeded):
        fl_exact(grid_diagram(p, 2, 2), node_budget=3)


def test_scheduler_needs_triangles():
    p = z2()
    d = next(iter(enumerate_diagrams(p, p.parse_word("abAB"), 1)))
    with pytest.raises(NotTriangularError):
        fl_schedule(d)


def test_schedule_is_deterministic(p):
    d = grid_diagram(p, 3, 2)
    assert fl_schedule(d).to_dict() == fl_schedule(d).to_dict()


def _small_corpus(max_len, max_area):
    p = tri_z2()
    oracle = AreaOracle(p)
    for n in range(max_len + 1):
        for w in reduced_words(p.n_letters, n):
            yield from iter_diagrams(p, w, max_area, oracle=oracle)


def test_first_one_cell_pruning_matches_full_search():
    for d in _small_corpus(5, 4):
        assert fl_exact(d) == fl_exact_full(d)


def test_scheduler_sandwich_small():
    for d in _small_corpus(5, 4):
        m = d.metrics
        t = fl_schedule(d)
        assert fl_exact(d) <= t.realized_fl <= filling_length_bound(m.area, m.diameter, m.boundary_length)
        assert replay(d, t.moves).profile == t.profile


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_word_level_oracle_agrees(data):
    """Minimum of the per-diagram search over all diagrams equals the word-space search."""
    p = tri_z2()
    oracle = AreaOracle(p)
    n = data.draw(st.sampled_from([3, 4, 5, 6]))
    words = [w for w in reduced_words(p.n_letters, n) if oracle.min_area(w, 3) <= 3]
    w = data.draw(st.sampled_from(words))
    best = min(fl_exact(d) for d in iter_diagrams(p, w, 3, oracle=oracle))
    assert fl_word_search(p, w, 3) == best


def test_non_triangular_word_search():
    p = parse_presentation("gens: a b\nrel: abAB\n")
    # one letter becomes the three other letters of the square face
    assert fl_word_search(p, p.parse_word("abAB"), 1) == 6
    assert fl_word_search(p, p.parse_word("ab"), 2, max_length=6) is None
