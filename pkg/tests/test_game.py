"""Game graphs: construction, canonical form, predecessor operator, and
the text format round trip."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import helpers
from mtgames.errors import GameParseError, UnboundProposition, ValidationError
from mtgames.game import (
    PLAYER0,
    PLAYER1,
    GameGraph,
    load_game,
    pre,
    serialize_game,
    validate_graph,
)
from mtgames.sets import StateSet

G2_TEXT = "states 2\nowner 0 0\nowner 1 1\nedge 0 1\nedge 1 0\nedge 1 1\n"


# ---------------------------------------------------------------------------
# Construction and accessors


def test_basic_accessors(g2_game):
    g = g2_game
    assert g.n == 2
    assert g.owner(0) == PLAYER0 and g.owner(1) == PLAYER1
    assert g.successors(0).tolist() == [1]
    assert g.successors(1).tolist() == [0, 1]
    assert g.out_degree(1) == 2
    assert g.num_edges == 3
    assert set(g.edges()) == {(0, 1), (1, 0), (1, 1)}
    assert g.is_player0_mask.tolist() == [True, False]
    assert set(g.player_states(PLAYER0)) == {0}
    assert set(g.player_states(PLAYER1)) == {1}


def test_labels_and_props(g1_game):
    g = g1_game
    assert set(g.props) == {"M1", "T11"}
    assert g.has_prop("M1") and not g.has_prop("nope")
    assert set(g.prop_set("T11")) == {1}
    assert g.label_names(0) == frozenset({"M1"})
    assert g.label_names(1) == frozenset({"M1", "T11"})
    with pytest.raises(UnboundProposition):
        g.prop_set("nope")


def test_canonicalization_sorts_and_dedups():
    g = helpers.build_game(3, [0, 0, 0], [(0, 2), (0, 1), (0, 2), (1, 0), (2, 2)])
    assert g.successors(0).tolist() == [1, 2]
    assert g.num_edges == 4


def test_constructor_rejects_bad_shapes():
    with pytest.raises(ValueError):
        GameGraph(-1, [], [])
    with pytest.raises(ValueError):
        GameGraph(2, [0], [(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        GameGraph(2, [0, 7], [(0, 0), (1, 1)])


def test_equality_ignores_label_storage_details():
    a = helpers.build_game(2, [0, 1], [(0, 1), (1, 0)], {"P": [0], "Q": []})
    b = helpers.build_game(2, [0, 1], [(1, 0), (0, 1)], {"P": [0]})
    c = helpers.build_game(2, [0, 1], [(0, 1), (1, 0)], {"P": [1]})
    assert a == b
    assert a != c


# ---------------------------------------------------------------------------
# Controllable predecessor


def test_pre_of_empty_and_full():
    for seed in range(10):
        g = helpers.random_graph(seed)
        assert len(pre(g, StateSet.empty(g.n))) == 0
        assert len(pre(g, StateSet.full(g.n))) == g.n


def test_pre_frozen_example(g2_game):
    assert set(pre(g2_game, StateSet(2, [1]))) == {0}


def test_pre_universe_mismatch(g2_game):
    with pytest.raises(ValueError):
        pre(g2_game, StateSet(3, [1]))


def test_pre_matches_definition_on_random_graphs():
    for seed in range(40):
        g = helpers.random_graph(seed)
        s = helpers.random_subset(seed + 1000, g.n)
        expected = helpers.naive_pre(g, set(s))
        assert set(pre(g, s)) == expected, f"seed {seed}"


def test_pre_all_player0_is_existential_all_player1_universal():
    edges = [(0, 1), (0, 2), (1, 2), (2, 0), (2, 2)]
    target = StateSet(3, [2])
    p0 = helpers.build_game(3, [0, 0, 0], edges)
    assert set(pre(p0, target)) == {0, 1, 2}
    p1 = helpers.build_game(3, [1, 1, 1], edges)
    # State 2 has the escape edge 2 -> 0, so only state 1 forces the target.
    assert set(pre(p1, target)) == {1}


@settings(max_examples=60)
@given(
    seed=st.integers(min_value=0, max_value=10_000),
    extra=st.integers(min_value=0, max_value=10_000),
)
def test_pre_monotone(seed, extra):
    g = helpers.random_graph(seed)
    small = helpers.random_subset(extra, g.n)
    big = small | helpers.random_subset(extra + 1, g.n)
    assert pre(g, small) <= pre(g, big)


# ---------------------------------------------------------------------------
# Validation


def test_validate_ok(g1_game, g2_game):
    assert validate_graph(g1_game) == []
    assert validate_graph(g2_game) == []


def test_validate_totality():
    g = helpers.build_game(2, [0, 0], [(0, 1)])
    assert validate_graph(g) == ["state 1: no successor"]


def test_validate_dangling_target():
    g = GameGraph(2, [0, 0], [(0, 5), (1, 0)], canonical=False)
    issues = validate_graph(g)
    assert issues == ["state 0: edge target 5 out of range"]


def test_validate_duplicate_edge():
    g = GameGraph(2, [0, 0], [(0, 1), (0, 1), (1, 0)], canonical=False)
    assert validate_graph(g) == ["state 0: duplicate edge to 1"]


# ---------------------------------------------------------------------------
# Text format


def test_load_frozen_example(g2_game):
    g = load_game(G2_TEXT)
    assert g.n == 2
    assert g.owner(0) == 0 and g.owner(1) == 1
    assert set(g.edges()) == {(0, 1), (1, 0), (1, 1)}
    assert g == helpers.build_game(2, [0, 1], [(0, 1), (1, 0), (1, 1)])


def test_load_with_labels_comments_and_blanks():
    text = (
        "# a game\nstates 2\n\nowner 0 0\nowner 1 1  # adversary\n"
        "edge 0 1\nedge 1 0\nedge 1 1\nlabel 0 M1\nlabel 1 M1 T11\n"
    )
    g = load_game(text)
    assert g.label_names(1) == frozenset({"M1", "T11"})
    assert g == helpers.g2()


def test_round_trip_structural_identity():
    for seed in range(20):
        g = helpers.random_graph(seed)
        assert load_game(serialize_game(g)) == g


def test_round_trip_with_labels(g1_game):
    assert load_game(serialize_game(g1_game)) == g1_game


def test_serialize_is_canonical_fixed_point():
    text = serialize_game(helpers.g1())
    assert serialize_game(load_game(text)) == text
    assert text.startswith("states 2\n")
    assert "label 1 M1 T11" in text  # names alphabetical


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("owner 0 0\n", "first line must be 'states <n>'"),
        ("states 1\nstates 1\n", "duplicate 'states' line"),
        ("states\n", "expected 'states <n>'"),
        ("states -1\n", "state count must be nonnegative"),
        ("states x\n", "expected integer"),
        ("states 1\nowner 0\n", "expected 'owner <state> <0|1>'"),
        ("states 1\nowner 3 0\n", "state 3 out of range"),
        ("states 1\nowner 0 2\n", "owner must be 0 or 1, got 2"),
        ("states 1\nowner 0 0\nowner 0 1\n", "duplicate owner for state 0"),
        ("states 1\nowner 0 0\nedge 0\n", "expected 'edge <from> <to>'"),
        ("states 1\nowner 0 0\nedge 5 0\n", "edge source 5 out of range"),
        ("states 1\nowner 0 0\nedge 0 5\n", "edge target 5 out of range"),
        ("states 1\nowner 0 0\nedge 0 0\nlabel 0\n", "expected 'label"),
        ("states 1\nowner 0 0\nedge 0 0\nlabel 0 9bad\n", "invalid proposition"),
        ("states 1\nowner 0 0\nedge 0 0\nlabel 5 P\n", "state 5 out of range"),
        ("states 1\nowner 0 0\nfrobnicate 1 2\n", "unknown directive"),
        ("", "missing 'states' line"),
        ("states 2\nowner 0 0\nedge 0 1\nedge 1 0\n", "missing owner for state 1"),
        ("states 1\nowner 0 0\nedge 0 0\nowner 0 0\n", "'owner' line after 'edge' section"),
    ],
)
def test_load_errors(text, fragment):
    with pytest.raises(GameParseError) as err:
        load_game(text)
    assert fragment in str(err.value)


def test_load_error_reports_line_number():
    with pytest.raises(GameParseError) as err:
        load_game("states 2\nowner 0 0\nowner 1 1\nedge 0 9\n")
    assert str(err.value).startswith("line 4:")
    assert err.value.line == 4


def test_load_rejects_non_total_graph():
    with pytest.raises(ValidationError) as err:
        load_game("states 2\nowner 0 0\nowner 1 1\nedge 0 1\n")
    assert "state 1: no successor" in str(err.value)


def test_count_successors_in(g2_game):
    mask = np.array([False, True])
    assert g2_game.count_successors_in(mask).tolist() == [1, 1]
