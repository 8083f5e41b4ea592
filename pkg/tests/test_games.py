import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dilemma.games import (
    ACTIONS,
    Action,
    AlwaysIndifferent,
    BimatrixGame,
    NewcombView,
    PdParams,
    Player,
    check_pd_conditions,
    derive_newcomb_view,
    dominant_action,
    eu_threshold,
    expected_utility,
    make_pd_game,
)

R, N = Action.REPAIR, Action.NO_REPAIR
ints = st.integers(min_value=-10**6, max_value=10**6)


@pytest.mark.parametrize("params, expected", [
    (PdParams(T=-1000, R=-2000, P=-3000, S=-4000), True),
    (PdParams(0, 0, 0, 0), False),
    (PdParams(5, 3, 1, 0), True),
    (PdParams(10, 3, 1, 0), False),  # 3 > 5 fails
])
def test_check_pd_conditions(params, expected):
    assert check_pd_conditions(params) is expected


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_check_pd_conditions_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        check_pd_conditions(PdParams(bad, 0, 0, 0))


def test_make_pd_game_layout(table1):
    assert table1.row == ((-2000, -4000), (-1000, -3000))
    assert table1.symmetric()


def test_make_pd_game_constant_and_axelrod():
    g = make_pd_game(PdParams(7, 7, 7, 7))
    assert g.symmetric()
    assert {g.payoff(p, a, b) for p in Player for a in ACTIONS for b in ACTIONS} == {7}
    ax = make_pd_game(PdParams(T=5, R=3, P=1, S=0))
    assert ax.payoff(Player.COL, N, R) == 0
    assert ax.payoff(Player.ROW, N, R) == 5


def test_bimatrix_rejects_non_finite():
    with pytest.raises(ValueError):
        BimatrixGame(((0, math.nan), (0, 0)), ((0, 0), (0, 0)))


def test_asymmetric_game_not_symmetric(table2):
    assert not table2.symmetric()


def test_newcomb_views_match_tables(robot_view, human_view):
    assert robot_view.cells == ((-2000, -1000), (-4000, -3000))
    assert human_view.cells == ((-2000, -1000), (-1000000, -3000))


@given(ints, ints, ints, ints)
def test_symmetric_game_views_viewer_independent(t, r, p, s):
    g = make_pd_game(PdParams(t, r, p, s))
    assert derive_newcomb_view(g, Player.ROW) == derive_newcomb_view(g, Player.COL)


def test_view_reindexes_opponent_action(table2):
    for viewer in Player:
        v = derive_newcomb_view(table2, viewer)
        for x in ACTIONS:
            for a in ACTIONS:
                row_a, col_a = (a, x) if viewer is Player.ROW else (x, a)
                assert v.payoff(x, a) == table2.payoff(viewer, row_a, col_a)


def test_expected_utility_examples(robot_view, human_view):
    assert expected_utility(robot_view, R, 1.0) == -2000
    assert expected_utility(robot_view, R, 0.75) == -2500
    assert expected_utility(robot_view, N, 0.75) == -2500
    p = Fraction(999, 1000)
    # 0.999 * -2000 + 0.001 * -1e6 = -1998 - 1000
    assert expected_utility(human_view, R, p) == -2998
    # 0.999 * -3000 + 0.001 * -1000 = -2997 - 1
    assert expected_utility(human_view, N, p) == -2998
    assert expected_utility(human_view, R, 0.999) == pytest.approx(-2998, rel=1e-12)


def test_expected_utility_matches_both_lines_of_the_robot_formula(robot_view):
    for k in range(21):
        p = Fraction(k, 20)
        assert expected_utility(robot_view, R, p) == p * -2000 + (1 - p) * -4000
        assert expected_utility(robot_view, N, p) == (1 - p) * -1000 + p * -3000


@pytest.mark.parametrize("p", [-0.01, 1.01, math.nan])
def test_expected_utility_rejects_bad_probability(robot_view, p):
    with pytest.raises(ValueError):
        expected_utility(robot_view, R, p)


@given(st.tuples(ints, ints, ints, ints), st.fractions(0, 1), st.fractions(0, 1), st.fractions(0, 1))
def test_expected_utility_is_affine(cells, p1, p2, lam):
    v = NewcombView((cells[:2], cells[2:]))
    for a in ACTIONS:
        mixed = expected_utility(v, a, lam * p1 + (1 - lam) * p2)
        assert mixed == lam * expected_utility(v, a, p1) + (1 - lam) * expected_utility(v, a, p2)


def test_thresholds_exact(robot_view, human_view):
    t_robot, t_human = eu_threshold(robot_view), eu_threshold(human_view)
    assert t_robot == Fraction(3, 4) and isinstance(t_robot, Fraction)
    assert t_human == Fraction(999, 1000) and isinstance(t_human, Fraction)


def test_human_threshold_solves_indifference(human_view):
    # independent check: EU equality holds at 999/1000 and the sign flips around it
    p = Fraction(999, 1000)
    assert expected_utility(human_view, R, p) == expected_utility(human_view, N, p)
    eps = Fraction(1, 10**6)
    assert expected_utility(human_view, R, p - eps) < expected_utility(human_view, N, p - eps)
    assert expected_utility(human_view, R, p + eps) > expected_utility(human_view, N, p + eps)


def test_threshold_none_when_repair_dominates():
    assert eu_threshold(NewcombView(((0, -5), (-1, -6)))) is None


def test_threshold_always_indifferent():
    with pytest.raises(AlwaysIndifferent):
        eu_threshold(NewcombView(((3, 3), (3, 3))))


def test_threshold_float_inputs():
    v = NewcombView(((-2.0, -1.0), (-4.0, -3.0)))
    t = eu_threshold(v)
    assert isinstance(t, float)
    assert t == pytest.approx(0.75, abs=1e-12)


def test_threshold_at_boundary():
    # difference zero at p=0, positive at p=1
    assert eu_threshold(NewcombView(((1, 0), (0, 0)))) == 0


@given(st.tuples(ints, ints, ints, ints))
def test_threshold_is_a_root_in_unit_interval(cells):
    v = NewcombView((cells[:2], cells[2:]))
    try:
        t = eu_threshold(v)
    except AlwaysIndifferent:
        assert all(expected_utility(v, R, Fraction(k, 4)) == expected_utility(v, N, Fraction(k, 4))
                   for k in range(5))
        return
    diff0 = expected_utility(v, R, 0) - expected_utility(v, N, 0)
    diff1 = expected_utility(v, R, 1) - expected_utility(v, N, 1)
    if t is None:
        assert diff0 * diff1 > 0
    else:
        assert 0 <= t <= 1
        assert expected_utility(v, R, t) == expected_utility(v, N, t)


@given(st.tuples(ints, ints, ints, ints), ints)
def test_constant_shift_keeps_threshold_and_dominance(cells, c):
    v = NewcombView((cells[:2], cells[2:]))
    shifted = NewcombView(tuple(tuple(x + c for x in row) for row in v.cells))
    assert dominant_action(shifted) == dominant_action(v)
    try:
        t = eu_threshold(v)
    except AlwaysIndifferent:
        with pytest.raises(AlwaysIndifferent):
            eu_threshold(shifted)
        return
    assert eu_threshold(shifted) == t


def test_dominant_action_examples(robot_view, human_view):
    assert dominant_action(robot_view) is N
    assert dominant_action(human_view) is N
    assert dominant_action(NewcombView(((1, 1), (1, 1)))) is None


def test_weak_dominance_is_not_dominance():
    assert dominant_action(NewcombView(((0, 0), (-1, 0)))) is None


@settings(max_examples=300)
@given(st.lists(st.integers(-10**5, 10**5), min_size=4, max_size=4, unique=True))
def test_valid_pd_means_defection_dominates(values):
    for t, r, p, s in itertools.permutations(values):
        params = PdParams(t, r, p, s)
        if check_pd_conditions(params):
            g = make_pd_game(params)
            for viewer in Player:
                assert dominant_action(derive_newcomb_view(g, viewer)) is N
