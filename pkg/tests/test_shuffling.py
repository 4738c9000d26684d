import pytest

from helpers import EX2, make_geom

from ncdt.matching import dmax_matching, is_perfect, matching_weight, state_to_edges, window_for
from ncdt.roots import mutate_theta
from ncdt.shuffling import (
    ShuffleCondition,
    ShuffleError,
    check_condition,
    hexagon_shuffle,
    output_window,
    quad_shuffle,
    shuffle,
    verify_shuffle_bijection,
)


def test_quad_shuffle_of_the_grand_state():
    g = make_geom("+-")
    new = g.with_theta(mutate_theta(g.theta, 0))
    win = window_for(g, new)
    D = dmax_matching(g, win)
    assert check_condition(g, D, 0, ShuffleCondition.COND, win)
    D2 = shuffle(g, D, 0, win)
    assert D2 == quad_shuffle(g, D, 0, win)
    small = output_window(win)
    assert is_perfect(new, D2, small)
    assert matching_weight(g, D, win) == matching_weight(new, D2, small)


@pytest.mark.parametrize(
    "sig,exc,word,i,bound",
    [
        ("+-", {}, (), 0, 3),
        ("+-", {}, (0,), 1, 3),
        ("++-", {}, (), 1, 2),
        (EX2[0], EX2[1], (1,), 2, 2),
    ],
)
def test_shuffle_is_a_weight_preserving_bijection(sig, exc, word, i, bound):
    g = make_geom(sig, exc, word=word)
    rep = verify_shuffle_bijection(g, i, bound)
    assert rep.passed, rep.failures[:3]
    assert rep.sources == rep.images == rep.targets > 0


def test_backward_step_is_refused():
    g = make_geom("+-", word=(0,))
    with pytest.raises(ShuffleError, match="back"):
        verify_shuffle_bijection(g, 0, 2)


def test_wrong_column_class_is_refused():
    g = make_geom("+-")
    win = window_for(g)
    with pytest.raises(ShuffleError, match="not hexagonal"):
        hexagon_shuffle(g, dmax_matching(g, win), 0, win)


def test_condition_violation_names_the_face():
    g = make_geom("+-")
    win = window_for(g)
    D = state_to_edges(g, {(0, 0): 1}, win)
    assert is_perfect(g, D, win)
    assert not check_condition(g, D, 0, ShuffleCondition.COND, win)
    with pytest.raises(ShuffleError, match=r"face \(0, 0\)"):
        shuffle(g, D, 0, win)
