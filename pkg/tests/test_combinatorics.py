import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import young_diagrams

from ncdt.combinatorics import (
    ChargedProfile,
    InvalidInput,
    SignWord,
    YoungDiagram,
    core_quotient_compose,
    core_quotient_decompose,
    partitions,
    project,
    project_half,
    residue_index,
)


def test_project_splits_integers():
    assert project(7, 3) == (2, 1)
    assert project(-1, 3) == (-1, 2)
    with pytest.raises(InvalidInput):
        project(1, 0)


def test_project_half_puts_residue_in_base_period():
    # h = c*L + r with r in {1/2, ..., L - 1/2}
    assert project_half(1, 3) == (0, 1)
    assert project_half(5, 3) == (0, 5)
    assert project_half(7, 3) == (1, 1)
    assert project_half(-1, 3) == (-1, 5)
    assert residue_index(-1, 3) == 2
    with pytest.raises(InvalidInput):
        project_half(2, 3)


def test_young_diagram_validation():
    with pytest.raises(InvalidInput):
        YoungDiagram((1, 2))
    with pytest.raises(InvalidInput):
        YoungDiagram((2, 0))
    assert YoungDiagram((3, 1)).size == 4
    assert YoungDiagram((2, 1)).boxes() == [(0, 0), (0, 1), (1, 0)]


def test_transpose_examples():
    assert YoungDiagram((3, 1)).transpose() == YoungDiagram((2, 1, 1))
    assert YoungDiagram().transpose() == YoungDiagram()


def test_sign_steps_of_small_diagrams():
    empty, row2 = YoungDiagram(), YoungDiagram((2,))
    assert [empty.sign(j) for j in (-3, -1, 1, 3)] == [-1, -1, 1, 1]
    assert row2.sign(1) == -1 and row2.sign(3) == 1
    assert row2.sign(-3) == 1


def test_profile_is_abs_far_away():
    d = YoungDiagram((3, 2, 2))
    for n in range(-12, 13):
        if abs(n) >= d.extent():
            assert d.profile(n) == abs(n)
    # the profile always sits on or above |n| and moves by one each step
    for n in range(-8, 8):
        assert d.profile(n) >= abs(n)
        assert abs(d.profile(n + 1) - d.profile(n)) == 1


def test_partitions_match_brute_force():
    ours = sorted(p for n in range(7) for p in partitions(n))
    assert ours == sorted(young_diagrams(6))


def test_sign_word_parsing():
    assert SignWord.parse("+-−").signs == (1, -1, -1)
    with pytest.raises(InvalidInput):
        SignWord.parse("+x")
    with pytest.raises(InvalidInput):
        SignWord.parse("")
    s = SignWord.parse("+--")
    assert (s.L, s.L_plus, s.L_minus) == (3, 1, 2)
    assert s(-1) == -1 and s(7) == 1


def test_trivial_profile_follows_sigma_asymptotics():
    s = SignWord.parse("+-")
    lam = ChargedProfile.trivial(s)
    assert lam.is_trivial()
    for h2 in range(-21, 22, 2):
        assert lam(h2) == (1 if h2 > 0 else -1) * s(h2)


def test_profile_equality_ignores_window_padding():
    s = SignWord.parse("+--")
    a = ChargedProfile.from_exceptions(s, {-5: 1, 1: -1})
    b = ChargedProfile.from_exceptions(s, {-5: 1, 1: -1, 9: s(9)})
    assert a == b and hash(a) == hash(b)
    assert a.exceptions() == {-5: 1, 1: -1}


def test_running_example_has_zero_cores_and_one_box():
    s = SignWord.parse("+--")
    lam = ChargedProfile.from_exceptions(s, {-5: 1, 1: -1})
    cores, quotients = core_quotient_decompose(s, lam)
    assert cores == (0, 0, 0)
    assert [q.size for q in quotients] == [1, 0, 0]


def test_compose_rejects_wrong_lengths():
    s = SignWord.parse("+-")
    with pytest.raises(InvalidInput):
        core_quotient_compose(s, [0], [YoungDiagram()])


diagrams = st.lists(st.integers(1, 4), max_size=4).map(lambda r: YoungDiagram(tuple(sorted(r, reverse=True))))


@given(diagrams)
def test_transpose_is_an_involution(d):
    assert d.transpose().transpose() == d
    assert d.transpose().size == d.size


@given(diagrams)
def test_diagram_rebuilt_from_its_steps(d):
    R = d.extent() + 2
    assert YoungDiagram.from_signs(d.sign, -2 * R - 1, 2 * R + 1) == d


@st.composite
def core_quotient_data(draw):
    L = draw(st.integers(1, 4))
    sigma = SignWord(tuple(draw(st.sampled_from((1, -1))) for _ in range(L)))
    cores = [draw(st.integers(-3, 3)) for _ in range(L - 1)]
    cores.append(-sum(cores))
    quotients = [draw(diagrams) for _ in range(L)]
    return sigma, cores, quotients


@settings(max_examples=150, deadline=None)
@given(core_quotient_data())
def test_core_quotient_round_trip(data):
    sigma, cores, quotients = data
    lam = core_quotient_compose(sigma, cores, quotients)
    got_cores, got_quotients = core_quotient_decompose(sigma, lam)
    assert list(got_cores) == cores
    assert list(got_quotients) == quotients
    assert core_quotient_compose(sigma, got_cores, got_quotients) == lam
