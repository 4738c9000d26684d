import pytest

from helpers import make_geom, profile

from ncdt.combinatorics import InvalidInput, SignWord, YoungDiagram
from ncdt.limit import MODES, default_mode, verify_limit
from ncdt.series import grading, mono_div, mono_mul

E = YoungDiagram()


def test_default_mode_depends_on_L():
    assert default_mode(1) == default_mode(2) == "chamber"
    assert default_mode(3) == "product"
    assert set(MODES) == {"chamber", "product"}


@pytest.mark.parametrize("sig,exc,nu_p,nu_m", [("+", {}, (1,), ()), ("+-", {}, (), ()), ("+", {-1: 1, 1: -1}, (), ())])
def test_both_modes_agree_with_the_vertex(sig, exc, nu_p, nu_m):
    g = make_geom(sig, exc, nu_p, nu_m)
    reports = [verify_limit(g.sigma, g.lam, g.nu_plus, g.nu_minus, 3, mode) for mode in MODES]
    for rep in reports:
        assert rep.passed, rep.comparison.mismatches[:3]
        assert rep.roots_ok and rep.rtv_stable
    assert reports[0].comparison.expected == reports[1].comparison.expected
    assert reports[0].theta == reports[1].theta


def test_unknown_mode_is_refused():
    with pytest.raises(InvalidInput):
        verify_limit(SignWord.parse("+"), profile("+"), E, E, 1, "sideways")


def test_report_carries_the_edge_rule():
    rep = verify_limit(SignWord.parse("+-"), profile("+-"), E, E, 1)
    data = rep.to_json()
    assert data["passed"] and "Q_s^(1+a+b)" in data["Q_rule"]
    assert data["word"] and data["mode"] == "chamber"


def limit_sides(sig, exc, nu_p, nu_m):
    g = make_geom(sig, exc, nu_p, nu_m)
    return verify_limit(g.sigma, g.lam, g.nu_plus, g.nu_minus, 3, "chamber").comparison


@pytest.mark.parametrize(
    "sig,exc,nu_p,nu_m",
    [("+-", {-3: 1, 1: -1}, (), ()), ("+", {-1: 1, 1: -1}, (1,), ()), ("+", {-3: 1, 1: -1}, (), (1,))],
)
def test_quotient_meeting_a_leg_agrees_unrefined_only(sig, exc, nu_p, nu_m):
    # open: refined weights disagree where a quotient leg meets another leg
    cmp = limit_sides(sig, exc, nu_p, nu_m)
    assert not cmp.passed
    assert cmp.expected.specialize() == cmp.actual.specialize()


@pytest.mark.parametrize("exc,nu_p,nu_m", [({-1: 1, 1: -1}, (1,), ()), ({-3: 1, 1: -1}, (), (1,))])
def test_on_one_residue_the_disagreement_is_a_single_monomial(exc, nu_p, nu_m):
    cmp = limit_sides("+", exc, nu_p, nu_m)
    chamber, vertex = cmp.expected.terms, cmp.actual.terms
    lead = lambda t: min(t, key=lambda m: (grading(m), m))  # noqa: E731
    shift = mono_div(lead(chamber), lead(vertex))
    assert grading(shift) == 0 and any(shift)
    assert {mono_mul(m, shift): c for m, c in vertex.items()} == chamber
