import random
from collections import Counter

import pytest

from helpers import EX2, make_geom
from oracles import refined_L1_series

from ncdt.dimer import DimCap, Region, enumerate_Z, melting_layers, reference_vector, unrefined_vector
from ncdt.matching import (
    cycle_flip,
    dmax_matching,
    edges_to_state,
    is_perfect,
    is_positive_cycle,
    matching_weight,
    state_to_edges,
    window_for,
)
from ncdt.combinatorics import InvalidInput, core_quotient_decompose, residue_index
from ncdt.roots import ThetaMap, alpha_theta_i, mutate_theta, root_interval
from ncdt.series import mono_div, mono_mul, q_minus, q_plus, q_prod, root_monomial, specialize_monomial

RANDOM_PROFILES = [
    ("+", {}),
    ("+-", {}),
    ("+-", {-3: 1, 1: -1}),
    EX2,
    # cores (1, 0, -1) and (0, 2, -1, -1)
    ("++-", {-7: -1, -1: -1, 5: 1, 7: -1}),
    ("-+-+", {-3: -1, -1: 1, 3: -1, 27: -1}),
]


def test_column_classes():
    assert [k for _, k in make_geom("+").columns(-3, 3)] == ["H"] * 7
    assert [k for _, k in make_geom("+-").columns(-3, 3)] == ["S"] * 7
    kinds = [k for _, k in make_geom("+--").columns(0, 5)]
    assert kinds == ["S", "S", "H", "S", "S", "H"]


def test_F_profile_for_L1():
    g = make_geom("+")
    assert (g.F(0), g.F(1), g.F(-1), g.F(2)) == (0, -1, -1, -2)


@pytest.mark.parametrize("sig,exc", RANDOM_PROFILES)
def test_F_recursion(sig, exc):
    g = make_geom(sig, exc)
    assert g.F(0) == 0
    for n in range(-15, 15):
        assert g.F(n) == g.F(n - 1) - g.tlam(2 * n - 1)


def test_halfline_weights_L1():
    g = make_geom("+")
    assert g.halfline_weight(1) == q_plus(1)
    assert g.halfline_weight(3) == (3, 0)
    assert g.halfline_weight(-1) == (0, -1)


def core_shift(g, h2, k2):
    """Root-lattice shift (c[j(h)] - c[j(k)]) * delta carried by w(k)/w(h)."""
    cores, _ = core_quotient_decompose(g.sigma, g.lam)
    d = cores[residue_index(h2, g.L)] - cores[residue_index(k2, g.L)]
    return tuple(d * x for x in (1,) * g.L)


def shifted_root(g, h2, k2):
    a = root_interval(h2, k2, g.L)
    return root_monomial(tuple(x + y for x, y in zip(a, core_shift(g, h2, k2))))


@pytest.mark.parametrize("sig,exc", RANDOM_PROFILES)
def test_halfline_weight_ratios_specialize_to_roots(sig, exc):
    g = make_geom(sig, exc)
    rng = random.Random(len(sig) * 31 + len(exc))
    for _ in range(50):
        h2, k2 = 2 * rng.randint(-10, 10) + 1, 2 * rng.randint(-10, 10) + 1
        ratio = mono_div(g.halfline_weight(k2), g.halfline_weight(h2))
        assert specialize_monomial(ratio) == shifted_root(g, h2, k2)
        if not any(core_quotient_decompose(g.sigma, g.lam)[0]):
            assert specialize_monomial(ratio) == root_monomial(root_interval(h2, k2, g.L))


@pytest.mark.parametrize("sig,exc", RANDOM_PROFILES)
def test_halfline_recursion(sig, exc):
    g = make_geom(sig, exc)
    L, lam = g.L, g.lam
    qs = lambda s: q_plus(L) if s > 0 else q_minus(L)  # noqa: E731
    for h2 in range(-8 * L - 1, 8 * L, 2):
        step = mono_mul(mono_mul(qs(lam(h2)), qs(lam(h2 - 2 * L))), q_prod(L, 1, L - 1))
        assert mono_div(g.halfline_weight(h2), g.halfline_weight(h2 - 2 * L)) == step


def test_edge_weights():
    g = make_geom("+")
    assert g.edge_weight(("h", 0, 1)) == (0, 0)
    # the slanted edge at (1/2, k) is weighted exactly when (1/2 - k) / 2 is odd
    assert g.edge_weight(("s", 1, 1)) == (0, 0)
    assert g.edge_weight(("s", 1, 3)) == q_plus(1)
    assert g.edge_weight(("s", 1, -1)) == q_plus(1)
    assert g.edge_weight(("s", 1, 5)) == (0, 0)


@pytest.mark.parametrize("sig,exc", RANDOM_PROFILES)
def test_face_weights_specialize(sig, exc):
    for word in ((), (0,), (0, 1)):
        g = make_geom(sig, exc)
        if g.L < 2 and word:
            continue
        g = g.with_theta(ThetaMap.from_word(g.L, word) if word else ThetaMap.identity(g.L))
        L = g.L
        total = (0,) * L
        for n in range(-2 * L, 2 * L):
            w = specialize_monomial(g.face_weight(n))
            h2, k2 = g.theta(2 * n - 1), g.theta(2 * n + 1)
            assert w == shifted_root(g, h2, k2)
            if not any(core_shift(g, h2, k2)):
                assert w == root_monomial(alpha_theta_i(g.theta, n % L))
        for n in range(L):
            total = tuple(a + b for a, b in zip(total, specialize_monomial(g.face_weight(n))))
        assert total == (2,) + (1,) * (L - 1)


def test_face_weight_L1():
    assert make_geom("+").face_weight(0) == (1, 1)


def test_correction_is_trivial_without_mixed_inversions():
    assert make_geom("+-").correction_F_theta() == (0, 0, 0)
    assert make_geom("+-", word=(0, 1, 0)).correction_F_theta() == (0, 0, 0)
    g = make_geom(*EX2)
    assert g.correction_F_theta() == (0, 0, 0, 0)


def test_correction_changes_by_crossed_root():
    g = make_geom(*EX2)
    theta, seen = g.theta, []
    for i in (1, 2, 0):
        alpha = alpha_theta_i(theta, i)
        nxt = mutate_theta(theta, i)
        ratio = mono_div(g.with_theta(nxt).correction_F_theta(), g.with_theta(theta).correction_F_theta())
        u = specialize_monomial(ratio)
        k = u[1] // alpha[1] if alpha[1] else u[0] // (2 * alpha[0])
        assert u == root_monomial(tuple(k * x for x in alpha))
        seen.append(k)
        theta = nxt
    assert any(seen)


def test_grand_state_weight_L1():
    g = make_geom("+")
    assert g.dmax_weight() == (0, 0)
    assert enumerate_Z(g, 0).series.terms == {(0, 0): 1}


@pytest.mark.parametrize("sig,exc,nu_p,nu_m", [("+", {}, (), ()), ("+-", {}, (1,), ()), (EX2[0], EX2[1], (), (2,))])
def test_grand_state_is_a_perfect_matching(sig, exc, nu_p, nu_m):
    g = make_geom(sig, exc, nu_p, nu_m)
    win = window_for(g)
    D = dmax_matching(g, win)
    assert is_perfect(g, D, win)
    for e in list(D)[:200]:
        a, b = g.edge_endpoints(e)
        assert g.vertex_color(a) != g.vertex_color(b)


def test_G_is_a_max_reached_by_each_part():
    g = make_geom("+-", nu_plus=(2, 1), nu_minus=(1,))
    hits = Counter()
    for n in range(-6, 7):
        for m in range(g.F(n) - 8, g.F(n) + 9):
            if (n + m) % 2:
                continue
            parts = (g.G_base(n, m), g.G_plus(n, m), g.G_minus(n, m))
            assert g.G((n, m)) == max(parts)
            hits[parts.index(max(parts))] += 1
    assert set(hits) == {0, 1, 2}


def test_L1_refined_series_against_plane_partitions():
    e = enumerate_Z(make_geom("+"), 5)
    oracle = refined_L1_series(5)
    assert dict(e.series.terms) == dict(oracle)
    assert e.series.cert == 10


def test_L1_first_terms():
    e = enumerate_Z(make_geom("+"), 2)
    assert e.series.terms == {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 1): 1, (1, 3): 1}


def test_nonnegative_above_grand_state():
    for sig, exc in RANDOM_PROFILES[:4]:
        g = make_geom(sig, exc, (1,), ())
        e = enumerate_Z(g, 3)
        ref = reference_vector(g)
        for m in e.series.terms:
            u = unrefined_vector(m)
            assert all(a >= b for a, b in zip(u, ref))


def test_thread_count_does_not_change_results():
    g = make_geom(*EX2)
    a = enumerate_Z(g, 4, threads=1)
    b = enumerate_Z(g, 4, threads=3)
    assert a.series == b.series and a.counts == b.counts


def test_negative_bound_rejected():
    with pytest.raises(InvalidInput):
        enumerate_Z(make_geom("+"), -1)


def test_region_containment():
    r = Region((2, 0), 3)
    assert r.contains((1, 1, 0)) and r.contains((2, 2, 2))
    assert not r.contains((0, 1, 0)) and not r.contains((4, 4, 1))
    assert r.max_grading() == 2 + 6
    pts = list(r.points())
    assert min(pts) == (0, 0) and len(pts) == len(set(pts)) == 10
    assert all(sum(p) <= 3 for p in pts)


@pytest.mark.parametrize("sig,exc,word", [("+", {}, ()), ("+-", {}, ()), ("+-", {}, (0,)), (EX2[0], EX2[1], ())])
def test_states_and_matchings_round_trip(sig, exc, word):
    g = make_geom(sig, exc, word=word)
    win = window_for(g)
    count = 0
    for k, states in melting_layers(g, DimCap(g.L, total=4 if len(sig) < 3 else 3)):
        for st in states:
            H = dict(st)
            D = state_to_edges(g, H, win)
            assert is_perfect(g, D, win)
            assert edges_to_state(g, D, win) == H
            assert matching_weight(g, D, win) == g.state_weight(H)
            count += 1
    assert count > 5


def test_unstable_heights_do_not_give_matchings():
    g = make_geom("+")
    win = window_for(g)
    f = g.initial_addable()[0]
    # a stacked height still toggles into a matching, but it is not the state read back
    H = {f: 2}
    assert not g.is_stable(H)
    assert edges_to_state(g, state_to_edges(g, H, win), win) != H
    # a box resting on nothing has no matching at all
    floating = {(f[0] + 1, f[1] + 1): 1}
    assert not g.is_stable(floating)
    assert not is_perfect(g, state_to_edges(g, floating, win), win)


def test_elementary_flip_multiplies_by_face_weight():
    g = make_geom("+")
    win = window_for(g)
    D = dmax_matching(g, win)
    f = g.initial_addable()[0]
    assert is_positive_cycle(g, D, [f])
    D2 = cycle_flip(g, D, [f])
    assert D2 == state_to_edges(g, {f: 1}, win)
    assert matching_weight(g, D2, win) == mono_mul(matching_weight(g, D, win), g.face_weight(f[0]))
    with pytest.raises(InvalidInput):
        cycle_flip(g, D2, [(f[0] + 7, f[1] + 1)])
