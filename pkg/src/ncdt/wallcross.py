"""Product factors relating generating functions in adjacent chambers, and their checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .combinatorics import ChargedProfile, InvalidInput, SignWord, core_quotient_decompose
from .dimer import Enumeration, Geometry, Region, enumerate_Z
from .roots import (
    B_alpha_pm,
    B_i_pm,
    ThetaMap,
    is_minimal_word,
    j_minus_plus,
    mutate_theta,
    positive_roots_limit,
    sigma_of_root,
    word_roots,
)
from .series import INF, Series, grading, mono_div, product_of_factors, root_monomial


@dataclass(frozen=True)
class WallFactor:
    """A finite product of ``(1 - sign*m)^exponent``."""

    factors: tuple
    nvars: int
    refined: bool = True

    def __post_init__(self):
        for m, s, e in self.factors:
            if grading(m, self.refined) <= 0:
                raise InvalidInput(f"factor monomial {m} has nonpositive grading")

    def series(self, cert) -> Series:
        return product_of_factors(sorted(self.factors), self.nvars, cert, self.refined)

    def __mul__(self, other: "WallFactor") -> "WallFactor":
        return WallFactor(self.factors + other.factors, self.nvars, self.refined)

    def to_json(self) -> list:
        return [{"exp": list(m), "sign": s, "power": e} for m, s, e in sorted(self.factors)]


def _step_factor(geom: Geometry, i: int, hexagonal: bool) -> WallFactor:
    sigma, lam, theta = geom.sigma, geom.lam, geom.theta
    L = geom.L
    col = i % L
    if geom.is_hex(col) != hexagonal:
        kind = "hexagonal" if hexagonal else "quadrilateral"
        raise InvalidInput(f"vertex {i} is not {kind} for this chamber")
    plus, minus = B_i_pm(sigma, lam, theta, i)
    s = 1 if hexagonal else -1
    factors = []
    for n in plus:
        factors.append((geom.face_weight(n), s, s))
    for n in minus:
        factors.append((geom.face_weight(n), s, -s))
    return WallFactor(tuple(factors), L + 1)


def hex_factor(geom: Geometry, i: int) -> WallFactor:
    return _step_factor(geom, i, True)


def quad_factor(geom: Geometry, i: int) -> WallFactor:
    return _step_factor(geom, i, False)


def step_factor(geom: Geometry, i: int) -> WallFactor:
    """The factor turning ``Z`` at ``theta`` into ``Z`` at ``mu_i(theta)``."""
    return _step_factor(geom, i, geom.is_hex(i % geom.L))


def theta_factor(sigma: SignWord, lam: ChargedProfile, word: Sequence[int]) -> WallFactor:
    """Ordered product of step factors along a minimal word starting at the identity."""
    L = sigma.L
    if not is_minimal_word(L, word):
        raise InvalidInput(f"word {list(word)} is not a minimal expression")
    geom = Geometry(sigma, lam)
    total = WallFactor((), L + 1)
    for i in word:
        total = total * step_factor(geom, i)
        geom = geom.with_theta(mutate_theta(geom.theta, i))
    return total


def root_factor(sigma: SignWord, lam: ChargedProfile, alpha) -> WallFactor:
    """Factor of a single positive real root in the unified product."""
    geom = Geometry(sigma, lam)
    s = sigma_of_root(sigma, alpha)
    plus, minus = B_alpha_pm(sigma, lam, alpha)
    fac = []
    for h2, k2 in plus:
        fac.append((mono_div(geom.halfline_weight(k2), geom.halfline_weight(h2)), s, s))
    for h2, k2 in minus:
        fac.append((mono_div(geom.halfline_weight(k2), geom.halfline_weight(h2)), s, -s))
    return WallFactor(tuple(fac), sigma.L + 1)


def roots_factor(sigma: SignWord, lam: ChargedProfile, roots) -> WallFactor:
    total = WallFactor((), sigma.L + 1)
    for a in roots:
        total = total * root_factor(sigma, lam, a)
    return total


def theta_product(sigma: SignWord, lam: ChargedProfile, word: Sequence[int], cert) -> Series:
    return theta_factor(sigma, lam, word).series(cert)


def unrefined_exponent(sigma: SignWord, lam: ChargedProfile, alpha, cores=None) -> int:
    if cores is None:
        cores = core_quotient_decompose(sigma, lam)[0]
    jm, jp = j_minus_plus(alpha)
    s = sigma_of_root(sigma, alpha)
    return s * (alpha[0] + cores[(jm - 1) // 2] - cores[(jp - 1) // 2])


def unrefined_factor(sigma: SignWord, lam: ChargedProfile, roots) -> WallFactor:
    cores = core_quotient_decompose(sigma, lam)[0]
    fac = []
    for a in roots:
        s = sigma_of_root(sigma, a)
        e = unrefined_exponent(sigma, lam, a, cores)
        if e:
            fac.append((root_monomial(a), s, e))
    return WallFactor(tuple(fac), sigma.L, refined=False)


def unrefined_theta_product(sigma: SignWord, lam: ChargedProfile, word: Sequence[int], cert) -> Series:
    if not is_minimal_word(sigma.L, word):
        raise InvalidInput(f"word {list(word)} is not a minimal expression")
    return unrefined_factor(sigma, lam, word_roots(sigma.L, word)).series(cert)


def limit_product(sigma: SignWord, lam: ChargedProfile, degree_bound: int, cert=None, refined: bool = True) -> Series:
    """Product over :func:`~ncdt.roots.positive_roots_limit` up to ``degree_bound``."""
    roots = positive_roots_limit(sigma.L, degree_bound)
    if cert is None:
        cert = 2 * degree_bound
    if refined:
        return roots_factor(sigma, lam, roots).series(cert)
    return unrefined_factor(sigma, lam, roots).series(cert)


# -- verification ----------------------------------------------------------------


@dataclass
class Comparison:
    passed: bool
    cert: object
    mismatches: list
    expected: Series
    actual: Series
    region: object = None
    outside: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "passed": self.passed,
            "cert": None if self.cert == INF else self.cert,
            "mismatches": [
                {"exp": list(m), "expected": a, "actual": b} for m, a, b in self.mismatches
            ],
        }
        if self.region is not None:
            out["region"] = self.region.to_json()
            out["outside"] = [list(m) for m in self.outside]
        return out


def compare(expected: Series, actual: Series) -> Comparison:
    cert = min(expected.cert, actual.cert)
    diffs = expected.differences(actual, cert)
    return Comparison(not diffs, cert, diffs, expected, actual)


def compare_on_region(expected: Series, actual: Series, region: Region, outside=()) -> Comparison:
    """Exact comparison of all coefficients inside ``region``.

    Works for refined and specialized series alike.  Enumerated terms that
    fell outside the region (``outside``) also fail the check.
    """
    inside = region.contains if expected.refined else region.contains_unrefined
    keep = lambda s: Series({m: c for m, c in s.terms.items() if inside(m)}, s.cert, s.refined, s.nvars)
    exp, act = keep(expected), keep(actual)
    cert = min(exp.cert, act.cert)
    diffs = exp.differences(act, cert)
    outside = list(outside)
    return Comparison(not diffs and not outside, cert, diffs, exp, act, region, outside)


def verify_wallcross(geom: Geometry, i: int, box_bound: int, threads=None, margin: int = 0) -> Comparison:
    """``Z(mu_i theta)`` against ``Z(theta)`` times the step factor."""
    factor = step_factor(geom, i)
    before = enumerate_Z(geom, box_bound, threads, margin)
    after = enumerate_Z(geom.with_theta(mutate_theta(geom.theta, i)), box_bound, threads, margin)
    predicted = before.series * factor.series(before.series.cert)
    return compare_on_region(predicted, after.series, after.region, before.outside + after.outside)


def verify_theta(
    sigma: SignWord,
    lam: ChargedProfile,
    word: Sequence[int],
    box_bound: int,
    threads=None,
    margin: int = 0,
    nu=(None, None),
    unrefined: bool = False,
) -> Comparison:
    """``Z(theta)`` against ``Z(id)`` times the product over the crossed roots.

    The refined check uses both the step-by-step product and the product over
    the root set.  With ``unrefined`` the specialized series are compared with
    the closed exponent formula instead.
    """
    theta = ThetaMap.from_word(sigma.L, word)
    ident = Geometry(sigma, lam)
    if nu[0] is not None:
        ident = ident.with_nu(*nu)
    base = enumerate_Z(ident, box_bound, threads, margin)
    target = enumerate_Z(ident.with_theta(theta), box_bound, threads, margin)
    cert = base.series.cert
    outside = base.outside + target.outside
    if unrefined:
        predicted = base.series.specialize() * unrefined_theta_product(sigma, lam, word, cert)
        return compare_on_region(predicted, target.series.specialize(), target.region, outside)
    via_steps = base.series * theta_factor(sigma, lam, word).series(cert)
    via_roots = base.series * roots_factor(sigma, lam, word_roots(sigma.L, word)).series(cert)
    first = compare_on_region(via_steps, target.series, target.region, outside)
    second = compare_on_region(via_roots, target.series, target.region)
    first.passed = first.passed and second.passed
    first.mismatches = first.mismatches + second.mismatches
    return first


def _region_product(a: Enumeration, b: Enumeration) -> tuple[Series, Region]:
    region = Region(tuple(x + y for x, y in zip(a.region.ref, b.region.ref)), a.region.bound)
    prod = a.series * b.series
    if prod.cert < region.max_grading():
        raise InvalidInput("product certificate does not cover the combined region")
    return Series({m: c for m, c in prod.terms.items() if region.contains(m)}, prod.cert, True, prod.nvars), region


def verify_ratio(
    top: Geometry,
    bottom: Geometry,
    word: Sequence[int],
    box_bound: int,
    unrefined: bool = False,
    threads=None,
) -> Comparison:
    """``Z_top / Z_bottom`` is the same at the identity and at the chamber of ``word``.

    Checked by cross-multiplying, which is exact on the sum of the two regions
    because every term of every series sits in the nonnegative cone above its
    reference weight.
    """
    if top.sigma != bottom.sigma:
        raise InvalidInput("both geometries need the same sign word")
    if not is_minimal_word(top.L, word):
        raise InvalidInput(f"word {list(word)} is not a minimal expression")
    theta = ThetaMap.from_word(top.L, word)
    runs = {}
    for key, g in (("t0", top), ("b0", bottom), ("t1", top.with_theta(theta)), ("b1", bottom.with_theta(theta))):
        runs[key] = enumerate_Z(g, box_bound, threads)
    left, region = _region_product(runs["t1"], runs["b0"])
    right, _ = _region_product(runs["t0"], runs["b1"])
    outside = [m for r in runs.values() for m in r.outside]
    if unrefined:
        left, right = left.specialize(), right.specialize()
    cmp = compare(left, right)
    cmp.passed = cmp.passed and not outside
    cmp.region, cmp.outside = region, outside
    return cmp
