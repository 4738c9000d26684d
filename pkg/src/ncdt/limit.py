"""Comparison of the chamber generating function in the limit with the vertex sum.

Two ways of producing the chamber side are offered.  ``"chamber"`` enumerates
the dimer model directly at :func:`~ncdt.roots.limit_theta`; ``"product"``
multiplies the identity-chamber series by :func:`~ncdt.wallcross.limit_product`.
Direct enumeration gets expensive quickly once ``L > 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .combinatorics import ChargedProfile, InvalidInput, SignWord, YoungDiagram
from .dimer import Geometry, enumerate_Z
from .roots import ThetaMap, limit_theta, minimal_word, positive_roots_limit, positive_roots_theta
from .vertex import Z_RTV
from .wallcross import Comparison, compare_on_region, roots_factor

MODES = ("chamber", "product")

Q_RULE = (
    "Q = q_+ q_- q_1...q_{L-1} between equal signs; "
    "Q_s^(1+a+b) with s = sigma(i+1/2) across a sign change"
)


@dataclass
class LimitReport:
    mode: str
    theta: ThetaMap
    word: list
    comparison: Comparison
    roots_ok: bool
    rtv_stable: bool

    @property
    def passed(self) -> bool:
        return self.comparison.passed and self.roots_ok and self.rtv_stable

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "mode": self.mode,
            "theta": list(self.theta.images),
            "word": list(self.word),
            "roots_ok": self.roots_ok,
            "rtv_stable": self.rtv_stable,
            "Q_rule": Q_RULE,
            "comparison": self.comparison.to_json(),
        }


def default_mode(L: int) -> str:
    return "chamber" if L <= 2 else "product"


def verify_limit(
    sigma: SignWord,
    lam: ChargedProfile,
    nu_plus: YoungDiagram,
    nu_minus: YoungDiagram,
    degree_bound: int,
    mode: str | None = None,
    threads: int | None = None,
    margin: int = 0,
) -> LimitReport:
    """``Z`` in the limit chamber against ``Z^RTV`` on the certified region."""
    L = sigma.L
    mode = mode or default_mode(L)
    if mode not in MODES:
        raise InvalidInput(f"unknown limit mode {mode!r}")
    theta = limit_theta(L, degree_bound)
    word = minimal_word(theta)
    base = Geometry(sigma, lam, nu_plus, nu_minus)
    limit_roots = positive_roots_limit(L, degree_bound)
    roots_ok = set(positive_roots_theta(theta, degree_bound)) == set(limit_roots)
    if mode == "chamber":
        side = enumerate_Z(base.with_theta(theta), degree_bound, threads, margin)
        series, region, outside = side.series, side.region, side.outside
    else:
        ident = enumerate_Z(base, degree_bound, threads, margin)
        factor = roots_factor(sigma, lam, limit_roots).series(ident.series.cert)
        series, region, outside = ident.series * factor, ident.region, ident.outside
    rtv = Z_RTV(sigma, lam, nu_plus, nu_minus, region)
    cmp = compare_on_region(series, rtv.series, region, outside)
    return LimitReport(mode, theta, word, cmp, roots_ok, rtv.stable)
