"""Shared constructors for the test suite."""

from ncdt.combinatorics import ChargedProfile, SignWord, YoungDiagram
from ncdt.dimer import Geometry
from ncdt.roots import ThetaMap

# the L=3 running example: sign word and profile exceptions (doubled keys)
EX2 = ("+--", {-5: 1, 1: -1})


def profile(sig: str, exc=None) -> ChargedProfile:
    return ChargedProfile.from_exceptions(SignWord.parse(sig), exc or {})


def make_geom(sig: str, exc=None, nu_plus=(), nu_minus=(), word=()) -> Geometry:
    sigma = SignWord.parse(sig)
    lam = ChargedProfile.from_exceptions(sigma, exc or {})
    theta = ThetaMap.from_word(sigma.L, word) if word else None
    return Geometry(sigma, lam, YoungDiagram(tuple(nu_plus)), YoungDiagram(tuple(nu_minus)), theta)
