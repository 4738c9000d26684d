"""Noncommutative Donaldson-Thomas invariants of small resolutions via dimers."""

from .combinatorics import ChargedProfile, InvalidInput, SignWord, YoungDiagram
from .dimer import Geometry, Region, WindowExhausted, enumerate_Z
from .roots import ThetaMap, mutate_theta
from .series import Series

__version__ = "0.1.0"

__all__ = [
    "ChargedProfile",
    "Geometry",
    "InvalidInput",
    "Region",
    "Series",
    "SignWord",
    "ThetaMap",
    "WindowExhausted",
    "YoungDiagram",
    "enumerate_Z",
    "mutate_theta",
]
