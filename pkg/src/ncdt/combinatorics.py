"""Half-integer indexing, Young diagrams and charged sign profiles.

Half-integers are stored doubled: ``h`` is kept as the odd integer ``2h``.
Signs are the integers ``+1`` and ``-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence


class InvalidInput(ValueError):
    """Raised when a combinatorial datum violates its defining conditions."""


def sgn(x: int) -> int:
    return 1 if x > 0 else -1


def project(n: int, L: int) -> tuple[int, int]:
    """Split an integer as ``n = c*L + r`` with ``0 <= r < L``."""
    if L < 1:
        raise InvalidInput("L must be positive")
    c, r = divmod(n, L)
    return c, r


def project_half(h2: int, L: int) -> tuple[int, int]:
    """Split a doubled half-integer as ``h = c*L + r`` with ``r`` in {1/2, ..., L-1/2}.

    Returns ``(c, 2r)``.
    """
    if L < 1:
        raise InvalidInput("L must be positive")
    if h2 % 2 == 0:
        raise InvalidInput(f"{h2}/2 is not a half-integer")
    c = (h2 - 1) // (2 * L)
    return c, h2 - 2 * c * L


def residue_index(h2: int, L: int) -> int:
    """Index ``k`` in ``0..L-1`` of the residue class ``pi(h) = k + 1/2``."""
    return (project_half(h2, L)[1] - 1) // 2


# -- Young diagrams ---------------------------------------------------------


@dataclass(frozen=True, order=True)
class YoungDiagram:
    """A partition stored as a weakly decreasing tuple of positive rows.

    The profile step at a half-integer ``j`` is ``+`` exactly on the set
    ``{i + 1/2 - rows[i] : i >= 0}`` (rows beyond the end are zero), so
    the empty diagram has steps ``sign(j)`` and a single row of length two
    has ``-`` at ``j = 1/2`` and ``+`` at ``j = 3/2``.
    """

    rows: tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r <= 0 for r in rows):
            raise InvalidInput(f"rows must be positive: {rows}")
        if any(rows[k] < rows[k + 1] for k in range(len(rows) - 1)):
            raise InvalidInput(f"rows must be weakly decreasing: {rows}")
        object.__setattr__(self, "rows", rows)

    def __len__(self) -> int:
        return len(self.rows)

    def __repr__(self) -> str:
        return f"YoungDiagram({list(self.rows)})"

    @property
    def size(self) -> int:
        return sum(self.rows)

    def boxes(self) -> list[tuple[int, int]]:
        """Cells ``(row, column)`` with zero-based coordinates."""
        return [(i, j) for i, r in enumerate(self.rows) for j in range(r)]

    def __contains__(self, cell) -> bool:
        i, j = cell
        return 0 <= i < len(self.rows) and 0 <= j < self.rows[i]

    def transpose(self) -> "YoungDiagram":
        if not self.rows:
            return self
        return YoungDiagram(tuple(sum(1 for r in self.rows if r > c) for c in range(self.rows[0])))

    def _plus_set(self) -> frozenset[int]:
        return frozenset(2 * i + 1 - 2 * r for i, r in enumerate(self.rows))

    def sign(self, j2: int) -> int:
        """Profile step ``nu(j+1/2) - nu(j-1/2)`` at the doubled half-integer ``j2``."""
        if j2 % 2 == 0:
            raise InvalidInput("profile steps live on half-integers")
        n = len(self.rows)
        if j2 >= 2 * n + 1:
            return 1
        return 1 if j2 in self._plus_set() else -1

    def extent(self) -> int:
        """A bound beyond which the profile is ``|n|``."""
        return len(self.rows) + (self.rows[0] if self.rows else 0) + 1

    def profile(self, n: int) -> int:
        """The profile ``nu(n)`` with ``nu(n) = |n|`` for ``|n|`` large."""
        R = self.extent()
        if n >= R or n <= -R:
            return abs(n)
        value = R
        for k in range(R, n, -1):
            value -= self.sign(2 * k - 1)
        return value

    @classmethod
    def from_signs(cls, sign: Callable[[int], int], lo2: int, hi2: int) -> "YoungDiagram":
        """Rebuild a diagram from steps that are ``-`` below ``lo2`` and ``+`` above ``hi2``.

        Raises ``InvalidInput`` when the step sequence has nonzero charge.
        """
        plus = [j2 for j2 in range(lo2, hi2 + 1, 2) if sign(j2) > 0]
        # the plus positions above the window must continue {2i+1}
        if 2 * len(plus) - 1 != hi2:
            raise InvalidInput("step sequence has nonzero charge")
        rows = [(2 * i + 1 - p) // 2 for i, p in enumerate(plus)]
        rows = [r for r in rows if r != 0]
        if any(r < 0 for r in rows):
            raise InvalidInput("step sequence has nonzero charge")
        return cls(tuple(rows))


EMPTY = YoungDiagram()


def partitions(n: int, max_part: int | None = None) -> Iterable[tuple[int, ...]]:
    """All partitions of ``n`` as decreasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def young_diagrams_up_to(size: int) -> list[YoungDiagram]:
    return [YoungDiagram(p) for s in range(size + 1) for p in partitions(s)]


# -- sign words and charged profiles -----------------------------------------


@dataclass(frozen=True)
class SignWord:
    """A map ``sigma`` from the residues {1/2, ..., L-1/2} to signs."""

    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if not signs:
            raise InvalidInput("sign word must be nonempty")
        if any(s not in (1, -1) for s in signs):
            raise InvalidInput(f"signs must be +1/-1: {signs}")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def parse(cls, text: str) -> "SignWord":
        table = {"+": 1, "-": -1, "−": -1}
        try:
            return cls(tuple(table[ch] for ch in text.strip()))
        except KeyError as exc:
            raise InvalidInput(f"bad sign character {exc} in {text!r}") from None

    @property
    def L(self) -> int:
        return len(self.signs)

    @property
    def L_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def L_minus(self) -> int:
        return self.L - self.L_plus

    def __call__(self, h2: int) -> int:
        """``sigma(pi(h))`` for any doubled half-integer."""
        return self.signs[residue_index(h2, self.L)]

    def __str__(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)


@dataclass(frozen=True)
class ChargedProfile:
    """A sign map ``lambda`` on half-integers, asymptotic to ``+-sigma(pi(h))``.

    Values on ``[lo2, hi2]`` are stored; outside, ``lambda(h) = sigma(pi(h))``
    above the window and ``-sigma(pi(h))`` below it.  The window always
    contains ``-1/2`` and ``1/2``.
    """

    sigma: SignWord
    lo2: int
    hi2: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.lo2 % 2 == 0 or self.hi2 % 2 == 0 or self.lo2 > -1 or self.hi2 < 1:
            raise InvalidInput("window must be doubled half-integers containing [-1/2, 1/2]")
        if len(self.values) != (self.hi2 - self.lo2) // 2 + 1:
            raise InvalidInput("window values have the wrong length")
        if any(v not in (1, -1) for v in self.values):
            raise InvalidInput("profile values must be +1/-1")

    @property
    def L(self) -> int:
        return self.sigma.L

    @classmethod
    def trivial(cls, sigma: SignWord) -> "ChargedProfile":
        return cls.from_exceptions(sigma, {})

    @classmethod
    def from_exceptions(cls, sigma: SignWord, values: dict[int, int]) -> "ChargedProfile":
        """Asymptotic profile overridden at the given doubled half-integers."""
        lo2 = min([-1] + list(values))
        hi2 = max([1] + list(values))
        vals = []
        for h2 in range(lo2, hi2 + 1, 2):
            vals.append(values.get(h2, sgn(h2) * sigma(h2)))
        return cls(sigma, lo2, hi2, tuple(vals)).normalized()

    def __call__(self, h2: int) -> int:
        if h2 > self.hi2:
            return self.sigma(h2)
        if h2 < self.lo2:
            return -self.sigma(h2)
        return self.values[(h2 - self.lo2) // 2]

    def normalized(self) -> "ChargedProfile":
        """Shrink the window to the minimal one containing all deviations."""
        dev = [h2 for h2 in range(self.lo2, self.hi2 + 1, 2) if self(h2) != sgn(h2) * self.sigma(h2)]
        lo2 = min([-1] + dev)
        hi2 = max([1] + dev)
        vals = tuple(self(h2) for h2 in range(lo2, hi2 + 1, 2))
        return ChargedProfile(self.sigma, lo2, hi2, vals)

    def exceptions(self) -> dict[int, int]:
        return {
            h2: self(h2)
            for h2 in range(self.lo2, self.hi2 + 1, 2)
            if self(h2) != sgn(h2) * self.sigma(h2)
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChargedProfile):
            return NotImplemented
        return self.sigma == other.sigma and self.exceptions() == other.exceptions()

    def __hash__(self) -> int:
        return hash((self.sigma, tuple(sorted(self.exceptions().items()))))

    def is_trivial(self) -> bool:
        return not self.exceptions()


def core_quotient_decompose(sigma: SignWord, lam: ChargedProfile):
    """Charges ``c[j]`` and diagrams ``lam^[j]`` with
    ``lam(h) = lam^[pi(h)](sigma(pi h) * (c(h) - c[pi h] + 1/2))``.

    Both are returned as tuples indexed by ``k`` with ``j = k + 1/2``.
    """
    if lam.sigma != sigma:
        raise InvalidInput("profile was built for a different sign word")
    L = sigma.L
    cmin = (lam.lo2 - 1) // (2 * L) - 1
    cmax = (lam.hi2 - 1) // (2 * L) + 1
    cores, quotients = [], []
    for k in range(L):
        s = sigma.signs[k]
        j2 = 2 * k + 1
        def qsign(y2, shift, s=s):
            c = (s * y2 - 1) // 2 + shift
            return lam(2 * c * L + j2)

        span = 2 * (cmax - cmin + 2) + 1
        charge = sum(1 for y2 in range(-span, 0, 2) if qsign(y2, 0) > 0) - sum(
            1 for y2 in range(1, span + 1, 2) if qsign(y2, 0) < 0
        )
        core = -s * charge
        lo2 = -(2 * (cmax - cmin + abs(core) + 3) + 1)
        diagram = YoungDiagram.from_signs(lambda y2: qsign(y2, core), lo2, -lo2)
        cores.append(core)
        quotients.append(diagram)
    return tuple(cores), tuple(quotients)


def core_quotient_compose(
    sigma: SignWord, cores: Sequence[int], quotients: Sequence[YoungDiagram]
) -> ChargedProfile:
    L = sigma.L
    if len(cores) != L or len(quotients) != L:
        raise InvalidInput("need one core and one quotient per residue")
    values = {}
    for k in range(L):
        s = sigma.signs[k]
        R = quotients[k].extent() + abs(cores[k]) + 2
        for c in range(-R, R + 1):
            h2 = 2 * c * L + 2 * k + 1
            y2 = s * (2 * (c - cores[k]) + 1)
            values[h2] = quotients[k].sign(y2)
    return ChargedProfile.from_exceptions(sigma, values)
