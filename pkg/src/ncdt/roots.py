"""Affine type-A root lattice, chamber maps and the B-sets of a charged profile.

A root vector is a tuple of ``L`` integers, the coefficients of
``alpha_0, ..., alpha_{L-1}``.  Half-integers are doubled, as everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .combinatorics import ChargedProfile, InvalidInput, SignWord, project_half, residue_index

RootVector = tuple


def zero_root(L: int) -> RootVector:
    return (0,) * L


def delta(L: int) -> RootVector:
    return (1,) * L


def root_add(a: RootVector, b: RootVector) -> RootVector:
    return tuple(x + y for x, y in zip(a, b))


def root_neg(a: RootVector) -> RootVector:
    return tuple(-x for x in a)


def root_degree(a: RootVector) -> int:
    return sum(a)


def root_interval(h2: int, k2: int, L: int) -> RootVector:
    """``alpha_[h,h']``: the sum of ``alpha_pi(n)`` over integers strictly between."""
    if h2 == k2:
        return zero_root(L)
    if h2 > k2:
        return root_neg(root_interval(k2, h2, L))
    coeffs = [0] * L
    lo, hi = (h2 + 1) // 2, (k2 - 1) // 2
    full, rest = divmod(hi - lo + 1, L)
    for i in range(L):
        coeffs[i] = full
    for n in range(lo, lo + rest):
        coeffs[n % L] += 1
    return tuple(coeffs)


def real_root_representative(alpha: RootVector) -> tuple[int, int]:
    """A pair ``(h, h')`` with ``alpha_[h,h'] = alpha`` and ``pi(h)`` in the base period.

    Raises ``InvalidInput`` for zero, imaginary, or non-roots.
    """
    L = len(alpha)
    total = sum(alpha)
    if total == 0 or total % L == 0 and len(set(alpha)) == 1:
        raise InvalidInput(f"{alpha} is not a real root")
    sign = 1 if total > 0 else -1
    target = alpha if sign > 0 else root_neg(alpha)
    length = abs(total)
    for k in range(L):
        h2 = 2 * k + 1
        if root_interval(h2, h2 + 2 * length, L) == target:
            return (h2, h2 + 2 * length) if sign > 0 else (h2 + 2 * length, h2)
    raise InvalidInput(f"{alpha} is not a real root")


def is_positive_real(alpha: RootVector) -> bool:
    try:
        h2, k2 = real_root_representative(alpha)
    except InvalidInput:
        return False
    return h2 < k2


def j_minus_plus(alpha: RootVector) -> tuple[int, int]:
    """Doubled residues ``(j_-(alpha), j_+(alpha))``."""
    L = len(alpha)
    h2, k2 = real_root_representative(alpha)
    return project_half(h2, L)[1], project_half(k2, L)[1]


# -- chamber maps -----------------------------------------------------------


@dataclass(frozen=True)
class ThetaMap:
    """A bijection of the half-integers commuting with translation by ``L``.

    ``images[k]`` is the doubled image of ``k + 1/2``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        L = len(images)
        if L == 0 or any(x % 2 == 0 for x in images):
            raise InvalidInput("theta images must be doubled half-integers")
        residues = sorted(project_half(x, L)[1] for x in images)
        if residues != list(range(1, 2 * L, 2)):
            raise InvalidInput("theta must permute the residues mod L")
        if sum(images) != L * L:
            raise InvalidInput("theta violates the sum condition ∑θ(h)=∑h")

    @classmethod
    def identity(cls, L: int) -> "ThetaMap":
        return cls(tuple(range(1, 2 * L, 2)))

    @classmethod
    def from_word(cls, L: int, word: Sequence[int]) -> "ThetaMap":
        theta = cls.identity(L)
        for i in word:
            theta = mutate_theta(theta, i)
        return theta

    @classmethod
    def from_inverse(cls, preimages: Sequence[int]) -> "ThetaMap":
        """The map with ``theta^{-1}(k + 1/2) = preimages[k] / 2``."""
        L = len(preimages)
        images = [0] * L
        for k, h2 in enumerate(preimages):
            c, r2 = project_half(h2, L)
            images[(r2 - 1) // 2] = 2 * k + 1 - 2 * c * L
        return cls(tuple(images))

    @property
    def L(self) -> int:
        return len(self.images)

    def __call__(self, h2: int) -> int:
        c, r2 = project_half(h2, self.L)
        return self.images[(r2 - 1) // 2] + 2 * c * self.L

    @cached_property
    def _inverse_table(self) -> dict[int, int]:
        L = self.L
        table = {}
        for k, x in enumerate(self.images):
            c, r2 = project_half(x, L)
            table[r2] = 2 * k + 1 - 2 * c * L
        return table

    def inverse(self, h2: int) -> int:
        c, r2 = project_half(h2, self.L)
        return self._inverse_table[r2] + 2 * c * self.L

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, 2 * self.L, 2))

    def max_shift(self) -> int:
        """Largest ``|theta(h) - h|`` in doubled units."""
        return max(abs(x - (2 * k + 1)) for k, x in enumerate(self.images))


def mu_vertex(h2: int, i: int, L: int) -> int:
    """The simple reflection ``mu_i`` on half-integers."""
    if L < 2:
        raise InvalidInput("mutations need L >= 2")
    if ((h2 - 1) // 2) % L == i % L:
        return h2 - 2
    if ((h2 + 1) // 2) % L == i % L:
        return h2 + 2
    return h2


def mutate_theta(theta: ThetaMap, i: int) -> ThetaMap:
    L = theta.L
    return ThetaMap(tuple(theta(mu_vertex(2 * k + 1, i, L)) for k in range(L)))


def alpha_theta_i(theta: ThetaMap, i: int) -> RootVector:
    n = i % theta.L
    return root_interval(theta(2 * n - 1), theta(2 * n + 1), theta.L)


def theta_sign(theta: ThetaMap, alpha: RootVector) -> int:
    """``+1`` when ``theta(alpha) > 0`` for a positive real root."""
    h2, k2 = real_root_representative(alpha)
    if h2 > k2:
        raise InvalidInput(f"{alpha} is not a positive root")
    return 1 if theta.inverse(h2) > theta.inverse(k2) else -1


def positive_real_roots(L: int, degree_bound: int) -> list[RootVector]:
    out = set()
    for k in range(L):
        for length in range(1, degree_bound + 1):
            if length % L:
                out.add(root_interval(2 * k + 1, 2 * k + 1 + 2 * length, L))
    return sorted(out, key=lambda a: (sum(a), a))


def positive_roots_theta(theta: ThetaMap, degree_bound: int) -> list[RootVector]:
    if degree_bound < 0:
        raise InvalidInput("degree bound must be nonnegative")
    return [a for a in positive_real_roots(theta.L, degree_bound) if theta_sign(theta, a) > 0]


def finite_positive_roots(L: int) -> list[RootVector]:
    return sorted(
        {root_interval(2 * a + 1, 2 * b + 1, L) for a in range(L) for b in range(a + 1, L)},
        key=lambda r: (sum(r), r),
    )


def positive_roots_limit(L: int, degree_bound: int) -> list[RootVector]:
    """Roots ``delta - alpha + N delta`` (``alpha`` finite, ``N >= 0``) of degree at most ``degree_bound``.

    These are exactly the roots that become positive along chambers whose
    inverse keeps ``1/2, 3/2, ..., L - 1/2`` in increasing order while
    spreading them apart.
    """
    if degree_bound < 0:
        raise InvalidInput("degree bound must be nonnegative")
    out = []
    for a in range(L):
        for b in range(a + 1, L):
            N = 0
            while True:
                root = root_interval(2 * b + 1, 2 * a + 1 + 2 * L * (N + 1), L)
                if sum(root) > degree_bound:
                    break
                out.append(root)
                N += 1
    return sorted(out, key=lambda r: (sum(r), r))


def limit_theta(L: int, degree_bound: int) -> ThetaMap:
    """A chamber with identity ordering that has crossed every limit root up to ``degree_bound``.

    ``theta^{-1}(k + 1/2) = k + 1/2 + L * M * (2k - L + 1)`` with the
    smallest ``M`` that works.
    """
    if L < 2:
        return ThetaMap.identity(L)
    N = max(degree_bound - 1, 0) // L
    M = (N + 2) // 2
    return ThetaMap.from_inverse([2 * k + 1 + 2 * L * M * (2 * k - L + 1) for k in range(L)])


def minimal_word(theta: ThetaMap) -> list[int]:
    """A minimal word reaching ``theta`` from the identity."""
    L = theta.L
    word = []
    while not theta.is_identity():
        for i in range(L):
            prev = mutate_theta(theta, i)
            if is_forward_step(prev, i):
                word.append(i)
                theta = prev
                break
        else:
            raise InvalidInput("no descent found")
    return word[::-1]


def is_forward_step(theta: ThetaMap, i: int) -> bool:
    """Whether ``mu_i`` crosses a wall not yet crossed by ``theta``."""
    a = alpha_theta_i(theta, i)
    return is_positive_real(a) and theta_sign(theta, a) < 0


def is_minimal_word(L: int, word: Sequence[int]) -> bool:
    theta = ThetaMap.identity(L)
    for i in word:
        if not is_forward_step(theta, i):
            return False
        theta = mutate_theta(theta, i)
    return True


def word_roots(L: int, word: Sequence[int]) -> list[RootVector]:
    """Roots ``alpha_{i,1}, alpha_{i,2}, ...`` crossed along a mutation word."""
    theta = ThetaMap.identity(L)
    out = []
    for i in word:
        out.append(alpha_theta_i(theta, i))
        theta = mutate_theta(theta, i)
    return out


# -- B-sets -------------------------------------------------------------------


def _scan_range(lam: ChargedProfile, span2: int) -> range:
    L = lam.L
    lo = (lam.lo2 - abs(span2)) // (2 * L) - 2
    hi = (lam.hi2 + abs(span2)) // (2 * L) + 2
    return range(lo, hi + 1)


def B_alpha_pm(sigma: SignWord, lam: ChargedProfile, alpha: RootVector):
    """Pairs ``(h, h')`` in ``B^alpha`` with ``-lam(h)sigma(h) = lam(h')sigma(h') = +-``."""
    L = sigma.L
    h2, k2 = real_root_representative(alpha)
    plus, minus = [], []
    for c in _scan_range(lam, k2 - h2):
        a, b = h2 + 2 * c * L, k2 + 2 * c * L
        x, y = -lam(a) * sigma(a), lam(b) * sigma(b)
        if x == y:
            (plus if x > 0 else minus).append((a, b))
    return plus, minus


def B_i_pm(sigma: SignWord, lam: ChargedProfile, theta: ThetaMap, i: int):
    """Integers ``n = i mod L`` with ``(theta(n-1/2), theta(n+1/2))`` in ``B^{alpha(theta,i),+-}``."""
    L = sigma.L
    alpha = alpha_theta_i(theta, i)
    plus_pairs, minus_pairs = B_alpha_pm(sigma, lam, alpha)
    plus, minus = set(plus_pairs), set(minus_pairs)
    n0 = i % L
    a0, b0 = theta(2 * n0 - 1), theta(2 * n0 + 1)
    out_p, out_m = [], []
    for c in _scan_range(lam, abs(b0 - a0) + abs(a0)):
        pair = (a0 + 2 * c * L, b0 + 2 * c * L)
        if pair in plus:
            out_p.append(n0 + c * L)
        elif pair in minus:
            out_m.append(n0 + c * L)
    return out_p, out_m


def inversion_pairs(sigma: SignWord, lam: ChargedProfile) -> list[tuple[int, int]]:
    """All ``h < h'`` with ``lam sigma(h) = +`` and ``lam sigma(h') = -``.

    This is the finite union of ``B^{alpha,-}`` over positive roots (including
    congruent pairs, which callers drop when they need real roots).
    """
    lo, hi = lam.lo2, lam.hi2
    hs = [h2 for h2 in range(lo, hi + 1, 2) if lam(h2) * sigma(h2) > 0]
    ks = [k2 for k2 in range(lo, hi + 1, 2) if lam(k2) * sigma(k2) < 0]
    return [(a, b) for a in hs for b in ks if a < b]


def sigma_of_root(sigma: SignWord, alpha: RootVector) -> int:
    jm, jp = j_minus_plus(alpha)
    return sigma(jm) * sigma(jp)


def residue_of(h2: int, L: int) -> int:
    return residue_index(h2, L)
