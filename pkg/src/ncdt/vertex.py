"""Three-dimensional Young diagrams with a preferred axis and the refined vertex sums.

A 2D diagram is a subset of ``Z_{>=0}^2`` through ``(row, col)``; the leg
along the x axis of a diagram ``lx`` is ``{(x, y, z) : (y, z) in lx}``, along
y it is ``{(z, x) in ly}`` and along z ``{(x, y) in lz}``.  Boxes of the leg
``lx`` have content ``y - z``, which is what the profile signs of ``lx`` see.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .combinatorics import (
    EMPTY,
    ChargedProfile,
    InvalidInput,
    SignWord,
    YoungDiagram,
    core_quotient_decompose,
    partitions,
)
from .dimer import Region, unrefined_vector
from .series import (
    Q_sign,
    Series,
    grading,
    mono_div,
    mono_mul,
    mono_pow,
    one,
    q_minus,
    q_plus,
    q_prod,
)

Box = tuple


def _in_leg(d: YoungDiagram, a: int, b: int) -> bool:
    return (a, b) in d


@dataclass(frozen=True)
class PlaneType:
    lx: YoungDiagram = EMPTY
    ly: YoungDiagram = EMPTY
    lz: YoungDiagram = EMPTY

    def in_x(self, p: Box) -> bool:
        return _in_leg(self.lx, p[1], p[2])

    def in_y(self, p: Box) -> bool:
        return _in_leg(self.ly, p[2], p[0])

    def in_z(self, p: Box) -> bool:
        return _in_leg(self.lz, p[0], p[1])

    def in_min(self, p: Box) -> bool:
        return self.in_x(p) or self.in_y(p) or self.in_z(p)

    def reach(self) -> int:
        """Beyond this coordinate only one leg can contain a box."""
        return max(d.extent() for d in (self.lx, self.ly, self.lz))

    def overlaps(self):
        """Boxes lying in two or three legs (a finite set), with multiplicity data."""
        R = self.reach()
        out = []
        for p in product(range(R + 1), repeat=3):
            k = self.in_x(p) + self.in_y(p) + self.in_z(p)
            if k >= 2:
                out.append((p, k))
        return out


@dataclass(frozen=True)
class PlanePartition:
    """``Lambda^min`` of ``ptype`` together with finitely many extra boxes."""

    ptype: PlaneType
    excess: frozenset = frozenset()

    def __contains__(self, p: Box) -> bool:
        return p in self.excess or self.ptype.in_min(p)

    @property
    def size(self) -> int:
        return len(self.excess)

    def is_valid(self) -> bool:
        for p in self.excess:
            if min(p) < 0 or self.ptype.in_min(p):
                return False
            for k in range(3):
                if p[k] > 0:
                    q = p[:k] + (p[k] - 1,) + p[k + 1 :]
                    if q not in self:
                        return False
        return True


def _addable(ptype: PlaneType, excess: frozenset, p: Box) -> bool:
    if p in excess or ptype.in_min(p):
        return False
    for k in range(3):
        if p[k] > 0:
            q = p[:k] + (p[k] - 1,) + p[k + 1 :]
            if q not in excess and not ptype.in_min(q):
                return False
    return True


def enumerate_3dyd(ptype: PlaneType, box_bound: int) -> Iterator[PlanePartition]:
    """Every 3D diagram of the given type with at most ``box_bound`` extra boxes.

    Diagrams come out by size, each size in sorted order.
    """
    if box_bound < 0:
        raise InvalidInput("box bound must be nonnegative")
    R = ptype.reach() + 1
    seeds = [p for p in product(range(R + 1), repeat=3) if _addable(ptype, frozenset(), p)]
    layer = [frozenset()]
    for k in range(box_bound + 1):
        for ex in layer:
            yield PlanePartition(ptype, ex)
        if k == box_bound:
            break
        nxt = set()
        for ex in layer:
            cand = set(seeds)
            for p in ex:
                for j in range(3):
                    cand.add(p[:j] + (p[j] + 1,) + p[j + 1 :])
            for p in cand:
                if _addable(ptype, ex, p):
                    nxt.add(ex | {p})
        layer = sorted(nxt, key=lambda s: sorted(s))


# -- weights ------------------------------------------------------------------


def box_weight(lx: YoungDiagram, m: int, L: int):
    """``w_lx(m) = q_{lx(m-1/2)} q_{lx(m+1/2)} q_1 ... q_{L-1}``."""
    w = q_prod(L, 1, L - 1)
    for j2 in (2 * m - 1, 2 * m + 1):
        w = mono_mul(w, q_plus(L) if lx.sign(j2) > 0 else q_minus(L))
    return w


def _weight_of(boxes, lx: YoungDiagram, L: int):
    w = one(L)
    for p in boxes:
        w = mono_mul(w, box_weight(lx, p[1] - p[2], L))
    return w


def weight_regularized(pp: PlanePartition, L: int = 1):
    """``w(Lambda)``: the extra boxes times the inclusion-exclusion leg overlaps."""
    lx = pp.ptype.lx
    w = _weight_of(pp.excess, lx, L)
    for p, k in pp.ptype.overlaps():
        # a box in k legs is divided out k times but counted once
        w = mono_mul(w, mono_pow(box_weight(lx, p[1] - p[2], L), 1 - k))
    return w


def weight_in_cube(pp: PlanePartition, N: int, L: int = 1):
    """The same weight computed literally inside ``[0, N]^3``."""
    t = pp.ptype
    lx = t.lx
    num = one(L)
    den = one(L)
    for p in product(range(N + 1), repeat=3):
        w = box_weight(lx, p[1] - p[2], L)
        if p in pp:
            num = mono_mul(num, w)
        for inside in (t.in_x(p), t.in_y(p), t.in_z(p)):
            if inside:
                den = mono_mul(den, w)
    return mono_div(num, den)


def w_eta(eta: YoungDiagram, p, Q):
    """``prod_i (p Q^{i-1})^{eta_i}`` over the rows of ``eta``."""
    w = tuple(0 for _ in p)
    for i, r in enumerate(eta.rows):
        w = mono_mul(w, mono_pow(mono_mul(p, mono_pow(Q, i)), r))
    return w


def boundary_factor(sigma: SignWord, nu_plus: YoungDiagram, nu_minus: YoungDiagram):
    """Weights of the two outer legs.

    ``nu_-`` sits next to residue ``1/2`` and contributes
    ``w(nu_-; q_s, Q_s)`` with ``s = sigma(1/2)``; ``nu_+`` contributes
    ``w(nu_+; q_s, Q_s)`` with ``s = -sigma(L - 1/2)``.  A leg whose sign
    is ``-`` on the inner side enters transposed.
    """
    L = sigma.L
    first, last = sigma.signs[0], sigma.signs[-1]
    lo = nu_minus if first > 0 else nu_minus.transpose()
    hi = nu_plus if last > 0 else nu_plus.transpose()
    return mono_mul(
        w_eta(lo, _q_of(first, L), Q_sign(L, first)),
        w_eta(hi, _q_of(-last, L), Q_sign(L, -last)),
    )


def _q_of(s: int, L: int):
    return q_plus(L) if s > 0 else q_minus(L)


def vertex_series(ptype: PlaneType, box_bound: int, L: int = 1) -> Series:
    """``G_{lx,ly,lz}`` over diagrams with at most ``box_bound`` extra boxes.

    Every extra box has grading ``2L``, so the result is exact up to the
    grading of the minimal diagram plus ``2L * box_bound + 2L - 1``.
    """
    terms: dict = {}
    g0 = None
    for pp in enumerate_3dyd(ptype, box_bound):
        w = weight_regularized(pp, L)
        if g0 is None:
            g0 = grading(w)
        terms[w] = terms.get(w, 0) + 1
    cert = g0 + 2 * L * (box_bound + 1) - 1
    return Series(terms, cert, True, L + 1)


# -- the assembled sum over vertex data -------------------------------------


def vertex_Q(L: int):
    """The constant ``Q = q_+ q_- q_1 ... q_{L-1}`` used by the edge factors."""
    return mono_mul(mono_mul(q_plus(L), q_minus(L)), q_prod(L, 1, L - 1))


def edge_factor(sigma: SignWord, i: int, nu: YoungDiagram, Q=None):
    """Weight of the diagram ``nu`` sitting between residues ``i - 1/2`` and ``i + 1/2``.

    A box ``(a, b)`` costs ``q_i Q^(2a+1)`` between two ``+`` residues and
    ``q_i Q^(2b+1)`` between two ``-`` residues.  Across a sign change the
    cost is ``q_i Q_s^(1+a+b)`` with ``s = sigma(i + 1/2)``.
    """
    L = sigma.L
    if not 1 <= i <= L - 1:
        raise InvalidInput(f"edge index {i} outside 1..{L - 1}")
    if Q is None:
        Q = vertex_Q(L)
    a, b = sigma.signs[i - 1], sigma.signs[i]
    qi = q_prod(L, i, i)
    Qs = Q_sign(L, b)
    w = one(L)
    for al, be in nu.boxes():
        if a != b:
            m = mono_mul(qi, mono_pow(Qs, 1 + al + be))
        elif a > 0:
            m = mono_mul(qi, mono_pow(Q, 2 * al + 1))
        else:
            m = mono_mul(qi, mono_pow(Q, 2 * be + 1))
        w = mono_mul(w, m)
    return w


def vertex_types(sigma: SignWord, quotients: Sequence[YoungDiagram], nus: Sequence[YoungDiagram]):
    """Types of ``Lambda^(j)`` given the full chain ``nu^(0), ..., nu^(L)``."""
    out = []
    for k, s in enumerate(sigma.signs):
        below, above = nus[k], nus[k + 1]
        if s > 0:
            out.append(PlaneType(quotients[k], above, below.transpose()))
        else:
            out.append(PlaneType(quotients[k], below.transpose(), above))
    return out


@dataclass(frozen=True)
class VertexDatum:
    nus: tuple
    parts: tuple

    def to_json(self) -> dict:
        return {
            "nus": [list(n.rows) for n in self.nus],
            "parts": [sorted(list(p) for p in pp.excess) for pp in self.parts],
        }


def datum_weight(sigma: SignWord, datum: VertexDatum, nu_plus, nu_minus, Q=None):
    L = sigma.L
    w = boundary_factor(sigma, nu_plus, nu_minus)
    for pp in datum.parts:
        w = mono_mul(w, weight_regularized(pp, L))
    for i, nu in enumerate(datum.nus, start=1):
        w = mono_mul(w, edge_factor(sigma, i, nu, Q))
    return w


def _nu_tuples(count: int, total: int):
    diagrams = [YoungDiagram(p) for s in range(total + 1) for p in partitions(s)]
    for combo in product(diagrams, repeat=count):
        if sum(d.size for d in combo) <= total:
            yield combo


@dataclass
class RTVResult:
    series: Series
    region: Region
    nu_bound: int
    stable: bool


def _degree(u, ref) -> int:
    g = [a - b for a, b in zip(u, ref)]
    return g[0] // 2 + sum(g[1:])


def Z_RTV(
    sigma: SignWord,
    lam: ChargedProfile,
    nu_plus: YoungDiagram,
    nu_minus: YoungDiagram,
    region: Region,
    nu_bound: int | None = None,
    Q=None,
) -> RTVResult:
    """Sum of ``w_sigma`` over vertex data, restricted to ``region``.

    Chains ``nu^(1..L-1)`` of total size up to ``nu_bound`` are visited; the
    result is flagged ``stable`` when one more unit of ``nu_bound`` adds
    nothing inside the region.
    """
    L = sigma.L
    quotients = core_quotient_decompose(sigma, lam)[1]
    if nu_bound is None:
        nu_bound = region.bound + 2

    def collect(nb: int) -> dict:
        terms: dict = {}
        for inner in _nu_tuples(L - 1, nb):
            chain = (nu_minus,) + tuple(inner) + (nu_plus,)
            types = vertex_types(sigma, quotients, chain)
            base = boundary_factor(sigma, nu_plus, nu_minus)
            for i, nu in enumerate(inner, start=1):
                base = mono_mul(base, edge_factor(sigma, i, nu, Q))
            for t in types:
                base = mono_mul(base, weight_regularized(PlanePartition(t), L))
            slack = region.bound - _degree(unrefined_vector(base), region.ref)
            if slack < 0:
                continue
            # every extra box has degree L
            per = [list(enumerate_3dyd(t, slack // L)) for t in types]
            _accumulate(terms, base, per, slack // L, L, region)
        return terms

    terms = collect(nu_bound)
    stable = collect(nu_bound + 1) == terms
    cert = region.max_grading()
    return RTVResult(Series(terms, cert, True, L + 1), region, nu_bound, stable)


def _accumulate(terms, base, per, budget, L, region):
    def rec(k, w, left):
        if k == len(per):
            if region.contains(w):
                terms[w] = terms.get(w, 0) + 1
            return
        for pp in per[k]:
            if pp.size > left:
                break
            extra = _weight_of(pp.excess, pp.ptype.lx, L)
            rec(k + 1, mono_mul(w, extra), left - pp.size)

    rec(0, base, budget)
