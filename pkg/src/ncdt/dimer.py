"""The periodic bipartite lattice, its weights, the grand state and the melting enumerator.

Coordinates
-----------
Faces are integer pairs ``(n, m)`` with ``n + m`` even.  Edges are tuples
``('s', h2, k2)`` for the slanted edge ``es(h, k)`` (doubled half-integers)
and ``('h', n, m)`` for the horizontal edge ``eh(n, m)`` of a hexagonal
column.  A vertex is ``(n, m, side)`` where ``side`` is 0 (left) or 1 (right)
inside a hexagonal column and always 0 inside a quadrilateral column.

A melting state is a finite map ``H`` from faces to positive integers; the
matching it encodes differs from the grand state exactly on edges whose two
faces carry different heights.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .combinatorics import (
    EMPTY,
    ChargedProfile,
    InvalidInput,
    SignWord,
    YoungDiagram,
    core_quotient_decompose,
    project_half,
)
from .roots import ThetaMap, inversion_pairs, root_interval, theta_sign
from .series import (
    INF,
    Q_sign,
    Series,
    grading,
    mono_div,
    mono_mul,
    mono_pow,
    q_minus,
    q_plus,
    q_prod,
)

# Orientation of face boundaries: +1 walks clockwise with y pointing up.
ORIENT = 1
# Whether the boundary diagrams enter the grand state through their transpose.
NU_TRANSPOSE = True
# Height jump across a horizontal edge that marks it as a grand-state edge.
EH_JUMP = -2


class WindowExhausted(RuntimeError):
    """The computation window did not contain all non-asymptotic behaviour."""


@dataclass(frozen=True)
class Geometry:
    sigma: SignWord
    lam: ChargedProfile
    nu_plus: YoungDiagram = EMPTY
    nu_minus: YoungDiagram = EMPTY
    theta: ThetaMap | None = None

    def __post_init__(self):
        if self.lam.sigma != self.sigma:
            raise InvalidInput("lambda was built over a different sign word")
        if self.theta is None:
            object.__setattr__(self, "theta", ThetaMap.identity(self.sigma.L))
        if self.theta.L != self.sigma.L:
            raise InvalidInput("theta and sigma disagree on L")
        object.__setattr__(self, "_cache", {})

    def __getstate__(self):
        return {k: v for k, v in self.__dict__.items() if k != "_cache"}

    def __setstate__(self, state):
        self.__dict__.update(state)
        object.__setattr__(self, "_cache", {})

    # -- basic data ---------------------------------------------------------

    @property
    def L(self) -> int:
        return self.sigma.L

    def with_theta(self, theta: ThetaMap) -> "Geometry":
        return Geometry(self.sigma, self.lam, self.nu_plus, self.nu_minus, theta)

    def with_nu(self, nu_plus: YoungDiagram, nu_minus: YoungDiagram) -> "Geometry":
        return Geometry(self.sigma, self.lam, nu_plus, nu_minus, self.theta)

    def tsig(self, h2: int) -> int:
        return self.sigma(self.theta(h2))

    def tlam(self, h2: int) -> int:
        return self.lam(self.theta(h2))

    def is_hex(self, n: int) -> bool:
        return self.tsig(2 * n - 1) == self.tsig(2 * n + 1)

    def col_sign(self, n: int) -> int:
        """``tsig(n)`` for a hexagonal column."""
        return self.tsig(2 * n - 1)

    @property
    def radius(self) -> int:
        """Beyond ``|n| > radius`` every profile is in its asymptotic regime."""
        c = self._cache
        if "radius" not in c:
            lam_span = max(abs(self.lam.lo2), abs(self.lam.hi2))
            c["radius"] = (lam_span + self.theta.max_shift()) // 2 + 2
        return c["radius"]

    @property
    def cores(self) -> tuple[int, ...]:
        c = self._cache
        if "cq" not in c:
            c["cq"] = core_quotient_decompose(self.sigma, self.lam)
        return c["cq"][0]

    # -- height profiles ----------------------------------------------------

    def _table(self, key, builder):
        c = self._cache
        if key not in c:
            c[key] = builder()
        return c[key]

    def _extend(self, n: int):
        """Make sure profile tables cover ``n``."""
        R = self.radius
        need = max(abs(n), R) + 1
        tab = self._cache.get("profiles")
        if tab is not None and tab["span"] >= need:
            return tab
        span = max(need, 2 * (tab["span"] if tab else 0), 4 * R)
        F = {0: 0}
        for k in range(1, span + 1):
            F[k] = F[k - 1] - self.tlam(2 * k - 1)
            F[-k] = F[-k + 1] + self.tlam(-2 * k + 1)
        Fp = {span: F[span]}
        for k in range(span, -span, -1):
            Fp[k - 1] = Fp[k] + self.tsig(2 * k - 1)
        Fm = {-span: F[-span]}
        for k in range(-span + 1, span + 1):
            Fm[k] = Fm[k - 1] + self.tsig(2 * k - 1)
        G = {span: span}
        for k in range(span, -span, -1):
            G[k - 1] = G[k] - self.tsig(2 * k - 1) * self.tlam(2 * k - 1)
        if G[-span] != span:
            raise InvalidInput(
                "the column profile does not return to |n| on the left; "
                "the cores of lambda must sum to zero"
            )
        for k in range(R, span + 1):
            if Fp[k] != F[k] or Fm[-k] != F[-k]:
                raise AssertionError("asymptotic profiles disagree with F")
        tab = {"span": span, "F": F, "Fp": Fp, "Fm": Fm, "G": G}
        self._cache["profiles"] = tab
        return tab

    def _linear(self, name: str, n: int) -> int:
        tab = self._extend(n)
        return tab[name][n]

    def F(self, n: int) -> int:
        return self._linear("F", n)

    def F_plus(self, n: int) -> int:
        return self._linear("Fp", n)

    def F_minus(self, n: int) -> int:
        return self._linear("Fm", n)

    def G_col(self, n: int) -> int:
        return self._linear("G", n)

    def G_base(self, n: int, m: int) -> int:
        return self.G_col(n) + abs(m - self.F(n))

    def _nu_profile(self, nu: YoungDiagram, j: int) -> int:
        return nu.profile(-j if NU_TRANSPOSE else j)

    def G_plus(self, n: int, m: int) -> int:
        return 2 * self._nu_profile(self.nu_plus, (m - self.F_plus(n)) // 2) + n

    def G_minus(self, n: int, m: int) -> int:
        return 2 * self._nu_profile(self.nu_minus, (m - self.F_minus(n)) // 2) - n

    def G(self, f) -> int:
        n, m = f
        return max(self.G_base(n, m), self.G_plus(n, m), self.G_minus(n, m))

    # -- graph structure ----------------------------------------------------

    def face_boundary(self, f):
        """``[(edge, in_plus)]`` for the boundary of ``f`` (``in_plus``: edge lies in the plus part)."""
        n, m = f
        a, b = self.tsig(2 * n - 1), self.tsig(2 * n + 1)
        o = ORIENT
        out = [
            (("s", 2 * n + 1, 2 * m + 1), b * o > 0),
            (("s", 2 * n + 1, 2 * m - 1), b * o < 0),
            (("s", 2 * n - 1, 2 * m - 1), a * o < 0),
            (("s", 2 * n - 1, 2 * m + 1), a * o > 0),
        ]
        if a == b:
            out.append((("h", n, m + 1), a * o < 0))
            out.append((("h", n, m - 1), a * o > 0))
        return out

    def edge_faces(self, e):
        """The two faces ``(f_minus, f_plus)`` with ``e`` in their minus/plus boundary."""
        if e[0] == "h":
            _, n, m = e
            lo, hi = (n, m - 1), (n, m + 1)
        else:
            _, h2, k2 = e
            if ((h2 + k2) // 2) % 2:
                lo, hi = ((h2 - 1) // 2, (k2 - 1) // 2), ((h2 + 1) // 2, (k2 + 1) // 2)
            else:
                lo, hi = ((h2 + 1) // 2, (k2 - 1) // 2), ((h2 - 1) // 2, (k2 + 1) // 2)
        for edge, plus in self.face_boundary(lo):
            if edge == e:
                return (hi, lo) if plus else (lo, hi)
        raise AssertionError(f"edge {e} not on face {lo}")

    def _side(self, n: int, m: int, side: int):
        return (n, m, side if self.is_hex(n) else 0)

    def edge_endpoints(self, e):
        if e[0] == "h":
            _, n, m = e
            return (n, m, 0), (n, m, 1)
        _, h2, k2 = e
        left_col, right_col = (h2 - 1) // 2, (h2 + 1) // 2
        if ((h2 - k2) // 2) % 2 == 0:
            return self._side(left_col, (k2 + 1) // 2, 1), self._side(right_col, (k2 - 1) // 2, 0)
        return self._side(left_col, (k2 - 1) // 2, 1), self._side(right_col, (k2 + 1) // 2, 0)

    def vertex_color(self, v) -> int:
        n, m, side = v
        if self.is_hex(n) and side == 0:
            return -self.tsig(2 * n - 1)
        return self.tsig(2 * n + 1)

    def vertex_edges(self, v):
        """All edges incident to a vertex."""
        n, m, side = v
        hexcol = self.is_hex(n)
        out = []
        if hexcol:
            out.append(("h", n, m))
        if not hexcol or side == 1:
            # slanted edges to column n+1 at h = n + 1/2
            h2 = 2 * n + 1
            for k2 in (2 * m - 1, 2 * m + 1):
                out.append(("s", h2, k2))
        if not hexcol or side == 0:
            h2 = 2 * n - 1
            for k2 in (2 * m - 1, 2 * m + 1):
                out.append(("s", h2, k2))
        return out

    def arrows_out(self, f):
        """``[(target_face, crossed_edge)]`` following the module arrows."""
        x, y = f
        out = []
        s = self.tsig(2 * x + 1)
        out.append(((x + 1, y - s), ("s", 2 * x + 1, 2 * y - s)))
        s = self.tsig(2 * x - 1)
        out.append(((x - 1, y - s), ("s", 2 * x - 1, 2 * y - s)))
        if self.is_hex(x):
            s = self.col_sign(x)
            out.append(((x, y + 2 * s), ("h", x, y + s)))
        return out

    def _out_faces(self, f):
        memo = self._cache.setdefault("out", {})
        got = memo.get(f)
        if got is None:
            got = memo[f] = tuple(g for g, _ in self.arrows_out(f))
        return got

    def arrows_in(self, f):
        x, y = f
        out = []
        # from (x-1, y') by an h^+ arrow: y = y' - tsig(x - 1/2)
        s = self.tsig(2 * x - 1)
        out.append(((x - 1, y + s), ("s", 2 * x - 1, 2 * (y + s) - s)))
        s = self.tsig(2 * x + 1)
        out.append(((x + 1, y + s), ("s", 2 * x + 1, 2 * (y + s) - s)))
        if self.is_hex(x):
            s = self.col_sign(x)
            out.append(((x, y - 2 * s), ("h", x, y - s)))
        return out

    # -- grand state --------------------------------------------------------

    def in_dmax(self, e) -> bool:
        fm, fp = self.edge_faces(e)
        d = self.G(fp) - self.G(fm)
        if e[0] == "h":
            if d not in (2, -2):
                raise AssertionError(f"unexpected height jump {d} across {e}")
            return d == EH_JUMP
        if d not in (1, -3):
            raise AssertionError(f"unexpected height jump {d} across {e}")
        return d == -3

    def eps(self, e) -> int:
        return 1 if self.in_dmax(e) else 0

    # -- reference matchings -----------------------------------------------

    def in_P_pm(self, e, s: int) -> bool:
        """Membership in the vertical reference matching ``P^{s}``."""
        if e[0] == "h":
            return self.col_sign(e[1]) == -s
        _, h2, k2 = e
        return self.tsig(h2) == s and ((h2 * self.tlam(h2) - k2) // 2) % 2 == 0

    def in_P_eta(self, e, eta: YoungDiagram) -> bool:
        """Membership in the horizontal reference matching ``P^eta``."""
        if e[0] == "h":
            _, n, m = e
            k2 = m - self.F(n)
            if k2 % 2 == 0:
                return False
            return self.col_sign(n) == -eta.sign(k2 if not NU_TRANSPOSE else -k2)
        _, h2, k2 = e
        base2 = self.F((h2 - 1) // 2) + self.F((h2 + 1) // 2)  # doubled midpoint
        diff = k2 - base2
        if diff % 4 != 2:
            return False
        kk2 = diff // 2
        return self.tsig(h2) == eta.sign(kk2 if not NU_TRANSPOSE else -kk2)

    # -- weights ------------------------------------------------------------

    def halfline_weight(self, h2: int):
        c = self._cache.setdefault("hw", {})
        if h2 in c:
            return c[h2]
        L = self.L
        lam, sig = self.lam, self.sigma
        cores = self.cores
        qpr = q_prod(L, 1, L - 1)

        def closed(x2, side):
            cc, r2 = project_half(x2, L)
            k = (r2 - 1) // 2
            s = sig.signs[k] * side
            Q = Q_sign(L, s)
            qs = q_plus(L) if s > 0 else q_minus(L)
            return mono_mul(mono_pow(Q, cc - cores[k]), mono_mul(qs, q_prod(L, 1, k)))

        anchor = h2
        while anchor <= lam.hi2:
            anchor += 2 * L
        w = closed(anchor, 1)
        x = anchor
        while x > h2:
            step = mono_mul(
                mono_mul(
                    q_plus(L) if lam(x) > 0 else q_minus(L),
                    q_plus(L) if lam(x - 2 * L) > 0 else q_minus(L),
                ),
                qpr,
            )
            w = mono_div(w, step)
            x -= 2 * L
        if h2 < lam.lo2 and w != closed(h2, -1):
            raise AssertionError(f"half-line weight at {h2}/2 contradicts its left closed form")
        c[h2] = w
        return w

    def face_weight(self, n: int):
        c = self._cache.setdefault("fw", {})
        if n not in c:
            th = self.theta
            c[n] = mono_div(self.halfline_weight(th(2 * n + 1)), self.halfline_weight(th(2 * n - 1)))
        return c[n]

    def edge_weight(self, e):
        L = self.L
        if e[0] == "h":
            return (0,) * (L + 1)
        _, h2, k2 = e
        tl = self.tlam(h2)
        if ((h2 * tl - k2) // 2) % 2 == 0:
            return (0,) * (L + 1)
        return mono_pow(self.halfline_weight(self.theta(h2)), self.tsig(h2) * tl)

    def correction_F_theta(self):
        L = self.L
        w = (0,) * (L + 1)
        for h2, k2 in inversion_pairs(self.sigma, self.lam):
            if project_half(h2, L)[1] == project_half(k2, L)[1]:
                continue
            if self.sigma(h2) == self.sigma(k2):
                continue
            alpha = root_interval(h2, k2, L)
            if theta_sign(self.theta, alpha) > 0:
                w = mono_mul(w, mono_div(self.halfline_weight(k2), self.halfline_weight(h2)))
        return w

    # -- windows ------------------------------------------------------------

    def default_window(self, margin: int = 0) -> tuple[int, int]:
        """``(X, Y)``: faces with ``|n| <= X`` and ``|m - F(n)| <= Y``."""
        nu = self.nu_plus.extent() + self.nu_minus.extent()
        X = self.radius + 2 * nu + 2 * self.L + 2 + margin
        Y = 2 * X + 4 * nu + 4 + 2 * margin
        return X, Y

    def window_faces(self, X: int, Y: int):
        for n in range(-X, X + 1):
            Fn = self.F(n)
            for m in range(Fn - Y, Fn + Y + 1):
                if (n + m) % 2 == 0:
                    yield (n, m)

    def dmax_edges(self, X: int, Y: int) -> set:
        out = set()
        for f in self.window_faces(X, Y):
            for e, _ in self.face_boundary(f):
                if e not in out and self.in_dmax(e):
                    out.add(e)
        return out

    def dmax_weight(self, margin: int = 0):
        """``w(D^max)``: correction times the non-unit edge weights in the window."""
        X, Y = self.default_window(margin)
        L = self.L
        unit = (0,) * (L + 1)
        w = self.correction_F_theta()
        inner = []
        for e in sorted(self.dmax_edges(X, Y)):
            we = self.edge_weight(e)
            if we != unit:
                inner.append(e)
                w = mono_mul(w, we)
        X2, Y2 = X + 2 * L, Y + 4 * L
        extra = [e for e in self.dmax_edges(X2, Y2) if self.edge_weight(e) != unit and e not in set(inner)]
        if extra:
            raise WindowExhausted(f"non-unit grand-state edges outside the window: {extra[:4]}")
        return w

    def initial_addable(self, margin: int = 0) -> list:
        X, Y = self.default_window(margin)
        out = [f for f in self.window_faces(X, Y) if self.addable(f, {})]
        for n, m in out:
            if abs(n) > X - 2 or abs(m - self.F(n)) > Y - 2:
                raise WindowExhausted(f"addable face {(n, m)} at the window edge")
        return sorted(out)

    def _in_eps(self, f):
        memo = self._cache.setdefault("in_eps", {})
        got = memo.get(f)
        if got is None:
            got = memo[f] = tuple((g, self.eps(e)) for g, e in self.arrows_in(f))
        return got

    def addable(self, f, H) -> bool:
        hf = H.get(f, 0) + 1
        for g, eps in self._in_eps(f):
            if hf > H.get(g, 0) + eps:
                return False
        return True

    def removable(self, f, H) -> bool:
        hf = H.get(f, 0) - 1
        if hf < 0:
            return False
        for g, e in self.arrows_out(f):
            if H.get(g, 0) > hf + self.eps(e):
                return False
        return True

    def is_stable(self, H) -> bool:
        for f, hf in H.items():
            if hf < 0:
                return False
            for g, e in self.arrows_in(f):
                if hf > H.get(g, 0) + self.eps(e):
                    return False
        return True

    def state_weight(self, H, base=None):
        w = self.dmax_weight() if base is None else base
        for f, k in H.items():
            w = mono_mul(w, mono_pow(self.face_weight(f[0]), k))
        return w

    def columns(self, lo: int, hi: int):
        return [(n, "H" if self.is_hex(n) else "S") for n in range(lo, hi + 1)]


# -- enumeration ----------------------------------------------------------------


def _freeze(H: dict) -> tuple:
    return tuple(sorted(H.items()))


@dataclass(frozen=True)
class DimCap:
    """Which dimension vectors (box counts per vertex class) may be visited.

    Either every vector of total at most ``total`` or the downward closure
    of an explicit finite set.
    """

    L: int
    total: int | None = None
    allowed: frozenset = frozenset()

    def allows(self, d: tuple) -> bool:
        if self.total is not None:
            return sum(d) <= self.total
        return d in self.allowed

    @property
    def max_boxes(self) -> int:
        if self.total is not None:
            return self.total
        return max((sum(d) for d in self.allowed), default=0)

    @classmethod
    def closure(cls, L: int, targets: Iterable[tuple]) -> "DimCap":
        seen = set()
        stack = list(targets)
        while stack:
            d = stack.pop()
            if d in seen:
                continue
            seen.add(d)
            for i in range(L):
                if d[i] > 0:
                    stack.append(d[:i] + (d[i] - 1,) + d[i + 1 :])
        return cls(L, None, frozenset(seen))


def _dim(H: dict, L: int) -> tuple:
    d = [0] * L
    for (n, _), k in H.items():
        d[n % L] += k
    return tuple(d)


def _children(geom: Geometry, frozen: tuple, seeds: tuple, cap: DimCap) -> list:
    H = dict(frozen)
    L = geom.L
    d = list(_dim(H, L))
    cand = set(seeds)
    for f in H:
        cand.add(f)
        cand.update(geom._out_faces(f))
    out = []
    for f in sorted(cand):
        c = f[0] % L
        d[c] += 1
        ok = cap.allows(tuple(d))
        d[c] -= 1
        if ok and geom.addable(f, H):
            H2 = dict(H)
            H2[f] = H2.get(f, 0) + 1
            out.append(_freeze(H2))
    return out


def _expand_chunk(args):
    geom, chunk, seeds, cap = args
    out = set()
    for st in chunk:
        out.update(_children(geom, st, seeds, cap))
    return out


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("NCDT_THREADS")
        threads = int(env) if env else 1
    if threads < 1:
        raise InvalidInput("thread count must be positive")
    return threads


def melting_layers(geom: Geometry, cap, threads: int | None = None, margin: int = 0):
    """Yield ``(k, states)`` by box count; states are sorted frozen height maps.

    ``cap`` is a :class:`DimCap` or a plain box bound.
    """
    if isinstance(cap, int):
        cap = DimCap(geom.L, total=cap)
    threads = resolve_threads(threads)
    seeds = tuple(geom.initial_addable(margin))
    layer = [()]
    yield 0, layer
    pool = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for k in range(1, cap.max_boxes + 1):
            if pool is None or len(layer) < 2 * threads:
                nxt = _expand_chunk((geom, layer, seeds, cap))
            else:
                size = -(-len(layer) // (4 * threads))
                chunks = [(geom, layer[i : i + size], seeds, cap) for i in range(0, len(layer), size)]
                nxt = set()
                for part in pool.map(_expand_chunk, chunks):
                    nxt |= part
            layer = sorted(nxt)
            if not layer:
                return
            yield k, layer
    finally:
        if pool is not None:
            pool.shutdown()


# -- certified regions ----------------------------------------------------------


def unrefined_vector(m) -> tuple:
    """Specialized exponent ``(2*e_0, e_1, ...)`` of a refined monomial."""
    return (m[0] + m[1],) + tuple(m[2:])


@dataclass(frozen=True)
class Region:
    """Monomials whose specialization sits at total degree ``<= bound`` above ``ref``.

    ``ref`` uses the doubled-``q_0`` convention of :func:`unrefined_vector`.
    """

    ref: tuple
    bound: int

    def offset(self, m):
        return self.offset_unrefined(unrefined_vector(m))

    def offset_unrefined(self, u):
        g = tuple(a - b for a, b in zip(u, self.ref))
        if g[0] % 2:
            return None
        return (g[0] // 2,) + g[1:]

    def contains(self, m) -> bool:
        return self.contains_unrefined(unrefined_vector(m))

    def contains_unrefined(self, u) -> bool:
        g = self.offset_unrefined(u)
        return g is not None and min(g) >= 0 and sum(g) <= self.bound

    def max_grading(self) -> int:
        return self.ref[0] + 2 * sum(self.ref[1:]) + 2 * self.bound

    def points(self):
        """All root-lattice offsets in the region."""
        L = len(self.ref)

        def rec(i, left):
            if i == L - 1:
                for v in range(left + 1):
                    yield (v,)
                return
            for v in range(left + 1):
                for rest in rec(i + 1, left - v):
                    yield (v,) + rest

        return list(rec(0, self.bound))

    def to_json(self) -> dict:
        return {"ref": list(self.ref), "bound": self.bound}


def _solve(columns: list, rhs: tuple):
    """Integer solution of ``sum_i d_i * columns[i] = rhs`` (columns form a basis)."""
    n = len(rhs)
    A = [[Fraction(columns[j][i]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    sol = [A[i][n] for i in range(n)]
    if any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def reference_vector(geom: Geometry, margin: int = 0) -> tuple:
    """Specialized grand-state weight in the identity chamber."""
    ident = geom if geom.theta.is_identity() else geom.with_theta(ThetaMap.identity(geom.L))
    return unrefined_vector(ident.dmax_weight(margin))


def dimension_cap(geom: Geometry, region: Region, margin: int = 0) -> DimCap:
    """Dimension vectors of every state whose weight can land in ``region``."""
    L = geom.L
    if geom.theta.is_identity() and unrefined_vector(geom.dmax_weight(margin)) == region.ref:
        return DimCap(L, total=region.bound)
    from .roots import alpha_theta_i

    cols = [alpha_theta_i(geom.theta, i) for i in range(L)]
    base = unrefined_vector(geom.dmax_weight(margin))
    base_root = (base[0] // 2,) + base[1:]
    ref_root = (region.ref[0] // 2,) + region.ref[1:]
    targets = []
    for g in region.points():
        rhs = tuple(r + x - b for r, x, b in zip(ref_root, g, base_root))
        d = _solve(cols, rhs)
        if d is not None and min(d) >= 0:
            targets.append(d)
    return DimCap.closure(L, targets)


@dataclass
class Enumeration:
    series: Series
    raw: Series
    counts: list
    region: Region
    base_weight: tuple
    outside: list = field(default_factory=list)

    @property
    def box_bound(self) -> int:
        return self.region.bound


def enumerate_Z(
    geom: Geometry,
    box_bound: int,
    threads: int | None = None,
    margin: int = 0,
) -> Enumeration:
    """Generating function, exact on all monomials of total degree ``<= box_bound``
    above the identity-chamber grand state.

    In the identity chamber this is the sum over states with at most
    ``box_bound`` boxes.  Elsewhere the dimension vector of a state is fixed by
    its weight, so the finitely many vectors reaching the region are solved
    for and every state under them is visited.
    """
    if box_bound < 0:
        raise InvalidInput("box bound must be nonnegative")
    L = geom.L
    w0 = geom.dmax_weight(margin)
    region = Region(reference_vector(geom, margin), box_bound)
    cap = dimension_cap(geom, region, margin)
    terms: dict = {}
    counts = []
    for k, states in melting_layers(geom, cap, threads, margin):
        for st in states:
            w = geom.state_weight(dict(st), w0)
            terms[w] = terms.get(w, 0) + 1
        counts.append(len(states))
    raw = Series(terms, INF, True, L + 1)
    cert = region.max_grading()
    inside = {m: c for m, c in terms.items() if region.contains(m)}
    outside = sorted(m for m in terms if not region.contains(m) and grading(m) <= cert)
    return Enumeration(Series(inside, cert, True, L + 1), raw, counts, region, w0, outside)
