"""Explicit dimer configurations on a finite window of the lattice.

A matching is stored as the frozenset of its edges among the boundary edges
of the window's faces.  Outside the window it is assumed to agree with the
grand state of its geometry, and every conversion checks that the deviation
stays clear of the window border.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .combinatorics import InvalidInput
from .dimer import Geometry, WindowExhausted
from .series import mono_div, mono_mul


@dataclass(frozen=True)
class Window:
    """Faces ``(n, m)`` with ``|n| <= X`` and ``|m| <= Y``."""

    X: int
    Y: int

    def contains(self, f) -> bool:
        return abs(f[0]) <= self.X and abs(f[1]) <= self.Y

    def inner(self, f, pad: int = 2) -> bool:
        return abs(f[0]) <= self.X - pad and abs(f[1]) <= self.Y - 2 * pad

    def shrink(self, k: int = 1) -> "Window":
        return Window(self.X - k, self.Y - 2 * k)

    def faces(self):
        for n in range(-self.X, self.X + 1):
            for m in range(-self.Y, self.Y + 1):
                if (n + m) % 2 == 0:
                    yield (n, m)

    def column(self, n: int):
        lo = -self.Y + ((n - self.Y) % 2)
        return [(n, m) for m in range(lo, self.Y + 1, 2)]


def window_for(*geoms: Geometry, margin: int = 0) -> Window:
    """A window large enough for every geometry given (plus ``2L`` columns)."""
    X = max(g.default_window(margin)[0] for g in geoms) + 2 * geoms[0].L
    Yd = max(g.default_window(margin)[1] for g in geoms)
    spread = max(abs(g.F(n)) for g in geoms for n in range(-X, X + 1))
    return Window(X, spread + Yd)


def _memo(geom: Geometry, key, build):
    c = geom._cache
    if key not in c:
        c[key] = build()
    return c[key]


def window_edges(geom: Geometry, win: Window) -> frozenset:
    def build():
        out = set()
        for f in win.faces():
            for e, _ in geom.face_boundary(f):
                out.add(e)
        return frozenset(out)

    return _memo(geom, ("win_edges", win), build)


def dmax_matching(geom: Geometry, win: Window) -> frozenset:
    """The grand state restricted to the window."""
    return _memo(geom, ("win_dmax", win), lambda: frozenset(e for e in window_edges(geom, win) if geom.in_dmax(e)))


def face_parts(geom: Geometry, f):
    """``(boundary, plus, minus)`` edge sets of a face."""
    key = ("parts", f)
    c = geom._cache
    if key not in c:
        bd = geom.face_boundary(f)
        c[key] = (
            frozenset(e for e, _ in bd),
            frozenset(e for e, p in bd if p),
            frozenset(e for e, p in bd if not p),
        )
    return c[key]


def state_to_edges(geom: Geometry, H: dict, win: Window) -> frozenset:
    """The matching of a melting state: the grand state toggled where heights differ."""
    for f in H:
        if not win.inner(f):
            raise WindowExhausted(f"state support {f} reaches the window border")
    out = set(dmax_matching(geom, win))
    for e in {e for f in H for e, _ in geom.face_boundary(f)}:
        fm, fp = geom.edge_faces(e)
        if H.get(fm, 0) != H.get(fp, 0):
            out ^= {e}
    return frozenset(out)


def vertex_cover(geom: Geometry, D) -> dict:
    cover: dict = {}
    for e in D:
        for v in geom.edge_endpoints(e):
            cover[v] = cover.get(v, 0) + 1
    return cover


def interior_vertices(geom: Geometry, win: Window) -> frozenset:
    def build():
        edges = window_edges(geom, win)
        verts = set()
        for e in edges:
            verts.update(geom.edge_endpoints(e))
        return frozenset(v for v in verts if all(x in edges for x in geom.vertex_edges(v)))

    return _memo(geom, ("win_verts", win), build)


def is_perfect(geom: Geometry, D, win: Window) -> bool:
    """Every vertex whose star lies in the window is covered exactly once."""
    cover = vertex_cover(geom, D)
    return all(cover.get(v, 0) == 1 for v in interior_vertices(geom, win))


def deviation(geom: Geometry, D, win: Window) -> frozenset:
    """Edges where ``D`` differs from the grand state; must avoid the border."""
    diff = frozenset(D) ^ dmax_matching(geom, win)
    for e in diff:
        for f in geom.edge_faces(e):
            if not win.inner(f):
                raise WindowExhausted(f"matching deviates from the grand state at the border ({e})")
    return diff


def edges_to_state(geom: Geometry, D, win: Window) -> dict:
    """Heights relative to the grand state.

    Across an arrow ``g -> f`` through ``e`` the height rises by
    ``[e in D^max] - [e in D]``.
    """
    D = frozenset(D)
    if not is_perfect(geom, D, win):
        raise InvalidInput("not a perfect matching on the window")
    diff = deviation(geom, D, win)
    base = dmax_matching(geom, win)
    if not diff:
        return {}
    # flood fill from a face outside the deviation, staying inside the window
    start = (win.X, win.Y if (win.X + win.Y) % 2 == 0 else win.Y - 1)
    H = {start: 0}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for f, e in geom.arrows_out(g):
            if not win.contains(f):
                continue
            step = (e in base) - (e in D)
            if f in H:
                if H[f] != H[g] + step:
                    raise InvalidInput(f"inconsistent heights around {f}")
                continue
            H[f] = H[g] + step
            queue.append(f)
        for f, e in geom.arrows_in(g):
            if not win.contains(f):
                continue
            step = (e in base) - (e in D)
            if f in H:
                if H[g] != H[f] + step:
                    raise InvalidInput(f"inconsistent heights around {g}")
                continue
            H[f] = H[g] - step
            queue.append(f)
    out = {f: h for f, h in H.items() if h}
    if any(h < 0 for h in out.values()):
        raise InvalidInput("matching lies below the grand state")
    return out


def matching_weight(geom: Geometry, D, win: Window):
    """Weight from the edges: ``w(D^max)`` times the ratio over the deviation."""
    w = geom.dmax_weight()
    D = frozenset(D)
    for e in deviation(geom, D, win):
        if e in D:
            w = mono_mul(w, geom.edge_weight(e))
        else:
            w = mono_div(w, geom.edge_weight(e))
    return w


def cycle_parts(geom: Geometry, faces) -> tuple[frozenset, frozenset]:
    """``(C^+, C^-)`` for the cycle bounding a finite set of faces."""
    faces = set(faces)
    count: dict = {}
    sign: dict = {}
    for f in faces:
        for e, plus in geom.face_boundary(f):
            count[e] = count.get(e, 0) + 1
            sign[e] = plus
    plus = frozenset(e for e, c in count.items() if c == 1 and sign[e])
    minus = frozenset(e for e, c in count.items() if c == 1 and not sign[e])
    return plus, minus


def is_positive_cycle(geom: Geometry, D, faces) -> bool:
    plus, minus = cycle_parts(geom, faces)
    D = frozenset(D)
    return bool(faces) and plus <= D and not (minus & D)


def cycle_flip(geom: Geometry, D, faces) -> frozenset:
    """``(D - C^+) | C^-``; multiplies the weight by the product of the enclosed face weights."""
    if not is_positive_cycle(geom, D, faces):
        raise InvalidInput("the cycle around these faces is not positive for this matching")
    plus, minus = cycle_parts(geom, faces)
    return (frozenset(D) - plus) | minus
