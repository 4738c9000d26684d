"""Dimer shuffling ``mu_i`` at a hexagonal or quadrilateral vertex class.

Both shuffles act on explicit matchings (see :mod:`ncdt.matching`).  A
hexagonal shuffle keeps the graph and swaps the plus and minus halves of
vertical stacks of faces; a quadrilateral shuffle rebuilds the two slanted
lines around each column of the class and the horizontal edges of the
neighbouring columns that turn hexagonal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .combinatorics import InvalidInput
from .dimer import Geometry, Region, dimension_cap, melting_layers, reference_vector
from .matching import (
    Window,
    edges_to_state,
    face_parts,
    is_perfect,
    matching_weight,
    state_to_edges,
    vertex_cover,
    window_edges,
    window_for,
)
from .roots import B_i_pm, is_forward_step, mutate_theta


class ShuffleCondition(enum.Enum):
    COND = "cond"  # no face of the class is minus-saturated
    COND2 = "cond2"  # no plus-saturated face except at the ends of the infinite stacks
    COND3 = "cond3"  # the face beyond each infinite stack is not minus-saturated
    COND4 = "cond4"  # no face of the class is plus-saturated


class ShuffleError(InvalidInput):
    """A shuffle precondition failed."""


def class_columns(geom: Geometry, win: Window, i: int) -> list[int]:
    L = geom.L
    return [n for n in range(-win.X, win.X + 1) if n % L == i % L]


def face_state(geom: Geometry, D, f) -> str:
    """``'+'``, ``'-'``, ``'0'`` (no boundary edge matched) or ``'*'``."""
    bd, plus, minus = face_parts(geom, f)
    got = bd & D
    if got == plus:
        return "+"
    if got == minus:
        return "-"
    if not got:
        return "0"
    return "*"


# -- stacks ----------------------------------------------------------------------


def stack_faces(win: Window, n: int, m: int, direction: int, M):
    """Faces ``f(n, m + 2*direction*k)`` for ``k < M`` (``M=None``: to the window edge)."""
    out = []
    k = 0
    while M is None or k < M:
        f = (n, m + 2 * direction * k)
        if not win.contains(f):
            break
        out.append(f)
        k += 1
    return out


def stack_parts(geom: Geometry, faces, open_end: bool = False) -> tuple[frozenset, frozenset]:
    """Plus and minus halves of the boundary of a vertical stack.

    With ``open_end`` the cap at the far end (the last face listed) is left
    out, which is how an infinite stack looks inside a window.
    """
    count: dict = {}
    sign: dict = {}
    for f in faces:
        bd = geom.face_boundary(f)
        for e, p in bd:
            count[e] = count.get(e, 0) + 1
            sign[e] = p
    drop = set()
    if open_end and len(faces) > 1:
        last, prev = faces[-1], faces[-2]
        cap_m = last[1] + (last[1] - prev[1]) // 2
        drop.add(("h", last[0], cap_m))
    elif open_end:
        drop.update(e for e, _ in geom.face_boundary(faces[0]) if e[0] == "h")
    plus = frozenset(e for e, c in count.items() if c == 1 and sign[e] and e not in drop)
    minus = frozenset(e for e, c in count.items() if c == 1 and not sign[e] and e not in drop)
    return plus, minus


def _saturated(D, parts, s: int) -> bool:
    plus, minus = parts
    want, avoid = (plus, minus) if s > 0 else (minus, plus)
    return want <= D and not (avoid & D)


def stack_height(geom: Geometry, D, win: Window, f, direction: int, s: int = 1):
    """Largest ``M`` with the ``M``-stack from ``f`` saturated by ``D`` (``None`` = infinite)."""
    n, m = f
    M = 1
    while True:
        nxt = (n, m + 2 * direction * M)
        if not win.contains(nxt):
            return None
        if not _saturated(D, stack_parts(geom, stack_faces(win, n, m, direction, M + 1)), s):
            return M
        M += 1


def infinite_stack(geom: Geometry, D, win: Window, n: int, s: int):
    """``(m, direction)`` for the maximal infinite ``s``-saturated stack in column ``n``.

    The stack runs from face ``(n, m)`` to the window edge in ``direction``.
    Returns ``None`` when the column has none.
    """
    found = []
    col = win.column(n)
    for direction in (1, -1):
        ordered = col if direction < 0 else col[::-1]  # start at the far end
        best = None
        for k in range(1, len(ordered) + 1):
            faces = ordered[:k][::-1]
            if _saturated(D, stack_parts(geom, faces, open_end=True), s):
                best = faces[0]
        # the far end alone is always trivially constrained; require some depth
        if best is not None and abs(best[1]) < win.Y - 4:
            found.append((best[1], direction))
    if len(found) > 1:
        raise ShuffleError(f"column {n} has infinite stacks at both ends")
    return found[0] if found else None


# -- conditions ------------------------------------------------------------------


def _check_cond(geom, D, i, win, c: ShuffleCondition) -> tuple[bool, object]:
    cols = class_columns(geom, win, i)
    inner = [f for n in cols for f in win.column(n) if win.inner(f)]
    if c is ShuffleCondition.COND:
        for f in inner:
            if face_state(geom, D, f) == "-":
                return False, f
        return True, None
    if c is ShuffleCondition.COND4:
        for f in inner:
            if face_state(geom, D, f) == "+":
                return False, f
        return True, None
    plus, minus = B_i_pm(geom.sigma, geom.lam, geom.theta, i)
    ends = {}
    for n, s in [(n, 1) for n in plus] + [(n, -1) for n in minus]:
        got = infinite_stack(geom, D, win, n, s)
        if got is None:
            return False, (n, "no infinite stack")
        ends[n] = got
    if c is ShuffleCondition.COND2:
        skip = {(n, m) for n, (m, _) in ends.items()}
        for f in inner:
            if f not in skip and face_state(geom, D, f) == "+":
                return False, f
        return True, None
    for n, (m, direction) in ends.items():
        f = (n, m - 2 * direction)
        if face_state(geom, D, f) == "-":
            return False, f
    return True, None


def check_condition(geom: Geometry, D, i: int, c: ShuffleCondition | str, win: Window) -> bool:
    """Evaluate one of the four shuffle conditions on the window."""
    return _check_cond(geom, frozenset(D), i, win, ShuffleCondition(c))[0]


# -- vertical offset ------------------------------------------------------------

OUT_SHRINK = 3


def output_window(win: Window) -> Window:
    """Where shuffle results are reported."""
    return win.shrink(OUT_SHRINK)


def vertical_offset(geom: Geometry, new: Geometry, i: int, win: Window) -> int:
    """``F - F'`` far from the origin on columns outside the class of ``i``.

    Both profiles are pinned at ``F(0) = 0``, so the shuffled matching agrees
    with the mutated grand state only after this vertical translation.
    """
    L = geom.L
    vals = set()
    for side in (-1, 1):
        n = side * win.X
        while n % L == i % L:
            n -= side
        vals.add(geom.F(n) - new.F(n))
    if len(vals) != 1:
        raise ShuffleError(f"the two chambers differ by different offsets on the two sides: {sorted(vals)}")
    delta = vals.pop()
    if delta % 2 or abs(delta) > 2 * (OUT_SHRINK - 1):
        raise ShuffleError(f"unsupported vertical offset {delta}")
    return delta


def translate(D, delta: int) -> frozenset:
    """Move every edge down by ``delta`` face rows (``delta`` even)."""
    out = []
    for e in D:
        if e[0] == "h":
            out.append(("h", e[1], e[2] - delta))
        else:
            out.append(("s", e[1], e[2] - 2 * delta))
    return frozenset(out)


def _finish(geom: Geometry, new: Geometry, i: int, edges, win: Window) -> frozenset:
    delta = vertical_offset(geom, new, i, win)
    return translate(edges, delta) & window_edges(new, output_window(win))


# -- hexagon --------------------------------------------------------------------


@dataclass
class HexStack:
    face: tuple
    height: object  # int or None for an infinite stack


def hex_stacks(geom: Geometry, D, win: Window, i: int) -> list[HexStack]:
    """``E_i(D)`` with the stack heights ``M^i_D``."""
    out = []
    for n in class_columns(geom, win, i):
        s = geom.col_sign(n)
        for f in win.column(n):
            if win.inner(f, 1) and face_state(geom, D, f) == "+":
                out.append(HexStack(f, stack_height(geom, D, win, f, s)))
    return out


def hexagon_shuffle(geom: Geometry, D, i: int, win: Window) -> frozenset:
    """``mu_i(D)`` for a hexagonal class ``i``.

    The result has type ``mu_i(theta)`` and lives on :func:`output_window`.
    """
    D = frozenset(D)
    if not geom.is_hex(i):
        raise ShuffleError(f"vertex {i} is not hexagonal in this chamber")
    ok, bad = _check_cond(geom, D, i, win, ShuffleCondition.COND)
    if not ok:
        raise ShuffleError(f"face {bad} is minus-saturated")
    plus_cols, minus_cols = B_i_pm(geom.sigma, geom.lam, geom.theta, i)
    remove, add = set(), set()
    for st in hex_stacks(geom, D, win, i):
        n, m = st.face
        s = geom.col_sign(n)
        if st.height is None and n not in plus_cols:
            raise ShuffleError(f"unexpected infinite stack in column {n}")
        faces = stack_faces(win, n, m, s, st.height)
        p, q = stack_parts(geom, faces, open_end=st.height is None)
        remove |= p
        add |= q
    for n in minus_cols:
        got = infinite_stack(geom, D, win, n, -1)
        if got is None:
            raise ShuffleError(f"column {n} has no infinite minus stack")
        m, direction = got
        p, q = stack_parts(geom, stack_faces(win, n, m, direction, None), open_end=True)
        remove |= q
        add |= p
    if remove & add:
        raise ShuffleError("overlapping stacks")
    return _finish(geom, geom.with_theta(mutate_theta(geom.theta, i)), i, (D - remove) | add, win)


# -- quadrilateral ----------------------------------------------------------------


def quad_shuffle(geom: Geometry, D, i: int, win: Window) -> frozenset:
    """``mu_i(D)`` for a quadrilateral class ``i``, on :func:`output_window`."""
    D = frozenset(D)
    if geom.is_hex(i):
        raise ShuffleError(f"vertex {i} is not quadrilateral in this chamber")
    ok, bad = _check_cond(geom, D, i, win, ShuffleCondition.COND)
    if not ok:
        raise ShuffleError(f"face {bad} is minus-saturated")
    new = geom.with_theta(mutate_theta(geom.theta, i))
    cols = class_columns(geom, win, i)
    lines = {2 * n + 1 for n in cols} | {2 * n - 1 for n in cols}
    neighbours = ({n - 1 for n in cols} | {n + 1 for n in cols}) - set(cols)
    out = set()
    for e in D:
        if e[0] == "s" and e[1] in lines:
            continue
        if e[0] == "h" and e[1] in neighbours:
            continue
        out.add(e)
    for n in cols:
        for f in win.column(n):
            state = face_state(geom, D, f)
            if state == "0":
                out |= face_parts(new, f)[2]
            elif state == "+":
                continue
            else:
                fn, fm = f
                for e in face_parts(geom, f)[0] & D:
                    _, h2, k2 = e
                    out.add(("s", 4 * fn - h2, 4 * fm - k2))
    # horizontal edges of neighbouring columns that are hexagonal after the shuffle
    cover = vertex_cover(new, out)
    for n in sorted(neighbours):
        if not new.is_hex(n):
            continue
        for m in range(-win.Y - 1, win.Y + 2):
            if (n + m) % 2 == 0:
                continue
            e = ("h", n, m)
            a, b = new.edge_endpoints(e)
            if not cover.get(a) and not cover.get(b):
                out.add(e)
    return _finish(geom, new, i, out, win)


def crossing_counts(geom: Geometry, D, i: int, win: Window) -> dict:
    """``|E^1_n| - |E^2_n|`` per column of the class (plus- and empty-faces)."""
    out = {}
    for n in class_columns(geom, win, i):
        e1 = e2 = 0
        for f in win.column(n):
            if not win.inner(f, 1):
                continue
            st = face_state(geom, D, f)
            e1 += st == "+"
            e2 += st == "0"
        out[n] = e1 - e2
    return out


def shuffle(geom: Geometry, D, i: int, win: Window) -> frozenset:
    if geom.is_hex(i):
        return hexagon_shuffle(geom, D, i, win)
    return quad_shuffle(geom, D, i, win)


# -- verification ----------------------------------------------------------------


@dataclass
class ShuffleReport:
    vertex: int
    kind: str
    sources: int = 0
    images: int = 0
    targets: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "kind": self.kind,
            "sources": self.sources,
            "images": self.images,
            "targets": self.targets,
            "passed": self.passed,
            "failures": [str(x) for x in self.failures[:20]],
        }


def _states_in_region(geom: Geometry, region: Region, threads=None):
    cap = dimension_cap(geom, region)
    w0 = geom.dmax_weight()
    for _, states in melting_layers(geom, cap, threads):
        for st in states:
            H = dict(st)
            if region.contains(geom.state_weight(H, w0)):
                yield H


def verify_shuffle_bijection(geom: Geometry, i: int, box_bound: int, threads=None, win: Window | None = None) -> ShuffleReport:
    """Check that ``mu_i`` is a weight-preserving bijection between the
    conditioned configurations of both chambers, on every state whose weight
    lies within ``box_bound`` of the identity-chamber grand state."""
    if not is_forward_step(geom.theta, i):
        raise ShuffleError(f"mutation at {i} moves back across a wall already crossed")
    hexagonal = geom.is_hex(i)
    new = geom.with_theta(mutate_theta(geom.theta, i))
    if win is None:
        win = window_for(geom, new)
    region = Region(reference_vector(geom), box_bound)
    rep = ShuffleReport(i, "hexagonal" if hexagonal else "quadrilateral")
    target_conds = [ShuffleCondition.COND2, ShuffleCondition.COND3] if hexagonal else [ShuffleCondition.COND4]
    plus_cols, minus_cols = B_i_pm(geom.sigma, geom.lam, geom.theta, i)
    small = output_window(win)
    images = {}
    for H in _states_in_region(geom, region, threads):
        D = state_to_edges(geom, H, win)
        if not check_condition(geom, D, i, ShuffleCondition.COND, win):
            continue
        rep.sources += 1
        if not hexagonal:
            counts = crossing_counts(geom, D, i, win)
            for n, c in counts.items():
                want = 1 if n in plus_cols else (-1 if n in minus_cols else 0)
                if c != want:
                    rep.failures.append(("crossing count", n, c, want, H))
        try:
            D2 = shuffle(geom, D, i, win)
            if not is_perfect(new, D2, small):
                raise ShuffleError("image is not a perfect matching")
            H2 = edges_to_state(new, D2, small)
        except (InvalidInput, RuntimeError) as exc:
            rep.failures.append(("shuffle failed", H, str(exc)))
            continue
        if not new.is_stable(H2):
            rep.failures.append(("unstable image", H, H2))
        w1 = matching_weight(geom, D, win)
        w2 = matching_weight(new, D2, small)
        if w1 != w2:
            rep.failures.append(("weight", H, w1, w2))
        for c in target_conds:
            if not check_condition(new, D2, i, c, small):
                rep.failures.append((f"image violates {c.value}", H, H2))
        key = tuple(sorted(H2.items()))
        if key in images:
            rep.failures.append(("not injective", H, images[key]))
        images[key] = H
    rep.images = len(images)
    for H in _states_in_region(new, region, threads):
        D = state_to_edges(new, H, small)
        if not all(check_condition(new, D, i, c, small) for c in target_conds):
            continue
        rep.targets += 1
        if tuple(sorted(H.items())) not in images:
            rep.failures.append(("not surjective", H))
    return rep
