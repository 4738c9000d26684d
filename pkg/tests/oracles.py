"""Brute-force reference computations that share no code with the package."""

from __future__ import annotations

from collections import Counter


def plane_partitions(n: int, above: tuple | None = None):
    """All plane partitions of ``n`` as tuples of rows.

    Rows are partitions, and each row is dominated entrywise by ``above``.
    """
    if n == 0:
        yield ()
        return
    for row in _bounded_rows(n, above):
        for tail in plane_partitions(n - sum(row), row):
            yield (row,) + tail


def _bounded_rows(n: int, above):
    limit = len(above) if above is not None else n

    def rec(i, left, prev):
        yield ()
        if left == 0 or i == limit:
            return
        hi = min(prev, left, above[i] if above is not None else left)
        for v in range(hi, 0, -1):
            for rest in rec(i + 1, left - v, v):
                yield (v,) + rest

    for row in rec(0, n, n):
        if row:
            yield row


def plane_partition_counts(max_n: int) -> list[int]:
    return [sum(1 for _ in plane_partitions(n)) for n in range(max_n + 1)]


def boxes(pp) -> list[tuple[int, int, int]]:
    return [(i, j, k) for i, row in enumerate(pp) for j, h in enumerate(row) for k in range(h)]


def refined_L1_series(max_n: int) -> Counter:
    """Sum over plane partitions of the product of box weights in ``(q+, q-)``.

    A box with ``j - k > 0`` weighs ``q+^2``, with ``j - k < 0`` ``q-^2`` and
    on the diagonal ``q+ q-``.
    """
    out: Counter = Counter()
    for n in range(max_n + 1):
        for pp in plane_partitions(n):
            a = b = 0
            for _, j, k in boxes(pp):
                d = j - k
                if d > 0:
                    a += 2
                elif d < 0:
                    b += 2
                else:
                    a += 1
                    b += 1
            out[(a, b)] += 1
    return out


def brute_B_counts(sign_at, h2: int, k2: int, L: int, reach: int = 60) -> tuple[int, int]:
    """``|B^{alpha,+}|`` and ``|B^{alpha,-}|`` by a wide scan over translates.

    ``sign_at(h2)`` must return ``lambda(h) * sigma(h)`` for doubled ``h``.
    """
    plus = minus = 0
    for c in range(-reach, reach + 1):
        a, b = h2 + 2 * c * L, k2 + 2 * c * L
        x, y = -sign_at(a), sign_at(b)
        if x == y == 1:
            plus += 1
        elif x == y == -1:
            minus += 1
    return plus, minus


def integer_interval_root(h2: int, k2: int, L: int) -> tuple[int, ...]:
    """Coefficients of ``alpha_[h,h']`` by listing the integers in between."""
    sign = 1
    if h2 > k2:
        h2, k2, sign = k2, h2, -1
    out = [0] * L
    for n in range(-10 * L - abs(h2), abs(k2) + 10 * L):
        if h2 < 2 * n < k2:
            out[n % L] += sign
    return tuple(out)


def young_diagrams(max_size: int):
    """All partitions of size up to ``max_size`` as tuples."""
    def parts(n, mx):
        if n == 0:
            yield ()
            return
        for k in range(min(n, mx), 0, -1):
            for rest in parts(n - k, k):
                yield (k,) + rest
    for n in range(max_size + 1):
        yield from parts(n, n)


__all__ = [
    "boxes",
    "brute_B_counts",
    "integer_interval_root",
    "plane_partition_counts",
    "plane_partitions",
    "refined_L1_series",
    "young_diagrams",
]


def leg_plane_partition_count(leg: set, n: int) -> int:
    """Plane partitions of ``n`` extra boxes around an infinite column over ``leg``.

    Heights live on the cells of a large grid outside ``leg``; a cell in ``leg``
    acts as an infinitely tall neighbour.
    """
    size = n + 1 + max((max(c) for c in leg), default=0)
    cells = [(x, y) for x in range(size) for y in range(size) if (x, y) not in leg]
    INF = float("inf")

    def bound(h, x, y):
        b = INF
        for nb in ((x - 1, y), (x, y - 1)):
            if min(nb) < 0:
                continue
            b = min(b, INF if nb in leg else h.get(nb, 0))
        return b

    def rec(k, left, h):
        if k == len(cells):
            return 1 if left == 0 else 0
        x, y = cells[k]
        total = 0
        for v in range(int(min(bound(h, x, y), left)) + 1):
            h[(x, y)] = v
            total += rec(k + 1, left - v, h)
        del h[(x, y)]
        return total

    return rec(0, n, {})
