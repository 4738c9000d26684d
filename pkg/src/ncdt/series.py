"""Sparse truncated Laurent series in ``q_+, q_-, q_1, ..., q_{L-1}``.

A refined monomial is a tuple ``(a_plus, a_minus, e_1, ..., e_{L-1})``.  The
unrefined variant is ``(d0, e_1, ..., e_{L-1})`` where ``d0`` is twice the
exponent of ``q_0``.  Both use the same :class:`Series` container; only the
grading differs.

``cert`` is the largest grading up to which every coefficient is known to be
exact.  ``math.inf`` marks an exact (untruncated) polynomial.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping

Monomial = tuple

INF = math.inf


def grading(m: Monomial, refined: bool = True) -> int:
    if refined:
        return m[0] + m[1] + 2 * sum(m[2:])
    return m[0] + 2 * sum(m[1:])


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_pow(a: Monomial, k: int) -> Monomial:
    return tuple(k * x for x in a)


def mono_inv(a: Monomial) -> Monomial:
    return tuple(-x for x in a)


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def one(L: int, refined: bool = True) -> Monomial:
    return (0,) * (L + 1 if refined else L)


def q_plus(L: int) -> Monomial:
    return (1, 0) + (0,) * (L - 1)


def q_minus(L: int) -> Monomial:
    return (0, 1) + (0,) * (L - 1)


def q_i(L: int, i: int) -> Monomial:
    """``q_i`` for ``1 <= i <= L-1``."""
    if not 1 <= i <= L - 1:
        raise ValueError(f"q_{i} is not a variable for L={L}")
    e = [0] * (L + 1)
    e[i + 1] = 1
    return tuple(e)


def q_prod(L: int, lo: int, hi: int) -> Monomial:
    """``q_lo q_{lo+1} ... q_hi`` (empty product when ``hi < lo``)."""
    e = [0] * (L + 1)
    for i in range(lo, hi + 1):
        e[i + 1] += 1
    return tuple(e)


def Q_sign(L: int, s: int) -> Monomial:
    """``Q_+ = q_+^2 q_1...q_{L-1}`` or ``Q_-``."""
    base = q_plus(L) if s > 0 else q_minus(L)
    return mono_mul(mono_pow(base, 2), q_prod(L, 1, L - 1))


def specialize_monomial(m: Monomial) -> Monomial:
    """``q_+ = q_- = q_0^{1/2}``; returns ``(2*exp(q_0), e_1, ...)``."""
    return (m[0] + m[1],) + tuple(m[2:])


def root_monomial(alpha: Iterable[int]) -> Monomial:
    """``q^alpha`` in unrefined coordinates."""
    alpha = tuple(alpha)
    return (2 * alpha[0],) + alpha[1:]


def format_monomial(m: Monomial, refined: bool = True) -> str:
    if refined:
        names = ["q+", "q-"] + [f"q{i}" for i in range(1, len(m) - 1)]
        parts = []
        for name, e in zip(names, m):
            if e:
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) or "1"
    parts = []
    if m[0]:
        parts.append(f"q0^{m[0]}/2" if m[0] % 2 else (f"q0^{m[0] // 2}" if m[0] != 2 else "q0"))
    for i, e in enumerate(m[1:], start=1):
        if e:
            parts.append(f"q{i}" if e == 1 else f"q{i}^{e}")
    return "*".join(parts) or "1"


class Series:
    """Immutable sparse series with a truncation certificate."""

    __slots__ = ("terms", "cert", "refined", "nvars")

    def __init__(self, terms: Mapping[Monomial, int], cert=INF, refined: bool = True, nvars: int | None = None):
        if nvars is None:
            if not terms:
                raise ValueError("nvars required for an empty series")
            nvars = len(next(iter(terms)))
        clean = {}
        for m, c in terms.items():
            if len(m) != nvars:
                raise ValueError("monomial length mismatch")
            if c and grading(m, refined) <= cert:
                clean[tuple(m)] = int(c)
        self.terms = clean
        self.cert = cert
        self.refined = refined
        self.nvars = nvars

    # construction

    @classmethod
    def zero(cls, nvars: int, refined: bool = True, cert=INF) -> "Series":
        return cls({}, cert, refined, nvars)

    @classmethod
    def monomial(cls, m: Monomial, coeff: int = 1, refined: bool = True, cert=INF) -> "Series":
        return cls({tuple(m): coeff}, cert, refined, len(m))

    @classmethod
    def one_like(cls, other: "Series") -> "Series":
        return cls.monomial((0,) * other.nvars, 1, other.refined)

    @property
    def L(self) -> int:
        return self.nvars - 1 if self.refined else self.nvars

    def g(self, m: Monomial) -> int:
        return grading(m, self.refined)

    def min_grading(self):
        return min((self.g(m) for m in self.terms), default=INF)

    # arithmetic

    def _check(self, other: "Series"):
        if self.refined != other.refined or self.nvars != other.nvars:
            raise ValueError("incompatible series")

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Series(out, min(self.cert, other.cert), self.refined, self.nvars)

    def __neg__(self) -> "Series":
        return Series({m: -c for m, c in self.terms.items()}, self.cert, self.refined, self.nvars)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def __mul__(self, other) -> "Series":
        if isinstance(other, int):
            return Series({m: c * other for m, c in self.terms.items()}, self.cert, self.refined, self.nvars)
        self._check(other)
        # the unknown tail of a series has grading above its cert
        ga = min(self.min_grading(), self.cert + 1)
        gb = min(other.min_grading(), other.cert + 1)
        cert = min(self.cert + gb, other.cert + ga)
        out: dict = {}
        g = grading
        r = self.refined
        for ma, ca in self.terms.items():
            gma = g(ma, r)
            for mb, cb in other.terms.items():
                if gma + g(mb, r) > cert:
                    continue
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = out.get(m, 0) + ca * cb
        return Series(out, cert, r, self.nvars)

    __rmul__ = __mul__

    def shift(self, m: Monomial) -> "Series":
        """Multiply by a single monomial (cert shifts by its grading)."""
        dg = grading(m, self.refined)
        return Series(
            {mono_mul(k, m): c for k, c in self.terms.items()},
            self.cert + dg,
            self.refined,
            self.nvars,
        )

    def truncate(self, cert) -> "Series":
        return Series(self.terms, min(cert, self.cert), self.refined, self.nvars)

    def coeff(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.refined == other.refined
            and self.terms == other.terms
            and self.cert == other.cert
        )

    def agrees_with(self, other: "Series", cert=None) -> bool:
        """Coefficient equality up to the common (or given) certificate."""
        self._check(other)
        bound = min(self.cert, other.cert) if cert is None else cert
        return not self.differences(other, bound)

    def differences(self, other: "Series", bound) -> list:
        keys = set(self.terms) | set(other.terms)
        return sorted(
            (m, self.coeff(m), other.coeff(m))
            for m in keys
            if self.g(m) <= bound and self.coeff(m) != other.coeff(m)
        )

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def specialize(self) -> "Series":
        if not self.refined:
            raise ValueError("already unrefined")
        out: dict = {}
        for m, c in self.terms.items():
            k = specialize_monomial(m)
            out[k] = out.get(k, 0) + c
        return Series(out, self.cert, False, self.nvars - 1)

    def by_total_degree(self) -> dict:
        """Coefficients grouped by ``g/2`` (only meaningful when all ``g`` are even)."""
        out: dict = {}
        for m, c in self.terms.items():
            out.setdefault(self.g(m), {})[m] = c
        return out

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*{format_monomial(m, self.refined)}" for m, c in self.sorted_terms()) or "0"
        return f"Series({body}; cert={self.cert})"

    def to_json(self) -> dict:
        cert = self.cert if self.cert != INF else None
        return {
            "refined": self.refined,
            "cert": cert,
            "terms": [{"exp": list(m), "coeff": c} for m, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: dict, nvars: int) -> "Series":
        cert = INF if data.get("cert") is None else data["cert"]
        terms = {tuple(t["exp"]): t["coeff"] for t in data["terms"]}
        return cls(terms, cert, data.get("refined", True), nvars)


def geom_inverse(m: Monomial, sign: int, cert, refined: bool = True) -> Series:
    """``sum_s (sign*m)^s`` up to grading ``cert``, i.e. ``(1 - sign*m)^{-1}``."""
    gm = grading(m, refined)
    if gm <= 0:
        raise ValueError(f"geometric series in a monomial of grading {gm} does not converge")
    if cert == INF:
        raise ValueError("a geometric series needs a finite truncation")
    terms = {}
    k = 0
    while k * gm <= cert:
        terms[mono_pow(m, k)] = sign**k
        k += 1
    return Series(terms, cert, refined, len(m))


def factor_series(m: Monomial, sign: int, exponent: int, cert, refined: bool = True) -> Series:
    """``(1 - sign*m)^exponent`` truncated at ``cert``."""
    nv = len(m)
    base = Series({(0,) * nv: 1, tuple(m): -sign}, INF, refined, nv).truncate(cert)
    out = Series.monomial((0,) * nv, 1, refined).truncate(cert)
    if exponent >= 0:
        for _ in range(exponent):
            out = out * base
        return out
    inv = geom_inverse(m, sign, cert, refined)
    for _ in range(-exponent):
        out = out * inv
    return out


def product_of_factors(factors, nvars: int, cert, refined: bool = True) -> Series:
    """Ordered product of ``(m, sign, exponent)`` factors."""
    out = Series.monomial((0,) * nvars, 1, refined).truncate(cert)
    for m, s, e in factors:
        out = out * factor_series(m, s, e, cert, refined)
    return out
