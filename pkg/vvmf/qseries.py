"""
Truncated exact q-series and the classical level-one objects built from them:
eta, Delta, Eisenstein series, the Hauptmodul J, E = E10/Delta, the map z and
the operator nabla = E * q d/dq.

A series is q**offset * sum(a_n q**n) known modulo q**prec, with
prec = offset + len(coeffs). Every operation computes the precision its
result can guarantee.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Optional, Sequence

from sympy import integer_nthroot

from .errors import InputError, PrecisionError, SeriesError
from .exactnum import Cyclotomic, fraction_to_json, galois_sigma, scalar_to_json, simplify

logger = logging.getLogger(__name__)

_SCALARS = (int, Fraction, Cyclotomic)


def _count(offset: Fraction, prec: Fraction) -> int:
    """Number of grid exponents offset + n lying below prec."""
    return max(0, ceil(prec - offset))


@dataclass(frozen=True)
class QSeries:
    offset: Fraction
    coeffs: tuple

    def __post_init__(self):
        offset = Fraction(self.offset)
        coeffs = tuple(simplify(c) for c in self.coeffs)
        k = 0
        while k < len(coeffs) and not coeffs[k]:
            k += 1
        object.__setattr__(self, "offset", offset + k)
        object.__setattr__(self, "coeffs", coeffs[k:])

    # construction

    @classmethod
    def zero(cls, prec) -> QSeries:
        return cls(Fraction(prec), ())

    @classmethod
    def constant(cls, value, prec) -> QSeries:
        n = _count(Fraction(0), Fraction(prec))
        if n == 0:
            return cls.zero(prec)
        return cls(Fraction(0), (value,) + (Fraction(0),) * (n - 1))

    @classmethod
    def monomial(cls, exponent, prec, coefficient=1) -> QSeries:
        exponent = Fraction(exponent)
        n = _count(exponent, Fraction(prec))
        if n == 0:
            return cls.zero(prec)
        return cls(exponent, (coefficient,) + (Fraction(0),) * (n - 1))

    # basic properties

    @property
    def prec(self) -> Fraction:
        return self.offset + len(self.coeffs)

    @property
    def terms(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> Fraction:
        """Leading exponent, or the precision for the zero series."""
        return self.offset

    @property
    def leading(self):
        if not self.coeffs:
            raise SeriesError("leading coefficient of the zero series")
        return self.coeffs[0]

    def coefficient(self, exponent):
        exponent = Fraction(exponent)
        if exponent >= self.prec:
            raise PrecisionError(
                "coefficient beyond the known precision", exponent=exponent, prec=self.prec
            )
        k = exponent - self.offset
        if k < 0 or k.denominator != 1:
            return Fraction(0)
        return self.coeffs[int(k)]

    def items(self):
        for n, c in enumerate(self.coeffs):
            if c:
                yield self.offset + n, c

    def principal_part(self) -> dict:
        return {e: c for e, c in self.items() if e < 0}

    # structural operations

    def truncate(self, prec) -> QSeries:
        prec = Fraction(prec)
        if prec >= self.prec:
            return self
        if not self.coeffs or prec <= self.offset:
            return QSeries.zero(prec)
        return QSeries(self.offset, self.coeffs[: _count(self.offset, prec)])

    def shift(self, amount) -> QSeries:
        """Multiply by q**amount."""
        return QSeries(self.offset + Fraction(amount), self.coeffs)

    def theta(self) -> QSeries:
        """q d/dq."""
        return QSeries(self.offset, tuple((self.offset + n) * c for n, c in enumerate(self.coeffs)))

    def derivative(self) -> QSeries:
        """d/dq."""
        if not self.coeffs:
            return QSeries.zero(self.prec - 1)
        return QSeries(self.offset - 1, tuple((self.offset + n) * c for n, c in enumerate(self.coeffs)))

    def galois(self, l: int) -> QSeries:
        return QSeries(self.offset, tuple(galois_sigma(c, l) for c in self.coeffs))

    def map(self, fn) -> QSeries:
        return QSeries(self.offset, tuple(fn(c) for c in self.coeffs))

    # arithmetic

    def _as_series(self, other) -> QSeries:
        if isinstance(other, QSeries):
            return other
        if isinstance(other, _SCALARS):
            if not other:
                return QSeries.zero(self.prec)
            if self.coeffs and self.offset.denominator != 1:
                raise SeriesError("scalar added to a series in a fractional sector", offset=self.offset)
            return QSeries.constant(other, self.prec)
        raise TypeError(f"cannot combine QSeries with {type(other).__name__}")

    def _combine(self, other: QSeries, sign: int) -> QSeries:
        prec = min(self.prec, other.prec)
        if not other.coeffs:
            return self.truncate(prec)
        if not self.coeffs:
            return (other if sign > 0 else -other).truncate(prec)
        if (self.offset - other.offset).denominator != 1:
            raise SeriesError(
                "series lie in different fractional sectors",
                left=self.offset,
                right=other.offset,
            )
        start = min(self.offset, other.offset)
        n = _count(start, prec)
        if n == 0:
            return QSeries.zero(prec)
        out = [Fraction(0)] * n
        for s, f in ((1, self), (sign, other)):
            base = int(f.offset - start)
            for i, c in enumerate(f.coeffs[: max(0, n - base)]):
                out[base + i] = out[base + i] + c if s > 0 else out[base + i] - c
        return QSeries(start, out)

    def __add__(self, other):
        try:
            other = self._as_series(other)
        except TypeError:
            return NotImplemented
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self._as_series(other)
        except TypeError:
            return NotImplemented
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return QSeries(self.offset, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            if not other:
                return QSeries.zero(self.prec)
            return QSeries(self.offset, tuple(c * other for c in self.coeffs))
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec + other.valuation, other.prec + self.valuation)
        if not self.coeffs or not other.coeffs:
            return QSeries.zero(prec)
        n = min(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n):
            total = Fraction(0)
            for i in range(k + 1):
                if a[i] and b[k - i]:
                    total = total + a[i] * b[k - i]
            out.append(total)
        return QSeries(self.offset + other.offset, out)

    __rmul__ = __mul__

    def inverse(self) -> QSeries:
        if not self.coeffs:
            raise SeriesError("division by the zero series", prec=self.prec)
        u = self.coeffs
        inv0 = 1 / u[0]
        g = [simplify(inv0)]
        for n in range(1, len(u)):
            total = Fraction(0)
            for k in range(1, n + 1):
                if u[k] and g[n - k]:
                    total = total + u[k] * g[n - k]
            g.append(simplify(-inv0 * total))
        return QSeries(-self.offset, g)

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            if not other:
                raise SeriesError("division of a series by zero")
            return self * simplify(1 / Fraction(other) if not isinstance(other, Cyclotomic) else other.inverse())
        if isinstance(other, QSeries):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _SCALARS):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, r) -> QSeries:
        r = Fraction(r)
        if not self.coeffs:
            raise SeriesError("power of the zero series", exponent=r)
        u = self.coeffs
        c = u[0]
        g = [_leading_power(c, r)]
        for n in range(1, len(u)):
            total = Fraction(0)
            for k in range(1, n + 1):
                if u[k] and g[n - k]:
                    total = total + ((r + 1) * k - n) * u[k] * g[n - k]
            g.append(simplify(total / (n * c)))
        return QSeries(self.offset * r, g)

    # serialization

    def to_json(self) -> dict:
        return {
            "offset": fraction_to_json(self.offset),
            "coeffs": [scalar_to_json(c) for c in self.coeffs],
            "order": len(self.coeffs),
        }

    def __repr__(self):
        shown = " + ".join(f"({c})q^{self.offset + n}" for n, c in enumerate(self.coeffs[:6]) if c)
        return f"QSeries({shown or '0'} + O(q^{self.prec}))"


def _leading_power(c, r: Fraction):
    if c == 1:
        return Fraction(1)
    if r.denominator == 1:
        return simplify(c ** int(r))
    c = simplify(c)
    if isinstance(c, Fraction) and c > 0:
        num, exact_num = integer_nthroot(c.numerator, r.denominator)
        den, exact_den = integer_nthroot(c.denominator, r.denominator)
        if exact_num and exact_den:
            return Fraction(int(num), int(den)) ** r.numerator
    raise SeriesError("leading coefficient has no exact root", leading=c, exponent=r)


def first_mismatch(lhs: QSeries, rhs: QSeries) -> Optional[Fraction]:
    """First exponent below the common precision where the two series differ."""
    prec = min(lhs.prec, rhs.prec)
    lhs, rhs = lhs.truncate(prec), rhs.truncate(prec)
    if lhs.coeffs and rhs.coeffs and (lhs.offset - rhs.offset).denominator != 1:
        return min(lhs.offset, rhs.offset)
    difference = (lhs - rhs).truncate(prec)
    return None if difference.is_zero() else difference.offset


# classical series


def _check_terms(terms: int):
    if terms < 0:
        raise InputError("series order must be non-negative", order=terms)


@lru_cache(maxsize=None)
def _euler_product(terms: int) -> QSeries:
    """prod_{n >= 1} (1 - q**n)."""
    coeffs = [Fraction(0)] * terms
    if terms:
        coeffs[0] = Fraction(1)
    for n in range(1, terms):
        for k in range(terms - 1, n - 1, -1):
            coeffs[k] -= coeffs[k - n]
    return QSeries(Fraction(0), coeffs) if terms else QSeries.zero(0)


def dedekind_eta(terms: int) -> QSeries:
    """eta = q**(1/24) prod (1 - q**n)."""
    _check_terms(terms)
    return _euler_product(terms).shift(Fraction(1, 24)) if terms else QSeries.zero(Fraction(1, 24))


@lru_cache(maxsize=None)
def delta(terms: int) -> QSeries:
    _check_terms(terms)
    return (_euler_product(terms) ** 24).shift(1)


@lru_cache(maxsize=None)
def _divisor_sums(power: int, terms: int) -> tuple[int, ...]:
    sums = [0] * terms
    for d in range(1, terms):
        dk = d**power
        for m in range(d, terms, d):
            sums[m] += dk
    return tuple(sums)


@lru_cache(maxsize=None)
def eisenstein(k: int, terms: int) -> QSeries:
    """Normalized Eisenstein series of weight k in {4, 6, 8, 10, 14}."""
    _check_terms(terms)
    if terms == 0:
        return QSeries.zero(0)
    if k == 4:
        sums = _divisor_sums(3, terms)
        return QSeries(0, [Fraction(1)] + [Fraction(240 * s) for s in sums[1:]])
    if k == 6:
        sums = _divisor_sums(5, terms)
        return QSeries(0, [Fraction(1)] + [Fraction(-504 * s) for s in sums[1:]])
    if k == 8:
        return eisenstein(4, terms) * eisenstein(4, terms)
    if k == 10:
        return eisenstein(4, terms) * eisenstein(6, terms)
    if k == 14:
        return eisenstein(8, terms) * eisenstein(6, terms)
    raise InputError(f"unsupported Eisenstein weight {k}", weight=k)


@lru_cache(maxsize=None)
def hauptmodul_j(terms: int) -> QSeries:
    """J = E4**3 / Delta - 744 = q**-1 + sum c(n) q**n."""
    e4 = eisenstein(4, terms)
    return e4 * e4 * e4 / delta(terms) - 744


def jprime(terms: int) -> QSeries:
    """dJ/dq = -q**-2 + sum n c(n) q**(n-1)."""
    return hauptmodul_j(terms).derivative()


@lru_cache(maxsize=None)
def e_function(terms: int) -> QSeries:
    """E = E10 / Delta = q**-1 - 240 - 141444 q - ..."""
    return eisenstein(10, terms) / delta(terms)


def zmap(terms: int) -> QSeries:
    """z = (984 - J) / 1728."""
    return (984 - hauptmodul_j(terms)) / 1728


def j_coefficients(count: int) -> list[Fraction]:
    """c(0), c(1), ..., c(count - 1), with c(0) = 0."""
    j = hauptmodul_j(count + 1)
    return [j.coefficient(n) for n in range(count)]


def nabla(f: QSeries) -> QSeries:
    """E * q df/dq."""
    return e_function(max(len(f.coeffs), 1) + 1) * f.theta()


# matrices of series


SeriesMatrix = tuple  # tuple of rows, each a tuple of QSeries


def series_matmul(a: Sequence[Sequence[QSeries]], b: Sequence[Sequence[QSeries]]) -> SeriesMatrix:
    rows = []
    for row in a:
        out = []
        for j in range(len(b[0])):
            total = None
            for k, x in enumerate(row):
                term = x * b[k][j]
                total = term if total is None else total + term
            out.append(total)
        rows.append(tuple(out))
    return tuple(rows)


def series_det(a: Sequence[Sequence[QSeries]]) -> QSeries:
    """Determinant by elimination over the Laurent-series field."""
    m = [list(row) for row in a]
    n = len(m)
    result = None
    sign = 1
    for k in range(n):
        candidates = [r for r in range(k, n) if not m[r][k].is_zero()]
        if not candidates:
            prec = min(x.prec for row in m[k:] for x in row[k:])
            return QSeries.zero(prec)
        pivot = min(candidates, key=lambda r: m[r][k].valuation)
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        inv = m[k][k].inverse()
        for i in range(k + 1, n):
            if m[i][k].is_zero():
                continue
            factor = m[i][k] * inv
            m[i] = [m[i][j] - factor * m[k][j] for j in range(n)]
        result = m[k][k] if result is None else result * m[k][k]
    return result * sign


class BivariateSeries:
    """sum c[m, n] q**m z**n with integer exponents, known for m < q_prec and n < z_prec."""

    def __init__(self, coeffs: dict, q_prec: int, z_prec: int):
        self.coeffs = {
            key: simplify(c) for key, c in coeffs.items() if c and key[0] < q_prec and key[1] < z_prec
        }
        self.q_prec = q_prec
        self.z_prec = z_prec

    @classmethod
    def from_q(cls, f: QSeries, z_prec: int, z_power: int = 0) -> BivariateSeries:
        if f.offset.denominator != 1:
            raise SeriesError("bivariate series need integer q exponents", offset=f.offset)
        return cls({(int(e), z_power): c for e, c in f.items()}, int(ceil(f.prec)), z_prec)

    @classmethod
    def from_z(cls, f: QSeries, q_prec: int, q_power: int = 0) -> BivariateSeries:
        if f.offset.denominator != 1:
            raise SeriesError("bivariate series need integer z exponents", offset=f.offset)
        return cls({(q_power, int(e)): c for e, c in f.items()}, q_prec, int(ceil(f.prec)))

    def _valuations(self) -> tuple[int, int]:
        if not self.coeffs:
            return self.q_prec, self.z_prec
        return min(m for m, _ in self.coeffs), min(n for _, n in self.coeffs)

    def __add__(self, other: BivariateSeries) -> BivariateSeries:
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, Fraction(0)) + c
        return BivariateSeries(out, min(self.q_prec, other.q_prec), min(self.z_prec, other.z_prec))

    def __neg__(self) -> BivariateSeries:
        return BivariateSeries({k: -c for k, c in self.coeffs.items()}, self.q_prec, self.z_prec)

    def __sub__(self, other: BivariateSeries) -> BivariateSeries:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return BivariateSeries({k: c * other for k, c in self.coeffs.items()}, self.q_prec, self.z_prec)
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        vq_a, vz_a = self._valuations()
        vq_b, vz_b = other._valuations()
        q_prec = min(self.q_prec + vq_b, other.q_prec + vq_a)
        z_prec = min(self.z_prec + vz_b, other.z_prec + vz_a)
        out: dict = {}
        for (m1, n1), a in self.coeffs.items():
            for (m2, n2), b in other.coeffs.items():
                key = (m1 + m2, n1 + n2)
                if key[0] < q_prec and key[1] < z_prec:
                    out[key] = out.get(key, Fraction(0)) + a * b
        return BivariateSeries(out, q_prec, z_prec)

    __rmul__ = __mul__

    def coefficient(self, m: int, n: int):
        if m >= self.q_prec or n >= self.z_prec:
            raise PrecisionError("bivariate coefficient beyond precision", m=m, n=n)
        return self.coeffs.get((m, n), Fraction(0))

    def truncate(self, q_prec: int, z_prec: int) -> BivariateSeries:
        return BivariateSeries(self.coeffs, min(q_prec, self.q_prec), min(z_prec, self.z_prec))


def bivariate_mismatch(lhs: BivariateSeries, rhs: BivariateSeries) -> Optional[tuple[int, int]]:
    """Smallest (z-order, q-order) monomial inside both boxes where the sides differ."""
    q_prec = min(lhs.q_prec, rhs.q_prec)
    z_prec = min(lhs.z_prec, rhs.z_prec)
    difference = lhs.truncate(q_prec, z_prec) - rhs.truncate(q_prec, z_prec)
    if not difference.coeffs:
        return None
    m, n = min(difference.coeffs, key=lambda key: (key[1], key[0]))
    return m, n
