"""
Exact scalars: rationals (``fractions.Fraction``), elements of cyclotomic
fields and small dense matrices over either.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

import sympy
from mpmath import iv
from sympy.functions.combinatorial.numbers import mobius, totient

from . import config
from .errors import (
    DimensionMismatchError,
    DivisionByZeroError,
    GaloisError,
    InputError,
    NotRealError,
    SingularMatrixError,
)

_x = sympy.Symbol("x")


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def _phi_coeffs(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    poly = sympy.Poly(sympy.cyclotomic_poly(n, _x), _x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def _degree(n: int) -> int:
    return int(totient(n))


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row k is zeta_n**k in the power basis, for 0 <= k < n."""
    deg = _degree(n)
    phi = _phi_coeffs(n)
    cur = [0] * deg
    cur[0] = 1
    rows = []
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def units(n: int) -> tuple[int, ...]:
    """Representatives of (Z/nZ)^x in increasing order."""
    return tuple(l for l in range(1, n + 1) if gcd(l, n) == 1) if n > 1 else (1,)


def _from_dense(n: int, dense: Sequence) -> tuple[Fraction, ...]:
    """Reduce a length-n vector of coefficients of zeta_n**k into the power basis."""
    deg = _degree(n)
    table = _power_table(n)
    out = [Fraction(0)] * deg
    for k, c in enumerate(dense):
        if not c:
            continue
        if k < deg:
            out[k] += c
        else:
            for i, t in enumerate(table[k]):
                if t:
                    out[i] += c * t
    return tuple(out)


class Cyclotomic:
    """Element sum(c_e * zeta_N**e) of Q(zeta_N), reduced modulo Phi_N."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Iterable):
        if conductor < 1:
            raise InputError("conductor must be positive", conductor=conductor)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != _degree(conductor):
            raise InputError(
                "coefficient vector has the wrong length",
                conductor=conductor,
                length=len(coeffs),
            )
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic is immutable")

    # construction

    @classmethod
    def from_terms(cls, conductor: int, terms: Iterable[tuple[int, object]]) -> Cyclotomic:
        dense = [Fraction(0)] * conductor
        for e, c in terms:
            dense[e % conductor] += Fraction(c)
        return cls(conductor, _from_dense(conductor, dense))

    @classmethod
    def rational(cls, value, conductor: int = 1) -> Cyclotomic:
        coeffs = [Fraction(0)] * _degree(conductor)
        coeffs[0] = Fraction(value)
        return cls(conductor, coeffs)

    @classmethod
    def zeta(cls, conductor: int, exponent: int = 1) -> Cyclotomic:
        return cls(conductor, _power_table(conductor)[exponent % conductor])

    # field structure

    def raise_to(self, conductor: int) -> Cyclotomic:
        """Embed into Q(zeta_M) for a multiple M of the conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise InputError(
                "target conductor is not a multiple",
                source=self.conductor,
                target=conductor,
            )
        step = conductor // self.conductor
        dense = [Fraction(0)] * conductor
        for e, c in enumerate(self.coeffs):
            if c:
                dense[e * step] += c
        return Cyclotomic(conductor, _from_dense(conductor, dense))

    def restrict(self, conductor: int) -> Cyclotomic | None:
        """Express in Q(zeta_M) for a divisor M, or None when not in that subfield."""
        if self.conductor % conductor:
            return None
        # Elements of the subfield are fixed by every sigma_l with l = 1 mod M.
        for l in units(self.conductor):
            if l % conductor == 1 % conductor and self.galois(l) != self:
                return None
        basis = [Cyclotomic.zeta(conductor, e).raise_to(self.conductor) for e in range(_degree(conductor))]
        solution = Matrix([[b.coeffs[i] for b in basis] for i in range(_degree(self.conductor))]).solve(
            list(self.coeffs)
        )
        if solution is None:
            return None
        return Cyclotomic(conductor, solution)

    def galois(self, l: int) -> Cyclotomic:
        """The automorphism sigma_l sending zeta_N to zeta_N**l."""
        n = self.conductor
        if gcd(l, n) != 1:
            raise GaloisError(f"{l} is not coprime to the conductor {n}", l=l, conductor=n)
        dense = [Fraction(0)] * n
        for e, c in enumerate(self.coeffs):
            if c:
                dense[(e * l) % n] += c
        return Cyclotomic(n, _from_dense(n, dense))

    def conjugate(self) -> Cyclotomic:
        return self.galois(-1)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise InputError("cyclotomic number is not rational", value=self)
        return self.coeffs[0]

    def is_real(self) -> bool:
        return self == self.conjugate()

    def real_part(self) -> Cyclotomic:
        return (self + self.conjugate()) / 2

    def norm(self) -> Fraction:
        product = self
        for l in units(self.conductor)[1:]:
            product = product * self.galois(l)
        return product.to_fraction()

    def inverse(self) -> Cyclotomic:
        if not self:
            raise DivisionByZeroError("inverse of zero in a cyclotomic field", value=self)
        if self.is_rational():
            return Cyclotomic.rational(1 / self.coeffs[0], self.conductor)
        others = Cyclotomic.rational(1, self.conductor)
        for l in units(self.conductor)[1:]:
            others = others * self.galois(l)
        norm = (self * others).to_fraction()
        return others * (1 / norm)

    def root_of_unity_exponent(self) -> Fraction | None:
        """Return e/N in [0, 1) when the element equals zeta_N**e, else None."""
        n = self.conductor
        m = n if n % 2 == 0 else 2 * n
        target = self.raise_to(m)
        table = _power_table(m)
        for e in range(m):
            if tuple(Fraction(t) for t in table[e]) == target.coeffs:
                return Fraction(e, m)
        return None

    def sign(self) -> int:
        """Sign of a real element, decided by interval refinement."""
        if not self.is_real():
            raise NotRealError("sign of a non-real cyclotomic number", value=self)
        if not self:
            return 0
        if self.is_rational():
            return 1 if self.coeffs[0] > 0 else -1
        prec = 53
        saved = iv.prec
        try:
            while prec <= config.SIGN_MAX_PRECISION:
                iv.prec = prec
                total = iv.mpf(0)
                for e, c in enumerate(self.coeffs):
                    if c:
                        angle = 2 * iv.pi * e / self.conductor
                        total += iv.mpf(c.numerator) / c.denominator * iv.cos(angle)
                if total.a > 0:
                    return 1
                if total.b < 0:
                    return -1
                prec *= 2
        finally:
            iv.prec = saved
        raise NotRealError("sign undecided at the precision cap", value=self, bits=prec)

    # arithmetic

    def _coerce(self, other) -> tuple[Cyclotomic, Cyclotomic] | None:
        if isinstance(other, Cyclotomic):
            n = lcm(self.conductor, other.conductor)
            return self.raise_to(n), other.raise_to(n)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.rational(other, self.conductor)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic(a.conductor, (x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, (-c for c in self.coeffs))

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic(a.conductor, (x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.conductor, (c * other for c in self.coeffs))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        n = a.conductor
        deg = _degree(n)
        conv = [Fraction(0)] * (2 * deg - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        conv[i + j] += x * y
        phi = _phi_coeffs(n)
        for top in range(len(conv) - 1, deg - 1, -1):
            c = conv[top]
            if c:
                base = top - deg
                for i in range(deg):
                    if phi[i]:
                        conv[base + i] -= c * phi[i]
                conv[top] = Fraction(0)
        return Cyclotomic(n, conv[:deg])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DivisionByZeroError("division by zero", value=self)
            return self * (1 / Fraction(other))
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclotomic.rational(1, self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.coeffs == b.coeffs

    def __hash__(self):
        # Normalized trace: equal for equal elements written over different conductors.
        n = self.conductor
        total = Fraction(0)
        for e, c in enumerate(self.coeffs):
            if c:
                m = n // gcd(e, n)
                total += c * int(mobius(m)) / int(totient(m))
        return hash(total)

    def __repr__(self):
        terms = ", ".join(f"{e}: {c}" for e, c in enumerate(self.coeffs) if c)
        return f"Cyclotomic({self.conductor}, {{{terms}}})"


Scalar = Union[Fraction, Cyclotomic]


def galois_sigma(x, l: int):
    """sigma_l on a scalar; rationals are fixed."""
    if isinstance(x, Cyclotomic):
        return x.galois(l)
    return x


def simplify(x):
    """Drop a rational cyclotomic number to a Fraction."""
    if isinstance(x, Cyclotomic) and x.is_rational():
        return x.coeffs[0]
    if isinstance(x, int):
        return Fraction(x)
    return x


def is_rational(x) -> bool:
    return not isinstance(x, Cyclotomic) or x.is_rational()


def conductor_of(x) -> int:
    return x.conductor if isinstance(x, Cyclotomic) else 1


def sign(x) -> int:
    if isinstance(x, Cyclotomic):
        return x.sign()
    return (x > 0) - (x < 0)


def sqrt2() -> Cyclotomic:
    """sqrt(2) = zeta_8 + zeta_8**-1."""
    return Cyclotomic.zeta(8, 1) + Cyclotomic.zeta(8, 7)


def sqrt3() -> Cyclotomic:
    """sqrt(3) = zeta_12 + zeta_12**-1."""
    return Cyclotomic.zeta(12, 1) + Cyclotomic.zeta(12, 11)


# text encodings


def scalar_from_json(value) -> Scalar:
    if isinstance(value, bool):
        raise InputError("booleans are not scalars", value=value)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"invalid rational '{value}'") from exc
    if isinstance(value, dict) and "conductor" in value:
        try:
            conductor = int(value["conductor"])
            terms = [(int(e), Fraction(str(c))) for e, c in value.get("terms", [])]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError("invalid cyclotomic encoding", value=value) from exc
        return simplify(Cyclotomic.from_terms(conductor, terms))
    raise InputError("unsupported scalar encoding", value=value)


def fraction_to_json(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def scalar_to_json(value):
    value = simplify(value)
    if isinstance(value, Cyclotomic):
        return {
            "conductor": value.conductor,
            "terms": [[e, fraction_to_json(c)] for e, c in enumerate(value.coeffs) if c],
        }
    return fraction_to_json(value)


class Matrix:
    """Immutable dense matrix over exact scalars."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(simplify(x) if isinstance(x, int) else x for x in row) for row in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatchError("ragged matrix rows")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> Matrix:
        return cls([[Fraction(0)] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def diag(cls, values: Sequence) -> Matrix:
        n = len(values)
        return cls([[values[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, value, n: int) -> Matrix:
        return cls.diag([value] * n)

    @classmethod
    def block_diag(cls, blocks: Sequence[Matrix]) -> Matrix:
        n = sum(b.nrows for b in blocks)
        rows = [[Fraction(0)] * n for _ in range(n)]
        start = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    rows[start + i][start + j] = b[i, j]
            start += b.nrows
        return cls(rows)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, index):
        if isinstance(index, tuple):
            i, j = index
            return self.rows[i][j]
        return self.rows[index]

    def __iter__(self):
        return iter(self.rows)

    def map(self, fn) -> Matrix:
        return Matrix([[fn(x) for x in row] for row in self.rows])

    def submatrix(self, indices: Sequence[int]) -> Matrix:
        return Matrix([[self.rows[i][j] for j in indices] for i in indices])

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def diagonal(self) -> tuple:
        return tuple(self.rows[i][i] for i in range(min(self.shape)))

    def _check_same_shape(self, other: Matrix):
        if self.shape != other.shape:
            raise DimensionMismatchError("matrix shapes differ", left=self.shape, right=other.shape)

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_shape(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_shape(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatchError(
                    "inner dimensions differ", left=self.shape, right=other.shape
                )
            cols = [other.column(j) for j in range(other.ncols)]
            return Matrix(
                [[_dot(row, col) for col in cols] for row in self.rows]
            )
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self.map(lambda x: x * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self.map(lambda x: other * x)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self.map(lambda x: x / other)
        return NotImplemented

    def __pow__(self, k: int) -> Matrix:
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    def __hash__(self):
        return hash(tuple(hash(x) for row in self.rows for x in row))

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]!r})"

    def transpose(self) -> Matrix:
        return Matrix(zip(*self.rows)) if self.rows else self

    def trace(self):
        total = Fraction(0)
        for x in self.diagonal():
            total = total + x
        return simplify(total)

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.nrows)

    def is_diagonal(self) -> bool:
        return all(not self.rows[i][j] for i in range(self.nrows) for j in range(self.ncols) if i != j)

    def is_permutation(self) -> bool:
        if self.nrows != self.ncols:
            return False
        if any(x != 0 and x != 1 for row in self.rows for x in row):
            return False
        if any(sum(1 for x in row if x == 1) != 1 for row in self.rows):
            return False
        return all(sum(1 for x in self.column(j) if x == 1) == 1 for j in range(self.ncols))

    def galois(self, l: int) -> Matrix:
        return self.map(lambda x: simplify(galois_sigma(x, l)))

    def det(self):
        if self.nrows != self.ncols:
            raise DimensionMismatchError("determinant of a non-square matrix", shape=self.shape)
        n = self.nrows
        if n == 0:
            return Fraction(1)
        a = [list(r) for r in self.rows]
        sign_ = 1
        prev = Fraction(1)
        for k in range(n - 1):
            pivot = next((r for r in range(k, n) if a[r][k]), None)
            if pivot is None:
                return Fraction(0)
            if pivot != k:
                a[k], a[pivot] = a[pivot], a[k]
                sign_ = -sign_
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = simplify((a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev)
                a[i][k] = Fraction(0)
            prev = a[k][k]
        return simplify(sign_ * a[n - 1][n - 1])

    def echelon_form(self) -> tuple[list[list], list[int], object]:
        """Fraction-free Gauss-Jordan (Bareiss) elimination.

        Returns the eliminated rows, the pivot columns and the common pivot
        value ``den``: every pivot entry equals ``den`` and the reduced row
        echelon form is ``rows / den``. Each division is by the previous pivot.
        """
        a = [list(r) for r in self.rows]
        pivots: list[int] = []
        prev = Fraction(1)
        r = 0
        for c in range(self.ncols):
            if r == self.nrows:
                break
            pivot = next((i for i in range(r, self.nrows) if a[i][c]), None)
            if pivot is None:
                continue
            a[r], a[pivot] = a[pivot], a[r]
            p = a[r][c]
            for i in range(self.nrows):
                if i == r:
                    continue
                f = a[i][c]
                a[i] = [simplify((p * x - f * y) / prev) for x, y in zip(a[i], a[r])]
            pivots.append(c)
            prev = p
            r += 1
        return a, pivots, prev

    def rref(self) -> tuple[Matrix, list[int]]:
        """Reduced row echelon form with its pivot columns."""
        a, pivots, den = self.echelon_form()
        if den != 1:
            a = [[simplify(x / den) for x in row] for row in a]
        return Matrix(a), pivots

    def rank(self) -> int:
        return len(self.echelon_form()[1])

    def inverse(self) -> Matrix:
        if self.nrows != self.ncols:
            raise DimensionMismatchError("inverse of a non-square matrix", shape=self.shape)
        n = self.nrows
        augmented = Matrix([list(row) + list(ident) for row, ident in zip(self.rows, Matrix.identity(n).rows)])
        a, pivots, den = augmented.echelon_form()
        if pivots[:n] != list(range(n)):
            raise SingularMatrixError("matrix is singular", determinant=self.det())
        return Matrix([[simplify(x / den) for x in row[n:]] for row in a])

    def solve(self, rhs: Sequence) -> list | None:
        """One solution of A x = rhs, or None when inconsistent."""
        augmented = Matrix([list(row) + [b] for row, b in zip(self.rows, rhs)])
        a, pivots, den = augmented.echelon_form()
        if self.ncols in pivots:
            return None
        x = [Fraction(0)] * self.ncols
        for r, c in enumerate(pivots):
            x[c] = simplify(a[r][self.ncols] / den)
        return x


def _dot(row: Sequence, col: Sequence):
    total = Fraction(0)
    for a, b in zip(row, col):
        if a and b:
            total = total + a * b
    return simplify(total)


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a * b - b * a


def nullspace(a: Matrix) -> list[tuple]:
    """Basis of the right kernel, one vector per free column."""
    rows, pivots, den = a.echelon_form()
    free = [c for c in range(a.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * a.ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = simplify(-rows[r][f] / den)
        basis.append(tuple(v))
    return basis


def matrix_from_json(rows) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("matrix must be a list of rows")
    return Matrix([[scalar_from_json(x) for x in row] for row in rows])


def matrix_to_json(m: Matrix) -> list:
    return [[scalar_to_json(x) for x in row] for row in m.rows]
