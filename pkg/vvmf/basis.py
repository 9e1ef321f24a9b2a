"""
Canonical basis vectors X(xi;n) of the module of vector-valued modular
functions, their recursion and differential relations, the generating
function identities and reconstruction from principal parts.

Vectors are stored Lambda-normalized: component eta of X(xi;n) is kept as
q**-lam[eta] times its expansion, an integer-power series whose principal
part is q**-n when eta == xi and zero otherwise.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .checks import Check, CheckList
from .errors import InputError, PrecisionError
from .exactnum import Matrix, simplify
from .fundamental import FundamentalMatrix, series_check
from .qseries import (
    BivariateSeries,
    QSeries,
    bivariate_mismatch,
    e_function,
    hauptmodul_j,
    jprime,
    nabla,
    series_matmul,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CanonicalVector:
    xi: int
    n: int
    components: tuple
    lam: tuple

    def constant_part(self) -> tuple:
        return tuple(c.coefficient(0) for c in self.components)

    def series(self) -> tuple:
        return tuple(c.shift(l) for c, l in zip(self.components, self.lam))

    @property
    def prec(self) -> Fraction:
        return min(c.prec for c in self.components)

    def to_json(self) -> dict:
        return {
            "component": self.xi,
            "order": self.n,
            "series": [s.to_json() for s in self.series()],
        }


@dataclass(frozen=True)
class CanonicalBasis:
    lam: tuple
    vectors: dict
    max_pole: int
    checks: tuple = field(default=(), compare=False)

    @property
    def d(self) -> int:
        return len(self.lam)

    def vector(self, xi: int, n: int) -> CanonicalVector:
        try:
            return self.vectors[(xi, n)]
        except KeyError:
            raise InputError("canonical vector not prepared", component=xi, order=n, max_pole=self.max_pole)

    def constant_matrix(self, n: int) -> Matrix:
        """Entry (eta, xi) is the constant part of component eta of X(xi;n)."""
        columns = [self.vector(xi, n).constant_part() for xi in range(self.d)]
        return Matrix([[columns[xi][eta] for xi in range(self.d)] for eta in range(self.d)])

    @property
    def prec(self) -> Fraction:
        return min(v.prec for v in self.vectors.values())


def _combine(terms) -> QSeries:
    total = None
    for coefficient, series in terms:
        if not coefficient:
            continue
        term = series * coefficient
        total = term if total is None else total + term
    return total


def canonical_basis(fm: FundamentalMatrix, max_pole: int) -> CanonicalBasis:
    """X(xi;m+1) = J X(xi;m) - sum c(n) X(xi;m-n) - sum_eta C_eta(xi;m) X(eta;1)."""
    d = fm.d
    if max_pole < 1:
        raise InputError("maximal pole order must be positive", max_pole=max_pole)
    if fm.terms < max_pole + 1:
        raise PrecisionError(
            "fundamental matrix too short for the requested pole order",
            terms=fm.terms,
            max_pole=max_pole,
        )
    j = hauptmodul_j(fm.terms + 2)
    c = [j.coefficient(n) for n in range(max_pole + 1)]
    vectors = {}
    for xi in range(d):
        vectors[(xi, 1)] = CanonicalVector(xi, 1, fm.normalized_column(xi), fm.lam)
    for m in range(1, max_pole):
        for xi in range(d):
            current = vectors[(xi, m)]
            constants = current.constant_part()
            components = []
            for eta in range(d):
                total = j * current.components[eta]
                for n in range(1, m):
                    if c[n]:
                        total = total - vectors[(xi, m - n)].components[eta] * c[n]
                for zeta in range(d):
                    if constants[zeta]:
                        total = total - vectors[(zeta, 1)].components[eta] * constants[zeta]
                components.append(total)
            vectors[(xi, m + 1)] = CanonicalVector(xi, m + 1, tuple(components), fm.lam)
        logger.debug("canonical vectors of pole order %d built", m + 1)
    checks = CheckList()
    for (xi, n), vector in sorted(vectors.items()):
        expected = {(xi, n): Fraction(1)}
        found = principal_part(vector.components)
        checks.add(Check(f"principal_part[{xi},{n}]", found == expected, found, expected))
    logger.info("canonical basis of dimension %d up to pole order %d", d, max_pole)
    return CanonicalBasis(fm.lam, vectors, max_pole, tuple(checks))


def principal_part(components) -> dict:
    """{(component, pole order): coefficient} of a Lambda-normalized vector."""
    part = {}
    for eta, series in enumerate(components):
        for exponent, coefficient in series.principal_part().items():
            part[(eta, int(-exponent))] = coefficient
    return part


def invert_principal_part(basis: CanonicalBasis, part: Mapping) -> tuple:
    """The element of the module whose principal part is ``part``."""
    for (xi, n), coefficient in part.items():
        if not 0 <= xi < basis.d:
            raise InputError("component out of range", component=xi, d=basis.d)
        if n < 1:
            raise InputError("pole orders must be positive", order=n)
        if n > basis.max_pole:
            raise InputError(
                "pole order exceeds the prepared basis", order=n, max_pole=basis.max_pole
            )
    components = []
    for eta in range(basis.d):
        total = _combine(
            (coefficient, basis.vector(xi, n).components[eta]) for (xi, n), coefficient in sorted(part.items())
        )
        components.append(total if total is not None else QSeries.zero(basis.prec))
    return tuple(components)


def differential_relations_check(basis: CanonicalBasis) -> list[Check]:
    """nabla X(xi;m) = (lam_xi - m) sum_{n=-1}^{m-1} E_n X(xi;m-n) + sum_eta lam_eta C_eta(xi;m) X(eta;1)."""
    lam = basis.lam
    d = basis.d
    e = e_function(int(basis.prec) + basis.max_pole + 2)
    checks = []
    for m in range(1, basis.max_pole):
        for xi in range(d):
            vector = basis.vector(xi, m)
            constants = vector.constant_part()
            lhs = tuple(nabla(s) for s in vector.series())
            rhs = []
            for eta in range(d):
                terms = [
                    ((lam[xi] - m) * e.coefficient(n), basis.vector(xi, m - n).series()[eta])
                    for n in range(-1, m)
                ]
                terms += [(lam[zeta] * constants[zeta], basis.vector(zeta, 1).series()[eta]) for zeta in range(d)]
                total = _combine(terms)
                rhs.append(total if total is not None else QSeries.zero(lhs[eta].prec))
            checks.append(series_check(f"differential_relation[{xi},{m}]", lhs, tuple(rhs)))
    return checks


def module_closure_check(basis: CanonicalBasis, components) -> Check:
    """nabla maps the module to itself: nabla X equals the inversion of its own principal part."""
    actual = tuple(c.shift(l) for c, l in zip(components, basis.lam))
    derived = tuple(nabla(s).shift(-l) for s, l in zip(actual, basis.lam))
    part = principal_part(derived)
    rebuilt = invert_principal_part(basis, part)
    return series_check("module_closure", derived, rebuilt)


def _x_generating(basis: CanonicalBasis, z_order: int) -> list[Matrix]:
    """Coefficients of z**k, k < z_order, of the matrix C(z) - 1."""
    d = basis.d
    out = [-Matrix.identity(d)]
    for k in range(1, z_order):
        out.append(basis.constant_matrix(k))
    return out


def _psi_inverse(fm: FundamentalMatrix, count: int) -> list[Matrix]:
    inverse = [Matrix.identity(fm.d)]
    for n in range(1, count):
        total = Matrix.zeros(fm.d)
        for m in range(1, n + 1):
            total = total + fm.psi[m] * inverse[n - m]
        inverse.append(-total)
    return inverse


def generating_function_check(fm: FundamentalMatrix, basis: CanonicalBasis, q_order: int, z_order: int) -> list[Check]:
    """Bivariate generating function identities to bi-order (q_order, z_order)."""
    d = fm.d
    if basis.max_pole < z_order:
        raise PrecisionError("basis too short for the z order", max_pole=basis.max_pole, z_order=z_order)
    if fm.terms < q_order + z_order + 1:
        raise PrecisionError("fundamental matrix too short for the bi-order", terms=fm.terms, q_order=q_order, z_order=z_order)
    big = fm.terms + z_order + 4
    j = hauptmodul_j(big)

    # Y(q, z)[eta][xi] = sum_n component eta of X(xi;n) z**(n-1)
    gen = [[None] * d for _ in range(d)]
    for eta in range(d):
        for xi in range(d):
            total = None
            for n in range(1, z_order + 1):
                piece = BivariateSeries.from_q(basis.vector(xi, n).components[eta], z_order, n - 1)
                total = piece if total is None else total + piece
            gen[eta][xi] = total
    zj_q = BivariateSeries.from_q(j, big, 1)
    zj_z = BivariateSeries.from_z(j.shift(1), big)
    lhs = tuple(tuple((zj_q - zj_z) * gen[eta][xi] for xi in range(d)) for eta in range(d))

    psi_q = tuple(
        tuple(BivariateSeries.from_q(fm.entry(a, b).shift(-1), big) for b in range(d)) for a in range(d)
    )
    x_coeffs = _x_generating(basis, z_order)
    x_z = tuple(
        tuple(
            BivariateSeries({(0, k): x_coeffs[k][a, b] for k in range(z_order)}, big, z_order) for b in range(d)
        )
        for a in range(d)
    )
    rhs3 = series_matmul(psi_q, x_z)

    weight = jprime(big).shift(2)
    inverse = _psi_inverse(fm, z_order)
    closed = []
    for k in range(z_order):
        total = Matrix.zeros(d)
        for t in range(k + 1):
            w = weight.coefficient(t)
            if w:
                total = total + inverse[k - t] * w
        closed.append(total)
    closed_z = tuple(
        tuple(BivariateSeries({(0, k): closed[k][a, b] for k in range(z_order)}, big, z_order) for b in range(d))
        for a in range(d)
    )
    rhs4 = series_matmul(psi_q, closed_z)

    checks = [
        _bivariate_check("generating_function_recursion", lhs, rhs3, q_order, z_order),
        _matrix_sequence_check("constant_part_generating_function", x_coeffs, closed),
        _bivariate_check("generating_function_closed_form", lhs, rhs4, q_order, z_order),
    ]
    logger.info("generating function checked to bi-order (%d, %d)", q_order, z_order)
    return checks


def _bivariate_check(name: str, lhs, rhs, q_order: int, z_order: int) -> Check:
    d = len(lhs)
    for a in range(d):
        for b in range(d):
            left = lhs[a][b].truncate(q_order, z_order)
            right = rhs[a][b].truncate(q_order, z_order)
            if left.q_prec < q_order or right.q_prec < q_order:
                return Check(name, False, detail=f"entry ({a}, {b}) known only below q^{min(left.q_prec, right.q_prec)}")
            where = bivariate_mismatch(left, right)
            if where is not None:
                m, n = where
                return Check(
                    name,
                    False,
                    left.coefficient(m, n),
                    right.coefficient(m, n),
                    f"entry ({a}, {b}) differs at q^{m} z^{n}",
                )
    return Check(name, True, detail=f"verified to bi-order ({q_order}, {z_order})")


def _matrix_sequence_check(name: str, lhs: list, rhs: list) -> Check:
    for k, (left, right) in enumerate(zip(lhs, rhs)):
        if left != right:
            return Check(name, False, left, right, f"z^{k} coefficient differs")
    return Check(name, True, detail=f"verified below z^{len(lhs)}")


def part_from_terms(terms) -> dict:
    """Accumulate (component, order, coefficient) triples into a principal part."""
    part: dict = {}
    for xi, n, coefficient in terms:
        part[(xi, n)] = simplify(part.get((xi, n), Fraction(0)) + coefficient)
    return {key: value for key, value in part.items() if value}
