"""
Fundamental matrix Xi = q**(Lambda - 1) Psi of the compatibility equation
q dXi/dq = Xi D, with D = ((J - 240)(Lambda - 1) + X + [Lambda, X]) / E,
and the checks built on it: determinant, hypergeometric form, duality and
Lambda shifts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .checks import Check, equality
from .errors import InconsistencyError, InputError, ResonanceError, ShiftError
from .exactnum import Matrix, fraction_to_json, simplify
from .qseries import (
    QSeries,
    delta,
    e_function,
    eisenstein,
    first_mismatch,
    hauptmodul_j,
    nabla,
    series_det,
    series_matmul,
    zmap,
)
from .repdata import RepData, Signature, derive_AB, dual

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FundamentalMatrix:
    """Psi[0], ..., Psi[terms - 1] with Xi[xi][eta] = q**(lam[xi] - 1) Psi[xi][eta]."""

    rep: RepData
    psi: tuple
    resonances: tuple = ()
    checks: tuple = field(default=(), compare=False)

    @property
    def d(self) -> int:
        return self.rep.d

    @property
    def lam(self) -> tuple:
        return self.rep.lam

    @property
    def terms(self) -> int:
        return len(self.psi)

    def entry(self, xi: int, eta: int) -> QSeries:
        return QSeries(Fraction(0), tuple(p[xi, eta] for p in self.psi))

    def xi_entry(self, xi: int, eta: int) -> QSeries:
        return self.entry(xi, eta).shift(self.lam[xi] - 1)

    def psi_matrix(self) -> tuple:
        return tuple(tuple(self.entry(a, b) for b in range(self.d)) for a in range(self.d))

    def xi_matrix(self) -> tuple:
        return tuple(tuple(self.xi_entry(a, b) for b in range(self.d)) for a in range(self.d))

    def normalized_column(self, eta: int) -> tuple:
        """q**-Lambda times column eta of Xi: integer-power series with pole q**-1 in slot eta."""
        return tuple(self.entry(a, eta).shift(-1) for a in range(self.d))

    def det(self) -> QSeries:
        trace = sum((x - 1 for x in self.lam), Fraction(0))
        return series_det(self.psi_matrix()).shift(trace)

    def to_json(self) -> dict:
        return {
            "lambda": [fraction_to_json(x) for x in self.lam],
            "psi": [[s.to_json() for s in row] for row in self.psi_matrix()],
            "order": self.terms,
        }


def d_series(rep: RepData, terms: int) -> tuple[QSeries, QSeries]:
    """a = (J - 240)/E and b = 1/E, so that D = a (Lambda - 1) + b (X + [Lambda, X])."""
    e = e_function(terms + 1)
    a = (hauptmodul_j(terms + 1) - 240) / e
    b = e.inverse()
    return a, b


def d_matrix(rep: RepData, terms: int) -> tuple:
    a, b = d_series(rep, terms)
    K = rep.K
    return tuple(
        tuple(
            b * K[r, c] + (a * (rep.lam[r] - 1) if r == c else QSeries.zero(a.prec))
            for c in range(rep.d)
        )
        for r in range(rep.d)
    )


def expand_fundamental(rep: RepData, terms: int, verify: bool = True) -> FundamentalMatrix:
    """Solve (n + lam[xi] - lam[eta]) Psi[n][xi][eta] = (sum_m Psi[n-m] D[m])[xi][eta]."""
    if terms < 2:
        raise InputError("the fundamental matrix needs at least two terms", order=terms)
    d = rep.d
    a, b = d_series(rep, terms)
    if a.coefficient(0) != 1 or b.coefficient(0) != 0:
        raise InconsistencyError("D[0] differs from Lambda - 1")
    a_coeffs = [a.coefficient(m) for m in range(terms)]
    b_coeffs = [b.coefficient(m) for m in range(terms)]
    L = rep.Lambda - Matrix.identity(d)
    K = rep.K
    psi = [Matrix.identity(d)]
    psi_l = [psi[0] * L]
    psi_k = [psi[0] * K]
    resonances = []
    for n in range(1, terms):
        rhs = [[Fraction(0)] * d for _ in range(d)]
        for m in range(1, n + 1):
            am, bm = a_coeffs[m], b_coeffs[m]
            pl, pk = psi_l[n - m], psi_k[n - m]
            for r in range(d):
                for c in range(d):
                    value = am * pl[r, c] + bm * pk[r, c]
                    if value:
                        rhs[r][c] = rhs[r][c] + value
        entries = [[Fraction(0)] * d for _ in range(d)]
        for r in range(d):
            for c in range(d):
                divisor = n + rep.lam[r] - rep.lam[c]
                value = simplify(rhs[r][c])
                if divisor == 0:
                    if value:
                        raise ResonanceError(n, r, c, value)
                    logger.warning("resonance at order %d entry (%d, %d) set to zero", n, r, c)
                    resonances.append((n, r, c))
                    continue
                entries[r][c] = simplify(value / divisor)
        current = Matrix(entries)
        psi.append(current)
        psi_l.append(current * L)
        psi_k.append(current * K)
        logger.debug("fundamental matrix order %d solved", n)
    if psi[1] != rep.X:
        raise InconsistencyError("recovered Psi[1] differs from X", psi1=psi[1], X=rep.X)
    fm = FundamentalMatrix(rep, tuple(psi), tuple(resonances))
    checks = ()
    if verify:
        checks = (boundary_check(fm), *compat1_check(fm))
    logger.info("expanded fundamental matrix of dimension %d to %d terms", d, terms)
    return FundamentalMatrix(rep, tuple(psi), tuple(resonances), checks)


def boundary_check(fm: FundamentalMatrix) -> Check:
    ok = fm.psi[0].is_identity() and (fm.terms < 2 or fm.psi[1] == fm.rep.X)
    return Check("boundary_condition", ok, fm.psi[1] if fm.terms > 1 else None, fm.rep.X)


def series_check(name: str, lhs: tuple, rhs: tuple) -> Check:
    """Compare matrices (or vectors) of series entrywise over the common precision."""
    for r, (lrow, rrow) in enumerate(zip(lhs, rhs)):
        lrow = lrow if isinstance(lrow, tuple) else (lrow,)
        rrow = rrow if isinstance(rrow, tuple) else (rrow,)
        for c, (left, right) in enumerate(zip(lrow, rrow)):
            exponent = first_mismatch(left, right)
            if exponent is not None:
                return Check(
                    name,
                    False,
                    left.coefficient(exponent),
                    right.coefficient(exponent),
                    f"entry ({r}, {c}) differs at q^{exponent}",
                )
    precision = min(
        min(s.prec for s in (row if isinstance(row, tuple) else (row,))) for row in lhs
    )
    return Check(name, True, detail=f"verified below q^{precision}")


def compat1_check(fm: FundamentalMatrix) -> list[Check]:
    """Column form: nabla X(xi;1) = (J - 240)(lam_xi - 1) X(xi;1) + sum (1 + lam_eta - lam_xi) X[eta][xi] X(eta;1)."""
    d = fm.d
    lam = fm.lam
    j240 = hauptmodul_j(fm.terms + 1) - 240
    xi_mat = fm.xi_matrix()
    checks = []
    for col in range(d):
        lhs = tuple(nabla(xi_mat[comp][col]) for comp in range(d))
        rhs = []
        for comp in range(d):
            total = j240 * (lam[col] - 1) * xi_mat[comp][col]
            for eta in range(d):
                coefficient = (1 + lam[eta] - lam[col]) * fm.rep.X[eta, col]
                if coefficient:
                    total = total + xi_mat[comp][eta] * coefficient
            rhs.append(total)
        checks.append(series_check(f"compat1[{col}]", lhs, tuple(rhs)))
    return checks


def compat_check(fm: FundamentalMatrix) -> Check:
    """q dXi/dq = Xi D."""
    xi_mat = fm.xi_matrix()
    lhs = tuple(tuple(s.theta() for s in row) for row in xi_mat)
    rhs = series_matmul(xi_mat, d_matrix(fm.rep, fm.terms))
    return series_check("compat", lhs, rhs)


def detdif_check(fm: FundamentalMatrix) -> Check:
    """q d/dq det Xi = det Xi * Tr D."""
    a, b = d_series(fm.rep, fm.terms)
    trace_l = sum((x - 1 for x in fm.lam), Fraction(0))
    trace_d = a * trace_l + b * simplify(fm.rep.X.trace())
    det = fm.det()
    return series_check("liouville", ((det.theta(),),), ((det * trace_d,),))


def det_check(fm: FundamentalMatrix, sig: Signature) -> list[Check]:
    """det Xi = (E4/Delta^(1/3))^(b1 + 2 b2) (E6/Delta^(1/2))^alpha."""
    terms = fm.terms
    det = fm.det()
    d4 = eisenstein(4, terms) * delta(terms) ** Fraction(-1, 3)
    d6 = eisenstein(6, terms) * delta(terms) ** Fraction(-1, 2)
    rhs = (d4 ** (sig.beta1 + 2 * sig.beta2)) * (d6**sig.alpha)
    leading = sum((x - 1 for x in fm.lam), Fraction(0))
    return [
        equality("det_leading_exponent", det.valuation, leading),
        series_check("det_formula", ((det,),), ((rhs,),)),
    ]


def hypergeometric_check(fm: FundamentalMatrix, A: Optional[Matrix] = None, B: Optional[Matrix] = None) -> Check:
    """nabla Xi = Xi (864 (z - 1) A + 576 z B)."""
    if A is None or B is None:
        A, B = derive_AB(fm.rep)
    d = fm.d
    z = zmap(fm.terms + 1)
    za = (z - 1) * 864
    zb = z * 576
    kernel = tuple(tuple(za * A[r, c] + zb * B[r, c] for c in range(d)) for r in range(d))
    xi_mat = fm.xi_matrix()
    lhs = tuple(tuple(nabla(s) for s in row) for row in xi_mat)
    rhs = series_matmul(xi_mat, kernel)
    return series_check("hypergeometric", lhs, rhs)


def dual_prefactor(terms: int) -> QSeries:
    """E14 / Delta^(7/6) normalized to 1 + 4q + ..."""
    return (eisenstein(14, terms) * delta(terms) ** Fraction(-7, 6)).shift(Fraction(7, 6))


def dual_fundamental(fm: FundamentalMatrix) -> FundamentalMatrix:
    """Xi_dual = (E14/Delta^(7/6)) transpose(Xi)^-1, for the dual data."""
    d = fm.d
    terms = fm.terms
    transposed = [p.transpose() for p in fm.psi]
    inverse = [Matrix.identity(d)]
    for n in range(1, terms):
        total = Matrix.zeros(d)
        for m in range(1, n + 1):
            total = total + transposed[m] * inverse[n - m]
        inverse.append(-total)
    phi = dual_prefactor(terms)
    phi_coeffs = [phi.coefficient(k) for k in range(terms)]
    psi = []
    for n in range(terms):
        total = Matrix.zeros(d)
        for k in range(n + 1):
            if phi_coeffs[k]:
                total = total + inverse[n - k] * phi_coeffs[k]
        psi.append(total)
    return FundamentalMatrix(dual(fm.rep), tuple(psi))


def shift_matrix(X: Matrix, i: int, j: int, C, terms: int) -> tuple:
    """Unimodular polynomial matrix in J moving one unit of exponent from j to i."""
    d = X.nrows
    if i == j:
        raise ShiftError("shift indices must differ", i=i, j=j)
    x_ij = X[i, j]
    if not x_ij:
        raise ShiftError(f"X[{i}][{j}] vanishes", i=i, j=j)
    j_series = hauptmodul_j(terms + 1)
    prec = j_series.prec + 1

    def const(value):
        return QSeries.constant(value, prec) if value else QSeries.zero(prec)

    rows = [[const(Fraction(int(r == c))) for c in range(d)] for r in range(d)]
    for r in range(d):
        rows[r][i] = const(Fraction(0))
        rows[r][j] = const(-X[r, j])
    rows[j][i] = const(1 / x_ij)
    rows[i][j] = const(-x_ij)
    rows[j][j] = j_series - C
    for k in range(d):
        if k not in (i, j):
            rows[j][k] = const(-X[i, k] / x_ij)
    return tuple(tuple(row) for row in rows)


@dataclass(frozen=True)
class ShiftResult:
    rep: RepData
    fundamental: FundamentalMatrix
    constant: object
    checks: tuple


def lambda_shift(fm: FundamentalMatrix, i: int, j: int) -> ShiftResult:
    """Xi' = Xi M with Lambda' = Lambda + e_i - e_j; the constant C is fixed by the boundary condition."""
    d = fm.d
    if not (0 <= i < d and 0 <= j < d):
        raise InputError("shift indices out of range", i=i, j=j, d=d)
    if fm.terms < 4:
        raise ShiftError("lambda shift needs at least four terms", order=fm.terms)
    X = fm.rep.X
    psi = fm.psi_matrix()
    product = series_matmul(psi, shift_matrix(X, i, j, Fraction(0), fm.terms))
    C = simplify(product[i][j].coefficient(1) / X[i, j])
    rows = []
    for r in range(d):
        row = []
        for c in range(d):
            entry = product[r][c]
            if c == j:
                entry = entry - psi[r][j] * C
            if r == i:
                entry = entry.shift(-1)
            elif r == j:
                entry = entry.shift(1)
            row.append(entry)
        rows.append(row)
    for r in range(d):
        for c in range(d):
            entry = rows[r][c]
            expected = 1 if r == c else 0
            if entry.valuation < 0 or entry.coefficient(0) != expected:
                lead = entry.valuation
                raise ShiftError(
                    "shifted matrix violates the boundary condition",
                    entry=(r, c),
                    exponent=lead,
                    coefficient=entry.coefficient(lead) if lead < entry.prec else 0,
                )
    terms = int(min(entry.prec for row in rows for entry in row))
    new_psi = tuple(
        Matrix([[rows[r][c].coefficient(n) for c in range(d)] for r in range(d)]) for n in range(terms)
    )
    lam = list(fm.lam)
    lam[i] += 1
    lam[j] -= 1
    rep = RepData(tuple(lam), new_psi[1])
    shifted = FundamentalMatrix(rep, new_psi)
    checks = (
        equality("trace_lambda_preserved", sum(rep.lam, Fraction(0)), sum(fm.lam, Fraction(0))),
        series_check(
            "shift_matrix_unimodular",
            ((series_det(shift_matrix(X, i, j, C, fm.terms)),),),
            ((QSeries.constant(1, fm.terms),),),
        ),
    )
    logger.info("lambda shift (%d, %d) with constant %s", i, j, C)
    return ShiftResult(rep, shifted, C, checks)
