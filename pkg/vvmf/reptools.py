"""
Diagnostics on the representation matrices S and T: the Galois matrices
G_l, the rationality test, the congruence heuristic, the nonnegativity test
and the reduction of an SL2(Z) representation to a PSL2(Z) one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .checks import Check, CheckList, equality
from .errors import GaloisError, InputError, NotRealError, ReductionError
from .exactnum import (
    Cyclotomic,
    Matrix,
    conductor_of,
    is_rational,
    lcm,
    matrix_from_json,
    matrix_to_json,
    nullspace,
    scalar_from_json,
    scalar_to_json,
    sign,
    simplify,
    units,
)

logger = logging.getLogger(__name__)


def _unit_power(value, exponent: int):
    if isinstance(value, Cyclotomic):
        return simplify(value**exponent)
    return Fraction(value) ** exponent


def root_of_unity_exponent(value) -> Fraction:
    """e in [0, 1) with value = exp(2 pi i e)."""
    value = simplify(value)
    if isinstance(value, Fraction):
        if value == 1:
            return Fraction(0)
        if value == -1:
            return Fraction(1, 2)
    elif isinstance(value, Cyclotomic):
        exponent = value.root_of_unity_exponent()
        if exponent is not None:
            return exponent
    raise InputError("T entry is not a root of unity", value=value)


@dataclass(frozen=True)
class ModularRep:
    """S and the diagonal of T over Q(zeta_N)."""

    conductor: int
    S: Matrix
    T: tuple

    def __post_init__(self):
        if self.S.shape != (len(self.T), len(self.T)):
            raise InputError("S must be square of the size of T", shape=self.S.shape, d=len(self.T))
        for value in (*self.T, *(x for row in self.S for x in row)):
            if self.conductor % conductor_of(value):
                raise InputError(
                    "entry lies outside the declared cyclotomic field",
                    conductor=self.conductor,
                    entry_conductor=conductor_of(value),
                )

    @property
    def d(self) -> int:
        return len(self.T)

    @property
    def T_matrix(self) -> Matrix:
        return Matrix.diag(self.T)

    def T_power(self, exponent: int) -> tuple:
        return tuple(_unit_power(t, exponent) for t in self.T)

    @property
    def U(self) -> Matrix:
        """S T^-1."""
        return _scale_columns(self.S, self.T_power(-1))

    def exponents(self) -> tuple:
        return tuple(root_of_unity_exponent(t) for t in self.T)

    def order_of_T(self) -> int:
        order = 1
        for e in self.exponents():
            order = lcm(order, e.denominator)
        return order

    @property
    def level(self) -> int:
        """Modulus for Galois indices: multiple of both the conductor and the order of T."""
        return lcm(self.conductor, self.order_of_T())

    def is_sl2(self) -> bool:
        return sl2_relations_check(self).passed

    def is_psl2(self) -> bool:
        return self.is_sl2() and (self.S * self.S).is_identity()

    @classmethod
    def from_json(cls, doc: dict) -> ModularRep:
        try:
            conductor = int(doc["conductor"])
            S = matrix_from_json(doc["S"])
            T = tuple(scalar_from_json(t) for t in doc["T_diag"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("ModularRep needs 'conductor', 'S' and 'T_diag'") from exc
        return cls(conductor, S, T)

    def to_json(self) -> dict:
        return {
            "conductor": self.conductor,
            "S": matrix_to_json(self.S),
            "T_diag": [scalar_to_json(t) for t in self.T],
        }


def _scale_columns(m: Matrix, diagonal: Sequence) -> Matrix:
    return Matrix([[simplify(x * t) for x, t in zip(row, diagonal)] for row in m.rows])


def _scale_rows(diagonal: Sequence, m: Matrix) -> Matrix:
    return Matrix([[simplify(t * x) for x in row] for t, row in zip(diagonal, m.rows)])


def sl2_relations_check(rep: ModularRep) -> Check:
    """(ST)^3 = S^2 and S^4 = 1."""
    S2 = rep.S * rep.S
    ST = _scale_columns(rep.S, rep.T)
    cube = ST * ST * ST
    if cube != S2:
        return Check("sl2_relations", False, cube, S2, "(ST)^3 differs from S^2")
    if not (S2 * S2).is_identity():
        return Check("sl2_relations", False, S2 * S2, Matrix.identity(rep.d), "S^4 is not the identity")
    return Check("sl2_relations", True)


def direct_sum(*reps: ModularRep) -> ModularRep:
    conductor = 1
    for rep in reps:
        conductor = lcm(conductor, rep.conductor)
    return ModularRep(
        conductor,
        Matrix.block_diag([rep.S for rep in reps]),
        tuple(t for rep in reps for t in rep.T),
    )


def twist(rep: ModularRep, s_value, t_value, conductor: int) -> ModularRep:
    """Tensor with the one-dimensional representation S -> s_value, T -> t_value."""
    return ModularRep(
        lcm(rep.conductor, conductor),
        (rep.S * s_value).map(simplify),
        tuple(simplify(t * t_value) for t in rep.T),
    )


def contragredient(rep: ModularRep) -> ModularRep:
    """g -> transpose(rho(g))^-1."""
    return ModularRep(rep.conductor, rep.S.transpose().inverse(), rep.T_power(-1))


def g_ell(rep: ModularRep, l: int) -> Matrix:
    """S T^(1/l) S T^l S T^(1/l), with 1/l the inverse of l modulo the level."""
    level = rep.level
    if gcd(l, level) != 1:
        raise GaloisError(f"{l} is not coprime to {level}", l=l, level=level)
    inverse = pow(l, -1, level) if level > 1 else 0
    t_inv = rep.T_power(inverse)
    t_l = rep.T_power(l % level if level > 1 else 0)
    S = rep.S
    return _scale_columns(_scale_columns(_scale_columns(S, t_inv) * S, t_l) * S, t_inv)


def g_ell_conjugation_check(rep: ModularRep, l: int) -> Check:
    """G_l T G_l^-1 = T^(l^2), tested as G_l T = T^(l^2) G_l."""
    G = g_ell(rep, l)
    lhs = _scale_columns(G, rep.T)
    rhs = _scale_rows(rep.T_power(l * l), G)
    return Check(f"g_ell_conjugation[{l}]", lhs == rhs, lhs, rhs)


@dataclass(frozen=True)
class RationalityResult:
    passed: bool
    witness: Optional[int]
    difference: Optional[Matrix]
    checks: tuple


def rationality_test(rep: ModularRep) -> RationalityResult:
    """sigma_l(S) = G_l S for every l in a transversal of the units modulo the level."""
    level = rep.level
    matrices = {}
    for l in units(level):
        G = g_ell(rep, l)
        lhs = rep.S.galois(l)
        rhs = G * rep.S
        if lhs != rhs:
            logger.info("rationality test fails at l = %d", l)
            return RationalityResult(
                False,
                l,
                lhs - rhs,
                (Check("rationality", False, lhs, rhs, f"sigma_{l}(S) differs from G_{l} S"),),
            )
        matrices[l] = G
    checks = [Check("rationality", True, detail=f"{len(matrices)} Galois indices modulo {level}")]
    checks.append(equality("S_real", rep.S, rep.S.galois(-1)))
    rational = all(is_rational(x) for G in matrices.values() for row in G for x in row)
    checks.append(Check("g_ell_rational", rational))
    return RationalityResult(all(c.passed for c in checks), None, None, tuple(checks))


def congruence_heuristic(rep: ModularRep) -> Check:
    """The multiset of T^(l^2) diagonal entries equals that of T for all units l."""
    exponents = rep.exponents()
    order = rep.order_of_T()
    reference = sorted(exponents)
    for l in units(order):
        moved = sorted((e * l * l) % 1 for e in exponents)
        if moved != reference:
            return Check("congruence_heuristic", False, moved, reference, f"fails at l = {l}")
    return Check("congruence_heuristic", True, detail=f"all units modulo {order}")


def _positive_combination_exists(rows: list) -> bool:
    """Is there a real vector lam with sum_j row[j] lam[j] > 0 for every row (Fourier-Motzkin)."""
    rows = [list(r) for r in rows]
    if not rows:
        return True
    for k in reversed(range(len(rows[0]))):
        positive, negative, remaining = [], [], []
        for row in rows:
            s = sign(row[k])
            if s > 0:
                positive.append(row)
            elif s < 0:
                negative.append(row)
            else:
                remaining.append(row[:k])
        if positive and negative:
            for p in positive:
                for n in negative:
                    remaining.append([simplify(p[j] / p[k] - n[j] / n[k]) for j in range(k)])
        rows = remaining
    return not rows


def nonnegativity_test(rep: ModularRep, component: Optional[int] = None) -> list[Check]:
    """S has a strictly positive eigenvector of eigenvalue 1; optionally column ``component`` is nonnegative."""
    checks = CheckList()
    kernel = nullspace(rep.S - Matrix.identity(rep.d))
    try:
        if not kernel:
            checks.add(Check("positive_eigenvector", False, detail="1 is not an eigenvalue of S"))
        elif len(kernel) == 1:
            vector = list(kernel[0])
            lead = next(x for x in vector if x)
            if sign(lead) < 0:
                vector = [simplify(-x) for x in vector]
            positive = all(sign(x) > 0 for x in vector)
            checks.add(Check("positive_eigenvector", positive, vector, detail="kernel dimension 1"))
        else:
            rows = [[v[i] for v in kernel] for i in range(rep.d)]
            positive = _positive_combination_exists(rows)
            checks.add(Check("positive_eigenvector", positive, kernel, detail=f"kernel dimension {len(kernel)}"))
    except NotRealError as exc:
        checks.add(Check("positive_eigenvector", False, detail=f"indeterminate: {exc.detail}"))
    if component is not None:
        if not 0 <= component < rep.d:
            raise InputError("component out of range", component=component, d=rep.d)
        column = rep.S.column(component)
        try:
            ok = all(sign(x) >= 0 for x in column)
            checks.add(Check(f"column_nonnegative[{component}]", ok, list(column)))
        except NotRealError as exc:
            checks.add(Check(f"column_nonnegative[{component}]", False, detail=f"indeterminate: {exc.detail}"))
    return checks.checks


@dataclass(frozen=True)
class Reduction:
    rep: ModularRep
    orbits: tuple
    checks: tuple


def reduce_representation(rep: ModularRep) -> Reduction:
    """Fold the charge-conjugation orbits of S^2 into a PSL2(Z) representation."""
    relations = sl2_relations_check(rep)
    if not relations.passed:
        raise ReductionError("not an SL2(Z) representation", reason=relations.detail)
    S2 = rep.S * rep.S
    if not S2.is_permutation() or not (S2 * S2).is_identity():
        raise ReductionError("S^2 is not a permutation of order at most 2", S2=S2)
    partner = [next(j for j in range(rep.d) if S2[i, j] == 1) for i in range(rep.d)]
    orbits = []
    for i in range(rep.d):
        if i <= partner[i]:
            orbits.append(tuple(sorted({i, partner[i]})))
    for orbit in orbits:
        if len(orbit) == 2:
            a, b = orbit
            if rep.T[a] != rep.T[b]:
                raise ReductionError("T differs along an orbit", orbit=orbit)
            for target in orbits:
                left = sum((rep.S[a, p] for p in target), Fraction(0))
                right = sum((rep.S[b, p] for p in target), Fraction(0))
                if left != right:
                    raise ReductionError("orbit sums depend on the representative", orbit=orbit, target=target)
    S = Matrix(
        [[simplify(sum((rep.S[xi[0], p] for p in eta), Fraction(0))) for eta in orbits] for xi in orbits]
    )
    T = tuple(rep.T[orbit[0]] for orbit in orbits)
    reduced = ModularRep(rep.conductor, S, T)
    ST = _scale_columns(S, T)
    checks = (
        Check("reduced_ST_cubed", (ST * ST * ST).is_identity(), ST * ST * ST, Matrix.identity(len(orbits))),
        Check("reduced_S_squared", (S * S).is_identity(), S * S, Matrix.identity(len(orbits))),
        equality("reduced_S_real", S, S.galois(-1)),
    )
    logger.info("reduced dimension %d to %d", rep.d, len(orbits))
    return Reduction(reduced, tuple(orbits), checks)
