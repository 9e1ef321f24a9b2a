"""
The fundamental data (Lambda, X) of a vector-valued modular function, the
derived residue matrices A and B, the signature and the algebraic validators.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .checks import Check, CheckList, equality
from .errors import DimensionMismatchError, InputError, LambdaResonanceError
from .exactnum import (
    Cyclotomic,
    Matrix,
    commutator,
    fraction_to_json,
    is_rational,
    matrix_from_json,
    matrix_to_json,
    simplify,
    sqrt3,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RepData:
    """Exponent diagonal ``lam`` and characteristic matrix ``X``."""

    lam: tuple
    X: Matrix

    def __post_init__(self):
        lam = tuple(Fraction(x) for x in self.lam)
        object.__setattr__(self, "lam", lam)
        if self.X.shape != (len(lam), len(lam)):
            raise DimensionMismatchError(
                "X must be square of the size of Lambda", d=len(lam), shape=self.X.shape
            )

    @property
    def d(self) -> int:
        return len(self.lam)

    @property
    def Lambda(self) -> Matrix:
        return Matrix.diag(self.lam)

    @property
    def K(self) -> Matrix:
        """X + [Lambda, X]."""
        return self.X + commutator(self.Lambda, self.X)

    @property
    def A(self) -> Matrix:
        return derive_AB(self)[0]

    @property
    def B(self) -> Matrix:
        return derive_AB(self)[1]

    @classmethod
    def from_json(cls, doc: dict) -> RepData:
        try:
            lam = [Fraction(str(x)) for x in doc["lambda"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError("RepData needs a 'lambda' list of rationals") from exc
        if "X" not in doc:
            raise InputError("RepData needs an 'X' matrix")
        return cls(tuple(lam), matrix_from_json(doc["X"]))

    def to_json(self) -> dict:
        return {"lambda": [fraction_to_json(x) for x in self.lam], "X": matrix_to_json(self.X)}


@dataclass(frozen=True)
class Signature:
    d: int
    alpha: int
    beta1: int
    beta2: int

    def __add__(self, other: Signature) -> Signature:
        return Signature(
            self.d + other.d,
            self.alpha + other.alpha,
            self.beta1 + other.beta1,
            self.beta2 + other.beta2,
        )

    def trace_lambda(self) -> Fraction:
        return self.d - Fraction(self.alpha, 2) - Fraction(self.beta1 + 2 * self.beta2, 3)

    def trace_X(self) -> int:
        return 4 * (62 * self.beta1 + 124 * self.beta2 - 123 * self.alpha)

    def trace_S(self) -> int:
        return self.d - 2 * self.alpha

    def trace_U(self) -> Cyclotomic:
        """d - 3/2 (b1 + b2) + i sqrt(3)/2 (b1 - b2), in Q(zeta_12)."""
        i = Cyclotomic.zeta(12, 3)
        real = self.d - Fraction(3, 2) * (self.beta1 + self.beta2)
        return i * sqrt3() * Fraction(self.beta1 - self.beta2, 2) + real

    def to_json(self) -> dict:
        return {"d": self.d, "alpha": self.alpha, "beta1": self.beta1, "beta2": self.beta2}


@dataclass(frozen=True)
class SpectralResult:
    passed: bool
    signature: Optional[Signature]
    checks: tuple


def derive_AB(rep: RepData) -> tuple[Matrix, Matrix]:
    one_minus_lambda = Matrix.identity(rep.d) - rep.Lambda
    K = rep.K
    A = one_minus_lambda * Fraction(31, 36) - K * Fraction(1, 864)
    B = one_minus_lambda * Fraction(41, 24) + K * Fraction(1, 576)
    return A, B


def _integral(value) -> Optional[int]:
    value = simplify(value)
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return None


def signature_from(A: Matrix, B: Matrix) -> Optional[Signature]:
    """Multiplicities from traces: alpha = Tr A, b1 = 2 Tr B - Tr B^2, b2 = (Tr B^2 - Tr B)/2."""
    tr_a = _integral(A.trace())
    tr_b = simplify(B.trace())
    tr_b2 = simplify((B * B).trace())
    if tr_a is None or not is_rational(tr_b) or not is_rational(tr_b2):
        return None
    beta1 = _integral(2 * tr_b - tr_b2)
    beta2 = _integral((tr_b2 - tr_b) / 2)
    if beta1 is None or beta2 is None:
        return None
    return Signature(A.nrows, tr_a, beta1, beta2)


def spectral_check(A: Matrix, B: Matrix) -> SpectralResult:
    """A(A - 1) = 0 and B(B - 1)(B - 2) = 0, exactly."""
    if A.shape != B.shape or A.nrows != A.ncols:
        raise DimensionMismatchError("A and B must be square of equal size", A=A.shape, B=B.shape)
    one = Matrix.identity(A.nrows)
    residual_a = A * (A - one)
    residual_b = B * (B - one) * (B - one * 2)
    checks = (
        Check("spectral_A", residual_a.is_zero(), residual_a, Matrix.zeros(A.nrows)),
        Check("spectral_B", residual_b.is_zero(), residual_b, Matrix.zeros(A.nrows)),
    )
    passed = all(c.passed for c in checks)
    signature = signature_from(A, B) if passed else None
    if passed and signature is None:
        passed = False
        checks += (Check("signature_integral", False, detail="traces are not integral"),)
    if signature is not None:
        bounds = (
            0 <= signature.alpha <= signature.d
            and signature.beta1 >= 0
            and signature.beta2 >= 0
            and signature.beta1 + signature.beta2 <= signature.d
        )
        checks += (Check("signature_bounds", bounds, signature),)
        passed = passed and bounds
    return SpectralResult(passed, signature, checks)


def validate(rep: RepData) -> SpectralResult:
    A, B = derive_AB(rep)
    return spectral_check(A, B)


def monodromy_equation_check(rep: RepData, A: Optional[Matrix] = None) -> Check:
    """A^2 = A together with the cubic relation obtained by eliminating B."""
    L = rep.Lambda
    A = derive_AB(rep)[0] if A is None else A
    one = Matrix.identity(rep.d)
    L2 = L * L
    lhs = A * L * A
    rhs = (
        A * Fraction(-17, 18)
        - (A * L2 + L * A * L + L2 * A) * 2
        + (A * L + L * A) * 3
        - L2 * L * 4
        + L2 * 8
        - L * Fraction(44, 9)
        + one * Fraction(8, 9)
    )
    idempotent = A * A == A
    return Check(
        "monodromy_equation",
        idempotent and lhs == rhs,
        lhs,
        rhs,
        "" if idempotent else "A is not idempotent",
    )


def riemann_roch_trace(d: int, trace_s, trace_u) -> Fraction:
    """5d/12 + Tr S/4 + 2/(3 sqrt 3) Re(exp(-pi i/6) Tr U), evaluated in a cyclotomic field."""
    w = Cyclotomic.zeta(12, 11) * trace_u
    real = (w + w.conjugate()) / 2
    value = Fraction(5 * d, 12) + simplify(trace_s) / 4 + real * sqrt3() * Fraction(2, 9)
    value = simplify(value)
    if not is_rational(value):
        raise InputError("Riemann-Roch expression is not rational", value=value)
    return value


def _block_ranges(d: int, blocks: Optional[Sequence[int]]) -> list[list[int]]:
    if not blocks:
        return [list(range(d))]
    if sum(blocks) != d or any(b <= 0 for b in blocks):
        raise InputError("block sizes must be positive and sum to d", blocks=list(blocks), d=d)
    ranges, start = [], 0
    for size in blocks:
        ranges.append(list(range(start, start + size)))
        start += size
    return ranges


def restrict(rep: RepData, indices: Sequence[int]) -> RepData:
    return RepData(tuple(rep.lam[i] for i in indices), rep.X.submatrix(indices))


def trace_audit(
    rep: RepData,
    S: Optional[Matrix] = None,
    T: Optional[Matrix] = None,
    U: Optional[Matrix] = None,
    blocks: Optional[Sequence[int]] = None,
) -> list[Check]:
    """Trace identities implied by the signature, applied per block."""
    if U is None and S is not None and T is not None:
        U = S * T.inverse()
    results = CheckList()
    for number, indices in enumerate(_block_ranges(rep.d, blocks)):
        suffix = f"[{number}]" if blocks else ""
        sub = restrict(rep, indices)
        spectral = validate(sub)
        if not spectral.passed:
            results.add(Check("trace_audit" + suffix, False, detail="spectral condition fails"))
            continue
        sig = spectral.signature
        trace_x = simplify(sub.X.trace())
        results.add(equality("trace_X" + suffix, trace_x, Fraction(sig.trace_X())))
        results.add(equality("trace_lambda" + suffix, sum(sub.lam, Fraction(0)), sig.trace_lambda()))
        congruent = isinstance(trace_x, Fraction) and trace_x.denominator == 1 and (trace_x - 4 * sig.alpha) % 248 == 0
        results.add(Check("trace_X_mod_248" + suffix, congruent, trace_x, 4 * sig.alpha))
        trace_s = Fraction(sig.trace_S())
        trace_u = sig.trace_U()
        if S is not None:
            trace_s = simplify(S.submatrix(indices).trace())
            results.add(equality("trace_S" + suffix, trace_s, Fraction(sig.trace_S())))
        if U is not None:
            trace_u = simplify(U.submatrix(indices).trace())
            results.add(equality("trace_U" + suffix, trace_u, sig.trace_U()))
        try:
            rr = riemann_roch_trace(sub.d, trace_s, trace_u)
            results.add(equality("riemann_roch" + suffix, rr, sum(sub.lam, Fraction(0))))
        except InputError as exc:
            results.add(Check("riemann_roch" + suffix, False, detail=exc.detail))
    if S is not None and T is not None and U is not None:
        results.add(equality("S_U_equals_T_inverse", S * U, T.inverse()))
    return results.checks


def dual(rep: RepData) -> RepData:
    """Lambda -> 5/6 - Lambda, X -> 4 - transpose(X)."""
    lam = tuple(Fraction(5, 6) - x for x in rep.lam)
    X = Matrix.scalar(Fraction(4), rep.d) - rep.X.transpose()
    return RepData(lam, X)


def direct_sum(*reps: RepData) -> RepData:
    lam = tuple(x for rep in reps for x in rep.lam)
    return RepData(lam, Matrix.block_diag([rep.X for rep in reps]))


def characteristic_from_A(lam: Sequence, A: Matrix) -> RepData:
    """Recover X from Lambda and A by inverting X -> X + [Lambda, X] entrywise."""
    lam = tuple(Fraction(x) for x in lam)
    d = len(lam)
    K = (Matrix.identity(d) - Matrix.diag(lam)) * Fraction(31, 36) * 864 - A * 864
    rows = []
    for xi in range(d):
        row = []
        for eta in range(d):
            divisor = 1 + lam[xi] - lam[eta]
            if divisor == 0:
                raise LambdaResonanceError(xi, eta)
            row.append(simplify(K[xi, eta] / divisor))
        rows.append(row)
    return RepData(lam, Matrix(rows))


def permute(rep: RepData, perm: Sequence[int]) -> RepData:
    """Conjugate by the permutation matrix sending index i to perm[i]."""
    if sorted(perm) != list(range(rep.d)):
        raise InputError("not a permutation", perm=list(perm))
    inverse = [0] * rep.d
    for i, p in enumerate(perm):
        inverse[p] = i
    lam = tuple(rep.lam[inverse[i]] for i in range(rep.d))
    X = Matrix([[rep.X[inverse[i], inverse[j]] for j in range(rep.d)] for i in range(rep.d)])
    return RepData(lam, X)


def galois_conjugate(rep: RepData, l: int) -> RepData:
    return RepData(rep.lam, rep.X.galois(l))
