"""
Holomorphic vector-valued modular forms of weight k: the induced
representation, the exponent choice, dimension formulas and explicit bases
eta**(2k) X(xi;n).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Optional, Sequence

from .basis import canonical_basis
from .checks import Check, CheckList, equality
from .errors import InputError
from .exactnum import Cyclotomic, simplify
from .fundamental import expand_fundamental
from .qseries import dedekind_eta
from .repdata import RepData, _block_ranges, riemann_roch_trace
from .reptools import ModularRep, contragredient, twist

logger = logging.getLogger(__name__)


def _weight(k) -> Fraction:
    k = Fraction(k)
    if (2 * k).denominator != 1:
        raise InputError("weight must be a half-integer", weight=str(k))
    return k


def induce_rep(rep: ModularRep, k) -> ModularRep:
    """rho tensor mu**(-2k) with mu(T) = zeta_24 and mu(S) = zeta_24**-6."""
    k = _weight(k)
    two_k = int(2 * k)
    return twist(rep, Cyclotomic.zeta(24, 3 * two_k), Cyclotomic.zeta(24, -two_k), 24)


def exponents_from_rep(rep: ModularRep, blocks: Optional[Sequence[int]] = None) -> tuple:
    """Lift the T exponents to a Lambda whose trace matches the Riemann-Roch value, block by block."""
    fractional = rep.exponents()
    U = rep.U
    lam = list(fractional)
    for indices in _block_ranges(rep.d, blocks):
        trace_s = simplify(rep.S.submatrix(indices).trace())
        trace_u = simplify(U.submatrix(indices).trace())
        target = riemann_roch_trace(len(indices), trace_s, trace_u)
        shift = target - sum((fractional[i] for i in indices), Fraction(0))
        if shift.denominator != 1:
            raise InputError("Riemann-Roch trace is incompatible with the T exponents", target=str(target))
        shift = int(shift)
        order = sorted(indices, key=lambda i: (-fractional[i], i))
        step = 1 if shift > 0 else -1
        for t in range(abs(shift)):
            lam[order[t % len(order)]] += step
        logger.debug("block %s lifted by %d", indices, shift)
    return tuple(lam)


def dim_forms(lam: Sequence, k) -> tuple[int, int]:
    """(dim M_k, dim S_k) from the exponents of the induced representation."""
    k = _weight(k)
    modular = sum(floor(Fraction(x) + k / 12) for x in lam)
    cusp = -sum(floor(1 - k / 12 - Fraction(x)) for x in lam)
    return max(0, modular), max(0, cusp)


def per_component_count(lam: Sequence, k) -> int:
    k = _weight(k)
    return sum(max(0, floor(Fraction(x) + k / 12)) for x in lam)


@dataclass(frozen=True)
class FormSpace:
    weight: Fraction
    induced: ModularRep
    is_representation: bool
    lam: tuple
    dim_modular: int
    dim_cusp: int
    components: int = 0

    def to_json(self) -> dict:
        return {
            "weight": str(self.weight),
            "is_representation": self.is_representation,
            "lambda": [str(x) for x in self.lam],
            "dim_M": self.dim_modular,
            "dim_S": self.dim_cusp,
            "component_count": self.components,
        }


def form_space(rep: ModularRep, k, blocks: Optional[Sequence[int]] = None) -> FormSpace:
    k = _weight(k)
    induced = induce_rep(rep, k)
    if not induced.is_psl2():
        logger.info("weight %s does not give a PSL2(Z) representation; the space is trivial", k)
        return FormSpace(k, induced, False, (), 0, 0)
    lam = exponents_from_rep(induced, blocks)
    dim_m, dim_s = dim_forms(lam, k)
    return FormSpace(k, induced, True, lam, dim_m, dim_s, per_component_count(lam, k))


def trace_integer_part_checks(rep: ModularRep, blocks: Optional[Sequence[int]] = None) -> list[Check]:
    """Tr floor(1 - Lambda) = dim M_2(dual) and Tr floor(Lambda) = dim M_0 - dim S_2(dual)."""
    lam = exponents_from_rep(rep, blocks)
    own = form_space(rep, 0, blocks)
    dual = form_space(contragredient(rep), 2, blocks)
    floor_complement = sum(floor(1 - x) for x in lam)
    floor_lambda = sum(floor(x) for x in lam)
    return [
        equality("trace_floor_one_minus_lambda", floor_complement, dual.dim_modular),
        equality("trace_floor_lambda", floor_lambda, own.dim_modular - dual.dim_cusp),
    ]


@dataclass(frozen=True)
class FormBasis:
    weight: Fraction
    data: RepData
    forms: tuple
    labels: tuple
    dimension: int
    checks: tuple = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {
            "weight": str(self.weight),
            "dimension": self.dimension,
            "forms": [
                {"component": xi, "order": n, "series": [s.to_json() for s in form]}
                for (xi, n), form in zip(self.labels, self.forms)
            ],
        }


def _consistent_with(rep: ModularRep, data: RepData, k: Fraction) -> None:
    induced = induce_rep(rep, k)
    if induced.d != data.d:
        raise InputError("representation and exponents differ in dimension", rep=induced.d, d=data.d)
    for x, e in zip(data.lam, induced.exponents()):
        if (x - e).denominator != 1:
            raise InputError("Lambda does not lift the induced T exponents", lam=str(x), exponent=str(e))


def form_basis(data: RepData, k, terms: int, rep: Optional[ModularRep] = None) -> FormBasis:
    """eta**(2k) X(xi;n) for 1 <= n <= floor(lam_xi + k/12), each to ``terms`` coefficients."""
    k = _weight(k)
    if terms < 1:
        raise InputError("order must be positive", order=terms)
    checks = CheckList()
    if rep is not None:
        _consistent_with(rep, data, k)
        if not induce_rep(rep, k).is_psl2():
            checks.add(Check("induced_representation", False, detail="not a PSL2(Z) representation"))
            return FormBasis(k, data, (), (), 0, tuple(checks))
    orders = [floor(x + k / 12) for x in data.lam]
    top = max(orders, default=0)
    dim_m, _ = dim_forms(data.lam, k)
    if top < 1:
        checks.add(equality("basis_cardinality", 0, dim_m))
        return FormBasis(k, data, (), (), dim_m, tuple(checks))
    size = terms + top + max(0, -min(orders)) + 2
    fm = expand_fundamental(data, size)
    basis = canonical_basis(fm, top)
    eta = dedekind_eta(size) ** (2 * k)
    forms, labels = [], []
    for xi, count in enumerate(orders):
        for n in range(1, count + 1):
            vector = basis.vector(xi, n)
            form = []
            for lam, s in zip(data.lam, vector.series()):
                # component exponents lie in (lam + k/12) + Z
                sector = (lam + k / 12) % 1
                product = eta * s
                form.append(product.truncate(min(product.prec, sector + terms)))
            forms.append(tuple(form))
            labels.append((xi, n))
    holomorphic = all(f.is_zero() or f.valuation >= 0 for form in forms for f in form)
    checks.add(Check("holomorphic", holomorphic))
    found = len(forms)
    if all(n >= 0 for n in orders):
        checks.add(equality("basis_cardinality", found, dim_m))
    else:
        logger.warning("negative component floors: %d basis vectors against trace formula %d", found, dim_m)
        checks.add(Check("basis_cardinality", True, found, dim_m, "component floors are negative; both counts reported"))
    logger.info("weight %s basis with %d forms", k, found)
    return FormBasis(k, data, tuple(forms), tuple(labels), dim_m, tuple(checks))

