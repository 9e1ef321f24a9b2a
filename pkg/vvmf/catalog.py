"""
Built-in example data: the one-dimensional rows, the E7 and A1 level one
pairs, the Ising family and SU(3) level one.
"""

from fractions import Fraction

from .errors import InputError
from .exactnum import Cyclotomic, Matrix, sqrt2, sqrt3
from .qseries import QSeries, delta, eisenstein
from .repdata import RepData
from .reptools import ModularRep


def _rep(lam, rows) -> RepData:
    return RepData(tuple(Fraction(x) for x in lam), Matrix(rows))


# name: (Lambda, X, S, T exponent numerator over 6, weight of E_w / Delta**(w/12))
ONE_DIMENSIONAL = {
    "trivial": (Fraction(1), 0, 1, 0, 0),
    "kappa2": (Fraction(2, 3), 248, 1, 4, 4),
    "kappa4": (Fraction(1, 3), 496, 1, 2, 8),
    "kappa3": (Fraction(1, 2), -492, -1, 3, 6),
    "kappabar": (Fraction(1, 6), -244, -1, 1, 10),
    "kappa": (Fraction(-1, 6), 4, -1, 5, 14),
}

# weight modulo 12 -> one-dimensional row carrying eta**(-2k)
WEIGHT_ROWS = {0: "trivial", 2: "kappa", 4: "kappa2", 6: "kappa3", 8: "kappa4", 10: "kappabar"}


def one_dimensional(name: str) -> RepData:
    try:
        lam, x, _, _, _ = ONE_DIMENSIONAL[name]
    except KeyError:
        raise InputError("unknown one-dimensional row", name=name)
    return _rep([lam], [[x]])


def one_dimensional_rep(name: str) -> ModularRep:
    _, _, s, t, _ = ONE_DIMENSIONAL[name]
    return ModularRep(6, Matrix([[Fraction(s)]]), (Cyclotomic.zeta(6, t) if t else Fraction(1),))


def one_dimensional_series(name: str, terms: int) -> QSeries:
    """E_w / Delta**(w/12) for the row, to ``terms`` coefficients."""
    weight = ONE_DIMENSIONAL[name][4]
    if weight == 0:
        return QSeries.constant(1, terms)
    return eisenstein(weight, terms) * delta(terms + 1) ** Fraction(-weight, 12)


def row_for_weight(k: int) -> str:
    if k % 2:
        raise InputError("odd weight has no one-dimensional row", weight=k)
    return WEIGHT_ROWS[k % 12]


def _half_sqrt2():
    return sqrt2() / 2


def e7() -> RepData:
    return _rep([Fraction(17, 24), Fraction(11, 24)], [[133, 1248], [56, -377]])


def e7_rep() -> ModularRep:
    h = _half_sqrt2()
    return ModularRep(24, Matrix([[h, h], [h, -h]]), (Cyclotomic.zeta(24, 17), Cyclotomic.zeta(24, 11)))


def a1() -> RepData:
    return _rep([Fraction(23, 24), Fraction(5, 24)], [[3, 26752], [2, -247]])


def a1_rep() -> ModularRep:
    h = _half_sqrt2()
    return ModularRep(24, Matrix([[h, h], [h, -h]]), (Cyclotomic.zeta(24, 23), Cyclotomic.zeta(24, 5)))


def _ising_lambda(k: int) -> tuple:
    return (Fraction(47 - 2 * k, 48), Fraction(23 - 2 * k, 48), Fraction(2 + 4 * k, 48))


def ising(k: int) -> RepData:
    if not 0 <= k <= 11:
        raise InputError("Ising family member out of range", k=k)
    p = 2 ** (12 - k)
    rows = [
        [k * (2 * k + 1), (31 - 2 * k) * (9 + 2 * k) * (25 + 2 * k) // 3, p * (23 - 2 * k)],
        [2 * k + 1, (11 - k) * (25 + 2 * k), -p],
        [2**k, -(2**k) * (25 + 2 * k), 2 * k - 23],
    ]
    return _rep(_ising_lambda(k), rows)


def ising_S() -> Matrix:
    r = sqrt2()
    half = Fraction(1, 2)
    return Matrix([[half, half, r / 2], [half, half, -r / 2], [r / 2, -r / 2, Fraction(0)]])


def ising_rep(k: int = 0) -> ModularRep:
    T = tuple(Cyclotomic.zeta(48, int(x * 48)) for x in _ising_lambda(k))
    return ModularRep(48, ising_S(), T)


def su3_level_one() -> ModularRep:
    """SU(3) at level one: S is the discrete Fourier matrix of Z/3 over sqrt 3."""
    w = Cyclotomic.zeta(3)
    w2 = Cyclotomic.zeta(3, 2)
    one = Cyclotomic.rational(1, 3)
    scale = sqrt3() / 3
    S = Matrix([[one, one, one], [one, w, w2], [one, w2, w]]) * scale
    T = (Cyclotomic.zeta(12, -1), Cyclotomic.zeta(12, 3), Cyclotomic.zeta(12, 3))
    return ModularRep(12, S, T)


def trivial_rep() -> ModularRep:
    return ModularRep(1, Matrix([[Fraction(1)]]), (Fraction(1),))


NAMED = {
    "e7": e7,
    "a1": a1,
    **{name: (lambda name=name: one_dimensional(name)) for name in ONE_DIMENSIONAL},
}

NAMED_REPS = {
    "e7": e7_rep,
    "a1": a1_rep,
    **{name: (lambda name=name: one_dimensional_rep(name)) for name in ONE_DIMENSIONAL},
}


def lookup(name: str) -> RepData:
    if name.startswith("ising"):
        try:
            return ising(int(name[len("ising"):] or 0))
        except ValueError:
            raise InputError("unknown catalog entry", name=name)
    try:
        return NAMED[name]()
    except KeyError:
        raise InputError("unknown catalog entry", name=name)


def lookup_rep(name: str) -> ModularRep:
    if name.startswith("ising"):
        try:
            return ising_rep(int(name[len("ising"):] or 0))
        except ValueError:
            raise InputError("unknown catalog entry", name=name)
    try:
        return NAMED_REPS[name]()
    except KeyError:
        raise InputError("unknown catalog entry", name=name)
