from fractions import Fraction

import pytest

from vvmf.errors import InputError, PrecisionError, SeriesError
from vvmf.exactnum import Cyclotomic, sqrt2
from vvmf.qseries import (
    BivariateSeries,
    QSeries,
    bivariate_mismatch,
    dedekind_eta,
    delta,
    e_function,
    eisenstein,
    first_mismatch,
    hauptmodul_j,
    j_coefficients,
    jprime,
    nabla,
    series_det,
    zmap,
)


def coefficients(f: QSeries, count: int) -> list:
    return [f.coefficient(f.offset + n) for n in range(count)]


def test_j_coefficients():
    """Test the first Fourier coefficients of J"""
    assert j_coefficients(5) == [0, 196884, 21493760, 864299970, 20245856256]
    j = hauptmodul_j(6)
    assert j.valuation == -1
    assert j.coefficient(-1) == 1


def test_delta_and_eta():
    """Test Delta = q prod (1 - q^n)^24 = eta^24"""
    d = delta(6)
    assert coefficients(d, 5) == [1, -24, 252, -1472, 4830]
    eta24 = dedekind_eta(6) ** 24
    assert eta24.offset == 1
    assert first_mismatch(eta24, d) is None


def test_eisenstein_series():
    """Test E4, E6 and E14 = E8 E6"""
    assert coefficients(eisenstein(4, 4), 4) == [1, 240, 2160, 6720]
    assert coefficients(eisenstein(6, 4), 4) == [1, -504, -16632, -122976]
    assert coefficients(eisenstein(14, 3), 3) == [1, -24, -196632]
    with pytest.raises(InputError):
        eisenstein(12, 4)


def test_e_function():
    """Test E = E10/Delta = q^-1 - 240 - 141444 q"""
    e = e_function(5)
    assert e.valuation == -1
    assert coefficients(e, 3) == [1, -240, -141444]


def test_jprime_and_zmap():
    """Test dJ/dq and z = (984 - J)/1728"""
    jp = jprime(6)
    assert jp.coefficient(-2) == -1
    assert jp.coefficient(0) == 196884
    z = zmap(6)
    assert z.coefficient(-1) == Fraction(-1, 1728)
    assert z.coefficient(0) == Fraction(984, 1728)


def test_fractional_power():
    """Test E4 / Delta^(1/3) = q^(-1/3)(1 + 248 q + ...)"""
    f = eisenstein(4, 6) * delta(7) ** Fraction(-1, 3)
    assert f.offset == Fraction(-1, 3)
    assert f.coefficient(Fraction(-1, 3)) == 1
    assert f.coefficient(Fraction(2, 3)) == 248
    cube = (delta(7) ** Fraction(1, 3)) ** 3
    assert first_mismatch(cube, delta(7)) is None


def test_inverse_round_trip():
    """Test f * (1/f) = 1 to the known precision"""
    f = eisenstein(6, 8)
    product = f * f.inverse()
    assert first_mismatch(product, QSeries.constant(1, 8)) is None
    assert product.prec == 8


def test_theta_leibniz():
    """Test the Leibniz rule for theta and nabla"""
    f = eisenstein(4, 8)
    g = delta(8) ** Fraction(-1, 2)
    lhs = (f * g).theta()
    rhs = f.theta() * g + f * g.theta()
    assert first_mismatch(lhs, rhs) is None
    assert first_mismatch(nabla(f * g), nabla(f) * g + f * nabla(g)) is None


def test_sector_mismatch():
    """Test that adding series from different sectors fails"""
    a = QSeries(Fraction(1, 3), (Fraction(1),))
    b = QSeries(Fraction(0), (Fraction(1),))
    with pytest.raises(SeriesError):
        a + b
    with pytest.raises(SeriesError):
        a + 1


def test_precision_guard():
    """Test coefficient requests beyond the precision"""
    f = eisenstein(4, 3)
    assert f.prec == 3
    with pytest.raises(PrecisionError):
        f.coefficient(3)
    assert (f + QSeries.zero(2)).prec == 2


def test_zero_series_precision():
    """Test that zero series keep their precision"""
    z = QSeries.zero(5)
    assert z.is_zero()
    assert z.prec == 5
    assert (z * eisenstein(4, 10)).prec == 5


def test_galois_on_coefficients():
    """Test coefficientwise sigma_l"""
    f = QSeries(Fraction(0), (sqrt2(), Fraction(1), Cyclotomic.zeta(8, 1)))
    g = f.galois(3)
    assert g.coefficient(0) == -sqrt2()
    assert g.coefficient(2) == Cyclotomic.zeta(8, 3)


def test_series_determinant():
    """Test determinant over the Laurent-series field"""
    d = delta(6)
    e4 = eisenstein(4, 6)
    zero = QSeries.zero(6)
    det = series_det(((zero, d), (e4, zero)))
    assert first_mismatch(det, -(d * e4)) is None


def test_bivariate_product():
    """Test the kernel z J(q) - z J(z) at low order"""
    j = hauptmodul_j(8)
    zq = BivariateSeries.from_q(j, 6, 1)
    zz = BivariateSeries.from_z(j.shift(1), 6)
    difference = zq - zz
    assert difference.coefficient(-1, 1) == 1
    assert difference.coefficient(0, 0) == -1
    assert difference.coefficient(1, 1) == 196884
    assert bivariate_mismatch(difference, difference) is None


def test_classical_identities():
    """Test eta^24 = Delta and 1728 Delta = E4^3 - E6^2 to order 50"""
    assert first_mismatch(dedekind_eta(51) ** 24, delta(51)) is None
    e4, e6 = eisenstein(4, 52), eisenstein(6, 52)
    difference = (e4**3 - e6**2) / 1728
    assert difference.prec >= 50
    assert first_mismatch(difference, delta(52)) is None


def test_zmap_differential_equation():
    """Test nabla z = 1728 z (z - 1)"""
    z = zmap(20)
    rhs = z * (z - 1) * 1728
    assert first_mismatch(nabla(z), rhs) is None


def test_nabla_leading_terms():
    """Test nabla on a constant and on J"""
    assert nabla(QSeries.constant(5, 10)).is_zero()
    nj = nabla(hauptmodul_j(10))
    assert nj.valuation == -2
    assert nj.coefficient(-2) == -1


def test_fractional_power_round_trip():
    """Test (f^r)^(1/r) = f"""
    f = eisenstein(6, 30)
    r = Fraction(2, 7)
    assert first_mismatch((f**r) ** (1 / r), f) is None


def test_zero_is_additive_identity():
    """Test that the scalar zero adds to a series in any sector"""
    f = QSeries(Fraction(1, 3), (1, 2, 3))
    assert f + 0 == f
    assert 0 + f == f
    assert f - 0 == f
    assert sum([f, f]) == f * 2
    with pytest.raises(SeriesError):
        f + 1
