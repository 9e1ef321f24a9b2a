import warnings
from fractions import Fraction

import pytest
from mpmath import iv

from vvmf.errors import DivisionByZeroError, GaloisError, InputError, NotRealError, SingularMatrixError
from vvmf.exactnum import (
    Cyclotomic,
    Matrix,
    matrix_from_json,
    nullspace,
    scalar_from_json,
    scalar_to_json,
    sign,
    simplify,
    sqrt2,
    sqrt3,
)

HALF_SQRT2 = {"conductor": 8, "terms": [[1, "1/2"], [3, "-1/2"]]}


def test_square_roots():
    """Test that sqrt2 and sqrt3 square to rationals"""
    assert sqrt2() * sqrt2() == 2
    assert simplify(sqrt3() ** 2) == Fraction(3)


def test_equality_across_conductors():
    """Test that zeta_8**2 equals zeta_4 and hashes alike"""
    assert Cyclotomic.zeta(8, 2) == Cyclotomic.zeta(4, 1)
    assert hash(Cyclotomic.zeta(8, 2)) == hash(Cyclotomic.zeta(4, 1))
    assert Cyclotomic.zeta(24, 12) == -1


def test_inverse_and_division():
    """Test field inversion through the norm"""
    x = sqrt2() + 1
    assert x * x.inverse() == 1
    assert (sqrt2() - 1) == 1 / x
    with pytest.raises(ZeroDivisionError):
        Cyclotomic.rational(0, 8).inverse()


def test_galois_action_on_sqrt2():
    """Test sigma_l on sqrt 2 for the units modulo 8"""
    assert sqrt2().galois(3) == -sqrt2()
    assert sqrt2().galois(5) == -sqrt2()
    # sigma_7 is complex conjugation and fixes real numbers
    assert sqrt2().galois(7) == sqrt2()
    with pytest.raises(GaloisError):
        sqrt2().galois(2)


def test_galois_action_on_sqrt3():
    """Test sigma_5 negates sqrt 3 in Q(zeta_12)"""
    assert sqrt3().galois(5) == -sqrt3()
    assert sqrt3().galois(11) == sqrt3()


def test_sign_of_real_numbers():
    """Test interval sign decisions"""
    assert sign(sqrt2() - 1) == 1
    assert sign(sqrt2() - Fraction(3, 2)) == -1
    assert sign(sqrt2() - Fraction(141421, 100000)) == 1
    assert sign(Cyclotomic.rational(0, 8)) == 0
    assert sign(Fraction(-2, 3)) == -1


def test_sign_of_non_real_number():
    """Test that sign refuses non-real input"""
    with pytest.raises(NotRealError):
        sign(Cyclotomic.zeta(4, 1))


def test_root_of_unity_exponent():
    """Test recognition of roots of unity"""
    assert Cyclotomic.zeta(24, 17).root_of_unity_exponent() == Fraction(17, 24)
    assert Cyclotomic.rational(-1, 3).root_of_unity_exponent() == Fraction(1, 2)
    # 1 + zeta_3 = -zeta_3**2 = zeta_6
    assert (Cyclotomic.zeta(3) + 1).root_of_unity_exponent() == Fraction(1, 6)
    assert (Cyclotomic.zeta(3) * 2).root_of_unity_exponent() is None


def test_real_part_and_conjugate():
    """Test conjugation and real parts"""
    z = Cyclotomic.zeta(12, 1)
    assert z.conjugate() == Cyclotomic.zeta(12, 11)
    assert z.real_part() == sqrt3() / 2
    assert z.real_part().is_real()
    assert not z.is_real()


def test_restrict_to_subfield():
    """Test expressing an element in a smaller cyclotomic field"""
    x = sqrt2().raise_to(24)
    assert x.restrict(8) == sqrt2()
    assert x.restrict(8).conductor == 8
    assert Cyclotomic.zeta(24, 1).restrict(8) is None


def test_scalar_encodings():
    """Test JSON scalar decoding"""
    assert scalar_from_json(7) == Fraction(7)
    assert scalar_from_json("-3/4") == Fraction(-3, 4)
    assert scalar_from_json(HALF_SQRT2) == sqrt2() / 2
    # exponents at or above phi(N) are reduced
    assert scalar_from_json({"conductor": 8, "terms": [[9, "1"]]}) == Cyclotomic.zeta(8, 1)
    assert scalar_from_json({"conductor": 8, "terms": [[4, "1"]]}) == Fraction(-1)
    assert scalar_to_json(sqrt2() / 2) == HALF_SQRT2
    assert scalar_to_json(Fraction(5, 2)) == "5/2"


def test_invalid_scalars():
    """Test that malformed scalars raise InputError"""
    for bad in ("1/0", "x", True, 1.5, {"terms": []}):
        with pytest.raises(InputError):
            scalar_from_json(bad)


def test_matrix_arithmetic():
    """Test products, determinant and inverse"""
    a = Matrix([[1, 2], [3, 4]])
    assert a.det() == -2
    assert a * a.inverse() == Matrix.identity(2)
    assert a**-1 == a.inverse()
    assert (a * 2).trace() == 10
    assert a.transpose()[0, 1] == 3


def test_singular_matrix():
    """Test that inverting a singular matrix reports its determinant"""
    with pytest.raises(SingularMatrixError) as exc:
        Matrix([[1, 2], [2, 4]]).inverse()
    assert exc.value.determinant == 0


def test_cyclotomic_matrix_inverse():
    """Test the E7 S matrix is an involution"""
    h = sqrt2() / 2
    S = Matrix([[h, h], [h, -h]])
    assert (S * S).is_identity()
    assert S.inverse() == S
    assert S.det() == -1


def test_rank_solve_and_nullspace():
    """Test RREF based linear algebra"""
    a = Matrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert a.rank() == 2
    kernel = nullspace(a)
    assert len(kernel) == 1
    product = a * Matrix([[x] for x in kernel[0]])
    assert product.is_zero()
    assert a.solve([1, 2, 1]) is not None
    assert a.solve([1, 3, 1]) is None


def test_ising_kernel_is_two_dimensional():
    """Test that S - 1 for the Ising S has a two-dimensional kernel"""
    r = sqrt2() / 2
    half = Fraction(1, 2)
    S = Matrix([[half, half, r], [half, half, -r], [r, -r, Fraction(0)]])
    assert len(nullspace(S - Matrix.identity(3))) == 2


def test_permutation_detection():
    """Test is_permutation"""
    assert Matrix([[0, 1], [1, 0]]).is_permutation()
    assert not Matrix([[0, 1], [1, 1]]).is_permutation()
    assert not Matrix([[0, -1], [1, 0]]).is_permutation()


def test_matrix_json():
    """Test matrix decoding of nested rows"""
    m = matrix_from_json([["1", HALF_SQRT2], [0, "2/3"]])
    assert m[0, 1] == sqrt2() / 2
    with pytest.raises(InputError):
        matrix_from_json(["1", "2"])


def test_sign_keeps_interval_precision():
    """Test sign decisions of irrational numbers leave the interval context untouched"""
    before = iv.prec
    cos_pi_24 = Cyclotomic.zeta(48, 1) + Cyclotomic.zeta(48, 47)
    assert sign(cos_pi_24) == 1
    assert sign(cos_pi_24 - 2) == -1
    assert sign(sqrt2() / 2 - Fraction(7071, 10000)) == 1
    assert iv.prec == before


def test_fraction_free_elimination():
    """Test Bareiss elimination keeps integer entries and ends on the determinant"""
    a = Matrix([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    rows, pivots, den = a.echelon_form()
    assert pivots == [0, 1, 2]
    assert den == a.det() == 18
    assert rows == [[18, 0, 0], [0, 18, 0], [0, 0, 18]]
    assert all(x.denominator == 1 for row in rows for x in row)
    assert a * a.inverse() == Matrix.identity(3)


def test_elimination_with_row_swaps():
    """Test rref and solve when the first pivot needs a swap"""
    a = Matrix([[0, 2, 4], [1, 1, 1], [2, 4, 6]])
    reduced, pivots = a.rref()
    assert pivots == [0, 1]
    assert reduced == Matrix([[1, 0, -1], [0, 1, 2], [0, 0, 0]])
    x = a.solve([2, 3, 8])
    assert a * Matrix([[v] for v in x]) == Matrix([[2], [3], [8]])
    (kernel,) = nullspace(a)
    assert kernel == (Fraction(1), Fraction(-2), Fraction(1))


def test_division_by_zero():
    """Test division by an exact zero is a math error"""
    with pytest.raises(DivisionByZeroError) as exc:
        sqrt2() / 0
    assert exc.value.exit_code == 3
    with pytest.raises(DivisionByZeroError):
        1 / Cyclotomic.rational(0, 8)


def test_hash_without_deprecation_warnings():
    """Test the normalized trace hash runs without deprecated number theory calls"""
    with warnings.catch_warnings():
        warnings.simplefilter("error", DeprecationWarning)
        assert hash(Cyclotomic.zeta(12, 5)) == hash(Cyclotomic.zeta(12, 5).raise_to(24))
