from fractions import Fraction

import pytest

from vvmf import catalog
from vvmf.errors import GaloisError, InputError, ReductionError
from vvmf.exactnum import Cyclotomic, Matrix, sqrt3, units
from vvmf.reptools import (
    ModularRep,
    congruence_heuristic,
    contragredient,
    direct_sum,
    g_ell,
    g_ell_conjugation_check,
    nonnegativity_test,
    rationality_test,
    reduce_representation,
    sl2_relations_check,
    twist,
)

GENUINE = [catalog.trivial_rep(), catalog.e7_rep(), catalog.a1_rep(), catalog.ising_rep(0)]


def corrupted_ising() -> ModularRep:
    rows = [list(row) for row in catalog.ising_S().rows]
    rows[0][0] = -rows[0][0]
    return ModularRep(48, Matrix(rows), catalog.ising_rep(0).T)


def test_level_one_relations():
    """Test S^2 = (ST)^3 = 1 for the E7 and A1 pairs"""
    assert catalog.e7_rep().is_psl2()
    assert catalog.a1_rep().is_psl2()
    assert catalog.e7_rep().level == 24


@pytest.mark.parametrize("rep", GENUINE)
def test_rationality_passes(rep):
    """Test sigma_l(S) = G_l S on genuine modular data"""
    result = rationality_test(rep)
    assert result.passed, [(c.name, c.detail) for c in result.checks if not c.passed]
    assert result.witness is None


def test_rationality_fails_on_corrupted_s():
    """Test that negating one entry of S is detected with a witness"""
    rep = corrupted_ising()
    result = rationality_test(rep)
    assert not result.passed
    assert result.witness in units(rep.level)
    assert not result.difference.is_zero()


@pytest.mark.parametrize("rep", [catalog.e7_rep(), catalog.ising_rep(0)])
def test_g_ell_conjugation(rep):
    """Test G_l T G_l^-1 = T^(l^2) for every unit l"""
    for l in units(rep.level):
        assert g_ell_conjugation_check(rep, l).passed


def test_g_ell_rejects_non_units():
    """Test that G_l needs l coprime to the level"""
    with pytest.raises(GaloisError):
        g_ell(catalog.e7_rep(), 2)


@pytest.mark.parametrize("rep", GENUINE)
def test_congruence(rep):
    """Test the congruence heuristic on genuine modular data"""
    assert congruence_heuristic(rep).passed


def test_congruence_fails():
    """Test that T exponents not closed under squares of units fail"""
    rep = ModularRep(5, Matrix([[1, 0], [0, 1]]), (Fraction(1), Cyclotomic.zeta(5, 1)))
    assert not congruence_heuristic(rep).passed


def test_nonnegativity_ising():
    """Test the positive eigenvector for the Ising S with a two-dimensional kernel"""
    checks = nonnegativity_test(catalog.ising_rep(0), component=0)
    assert [c.name for c in checks] == ["positive_eigenvector", "column_nonnegative[0]"]
    assert all(c.passed for c in checks)
    assert "kernel dimension 2" in checks[0].detail


def test_nonnegativity_e7():
    """Test the positive eigenvector (1, sqrt2 - 1) of the E7 S"""
    (check,) = nonnegativity_test(catalog.e7_rep())
    assert check.passed


def test_nonnegativity_failures():
    """Test S = -1 and a column with a negative entry"""
    (check,) = nonnegativity_test(catalog.one_dimensional_rep("kappa3"))
    assert not check.passed
    checks = nonnegativity_test(catalog.ising_rep(0), component=2)
    assert not checks[1].passed
    with pytest.raises(InputError):
        nonnegativity_test(catalog.ising_rep(0), component=3)


def test_reduce_su3():
    """Test folding SU(3) level one plus the trivial representation"""
    rep = direct_sum(catalog.su3_level_one(), catalog.trivial_rep())
    assert not rep.is_psl2()
    result = reduce_representation(rep)
    assert result.orbits == ((0,), (1, 2), (3,))
    s = sqrt3() / 3
    zero = Fraction(0)
    expected = Matrix([[s, s * 2, zero], [s, -s, zero], [zero, zero, Fraction(1)]])
    assert result.rep.S == expected
    assert result.rep.T == (Cyclotomic.zeta(12, -1), Cyclotomic.zeta(12, 3), Fraction(1))
    assert all(c.passed for c in result.checks)
    assert result.rep.is_psl2()


def test_reduce_rejects_non_permutation():
    """Test that S^2 must be a permutation"""
    rep = ModularRep(4, Matrix([[0, -1], [1, 0]]), (Fraction(1), Fraction(1)))
    with pytest.raises(ReductionError):
        reduce_representation(rep)


def test_contragredient_and_twist():
    """Test the dual representation and a trivial twist"""
    rep = catalog.e7_rep()
    dual = contragredient(rep)
    assert dual.T == (Cyclotomic.zeta(24, 7), Cyclotomic.zeta(24, 13))
    assert dual.S == rep.S
    assert twist(rep, Fraction(1), Fraction(1), 1) == rep


def test_field_validation():
    """Test that entries must lie in the declared field"""
    with pytest.raises(InputError):
        ModularRep(4, Matrix([[sqrt3()]]), (Fraction(1),))
    with pytest.raises(InputError):
        ModularRep.from_json({"S": [["1"]]})


@pytest.mark.parametrize("rep", [*GENUINE, catalog.su3_level_one()])
def test_sl2_relations_hold(rep):
    """Test (ST)^3 = S^2 and S^4 = 1 on genuine modular data"""
    assert sl2_relations_check(rep).passed


def test_sl2_relations_fail():
    """Test that a T breaking (ST)^3 = S^2 is reported and refused by the reduction"""
    rep = ModularRep(4, Matrix([[1]]), (Cyclotomic.zeta(4, 1),))
    check = sl2_relations_check(rep)
    assert not check.passed
    assert "(ST)^3" in check.detail
    assert not rep.is_sl2()
    with pytest.raises(ReductionError):
        reduce_representation(rep)


def test_nonnegativity_decides_irrational_signs():
    """Test exact signs of the sqrt 2 entries in the Ising S"""
    positive, column = nonnegativity_test(catalog.ising_rep(0), component=1)
    assert positive.passed
    assert not column.passed
    assert column.name == "column_nonnegative[1]"
