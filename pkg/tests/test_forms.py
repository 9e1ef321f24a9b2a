from fractions import Fraction

import pytest

from vvmf import catalog
from vvmf.errors import InputError
from vvmf.forms import (
    dim_forms,
    exponents_from_rep,
    form_basis,
    form_space,
    induce_rep,
    trace_integer_part_checks,
)


def classical_dimensions(k: int) -> tuple[int, int]:
    """dim M_k(SL2(Z)) and dim S_k(SL2(Z)) from the textbook formula"""
    if k % 2 or k < 0:
        return 0, 0
    modular = k // 12 + (0 if k % 12 == 2 else 1)
    cusp = max(0, modular - 1) if k >= 4 else 0
    return modular, cusp


@pytest.mark.parametrize("k", range(49))
def test_scalar_dimensions(k):
    """Test dimensions for the trivial representation against the classical formula"""
    space = form_space(catalog.trivial_rep(), k)
    assert (space.dim_modular, space.dim_cusp) == classical_dimensions(k)
    assert space.is_representation == (k % 2 == 0)


def test_induced_representation():
    """Test the twist by eta**(-2k)"""
    induced = induce_rep(catalog.trivial_rep(), 4)
    assert induced.exponents() == (Fraction(2, 3),)
    assert induced.S[0, 0] == 1
    assert induce_rep(catalog.trivial_rep(), 2).S[0, 0] == -1
    assert induce_rep(catalog.trivial_rep(), 12).exponents() == (Fraction(0),)


def test_exponents_from_rep():
    """Test that the lifted exponents reproduce the E7 data"""
    assert exponents_from_rep(catalog.e7_rep()) == catalog.e7().lam
    assert exponents_from_rep(catalog.trivial_rep()) == (Fraction(1),)


@pytest.mark.parametrize("rep", [catalog.trivial_rep(), catalog.e7_rep(), catalog.a1_rep()])
def test_trace_integer_parts(rep):
    """Test the integer part trace identities"""
    checks = trace_integer_part_checks(rep)
    assert all(c.passed for c in checks), [(c.name, c.lhs, c.rhs) for c in checks]


def test_dim_forms():
    """Test the dimension formula on explicit exponents"""
    assert dim_forms([Fraction(1)], 12) == (2, 1)
    assert dim_forms([Fraction(17, 24), Fraction(11, 24)], 0) == (0, 0)


def test_half_integer_weight_only():
    """Test that weights outside (1/2)Z are refused"""
    with pytest.raises(InputError):
        form_space(catalog.trivial_rep(), Fraction(1, 3))


def test_weight_twelve_basis():
    """Test that the weight 12 forms are Delta and Delta J"""
    basis = form_basis(catalog.one_dimensional("trivial"), 12, 6, catalog.trivial_rep())
    assert basis.dimension == 2
    assert basis.labels == ((0, 1), (0, 2))
    cusp, other = basis.forms[0][0], basis.forms[1][0]
    assert [cusp.coefficient(n) for n in range(1, 4)] == [1, -24, 252]
    assert other.coefficient(0) == 1
    assert other.coefficient(1) == -24
    assert all(c.passed for c in basis.checks)


def test_weight_four_basis():
    """Test that eta**8 E4 / Delta**(1/3) is E4"""
    basis = form_basis(catalog.one_dimensional("kappa2"), 4, 6, catalog.trivial_rep())
    (form,) = basis.forms
    assert [form[0].coefficient(n) for n in range(3)] == [1, 240, 2160]
    assert all(c.passed for c in basis.checks)


def test_weight_fourteen_basis():
    """Test that eta**28 times the kappa solution is E14"""
    basis = form_basis(catalog.one_dimensional("kappa"), 14, 4)
    (form,) = basis.forms
    assert [form[0].coefficient(n) for n in range(3)] == [1, -24, -196632]


def test_empty_basis():
    """Test weight 2 has no forms"""
    basis = form_basis(catalog.one_dimensional("kappa"), 2, 4)
    assert basis.forms == ()
    assert basis.dimension == 0
    assert all(c.passed for c in basis.checks)


def test_inconsistent_rep():
    """Test that Lambda must lift the induced T exponents"""
    with pytest.raises(InputError):
        form_basis(catalog.one_dimensional("kappa2"), 6, 4, catalog.trivial_rep())


def test_form_space_json():
    """Test the serialized dimension report"""
    doc = form_space(catalog.trivial_rep(), 24).to_json()
    assert doc["dim_M"] == 3
    assert doc["dim_S"] == 2
    assert doc["is_representation"] is True


@pytest.mark.parametrize("k", [4, 6, 8, 10, 12, 14])
def test_weight_rows(k):
    """Test that the row carrying eta**(-2k) gives a consistent basis for the trivial representation"""
    basis = form_basis(catalog.one_dimensional(catalog.row_for_weight(k)), k, 4, catalog.trivial_rep())
    assert basis.dimension == classical_dimensions(k)[0]
    assert all(c.passed for c in basis.checks)
    with pytest.raises(InputError):
        catalog.row_for_weight(3)
