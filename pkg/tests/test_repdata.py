from fractions import Fraction

import pytest

from vvmf import catalog
from vvmf.errors import DimensionMismatchError, InputError, LambdaResonanceError
from vvmf.exactnum import Matrix
from vvmf.repdata import (
    RepData,
    Signature,
    characteristic_from_A,
    derive_AB,
    direct_sum,
    dual,
    galois_conjugate,
    monodromy_equation_check,
    permute,
    riemann_roch_trace,
    trace_audit,
    validate,
)

ONE_DIMENSIONAL = sorted(catalog.ONE_DIMENSIONAL)


def test_e7_signature():
    """Test the spectral condition and signature of the E7 data"""
    result = validate(catalog.e7())
    assert result.passed
    assert result.signature == Signature(2, 1, 1, 0)
    assert result.signature.trace_lambda() == Fraction(7, 6)
    assert result.signature.trace_X() == -244


def test_a1_signature():
    """Test that A1 shares the E7 signature"""
    result = validate(catalog.a1())
    assert result.passed
    assert result.signature == Signature(2, 1, 1, 0)


def test_e7_residue_matrices():
    """Test A is idempotent and B has eigenvalues in {0, 1, 2}"""
    A, B = derive_AB(catalog.e7())
    one = Matrix.identity(2)
    assert A * A == A
    assert (B * (B - one) * (B - one * 2)).is_zero()
    assert A.trace() == 1


@pytest.mark.parametrize("name", ONE_DIMENSIONAL)
def test_one_dimensional_rows(name):
    """Test spectral, monodromy and trace audits on the one-dimensional rows"""
    data = catalog.one_dimensional(name)
    rep = catalog.one_dimensional_rep(name)
    assert validate(data).passed
    assert monodromy_equation_check(data).passed
    checks = trace_audit(data, rep.S, rep.T_matrix)
    assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]


@pytest.mark.parametrize("data,rep", [(catalog.e7(), catalog.e7_rep()), (catalog.a1(), catalog.a1_rep())])
def test_level_one_pairs(data, rep):
    """Test the full audit on the E7 and A1 data"""
    assert monodromy_equation_check(data).passed
    checks = trace_audit(data, rep.S, rep.T_matrix)
    names = {c.name for c in checks}
    assert {"trace_X", "trace_lambda", "trace_X_mod_248", "trace_S", "trace_U", "riemann_roch", "S_U_equals_T_inverse"} <= names
    assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]


@pytest.mark.parametrize("k", range(12))
def test_ising_family(k):
    """Test the audits on every Ising family member"""
    data = catalog.ising(k)
    rep = catalog.ising_rep(k)
    result = validate(data)
    assert result.passed
    assert result.signature.trace_X() == 252
    assert monodromy_equation_check(data).passed
    checks = trace_audit(data, rep.S, rep.T_matrix)
    assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]


def test_spectral_failure():
    """Test that arbitrary data fails the spectral condition"""
    data = RepData((Fraction(1, 2),), Matrix([[1]]))
    result = validate(data)
    assert not result.passed
    assert result.signature is None
    assert not monodromy_equation_check(data).passed


def test_block_audit():
    """Test trace audits applied per indecomposable block"""
    data = catalog.e7()
    kappa = catalog.one_dimensional("kappa2")
    total = direct_sum(data, kappa)
    checks = trace_audit(total, blocks=[2, 1])
    assert any(c.name == "trace_X[1]" for c in checks)
    assert all(c.passed for c in checks)
    with pytest.raises(InputError):
        trace_audit(total, blocks=[2, 2])


def test_riemann_roch_trivial():
    """Test the Riemann-Roch trace for the trivial representation"""
    assert riemann_roch_trace(1, Fraction(1), Fraction(1)) == 1


def test_dual_of_kappa_is_trivial():
    """Test that the dual of the kappa row is the trivial row"""
    assert dual(catalog.one_dimensional("kappa")) == catalog.one_dimensional("trivial")


def test_double_dual():
    """Test that dualizing twice is the identity"""
    for data in (catalog.e7(), catalog.a1(), catalog.ising(3)):
        assert dual(dual(data)) == data


def test_dual_signature():
    """Test that duals of valid data are valid"""
    assert validate(dual(catalog.e7())).passed


def test_characteristic_from_A():
    """Test recovering X from Lambda and A"""
    data = catalog.e7()
    A, _ = derive_AB(data)
    assert characteristic_from_A(data.lam, A) == data


def test_characteristic_from_A_resonance():
    """Test that 1 + lam_xi - lam_eta = 0 is refused"""
    with pytest.raises(LambdaResonanceError):
        characteristic_from_A((Fraction(0), Fraction(1)), Matrix.zeros(2))


def test_permute():
    """Test that permuted data stays valid"""
    data = catalog.ising(0)
    moved = permute(data, [2, 0, 1])
    assert moved.lam == (data.lam[1], data.lam[2], data.lam[0])
    assert moved.X[0, 1] == data.X[1, 2]
    assert validate(moved).signature == validate(data).signature
    with pytest.raises(InputError):
        permute(data, [0, 0, 1])


def test_galois_conjugate_rational():
    """Test that sigma_l fixes rational data"""
    data = catalog.a1()
    assert galois_conjugate(data, 5) == data


def test_json_round_trip():
    """Test RepData JSON encoding"""
    data = catalog.e7()
    doc = data.to_json()
    assert doc["lambda"] == ["17/24", "11/24"]
    assert RepData.from_json(doc) == data


def test_shape_mismatch():
    """Test that X must match Lambda"""
    with pytest.raises(DimensionMismatchError):
        RepData((Fraction(1),), Matrix.zeros(2))
    with pytest.raises(InputError):
        RepData.from_json({"lambda": ["1"]})


def test_catalog_lookup():
    """Test catalog entries by name"""
    assert catalog.lookup("e7") == catalog.e7()
    assert catalog.lookup("ising3") == catalog.ising(3)
    assert catalog.lookup_rep("kappa2") == catalog.one_dimensional_rep("kappa2")
    with pytest.raises(InputError):
        catalog.lookup("isingx")
    with pytest.raises(InputError):
        catalog.lookup_rep("e8")


def test_kappa_sum_signature():
    """Test the signature of the kappa2 plus kappa4 data"""
    data = direct_sum(catalog.one_dimensional("kappa2"), catalog.one_dimensional("kappa4"))
    result = validate(data)
    assert result.passed
    assert result.signature == Signature(2, 0, 1, 1)


def test_direct_sum_spectral_condition():
    """Test that the spectral condition and signature add over direct sums"""
    e7, a1 = validate(catalog.e7()).signature, validate(catalog.a1()).signature
    result = validate(direct_sum(catalog.e7(), catalog.a1()))
    assert result.passed
    assert result.signature == Signature(4, e7.alpha + a1.alpha, e7.beta1 + a1.beta1, e7.beta2 + a1.beta2)


def test_dual_commutes_with_direct_sum():
    """Test dual(r1 + r2) = dual(r1) + dual(r2)"""
    first, second = catalog.e7(), catalog.one_dimensional("kappa")
    assert dual(direct_sum(first, second)) == direct_sum(dual(first), dual(second))


def test_perturbed_x_fails_monodromy():
    """Test that changing one entry of the E7 X by one breaks the monodromy equation"""
    rows = [list(row) for row in catalog.e7().X.rows]
    rows[0][0] += 1
    data = RepData(catalog.e7().lam, Matrix(rows))
    check = monodromy_equation_check(data)
    assert not check.passed
    assert not validate(data).passed
