import numpy as np
import pytest
from hypothesis import given, settings

from oscsemigroup import matcore as mc
from oscsemigroup import sampling as smp
from oscsemigroup.errors import BranchCut, Singular, SingularShift
from oscsemigroup.symclass import classify_sp, classify_sym

from strategies import sym_pp, sym_pp_pair


@pytest.mark.parametrize("d", range(1, 7))
def test_theta_structure(d):
    th = mc.theta(d)
    n = 2 * d
    assert np.array_equal(th @ th, np.eye(n))
    assert np.array_equal(th.conj().T, th)
    assert np.array_equal(th.T, -th)
    assert mc.det(th) == pytest.approx((-1) ** d)


@pytest.mark.xfail(strict=True, reason="det θ = (-1)^d, so the unit value only holds for even d")
def test_det_theta_unit_in_odd_dimension():
    assert mc.det(mc.theta(1)) == pytest.approx(1.0)


def test_structures_are_read_only():
    with pytest.raises(ValueError):
        mc.omega(1)[0, 0] = 3.0


def test_cayley_examples():
    assert np.allclose(mc.cayley(np.zeros((2, 2))), np.eye(2))
    assert np.allclose(mc.cayley(np.diag([3.0, 3.0])), -0.5 * np.eye(2))


def test_cayley_singular_shift():
    with pytest.raises(SingularShift):
        mc.cayley(-np.eye(2))


@settings(max_examples=200)
@given(sym_pp())
def test_cayley_involution(A):
    M = A @ mc.theta(mc.half_dim(A))
    assert np.linalg.norm(mc.cayley(mc.cayley(M)) - M) <= mc.TAU_ID * np.linalg.norm(M)


@pytest.mark.parametrize(
    "M, S",
    [
        (np.eye(2), np.eye(2)),
        (np.diag([4.0, 9.0]), np.diag([2.0, 3.0])),
    ],
)
def test_principal_sqrt_examples(M, S):
    assert np.allclose(mc.principal_sqrt(M), S)


@given(sym_pp())
def test_sqrt_of_positive_product_lies_in_sp_p(A):
    th = mc.theta(mc.half_dim(A))
    R = mc.cayley(np.conj(A) @ th) @ mc.cayley(A @ th)
    S = mc.principal_sqrt(R)
    assert np.allclose(S @ S, R, atol=1e-9 * np.linalg.norm(R))
    assert np.all(mc.eigenvalues(S).real > 0)
    assert classify_sp(S).sp_p


def test_principal_sqrt_branch_cut():
    with pytest.raises(BranchCut):
        mc.principal_sqrt(np.diag([-1.0, 4.0]))


def test_matrix_power_examples():
    R = np.diag([4.0, 0.25])
    assert np.allclose(mc.matrix_power(R, 0.0), np.eye(2))
    assert np.allclose(mc.matrix_power(R, 0.5), np.diag([2.0, 0.5]))


@given(sym_pp())
def test_half_power_stays_in_sp_p(A):
    R = mc.cayley(A.real @ mc.theta(mc.half_dim(A)))
    # real accretive forms in Sym_p map into Sp_p only when σ(Aθ) ⊂ (-1, 1)
    if not classify_sym(A.real).sym_p_qnd:
        return
    assert classify_sp(mc.matrix_power(R, 0.5)).sp_p


def test_block2_inverse_zero_forms():
    th = mc.theta(1)
    X = mc.block2_inverse(np.zeros((2, 2)), -th, th, np.zeros((2, 2)))
    full = np.block([[np.zeros((2, 2)), -th], [th, np.zeros((2, 2))]])
    assert np.allclose(np.block([[X[0], X[1]], [X[2], X[3]]]), np.linalg.inv(full))


@given(sym_pp_pair(d=1))
def test_block2_inverse_lower_left(pair):
    A, B = pair
    th = mc.theta(1)
    X = mc.block2_inverse(th @ A @ th, -th, th, th @ B @ th)
    want = -np.linalg.solve(np.eye(2) + A @ th @ B @ th, th)
    assert np.allclose(X[2], want, atol=1e-10)


@given(sym_pp_pair())
def test_block2_inverse_matches_dense(pair):
    A, B = pair
    th = mc.theta(mc.half_dim(A))
    X = mc.block2_inverse(A, -th, th, B)
    full = np.block([[A, -th], [th, B]])
    assert mc.fro_rel(np.block([[X[0], X[1]], [X[2], X[3]]]), np.linalg.inv(full)) <= mc.TAU_ID


def test_block2_inverse_singular():
    th = mc.theta(1)
    with pytest.raises(Singular):
        mc.block2_inverse(1j * np.eye(2), -th, th, 1j * np.eye(2))


def test_det_theta_and_eigenvalues():
    assert abs(mc.det(mc.theta(1))) == pytest.approx(1.0)
    lam = 0.7
    assert np.allclose(np.sort(mc.eigenvalues(lam * mc.theta(1)).real), [-lam, lam])


@given(sym_pp(d=1))
def test_inverse_of_accretive_is_accretive(A):
    assert classify_sym(mc.inverse(A)).pos_strict


@given(sym_pp())
def test_sqrt_det_is_continuous_branch(A):
    # along the segment from Re A to A the value never crosses the cut
    s = mc.sqrt_det(A)
    assert s * s == pytest.approx(mc.det(A), rel=1e-10)
    path = [mc.sqrt_det(A.real + t * 1j * A.imag) for t in np.linspace(0, 1, 33)]
    steps = np.abs(np.diff(path)) / np.abs(path[:-1])
    assert np.max(steps) < 0.5


def test_as_sym_symmetrizes():
    M = np.array([[1.0, 2.0], [0.0, 1.0]])
    assert np.array_equal(mc.as_sym(M), [[1.0, 1.0], [1.0, 1.0]])


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        mc.as_matrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        mc.as_matrix([[np.nan, 0], [0, 1]])
