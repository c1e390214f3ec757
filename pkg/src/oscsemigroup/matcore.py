"""Complex matrix kernel.

Symplectic structures ω and θ = -iω, the Cayley transform, principal
square roots and real powers, determinants with tracked phase, and the
2×2 block inverse.

Matrices are plain ``numpy`` arrays. Symmetric forms are produced by
:func:`as_sym`, which symmetrizes rather than rejects.
"""

from functools import lru_cache

import numpy as np
import scipy.linalg as sla

from .errors import BranchCut, Singular, SingularShift

TAU_ID = 1e-10
TAU_SING = 1e-12
TAU_BRANCH = 1e-12
KAPPA_MAX = 1e12
EIGVEC_COND_MAX = 1e6


@lru_cache(maxsize=None)
def _omega(d):
    w = np.zeros((2 * d, 2 * d))
    w[:d, d:] = np.eye(d)
    w[d:, :d] = -np.eye(d)
    w.setflags(write=False)
    return w


@lru_cache(maxsize=None)
def _theta(d):
    t = -1j * _omega(d)
    t.setflags(write=False)
    return t


def omega(d):
    """Standard symplectic form [[0, I], [-I, 0]] on R^{2d} (read-only)."""
    return _omega(int(d))


def theta(d):
    """The Hermitian involution θ = -iω (read-only)."""
    return _theta(int(d))


def as_matrix(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def as_sym(M):
    """Return the complex symmetric part (M + Mᵀ)/2 of a 2d×2d matrix."""
    M = as_matrix(M)
    if M.shape[0] % 2:
        raise ValueError("symmetric forms must have even size 2d")
    return 0.5 * (M + M.T)


def half_dim(M):
    n = np.shape(M)[0]
    if n % 2:
        raise ValueError("expected even dimension")
    return n // 2


def eye_like(M):
    return np.eye(np.shape(M)[0], dtype=complex)


def eigenvalues(M):
    """Eigenvalues, unordered, with multiplicity."""
    return np.linalg.eigvals(as_matrix(M))


def condition_estimate(M):
    M = as_matrix(M)
    with np.errstate(all="ignore"):
        c = np.linalg.cond(M)
    return float(c) if np.isfinite(c) else np.inf


def inverse(M):
    M = as_matrix(M)
    if condition_estimate(M) > KAPPA_MAX:
        raise Singular("matrix is numerically singular")
    return np.linalg.inv(M)


def logdet(M):
    """Complex log-determinant Σ log λ_i with principal logs per eigenvalue.

    The imaginary part is the accumulated argument, not reduced to (-π, π].
    """
    T = sla.schur(as_matrix(M), output="complex")[0]
    diag = np.diag(T)
    if np.any(diag == 0):
        return complex(-np.inf)
    return complex(np.sum(np.log(diag)))


def det(M):
    return np.linalg.det(as_matrix(M))


def sqrt_det(M):
    """Product of principal square roots of the eigenvalues of M.

    For matrices whose numerical range lies in the closed right half-plane
    (for example complex symmetric M with Re M ≥ 0) this is the branch of
    √det M obtained by continuity from positive definite real matrices,
    which is what Gaussian integrals produce.
    """
    return complex(np.exp(0.5 * logdet(M)))


def branch_distance(lam):
    """Distance of each eigenvalue to the closed half-line (-∞, 0]."""
    lam = np.asarray(lam)
    return np.where(lam.real <= 0, np.abs(lam.imag), np.abs(lam))


def _check_branch(M, tol):
    lam = eigenvalues(M)
    dist = branch_distance(lam)
    if dist.size and dist.min() <= tol:
        raise BranchCut(f"eigenvalue within {dist.min():.3g} of (-inf, 0]")
    return lam


def _eig_fast(M, f):
    lam, V = np.linalg.eig(M)
    with np.errstate(all="ignore"):
        k = np.linalg.cond(V)
    if not np.isfinite(k) or k >= EIGVEC_COND_MAX:
        return None
    return (V * f(lam)) @ np.linalg.inv(V)


def _sqrtm_triangular(T):
    n = T.shape[0]
    U = np.zeros_like(T)
    for i in range(n):
        U[i, i] = np.sqrt(T[i, i])
    for j in range(1, n):
        for i in range(j - 1, -1, -1):
            s = T[i, j] - U[i, i + 1:j] @ U[i + 1:j, j]
            U[i, j] = s / (U[i, i] + U[j, j])
    return U


def principal_sqrt(M, tol=TAU_BRANCH):
    """Principal square root: S @ S = M with spectrum in the open right half-plane."""
    M = as_matrix(M)
    _check_branch(M, tol)
    S = _eig_fast(M, np.sqrt)
    if S is None:
        T, Z = sla.schur(M, output="complex")
        S = Z @ _sqrtm_triangular(T) @ Z.conj().T
    return S


def matrix_power(R, t, tol=TAU_BRANCH):
    """R**t for real t, principal branch; R must avoid (-∞, 0]."""
    R = as_matrix(R)
    t = float(t)
    _check_branch(R, tol)
    if t == 0.0:
        return eye_like(R)
    if t == 1.0:
        return R.copy()
    P = _eig_fast(R, lambda lam: np.exp(t * np.log(lam)))
    if P is None:
        P = np.asarray(sla.fractional_matrix_power(R, t), dtype=complex)
    return P


def expm(M):
    return sla.expm(np.asarray(M, dtype=complex))


def cayley(M, tol=TAU_SING):
    """Cayley transform c(M) = (1 - M)(1 + M)^{-1}; an involution on its domain."""
    M = as_matrix(M)
    one = eye_like(M)
    lam = eigenvalues(M)
    if lam.size and np.min(np.abs(lam + 1)) <= tol:
        raise SingularShift("1 + M is singular")
    if condition_estimate(one + M) > KAPPA_MAX:
        raise SingularShift("1 + M is numerically singular")
    # (1 - M) and (1 + M)^{-1} commute
    return np.linalg.solve(one + M, one - M)


def block2_inverse(P, Q, R, S):
    """Inverse of the block matrix [[P, Q], [R, S]], returned as four quadrants."""
    P, Q, R, S = (np.asarray(X, dtype=complex) for X in (P, Q, R, S))
    n = P.shape[0]
    full = np.block([[P, Q], [R, S]])
    if condition_estimate(full) > KAPPA_MAX:
        raise Singular("block matrix is numerically singular")
    kP = condition_estimate(P)
    kS = condition_estimate(S)
    if min(kP, kS) < 1e8:
        if kP <= kS:
            Pi = np.linalg.inv(P)
            Sc = np.linalg.inv(S - R @ Pi @ Q)
            X12 = -Pi @ Q @ Sc
            X21 = -Sc @ R @ Pi
            X11 = Pi - X12 @ R @ Pi
            return X11, X12, X21, Sc
        Si = np.linalg.inv(S)
        Pc = np.linalg.inv(P - Q @ Si @ R)
        X12 = -Pc @ Q @ Si
        X21 = -Si @ R @ Pc
        X22 = Si - X21 @ Q @ Si
        return Pc, X12, X21, X22
    X = np.linalg.inv(full)
    return X[:n, :n], X[:n, n:], X[n:, :n], X[n:, n:]


def fro_rel(X, Y):
    """Relative Frobenius distance ‖X - Y‖ / max(1, ‖Y‖)."""
    return float(np.linalg.norm(np.asarray(X) - np.asarray(Y)) / max(1.0, np.linalg.norm(Y)))
