"""Cayley dictionary between symmetric forms and complex symplectic matrices.

A ↦ c(Aθ) maps quantum non-degenerate forms onto Sp^reg, carries ⋄ to the
matrix product, and sends the real, accretive and positive families to
Sp_h, Sp₊₊ and Sp_p respectively.
"""

import numpy as np

from . import matcore as mc
from .errors import NotInSpPlusPlus, QuantumDegenerate, SingularShift
from .symclass import DEFAULT_TOL, classify_sp, classify_sym


def to_symplectic(A, tol=DEFAULT_TOL):
    """R = c(Aθ)."""
    A = mc.as_sym(A)
    rep = classify_sym(A, tol)
    if not rep.qnd:
        raise QuantumDegenerate("det(1 + Aθ) vanishes")
    try:
        return mc.cayley(A @ mc.theta(mc.half_dim(A)))
    except SingularShift as exc:
        raise QuantumDegenerate(str(exc)) from exc


def from_symplectic(R):
    """A = c(R)θ, symmetrized; raises SingularShift when 1 + R is singular."""
    R = mc.as_matrix(R)
    return mc.as_sym(mc.cayley(R) @ mc.theta(mc.half_dim(R)))


def normalized_to_sp(NG):
    """Image of ±√det(1 + Aθ) Op(e^{-A}) in Sp(C^{2d}); independent of the sign."""
    return mc.cayley(NG.form @ mc.theta(mc.half_dim(NG.form)))


def sp_polar(R, tol=DEFAULT_TOL, return_witness=False):
    """R = T·S with T real symplectic and S = √(R̄^{-1} R) ∈ Sp_p.

    The classification of R̄^{-1}R is returned as witness data when asked,
    rather than repaired.
    """
    R = mc.as_matrix(R)
    rep = classify_sp(R, tol)
    if not rep.sp_pp:
        raise NotInSpPlusPlus(
            f"min eig of θ - R*θR is {rep.witnesses['min_eig_theta_gap']:.3g}"
        )
    Q = np.linalg.solve(np.conj(R), R)
    qrep = classify_sp(Q, tol)
    S = mc.principal_sqrt(Q)
    T = np.conj(R) @ S
    if return_witness:
        return T, S, qrep
    return T, S
