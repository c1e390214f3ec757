"""Tolerance-aware membership tests for the matrix families.

Strict inequalities require a margin larger than ``tol``; weak ones allow
``-tol``. Each test returns a :class:`ClassificationReport` holding the
boolean flags together with the witnesses they were decided from.

Flag names
----------
Forms (``classify_sym``):
    real, pos_weak (Sym₊), pos_strict (Sym₊₊), qnd, sym_pp_real,
    sym_p, sym_p_qnd, sym_p_weak, sym_pp_qnd
Group elements (``classify_sp``):
    sp, reg, sp_plus (Sp₊), sp_pp (Sp₊₊), sp_h, sp_p
Lie algebra (``classify_sp_alg``):
    sp, sp_plus, sp_pp, sp_h, sp_p
"""

from dataclasses import dataclass, field

import numpy as np

from . import matcore as mc

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class ClassificationReport:
    flags: dict
    witnesses: dict = field(default_factory=dict)
    tol: float = DEFAULT_TOL

    def __getattr__(self, name):
        flags = self.__dict__.get("flags", {})
        if name in flags:
            return flags[name]
        raise AttributeError(name)

    def to_dict(self):
        return {
            "flags": {k: bool(v) for k, v in self.flags.items()},
            "witnesses": {k: float(v) for k, v in self.witnesses.items()},
            "tol": self.tol,
        }


def _herm_min(M):
    H = 0.5 * (M + M.conj().T)
    return float(np.linalg.eigvalsh(H)[0])


def qnd_scale(A):
    d = mc.half_dim(A)
    return max(1.0, float(np.linalg.norm(A)) ** (2 * d))


def spectrum_A_theta(A):
    A = np.asarray(A, dtype=complex)
    return mc.eigenvalues(A @ mc.theta(mc.half_dim(A)))


def classify_sym(A, tol=DEFAULT_TOL):
    A = mc.as_sym(A)
    d = mc.half_dim(A)
    one = np.eye(2 * d)
    th = mc.theta(d)

    max_imag = float(np.max(np.abs(A.imag))) if A.size else 0.0
    lam_re = float(np.linalg.eigvalsh(A.real)[0])
    det_shift = abs(mc.det(one + A @ th))
    scale = qnd_scale(A)
    sig = mc.eigenvalues(A @ th)
    # deviation of σ(Aθ) from the real axis and its largest modulus on it
    sig_imag = float(np.max(np.abs(sig.imag)))
    sig_absmax = float(np.max(np.abs(sig.real)))
    sig_scale = max(1.0, float(np.max(np.abs(sig))))

    real = max_imag <= tol
    pos_weak = lam_re >= -tol
    pos_strict = lam_re > tol
    qnd = det_shift > tol * scale
    sig_real = sig_imag <= 1e3 * tol * sig_scale
    in_closed = sig_real and sig_absmax <= 1 + tol
    in_open = sig_real and sig_absmax < 1 - tol

    flags = {
        "real": real,
        "pos_weak": pos_weak,
        "pos_strict": pos_strict,
        "sym_plus": pos_weak,
        "sym_pp": pos_strict,
        "qnd": qnd,
        "sym_pp_qnd": pos_strict and qnd,
        "sym_pp_real": real and pos_strict,
        "sym_p": real and pos_strict and in_closed,
        "sym_p_qnd": real and pos_strict and in_open,
        "sym_p_weak": real and pos_weak and in_closed,
    }
    witnesses = {
        "max_imag_entry": max_imag,
        "min_eig_real_part": lam_re,
        "abs_det_1_plus_A_theta": det_shift,
        "qnd_scale": scale,
        "max_abs_sigma_A_theta": sig_absmax,
        "max_imag_sigma_A_theta": sig_imag,
        # signed distance of σ(Aθ) to the spectral boundary {±1}
        "spectral_margin": 1.0 - sig_absmax,
    }
    return ClassificationReport(flags, witnesses, tol)


def classify_sp(R, tol=DEFAULT_TOL):
    R = mc.as_matrix(R)
    d = mc.half_dim(R)
    w = mc.omega(d)
    th = mc.theta(d)
    one = np.eye(2 * d)
    nR = max(1.0, float(np.linalg.norm(R)))
    scale = nR * nR

    sympl_res = float(np.linalg.norm(R.T @ w @ R - w)) / scale
    lam_R = mc.eigenvalues(R)
    reg_dist = float(np.min(np.abs(lam_R + 1)))
    reg_cond = mc.condition_estimate(one + R)
    gap = _herm_min(th - R.conj().T @ th @ R)
    gap_rel = gap / scale
    try:
        Rinv = np.linalg.inv(R)
        h_res = float(np.linalg.norm(R.conj() - Rinv)) / max(nR, float(np.linalg.norm(Rinv)))
    except np.linalg.LinAlgError:
        h_res = np.inf
    branch = float(np.min(mc.branch_distance(lam_R)))
    pos_spec = bool(np.all(np.abs(lam_R.imag) <= 1e3 * tol * nR) and np.all(lam_R.real > tol))

    sp = sympl_res <= tol * 1e2
    sp_h = sp and h_res <= tol * 1e2
    flags = {
        "sp": sp,
        "reg": reg_dist > tol and reg_cond < mc.KAPPA_MAX,
        "sp_plus": sp and gap_rel >= -tol,
        "sp_pp": sp and gap_rel > tol,
        "sp_h": sp_h,
        "sp_p": sp_h and pos_spec,
    }
    witnesses = {
        "symplectic_residual": sympl_res,
        "min_eig_theta_gap": gap,
        "min_eig_theta_gap_rel": gap_rel,
        "conj_inverse_residual": h_res,
        "branch_distance": branch,
        "dist_minus_one": reg_dist,
    }
    return ClassificationReport(flags, witnesses, tol)


def classify_sp_alg(D, tol=DEFAULT_TOL):
    D = mc.as_matrix(D)
    d = mc.half_dim(D)
    w = mc.omega(d)
    th = mc.theta(d)
    nD = max(1.0, float(np.linalg.norm(D)))

    alg_res = float(np.linalg.norm(D.T @ w + w @ D)) / nD
    acc = _herm_min(D.conj().T @ th + th @ D)
    h_res = float(np.linalg.norm(D.conj() + D)) / nD
    thD = th @ D
    herm_dev = float(np.linalg.norm(thD - thD.conj().T)) / nD
    thD_min = _herm_min(thD)

    sp = alg_res <= tol * 1e2
    sp_h = sp and h_res <= tol * 1e2
    flags = {
        "sp": sp,
        "sp_plus": sp and acc >= -tol * nD,
        "sp_pp": sp and acc > tol * nD,
        "sp_h": sp_h,
        "sp_p": sp_h and herm_dev <= tol * 1e2 and thD_min > tol * nD,
    }
    witnesses = {
        "algebra_residual": alg_res,
        "min_eig_accretive": acc,
        "conj_residual": h_res,
        "min_eig_theta_D": thD_min,
    }
    return ClassificationReport(flags, witnesses, tol)
