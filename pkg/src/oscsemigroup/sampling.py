"""Random test matrices with controlled spectra."""

import numpy as np

from . import matcore as mc


def rng_of(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_real_pos(rng, d, lo=0.3, hi=2.5):
    """Real symmetric 2d×2d with eigenvalues in [lo, hi]."""
    rng = rng_of(rng)
    Q = random_orthogonal(rng, 2 * d)
    return (Q * rng.uniform(lo, hi, 2 * d)) @ Q.T


def random_real_sym(rng, n, scale=1.0):
    rng = rng_of(rng)
    X = rng.standard_normal((n, n))
    return scale * 0.5 * (X + X.T)


def random_sym_pp(rng, d, lo=0.3, hi=2.5, imag=0.5):
    """Complex symmetric with Re A having eigenvalues in [lo, hi] and ‖Im A‖₂ ≤ imag."""
    rng = rng_of(rng)
    B = random_real_sym(rng, 2 * d)
    nB = np.linalg.norm(B, 2)
    return random_real_pos(rng, d, lo, hi) + 1j * imag * B / max(nB, 1e-300)


def random_symplectic(rng, d, scale=0.4):
    """Real symplectic matrix exp(θ-free generator ωS) with S symmetric."""
    rng = rng_of(rng)
    S = random_real_sym(rng, 2 * d, scale)
    return mc.expm(mc.omega(d) @ S).real


def williamson_form(rng, lams, scale=0.4):
    """Sᵀ diag(λ, λ) S with a random real symplectic S; Williamson values are ``lams``."""
    rng = rng_of(rng)
    lams = np.asarray(lams, dtype=float)
    d = lams.size
    S = random_symplectic(rng, d, scale)
    return S.T @ np.diag(np.concatenate([lams, lams])) @ S


def isotropic(lam, d=1):
    return lam * np.eye(2 * d)
