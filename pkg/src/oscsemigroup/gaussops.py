"""Operators a·Op(e^{-A}) as values.

Conventions: ħ = 1, phase-space point y = (x, p) ∈ R^{2d}, the symbol
e^{-A}(y) = exp(-yᵀ A y), and the Weyl quantization

    Op(a)(x, x') = (2π)^{-d} ∫ a((x + x')/2, p) e^{-i p (x - x')} dp.

This orientation is the one under which Op(e^{-A}) Op(e^{-B}) is a multiple
of Op(e^{-A⋄B}) with θ = -iω; the opposite sign of the phase would reverse
the order of the ⋄-product.

Every square root of a determinant that arises from a Gaussian integral is
taken on the branch fixed by continuity from real positive definite
matrices (:func:`matcore.sqrt_det`). This removes the ± ambiguity of the
product formula instead of guessing it.
"""

import cmath
from dataclasses import dataclass, field

import numpy as np

from . import matcore as mc
from .diamond import diamond, diamond_defined
from .errors import (
    DegenerateF,
    DegenerateForm,
    NotComposable,
    PolarUndefined,
    QuantumDegenerate,
)
from .symclass import DEFAULT_TOL, classify_sym, qnd_scale

SIGN_ARG_BAND = 0.1


@dataclass(frozen=True, eq=False)
class GaussianOp:
    """The operator ``scale · Op(exp(-yᵀ form y))``."""

    scale: complex
    form: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "scale", complex(self.scale))
        F = mc.as_sym(self.form)
        F.setflags(write=False)
        object.__setattr__(self, "form", F)

    @property
    def d(self):
        return self.form.shape[0] // 2

    def __mul__(self, other):
        if isinstance(other, GaussianOp):
            return compose(self, other)[0]
        return GaussianOp(self.scale * other, self.form)

    __rmul__ = lambda self, c: GaussianOp(self.scale * c, self.form)  # noqa: E731

    def __matmul__(self, other):
        return compose(self, other)[0]

    def allclose(self, other, rtol=1e-9, atol=1e-12):
        return bool(
            np.allclose(self.form, other.form, rtol=rtol, atol=atol)
            and abs(self.scale - other.scale) <= atol + rtol * abs(other.scale)
        )

    def __repr__(self):
        return f"GaussianOp(scale={self.scale!r}, form={np.array2string(self.form, precision=6)})"


def identity_op(d):
    """The identity as the limit form A = 0 with unit scale (not trace class)."""
    return GaussianOp(1.0, np.zeros((2 * d, 2 * d)))


@dataclass(frozen=True, eq=False)
class NormalizedGaussian:
    """ε·√det(1 + Aθ)·Op(e^{-A}) with the principal square root."""

    form: np.ndarray
    sign: int = 1

    def __post_init__(self):
        F = mc.as_sym(self.form)
        F.setflags(write=False)
        object.__setattr__(self, "form", F)
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        rep = classify_sym(F)
        if not (rep.pos_strict and rep.qnd):
            raise QuantumDegenerate("normalized elements need Re A > 0 and det(1 + Aθ) != 0")

    def to_op(self):
        return GaussianOp(self.sign * principal_sqrt_det_shift(self.form), self.form)


@dataclass(frozen=True, eq=False)
class KernelGaussian:
    """Schrödinger kernel K(x, x') = prefactor · exp(-vᵀ C v), v = (x, x')."""

    prefactor: complex
    quad: np.ndarray
    branch_flag: bool = False

    @property
    def d(self):
        return self.quad.shape[0] // 2

    @property
    def quad_xx(self):
        return self.quad[: self.d, : self.d]

    @property
    def quad_xy(self):
        return self.quad[: self.d, self.d:]

    @property
    def quad_yy(self):
        return self.quad[self.d:, self.d:]

    def __call__(self, x, y):
        """Evaluate on arrays of points with trailing axis of length d."""
        v = np.concatenate([np.asarray(x, dtype=float), np.asarray(y, dtype=float)], axis=-1)
        q = np.einsum("...i,ij,...j->...", v, self.quad, v)
        return self.prefactor * np.exp(-q)


@dataclass(frozen=True)
class WilliamsonSpectrum:
    lambdas: tuple = field(default_factory=tuple)


def _blocks(A):
    d = mc.half_dim(A)
    return A[:d, :d], A[:d, d:], A[d:, d:]


def shift_det(A):
    """det(1 + Aθ)."""
    A = mc.as_sym(A)
    d = mc.half_dim(A)
    return complex(mc.det(np.eye(2 * d) + A @ mc.theta(d)))


def principal_sqrt_det_shift(A):
    return cmath.sqrt(shift_det(A))


def _require_qnd(A, tol):
    w = abs(shift_det(A))
    if w <= tol * qnd_scale(A):
        raise QuantumDegenerate(f"|det(1 + Aθ)| = {w:.3g}")


def product_matrix(A, B):
    """[[A, -θ], [θ, B]], whose determinant is det(1 + AθBθ)."""
    d = mc.half_dim(A)
    th = mc.theta(d)
    return np.block([[A, -th], [th, B]])


# ---------------------------------------------------------------- kernels


def gaussian_kernel(G, tol=DEFAULT_TOL):
    """Schrödinger-representation kernel of ``G``."""
    A = G.form
    d = G.d
    B, D, F = _blocks(A)
    if abs(mc.det(F)) <= tol * max(1.0, float(np.linalg.norm(F))) ** d or \
            mc.condition_estimate(F) > mc.KAPPA_MAX:
        raise DegenerateF("momentum block of the form is singular")
    Fi = np.linalg.inv(F)
    S = B - D @ Fi @ D.T
    # quadratic form in (u, z) = ((x + x')/2, x - x')
    Q = np.block([[S, -0.5j * D @ Fi], [-0.5j * Fi @ D.T, 0.25 * Fi]])
    I = np.eye(d)
    T = np.block([[0.5 * I, 0.5 * I], [I, -I]])
    C = mc.as_sym(T.T @ Q @ T)
    sdF = mc.sqrt_det(F)
    flag = abs(sdF - cmath.sqrt(mc.det(F))) > 1e-8 * abs(sdF)
    pref = G.scale / ((2.0 * np.sqrt(np.pi)) ** d * sdF)
    return KernelGaussian(complex(pref), C, bool(flag))


def compose_kernels(K1, K2):
    """Kernel of the operator product, by Gaussian integration over the middle variable."""
    d = K1.d
    Q = np.zeros((3 * d, 3 * d), dtype=complex)
    Q[:2 * d, :2 * d] += K1.quad
    Q[d:, d:] += K2.quad
    o = [slice(0, d), slice(2 * d, 3 * d)]
    m = slice(d, 2 * d)
    Qyy = Q[m, m]
    Qoo = np.block([[Q[o[0], o[0]], Q[o[0], o[1]]], [Q[o[1], o[0]], Q[o[1], o[1]]]])
    Qoy = np.vstack([Q[o[0], m], Q[o[1], m]])
    C = mc.as_sym(Qoo - Qoy @ np.linalg.solve(Qyy, Qoy.T))
    pref = K1.prefactor * K2.prefactor * np.pi ** (d / 2) / mc.sqrt_det(Qyy)
    return KernelGaussian(complex(pref), C)


def kernel_vacuum(K):
    """⟨φ₀, K φ₀⟩ for the harmonic-oscillator ground state φ₀."""
    d = K.d
    return complex(K.prefactor * np.pi ** (d / 2) / mc.sqrt_det(K.quad + 0.5 * np.eye(2 * d)))


def vacuum_expectation(G):
    """⟨φ₀, G φ₀⟩ computed from the kernel."""
    return kernel_vacuum(gaussian_kernel(G))


def vacuum_expectation_symbol(G):
    """⟨φ₀, G φ₀⟩ from the symbol side: a / √det(1 + A), valid for Re A ≥ 0."""
    return complex(G.scale / mc.sqrt_det(np.eye(2 * G.d) + G.form))


# ------------------------------------------------------------ composition


def adjoint(G):
    return GaussianOp(np.conj(G.scale), np.conj(G.form))


def compose(G1, G2, tol=DEFAULT_TOL):
    """Product G1·G2 as a GaussianOp, plus a flag telling whether the
    principal branch of det(1 + AθBθ)^{-1/2} was safely away from its cut.

    The returned scale always uses the continuity branch; when the flag is
    False the sign is additionally confirmed against the composed kernels.
    """
    A, B = G1.form, G2.form
    C = diamond(A, B, tol=tol)
    d = G1.d
    th = mc.theta(d)
    dt = complex(mc.det(np.eye(2 * d) + A @ th @ B @ th))
    sign_certain = abs(abs(cmath.phase(dt)) - np.pi) > SIGN_ARG_BAND
    scale = G1.scale * G2.scale / mc.sqrt_det(product_matrix(A, B))
    out = GaussianOp(scale, C)
    if not sign_certain:
        try:
            ref = kernel_vacuum(compose_kernels(gaussian_kernel(G1), gaussian_kernel(G2)))
            got = vacuum_expectation(out)
        except DegenerateF:
            return out, sign_certain
        if (ref / got).real < 0:
            out = GaussianOp(-scale, C)
    return out, sign_certain


def compose_principal(G1, G2, tol=DEFAULT_TOL):
    """Product using the principal branch of det(1 + AθBθ)^{-1/2} (no sign repair)."""
    A, B = G1.form, G2.form
    C = diamond(A, B, tol=tol)
    d = G1.d
    th = mc.theta(d)
    dt = complex(mc.det(np.eye(2 * d) + A @ th @ B @ th))
    return GaussianOp(G1.scale * G2.scale / cmath.sqrt(dt), C)


def is_positive(G, tol=DEFAULT_TOL):
    """a > 0 and A ∈ Sym_p(R^{2d})."""
    a = G.scale
    if abs(a.imag) > tol * max(1.0, abs(a)) or a.real <= tol:
        return False
    return bool(classify_sym(G.form, tol).sym_p)


def is_hermitian(G, tol=DEFAULT_TOL):
    a = G.scale
    return abs(a.imag) <= tol * max(1.0, abs(a)) and bool(classify_sym(G.form, tol).real)


def trace(G, tol=DEFAULT_TOL):
    """Tr a·Op(e^{-A}) = a / (2^d √det A)."""
    A = G.form
    rep = classify_sym(A, tol)
    if not rep.pos_strict:
        raise DegenerateForm("trace needs Re A > 0")
    dA = mc.det(A)
    if abs(dA) <= tol * max(1.0, float(np.linalg.norm(A))) ** (2 * G.d):
        raise DegenerateForm("det A vanishes")
    return complex(G.scale / (2 ** G.d * mc.sqrt_det(A)))


# ----------------------------------------------------- real forms, spectra


def williamson_spectrum(A, tol=DEFAULT_TOL):
    """Positive halves λ_i of σ(Aθ) for real positive definite A, ascending."""
    A = mc.as_sym(A)
    rep = classify_sym(A, tol)
    if not (rep.real and rep.pos_strict):
        raise ValueError("williamson_spectrum needs a real positive definite form")
    sig = np.sort(mc.eigenvalues(A.real @ mc.theta(G_d := mc.half_dim(A))).real)
    return WilliamsonSpectrum(tuple(float(v) for v in sig[G_d:]))


def _mode_trace_norm(lam):
    return 1.0 / (2.0 * lam) if lam <= 1.0 else 0.5


# -------------------------------------------------- absolute value / polar


def abs_form(A, tol=DEFAULT_TOL):
    """B = c(√(c(Āθ) c(Aθ))) θ, the exponent of |Op(e^{-A})|; real, in Sym_p^qnd.

    Equivalently B ⋄ B = Ā ⋄ A. The eigenvalues ±μ of (Ā⋄A)θ are real with
    |μ| < 1 and map to ν = μ/(1 + √(1 - μ²)) (tanh half-angle), which avoids
    the ill-conditioned product of Cayley images near the degenerate locus.
    The direct Cayley-product formula is the fallback when the eigenbasis is
    badly conditioned (clustered Williamson values).
    """
    A = mc.as_sym(A)
    d = mc.half_dim(A)
    th = mc.theta(d)
    _require_qnd(A, tol)
    W = diamond(np.conj(A), A, tol=tol)
    lam, V = np.linalg.eig(W.real @ th)
    with np.errstate(all="ignore"):
        kV = np.linalg.cond(V)
    if np.isfinite(kV) and kV < mc.EIGVEC_COND_MAX and np.all(np.abs(lam.real) < 1):
        mu = lam.real
        nu = mu / (1.0 + np.sqrt(1.0 - mu * mu))
        B = mc.as_sym((V * nu) @ np.linalg.solve(V, th))
    else:
        R = mc.cayley(np.conj(A) @ th) @ mc.cayley(A @ th)
        B = mc.as_sym(mc.cayley(mc.principal_sqrt(R)) @ th)
    nB = max(1.0, float(np.linalg.norm(B)))
    # B is real analytically; a sizeable imaginary part means a broken invariant
    assert float(np.max(np.abs(B.imag))) <= 1e-6 * nB, "abs_form produced a non-real exponent"
    return mc.as_sym(B.real)


def _abs_ratio(A, B):
    """√det([[B,-θ],[θ,B]]) / √det([[Ā,-θ],[θ,A]]) on the continuity branch."""
    return mc.sqrt_det(product_matrix(B, B)) / mc.sqrt_det(product_matrix(np.conj(A), A))


def abs_op(G, tol=DEFAULT_TOL):
    """|G| = √(G*G) as a positive GaussianOp."""
    B = abs_form(G.form, tol)
    r = _abs_ratio(G.form, B)
    return GaussianOp(abs(G.scale) * np.sqrt(abs(r)), B)


def abs_prefactor_display(A, tol=DEFAULT_TOL):
    """det(1 + (Bθ)²)^{1/4} / det(1 + ĀθAθ)^{1/4} (moduli), the closed-form prefactor of |Op(e^{-A})|."""
    A = mc.as_sym(A)
    d = mc.half_dim(A)
    th = mc.theta(d)
    one = np.eye(2 * d)
    B = abs_form(A, tol)
    num = abs(mc.det(one + B @ th @ B @ th))
    den = abs(mc.det(one + np.conj(A) @ th @ A @ th))
    return (num / den) ** 0.25


def polar(G, tol=DEFAULT_TOL):
    """Polar decomposition G = U·P with P = |G| and U metaplectic.

    U is returned as a GaussianOp whose form iC is purely imaginary. Raises
    :class:`PolarUndefined` when A ⋄ (-B) does not exist.
    """
    P = abs_op(G, tol)
    B = P.form
    ok, _ = diamond_defined(G.form, -B, tol)
    if not ok:
        raise PolarUndefined("A ⋄ (-B) is undefined; U has no Gaussian symbol")
    try:
        iC = diamond(G.form, -B, tol=tol)
    except NotComposable as exc:
        raise PolarUndefined(str(exc)) from exc
    u = G.scale * mc.sqrt_det(product_matrix(iC, B)) / P.scale
    return GaussianOp(u, iC), P


def metaplectic_sign(U):
    """ε with U.scale = ε·√det(1 + Cω) for U = scale·Op(e^{-iC}); None if |·| mismatch."""
    C = (U.form / 1j).real
    d = U.d
    ref = cmath.sqrt(mc.det(np.eye(2 * d) + C @ mc.omega(d)))
    q = U.scale / ref
    if abs(abs(q) - 1) > 1e-6:
        return None
    return 1 if q.real > 0 else -1


# ------------------------------------------------------------- norms


def trace_norm(G, tol=DEFAULT_TOL, strict=True):
    """Tr|G|.

    Real positive definite forms use the per-mode product of
    f(λ) = 1/(2λ) for λ ≤ 1 and 1/2 for λ > 1. Other forms go through
    |G| = p·Op(e^{-B}) and the trace formula. With ``strict`` (default) a
    quantum-degenerate form raises :class:`QuantumDegenerate` on both paths.
    """
    A = G.form
    rep = classify_sym(A, tol)
    if strict and not rep.qnd:
        raise QuantumDegenerate(
            f"|det(1 + Aθ)| = {rep.witnesses['abs_det_1_plus_A_theta']:.3g}"
        )
    if rep.real and rep.pos_strict:
        lam = williamson_spectrum(A, tol).lambdas
        return abs(G.scale) * float(np.prod([_mode_trace_norm(v) for v in lam]))
    if not rep.pos_strict:
        raise DegenerateForm("trace norm needs Re A > 0")
    P = abs_op(G, tol)
    return float(abs(trace(P, tol)))


def trace_norm_display(A):
    """√2 / (2^d √|det((1 + Aθ)(1 - √(c(A*θ) c(Aθ))))|), the printed closed form."""
    A = mc.as_sym(A)
    d = mc.half_dim(A)
    th = mc.theta(d)
    one = np.eye(2 * d)
    S = mc.principal_sqrt(mc.cayley(np.conj(A) @ th) @ mc.cayley(A @ th))
    val = abs(mc.det((one + A @ th) @ (one - S)))
    return float(np.sqrt(2.0) / (2 ** d * np.sqrt(val)))


def trace_norm_corollary(B):
    """√2 / (4^d ∏_{λ_i<1} λ_i) for real positive definite B, the printed per-mode form."""
    lam = williamson_spectrum(B).lambdas
    d = len(lam)
    return float(np.sqrt(2.0) / (4 ** d * np.prod([v for v in lam if v < 1])))


def trace_norm_report(G, tol=DEFAULT_TOL):
    """Composition-route value, the printed closed form, and their ratio."""
    val = trace_norm(G, tol)
    disp = abs(G.scale) * trace_norm_display(G.form)
    return {"value": val, "display": disp, "display_over_value": disp / val}


def op_norm(G, tol=DEFAULT_TOL):
    """‖G‖; for real positive definite forms ∏ 1/(1 + λ_i), otherwise ‖|G|‖."""
    A = G.form
    rep = classify_sym(A, tol)
    if rep.real and rep.pos_strict:
        lam = williamson_spectrum(A, tol).lambdas
        return abs(G.scale) * float(np.prod([1.0 / (1.0 + v) for v in lam]))
    if not rep.pos_strict:
        raise DegenerateForm("operator norm formula needs Re A > 0")
    P = abs_op(G, tol)
    lam = williamson_spectrum(P.form, tol).lambdas
    return abs(P.scale) * float(np.prod([1.0 / (1.0 + v) for v in lam]))


def op_norm_real_display(B):
    """det(1 + √(BθBθ))^{-1/2} for real positive definite B."""
    B = mc.as_sym(B)
    d = mc.half_dim(B)
    th = mc.theta(d)
    S = mc.principal_sqrt(B @ th @ B @ th)
    return float(abs(mc.det(np.eye(2 * d) + S)) ** -0.5)


def op_norm_normalized_display(A, tol=DEFAULT_TOL):
    """‖√det(1 + Aθ) Op(e^{-A})‖ from the closed form in the Cayley images."""
    A = mc.as_sym(A)
    d = mc.half_dim(A)
    th = mc.theta(d)
    one = np.eye(2 * d)
    _require_qnd(A, tol)
    S = mc.principal_sqrt(mc.cayley(np.conj(A) @ th) @ mc.cayley(A @ th))
    cS = mc.cayley(S)
    num = mc.sqrt_det(one + cS)
    den = mc.sqrt_det(one + mc.principal_sqrt(cS @ cS))
    return float(abs(num / den))


# ------------------------------------------------------- normalization


def normalize(G, tol=DEFAULT_TOL):
    """Split G = residual · ε√det(1 + Aθ) Op(e^{-A}) with arg(residual) ∈ (-π/2, π/2]."""
    A = G.form
    _require_qnd(A, tol)
    q = G.scale / principal_sqrt_det_shift(A)
    phase = cmath.phase(q)
    eps = 1 if -np.pi / 2 < phase <= np.pi / 2 else -1
    return NormalizedGaussian(A, eps), complex(q * eps)


# --------------------------------------------------- one degree of freedom


def degenerate_1dof(a_coef, b_coef, scale=1.0):
    """GaussianOp with kernel scale·exp(-(a x² + b x'²)), a quantum-degenerate rank-one operator."""
    a = complex(a_coef)
    b = complex(b_coef)
    if a.real <= 0 or b.real <= 0:
        raise ValueError("need Re a > 0 and Re b > 0")
    s = a + b
    A = np.array([[4 * a * b, 1j * (a - b)], [1j * (a - b), 1.0]], dtype=complex) / s
    return GaussianOp(complex(scale) * 2 * np.sqrt(np.pi) / cmath.sqrt(s), A)
