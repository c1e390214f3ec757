"""Brute-force checks in the harmonic-oscillator basis.

A GaussianOp is turned into its Schrödinger kernel and discretized as
M_{mn} = ∬ φ_m(x) K(x, y) φ_n(y) dx dy by tensor Gauss–Hermite quadrature.
Traces, norms and spectra are then read off the truncated matrix. Nothing
here uses the closed-form composition or norm formulas.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss

from . import matcore as mc
from .errors import NoConvergence
from .gaussops import gaussian_kernel

N_MAX_1D = 160
N_MAX_2D = 40


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss–Hermite rule on x = scaling·t; ``nodes`` per axis."""

    nodes: int
    scaling: float = np.sqrt(2.0)

    def __post_init__(self):
        if self.nodes <= 0 or self.scaling <= 0:
            raise ValueError("nodes and scaling must be positive")


@dataclass(frozen=True, eq=False)
class HermiteMatrix:
    trunc: int
    d: int
    entries: np.ndarray
    tail_witness: float

    def __matmul__(self, other):
        E = self.entries @ other.entries
        return HermiteMatrix(self.trunc, self.d, E, _tail(E, self.trunc, self.d))


def hermite_functions(n, x):
    """Normalized Hermite functions φ_0 … φ_{n-1} at x, shape (n, len(x))."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n, x.size))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for k in range(1, n - 1):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * x * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def gauss_hermite(q):
    """Nodes t_i and weights W_i = w_i e^{t_i²}, so that ∫f ≈ Σ W_i f(t_i) for f ~ Gaussian."""
    with np.errstate(all="ignore"):
        # numpy's weights overflow for large q; only its nodes are used
        t, _ = hermgauss(q)
    # w_i e^{t_i²} = 1 / (q φ_{q-1}(t_i)²) for the normalized Hermite functions
    phi = hermite_functions(q, t)[q - 1]
    W = 1.0 / (q * phi * phi)
    return t, W


def _tail(E, N, d):
    w = max(1, N // 10)
    idx = np.indices((N,) * d).reshape(d, -1)
    last = np.any(idx >= N - w, axis=0)
    big = float(np.max(np.abs(E))) or 1.0
    return float(max(np.max(np.abs(E[last, :])), np.max(np.abs(E[:, last])))) / big


def default_quad(N, d):
    return QuadratureSpec(3 * N + 20 if d == 1 else N + 24)


def hermite_matrix_from_kernel(K, N, quad=None):
    """Discretize a KernelGaussian (d = 1 or 2) in the first N Hermite functions per axis."""
    d = K.d
    if d not in (1, 2):
        raise ValueError("oracle supports d = 1 and d = 2 only")
    quad = quad or default_quad(N, d)
    t, W = gauss_hermite(quad.nodes)
    s = quad.scaling
    x = s * t
    PW = hermite_functions(N, x) * (s * W)
    C = K.quad
    if d == 1:
        X, Y = np.meshgrid(x, x, indexing="ij")
        Kv = K.prefactor * np.exp(-(C[0, 0] * X * X + 2 * C[0, 1] * X * Y + C[1, 1] * Y * Y))
        E = PW @ Kv @ PW.T
    else:
        q = x.size
        E = np.zeros((N, N, N, N), dtype=complex)
        pts = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)  # (x2, y1, y2)
        for i in range(q):
            v = np.concatenate([np.full(pts.shape[:-1] + (1,), x[i]), pts], axis=-1)
            Kc = K.prefactor * np.exp(-np.einsum("...i,ij,...j->...", v, C, v))
            T = np.einsum("bi,ijk,cj,ek->bce", PW, Kc, PW, PW, optimize=True)
            E += PW[:, i][:, None, None, None] * T[None]
        E = E.reshape(N * N, N * N)
    return HermiteMatrix(N, d, E, _tail(E, N, d))


def _renormalized_hermite(R, N, g0):
    """Array G_k over k ∈ {0..N-1}^n with Σ_k G_k w^k/√(k!) = g0·exp(½ wᵀ R w).

    Filled by G_{k+e_a} = Σ_j R_aj √(k_j/(k_a+1)) G_{k-e_j}, one axis at a time.
    """
    n = R.shape[0]
    G = np.zeros((N,) * n, dtype=complex)
    G[(0,) * n] = g0
    up = np.sqrt(np.arange(N))
    for a in reversed(range(n)):
        S = G[(0,) * a]
        for k in range(N - 1):
            new = R[a, a] * np.sqrt(k / (k + 1)) * S[k - 1] if k else np.zeros(S.shape[1:], complex)
            for j in range(a + 1, n):
                ax = j - a - 1
                sh = np.zeros_like(S[k])
                src = [slice(None)] * (n - a - 1)
                dst = [slice(None)] * (n - a - 1)
                src[ax] = slice(0, N - 1)
                dst[ax] = slice(1, N)
                w = up[1:].reshape([-1 if t == ax else 1 for t in range(n - a - 1)])
                sh[tuple(dst)] = S[k][tuple(src)] * w
                new = new + R[a, j] * sh / np.sqrt(k + 1)
            S[k + 1] = new
    return G


def hermite_matrix_generating(K, N):
    """Hermite-basis matrix from the Bargmann generating function of the kernel.

    With g(x, s) = Σ φ_m(x) s^m/√(m!) the Gaussian integral ∬ g K g is
    M_00·exp(½ wᵀ R w), R = (C + ½)^{-1} - 1. Exact for any kernel with
    Re C ⪰ 0, including the chirps of metaplectic operators that defeat
    real-line quadrature.
    """
    d = K.d
    Mv = K.quad + 0.5 * np.eye(2 * d)
    g0 = K.prefactor * np.pi ** (d / 2) / mc.sqrt_det(Mv)
    R = np.linalg.inv(Mv) - np.eye(2 * d)
    E = _renormalized_hermite(0.5 * (R + R.T), N, g0).reshape(N ** d, N ** d)
    return HermiteMatrix(N, d, E, _tail(E, N, d))


def _decays(K, margin=1e-3):
    lam = np.linalg.eigvalsh(K.quad.real)
    return lam[0] > margin * max(1.0, float(np.abs(K.quad).max()))


def hermite_matrix(G, N=60, quad=None, method="auto"):
    """Truncated Hermite-basis matrix of a GaussianOp.

    ``method`` is ``"quadrature"`` (tensor Gauss–Hermite), ``"generating"``
    (exact generating function) or ``"auto"``, which uses quadrature for
    decaying kernels at d = 1 and the generating function otherwise (the
    d = 2 quadrature is correct but about 50 times slower).
    """
    if not np.any(G.form):
        # identity limit: the kernel is a delta, the matrix is exact
        n = N ** G.d
        return HermiteMatrix(N, G.d, G.scale * np.eye(n, dtype=complex), 0.0)
    K = gaussian_kernel(G)
    if method == "auto":
        method = "quadrature" if (K.d == 1 and _decays(K)) else "generating"
    if method == "quadrature":
        return hermite_matrix_from_kernel(K, N, quad)
    if method == "generating":
        return hermite_matrix_generating(K, N)
    raise ValueError(f"unknown method {method!r}")


def numeric_functionals(M, eigenvalues=False):
    """Trace, trace norm, operator norm and singular values of a truncated matrix.

    The (non-Hermitian) eigenvalues are included only on request; at d = 2
    they dominate the cost.
    """
    E = M.entries if isinstance(M, HermiteMatrix) else np.asarray(M)
    sv = np.linalg.svd(E, compute_uv=False)
    out = {
        "trace": complex(np.trace(E)),
        "trace_norm": float(np.sum(sv)),
        "op_norm": float(sv[0]),
        "singular_values": sv,
    }
    if eigenvalues:
        out["eigenvalues"] = np.linalg.eigvals(E)
    return out


def converged_functional(G, functional, tol=1e-8, N0=20, N_max=None):
    """Double N from N0 until |f(N) - f(2N)| < tol; returns (value, N, delta)."""
    d = G.d
    N_max = N_max or (N_MAX_1D if d == 1 else N_MAX_2D)
    N = N0
    prev = functional(numeric_functionals(hermite_matrix(G, N)))
    while True:
        N2 = min(2 * N, N_max)
        if N2 == N:
            raise NoConvergence(f"no convergence by N = {N_max}; last delta unknown")
        cur = functional(numeric_functionals(hermite_matrix(G, N2)))
        delta = abs(cur - prev)
        if delta < tol * max(1.0, abs(cur)):
            return cur, N2, delta
        if N2 == N_max:
            raise NoConvergence(f"delta {delta:.3g} at N = {N_max}")
        N, prev = N2, cur


def compose_numeric(G1, G2, N=60, quad=None, method="auto"):
    """Hermite(G1)·Hermite(G2); ``tail_witness`` bounds the truncation effect."""
    M1 = hermite_matrix(G1, N, quad, method)
    M2 = hermite_matrix(G2, N, quad, method)
    E = M1.entries @ M2.entries
    return HermiteMatrix(N, M1.d, E, max(M1.tail_witness, M2.tail_witness))


def is_unitary_block(M, lead=None):
    """max |M*M - 1| on the leading sub-block (default N/8).

    A metaplectic operator spreads |n⟩ over indices up to a squeeze-dependent
    multiple of n, so only a leading block is free of truncation effects.
    """
    E = M.entries if isinstance(M, HermiteMatrix) else np.asarray(M)
    n = E.shape[0]
    lead = lead or max(1, n // 8)
    UU = E.conj().T @ E
    return float(np.max(np.abs(UU[:lead, :lead] - np.eye(lead))))


def _gh_nd(q, d, s):
    t, W = gauss_hermite(q)
    grids = np.meshgrid(*([s * t] * d), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wg = np.meshgrid(*([s * W] * d), indexing="ij")
    w = np.prod(np.stack([g.ravel() for g in wg], axis=-1), axis=-1)
    return pts, w


def symbol_from_kernel(K, points, nodes=120):
    """a(x, p) = ∫ K(x + z/2, x - z/2) e^{i z·p} dz by Gauss–Hermite quadrature in z."""
    d = K.d
    points = np.atleast_2d(np.asarray(points, dtype=float))
    # width of the z-Gaussian from the real part of the zz block
    C = K.quad
    I = np.eye(d)
    T = np.vstack([np.hstack([I, 0.5 * I]), np.hstack([I, -0.5 * I])])
    Czz = (T.T @ C @ T)[d:, d:]
    lam = float(np.linalg.eigvalsh(Czz.real)[0])
    if lam <= 0:
        raise NoConvergence("kernel does not decay off the diagonal")
    s = 1.0 / np.sqrt(lam)
    z, w = _gh_nd(nodes, d, s)
    out = np.empty(len(points), dtype=complex)
    for k, y in enumerate(points):
        x, p = y[:d], y[d:]
        vals = K(x + 0.5 * z, x - 0.5 * z) * np.exp(1j * z @ p)
        out[k] = np.sum(w * vals)
    return out


def symbol_roundtrip(G, points, nodes=120):
    """Max |a_rec(y) - a·e^{-yᵀAy}| over the sample points."""
    if G.scale == 0:
        return 0.0
    points = np.atleast_2d(np.asarray(points, dtype=float))
    rec = symbol_from_kernel(gaussian_kernel(G), points, nodes)
    exact = G.scale * np.exp(-np.einsum("ki,ij,kj->k", points, G.form, points))
    return float(np.max(np.abs(rec - exact)))


def star_integral(A, B, points, nodes=200):
    """(e^{-A} * e^{-B})(y) = π^{-2d} ∬ e^{2(y-y1)θ(y-y2)} e^{-A(y1)} e^{-B(y2)} dy1 dy2.

    Tensor Gauss–Hermite quadrature over R^4 (d = 1 only). The phase
    factorizes as E(x1, p2)·E'(p1, x2), so each point costs O(nodes³).
    A zero form on either side is the unit of the star product.
    """
    A = mc.as_sym(A)
    B = mc.as_sym(B)
    d = mc.half_dim(A)
    if d != 1:
        raise ValueError("direct star integral quadrature is implemented for d = 1")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if not np.any(B):
        return np.exp(-np.einsum("ki,ij,kj->k", points, A, points))
    if not np.any(A):
        return np.exp(-np.einsum("ki,ij,kj->k", points, B, points))
    t, W = gauss_hermite(nodes)

    def grid(F):
        s = 1.0 / np.sqrt(float(np.linalg.eigvalsh(F.real)[0]))
        a = s * t
        X, P = np.meshgrid(a, a, indexing="ij")
        q = F[0, 0] * X * X + 2 * F[0, 1] * X * P + F[1, 1] * P * P
        return a, s * s * np.outer(W, W) * np.exp(-q)

    a1, fa = grid(A)  # fa[i, j] at y1 = (a1_i, a1_j)
    a2, fb = grid(B)
    out = np.empty(len(points), dtype=complex)
    for k, (x, p) in enumerate(points):
        # 2 uᵀθv = -2i(u_x v_p - u_p v_x) with u = y - y1, v = y - y2
        E1 = np.exp(-2j * np.outer(x - a1, p - a2))  # (i, n): x1, p2
        E2 = np.exp(2j * np.outer(p - a1, x - a2))  # (j, m): p1, x2
        T = fa @ E2  # (i, m)
        U = T @ fb  # (i, n)
        out[k] = np.sum(U * E1)
    return out / np.pi ** (2 * d)


def star_integral_check(A, B, points, nodes=200):
    """Max deviation of the quadrature star integral from the composed Gaussian symbol."""
    from .gaussops import GaussianOp, compose

    P, _ = compose(GaussianOp(1.0, A), GaussianOp(1.0, B))
    points = np.atleast_2d(np.asarray(points, dtype=float))
    lhs = star_integral(A, B, points, nodes)
    rhs = P.scale * np.exp(-np.einsum("ki,ij,kj->k", points, P.form, points))
    return float(np.max(np.abs(lhs - rhs)))


def positive_by_oracle(G, N=60, rel=1e-7):
    """Oracle positivity: Hermitian truncated matrix with min eigenvalue ≥ -rel·‖M‖."""
    E = hermite_matrix(G, N).entries
    nrm = float(np.linalg.norm(E, 2))
    if np.max(np.abs(E - E.conj().T)) > rel * max(nrm, 1e-300) * 10:
        return False
    lam = np.linalg.eigvalsh(0.5 * (E + E.conj().T))
    return bool(lam[0] >= -rel * nrm)


__all__ = [
    "HermiteMatrix",
    "QuadratureSpec",
    "compose_numeric",
    "hermite_functions",
    "hermite_matrix",
    "hermite_matrix_from_kernel",
    "numeric_functionals",
    "star_integral",
    "star_integral_check",
    "symbol_roundtrip",
]
