"""Quadratic Hamiltonians and their holomorphic semigroups.

For H = Op(yᵀHy) the symplectic generator is D = 2Hω^{-1}. The propagator
e^{-zH} is represented as √det(1 + A_zθ)·Op(e^{-A_z}) with
A_z = c(e^{σ i z D})θ. The orientation σ = ±1 is fixed once per Hamiltonian
so that A_z = zH + O(z²); with θ = -iω this always yields σ = -1.
"""

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import matcore as mc
from .errors import NoGaussianSymbol, OutsideDomain, SingularShift
from .gaussops import GaussianOp
from .symclass import DEFAULT_TOL, classify_sp

INTERIOR = "interior"
CLOSURE = "closure"
OUTSIDE = "outside"
CALIBRATION_Z = 1e-4
RAY_STEPS = 256


def generator(H):
    """D = 2Hω^{-1}."""
    H = mc.as_sym(H)
    d = mc.half_dim(H)
    return 2.0 * H @ (-mc.omega(d))


def _flow_form(D, z, sigma):
    R = mc.expm(sigma * 1j * z * D)
    return mc.as_sym(mc.cayley(R) @ mc.theta(D.shape[0] // 2))


def _calibrate(H, D):
    if not np.any(H):
        return 1
    z = CALIBRATION_Z
    err = {}
    for s in (1, -1):
        err[s] = mc.fro_rel(_flow_form(D, z, s), z * H)
    return min(err, key=err.get)


@dataclass(frozen=True, eq=False)
class QuadHamiltonian:
    """Quadratic Hamiltonian with cached generator and orientation."""

    form: np.ndarray
    generator: np.ndarray = field(init=False)
    orientation: int = field(init=False)

    def __post_init__(self):
        H = mc.as_sym(self.form)
        if np.linalg.eigvalsh(H.real)[0] < -DEFAULT_TOL:
            raise ValueError("Hamiltonian needs Re H ⪰ 0")
        H.setflags(write=False)
        D = generator(H)
        D.setflags(write=False)
        object.__setattr__(self, "form", H)
        object.__setattr__(self, "generator", D)
        object.__setattr__(self, "orientation", _calibrate(H, D))

    @property
    def d(self):
        return self.form.shape[0] // 2

    def flow(self, z):
        """e^{σ i z D}, the symplectic image of e^{-zH}."""
        return mc.expm(self.orientation * 1j * complex(z) * self.generator)


def as_hamiltonian(H):
    return H if isinstance(H, QuadHamiltonian) else QuadHamiltonian(H)


def davies_hamiltonian(psi):
    """e^{iψ}x² + e^{-iψ}p²."""
    return QuadHamiltonian(np.diag([np.exp(1j * psi), np.exp(-1j * psi)]))


@dataclass
class DomainSample:
    grid: np.ndarray
    labels: np.ndarray
    psi: float = None

    def fraction(self, label=INTERIOR):
        return float(np.mean(self.labels == label))

    def rows(self):
        for z, lab in zip(self.grid.ravel(), self.labels.ravel()):
            yield float(z.real), float(z.imag), str(lab)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re_z", "im_z", "label"])
        for r in self.rows():
            w.writerow([repr(r[0]), repr(r[1]), r[2]])
        return buf.getvalue()

    def to_json(self):
        return json.dumps(
            {"psi": self.psi, "points": [{"re_z": a, "im_z": b, "label": c} for a, b, c in self.rows()]}
        )


# ------------------------------------------------------------ membership


def domain_margin(H, z, tol=DEFAULT_TOL):
    """Relative gap λ_min(θ - R*θR)/‖R‖² of R = e^{σizD}; positive inside."""
    Q = as_hamiltonian(H)
    R = Q.flow(z)
    return classify_sp(R, tol).witnesses["min_eig_theta_gap_rel"]


def domain_member(H, z, tol=DEFAULT_TOL):
    """Label z by membership of e^{σizD} in Sp₊₊ (interior) or Sp₊ (closure)."""
    Q = as_hamiltonian(H)
    R = Q.flow(z)
    if not np.all(np.isfinite(R)):
        return OUTSIDE
    rep = classify_sp(R, tol)
    if rep.sp_pp:
        return INTERIOR
    if rep.sp_plus:
        return CLOSURE
    return OUTSIDE


def domain_labels(H, zs, tol=DEFAULT_TOL):
    """Vectorized :func:`domain_member` over an array of z (same criteria)."""
    Q = as_hamiltonian(H)
    zs = np.asarray(zs, dtype=complex)
    d = Q.d
    w = mc.omega(d)
    th = mc.theta(d)
    with np.errstate(all="ignore"):
        R = sla.expm(Q.orientation * 1j * zs.reshape(-1, 1, 1) * Q.generator[None])
        nR = np.maximum(1.0, np.linalg.norm(R, axis=(1, 2)))
        scale = nR * nR
        RH = np.conj(np.swapaxes(R, 1, 2))
        sympl = np.linalg.norm(np.swapaxes(R, 1, 2) @ w @ R - w, axis=(1, 2)) / scale
        M = th - RH @ th @ R
        gap = np.linalg.eigvalsh(0.5 * (M + np.conj(np.swapaxes(M, 1, 2))))[:, 0] / scale
    finite = np.all(np.isfinite(R), axis=(1, 2))
    sp = finite & (sympl <= tol * 1e2)
    out = np.full(zs.size, OUTSIDE, dtype=object)
    out[sp & (gap >= -tol)] = CLOSURE
    out[sp & (gap > tol)] = INTERIOR
    return out.reshape(zs.shape)


def _abs_arg_tanh(z):
    z = complex(z)
    c = np.cosh(z)
    s = np.sinh(z)
    if abs(c) == 0.0 or abs(s) == 0.0:
        # pole or zero of tanh on the imaginary axis; the limit from Re z > 0 is ±π/2
        return np.pi / 2
    if z.real > 20:
        return abs(np.angle(np.tanh(complex(min(z.real, 20.0), z.imag))))
    return abs(np.angle(s / c))


def davies_margin(psi, z):
    """min(Re z, π/2 - |arg tanh z| - |ψ|); positive exactly on the interior."""
    z = complex(z)
    return min(z.real, np.pi / 2 - _abs_arg_tanh(z) - abs(psi))


def davies_member(psi, z, tol=DEFAULT_TOL):
    """Closed-form label for e^{iψ}x² + e^{-iψ}p²: Re z > 0 and |arg tanh z| + |ψ| < π/2."""
    if not abs(psi) < np.pi / 2:
        raise ValueError("need |psi| < π/2")
    m = davies_margin(psi, z)
    if m > tol:
        return INTERIOR
    if m >= -tol:
        return CLOSURE
    return OUTSIDE


def _label_row(args):
    kind, target, zs, tol = args
    if kind == "psi":
        return [davies_member(target, z, tol) for z in zs]
    return list(domain_labels(target, zs, tol))


def sample_region(target, rect, resolution, tol=DEFAULT_TOL, workers=None, route=None):
    """Label a grid over ``rect = (re_min, re_max, im_min, im_max)``.

    ``target`` is a Davies angle ψ (closed form, unless ``route="matrix"``)
    or a Hamiltonian form (matrix route). ``resolution`` is an int or
    ``(n_re, n_im)``; points sit at cell centres.
    """
    nx, ny = (resolution, resolution) if np.isscalar(resolution) else resolution
    if nx > 2000 or ny > 2000:
        raise ValueError("resolution is capped at 2000 × 2000")
    x0, x1, y0, y1 = rect
    xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
    ys = y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny
    grid = xs[None, :] + 1j * ys[:, None]
    psi = None
    if np.isscalar(target):
        psi = float(target)
        if route == "matrix":
            kind, tgt = "H", davies_hamiltonian(psi).form
        else:
            kind, tgt = "psi", psi
    else:
        kind, tgt = "H", mc.as_sym(target)
    jobs = [(kind, tgt, row, tol) for row in grid]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_label_row, jobs))
    else:
        rows = [_label_row(j) for j in jobs]
    return DomainSample(grid, np.array(rows, dtype=object), psi)


# ------------------------------------------------------------ propagators


def _unwrapped_sqrt(f, steps=RAY_STEPS):
    """√f(1) continued from √f(0) = 1 along s ∈ [0, 1]; skips points where f fails."""
    vals = []
    for s in np.linspace(0.0, 1.0, steps + 1):
        try:
            vals.append(complex(f(s)))
        except (SingularShift, NoGaussianSymbol):
            continue
    v = np.array(vals)
    ph = np.unwrap(np.angle(v))
    return complex(np.sqrt(abs(v[-1])) * np.exp(0.5j * ph[-1]))


def propagator(H, z, tol=DEFAULT_TOL):
    """e^{-zH} as √det(1 + A_zθ)·Op(e^{-A_z})."""
    Q = as_hamiltonian(H)
    z = complex(z)
    if domain_member(Q, z, tol) != INTERIOR:
        raise OutsideDomain(f"z = {z} is not in the open domain of the semigroup")
    d = Q.d
    th = mc.theta(d)
    one = np.eye(2 * d)

    def form(zz):
        R = Q.flow(zz)
        try:
            return mc.as_sym(mc.cayley(R) @ th)
        except SingularShift as exc:
            raise NoGaussianSymbol("e^{izD} has eigenvalue -1") from exc

    A = form(z)
    scale = _unwrapped_sqrt(lambda s: mc.det(one + form(s * z) @ th))
    return GaussianOp(scale, A)


def metaplectic_form(H, t, tol=DEFAULT_TOL):
    """√det(1 + C_tω)·Op(e^{-iC_t}) with C_t = c(e^{tD})ω^{-1}, H real.

    The value equals propagator(H, it) continued to the imaginary axis,
    i.e. the unitary group generated by the quantized H.
    """
    Q = as_hamiltonian(H)
    if np.max(np.abs(Q.form.imag)) > tol:
        raise ValueError("metaplectic_form needs a real Hamiltonian")
    d = Q.d
    w = mc.omega(d)
    one = np.eye(2 * d)
    D = Q.generator.real

    def C_of(tt):
        R = mc.expm(tt * D).real
        try:
            return mc.as_sym(mc.cayley(R) @ (-w)).real
        except SingularShift as exc:
            raise NoGaussianSymbol("1 + e^{tD} is singular") from exc

    C = C_of(float(t))
    scale = _unwrapped_sqrt(lambda s: mc.det(one + C_of(s * t) @ w))
    return GaussianOp(scale, 1j * C)
