"""Invariant suite across all modules, with measured margins.

Each check returns the largest observed error over a randomized sample;
it passes when that error is at most the stated tolerance. The margin
reported is tolerance minus error.
"""

import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import matcore as mc
from . import sampling as smp
from .cordes import CordesParams, closed_bound
from .diamond import diamond, diamond_route
from .gaussops import (
    GaussianOp,
    compose,
    op_norm,
    polar,
    trace,
    trace_norm,
    williamson_spectrum,
)
from .hamflow import INTERIOR, davies_member, domain_labels, davies_hamiltonian, propagator
from .io import gaussian_doc, parse_gaussian
from .oracle import hermite_matrix, numeric_functionals
from .symclass import classify_sym
from .spmap import from_symplectic, sp_polar, to_symplectic

CHECKS = {}


def check(name, tol, module):
    def deco(fn):
        CHECKS[name] = (fn, tol, module)
        return fn
    return deco


@dataclass
class CheckResult:
    name: str
    module: str
    error: float
    tol: float
    margin: float
    passed: bool
    seconds: float


# ------------------------------------------------------------ matcore


@check("theta-involution", 1e-14, "matcore")
def _theta_sq(rng, n):
    return max(float(np.max(np.abs(mc.theta(d) @ mc.theta(d) - np.eye(2 * d)))) for d in (1, 2, 3))


@check("cayley-involutive", 1e-9, "matcore")
def _cayley_inv(rng, n):
    err = 0.0
    for _ in range(n):
        A = smp.random_sym_pp(rng, int(rng.integers(1, 3)))
        M = A @ mc.theta(mc.half_dim(A))
        err = max(err, mc.fro_rel(mc.cayley(mc.cayley(M)), M))
    return err


@check("sqrt-det-squared", 1e-12, "matcore")
def _sqrt_det(rng, n):
    err = 0.0
    for _ in range(n):
        A = smp.random_sym_pp(rng, 2)
        s = mc.sqrt_det(A)
        err = max(err, abs(s * s - mc.det(A)) / abs(mc.det(A)))
    return err


# ------------------------------------------------------------ diamond


def _forms(rng, n, d=None):
    for _ in range(n):
        dd = d or int(rng.integers(1, 3))
        yield dd


@check("symclass-williamson-spectrum", 1e-9, "symclass")
def _sym_spec(rng, n):
    # σ(Aθ) = ±λ_j for Sᵀdiag(λ,λ)S; flags must follow the position of λ relative to 1
    err = 0.0
    for d in _forms(rng, n):
        lams = rng.uniform(0.2, 0.9, d) if rng.random() < 0.5 else rng.uniform(1.1, 3.0, d)
        A = smp.williamson_form(rng, lams, 0.3)
        rep = classify_sym(A)
        err = max(err, abs(rep.witnesses["max_abs_sigma_A_theta"] - lams.max()) / lams.max())
        if rep.sym_p_qnd != bool(lams.max() < 1) or not rep.sym_pp_real:
            err = np.inf
    return err


@check("diamond-associative", 1e-8, "diamond")
def _assoc(rng, n):
    err = 0.0
    for d in _forms(rng, n):
        A, B, C = (smp.random_sym_pp(rng, d) for _ in range(3))
        err = max(err, mc.fro_rel(diamond(diamond(A, B), C), diamond(A, diamond(B, C))))
    return err


@check("diamond-unit-inverse", 1e-8, "diamond")
def _unit(rng, n):
    err = 0.0
    for d in _forms(rng, n):
        A = smp.random_sym_pp(rng, d)
        Z = np.zeros_like(A)
        err = max(err, mc.fro_rel(diamond(A, Z), A), mc.fro_rel(diamond(Z, A), A))
        err = max(err, float(np.linalg.norm(diamond(A, -A))) / max(1.0, float(np.linalg.norm(A))))
    return err


@check("diamond-conjugation", 1e-8, "diamond")
def _conj(rng, n):
    err = 0.0
    for d in _forms(rng, n):
        A, B = smp.random_sym_pp(rng, d), smp.random_sym_pp(rng, d)
        err = max(err, mc.fro_rel(np.conj(diamond(A, B)), diamond(np.conj(B), np.conj(A))))
    return err


@check("diamond-routes-agree", 1e-8, "diamond")
def _routes(rng, n):
    err = 0.0
    for d in _forms(rng, n):
        A, B = smp.random_sym_pp(rng, d), smp.random_sym_pp(rng, d)
        ref = diamond_route(A, B, "block")
        for r in ("pro1", "pro2", "pro3", "pro4", "cayley"):
            err = max(err, mc.fro_rel(diamond_route(A, B, r), ref))
    return err


@check("cayley-multiplicative", 1e-8, "diamond")
def _cayley_mult(rng, n):
    err = 0.0
    for d in _forms(rng, n):
        A, B = smp.random_sym_pp(rng, d), smp.random_sym_pp(rng, d)
        th = mc.theta(d)
        lhs = mc.cayley(diamond(A, B) @ th)
        rhs = mc.cayley(A @ th) @ mc.cayley(B @ th)
        err = max(err, mc.fro_rel(lhs, rhs))
    return err


@check("determinant-identity", 1e-8, "diamond")
def _det_id(rng, n):
    err = 0.0
    for d in _forms(rng, n):
        A, B = smp.random_sym_pp(rng, d), smp.random_sym_pp(rng, d)
        th = mc.theta(d)
        one = np.eye(2 * d)
        lhs = mc.det(one + diamond(A, B) @ th) * mc.det(one + A @ th @ B @ th)
        rhs = mc.det(one + A @ th) * mc.det(one + B @ th)
        err = max(err, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return err


# ------------------------------------------------------------ spmap


@check("cayley-roundtrip", 1e-9, "spmap")
def _sp_round(rng, n):
    err = 0.0
    for d in _forms(rng, n):
        A = smp.random_sym_pp(rng, d)
        err = max(err, mc.fro_rel(from_symplectic(to_symplectic(A)), A))
    return err


@check("sp-polar-residual", 1e-9, "spmap")
def _sp_polar(rng, n):
    err = 0.0
    for d in _forms(rng, n):
        R = to_symplectic(smp.random_sym_pp(rng, d))
        T, S = sp_polar(R)
        err = max(err, mc.fro_rel(T @ S, R), float(np.max(np.abs(T.imag))) / max(1.0, np.linalg.norm(T)))
    return err


# ------------------------------------------------------------ gaussops vs oracle


def _oracle(G, N):
    return numeric_functionals(hermite_matrix(G, N))


@check("trace-vs-oracle", 1e-7, "gaussops")
def _trace(rng, n):
    err = 0.0
    for d in _forms(rng, max(2, n // 4)):
        G = GaussianOp(1.0, smp.random_sym_pp(rng, d))
        ref = _oracle(G, 60 if d == 1 else 30)["trace"]
        err = max(err, abs(trace(G) - ref) / abs(ref))
    return err


@check("trace-norm-vs-oracle", 1e-6, "gaussops")
def _tn(rng, n):
    err = 0.0
    for d in _forms(rng, max(2, n // 4)):
        G = GaussianOp(1.0, smp.random_sym_pp(rng, d))
        ref = _oracle(G, 60 if d == 1 else 30)["trace_norm"]
        err = max(err, abs(trace_norm(G) - ref) / ref)
    return err


@check("op-norm-vs-oracle", 1e-6, "gaussops")
def _opn(rng, n):
    err = 0.0
    for d in _forms(rng, max(2, n // 4)):
        G = GaussianOp(1.0, smp.random_sym_pp(rng, d))
        ref = _oracle(G, 60 if d == 1 else 30)["op_norm"]
        err = max(err, abs(op_norm(G) - ref) / ref)
    return err


@check("compose-vs-oracle", 1e-6, "gaussops")
def _compose(rng, n):
    err = 0.0
    for _ in range(max(2, n // 4)):
        G1 = GaussianOp(1.0, smp.random_sym_pp(rng, 1))
        G2 = GaussianOp(1.0, smp.random_sym_pp(rng, 1))
        P, _ = compose(G1, G2)
        lhs = hermite_matrix(P, 60).entries
        rhs = hermite_matrix(G1, 60).entries @ hermite_matrix(G2, 60).entries
        err = max(err, mc.fro_rel(lhs, rhs))
    return err


@check("polar-product", 1e-6, "gaussops")
def _polar(rng, n):
    err = 0.0
    for _ in range(max(2, n // 4)):
        G = GaussianOp(1.0, smp.random_sym_pp(rng, 1))
        U, P = polar(G)
        err = max(err, mc.fro_rel((U @ P).form, G.form), abs(compose(U, P)[0].scale - G.scale) / abs(G.scale))
    return err


@check("williamson-three-regimes", 1e-8, "gaussops")
def _regimes(rng, n):
    err = 0.0
    for lam in (0.5, 1.0, 2.0):
        G = GaussianOp(1.0, lam * np.eye(2))
        ev = np.sort(np.linalg.eigvalsh(hermite_matrix(G, 60).entries.real))[::-1]
        k = np.arange(60)
        if lam < 1:
            r = (1 - lam) / (1 + lam)
            want = np.sort(r ** k / (1 + lam))[::-1]
        elif lam == 1:
            want = np.r_[0.5, np.zeros(59)]
        else:
            want = np.sort((-1.0) ** k * 3.0 ** (-k - 1))[::-1]
        err = max(err, float(np.max(np.abs(ev - want))))
    return err


# ------------------------------------------------------------ hamflow


@check("semigroup-law", 1e-8, "hamflow")
def _semigroup(rng, n):
    err = 0.0
    H = np.diag([1.0, 1.0]) + 0.2 * smp.random_real_sym(rng, 2)
    for _ in range(max(2, n // 4)):
        z1 = complex(rng.uniform(0.1, 0.6), rng.uniform(-0.3, 0.3))
        z2 = complex(rng.uniform(0.1, 0.6), rng.uniform(-0.3, 0.3))
        P, _ = compose(propagator(H, z1), propagator(H, z2))
        Q = propagator(H, z1 + z2)
        err = max(err, mc.fro_rel(P.form, Q.form), abs(P.scale - Q.scale) / abs(Q.scale))
    return err


@check("davies-routes-agree", 0.0, "hamflow")
def _davies(rng, n):
    psi = float(rng.choice([0.0, np.pi / 6, np.pi / 4, np.pi / 3]))
    zs = rng.uniform(0.05, 3, 60) + 1j * rng.uniform(-3, 3, 60)
    closed = np.array([davies_member(psi, z) for z in zs])
    matrix = domain_labels(davies_hamiltonian(psi), zs)
    band = np.array([abs(min(z.real, np.pi / 2 - abs(np.angle(np.tanh(z))) - psi)) < 1e-6 for z in zs])
    bad = (closed != matrix) & ~band
    return float(np.mean(bad))


@check("davies-psi0-halfplane", 0.0, "hamflow")
def _davies0(rng, n):
    zs = rng.uniform(0.01, 3, 100) + 1j * rng.uniform(-3, 3, 100)
    return float(np.mean([davies_member(0.0, z) != INTERIOR for z in zs]))


# ------------------------------------------------------------ cordes, io


@check("cordes-closed-bound", 1e-12, "cordes")
def _cordes(rng, n):
    return abs(closed_bound(CordesParams(1, 1.0)) - (1 + np.pi) / (2 * np.pi))


@check("json-roundtrip-bitexact", 0.0, "io")
def _io(rng, n):
    bad = 0
    for d in _forms(rng, n):
        G = GaussianOp(complex(rng.standard_normal(), rng.standard_normal()), smp.random_sym_pp(rng, d))
        H = parse_gaussian(json.loads(json.dumps(gaussian_doc(G))))
        bad += int(not (H.scale == G.scale and np.array_equal(H.form, G.form)))
    return float(bad)


# ------------------------------------------------------------ runner


def run_checks(seed=0, samples=20, only=None):
    """Run the suite; ``only`` is an iterable of check names or module names."""
    results = []
    for name, (fn, tol, module) in CHECKS.items():
        if only and name not in only and module not in only:
            continue
        rng = np.random.default_rng([seed, len(results)])
        t0 = time.perf_counter()
        try:
            err = float(fn(rng, samples))
        except Exception as exc:  # a crash is a failure with unbounded error
            err = float("inf")
            name = f"{name} ({type(exc).__name__}: {exc})"
        dt = time.perf_counter() - t0
        ok = bool(err <= tol)
        results.append(CheckResult(name, module, err, tol, tol - err, ok, dt))
    return results


def report(results):
    return {
        "passed": all(r.passed for r in results),
        "n_checks": len(results),
        "n_failed": sum(not r.passed for r in results),
        "checks": [asdict(r) for r in results],
    }
