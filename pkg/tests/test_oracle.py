import numpy as np
import pytest
from hypothesis import given, settings

from oscsemigroup import gaussops as go
from oscsemigroup import matcore as mc
from oscsemigroup import sampling as smp
from oscsemigroup.errors import NoConvergence
from oscsemigroup.oracle import (
    QuadratureSpec,
    compose_numeric,
    converged_functional,
    gauss_hermite,
    hermite_functions,
    hermite_matrix,
    numeric_functionals,
    positive_by_oracle,
    star_integral,
    star_integral_check,
    symbol_roundtrip,
)

from strategies import seeds, sym_pp, sym_pp_pair

G = go.GaussianOp
N = 60
k = np.arange(N)


def test_hermite_functions_orthonormal():
    t, W = gauss_hermite(200)
    Phi = hermite_functions(80, t)
    assert np.allclose((Phi * W) @ Phi.T, np.eye(80), atol=1e-12)


def test_hermite_functions_ground_state():
    x = np.linspace(-3, 3, 11)
    assert np.allclose(hermite_functions(1, x)[0], np.pi ** -0.25 * np.exp(-x * x / 2))


@pytest.mark.parametrize(
    "lam, diag",
    [
        (0.5, (1 - 0.25) ** -0.5 * (1 / 3) ** (k + 0.5)),
        (1.0, np.r_[0.5, np.zeros(N - 1)]),
        (2.0, (-1.0) ** k * 3.0 ** (-k - 1)),
    ],
    ids=["thermal", "projection", "alternating"],
)
def test_three_regimes(lam, diag):
    E = hermite_matrix(G(1.0, lam * np.eye(2)), N).entries
    assert np.max(np.abs(E - np.diag(diag))) <= 1e-8


def test_functionals_thermal():
    F = numeric_functionals(hermite_matrix(G(1.0, 0.5 * np.eye(2)), N))
    assert F["trace"] == pytest.approx(1.0, abs=1e-8)
    assert F["trace_norm"] == pytest.approx(1.0, abs=1e-8)
    assert F["op_norm"] == pytest.approx(2 / 3, abs=1e-8)


def test_functionals_alternating():
    F = numeric_functionals(hermite_matrix(G(1.0, 2 * np.eye(2)), N), eigenvalues=True)
    assert F["trace"] == pytest.approx(0.25, abs=1e-12)
    assert F["trace_norm"] == pytest.approx(0.5, abs=1e-12)
    assert F["op_norm"] == pytest.approx(1 / 3, abs=1e-12)
    assert np.min(F["eigenvalues"].real) == pytest.approx(-1 / 9, abs=1e-12)


def test_identity_limit_matrix():
    g = G(0.5, 0.4 * np.eye(2))
    M = compose_numeric(g, go.identity_op(1), N)
    assert np.allclose(M.entries, hermite_matrix(g, N).entries)


def test_compose_numeric_isotropic():
    g = G(1.0, 0.5 * np.eye(2))
    M = compose_numeric(g, g, N)
    assert mc.fro_rel(M.entries, hermite_matrix(go.compose(g, g)[0], N).entries) <= 1e-8


@settings(max_examples=20)
@given(sym_pp_pair(d=1))
def test_compose_numeric_random(pair):
    g1, g2 = G(1.0, pair[0]), G(1.0, pair[1])
    M = compose_numeric(g1, g2, N)
    ref = hermite_matrix(go.compose(g1, g2)[0], N).entries
    assert np.linalg.norm(M.entries - ref) <= 1e-6 * np.linalg.norm(ref)


@settings(max_examples=20)
@given(sym_pp(d=1))
def test_quadrature_matches_generating(A):
    g = G(complex(0.4, 0.3), A)
    Eq = hermite_matrix(g, 40, method="quadrature").entries
    Eg = hermite_matrix(g, 40, method="generating").entries
    assert np.max(np.abs(Eq - Eg)) <= 1e-10 * np.max(np.abs(Eg))


def test_quadrature_matches_generating_two_modes():
    r = np.random.default_rng(2)
    g = G(1.0, smp.random_sym_pp(r, 2))
    Eq = hermite_matrix(g, 12, method="quadrature").entries
    Eg = hermite_matrix(g, 12, method="generating").entries
    assert np.max(np.abs(Eq - Eg)) <= 1e-7 * np.max(np.abs(Eg))


@settings(max_examples=10)
@given(sym_pp(d=1))
def test_quadrature_node_doubling(A):
    g = G(1.0, A)
    q = QuadratureSpec(3 * 40 + 20)
    E1 = hermite_matrix(g, 40, quad=q, method="quadrature").entries
    E2 = hermite_matrix(g, 40, quad=QuadratureSpec(2 * q.nodes), method="quadrature").entries
    assert np.max(np.abs(E1 - E2)) < 1e-10


def test_chirp_kernel_needs_generating_method():
    # a metaplectic (unitary) kernel does not decay; the generating method keeps it unitary
    U, _ = go.polar(G(1.0, np.exp(0.4j) * 0.5 * np.eye(2)))
    E = hermite_matrix(U, 120).entries
    lead = 15
    assert np.max(np.abs((E.conj().T @ E)[:lead, :lead] - np.eye(lead))) < 1e-8


@pytest.mark.parametrize("lo", [0.1, 0.5, 1.0])
def test_convergence_protocol(lo):
    r = np.random.default_rng(int(lo * 10))
    g = G(1.0, smp.random_sym_pp(r, 1, lo=lo, hi=5.0, imag=0.3))
    vals = [numeric_functionals(hermite_matrix(g, n))["trace_norm"] for n in (20, 40, 80, 160)]
    deltas = np.abs(np.diff(vals))
    assert deltas[-1] < 1e-8
    assert np.all(np.diff(deltas) <= 1e-12) or deltas[0] < 1e-12
    val, n_used, delta = converged_functional(g, lambda F: F["trace_norm"], tol=1e-8)
    assert delta < 1e-8 and n_used <= 160
    assert val == pytest.approx(go.trace_norm(g), rel=1e-7)


def test_no_convergence_reported():
    g = G(1.0, np.diag([1e-4, 1e-4]))
    with pytest.raises(NoConvergence):
        converged_functional(g, lambda F: F["trace_norm"], tol=1e-10, N_max=80)


@settings(max_examples=30)
@given(seeds)
def test_positive_forms_have_nonnegative_oracle_spectrum(seed):
    r = np.random.default_rng(seed)
    A = smp.williamson_form(r, [r.uniform(0.3, 0.99)])
    g = G(1.0, A)
    assert go.is_positive(g)
    E = hermite_matrix(g, N).entries
    lam = np.linalg.eigvalsh(0.5 * (E + E.conj().T))
    assert lam[0] >= -1e-7 * go.op_norm(g)
    assert positive_by_oracle(g, N)


GRID = np.stack(np.meshgrid(np.linspace(-2, 2, 5), np.linspace(-2, 2, 5)), -1).reshape(-1, 2)


def test_symbol_roundtrip_half():
    assert symbol_roundtrip(G(1.0, 0.5 * np.eye(2)), GRID) <= 1e-8


def test_symbol_roundtrip_zero_scale():
    assert symbol_roundtrip(G(0.0, 0.5 * np.eye(2)), GRID) == 0.0


def test_star_with_unit():
    A = np.array([[0.7, 0.1], [0.1, 0.4]])
    lhs = star_integral(A, np.zeros((2, 2)), GRID)
    assert np.array_equal(lhs, np.exp(-np.einsum("ki,ij,kj->k", GRID, A, GRID)))


def test_star_isotropic_pair():
    assert star_integral_check(0.5 * np.eye(2), 0.5 * np.eye(2), GRID) <= 1e-9


@settings(max_examples=10)
@given(sym_pp_pair(d=1))
def test_star_random_pairs(pair):
    assert star_integral_check(*pair, GRID) <= 1e-7
