import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscsemigroup import gaussops as go
from oscsemigroup import matcore as mc
from oscsemigroup import sampling as smp
from oscsemigroup.errors import DegenerateF, DegenerateForm, PolarUndefined, QuantumDegenerate
from oscsemigroup.oracle import hermite_matrix, is_unitary_block, numeric_functionals, symbol_roundtrip
from oscsemigroup.symclass import classify_sym

from strategies import seeds, sym_pp

G = go.GaussianOp


def oracle(Gop, N=None):
    N = N or (60 if Gop.d == 1 else 30)
    return numeric_functionals(hermite_matrix(Gop, N))


def H(Gop, N=None):
    return hermite_matrix(Gop, N or (60 if Gop.d == 1 else 30)).entries


# ------------------------------------------------------------ construction


def test_form_is_symmetrized_and_frozen():
    g = G(1, [[1.0, 0.2], [0.0, 1.0]])
    assert np.array_equal(g.form, g.form.T)
    with pytest.raises(ValueError):
        g.form[0, 0] = 2.0


def test_scalar_multiplication():
    g = G(2.0, 0.5 * np.eye(2))
    assert (3 * g).scale == 6 and (g * 3).scale == 6


# ------------------------------------------------------------ compose


def test_compose_isotropic_half_against_oracle():
    g = G(1.0, 0.5 * np.eye(2))
    P, certain = go.compose(g, g)
    assert certain
    assert mc.fro_rel(H(P), H(g) @ H(g)) <= 1e-8


@given(sym_pp())
def test_compose_with_identity_limit(A):
    g = G(complex(0.3, 1.2), A)
    d = g.d
    assert go.compose(g, go.identity_op(d))[0].allclose(g)
    assert go.compose(go.identity_op(d), g)[0].allclose(g)


@settings(max_examples=25)
@given(seeds, st.sampled_from([1, 1, 1, 2]))
def test_product_formula_homomorphism(seed, d):
    r = np.random.default_rng(seed)
    g1 = G(complex(*r.standard_normal(2)), smp.random_sym_pp(r, d))
    g2 = G(complex(*r.standard_normal(2)), smp.random_sym_pp(r, d))
    P, _ = go.compose(g1, g2)
    ref = H(g1) @ H(g2)
    assert np.linalg.norm(H(P) - ref) <= 1e-6 * np.linalg.norm(ref)


def test_sign_uncertain_branch_is_repaired():
    # strongly twisted forms push arg det(1 + AθBθ) towards ±π
    found = 0
    r = np.random.default_rng(11)
    for _ in range(400):
        A = smp.random_sym_pp(r, 1, lo=0.05, hi=0.4, imag=3.0)
        B = smp.random_sym_pp(r, 1, lo=0.05, hi=0.4, imag=3.0)
        P, certain = go.compose(G(1, A), G(1, B))
        if certain:
            continue
        found += 1
        ref = go.kernel_vacuum(go.compose_kernels(go.gaussian_kernel(G(1, A)), go.gaussian_kernel(G(1, B))))
        assert go.vacuum_expectation(P) == pytest.approx(ref, rel=1e-8)
    assert found > 0


@given(sym_pp())
def test_vacuum_symbol_and_kernel_agree(A):
    g = G(complex(1.0, -0.5), A)
    assert go.vacuum_expectation(g) == pytest.approx(go.vacuum_expectation_symbol(g), rel=1e-10)


# ------------------------------------------------------------ adjoint, positivity


def test_adjoint_examples():
    g = G(2.0, 0.4 * np.eye(2))
    assert go.adjoint(g).allclose(g)
    h = G(1j, 1j * np.eye(2))
    a = go.adjoint(h)
    assert a.scale == -1j and np.array_equal(a.form, np.conj(h.form))


@given(sym_pp())
def test_adjoint_involution_and_oracle(A):
    g = G(complex(0.5, 0.7), A)
    assert go.adjoint(go.adjoint(g)).allclose(g)
    if g.d == 1:
        assert mc.fro_rel(H(go.adjoint(g)), H(g).conj().T) < 1e-10


@pytest.mark.parametrize(
    "scale, lam, expected",
    [(1.0, 0.5, True), (1.0, 2.0, False), (-1.0, 0.5, False)],
)
def test_is_positive_examples(scale, lam, expected):
    assert go.is_positive(G(scale, lam * np.eye(2))) is expected


@settings(max_examples=60)
@given(seeds)
def test_positivity_criterion_matches_oracle(seed):
    from oscsemigroup.oracle import positive_by_oracle

    r = np.random.default_rng(seed)
    A = smp.williamson_form(r, [r.uniform(0.3, 1.6)])
    g = G(1.0, A)
    lam = go.williamson_spectrum(A).lambdas[0]
    if abs(lam - 1) < 1e-3:
        return
    assert go.is_positive(g) == positive_by_oracle(g, 60)


# ------------------------------------------------------------ trace


@pytest.mark.parametrize(
    "d, lam, expected",
    [(1, 0.5, 1.0), (2, 1.0, 0.25), (1, 2.0, 0.25)],
)
def test_trace_examples(d, lam, expected):
    assert go.trace(G(1.0, lam * np.eye(2 * d))) == pytest.approx(expected, rel=1e-14)


@settings(max_examples=15)
@given(sym_pp(d=1) | sym_pp(d=2))
def test_trace_against_oracle(A):
    g = G(1.0, A)
    ref = oracle(g)["trace"]
    assert abs(go.trace(g) - ref) <= 1e-7 * abs(ref)


def test_trace_needs_decay():
    with pytest.raises(DegenerateForm):
        go.trace(G(1.0, 1j * np.eye(2)))


# ------------------------------------------------------------ Williamson, |G|


@pytest.mark.parametrize("lam", [0.2, 1.0, 3.0])
def test_williamson_isotropic(lam):
    assert go.williamson_spectrum(lam * np.eye(2)).lambdas == pytest.approx((lam,))


def test_williamson_diagonal():
    assert go.williamson_spectrum(np.diag([0.5, 8.0])).lambdas == pytest.approx((2.0,))


@given(seeds)
def test_williamson_recovers_congruence(seed):
    r = np.random.default_rng(seed)
    lams = np.sort(r.uniform(0.1, 4, 2))
    assert go.williamson_spectrum(smp.williamson_form(r, lams)).lambdas == pytest.approx(tuple(lams), abs=1e-9)


def test_abs_form_of_positive_is_itself():
    A = np.array([[0.5, 0.1], [0.1, 0.4]])
    assert np.allclose(go.abs_form(A), A, atol=1e-12)


def test_abs_form_inverts_large_isotropic():
    assert np.allclose(go.abs_form(2 * np.eye(2)), 0.5 * np.eye(2), atol=1e-14)


def test_abs_op_third_regime_oracle():
    P = go.abs_op(G(1.0, 2 * np.eye(2)))
    ev = np.sort(np.linalg.eigvalsh(H(P)))[::-1][:20]
    assert np.allclose(ev, 3.0 ** -(np.arange(20) + 1.0), atol=1e-12)


def test_abs_op_of_positive_is_itself():
    g = G(0.7, 0.4 * np.eye(2))
    assert go.abs_op(g).allclose(g)


@settings(max_examples=20)
@given(seeds)
def test_abs_eigenvalues_are_absolute_eigenvalues(seed):
    r = np.random.default_rng(seed)
    g = G(1.0, smp.random_real_pos(r, 1, 0.3, 2.5))
    ev = np.sort(np.abs(np.linalg.eigvalsh(H(g))))[::-1][:25]
    ev_abs = np.sort(np.linalg.eigvalsh(H(go.abs_op(g))))[::-1][:25]
    assert np.allclose(ev_abs, ev, atol=1e-6 * ev[0])


# ------------------------------------------------------------ polar


def test_polar_of_positive():
    g = G(1.0, 0.4 * np.eye(2))
    U, P = go.polar(g)
    assert np.allclose(U.form, 0, atol=1e-12)
    assert U.scale == pytest.approx(1.0)
    assert go.metaplectic_sign(U) == 1
    assert P.allclose(g)


def test_polar_small_twist():
    g = G(1.0, np.exp(0.1j) * 0.5 * np.eye(2))
    U, P = go.polar(g)
    C = U.form / 1j
    assert np.max(np.abs(C.imag)) <= 1e-9
    assert is_unitary_block(hermite_matrix(U, 80)) <= 1e-6
    assert go.is_positive(P)
    assert mc.fro_rel(H(U) @ H(P), H(g)) <= 1e-6


@settings(max_examples=15)
@given(sym_pp(d=1))
def test_polar_factors(A):
    g = G(complex(0.3, -1.1), A)
    U, P = go.polar(g)
    assert go.is_positive(P)
    assert np.max(np.abs((U.form / 1j).imag)) <= 1e-9 * max(1.0, np.linalg.norm(U.form))
    assert is_unitary_block(hermite_matrix(U, 120)) <= 1e-6
    assert mc.fro_rel(H(U) @ H(P), H(g)) <= 1e-6 * max(1.0, np.linalg.norm(H(g)))


def test_polar_undefined_raises():
    # A ⋄ (-B) undefined: A = B real in the third regime (B = A^{-1}-type inversion)
    A = np.diag([2.0, 2.0]) + 1j * 0.0
    g = G(1.0, A)
    B = go.abs_form(A)
    from oscsemigroup.diamond import diamond_defined

    if diamond_defined(A, -B)[0]:
        pytest.skip("sample composable")
    with pytest.raises(PolarUndefined):
        go.polar(g)


# ------------------------------------------------------------ norms


@pytest.mark.parametrize(
    "lam, expected",
    [(0.5, 1.0), (2.0, 0.5), (0.25, 2.0), (5.0, 0.5)],
)
def test_trace_norm_isotropic(lam, expected):
    assert go.trace_norm(G(1.0, lam * np.eye(2))) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("alpha, beta", [(0.5, 0.5), (0.2, 3.0), (0.1, 0.4)])
def test_trace_norm_diagonal(alpha, beta):
    assert go.trace_norm(G(1.0, np.diag([alpha, beta]))) == pytest.approx(1 / (2 * np.sqrt(alpha * beta)))


def test_trace_norm_degenerate_raises():
    with pytest.raises(QuantumDegenerate):
        go.trace_norm(G(1.0, np.eye(2)))
    assert go.trace_norm(G(1.0, np.eye(2)), strict=False) == pytest.approx(0.5)


@settings(max_examples=15)
@given(sym_pp(d=1) | sym_pp(d=2))
def test_trace_norm_against_oracle(A):
    g = G(1.0, A)
    assert go.trace_norm(g) == pytest.approx(oracle(g)["trace_norm"], rel=1e-6)


def test_trace_norm_display_ratio():
    rep = go.trace_norm_report(G(1.0, 0.5 * np.eye(2)))
    assert rep["value"] / rep["display"] == pytest.approx(np.sqrt(2), rel=1e-12)


@pytest.mark.parametrize(
    "lam, expected",
    [(3.0, 0.25), (1.0, 0.5), (0.5, 2 / 3)],
)
def test_op_norm_isotropic(lam, expected):
    assert go.op_norm(G(1.0, lam * np.eye(2))) == pytest.approx(expected, rel=1e-14)
    assert go.op_norm_real_display(lam * np.eye(2)) == pytest.approx(expected, rel=1e-12)


def test_op_norm_two_modes():
    r = np.random.default_rng(5)
    B = smp.williamson_form(r, [1.0, 2.0])
    g = G(1.0, B)
    assert go.op_norm(g) == pytest.approx(1 / 6, rel=1e-10)
    assert oracle(g, 40)["op_norm"] == pytest.approx(1 / 6, rel=1e-6)


@settings(max_examples=15)
@given(sym_pp(d=1) | sym_pp(d=2))
def test_op_norm_against_oracle(A):
    g = G(complex(0.2, 0.9), A)
    assert go.op_norm(g) == pytest.approx(oracle(g)["op_norm"], rel=1e-6)


@given(sym_pp())
def test_op_norm_normalized_display_matches(A):
    if not classify_sym(A).qnd:
        return
    g = go.NormalizedGaussian(A).to_op()
    assert go.op_norm_normalized_display(A) == pytest.approx(go.op_norm(g), rel=1e-8)


@given(sym_pp())
def test_positive_has_positive_norm(A):
    P = go.abs_op(G(1.0, A))
    v = go.op_norm(P)
    assert isinstance(v, float) and v > 0


# ------------------------------------------------------------ normalization


@given(sym_pp())
def test_normalize_recovers_sign(A):
    for eps in (1, -1):
        g = go.NormalizedGaussian(A, eps).to_op()
        ng, res = go.normalize(g)
        assert ng.sign == eps
        assert res == pytest.approx(1.0)


@given(sym_pp(), sym_pp())
def test_normalized_elements_compose_to_normalized(A, B):
    if A.shape != B.shape:
        return
    g1 = go.NormalizedGaussian(A).to_op()
    g2 = go.NormalizedGaussian(B).to_op()
    P, _ = go.compose(g1, g2)
    _, res = go.normalize(P)
    assert abs(res) == pytest.approx(1.0, abs=1e-9)
    assert res == pytest.approx(1.0, abs=1e-9) or res == pytest.approx(-1.0, abs=1e-9)


@given(sym_pp(), sym_pp())
def test_determinant_identity(A, B):
    if A.shape != B.shape:
        return
    from oscsemigroup.diamond import diamond

    d = mc.half_dim(A)
    th = mc.theta(d)
    one = np.eye(2 * d)
    lhs = mc.det(one + diamond(A, B) @ th) * mc.det(one + A @ th @ B @ th)
    rhs = mc.det(one + A @ th) * mc.det(one + B @ th)
    assert abs(lhs - rhs) <= 1e-9 * abs(rhs)


# ------------------------------------------------------------ degenerate forms


@pytest.mark.parametrize("a, b", [(0.5, 0.5), (0.3, 1.7), (1 + 0.5j, 0.8)])
def test_degenerate_1dof(a, b):
    g = go.degenerate_1dof(a, b)
    assert mc.det(g.form) == pytest.approx(1.0, abs=1e-10)
    sv = oracle(g, 40)["singular_values"]
    assert sv[1] <= 1e-6 * sv[0]
    with pytest.raises(QuantumDegenerate):
        go.trace_norm(g)


def test_degenerate_symmetric_coefficients_diagonal():
    g = go.degenerate_1dof(0.7, 0.7)
    assert g.form[0, 1] == 0


def test_degenerate_kernel_is_product():
    g = go.degenerate_1dof(0.4, 0.9, scale=2.0)
    x = np.linspace(-2, 2, 7)[:, None]
    K = go.gaussian_kernel(g)(np.repeat(x, 7, 0), np.tile(x, (7, 1))).reshape(7, 7)
    want = 2.0 * np.exp(-0.4 * x**2 - 0.9 * x.T**2)
    assert np.allclose(K, want, atol=1e-13)


# ------------------------------------------------------------ kernel


@given(sym_pp(d=1))
def test_kernel_round_trips_to_symbol(A):
    pts = np.stack(np.meshgrid(np.linspace(-1.5, 1.5, 4), np.linspace(-1.5, 1.5, 4)), -1).reshape(-1, 2)
    assert symbol_roundtrip(G(1.0, A), pts) <= 1e-8


def test_kernel_degenerate_momentum_block():
    with pytest.raises(DegenerateF):
        go.gaussian_kernel(G(1.0, np.diag([1.0, 0.0])))


def test_kernel_blocks_are_views_of_quad():
    K = go.gaussian_kernel(G(1.0, 0.5 * np.eye(2)))
    assert K.quad_xx.shape == (1, 1)
    assert K.quad_xy[0, 0] == pytest.approx(K.quad[0, 1])
