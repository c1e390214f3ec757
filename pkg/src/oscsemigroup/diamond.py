"""The ⋄-product on complex symmetric 2d×2d matrices.

A ⋄ B is the exponent of the Weyl symbol of Op(e^{-A}) Op(e^{-B}), up to a
scalar. It is defined iff 1 + AθBθ is invertible, is associative where
defined, and to first order equals A + B.

Evaluation uses one of four equivalent products of inverses, picking the
variant whose inverted factors are best conditioned. The bordered
4d×4d inverse and the Cayley route are kept as independent cross-checks.
"""

import numpy as np

from . import matcore as mc
from .errors import NotComposable, Singular, SingularShift
from .symclass import DEFAULT_TOL

ROUTES = ("pro1", "pro2", "pro3", "pro4")


def _parts(A, B):
    A = mc.as_sym(A)
    B = mc.as_sym(B)
    if A.shape != B.shape:
        raise ValueError("forms must have the same dimension")
    d = mc.half_dim(A)
    th = mc.theta(d)
    return A, B, th, np.eye(2 * d)


def diamond_witness(A, B):
    """|det(1 + AθBθ)| and the scale it is compared against."""
    A, B, th, one = _parts(A, B)
    d = mc.half_dim(A)
    w = abs(mc.det(one + A @ th @ B @ th))
    scale = max(1.0, (float(np.linalg.norm(A)) * float(np.linalg.norm(B))) ** (2 * d))
    return w, scale


def diamond_defined(A, B, tol=DEFAULT_TOL):
    """Return ``(defined, witness)`` with witness = |det(1 + AθBθ)|."""
    w, scale = diamond_witness(A, B)
    return w > tol * scale, w


def _route_factors(At, Bt, one):
    return {
        "pro1": (one + At, one + At @ Bt),
        "pro2": (one + At @ Bt, one + Bt),
        "pro3": (one + Bt @ At, one - At),
        "pro4": (one - Bt, one + Bt @ At),
    }


def _eval_route(route, At, Bt, one, th):
    S = At + Bt
    solve = np.linalg.solve
    if route == "pro1":
        # (1+Aθ)^{-1} S (1+AθBθ)^{-1} (1+Aθ) θ
        return solve(one + At, S) @ solve(one + At @ Bt, (one + At) @ th)
    if route == "pro2":
        # (1+Bθ) (1+AθBθ)^{-1} S (1+Bθ)^{-1} θ
        return (one + Bt) @ solve(one + At @ Bt, S) @ solve(one + Bt, th)
    if route == "pro3":
        # (1-Aθ) (1+BθAθ)^{-1} S (1-Aθ)^{-1} θ
        return (one - At) @ solve(one + Bt @ At, S) @ solve(one - At, th)
    if route == "pro4":
        # (1-Bθ)^{-1} S (1+BθAθ)^{-1} (1-Bθ) θ
        return solve(one - Bt, S) @ solve(one + Bt @ At, (one - Bt) @ th)
    raise ValueError(f"unknown route {route!r}")


def select_route(A, B):
    """Variant whose worst inverted factor has the smallest condition number."""
    A, B, th, one = _parts(A, B)
    facs = _route_factors(A @ th, B @ th, one)
    conds = {r: max(mc.condition_estimate(F) for F in fs) for r, fs in facs.items()}
    best = min(conds, key=conds.get)
    return best, conds[best]


def diamond_route(A, B, route):
    """Evaluate A ⋄ B by one named formula (``pro1`` … ``pro4``, ``block``, ``cayley``)."""
    A, B, th, one = _parts(A, B)
    if route == "block":
        return diamond_block(A, B)
    if route == "cayley":
        return diamond_cayley(A, B)
    out = _eval_route(route, A @ th, B @ th, one, th)
    return mc.as_sym(out)


def diamond_block(A, B):
    """A ⋄ B from the bordered inverse of [[θAθ, -θ], [θ, θBθ]]."""
    A, B, th, one = _parts(A, B)
    try:
        X11, X12, X21, X22 = mc.block2_inverse(th @ A @ th, -th, th, th @ B @ th)
    except Singular as exc:
        raise NotComposable(str(exc)) from exc
    # [-1; 1]ᵀ X [-1; 1]
    return mc.as_sym(X11 - X12 - X21 + X22)


def diamond_cayley(A, B):
    """A ⋄ B = c(c(Aθ) c(Bθ)) θ; needs A, B and the result quantum non-degenerate."""
    A, B, th, one = _parts(A, B)
    try:
        R = mc.cayley(A @ th) @ mc.cayley(B @ th)
        return mc.as_sym(mc.cayley(R) @ th)
    except SingularShift as exc:
        raise NotComposable(str(exc)) from exc


def diamond(A, B, tol=DEFAULT_TOL, route=None):
    """The ⋄-product. Raises :class:`NotComposable` when 1 + AθBθ is singular."""
    ok, w = diamond_defined(A, B, tol)
    if not ok:
        raise NotComposable(f"|det(1 + AθBθ)| = {w:.3g}")
    A, B, th, one = _parts(A, B)
    if route is None:
        route, k = select_route(A, B)
        if k > mc.KAPPA_MAX:
            return diamond_block(A, B)
    return diamond_route(A, B, route)


def diamond_chain(*forms, tol=DEFAULT_TOL):
    out = forms[0]
    for F in forms[1:]:
        out = diamond(out, F, tol=tol)
    return out

