"""Command-line interface: ``oscsemi <command> [options]``.

Inputs are JSON documents given as a path, ``-`` for stdin, or an inline
JSON string. Output is one JSON document on stdout (CSV for region
commands with ``--format csv``). Exit codes: 0 success, 1 usage error,
2 domain error, 3 numerical failure.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import gaussops as go
from . import hamflow as hf
from . import io as oio
from . import matcore as mc
from .cordes import CordesParams, closed_bound, cv_check_gaussian, mixture_bound, numeric_constant, tight_bound
from .diamond import diamond, diamond_defined
from .errors import DomainError, NumericalError, OscError
from .oracle import QuadratureSpec, gauss_hermite, hermite_matrix, numeric_functionals
from .spmap import from_symplectic, sp_polar, to_symplectic
from .symclass import DEFAULT_TOL, classify_sp, classify_sp_alg, classify_sym


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def default_tol():
    v = os.environ.get("OSC_DEFAULT_TOL")
    if v is None:
        return DEFAULT_TOL
    try:
        return float(v)
    except ValueError:
        raise UsageError(f"OSC_DEFAULT_TOL is not a number: {v!r}")


def _load_form(src):
    return mc.as_sym(oio.parse_matrix(oio.load_source(src)))


def _load_matrix(src):
    return mc.as_matrix(oio.parse_matrix(oio.load_source(src)))


def _load_op(src):
    return oio.parse_gaussian(oio.load_source(src))


def _floats(s, n):
    try:
        v = [float(t) for t in s.split(",")]
    except ValueError:
        raise UsageError(f"expected {n} comma-separated numbers, got {s!r}")
    if len(v) != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {s!r}")
    return v


def _quad(args, d):
    if args.quad_nodes is None:
        return None
    nodes = gauss_hermite(args.quad_nodes)[0]
    return QuadratureSpec(nodes)


def _oracle_block(args, G, key):
    if not args.oracle:
        return None
    N = args.trunc_N or (60 if G.d == 1 else 30)
    F = numeric_functionals(hermite_matrix(G, N, _quad(args, G.d)))
    return {"N": N, "value": F[key]}


# ------------------------------------------------------------ commands


def cmd_classify(args):
    M = _load_matrix(args.matrix)
    kind = args.kind
    if kind == "sym":
        rep = classify_sym(M, args.tol)
    elif kind == "sp":
        rep = classify_sp(M, args.tol)
    else:
        rep = classify_sp_alg(M, args.tol)
    return {"kind": kind, **rep.to_dict()}


def cmd_diamond(args):
    A, B = _load_form(args.a), _load_form(args.b)
    ok, w = diamond_defined(A, B, args.tol)
    C = diamond(A, B, tol=args.tol)
    return {"form": C, "witness": w}


def cmd_compose(args):
    G1, G2 = _load_op(args.g1), _load_op(args.g2)
    P, certain = go.compose(G1, G2, args.tol)
    return {"op": P, "sign_certain": certain}


def cmd_kernel(args):
    K = go.gaussian_kernel(_load_op(args.form), args.tol)
    return {"kernel": K}


def cmd_trace(args):
    G = _load_op(args.form)
    out = {"value": go.trace(G, args.tol)}
    orc = _oracle_block(args, G, "trace")
    if orc:
        out["oracle"] = orc
    return out


def cmd_trace_norm(args):
    G = _load_op(args.form)
    out = {"value": go.trace_norm(G, args.tol)}
    try:
        out["display"] = abs(G.scale) * go.trace_norm_display(G.form)
    except OscError:
        pass
    orc = _oracle_block(args, G, "trace_norm")
    if orc:
        out["oracle"] = orc
    return out


def cmd_op_norm(args):
    G = _load_op(args.form)
    out = {"value": go.op_norm(G, args.tol)}
    orc = _oracle_block(args, G, "op_norm")
    if orc:
        out["oracle"] = orc
    return out


def cmd_abs(args):
    return {"op": go.abs_op(_load_op(args.form), args.tol)}


def cmd_polar(args):
    U, P = go.polar(_load_op(args.form), args.tol)
    return {"unitary": U, "positive": P, "metaplectic_sign": go.metaplectic_sign(U)}


def cmd_sp_to(args):
    return {"matrix": to_symplectic(_load_form(args.matrix), args.tol)}


def cmd_sp_from(args):
    return {"form": from_symplectic(_load_matrix(args.matrix))}


def cmd_sp_polar(args):
    T, S, q = sp_polar(_load_matrix(args.matrix), args.tol, return_witness=True)
    return {"T": T, "S": S, "witness": q.to_dict()}


def cmd_propagate(args):
    H = _load_form(args.hamiltonian)
    return {"op": hf.propagator(H, oio.parse_complex(args.z), args.tol)}


def cmd_domain(args):
    H = _load_form(args.hamiltonian)
    z = oio.parse_complex(args.z)
    return {"label": hf.domain_member(H, z, args.tol), "margin": hf.domain_margin(H, z, args.tol)}


def _region_output(sample, args):
    if args.format == "csv":
        return sample.to_csv()
    return {
        "psi": sample.psi,
        "fraction_interior": sample.fraction(hf.INTERIOR),
        "points": [{"re_z": a, "im_z": b, "label": c} for a, b, c in sample.rows()],
    }


def cmd_davies(args):
    if args.z is not None:
        z = oio.parse_complex(args.z)
        return {"psi": args.psi, "label": hf.davies_member(args.psi, z, args.tol),
                "margin": hf.davies_margin(args.psi, z)}
    if args.rect is None:
        raise UsageError("davies needs --z or --rect")
    s = hf.sample_region(args.psi, _floats(args.rect, 4), args.res, args.tol, args.workers)
    return _region_output(s, args)


def cmd_region(args):
    if (args.hamiltonian is None) == (args.psi is None):
        raise UsageError("region needs exactly one of --hamiltonian or --psi")
    target = _load_form(args.hamiltonian) if args.hamiltonian else davies_matrix(args.psi)
    s = hf.sample_region(target, _floats(args.rect, 4), args.res, args.tol, args.workers, route="matrix")
    if args.psi is not None:
        s.psi = args.psi
    return _region_output(s, args)


def davies_matrix(psi):
    return hf.davies_hamiltonian(psi).form


def cmd_metaplectic(args):
    H = _load_form(args.hamiltonian)
    return {"op": hf.metaplectic_form(H, args.t, args.tol)}


def cmd_cordes(args):
    p = CordesParams(args.d, args.s)
    out = {"d": p.d, "s": p.s, "closed_bound": closed_bound(p), "tight_bound": tight_bound(p),
           "mixture_bound": mixture_bound(p)}
    if p.d == 1:
        N = args.trunc_N or 80
        val, deltas = numeric_constant(p, args.K, N, return_deltas=True)
        out.update({"numeric": val, "deltas": deltas})
    return out


def cmd_cv_check(args):
    p = CordesParams(1, 1.0)
    return cv_check_gaussian(args.lam, p, args.K, args.trunc_N or 80)


def cmd_verify(args):
    from .verify import report, run_checks

    only = set(args.only.split(",")) if args.only else None
    rep = report(run_checks(args.seed, args.samples, only))
    for c in rep["checks"]:
        flag = "PASS" if c["passed"] else "FAIL"
        print(f"{flag} {c['name']} error={c['error']:.3e} tol={c['tol']:.0e} margin={c['margin']:.3e}",
              file=args.stderr)
    return rep


COMMANDS = {
    "classify": cmd_classify,
    "diamond": cmd_diamond,
    "compose": cmd_compose,
    "kernel": cmd_kernel,
    "trace": cmd_trace,
    "trace-norm": cmd_trace_norm,
    "op-norm": cmd_op_norm,
    "abs": cmd_abs,
    "polar": cmd_polar,
    "sp-to": cmd_sp_to,
    "sp-from": cmd_sp_from,
    "sp-polar": cmd_sp_polar,
    "propagate": cmd_propagate,
    "domain": cmd_domain,
    "davies": cmd_davies,
    "region": cmd_region,
    "metaplectic": cmd_metaplectic,
    "cordes": cmd_cordes,
    "cv-check": cmd_cv_check,
    "verify": cmd_verify,
}


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="tolerance (default 1e-9 or $OSC_DEFAULT_TOL)")
    common.add_argument("--trunc-N", dest="trunc_N", type=int, default=None, help="Hermite truncation")
    common.add_argument("--quad-nodes", dest="quad_nodes", type=int, default=None, help="Gauss-Hermite nodes")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="oscsemi", description="Gaussian Weyl symbols and the oscillator semigroup.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, help):
        return sub.add_parser(name, parents=[common], help=help)

    s = add("classify", "membership flags and witnesses")
    s.add_argument("--matrix", required=True)
    s.add_argument("--kind", choices=("sym", "sp", "alg"), default="sym")

    s = add("diamond", "the diamond product of two forms")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)

    s = add("compose", "product of two Gaussian operators")
    s.add_argument("--g1", required=True)
    s.add_argument("--g2", required=True)

    for name, hlp in (("kernel", "Schrödinger kernel"), ("abs", "absolute value"), ("polar", "polar decomposition")):
        add(name, hlp).add_argument("--form", required=True)
    for name, hlp in (("trace", "trace"), ("trace-norm", "trace norm"), ("op-norm", "operator norm")):
        s = add(name, hlp)
        s.add_argument("--form", required=True)
        s.add_argument("--oracle", action="store_true", help="also report the Hermite-basis value")

    add("sp-to", "form to symplectic matrix").add_argument("--matrix", required=True)
    add("sp-from", "symplectic matrix to form").add_argument("--matrix", required=True)
    add("sp-polar", "real-symplectic times positive factorization").add_argument("--matrix", required=True)

    s = add("propagate", "e^{-zH} as a Gaussian operator")
    s.add_argument("--hamiltonian", required=True)
    s.add_argument("--z", required=True, help="complex time 're,im'")

    s = add("domain", "membership of z in the semigroup domain")
    s.add_argument("--hamiltonian", required=True)
    s.add_argument("--z", required=True)

    s = add("davies", "Davies oscillator domain, closed form")
    s.add_argument("--psi", type=float, required=True)
    s.add_argument("--z", default=None)
    s.add_argument("--rect", default=None, help="re_min,re_max,im_min,im_max")
    s.add_argument("--res", type=int, default=100)
    s.add_argument("--workers", type=int, default=None)

    s = add("region", "domain sampled through the symplectic flow")
    s.add_argument("--hamiltonian", default=None)
    s.add_argument("--psi", type=float, default=None)
    s.add_argument("--rect", required=True)
    s.add_argument("--res", type=int, default=100)
    s.add_argument("--workers", type=int, default=None)

    s = add("metaplectic", "unitary e^{-itH} for real H")
    s.add_argument("--hamiltonian", required=True)
    s.add_argument("--t", type=float, required=True)

    s = add("cordes", "bounds and numeric value of Tr|Op(P_s)|")
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--s", type=float, default=1.0)
    s.add_argument("--K", type=int, default=64)

    s = add("cv-check", "Calderón-Vaillancourt check on a Gaussian symbol")
    s.add_argument("--lam", type=float, required=True)
    s.add_argument("--K", type=int, default=64)

    s = add("verify", "run the invariant suite")
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--only", default=None, help="comma-separated check or module names")
    return p


def run(argv=None, stdout=None, stderr=None):
    """Execute one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.tol is None:
            args.tol = default_tol()
        args.stderr = stderr
        if args.format == "csv" and args.command not in ("davies", "region"):
            raise UsageError("--format csv applies to region outputs only")
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 1
    except (FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"input error: {exc}", file=stderr)
        return 1
    except DomainError as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 2
    except NumericalError as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 3
    text = out if isinstance(out, str) else oio.dumps(out) + "\n"
    try:
        stdout.write(text)
        stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. `| head`); not an error of ours
        sys.stdout = None
    if args.command == "verify" and not out["passed"]:
        return 4
    return 0


def main(argv=None):
    sys.exit(run(argv))
