"""Isotropic Gaussians e^{-λ(x²+p²)} across the quantum-degenerate point λ = 1.

Below λ = 1 the quantization is a thermal state; at λ = 1 it is half the
vacuum projection; above, the spectrum alternates in sign. The trace is
smooth in λ while the trace norm has a kink at λ = 1. Each closed-form
value is printed next to the Hermite-basis oracle.
"""

import numpy as np

from oscsemigroup import gaussops as go
from oscsemigroup.oracle import hermite_matrix, numeric_functionals


def main():
    print(f"{'λ':>6} {'trace':>10} {'oracle':>10} {'‖·‖₁':>10} {'oracle':>10} {'‖·‖':>10} {'oracle':>10}")
    for lam in (0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0):
        g = go.GaussianOp(1.0, lam * np.eye(2))
        F = numeric_functionals(hermite_matrix(g, 80))
        tn = go.trace_norm(g, strict=False)
        print(f"{lam:6.2f} {go.trace(g).real:10.6f} {F['trace'].real:10.6f} {tn:10.6f} "
              f"{F['trace_norm']:10.6f} {go.op_norm(g):10.6f} {F['op_norm']:10.6f}")

    print("\nleading diagonal entries of the Hermite matrix (the matrix is diagonal)")
    for lam in (0.5, 1.0, 2.0):
        E = hermite_matrix(go.GaussianOp(1.0, lam * np.eye(2)), 60).entries
        print(f"λ={lam}: ", np.array2string(np.diag(E)[:5].real, precision=5))


if __name__ == "__main__":
    main()
