"""Composition, absolute value and polar decomposition of a complex Gaussian.

Two random Gaussians are composed with the diamond product and the result
is compared with the product of their Hermite matrices. The product is then
split as U·|G| with U metaplectic, and each factor is checked numerically.
"""

import numpy as np

from oscsemigroup import gaussops as go
from oscsemigroup import matcore as mc
from oscsemigroup import sampling as smp
from oscsemigroup.oracle import hermite_matrix, is_unitary_block

N = 80


def main():
    rng = np.random.default_rng(3)
    g1 = go.GaussianOp(1.0, smp.random_sym_pp(rng, 1))
    g2 = go.GaussianOp(0.5 - 0.2j, smp.random_sym_pp(rng, 1))
    P, certain = go.compose(g1, g2)
    ref = hermite_matrix(g1, N).entries @ hermite_matrix(g2, N).entries
    print("compose scale", np.round(P.scale, 6), "sign certain", certain)
    print("product vs oracle  ", f"{mc.fro_rel(hermite_matrix(P, N).entries, ref):.2e}")

    U, A = go.polar(P)
    print("|G| positive       ", go.is_positive(A))
    print("U unitarity defect ", f"{is_unitary_block(hermite_matrix(U, 200), lead=15):.2e}")
    print("metaplectic sign   ", go.metaplectic_sign(U))
    HU, HA = hermite_matrix(U, 200).entries, hermite_matrix(A, 200).entries
    print("U·|G| vs G         ", f"{mc.fro_rel((HU @ HA)[:N, :N], hermite_matrix(P, N).entries):.2e}")
    print("trace norm         ", f"{go.trace_norm(P):.8f}",
          "oracle", f"{np.linalg.svd(hermite_matrix(P, N).entries, compute_uv=False).sum():.8f}")


if __name__ == "__main__":
    main()
