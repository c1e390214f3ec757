"""The Calderón–Vaillancourt constant as a trace norm.

Tr|Op(P_s)| is estimated by writing the Bessel-type symbol as a Gaussian
mixture, then compared with the two analytic bounds. A Gaussian symbol
family e^{-λ(x²+p²)} checks the resulting operator-norm inequality.
"""

import numpy as np

from oscsemigroup import cordes as cd


def main():
    for s in (0.75, 1.0, 1.5, 2.0):
        p = cd.CordesParams(1, s)
        val, deltas = cd.numeric_constant(p, return_deltas=True)
        print(f"s={s:4}: numeric {val:.6f} (±{deltas['N']:.1e})  mixture {cd.mixture_bound(p):.6f}  "
              f"tight {cd.tight_bound(p):.6f}  closed {cd.closed_bound(p):.6f}")
    p = cd.CordesParams(1, 1.0)
    const = cd.cv_constant(p)
    print("\nλ        ‖Op(a)‖    bound")
    for lam in np.logspace(-2, 2, 9):
        r = cd.cv_check_gaussian(lam, p, constant=const)
        print(f"{lam:8.3f} {r['lhs']:9.5f} {r['rhs']:9.3f}  {'ok' if r['holds'] else 'VIOLATED'}")


if __name__ == "__main__":
    main()
