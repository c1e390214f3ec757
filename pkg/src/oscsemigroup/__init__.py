"""Gaussian Weyl symbols, the oscillator semigroup, and a Hermite-basis oracle."""

from .diamond import diamond, diamond_defined
from .errors import *  # noqa: F401,F403
from .gaussops import (
    GaussianOp,
    KernelGaussian,
    NormalizedGaussian,
    WilliamsonSpectrum,
    abs_form,
    abs_op,
    adjoint,
    compose,
    degenerate_1dof,
    gaussian_kernel,
    is_positive,
    normalize,
    op_norm,
    polar,
    trace,
    trace_norm,
    vacuum_expectation,
    williamson_spectrum,
)
from .symclass import ClassificationReport, classify_sp, classify_sp_alg, classify_sym

__version__ = "0.1.0"
