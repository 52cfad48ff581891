"""Numerical linear canonical Dunkl transform on the real line.

Modules
-------
special    normalized Bessel functions and the Dunkl kernel
measure    the weighted measure, quadrature rules, L^p norms, signals
transform  the transform (two routes), its inverse and closed forms
corpus     deterministic test signals
harness    both sides of the uncertainty inequalities with verdicts
cli        command-line interface
"""

__version__ = "0.1.0"

from .errors import (ConcentrationSaturated, DegenerateMatrix, DomainError, FitFailure,
                     KernelOverflowError, LcdunklError, NonConvergence, ParameterOutOfRange,
                     ZeroSignal)
from .special import DunklOrder, dunkl_kernel, log_gamma, normalized_bessel_j
from .measure import (IntervalSet, QuadratureSpec, Signal, gamma_measure, lp_norm, mu_weight,
                      weighted_moment_norm, concentration)
from .transform import (CanonicalMatrix, SpectrumSample, SpectrumSignal, fractional_matrix,
                        lcdt_forward, lcdt_inverse, lcdt_kernel, lcdt_via_dunkl, round_trip)
from .corpus import corpus_default, make_signal

__all__ = [
    "__version__", "LcdunklError", "DomainError", "KernelOverflowError", "NonConvergence",
    "ZeroSignal", "DegenerateMatrix", "ParameterOutOfRange", "ConcentrationSaturated",
    "FitFailure", "DunklOrder", "dunkl_kernel", "log_gamma", "normalized_bessel_j",
    "IntervalSet", "QuadratureSpec", "Signal", "gamma_measure", "lp_norm", "mu_weight",
    "weighted_moment_norm", "concentration", "CanonicalMatrix", "SpectrumSample",
    "SpectrumSignal", "fractional_matrix", "lcdt_forward", "lcdt_inverse", "lcdt_kernel",
    "lcdt_via_dunkl", "round_trip", "corpus_default", "make_signal",
]
