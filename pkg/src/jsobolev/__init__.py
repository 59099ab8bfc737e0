"""Jacobi-Sobolev orthogonal polynomials, Fourier-Sobolev partial sums and
numerical checks of their W^{p,m} convergence behaviour."""

from .analysis import (CriticalWindow, GrowthFit, asym_ratio_check, convergence_experiment,
                       critical_window, jacobi_lp_growth, jacobi_partial_sum_window,
                       norm_product)
from .bundles import FunctionBundle, exp_bundle, parse_bundle, polynomial_bundle, power_bundle
from .jacobi import (JacobiParams, derivative_factor, eigenvalue, jacobi_eval,
                     orthonormal_derivative_eval, orthonormal_eval, orthonormal_norm_const)
from .kernel import abel_kernel, check_kernel_bound, hardy_supremum, phi_eval, region_boundaries
from .quadrature import QuadratureRule, gauss_jacobi_rule, integrate, lp_norm
from .sobolev import (Expansion, SobolevParams, decomposed_partial_sum, evaluate_expansion,
                      fourier_coefficient, partial_sum, q_eval, s_factor, sobolev_inner,
                      sobolev_norm)

__version__ = "0.1.0"
