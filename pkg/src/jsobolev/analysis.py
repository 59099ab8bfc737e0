"""Numerical experiments on Jacobi-Sobolev partial sums.

Critical exponent windows, growth rates of Jacobi L^p norms, the norm
products that control uniform boundedness, coefficient-ratio asymptotics
and convergence of partial sums in W^{p,m}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bundles import FunctionBundle
from .jacobi import JacobiParams, derivative_factor
from .quadrature import DEFAULT_GRADING, QuadratureError, jacobi_lp_norm, lp_rule
from .sobolev import (SobolevParams, default_resolution, evaluate_truncations, partial_sum,
                      q_sobolev_norm, s_factor, sobolev_norm)

__all__ = [
    "CriticalWindow",
    "GrowthFit",
    "AsymptoticFit",
    "ConvergenceResult",
    "critical_window",
    "jacobi_partial_sum_window",
    "conjugate",
    "fit_growth",
    "jacobi_lp_growth",
    "expected_jacobi_exponent",
    "norm_product",
    "norm_product_growth",
    "asym_ratio",
    "asym_ratio_check",
    "convergence_experiment",
]


def conjugate(p: float) -> float:
    """Hoelder conjugate ``p / (p - 1)``."""
    if not p > 1:
        raise ValueError(f"conjugate exponent needs p > 1, got {p!r}")
    return 1.0 if math.isinf(p) else p / (p - 1.0)


@dataclass(frozen=True)
class CriticalWindow:
    """Open interval ``(p_lower, p_upper)`` of admissible exponents.

    The exact rational endpoints are kept alongside the floats (float
    parameters convert to fractions exactly); ``None`` marks an
    unbounded upper end.
    """

    p_lower: float
    p_upper: float
    lower_exact: Fraction = field(repr=False, compare=False, default=None)
    upper_exact: Fraction | None = field(repr=False, compare=False, default=None)

    def contains(self, p: float) -> bool:
        # endpoints count as outside: the inequalities are strict
        return self.p_lower < p < self.p_upper


def _lower(gamma: Fraction) -> Fraction:
    return 4 * (gamma + 1) / (2 * gamma + 3)


def _upper(gamma: Fraction) -> Fraction | None:
    den = 2 * gamma + 1
    return None if den == 0 else 4 * (gamma + 1) / den


def _window(ga: Fraction, gb: Fraction) -> CriticalWindow:
    lo = max(_lower(ga), _lower(gb))
    ups = [u for u in (_upper(ga), _upper(gb)) if u is not None]
    up = min(ups) if ups else None
    return CriticalWindow(float(lo), math.inf if up is None else float(up), lo, up)


def critical_window(alpha: float, beta: float, m: int) -> CriticalWindow:
    """Exponents p with ``sup_n ||S_n||_{W^{p,m} -> W^{p,m}} < inf``.

    ``max_g 4(g+m+1)/(2(g+m)+3) < p < min_g 4(g+m+1)/(2(g+m)+1)`` over
    ``g in {alpha, beta}``.
    """
    SobolevParams(alpha, beta, m)
    # shift in floating point first: the window is by definition the classical
    # one at the shifted parameters, so both routes see identical inputs
    return _window(Fraction(alpha + m), Fraction(beta + m))


def jacobi_partial_sum_window(alpha: float, beta: float) -> CriticalWindow:
    """Window of uniform L^p boundedness for classical Jacobi partial sums.

    Valid for ``alpha, beta >= -1/2``; at -1/2 the upper end is infinite.
    """
    if not (alpha >= -0.5 and beta >= -0.5):
        raise ValueError(f"window defined for alpha, beta >= -1/2, got ({alpha}, {beta})")
    return _window(Fraction(alpha), Fraction(beta))


@dataclass
class GrowthFit:
    """Least-squares slope of ``log value`` against ``log n``."""

    exponent: float
    r2: float
    degrees: np.ndarray
    values: np.ndarray
    regime: str | None = None
    expected_exponent: float | None = None


def fit_growth(degrees: Sequence[int], values: Sequence[float]) -> GrowthFit:
    degrees = np.asarray(degrees, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(degrees) < 5:
        raise ValueError("growth fits need at least 5 sample degrees")
    if degrees.min() <= 0 or degrees.max() / degrees.min() < 10:
        raise ValueError("sample degrees must be positive and span at least one decade")
    if np.any(values <= 0):
        raise ValueError("growth fits need positive values")
    lx, ly = np.log(degrees), np.log(values)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    spread = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 if spread == 0 else max(0.0, 1.0 - np.sum(resid ** 2) / spread)
    return GrowthFit(float(slope), float(r2), degrees.astype(int), values)


def _jacobi_critical_p(alpha: float) -> float:
    return math.inf if 2 * alpha + 1 <= 0 else 4 * (alpha + 1) / (2 * alpha + 1)


def expected_jacobi_exponent(alpha: float, p: float) -> float:
    """Growth exponent of ``||p_n^{(alpha,beta)}||_p`` for ``alpha >= beta``.

    Zero up to the critical exponent ``4(alpha+1)/(2alpha+1)`` (with a
    logarithmic factor at it) and ``alpha + 1/2 - 2(alpha+1)/p`` above.
    """
    return max(0.0, alpha + 0.5 - 2.0 * (alpha + 1.0) / p)


def jacobi_lp_growth(params, p: float, degrees: Sequence[int], order: int = 12,
                     check_tol: float = 1e-6) -> GrowthFit:
    """Fit the growth of ``||p_n||_{L^p(dmu_{a,b})}`` over ``degrees``.

    ``alpha < beta`` is handled by reflection ``x -> -x``, which leaves the
    norms unchanged.  The largest degree is recomputed with higher panel
    order; a relative discrepancy above ``check_tol`` raises
    :class:`QuadratureError`.
    """
    prm = params if isinstance(params, JacobiParams) else JacobiParams(*params)
    if prm.alpha < prm.beta:
        prm = prm.swapped()
    degrees = list(degrees)
    if any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise ValueError("degrees must be strictly increasing")
    values = [jacobi_lp_norm(prm, n, p, order=order) for n in degrees]
    check = jacobi_lp_norm(prm, degrees[-1], p, order=order + 6)
    if abs(check - values[-1]) > check_tol * abs(check):
        raise QuadratureError(f"L^{p} norm of p_{degrees[-1]} not converged: "
                              f"{values[-1]!r} vs {check!r}")
    fit = fit_growth(degrees, values)
    crit = _jacobi_critical_p(prm.alpha)
    if math.isclose(p, crit, rel_tol=1e-12):
        fit.regime = "logarithmic"
    else:
        fit.regime = "bounded" if p < crit else "power"
    fit.expected_exponent = expected_jacobi_exponent(prm.alpha, p)
    return fit


def norm_product(sp: SobolevParams, n: int, p: float, resolution=None) -> float:
    """``||q_n||_{W^{p,m}} * ||q_n||_{W^{p',m}}`` with ``1/p + 1/p' = 1``.

    ``resolution`` is accepted for interface symmetry; the norms use panels
    between polynomial zeros and need no node budget.
    """
    if not (1 < p < math.inf):
        raise ValueError(f"norm product needs 1 < p < inf, got {p!r}")
    norms = q_sobolev_norm(sp, n, [p, conjugate(p)])
    return float(norms[0] * norms[1])


def norm_product_growth(sp: SobolevParams, p: float, degrees: Sequence[int]) -> GrowthFit:
    fit = fit_growth(degrees, [norm_product(sp, n, p) for n in degrees])
    fit.regime = "bounded" if critical_window(sp.alpha, sp.beta, sp.m).contains(p) else "unbounded"
    return fit


def asym_ratio(sp: SobolevParams, k: int, ell: int, j: int) -> float:
    """``(j+1)^{2m-k-ell} sqrt(r_{j,k} r_{j,ell}) / s_{j,m}``."""
    base = sp.jacobi()
    r = math.sqrt(derivative_factor(base, j, k) * derivative_factor(base, j, ell))
    return (j + 1.0) ** (2 * sp.m - k - ell) * r / s_factor(sp, j)


@dataclass
class AsymptoticFit:
    """Scaled ratio sequence with estimates of ``A + B/(j+1)``."""

    degrees: np.ndarray
    values: np.ndarray
    limit: float
    first_order: float


def asym_ratio_check(sp: SobolevParams, k: int, ell: int, degrees: Sequence[int]) -> AsymptoticFit:
    """Sample the scaled ratio and Richardson-estimate its expansion.

    With the two largest degrees ``j1 < j2``, ``B`` comes from the divided
    difference in ``1/(j+1)`` and ``A = v(j2) - B/(j2+1)``.
    """
    if not (0 <= k <= sp.m and 0 <= ell <= sp.m):
        raise ValueError(f"need 0 <= k, ell <= m = {sp.m}")
    degrees = np.asarray(sorted(degrees), dtype=int)
    values = np.array([asym_ratio(sp, k, ell, int(j)) for j in degrees])
    if len(degrees) >= 2:
        (j1, j2), (v1, v2) = degrees[-2:], values[-2:]
        b = (v1 - v2) / (1.0 / (j1 + 1) - 1.0 / (j2 + 1))
        a = v2 - b / (j2 + 1)
    else:
        a, b = float(values[-1]), math.nan
    return AsymptoticFit(degrees, values, float(a), float(b))


@dataclass
class ConvergenceResult:
    truncations: list
    errors: np.ndarray
    slope: float | None
    monotone: bool
    floor: float


def convergence_experiment(sp: SobolevParams, f: FunctionBundle, p: float,
                           truncations: Sequence[int], resolution: int | None = None,
                           ) -> ConvergenceResult:
    """``||S_n f - f||_{W^{p,m}}`` for every n in ``truncations``.

    Coefficients are computed once at the largest truncation; each error
    norm reuses the quadrature rule :func:`sobolev_norm` would use.
    ``monotone`` ignores changes below ``floor = 64 eps ||f||_{W^{p,m}}``,
    where the differences are rounding noise.
    """
    truncations = [int(n) for n in truncations]
    if any(b <= a for a, b in zip(truncations, truncations[1:])):
        raise ValueError("truncations must be strictly increasing")
    if not (1 <= p < math.inf):
        raise ValueError(f"need 1 <= p < inf, got {p!r}")
    top = truncations[-1]
    resolution = resolution or default_resolution(top, f)
    expansion = partial_sum(sp, f, top, resolution)
    grading = 0 if f.smooth else DEFAULT_GRADING
    total = np.zeros(len(truncations))
    for k in range(sp.m + 1):
        rule = lp_rule(sp.jacobi(k), p, resolution, grading=grading, smooth=f.smooth)
        sums = evaluate_truncations(expansion, k, rule.nodes, truncations)
        total += np.abs(sums - f.eval(k, rule.nodes)) ** p @ rule.weights
    errors = total ** (1.0 / p)

    floor = 64 * np.finfo(float).eps * sobolev_norm(sp, f, p, resolution)
    monotone = all(b <= a or max(a, b) <= floor for a, b in zip(errors, errors[1:]))
    usable = [(n, e) for n, e in zip(truncations, errors) if n > 0 and e > floor]
    slope = None
    if len(usable) >= 2:
        ns, es = zip(*usable)
        slope = float(np.polyfit(np.log(ns), np.log(es), 1)[0])
    return ConvergenceResult(truncations, errors, slope, monotone, float(floor))
