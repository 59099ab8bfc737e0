"""Trigonometric Jacobi functions, Abel-damped kernels and Hardy weight tests.

Under ``x = cos(theta)`` the orthonormal Jacobi polynomials become the
functions ``phi_k^{(a,b)}``, orthonormal in ``L^2((0, pi), dtheta)``.  The
kernel checks compare the damped series

    L_{r,d,m}(theta, omega) = sum_j r^j phi_{j+d}^{(a,b)}(theta) phi_j^{(a-1,b-1)}(omega) / (j+m+1)

with its three-region majorant, and the Hardy checks evaluate the
supremum criteria for the weighted integration operators.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .jacobi import JacobiParams, iter_orthonormal
from .quadrature import gauss_legendre

__all__ = [
    "RegionBoundaries",
    "KernelReport",
    "phi_eval",
    "phi_table",
    "region_boundaries",
    "region_of",
    "kernel_bound",
    "abel_kernel",
    "default_nterms",
    "check_kernel_bound",
    "hardy_integrands",
    "hardy_profile",
    "hardy_supremum",
]


def _check_angles(theta):
    arr = np.asarray(theta, dtype=float)
    if np.isnan(arr).any() or np.any(arr <= 0) or np.any(arr >= np.pi):
        raise ValueError("angles must lie strictly inside (0, pi)")
    return arr


def phi_table(a: float, b: float, kmax: int, theta) -> np.ndarray:
    """Rows ``phi_0..phi_kmax`` at ``theta``."""
    th = _check_angles(theta)
    params = JacobiParams(a, b)
    half = 0.5 * th
    pref = (2.0 ** ((a + b + 1) / 2) * np.sin(half) ** (a + 0.5) * np.cos(half) ** (b + 0.5))
    table = np.empty((kmax + 1,) + th.shape)
    for k, p in enumerate(iter_orthonormal(params, np.cos(th), kmax)):
        table[k] = pref * p
    return table


def phi_eval(a: float, b: float, k: int, theta):
    """``2^{(a+b+1)/2} sin(t/2)^{a+1/2} cos(t/2)^{b+1/2} p_k^{(a,b)}(cos t)``."""
    out = phi_table(a, b, k, theta)[k]
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class RegionBoundaries:
    M: float
    m_small: float


def region_boundaries(theta: float) -> RegionBoundaries:
    """``M = max(t/2, (3t - pi)/2)`` and ``m = min(3t/2, (t + pi)/2)``."""
    _check_angles(theta)
    return RegionBoundaries(max(theta / 2, (3 * theta - math.pi) / 2),
                            min(3 * theta / 2, (theta + math.pi) / 2))


def region_of(theta, omega) -> np.ndarray:
    """1, 2 or 3 by strict comparison with ``M(theta)``, ``m(theta)``; 0 on a boundary."""
    th, om = np.broadcast_arrays(np.asarray(theta, float), np.asarray(omega, float))
    big_m = np.maximum(th / 2, (3 * th - np.pi) / 2)
    small_m = np.minimum(3 * th / 2, (th + np.pi) / 2)
    return np.select([om < big_m, (om > big_m) & (om < small_m), om > small_m], [1, 2, 3], 0)


def kernel_bound(alpha: float, beta: float, theta, omega) -> np.ndarray:
    """Right-hand side of the three-region kernel estimate (constant omitted).

    Boundary points get NaN; the diagonal of the middle region is +inf.
    """
    th, om = np.broadcast_arrays(np.asarray(theta, float), np.asarray(omega, float))
    region = region_of(th, om)
    pt, po = np.pi - th, np.pi - om
    with np.errstate(divide="ignore", invalid="ignore"):
        first = om ** (alpha - 0.5) * pt ** (beta + 0.5) / (th ** (alpha - 0.5) * po ** (beta + 0.5))
        middle = np.log(2 * th / np.abs(th - om))
        third = th ** (alpha + 0.5) * po ** (beta - 0.5) / (om ** (alpha + 0.5) * pt ** (beta - 0.5))
    return np.select([region == 1, region == 2, region == 3], [first, middle, third], np.nan)


def default_nterms(r: float, m: int, tol: float = 1e-13, phi_bound: float = 4.0) -> int:
    """Smallest N with ``phi_bound^2 r^{N+1} / ((1-r)(N+m+2)) < tol``."""
    n = 16
    while phi_bound ** 2 * r ** (n + 1) / ((1 - r) * (n + m + 2)) >= tol:
        n = int(n * 1.25) + 1
    return n


def abel_kernel(alpha: float, beta: float, r: float, d: int, m: int, theta, omega,
                nterms: int | None = None, *, second: tuple[float, float] | None = None):
    """Abel-damped kernel ``L_{r,d,m}^{(alpha,beta),second}(theta, omega)``.

    ``second`` defaults to ``(alpha - 1, beta - 1)``.  Array arguments give
    the full ``len(theta) x len(omega)`` matrix.
    """
    if not 0 < r < 1:
        raise ValueError(f"Abel parameter must satisfy 0 < r < 1, got {r!r}")
    a2, b2 = second if second is not None else (alpha - 1.0, beta - 1.0)
    th = np.atleast_1d(_check_angles(theta))
    om = np.atleast_1d(_check_angles(omega))
    n = nterms or default_nterms(r, m)
    start = max(0, -d)
    j = np.arange(start, n + 1)
    first_tab = phi_table(alpha, beta, n + d, th)[j + d]
    second_tab = phi_table(a2, b2, n, om)[j]
    coef = r ** j.astype(float) / (j + m + 1.0)
    out = (first_tab * coef[:, None]).T @ second_tab
    if np.ndim(theta) == 0 and np.ndim(omega) == 0:
        return float(out[0, 0])
    if np.ndim(theta) == 0:
        return out[0]
    if np.ndim(omega) == 0:
        return out[:, 0]
    return out


@dataclass
class KernelReport:
    alpha: float
    beta: float
    m: int
    r: float
    region_sup: list
    n_theta: int
    n_omega: int

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "m": self.m, "r": self.r,
                "region_sup": list(self.region_sup),
                "grid": {"n_theta": self.n_theta, "n_omega": self.n_omega}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def kernel_grid(n: int) -> np.ndarray:
    """Midpoint angles ``(i + 1/2) pi / n``, uniform in arccos x."""
    return (np.arange(n) + 0.5) * np.pi / n


def check_kernel_bound(alpha: float, beta: float, m: int, r: float, n_theta: int = 80,
                       n_omega: int = 80, nterms: int | None = None) -> KernelReport:
    """Region-wise sup of ``|L_{r,-1,m}| / bound`` over a tensor angle grid.

    Points on a region boundary and the diagonal (infinite bound) are skipped.
    """
    if not (alpha > 0 and beta > 0):
        raise ValueError("the kernel estimate is stated for alpha, beta > 0")
    if not 0.9 <= r <= 0.995:
        raise ValueError(f"Abel parameter outside the checked range [0.9, 0.995]: {r!r}")
    th = kernel_grid(n_theta)
    om = kernel_grid(n_omega)
    kern = np.abs(abel_kernel(alpha, beta, r, -1, m, th, om, nterms))
    tt, oo = np.meshgrid(th, om, indexing="ij")
    bound = kernel_bound(alpha, beta, tt, oo)
    region = region_of(tt, oo)
    sups = []
    for reg in (1, 2, 3):
        mask = (region == reg) & np.isfinite(bound) & (bound > 0)
        sups.append(float(np.max(kern[mask] / bound[mask])) if mask.any() else 0.0)
    return KernelReport(alpha, beta, m, r, sups, n_theta, n_omega)


def _w(alpha, beta, p, theta):
    e = 2.0 - p
    return np.sin(theta / 2) ** ((alpha + 0.5) * e) * np.cos(theta / 2) ** ((beta + 0.5) * e)


def hardy_integrands(p: float, alpha: float, beta: float, variant: str = "standard",
                     form: str = "weights"):
    """``(U^p, V^{-p'}, u_at_zero)`` as callables of theta.

    ``u_at_zero`` is True when ``U^p`` is integrated from 0 (the adjoint
    variant) and False when it is integrated up to pi.  ``form="powers"``
    gives the pure power-law equivalents of the same integrands.
    """
    if not (1 < p < math.inf):
        raise ValueError(f"need 1 < p < inf, got {p!r}")
    if variant not in ("standard", "adjoint"):
        raise ValueError(f"unknown Hardy variant {variant!r}")
    if form not in ("weights", "powers"):
        raise ValueError(f"unknown integrand form {form!r}")
    q = p / (p - 1.0)
    a, b = alpha, beta
    if form == "powers":
        if variant == "standard":
            u = lambda t: t ** (2 * a * (1 - p) + 1) * (np.pi - t) ** (2 * b + 1)
            v = lambda t: t ** (2 * a - 1) * (np.pi - t) ** (2 * b * (1 - q) - 1)
        else:
            u = lambda t: t ** (2 * a + 1) * (np.pi - t) ** (2 * b * (1 - p) + 1)
            v = lambda t: t ** (2 * a * (1 - q) - 1) * (np.pi - t) ** (2 * b - 1)
        return u, v, variant == "adjoint"
    if variant == "standard":
        g = lambda t: (np.pi - t) ** (b + 0.5) / t ** (a - 0.5)
    else:
        g = lambda t: t ** (a + 0.5) / (np.pi - t) ** (b - 0.5)
    u = lambda t: _w(a, b, p, t) * g(t) ** p
    v = lambda t: _w(a - 1, b - 1, p, t) ** (-q / p) * g(t) ** (-q)
    return u, v, variant == "adjoint"


def _breakpoints(levels: int, ratio: float, middle: int) -> np.ndarray:
    left = (np.pi / 4) * ratio ** np.arange(levels, -1, -1.0)
    mid = np.linspace(np.pi / 4, 3 * np.pi / 4, middle + 1)
    right = np.pi - left[::-1]
    return np.unique(np.concatenate([left, mid, right]))


def _panel_integrals(f, edges, order):
    gl = gauss_legendre(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    x = lo + 0.5 * (hi - lo) * (gl.nodes + 1.0)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        vals = f(x)
    return (0.5 * (hi - lo) * vals) @ gl.weights


def _tail(first, second):
    """Geometric extrapolation of the panel series toward an endpoint.

    ``first`` is the innermost panel, ``second`` its outer neighbour.
    Returns +inf when the contributions stop decaying.
    """
    if not (np.isfinite(first) and np.isfinite(second)) or second <= 0:
        return math.inf
    rho = first / second
    if rho >= 1.0 - 1e-9:
        return math.inf
    return first * rho / (1.0 - rho)


def hardy_profile(p: float, alpha: float, beta: float, variant: str = "standard",
                  form: str = "weights", levels: int = 40, ratio: float = 0.5,
                  middle: int = 16, order: int = 16):
    """Cut points r and the factors of the supremand at each r.

    Returns ``(r, u_part, v_part)`` with ``u_part = (int U^p)^{1/p}`` and
    ``v_part = (int V^{-p'})^{1/p'}`` over the complementary pieces of
    (0, pi) determined by r.  Panels are geometric toward both endpoints;
    the unresolved sliver at each endpoint is added by geometric
    extrapolation, and reported as +inf if the integrand is not integrable.
    """
    u, v, u_at_zero = hardy_integrands(p, alpha, beta, variant, form)
    q = p / (p - 1.0)
    edges = _breakpoints(levels, ratio, middle)
    iu = _panel_integrals(u, edges, order)
    iv = _panel_integrals(v, edges, order)
    # partial integrals from 0 up to each interior edge, and from each edge to pi
    def from_zero(parts):
        return _tail(parts[0], parts[1]) + np.concatenate([[0.0], np.cumsum(parts)])[1:-1]

    def to_pi(parts):
        rev = np.concatenate([[0.0], np.cumsum(parts[::-1])])[::-1]
        return _tail(parts[-1], parts[-2]) + rev[1:-1]

    r = edges[1:-1]
    if u_at_zero:
        u_int, v_int = from_zero(iu), to_pi(iv)
    else:
        u_int, v_int = to_pi(iu), from_zero(iv)
    return r, u_int ** (1.0 / p), v_int ** (1.0 / q)


def hardy_supremum(p: float, alpha: float, beta: float, variant: str = "standard",
                   form: str = "weights", refine: int = 1) -> float:
    """Supremum over r of the Hardy product; ``math.inf`` when it diverges.

    ``refine`` multiplies the panel density (grading ratio ``2^{-1/refine}``).
    Outside ``alpha, beta > 0`` the integrals are still evaluated, so a
    non-integrable endpoint shows up as ``inf`` rather than an exception.
    """
    r, up, vp = hardy_profile(p, alpha, beta, variant, form, levels=40 * refine,
                              ratio=0.5 ** (1.0 / refine), middle=16 * refine,
                              order=16)
    prod = up * vp
    if not np.all(np.isfinite(prod)):
        return math.inf
    return float(np.max(prod))
