"""Jacobi-Sobolev orthonormal polynomials and Fourier-Sobolev expansions.

For the inner product

    <f, g> = sum_{k=0}^{m} int f^(k) g^(k) dmu_{a+k, b+k}

the rescaled Jacobi polynomials ``q_n = p_n / sqrt(s_{n,m})`` with
``s_{n,m} = sum_k r_{n,k}`` are orthonormal, because differentiating
``p_n^{(a,b)}`` k times lands on ``sqrt(r_{n,k}) p_{n-k}^{(a+k,b+k)}``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bundles import FunctionBundle
from .jacobi import (JacobiParams, _check_degree, _check_points, derivative_factor,
                     iter_orthonormal, orthonormal_eval, recurrence_coefficients)
from .quadrature import (DEFAULT_GRADING, composite_rule, gauss_jacobi_rule,
                         jacobi_lp_norm, lp_norm)

__all__ = [
    "SobolevParams",
    "Expansion",
    "s_factor",
    "q_eval",
    "q_bundle",
    "expansion_bundle",
    "sobolev_inner",
    "fourier_coefficient",
    "fourier_coefficients",
    "partial_sum",
    "decomposed_partial_sum",
    "evaluate_expansion",
    "evaluate_truncations",
    "sobolev_norm",
    "q_sobolev_norm",
    "default_resolution",
]


@dataclass(frozen=True)
class SobolevParams:
    alpha: float
    beta: float
    m: int

    def __post_init__(self):
        JacobiParams(self.alpha, self.beta)
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"Sobolev order m must be an integer >= 1, got {self.m!r}")

    def jacobi(self, k: int = 0) -> JacobiParams:
        """Measure parameters ``(a+k, b+k)`` of the k-th derivative term."""
        return JacobiParams(self.alpha + k, self.beta + k)


def _float17(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("cannot serialize non-finite coefficient")
    return format(x, ".17g")


@dataclass(frozen=True, eq=False)
class Expansion:
    """Coefficients ``c_0..c_n`` of ``sum_j c_j q_j``."""

    params: SobolevParams
    coeffs: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def to_json(self) -> str:
        sp = self.params
        head = json.dumps({"alpha": sp.alpha, "beta": sp.beta, "m": sp.m, "n": self.n})
        body = ", ".join(_float17(float(c)) for c in self.coeffs)
        return head[:-1] + f', "coeffs": [{body}]}}'

    @classmethod
    def from_json(cls, text: str) -> "Expansion":
        data = json.loads(text)
        coeffs = np.asarray(data["coeffs"], dtype=float)
        if len(coeffs) != data["n"] + 1:
            raise ValueError("coefficient count does not match n")
        return cls(SobolevParams(data["alpha"], data["beta"], data["m"]), coeffs)


def s_factor(sp: SobolevParams, n: int) -> float:
    """``s_{n,m} = sum_{k=0}^m r_{n,k}``."""
    return sum(derivative_factor(sp.jacobi(), n, k) for k in range(sp.m + 1))


def _scale(sp, j, k):
    """``sqrt(r_{j,k} / s_{j,m})``."""
    return math.sqrt(derivative_factor(sp.jacobi(), j, k) / s_factor(sp, j))


def q_eval(sp: SobolevParams, n: int, ell: int, x):
    """``ell``-th derivative of ``q_n`` at ``x``."""
    n = _check_degree(n)
    ell = _check_degree(ell, "ell")
    arr, scalar = _check_points(x)
    if ell > n:
        out = np.zeros_like(arr)
    else:
        out = _scale(sp, n, ell) * orthonormal_eval(sp.jacobi(ell), n - ell, arr)
    return float(out) if scalar else out


def q_bundle(sp: SobolevParams, n: int) -> FunctionBundle:
    return FunctionBundle(lambda k, x: q_eval(sp, n, k, x), None, f"q{n}", n, True)


def expansion_bundle(e: Expansion) -> FunctionBundle:
    return FunctionBundle(lambda k, x: evaluate_expansion(e, k, x), None,
                          f"expansion(n={e.n})", e.n, True)


def default_resolution(n: int, *bundles: FunctionBundle) -> int:
    """Node count ``max(64, 2 (n + degree proxy))``; non-polynomials count as degree 32."""
    proxy = max((b.degree if b.degree is not None else 32) for b in bundles) if bundles else 0
    return max(64, 2 * (n + proxy))


def _coefficient_rule(params: JacobiParams, smooth: bool, resolution: int):
    if smooth:
        return gauss_jacobi_rule(params, resolution)
    return composite_rule(params, npanels=max(resolution // 2, 8), grading=DEFAULT_GRADING)


def _check_orders(sp, *bundles):
    for b in bundles:
        if b.max_order is not None and b.max_order < sp.m:
            raise ValueError(f"bundle {b.name!r} provides derivatives up to {b.max_order}, "
                             f"the inner product needs {sp.m}")


def sobolev_inner(sp: SobolevParams, f: FunctionBundle, g: FunctionBundle,
                  resolution: int | None = None) -> float:
    """``sum_k int f^(k) g^(k) dmu_{a+k,b+k}`` by one quadrature rule per k."""
    _check_orders(sp, f, g)
    resolution = resolution or default_resolution(0, f, g)
    total = 0.0
    for k in range(sp.m + 1):
        rule = _coefficient_rule(sp.jacobi(k), f.smooth and g.smooth, resolution)
        total += float(np.dot(rule.weights, f.eval(k, rule.nodes) * g.eval(k, rule.nodes)))
    return total


def _derivative_projections(sp, f, n, k, resolution):
    """``b_j^{(k)} = int f^(k) p_{j-k}^{(a+k,b+k)} dmu_{a+k,b+k}`` for j = k..n."""
    rule = _coefficient_rule(sp.jacobi(k), f.smooth, resolution)
    weighted = rule.weights * f.eval(k, rule.nodes)
    if np.isnan(weighted).any():
        raise ValueError(f"bundle {f.name!r} is NaN at a quadrature node")
    out = np.zeros(n + 1)
    for i, p in enumerate(iter_orthonormal(sp.jacobi(k), rule.nodes, n - k)):
        out[i + k] = np.dot(p, weighted)
    return out


def _decomposed_coefficients(sp, f, n, k, resolution):
    b = _derivative_projections(sp, f, n, k, resolution)
    scale = np.array([_scale(sp, j, k) if j >= k else 0.0 for j in range(n + 1)])
    return scale * b


def fourier_coefficients(sp: SobolevParams, f: FunctionBundle, n: int,
                         resolution: int | None = None) -> np.ndarray:
    """``c_j = <f, q_j>`` for j = 0..n."""
    n = _check_degree(n)
    _check_orders(sp, f)
    resolution = resolution or default_resolution(n, f)
    coeffs = np.zeros(n + 1)
    for k in range(min(sp.m, n) + 1):
        coeffs += _decomposed_coefficients(sp, f, n, k, resolution)
    return coeffs


def fourier_coefficient(sp: SobolevParams, f: FunctionBundle, j: int,
                        resolution: int | None = None) -> float:
    return float(fourier_coefficients(sp, f, j, resolution)[j])


def partial_sum(sp: SobolevParams, f: FunctionBundle, n: int,
                resolution: int | None = None) -> Expansion:
    """``S_n f = sum_{j<=n} <f, q_j> q_j``."""
    return Expansion(sp, fourier_coefficients(sp, f, n, resolution))


def decomposed_partial_sum(sp: SobolevParams, f: FunctionBundle, n: int, k: int,
                           resolution: int | None = None) -> Expansion:
    """The k-th derivative channel of ``S_n f``.

    Coefficient j is ``sqrt(r_{j,k}/s_{j,m}) b_j^{(k)}`` for j >= k and zero
    below, so summing the channels over k = 0..m gives :func:`partial_sum`.
    """
    n = _check_degree(n)
    k = _check_degree(k, "k")
    if k > sp.m:
        raise ValueError(f"channel k={k} exceeds the Sobolev order m={sp.m}")
    if n < k:
        raise ValueError(f"need n >= k, got n={n}, k={k}")
    _check_orders(sp, f)
    resolution = resolution or default_resolution(n, f)
    return Expansion(sp, _decomposed_coefficients(sp, f, n, k, resolution))


def _derivative_series(e: Expansion, ell: int):
    """Coefficients of ``(sum c_j q_j)^(ell)`` in the ``p^{(a+ell,b+ell)}`` basis."""
    sp = e.params
    return np.array([e.coeffs[j] * _scale(sp, j, ell) for j in range(ell, e.n + 1)])


def evaluate_expansion(e: Expansion, ell: int, x):
    """``sum_j c_j q_j^(ell)(x)`` by Clenshaw summation."""
    ell = _check_degree(ell, "ell")
    arr, scalar = _check_points(x)
    if ell > e.n:
        out = np.zeros_like(arr)
        return float(out) if scalar else out
    params = e.params.jacobi(ell)
    d = _derivative_series(e, ell)
    top = len(d) - 1
    diag, off = recurrence_coefficients(params, top + 2)
    y1 = np.zeros_like(arr)
    y2 = np.zeros_like(arr)
    for k in range(top, -1, -1):
        y1, y2 = d[k] + (arr - diag[k]) / off[k] * y1 - (off[k] / off[k + 1]) * y2, y1
    out = y1 * orthonormal_eval(params, 0, 0.0)
    return float(out) if scalar else out


def evaluate_truncations(e: Expansion, ell: int, x, truncations) -> np.ndarray:
    """``S_n^(ell)`` at ``x`` for each n in ``truncations`` in one forward sweep.

    Returns an array of shape ``(len(truncations),) + x.shape``.
    """
    arr = np.asarray(x, dtype=float)
    order = sorted(set(int(n) for n in truncations))
    if order and order[-1] > e.n:
        raise ValueError("truncation exceeds expansion degree")
    snapshots = {}
    acc = np.zeros_like(arr)
    pending = [n for n in order if n < ell]
    for n in pending:
        snapshots[n] = acc.copy()
    if order and order[-1] >= ell:
        d = _derivative_series(e, ell)
        for i, p in enumerate(iter_orthonormal(e.params.jacobi(ell), arr, order[-1] - ell)):
            acc += d[i] * p
            if i + ell in order:
                snapshots[i + ell] = acc.copy()
    return np.stack([snapshots[int(n)] for n in truncations])


def sobolev_norm(sp: SobolevParams, f: FunctionBundle, p: float,
                 resolution: int | None = None) -> float:
    """``(sum_k ||f^(k)||^p_{L^p(dmu_{a+k,b+k})})^{1/p}``."""
    if not (1 <= p < math.inf):
        raise ValueError(f"Sobolev exponent must satisfy 1 <= p < inf, got {p!r}")
    _check_orders(sp, f)
    resolution = resolution or default_resolution(0, f)
    grading = 0 if f.smooth else DEFAULT_GRADING
    total = 0.0
    for k in range(sp.m + 1):
        total += lp_norm(f.derivative(k), p, sp.jacobi(k), resolution,
                         grading=grading, smooth=f.smooth) ** p
    return total ** (1.0 / p)


def q_sobolev_norm(sp: SobolevParams, n: int, p, order: int = 12):
    """``||q_n||_{W^{p,m}}`` from zero-panel norms of the shifted Jacobi factors.

    ``p`` may be a sequence; each factor polynomial is evaluated once.
    """
    ps = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(ps < 1) or np.any(~np.isfinite(ps)):
        raise ValueError("Sobolev exponents must satisfy 1 <= p < inf")
    s = s_factor(sp, n)
    total = np.zeros(ps.shape)
    for k in range(min(sp.m, n) + 1):
        ratio = derivative_factor(sp.jacobi(), n, k) / s
        norms = np.atleast_1d(jacobi_lp_norm(sp.jacobi(k), n - k, ps, order=order))
        total += ratio ** (ps / 2) * norms ** ps
    out = total ** (1.0 / ps)
    return float(out[0]) if np.ndim(p) == 0 else out
