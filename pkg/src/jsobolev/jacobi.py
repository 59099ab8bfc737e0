"""Classical and orthonormal Jacobi polynomials on [-1, 1].

``P_n^{(a,b)}`` is the classical Jacobi polynomial for the weight
``(1-x)^a (1+x)^b``; ``p_n = w_n P_n`` is its orthonormal rescaling.
Evaluation always goes through three-term recurrences (Szego, ch. 4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.special import gammaln

__all__ = [
    "JacobiParams",
    "jacobi_eval",
    "orthonormal_norm_const",
    "orthonormal_eval",
    "orthonormal_table",
    "orthonormal_recurrence_eval",
    "iter_orthonormal",
    "eigenvalue",
    "derivative_factor",
    "orthonormal_derivative_eval",
    "recurrence_coefficients",
    "total_mass",
]


@dataclass(frozen=True)
class JacobiParams:
    """Exponents of the Jacobi weight ``(1-x)^alpha (1+x)^beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= -1:
                raise ValueError(f"{name} must be a finite number > -1, got {value!r}")

    def shifted(self, k: int) -> "JacobiParams":
        return JacobiParams(self.alpha + k, self.beta + k)

    def swapped(self) -> "JacobiParams":
        return JacobiParams(self.beta, self.alpha)


def _as_params(params) -> JacobiParams:
    if isinstance(params, JacobiParams):
        return params
    alpha, beta = params
    return JacobiParams(float(alpha), float(beta))


def _check_degree(n, name="n"):
    if int(n) != n or n < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {n!r}")
    return int(n)


def _check_points(x):
    """Validate evaluation points; returns (array, was_scalar)."""
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise ValueError("evaluation point is NaN")
    if (np.abs(arr) > 1.0).any():
        raise ValueError("evaluation points must lie in [-1, 1]")
    return arr, arr.ndim == 0


def _result(values, scalar):
    return float(values) if scalar else values


def total_mass(params) -> float:
    """``int_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)``."""
    p = _as_params(params)
    a, b = p.alpha, p.beta
    return math.exp((a + b + 1) * math.log(2.0) + gammaln(a + 1) + gammaln(b + 1)
                    - gammaln(a + b + 2))


def jacobi_eval(params, n, x):
    """Classical ``P_n^{(a,b)}(x)`` by the standard three-term recurrence."""
    p = _as_params(params)
    n = _check_degree(n)
    arr, scalar = _check_points(x)
    a, b = p.alpha, p.beta
    prev = np.ones_like(arr)
    if n == 0:
        return _result(prev, scalar)
    cur = 0.5 * ((a + b + 2.0) * arr + (a - b))
    apb = a + b
    for k in range(2, n + 1):
        c = 2.0 * k + apb
        a1 = 2.0 * k * (k + apb) * (c - 2.0)
        a2 = (c - 1.0) * (a * a - b * b)
        a3 = (c - 2.0) * (c - 1.0) * c
        a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c
        prev, cur = cur, ((a2 + a3 * arr) * cur - a4 * prev) / a1
    return _result(cur, scalar)


def orthonormal_norm_const(params, n) -> float:
    """Normalization ``w_n`` with ``||w_n P_n||_{L^2(dmu_{a,b})} = 1``.

    Built from log-Gamma differences so it stays finite for very large n.
    """
    p = _as_params(params)
    n = _check_degree(n)
    a, b = p.alpha, p.beta
    if n == 0:
        # (a+b+1) Gamma(a+b+1) folded into Gamma(a+b+2): finite when a+b+1 = 0
        return math.sqrt(1.0 / total_mass(p))
    log_w2 = (math.log(2 * n + a + b + 1) + gammaln(n + 1) + gammaln(n + a + b + 1)
              - (a + b + 1) * math.log(2.0) - gammaln(n + a + 1) - gammaln(n + b + 1))
    return math.exp(0.5 * log_w2)


def orthonormal_eval(params, n, x):
    """``p_n^{(a,b)}(x) = w_n P_n^{(a,b)}(x)``."""
    return orthonormal_norm_const(params, n) * jacobi_eval(params, n, x)


def recurrence_coefficients(params, n: int):
    """Jacobi-matrix entries for the orthonormal family.

    Returns ``(diag, offdiag)`` with ``diag[k] = b_k`` for ``k < n`` and
    ``offdiag[k] = a_{k+1}`` for ``k < n``, so that
    ``x p_k = a_{k+1} p_{k+1} + b_k p_k + a_k p_{k-1}``.
    """
    p = _as_params(params)
    a, b = p.alpha, p.beta
    k = np.arange(n, dtype=float)
    diag = np.empty(n)
    if n:
        diag[0] = (b - a) / (a + b + 2.0)
        c = 2.0 * k[1:] + a + b
        diag[1:] = (b * b - a * a) / (c * (c + 2.0))
    j = np.arange(1, n + 1, dtype=float)
    off = np.empty(n)
    if n:
        off[0] = 2.0 / (a + b + 2.0) * math.sqrt((a + 1.0) * (b + 1.0) / (a + b + 3.0))
        jj = j[1:]
        c = 2.0 * jj + a + b
        off[1:] = 2.0 / c * np.sqrt(jj * (jj + a) * (jj + b) * (jj + a + b)
                                   / ((c - 1.0) * (c + 1.0)))
    return diag, off


def iter_orthonormal(params, x, nmax: int) -> Iterator[np.ndarray]:
    """Yield ``p_0(x), ..., p_nmax(x)`` as arrays, one degree at a time.

    Points are not range-checked here; callers pass validated nodes.
    """
    arr = np.asarray(x, dtype=float)
    diag, off = recurrence_coefficients(params, nmax)
    prev = np.zeros_like(arr)
    cur = np.full_like(arr, orthonormal_norm_const(params, 0))
    yield cur
    for k in range(nmax):
        nxt = ((arr - diag[k]) * cur - (off[k - 1] if k else 0.0) * prev) / off[k]
        prev, cur = cur, nxt
        yield cur


def orthonormal_recurrence_eval(params, n: int, x) -> np.ndarray:
    """``p_n(x)`` through the orthonormal recurrence, keeping two rows only."""
    value = None
    for value in iter_orthonormal(params, x, n):
        pass
    return value


def orthonormal_table(params, nmax: int, x) -> np.ndarray:
    """Rows ``p_0..p_nmax`` evaluated at ``x``; shape ``(nmax+1,) + x.shape``."""
    _check_degree(nmax, "nmax")
    arr, _ = _check_points(x)
    return np.stack(list(iter_orthonormal(params, arr, nmax)))


def eigenvalue(params, n) -> float:
    """``lambda_n = n (n + a + b + 1)``: ``L_{a,b} p_n = -lambda_n p_n``."""
    p = _as_params(params)
    n = _check_degree(n)
    return n * (n + p.alpha + p.beta + 1.0)


def derivative_factor(params, n, k) -> float:
    """``r_{n,k} = prod_{j<k} lambda_{n-j}^{(a+j, b+j)}``; 1 for k = 0, 0 for k > n."""
    p = _as_params(params)
    n = _check_degree(n)
    k = _check_degree(k, "k")
    if k > n:
        return 0.0
    r = 1.0
    for j in range(k):
        r *= eigenvalue(p.shifted(j), n - j)
    return r


def orthonormal_derivative_eval(params, n, k, x):
    """``d^k/dx^k p_n^{(a,b)} = sqrt(r_{n,k}) p_{n-k}^{(a+k,b+k)}``."""
    p = _as_params(params)
    n = _check_degree(n)
    k = _check_degree(k, "k")
    arr, scalar = _check_points(x)
    if k > n:
        return _result(np.zeros_like(arr), scalar)
    values = math.sqrt(derivative_factor(p, n, k)) * orthonormal_eval(p.shifted(k), n - k, arr)
    return _result(values, scalar)
