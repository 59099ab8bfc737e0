"""Functions on [-1, 1] packaged with their derivatives.

The Sobolev inner product consumes ``f, f', ..., f^(m)`` directly, so every
test function carries closed-form derivatives instead of relying on
numerical differentiation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

__all__ = [
    "FunctionBundle",
    "polynomial_bundle",
    "exp_bundle",
    "sin_bundle",
    "power_bundle",
    "parse_bundle",
]


@dataclass(frozen=True)
class FunctionBundle:
    """A function and its derivatives, evaluated as ``bundle.eval(k, x)``.

    ``degree`` is the polynomial degree when the function is a polynomial
    (``None`` otherwise) and sizes quadrature rules.  ``smooth`` marks
    functions analytic on a neighbourhood of [-1, 1]; non-smooth bundles
    are integrated with endpoint-graded composite rules.
    """

    func: Callable[[int, np.ndarray], np.ndarray]
    max_order: int | None = None
    name: str = "f"
    degree: int | None = None
    smooth: bool = True

    def eval(self, k: int, x):
        if k < 0 or (self.max_order is not None and k > self.max_order):
            raise ValueError(f"bundle {self.name!r} provides derivatives up to order "
                             f"{self.max_order}, requested {k}")
        arr = np.asarray(x, dtype=float)
        out = np.asarray(self.func(k, arr), dtype=float)
        out = np.broadcast_to(out, arr.shape).copy() if out.shape != arr.shape else out
        return float(out) if out.ndim == 0 else out

    def derivative(self, k: int) -> Callable:
        return lambda x: self.eval(k, x)


def polynomial_bundle(coeffs, name: str | None = None) -> FunctionBundle:
    """Polynomial with monomial coefficients ``coeffs[0] + coeffs[1] x + ...``."""
    poly = Polynomial(np.asarray(coeffs, dtype=float))
    derivs = [poly]
    degree = max(len(coeffs) - 1, 0)
    for _ in range(degree):
        derivs.append(derivs[-1].deriv())

    def func(k, x):
        if k >= len(derivs):
            return np.zeros_like(x)
        return derivs[k](x)

    label = name or "poly:" + ",".join(f"{c:g}" for c in coeffs)
    return FunctionBundle(func, None, label, degree, True)


def exp_bundle(rate: float = 1.0) -> FunctionBundle:
    """``exp(rate * x)``."""
    return FunctionBundle(lambda k, x: rate ** k * np.exp(rate * x), None,
                          "expx" if rate == 1.0 else f"exp:{rate:g}")


def sin_bundle(freq: float) -> FunctionBundle:
    """``sin(freq * x)``."""
    return FunctionBundle(lambda k, x: freq ** k * np.sin(freq * x + k * np.pi / 2),
                          None, f"sin:{freq:g}")


def power_bundle(gamma: float, max_order: int = 8) -> FunctionBundle:
    """``(1 - x)^gamma``, singular at x = 1 once ``k > gamma``."""

    def func(k, x):
        c = (-1.0) ** k * math.prod(gamma - i for i in range(k))
        with np.errstate(divide="ignore"):
            return c * (1.0 - x) ** (gamma - k)

    smooth = float(gamma).is_integer() and gamma >= 0
    degree = int(gamma) if smooth else None
    return FunctionBundle(func, max_order, f"onemx:{gamma:g}", degree, smooth)


_NAMED = re.compile(r"^(?:q(?P<q>\d+)|poly:(?P<poly>[-+0-9.eE,]+)|(?P<exp>expx)"
                    r"|onemx:(?P<onemx>[-+0-9.eE]+)|sin:(?P<sin>[-+0-9.eE]+))$")


def parse_bundle(name: str, sobolev_params=None) -> FunctionBundle:
    """Build a bundle from a CLI name.

    ``q<j>`` (needs Sobolev parameters), ``poly:<c0,c1,...>``, ``expx``,
    ``onemx:<gamma>`` for ``(1-x)^gamma``, ``sin:<k>``.
    """
    match = _NAMED.match(name.strip())
    if match is None:
        raise ValueError(f"unknown test function {name!r}; expected q<j>, poly:<coeffs>, "
                         "expx, onemx:<gamma> or sin:<k>")
    if match["q"] is not None:
        if sobolev_params is None:
            raise ValueError("q<j> bundles need Sobolev parameters")
        from .sobolev import q_bundle
        return q_bundle(sobolev_params, int(match["q"]))
    if match["poly"] is not None:
        return polynomial_bundle([float(c) for c in match["poly"].split(",")], name=name)
    if match["exp"] is not None:
        return exp_bundle()
    if match["onemx"] is not None:
        gamma = float(match["onemx"])
        if gamma <= 0:
            raise ValueError("onemx exponent must be positive")
        return power_bundle(gamma)
    return sin_bundle(float(match["sin"]))
