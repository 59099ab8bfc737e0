"""Independent reference values shared by the test modules."""

import mpmath
import numpy as np

from jsobolev.quadrature import gauss_jacobi_rule

mpmath.mp.dps = 60

# filled by the acceptance tests, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)


def exact_moment(alpha, beta, k):
    """``int x^k (1-x)^a (1+x)^b dx`` via ``x = (1+x) - 1`` and Beta integrals.

    Every term is positive up to the binomial sign and is carried at 60
    digits, so the cancellation is harmless.
    """
    a, b = mpmath.mpf(alpha), mpmath.mpf(beta)
    total = mpmath.mpf(0)
    for i in range(k + 1):
        total += (mpmath.binomial(k, i) * (-1) ** (k - i) * 2 ** (a + b + i + 1)
                  * mpmath.beta(a + 1, b + i + 1))
    return float(total)


def exact_mass(alpha, beta):
    return float(2 ** (mpmath.mpf(alpha) + beta + 1) * mpmath.beta(alpha + 1, beta + 1))


def high_order_rule(alpha, beta, npoints=200):
    """A large Gauss-Jacobi rule used as a polynomial-exact reference."""
    return gauss_jacobi_rule((alpha, beta), npoints)


def finite_difference(f, x, h=1e-5):
    return (f(x + h) - f(x - h)) / (2 * h)


def mpmath_orthonormal(alpha, beta, n, x):
    """Orthonormal Jacobi value from mpmath's hypergeometric ``jacobi``."""
    a, b = mpmath.mpf(alpha), mpmath.mpf(beta)
    h = (2 ** (a + b + 1) / (2 * n + a + b + 1) * mpmath.gamma(n + a + 1) * mpmath.gamma(n + b + 1)
         / (mpmath.gamma(n + 1) * mpmath.gamma(n + a + b + 1)))
    return float(mpmath.jacobi(n, a, b, x) / mpmath.sqrt(h))


def grid(n=41):
    return np.cos(np.linspace(0, np.pi, n))
