import random
import sys
from fractions import Fraction
from math import isqrt

import pytest

from paramaass.jacobi import JacobiExpansion, index_raise, jacobi_cusp_10_1
from paramaass.maass import gritsenko_lift
from paramaass.paramod import ExpansionBox


def formal_jacobi(seed, k, N, n_max, c00=None):
    """Random coefficients constant on (D, +-r mod 2N) classes; not a modular form."""
    rng = random.Random(seed)
    values = {} if c00 is None else {(0, 0): Fraction(c00)}
    data = {}
    for n in range(n_max + 1):
        b = isqrt(4 * n * N)
        for r in range(-b, b + 1):
            cls = (4 * n * N - r * r, min(r % (2 * N), -r % (2 * N)))
            if cls not in values:
                values[cls] = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
            data[n, r] = values[cls]
    return JacobiExpansion(k, N, n_max, data)


def formal_lift(seed, k, N, size):
    phi = formal_jacobi(seed, k, N, size * size)
    return gritsenko_lift(phi, ExpansionBox(size, size))


def cusp_lift(N, size):
    phi = index_raise(jacobi_cusp_10_1(10**6), N)
    return gritsenko_lift(phi, ExpansionBox(size, size))


@pytest.fixture
def cusp_lift_factory():
    return cusp_lift


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
