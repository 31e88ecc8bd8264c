"""Closed-form solvers for quadratic and cubic polynomials with real coefficients.

Used for fixed-point location (after deflating the production cubic by its
known root) and for eigenvalues of 2x2 and 3x3 Jacobians via their
characteristic polynomials, avoiding any iterative eigensolver.
"""

from __future__ import annotations

import math

_TWO_PI = 2.0 * math.pi


def solve_quadratic(a: float, b: float, c: float) -> tuple[complex, complex]:
    """Roots of a*x^2 + b*x + c = 0 (a != 0), computed cancellation-free."""
    if a == 0:
        raise ValueError("leading coefficient must be nonzero")
    disc = b * b - 4.0 * a * c
    if disc >= 0:
        sq = math.sqrt(disc)
        # q has the sign of -b so neither root suffers subtractive cancellation
        q = -0.5 * (b + math.copysign(sq, b)) if b != 0 else 0.5 * sq
        if q == 0:
            r = -b / (2.0 * a)
            return (complex(r), complex(r))
        return (complex(q / a), complex(c / q))
    sq = math.sqrt(-disc)
    re = -b / (2.0 * a)
    im = sq / (2.0 * a)
    return (complex(re, im), complex(re, -im))


def solve_cubic(a: float, b: float, c: float, d: float) -> tuple[complex, complex, complex]:
    """All three roots of a*x^3 + b*x^2 + c*x + d = 0 (a != 0).

    Depressed-cubic approach: the trigonometric branch for three real roots,
    Cardano's branch for one real root plus a complex-conjugate pair.
    """
    if a == 0:
        raise ValueError("leading coefficient must be nonzero")
    b, c, d = b / a, c / a, d / a
    shift = b / 3.0
    p = c - b * b / 3.0
    q = d + b * (2.0 * b * b - 9.0 * c) / 27.0

    if p == 0 and q == 0:
        r = complex(-shift)
        return (r, r, r)

    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0:
        sq = math.sqrt(disc)
        u = math.copysign(abs(-q / 2.0 + sq) ** (1.0 / 3.0), -q / 2.0 + sq)
        v = math.copysign(abs(-q / 2.0 - sq) ** (1.0 / 3.0), -q / 2.0 - sq)
        real_root = u + v - shift
        re = -(u + v) / 2.0 - shift
        im = math.sqrt(3.0) * (u - v) / 2.0
        return (complex(real_root), complex(re, im), complex(re, -im))

    r = math.sqrt(-p / 3.0)
    if r == 0:
        return (complex(-shift),) * 3
    arg = max(-1.0, min(1.0, -q / (2.0 * r ** 3)))
    phi = math.acos(arg)
    return tuple(complex(2.0 * r * math.cos((phi - _TWO_PI * k) / 3.0) - shift)
                 for k in range(3))


def deflate(coeffs: list[float], root: float) -> tuple[list[float], float]:
    """Synthetic division of a polynomial (descending coefficients) by (x - root).

    Returns the quotient coefficients and the remainder; the remainder is the
    polynomial value at the root and should be ~0 when the root is exact.
    """
    if len(coeffs) < 2:
        raise ValueError("polynomial degree must be >= 1")
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1] * root)
    remainder = coeffs[-1] + out[-1] * root
    return out, remainder


def polyval(coeffs: list[float], x: complex) -> complex:
    """Horner evaluation of a polynomial in descending-coefficient order."""
    acc: complex = 0.0
    for c in coeffs:
        acc = acc * x + c
    return acc
