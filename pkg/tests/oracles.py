"""Independent reference computations used by the tests (sympy / mpmath based)."""

from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np
import sympy

from veechsalem.exactfield import FieldElement, RatPoly, RealAlgebraicField

X, Y = sympy.symbols("x y")


def to_sympy(p: RatPoly, var=X):
    return sum(sympy.Rational(c.numerator, c.denominator) * var ** k for k, c in enumerate(p.coeffs))


def from_sympy(expr, var=X) -> RatPoly:
    coeffs = sympy.Poly(expr, var).all_coeffs()[::-1]
    return RatPoly([Fraction(int(c.p), int(c.q)) for c in coeffs])


def resultant_minpoly(a: FieldElement) -> RatPoly:
    """Factor of Res_y(f(y), x - a(y)) vanishing at a, made monic."""
    F = a.field
    rep = sum(sympy.Rational(c.numerator, c.denominator) * Y ** k for k, c in enumerate(a.coeffs))
    res = sympy.resultant(to_sympy(F.minpoly, Y), X - rep, Y)
    target = float(a)
    best, best_err = None, np.inf
    for fac, _ in sympy.factor_list(res, X)[1]:
        roots = sympy.Poly(fac, X).nroots(n=30)
        err = min(abs(complex(r) - target) for r in roots)
        if err < best_err:
            best, best_err = fac, err
    return from_sympy(best).monic()


def numeric_real_root_count(p: RatPoly, dps: int = 60) -> int:
    """Distinct real roots of a squarefree polynomial via high-precision complex roots."""
    if p.degree < 1:
        return 0
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)]
        roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
        return sum(1 for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 2))


def random_element(F: RealAlgebraicField, rng: np.random.Generator, H: int = 9, D: int = 5) -> FieldElement:
    return F([Fraction(int(rng.integers(-H, H + 1)), int(rng.integers(1, D + 1)))
              for _ in range(F.degree)])


def random_squarefree(rng: np.random.Generator, max_degree: int = 8, H: int = 9) -> RatPoly:
    while True:
        d = int(rng.integers(1, max_degree + 1))
        c = [int(x) for x in rng.integers(-H, H + 1, d + 1)]
        if c[-1] == 0:
            continue
        p = RatPoly(c)
        if sympy.Poly(to_sympy(p), X).is_sqf:
            return p


def torus_strip_coefficient(alpha: float, a: float, b: float) -> float:
    """|Fourier coefficient| of the indicator of x in [a, b) at frequency 1 on the unit circle."""
    return abs(np.exp(-2j * np.pi * b) - np.exp(-2j * np.pi * a)) / (2 * np.pi)
