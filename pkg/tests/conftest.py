import random

import pytest
import sympy

from pencil_lab.fields import QQ, PrimeField

F101 = PrimeField(101)


def sympy_expr(f):
    """MultiPoly -> sympy expression in x0..xn (rational coefficients)."""
    xs = sympy.symbols(f"x0:{f.nvars}")
    out = 0
    for e, c in f.terms.items():
        coeff = sympy.Rational(c.numerator, c.denominator) if f.field == QQ else int(c)
        term = coeff
        for x, k in zip(xs, e):
            term *= x ** k
        out += term
    return sympy.expand(out), xs


def sympy_uni(u, t):
    return sum((sympy.Rational(c.numerator, c.denominator) if u.field == QQ else int(c)) * t ** i
               for i, c in enumerate(u.coeffs))


@pytest.fixture
def rng():
    return random.Random(12345)
