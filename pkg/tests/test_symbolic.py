"""Exact operator ordering, checked against a differential-operator oracle.

The oracle realises x -> multiplication and p -> -i hbar d/dx with sympy and
defines the Weyl ordering of x^r p^s as the average over all distinct words,
which is independent of the binomial formulas in the package.
"""
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from weakwigner.errors import ConfigError, DegreeTooHigh
from weakwigner.symbolic import (
    NormalForm,
    PolynomialSymbol,
    QQi,
    mccoy_order,
    mccoy_order_alt,
    oscillator_symbol,
    parse_symbol,
)

X, HB = sympy.symbols("x hbar", real=True)
F = sympy.Function("f")(X)


def _apply_word(word, expr):
    for letter in reversed(word):
        expr = X * expr if letter == "x" else -sympy.I * HB * sympy.diff(expr, X)
    return expr


def _weyl_oracle(r, s):
    words = set(permutations("x" * r + "p" * s))
    total = sum(_apply_word(w, F) for w in words)
    return sympy.expand(total / len(words))


def _apply_normal_form(nf: NormalForm):
    out = 0
    for (u, v, k), c in nf.terms.items():
        coeff = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)
        out += coeff * HB**k * _apply_word("x" * u + "p" * v, F)
    return sympy.expand(out)


def test_mccoy_1_1_is_xp_minus_half_i_hbar():
    want = NormalForm({(1, 1, 0): 1, (0, 0, 1): QQi(0, Fraction(-1, 2))})
    assert mccoy_order(1, 1).normal_form() == want
    assert str(mccoy_order(1, 1).normal_form()) == "x p - (1/2)i*hbar"


def test_mccoy_2_2_matches_precomputed_reduction():
    # x^2 p^2 - 2 i hbar x p - hbar^2 / 2, worked out by hand from [x, p] = i hbar
    want = NormalForm({(2, 2, 0): 1, (1, 1, 1): QQi(0, -2), (0, 0, 2): Fraction(-1, 2)})
    assert mccoy_order(2, 2).normal_form() == want
    assert str(mccoy_order(2, 2).normal_form()) == "x^2 p^2 - 2i*hbar x p - (1/2) hbar^2"


@pytest.mark.parametrize("r,s", [(0, 0), (1, 0), (0, 3), (1, 1), (2, 1), (1, 2), (2, 2), (3, 2), (2, 3), (4, 4)])
def test_mccoy_against_symmetrised_words(r, s):
    assert sympy.simplify(_apply_normal_form(mccoy_order(r, s).normal_form()) - _weyl_oracle(r, s)) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4))
def test_mccoy_mirror_formula(r, s):
    assert mccoy_order(r, s).normal_form() == mccoy_order_alt(r, s)


def test_mccoy_expression_text():
    assert str(mccoy_order(2, 2)) == "(1/4) p^2 x^2 + (1/2) p x^2 p + (1/4) x^2 p^2"


def test_degree_limit():
    with pytest.raises(DegreeTooHigh):
        mccoy_order(5, 4)
    with pytest.raises(DegreeTooHigh):
        PolynomialSymbol({(9, 0): 1})


def test_commutator_from_normal_form():
    x, p = NormalForm.monomial(1, 0), NormalForm.monomial(0, 1)
    comm = x * p + (p * x).scale(-1)
    assert comm == NormalForm({(0, 0, 1): QQi(0, 1)})


def test_oscillator_square_quantisation():
    # Weyl(H^2) = H_op^2 + hbar^2 / 4: the constant that separates the naive and Weyl values
    h = oscillator_symbol()
    hop = h.quantized_normal_form()
    diff = (h * h).quantized_normal_form() + (hop * hop).scale(-1)
    assert diff == NormalForm({(0, 0, 2): Fraction(1, 4)})


def test_polynomial_symbol_algebra():
    a = PolynomialSymbol({(1, 0): 2.0, (0, 1): -1.0})
    b = PolynomialSymbol([(1, 0, 1.0)])
    assert (a * b).terms == {(2, 0): 2.0, (1, 1): -1.0}
    assert (a - a).terms == {}
    assert a(np.array([1.0]), np.array([3.0]))[0] == -1.0
    assert a.is_real() and not (a * 1j).is_real()
    assert a.degree == 1


@pytest.mark.parametrize(
    "text,terms",
    [
        ("0.5*x^2 + 0.5*p^2", {(2, 0): 0.5, (0, 2): 0.5}),
        ("x*p", {(1, 1): 1}),
        ("(x+p)^2", {(2, 0): 1, (1, 1): 2, (0, 2): 1}),
        ("H", {(2, 0): 0.5, (0, 2): 0.5}),
        ("3", {(0, 0): 3}),
    ],
)
def test_parse_symbol(text, terms):
    assert parse_symbol(text).terms == {k: complex(v) for k, v in terms.items()}


def test_parse_symbol_named_weyl_square_uses_hbar():
    assert parse_symbol("H2_weyl", hbar=2.0).terms[(0, 0)] == -1.0


@pytest.mark.parametrize("text", ["", "sin(x)", "import os", "x**-1", "y"])
def test_parse_symbol_rejects(text):
    with pytest.raises(ConfigError):
        parse_symbol(text)
