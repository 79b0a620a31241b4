"""Polynomial symbols and exact operator-ordering algebra.

Operator monomials are brought to normal order (every ``x`` left of every
``p``) with the canonical commutation relation ``[x, p] = i hbar``.  The
closed form used for reordering is

    p^a x^b = sum_k k! C(a, k) C(b, k) (-i hbar)^k x^(b-k) p^(a-k).

Coefficients are Gaussian rationals (``Fraction`` real and imaginary parts)
and ``hbar`` is kept as a formal grading, so identities hold exactly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .errors import ConfigError, DegreeTooHigh

MAX_DEGREE = 8


class QQi:
    """Exact complex rational ``re + i im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, v) -> "QQi":
        if isinstance(v, QQi):
            return v
        if isinstance(v, complex):
            return cls(Fraction(v.real).limit_denominator(10**12), Fraction(v.imag).limit_denominator(10**12))
        if isinstance(v, float):
            return cls(Fraction(v).limit_denominator(10**12))
        return cls(v)

    def __add__(self, o):
        o = QQi.coerce(o)
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = QQi.coerce(o)
        return QQi(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __mul__(self, o):
        o = QQi.coerce(o)
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __eq__(self, o):
        try:
            o = QQi.coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"


MINUS_I = QQi(0, -1)


def _qpow(q: QQi, k: int) -> QQi:
    out = QQi(1)
    for _ in range(k):
        out = out * q
    return out


class NormalForm:
    """``sum d[u, v, k] hbar^k x^u p^v`` with all ``x`` to the left."""

    def __init__(self, terms: dict | None = None):
        self.terms: dict[tuple[int, int, int], QQi] = {}
        for key, c in (terms or {}).items():
            self._acc(key, QQi.coerce(c))

    def _acc(self, key, c: QQi) -> None:
        v = self.terms.get(key, QQi()) + c
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    @classmethod
    def monomial(cls, u: int, v: int, coeff=1) -> "NormalForm":
        return cls({(u, v, 0): coeff})

    def __add__(self, other: "NormalForm") -> "NormalForm":
        out = NormalForm(self.terms)
        for key, c in other.terms.items():
            out._acc(key, c)
        return out

    def scale(self, c) -> "NormalForm":
        c = QQi.coerce(c)
        return NormalForm({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        out = NormalForm()
        for (u1, v1, k1), c1 in self.terms.items():
            for (u2, v2, k2), c2 in other.terms.items():
                # x^u1 (p^v1 x^u2) p^v2
                for k in range(min(v1, u2) + 1):
                    w = factorial(k) * comb(v1, k) * comb(u2, k)
                    coef = c1 * c2 * _qpow(MINUS_I, k) * w
                    out._acc((u1 + u2 - k, v1 + v2 - k, k1 + k2 + k), coef)
        return out

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.terms == other.terms

    def evaluate(self, hbar: float = 1.0) -> dict[tuple[int, int], complex]:
        """Collapse the hbar grading at a numeric ``hbar``."""
        out: dict[tuple[int, int], complex] = {}
        for (u, v, k), c in self.terms.items():
            out[(u, v)] = out.get((u, v), 0j) + complex(c) * hbar**k
        return out

    def _sorted(self):
        return sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0], kv[0][2]))

    def __str__(self) -> str:
        parts = []
        for (u, v, k), c in self._sorted():
            sign, body = _format_term(c, u, v, k)
            if not parts:
                parts.append(("-" if sign < 0 else "") + body)
            else:
                parts.append(("- " if sign < 0 else "+ ") + body)
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return f"NormalForm({self})"


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"({f.numerator}/{f.denominator})"


def _format_term(c: QQi, u: int, v: int, k: int) -> tuple[int, str]:
    mono = []
    if u:
        mono.append("x" if u == 1 else f"x^{u}")
    if v:
        mono.append("p" if v == 1 else f"p^{v}")
    hb = "" if k == 0 else ("hbar" if k == 1 else f"hbar^{k}")
    if c.im == 0:
        sign, mag = (1 if c.re > 0 else -1), abs(c.re)
        cs = "" if mag == 1 else _frac_str(mag)
    elif c.re == 0:
        sign, mag = (1 if c.im > 0 else -1), abs(c.im)
        cs = "i" if mag == 1 else _frac_str(mag) + "i"
    else:
        sign = 1
        im = f"+{_frac_str(c.im)}i" if c.im > 0 else f"-{_frac_str(-c.im)}i"
        cs = f"({_frac_str(c.re).strip('()')}{im.replace('(', '').replace(')', '')})"
    if cs.endswith("i") and hb:
        head = f"{cs}*{hb}"
    else:
        head = " ".join(s for s in (cs, hb) if s)
    body = " ".join(s for s in [head, *mono] if s)
    return sign, body or "1"


@dataclass(frozen=True)
class OrderedOperatorExpr:
    """``sum coeff p^a x^b p^c`` as an explicit (unreduced) word sum."""

    terms: tuple[tuple[int, int, int, QQi], ...]

    def normal_form(self) -> NormalForm:
        out = NormalForm()
        for a, b, c, coeff in self.terms:
            word = NormalForm.monomial(0, a) * NormalForm.monomial(b, 0) * NormalForm.monomial(0, c)
            out = out + word.scale(coeff)
        return out

    def __str__(self) -> str:
        chunks = []
        for a, b, c, coeff in self.terms:
            word = " ".join(_power("p", a) + _power("x", b) + _power("p", c))
            chunks.append(f"({_frac_str(coeff.re).strip('()') if coeff.im == 0 else coeff}) {word or '1'}")
        return " + ".join(chunks)


def _power(name: str, e: int) -> list[str]:
    return [] if e == 0 else [name if e == 1 else f"{name}^{e}"]


def _check_degree(r: int, s: int) -> None:
    if r < 0 or s < 0:
        raise DegreeTooHigh(f"monomial exponents must be non-negative, got ({r}, {s})")
    if r + s > MAX_DEGREE:
        raise DegreeTooHigh(f"degree r + s <= {MAX_DEGREE} violated: {r} + {s}")


def mccoy_order(r: int, s: int) -> OrderedOperatorExpr:
    """Weyl-ordered ``x^r p^s`` as ``2^-s sum_k C(s, k) p^(s-k) x^r p^k``."""
    _check_degree(r, s)
    w = Fraction(1, 2**s)
    return OrderedOperatorExpr(tuple((s - k, r, k, QQi(w * comb(s, k))) for k in range(s + 1)))


def mccoy_order_alt(r: int, s: int) -> NormalForm:
    """Normal form of the mirror formula ``2^-r sum_k C(r, k) x^(r-k) p^s x^k``."""
    _check_degree(r, s)
    out = NormalForm()
    for k in range(r + 1):
        word = NormalForm.monomial(r - k, 0) * NormalForm.monomial(0, s) * NormalForm.monomial(k, 0)
        out = out + word.scale(Fraction(comb(r, k), 2**r))
    return out


class PolynomialSymbol:
    """Phase-space polynomial ``sum c[r, s] x^r p^s`` (a Weyl symbol)."""

    def __init__(self, terms=None):
        acc: dict[tuple[int, int], complex] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or [])
        for item in items:
            if isinstance(terms, dict):
                (r, s), c = item
            else:
                r, s, c = item
                if (r, s) in acc:
                    raise ValueError(f"duplicate monomial x^{r} p^{s}")
            _check_degree(int(r), int(s))
            acc[(int(r), int(s))] = acc.get((int(r), int(s)), 0j) + complex(c)
        self.terms = {k: v for k, v in acc.items() if v != 0}

    @classmethod
    def constant(cls, c=1.0) -> "PolynomialSymbol":
        return cls({(0, 0): c})

    @property
    def degree(self) -> int:
        return max((r + s for r, s in self.terms), default=0)

    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self.terms.values())

    def __call__(self, x, p):
        x = np.asarray(x)
        p = np.asarray(p)
        out = np.zeros(np.broadcast(x, p).shape, dtype=complex)
        for (r, s), c in self.terms.items():
            out = out + c * x**r * p**s
        return out

    def __add__(self, other: "PolynomialSymbol") -> "PolynomialSymbol":
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0j) + v
        return PolynomialSymbol(t)

    def __mul__(self, other):
        if isinstance(other, PolynomialSymbol):
            t: dict = {}
            for (r1, s1), c1 in self.terms.items():
                for (r2, s2), c2 in other.terms.items():
                    key = (r1 + r2, s1 + s2)
                    _check_degree(*key)
                    t[key] = t.get(key, 0j) + c1 * c2
            return PolynomialSymbol(t)
        return PolynomialSymbol({k: v * other for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __sub__(self, other: "PolynomialSymbol") -> "PolynomialSymbol":
        return self + other * -1.0

    def __eq__(self, other):
        return isinstance(other, PolynomialSymbol) and self.terms == other.terms

    def __repr__(self):
        return f"PolynomialSymbol({self.text()!r})"

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (r, s), c in sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])):
            cs = repr(c.real) if c.imag == 0 else f"({c.real!r}{c.imag:+}j)"
            mono = "*".join(m for m in (f"x**{r}" if r else "", f"p**{s}" if s else "") if m)
            parts.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(parts)

    def quantized_normal_form(self) -> NormalForm:
        """Exact normal form of the Weyl quantisation, term by term."""
        out = NormalForm()
        for (r, s), c in self.terms.items():
            out = out + mccoy_order(r, s).normal_form().scale(complex(c))
        return out


def oscillator_symbol() -> PolynomialSymbol:
    """``H(x, p) = (x^2 + p^2) / 2``."""
    return PolynomialSymbol({(2, 0): 0.5, (0, 2): 0.5})


NAMED_SYMBOLS = {
    "1": lambda hb: PolynomialSymbol.constant(1.0),
    "x": lambda hb: PolynomialSymbol({(1, 0): 1}),
    "p": lambda hb: PolynomialSymbol({(0, 1): 1}),
    "xp": lambda hb: PolynomialSymbol({(1, 1): 1}),
    "H": lambda hb: oscillator_symbol(),
    "H2": lambda hb: oscillator_symbol() * oscillator_symbol(),
    "H2_weyl": lambda hb: oscillator_symbol() * oscillator_symbol() - PolynomialSymbol.constant(hb**2 / 4),
}

_TOKEN = re.compile(r"^[\sxp0-9.eEjJ+\-*/^()]*$")


def parse_symbol(text: str, hbar: float = 1.0) -> PolynomialSymbol:
    """Parse a symbol such as ``"0.5*x^2 + 0.5*p^2"`` or a named one (``H``, ``H2``)."""
    text = text.strip()
    if text in NAMED_SYMBOLS:
        return NAMED_SYMBOLS[text](hbar)
    if not text or not _TOKEN.match(text):
        raise ConfigError(f"cannot parse symbol {text!r}")
    import sympy

    xs, ps = sympy.symbols("x p")
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={"x": xs, "p": ps})
        poly = sympy.Poly(sympy.expand(expr), xs, ps)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError, SyntaxError) as exc:
        raise ConfigError(f"cannot parse symbol {text!r}: {exc}") from exc
    terms = {}
    for (r, s), c in poly.terms():
        terms[(int(r), int(s))] = complex(c)
    return PolynomialSymbol(terms)
