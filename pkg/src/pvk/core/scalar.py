"""Exact scalars over Q and Q(i).

Rationals are plain :class:`fractions.Fraction`.  Gaussian rationals use
:class:`GaussianRational`; arithmetic that produces a zero imaginary part
collapses back to a ``Fraction`` so rational data never changes type.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from ..errors import ParseError

__all__ = [
    "GaussianRational",
    "as_scalar",
    "conj",
    "format_scalar",
    "is_real",
    "make_scalar",
    "parse_scalar",
]


def make_scalar(re_part, im_part=0):
    re_part = Fraction(re_part)
    im_part = Fraction(im_part)
    if im_part == 0:
        return re_part
    return GaussianRational(re_part, im_part)


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re_part=0, im_part=0):
        object.__setattr__(self, "re", Fraction(re_part))
        object.__setattr__(self, "im", Fraction(im_part))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _parts(other):
        if isinstance(other, GaussianRational):
            return other.re, other.im
        if isinstance(other, Rational):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return make_scalar(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return make_scalar(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return make_scalar(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = p
        return make_scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("division by zero")
        a, b = self.re, self.im
        return make_scalar((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational(*p) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        out = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return make_scalar(self.re, -self.im)

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


def as_scalar(value):
    """Coerce ints, Fractions, Gaussian rationals or literal strings.

    Floats are rejected: the math core never rounds.
    """
    if isinstance(value, GaussianRational):
        return make_scalar(value.re, value.im)
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"not an exact scalar: {value!r}")


def conj(value):
    if isinstance(value, GaussianRational):
        return value.conjugate()
    return value


def is_real(value):
    return not isinstance(value, GaussianRational)


_RAT = r"[+-]?\d+(?:/\d+)?"
_COMPLEX = re.compile(rf"^({_RAT})([+-])(\d+(?:/\d+)?)?\s*i$")
_IMAG = re.compile(rf"^({_RAT}|[+-])?\s*i$")


def _parse_rational(text):
    if not re.fullmatch(_RAT, text):
        raise ParseError(f"malformed rational {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}") from None


def parse_scalar(text):
    """Parse ``"p/q"``, ``"p/q+r/s i"`` or ``"r/s i"``.

    >>> parse_scalar("-3/6")
    Fraction(-1, 2)
    >>> str(parse_scalar("1/2-3 i"))
    '1/2-3 i'
    """
    if not isinstance(text, str):
        raise ParseError(f"scalar literal must be a string, got {text!r}")
    s = text.strip()
    m = _COMPLEX.match(s)
    if m:
        re_part = _parse_rational(m.group(1))
        im_part = _parse_rational(m.group(3) or "1")
        if m.group(2) == "-":
            im_part = -im_part
        return make_scalar(re_part, im_part)
    m = _IMAG.match(s)
    if m:
        im = m.group(1)
        if im in (None, "+"):
            im_part = Fraction(1)
        elif im == "-":
            im_part = Fraction(-1)
        else:
            im_part = _parse_rational(im)
        return make_scalar(0, im_part)
    return _parse_rational(s)


def _fmt_rat(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(value):
    value = as_scalar(value)
    if isinstance(value, GaussianRational):
        sign = "-" if value.im < 0 else "+"
        return f"{_fmt_rat(value.re)}{sign}{_fmt_rat(abs(value.im))} i"
    return _fmt_rat(value)
