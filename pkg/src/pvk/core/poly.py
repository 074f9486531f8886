"""Sparse multivariate polynomials with exact coefficients.

A :class:`Poly` maps exponent tuples to nonzero scalars.  An optional
degree cap turns it into a truncated power series: every monomial of total
degree above the cap is dropped, and arithmetic between capped operands
keeps the smaller cap.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from numbers import Rational

from ..errors import ParseError
from .scalar import GaussianRational, as_scalar, conj, format_scalar, parse_scalar

__all__ = ["Poly", "min_cap", "monomials"]

_SCALAR_TYPES = (Rational, GaussianRational)


def min_cap(*caps):
    real = [c for c in caps if c is not None]
    return min(real) if real else None


def _grlex_key(exps):
    return (sum(exps), exps)


class Poly:
    __slots__ = ("nvars", "_terms", "cap")

    def __init__(self, nvars, terms=None, cap=None):
        if cap is not None and cap < 0:
            raise ValueError("degree cap must be >= 0")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
            if cap is not None and sum(exps) > cap:
                continue
            c = as_scalar(c)
            if c != 0:
                clean[exps] = clean.get(exps, 0) + c
                if clean[exps] == 0:
                    del clean[exps]
        self.nvars = nvars
        self._terms = clean
        self.cap = cap

    @classmethod
    def _raw(cls, nvars, terms, cap):
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p.cap = cap
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars, cap=None):
        return cls._raw(nvars, {}, cap)

    @classmethod
    def constant(cls, nvars, c, cap=None):
        return cls(nvars, {(0,) * nvars: c}, cap)

    @classmethod
    def var(cls, nvars, i, cap=None):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, cap)

    @classmethod
    def monomial(cls, exps, c=1, cap=None):
        return cls(len(exps), {tuple(exps): c}, cap)

    # -- inspection ---------------------------------------------------
    @property
    def terms(self):
        """(exps, coeff) pairs in ascending graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]))

    def coeff(self, exps):
        return self._terms.get(tuple(exps), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_constant(self):
        return all(sum(e) == 0 for e in self._terms)

    def constant_term(self):
        return self._terms.get((0,) * self.nvars, Fraction(0))

    # -- arithmetic ---------------------------------------------------
    def _check(self, other):
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, _SCALAR_TYPES):
            return Poly.constant(self.nvars, other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        cap = min_cap(self.cap, other.cap)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        if cap is not None:
            out = {e: c for e, c in out.items() if sum(e) <= cap}
        return Poly._raw(self.nvars, out, cap)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self._terms.items()}, self.cap)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            other = as_scalar(other)
            if other == 0:
                return Poly._raw(self.nvars, {}, self.cap)
            return Poly._raw(self.nvars, {e: c * other for e, c in self._terms.items()}, self.cap)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        cap = min_cap(self.cap, other.cap)
        out = {}
        for e1, c1 in self._terms.items():
            d1 = sum(e1)
            for e2, c2 in other._terms.items():
                if cap is not None and d1 + sum(e2) > cap:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v == 0:
                    out.pop(e, None)
                else:
                    out[e] = v
        return Poly._raw(self.nvars, out, cap)

    def __rmul__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return self * (1 / as_scalar(other))
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Poly.constant(self.nvars, 1, self.cap)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, _SCALAR_TYPES):
            return self == Poly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    # -- calculus and truncation -------------------------------------
    def diff(self, i):
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return Poly._raw(self.nvars, out, self.cap)

    def truncate(self, cap):
        if cap < 0:
            raise ValueError("degree cap must be >= 0")
        out = {e: c for e, c in self._terms.items() if sum(e) <= cap}
        return Poly._raw(self.nvars, out, min_cap(self.cap, cap))

    def with_cap(self, cap):
        """Same terms under a new cap (terms above it dropped)."""
        if cap is None:
            return Poly._raw(self.nvars, dict(self._terms), None)
        return Poly(self.nvars, self._terms, cap)

    def homogeneous(self, r):
        return Poly._raw(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == r}, self.cap)

    def evaluate(self, point):
        point = [as_scalar(v) for v in point]
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        total = Fraction(0)
        for e, c in self._terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t = t * v ** k
            total = total + t
        return total

    def scale_degrees(self, factor):
        """Multiply each degree-r part by ``factor**r``."""
        factor = as_scalar(factor)
        return Poly._raw(self.nvars,
                         {e: c * factor ** sum(e) for e, c in self._terms.items()
                          if factor != 0 or sum(e) == 0},
                         self.cap)

    def map_coeffs(self, fn):
        return Poly(self.nvars, {e: fn(c) for e, c in self._terms.items()}, self.cap)

    def conjugate(self):
        return self.map_coeffs(conj)

    def is_real(self):
        return all(not isinstance(c, GaussianRational) for c in self._terms.values())

    # -- variable bookkeeping ----------------------------------------
    def extend(self, nvars, offset=0):
        """Embed into ``nvars`` variables, shifting existing ones by ``offset``."""
        if offset + self.nvars > nvars:
            raise ValueError("target has too few variables")
        pad_l = (0,) * offset
        pad_r = (0,) * (nvars - offset - self.nvars)
        return Poly._raw(nvars, {pad_l + e + pad_r: c for e, c in self._terms.items()}, self.cap)

    def restrict(self, nvars):
        """Drop trailing variables, which must not occur."""
        out = {}
        for e, c in self._terms.items():
            if any(e[nvars:]):
                raise ValueError("polynomial depends on dropped variables")
            out[e[:nvars]] = c
        return Poly._raw(nvars, out, self.cap)

    # -- literals -----------------------------------------------------
    def to_literal(self):
        return [{"coeff": format_scalar(c), "exps": list(e)} for e, c in self.terms]

    @classmethod
    def from_literal(cls, lit, nvars, cap=None):
        if isinstance(lit, (str, int)) and not isinstance(lit, bool):
            return cls.constant(nvars, parse_scalar(str(lit)), cap)
        if not isinstance(lit, list):
            raise ParseError(f"polynomial literal must be a list, got {lit!r}")
        terms = {}
        for mono in lit:
            if not isinstance(mono, dict) or "coeff" not in mono or "exps" not in mono:
                raise ParseError(f"bad monomial {mono!r}")
            exps = tuple(mono["exps"])
            if len(exps) != nvars or not all(isinstance(e, int) and e >= 0 for e in exps):
                raise ParseError(f"exponents {list(exps)} do not fit {nvars} variables")
            c = parse_scalar(mono["coeff"])
            terms[exps] = terms.get(exps, 0) + c
        return cls(nvars, terms, cap)

    def format(self, names=None):
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            cs = format_scalar(c)
            if " i" in cs:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self):
        return self.format()

    def __repr__(self):
        cap = f", cap={self.cap}" if self.cap is not None else ""
        return f"Poly({self.format()!r}, nvars={self.nvars}{cap})"


def monomials(nvars, degree, min_degree=0):
    """Exponent tuples with ``min_degree <= total degree <= degree``, graded-lex."""
    out = []
    for d in range(min_degree, degree + 1):
        block = set()
        for combo in combinations_with_replacement(range(nvars), d):
            exps = [0] * nvars
            for v in combo:
                exps[v] += 1
            block.add(tuple(exps))
        out.extend(sorted(block))
    return out
