"""Alternating multivector fields with polynomial coefficients.

A grade-k multivector stores one coefficient per strictly increasing
index tuple ``(i_1 < ... < i_k)``; the coefficient is a :class:`Poly`
(scalar-valued) or a :class:`PolyMatrix` (gl(m)-valued).  Read as an
alternating function of coordinate one-forms,
``T(dx_{i_1}, ..., dx_{i_k})`` is exactly the stored coefficient.

The Schouten bracket is computed in the odd-variable picture: writing
``theta_i`` for ``d/dx_i``,

    [P, Q] = sum_i (P d<-/dtheta_i)(dQ/dx_i) - (dP/dx_i)(d->/dtheta_i Q)

which gives ``[X, f] = X(f)`` and the Lie bracket of vector fields.
"""
from __future__ import annotations

from itertools import combinations

from .matrix import PolyMatrix
from .poly import Poly, min_cap

__all__ = [
    "MultiVector",
    "lie_derivative",
    "merge_sign",
    "schouten_bracket",
    "sort_sign",
    "truncate",
    "wedge",
]


def sort_sign(idx):
    """(sign, sorted tuple) for an index tuple, sign 0 on repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


def merge_sign(a, b):
    """Sign of theta_a theta_b = sign * theta_(a+b sorted); 0 on overlap."""
    if set(a) & set(b):
        return 0, None
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1) ** inversions, tuple(sorted(a + b))


class MultiVector:
    __slots__ = ("nvars", "grade", "rank", "comps")

    def __init__(self, nvars, grade, comps=None, rank=None):
        self.nvars = nvars
        self.grade = grade
        self.rank = rank
        clean = {}
        for idx, c in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != grade or any(not 0 <= i < nvars for i in idx):
                raise ValueError(f"index {idx} invalid for grade {grade} on {nvars} variables")
            self._check_coeff(c)
            sign, key = sort_sign(idx)
            if sign == 0:
                continue
            c = c if sign == 1 else -c
            if key in clean:
                c = clean[key] + c
            clean[key] = c
        self.comps = {k: v for k, v in clean.items() if not v.is_zero()}

    def _check_coeff(self, c):
        if self.rank is None:
            if not isinstance(c, Poly):
                raise TypeError("scalar-valued multivector needs Poly coefficients")
        elif not isinstance(c, PolyMatrix) or c.size != self.rank:
            raise TypeError(f"matrix-valued multivector needs {self.rank}x{self.rank} PolyMatrix")
        if c.nvars != self.nvars:
            raise ValueError("coefficient variable count mismatch")

    @classmethod
    def _raw(cls, nvars, grade, comps, rank):
        mv = cls.__new__(cls)
        mv.nvars = nvars
        mv.grade = grade
        mv.rank = rank
        mv.comps = comps
        return mv

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars, grade, rank=None):
        return cls._raw(nvars, grade, {}, rank)

    @classmethod
    def function(cls, f):
        if isinstance(f, PolyMatrix):
            return cls(f.nvars, 0, {(): f}, rank=f.size)
        return cls(f.nvars, 0, {(): f})

    @classmethod
    def vector_field(cls, coeffs):
        coeffs = list(coeffs)
        n = coeffs[0].nvars
        rank = coeffs[0].size if isinstance(coeffs[0], PolyMatrix) else None
        return cls(n, 1, {(i,): c for i, c in enumerate(coeffs)}, rank)

    def zero_coeff(self):
        if self.rank is None:
            return Poly.zero(self.nvars)
        return PolyMatrix.zeros(self.rank, self.nvars)

    # -- inspection ---------------------------------------------------
    @property
    def is_scalar(self):
        return self.rank is None

    def index_sets(self):
        if self.grade < 0:
            return []
        return list(combinations(range(self.nvars), self.grade))

    def __getitem__(self, idx):
        """Coefficient on an arbitrary index tuple, antisymmetry applied."""
        sign, key = sort_sign(idx)
        if sign == 0:
            return self.zero_coeff()
        c = self.comps.get(key)
        if c is None:
            return self.zero_coeff()
        return c if sign == 1 else -c

    def items(self):
        return sorted(self.comps.items())

    def is_zero(self):
        return not self.comps

    @property
    def cap(self):
        return min_cap(*(c.cap for c in self.comps.values()))

    @property
    def degree(self):
        return max((c.degree for c in self.comps.values()), default=-1)

    def _same_shape(self, other):
        if (self.nvars, self.grade, self.rank) != (other.nvars, other.grade, other.rank):
            raise ValueError(
                f"multivector shape mismatch: {(self.nvars, self.grade, self.rank)} vs "
                f"{(other.nvars, other.grade, other.rank)}")

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiVector):
            return NotImplemented
        self._same_shape(other)
        out = dict(self.comps)
        for k, v in other.comps.items():
            s = out[k] + v if k in out else v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return MultiVector._raw(self.nvars, self.grade, out, self.rank)

    def __neg__(self):
        return MultiVector._raw(self.nvars, self.grade, {k: -v for k, v in self.comps.items()},
                                self.rank)

    def __sub__(self, other):
        if not isinstance(other, MultiVector):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        """Multiply every coefficient by a Poly or scalar on the left."""
        out = {}
        for k, v in self.comps.items():
            nv = c * v
            if not nv.is_zero():
                out[k] = nv
        return MultiVector._raw(self.nvars, self.grade, out, self.rank)

    def map(self, fn, rank=...):
        rank = self.rank if rank is ... else rank
        out = {}
        for k, v in self.comps.items():
            nv = fn(v)
            if not nv.is_zero():
                out[k] = nv
        return MultiVector._raw(self.nvars, self.grade, out, rank)

    def diff(self, i):
        return self.map(lambda c: c.diff(i))

    def truncate(self, cap):
        return self.map(lambda c: c.truncate(cap))

    def homogeneous(self, r):
        return self.map(lambda c: c.homogeneous(r))

    def extend(self, nvars, offset=0):
        out = {tuple(i + offset for i in k): v.extend(nvars, offset) for k, v in self.comps.items()}
        return MultiVector._raw(nvars, self.grade, out, self.rank)

    def evaluate(self, point):
        return {k: v.evaluate(point) for k, v in self.items()}

    def __eq__(self, other):
        if not isinstance(other, MultiVector):
            return NotImplemented
        return ((self.nvars, self.grade, self.rank) == (other.nvars, other.grade, other.rank)
                and self.comps == other.comps)

    def __hash__(self):
        return hash((self.nvars, self.grade, self.rank, frozenset(self.comps.items())))

    # -- literals -----------------------------------------------------
    def to_literal(self):
        return [[list(k), v.to_literal()] for k, v in self.items()]

    def format(self, names=None):
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        if not self.comps:
            return "0"
        parts = []
        for k, v in self.items():
            basis = "^".join(f"d{names[i]}" for i in k) or "1"
            parts.append(f"({v.format(names)})*{basis}")
        return " + ".join(parts)

    def __repr__(self):
        kind = "scalar" if self.rank is None else f"gl({self.rank})"
        return f"MultiVector(grade={self.grade}, {kind}, {self.format()})"


def wedge(a, b):
    """Exterior product; ``a`` must be scalar-valued."""
    if not a.is_scalar:
        raise TypeError("left factor of wedge must be scalar-valued")
    if a.nvars != b.nvars:
        raise ValueError("variable count mismatch")
    grade = a.grade + b.grade
    out = {}
    for ka, va in a.comps.items():
        for kb, vb in b.comps.items():
            sign, key = merge_sign(ka, kb)
            if sign == 0:
                continue
            t = va * vb
            if sign < 0:
                t = -t
            out[key] = out[key] + t if key in out else t
    out = {k: v for k, v in out.items() if not v.is_zero()}
    return MultiVector._raw(a.nvars, grade, out, b.rank)


def _dtheta(mv, i, right):
    out = {}
    k = mv.grade
    for key, v in mv.comps.items():
        if i not in key:
            continue
        pos = key.index(i)
        flips = (k - 1 - pos) if right else pos
        rest = key[:pos] + key[pos + 1:]
        out[rest] = -v if flips % 2 else v
    return MultiVector._raw(mv.nvars, k - 1, out, mv.rank)


def schouten_bracket(a, b):
    """Schouten-Nijenhuis bracket of multivectors.

    ``a`` must be scalar-valued; ``b`` may be gl(m)-valued, in which case
    the bracket acts entrywise.  The result has grade ``a.grade + b.grade - 1``
    (a grade of -1 denotes the zero bracket of two functions).
    """
    if not isinstance(a, MultiVector) or not isinstance(b, MultiVector):
        raise TypeError("schouten_bracket expects MultiVector operands")
    if a.nvars != b.nvars:
        raise ValueError(f"variable count mismatch: {a.nvars} vs {b.nvars}")
    if not a.is_scalar:
        raise TypeError("left operand of the Schouten bracket must be scalar-valued")
    grade = a.grade + b.grade - 1
    result = MultiVector.zero(a.nvars, grade, b.rank)
    if grade < 0:
        return result
    for i in range(a.nvars):
        if a.grade > 0:
            result = result + wedge(_dtheta(a, i, right=True), b.diff(i))
        if b.grade > 0:
            result = result - wedge(a.diff(i), _dtheta(b, i, right=False))
    return result


def lie_derivative(X, T):
    """Lie derivative along a scalar vector field.

    ``T`` may be a Poly, a PolyMatrix (entrywise), a OneForm or a
    MultiVector.
    """
    from .forms import OneForm

    if not isinstance(X, MultiVector) or X.grade != 1 or not X.is_scalar:
        raise TypeError("lie_derivative needs a scalar grade-1 MultiVector")
    n = X.nvars
    coeffs = [X[(i,)] for i in range(n)]
    if isinstance(T, Poly):
        acc = Poly.zero(n, T.cap)
        for i, c in enumerate(coeffs):
            if not c.is_zero():
                acc = acc + c * T.diff(i)
        return acc
    if isinstance(T, PolyMatrix):
        return T.map(lambda e: lie_derivative(X, e))
    if isinstance(T, OneForm):
        out = []
        for j in range(n):
            acc = lie_derivative(X, T[j])
            for i in range(n):
                if not T[i].is_zero():
                    acc = acc + T[i] * coeffs[i].diff(j)
            out.append(acc)
        return OneForm(out)
    if isinstance(T, MultiVector):
        return schouten_bracket(X, T)
    raise TypeError(f"cannot take a Lie derivative of {type(T).__name__}")


def truncate(obj, cap):
    """Drop all monomials of total degree above ``cap`` (idempotent)."""
    if cap < 0:
        raise ValueError("degree cap must be >= 0")
    if isinstance(obj, (list, tuple)):
        return type(obj)(truncate(o, cap) for o in obj)
    return obj.truncate(cap)
