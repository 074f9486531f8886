"""Square matrices of polynomials (gl(m)-valued functions)."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from ..errors import ParseError
from .poly import Poly, min_cap
from .scalar import GaussianRational, as_scalar, conj

__all__ = ["PolyMatrix", "inverse_mod"]

_SCALAR_TYPES = (Rational, GaussianRational)


class PolyMatrix:
    __slots__ = ("nvars", "rows")

    def __init__(self, rows, nvars=None):
        rows = tuple(tuple(r) for r in rows)
        m = len(rows)
        if any(len(r) != m for r in rows):
            raise ValueError("PolyMatrix must be square")
        if nvars is None:
            if m == 0:
                raise ValueError("nvars required for an empty matrix")
            nvars = next(e.nvars for r in rows for e in r if isinstance(e, Poly))
        fixed = []
        for r in rows:
            fixed.append(tuple(e if isinstance(e, Poly) else Poly.constant(nvars, e) for e in r))
        for r in fixed:
            for e in r:
                if e.nvars != nvars:
                    raise ValueError("entries disagree on variable count")
        self.nvars = nvars
        self.rows = tuple(fixed)

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, m, nvars, cap=None):
        z = Poly.zero(nvars, cap)
        return cls([[z] * m for _ in range(m)], nvars)

    @classmethod
    def identity(cls, m, nvars, cap=None):
        one = Poly.constant(nvars, 1, cap)
        z = Poly.zero(nvars, cap)
        return cls([[one if i == j else z for j in range(m)] for i in range(m)], nvars)

    @classmethod
    def constant(cls, mat, nvars, cap=None):
        return cls([[Poly.constant(nvars, as_scalar(v), cap) for v in r] for r in mat], nvars)

    @classmethod
    def unit(cls, m, i, j, nvars, coeff=None):
        """Matrix unit E_ij scaled by ``coeff`` (a Poly or scalar)."""
        coeff = Poly.constant(nvars, 1) if coeff is None else coeff
        if not isinstance(coeff, Poly):
            coeff = Poly.constant(nvars, coeff)
        z = Poly.zero(nvars)
        return cls([[coeff if (a, b) == (i, j) else z for b in range(m)] for a in range(m)], nvars)

    # -- inspection ---------------------------------------------------
    @property
    def size(self):
        return len(self.rows)

    @property
    def cap(self):
        return min_cap(*(e.cap for r in self.rows for e in r))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for r in self.rows:
            yield from r

    def is_zero(self):
        return all(e.is_zero() for e in self.entries())

    @property
    def degree(self):
        return max((e.degree for e in self.entries()), default=-1)

    def is_constant(self):
        return all(e.is_constant() for e in self.entries())

    def constant_part(self):
        return [[e.constant_term() for e in r] for r in self.rows]

    # -- arithmetic ---------------------------------------------------
    def _check(self, other):
        if other.size != self.size or other.nvars != self.nvars:
            raise ValueError("matrix shape or variable count mismatch")

    def map(self, fn):
        return PolyMatrix([[fn(e) for e in r] for r in self.rows], self.nvars)

    def __add__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        self._check(other)
        return PolyMatrix([[a + b for a, b in zip(r1, r2)]
                           for r1, r2 in zip(self.rows, other.rows)], self.nvars)

    def __sub__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        self._check(other)
        return PolyMatrix([[a - b for a, b in zip(r1, r2)]
                           for r1, r2 in zip(self.rows, other.rows)], self.nvars)

    def __neg__(self):
        return self.map(lambda e: -e)

    def __mul__(self, other):
        if isinstance(other, (Poly,) + _SCALAR_TYPES):
            return self.map(lambda e: e * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Poly,) + _SCALAR_TYPES):
            return self.map(lambda e: other * e)
        return NotImplemented

    def __matmul__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        self._check(other)
        m = self.size
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = None
                for a, b in zip(r, c):
                    if a.is_zero() or b.is_zero():
                        continue
                    t = a * b
                    acc = t if acc is None else acc + t
                if acc is None:
                    acc = Poly.zero(self.nvars, min_cap(*(e.cap for e in r), *(e.cap for e in c)))
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, self.nvars) if m else self

    def apply(self, column):
        """Matrix times a column of Polys."""
        out = []
        for r in self.rows:
            acc = Poly.zero(self.nvars)
            for a, b in zip(r, column):
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def commutator(self, other):
        return self @ other - other @ self

    def trace(self):
        acc = Poly.zero(self.nvars, self.cap)
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return acc

    def transpose(self):
        return PolyMatrix(list(zip(*self.rows)), self.nvars)

    def conj_transpose(self):
        return PolyMatrix([[conj_poly(e) for e in r] for r in zip(*self.rows)], self.nvars)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.nvars == other.nvars and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    # -- calculus and truncation -------------------------------------
    def diff(self, i):
        return self.map(lambda e: e.diff(i))

    def truncate(self, cap):
        return self.map(lambda e: e.truncate(cap))

    def with_cap(self, cap):
        return self.map(lambda e: e.with_cap(cap))

    def homogeneous(self, r):
        return self.map(lambda e: e.homogeneous(r))

    def evaluate(self, point):
        return [[e.evaluate(point) for e in r] for r in self.rows]

    def scale_degrees(self, factor):
        return self.map(lambda e: e.scale_degrees(factor))

    def extend(self, nvars, offset=0):
        return PolyMatrix([[e.extend(nvars, offset) for e in r] for r in self.rows], nvars)

    def restrict(self, nvars):
        return PolyMatrix([[e.restrict(nvars) for e in r] for r in self.rows], nvars)

    # -- literals -----------------------------------------------------
    def to_literal(self):
        return [[e.to_literal() for e in r] for r in self.rows]

    @classmethod
    def from_literal(cls, lit, nvars, cap=None):
        if not isinstance(lit, list) or any(not isinstance(r, list) for r in lit):
            raise ParseError("matrix literal must be a list of rows")
        m = len(lit)
        if any(len(r) != m for r in lit):
            raise ParseError("matrix literal must be square")
        return cls([[Poly.from_literal(e, nvars, cap) for e in r] for r in lit], nvars)

    def format(self, names=None):
        return "[" + "; ".join(", ".join(e.format(names) for e in r) for r in self.rows) + "]"

    def __repr__(self):
        return f"PolyMatrix({self.format()})"


def conj_poly(p):
    return p.map_coeffs(conj)


def scalar_matrix_is_zero(mat):
    return all(v == 0 for r in mat for v in r)


def const_commutator(a, b):
    n = len(a)
    ab = [[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
    ba = [[sum((b[i][k] * a[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
    return [[ab[i][j] - ba[i][j] for j in range(n)] for i in range(n)]


def const_matrix(mat):
    return [[as_scalar(v) for v in r] for r in mat]


def inverse_mod(M, cap):
    """Inverse of ``M`` as a truncated series around its constant term.

    Writing ``M = C (I + K)`` with ``K`` free of constants, the inverse is
    ``sum_j (-K)^j C^-1``.  With ``cap=None`` the sum must terminate, which
    happens exactly when ``K`` is nilpotent.
    """
    from ..errors import NonInvertibleConstantTerm, ValidationError
    from . import linalg

    m, n = M.size, M.nvars
    cinv = linalg.inverse(M.constant_part())
    if cinv is None:
        raise NonInvertibleConstantTerm("constant term of the matrix is singular")
    Cinv = PolyMatrix.constant(cinv, n)
    K = Cinv @ M - PolyMatrix.identity(m, n)
    if cap is not None:
        K = K.truncate(cap)
        steps = cap
    else:
        power = K
        for _ in range(m - 1):
            power = power @ K
        if not power.is_zero():
            raise ValidationError("inverse is not polynomial; a degree cap is required")
        steps = m - 1
    total = PolyMatrix.identity(m, n)
    term = PolyMatrix.identity(m, n)
    for _ in range(steps):
        term = -(term @ K)
        if cap is not None:
            term = term.truncate(cap)
        if term.is_zero():
            break
        total = total + term
    out = total @ Cinv
    return out.truncate(cap) if cap is not None else out
