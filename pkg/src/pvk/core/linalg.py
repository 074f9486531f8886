"""Exact Gaussian elimination over Q / Q(i).

Sparse rows are ``dict[int, scalar]``.  Pivots are always taken at the
smallest remaining column and free variables are set to zero, so every
solve is reproducible for identical input.
"""
from __future__ import annotations

from fractions import Fraction

__all__ = [
    "Echelon",
    "dense_to_rows",
    "det",
    "identity",
    "inverse",
    "matmul",
    "nullspace",
    "rank",
    "solve",
]


def _axpy(row, factor, other):
    """row -= factor * other, in place, dropping zeros."""
    for c, v in other.items():
        nv = row.get(c, 0) - factor * v
        if nv == 0:
            row.pop(c, None)
        else:
            row[c] = nv


class Echelon:
    """Incremental row echelon form with an optional right-hand side.

    Rows are reduced against existing pivots as they are added; a row that
    reduces to zero with a nonzero right-hand side marks the system as
    inconsistent.
    """

    def __init__(self):
        self.pivots = {}  # col -> (row with row[col] == 1, rhs)
        self.consistent = True

    def add(self, row, rhs=Fraction(0)):
        row = {c: v for c, v in row.items() if v != 0}
        while row:
            col = min(row)
            hit = self.pivots.get(col)
            if hit is None:
                lead = row[col]
                if lead != 1:
                    inv = 1 / lead
                    row = {c: v * inv for c, v in row.items()}
                    rhs = rhs * inv
                self.pivots[col] = (row, rhs)
                return True
            prow, prhs = hit
            factor = row[col]
            _axpy(row, factor, prow)
            rhs = rhs - factor * prhs
        if rhs != 0:
            self.consistent = False
        return False

    @property
    def rank(self):
        return len(self.pivots)

    def back_substitute(self, ncols, fixed=None):
        """Solution with free variables zero (or as given in ``fixed``)."""
        x = [Fraction(0)] * ncols
        if fixed:
            for c, v in fixed.items():
                x[c] = v
        for col in sorted(self.pivots, reverse=True):
            row, rhs = self.pivots[col]
            acc = rhs
            for c, v in row.items():
                if c != col:
                    acc = acc - v * x[c]
            x[col] = acc
        return x


def solve(rows, rhs, ncols):
    """Solve ``rows @ x = rhs``; ``None`` when inconsistent."""
    ech = Echelon()
    for row, b in zip(rows, rhs):
        ech.add(row, b)
    if not ech.consistent:
        return None
    return ech.back_substitute(ncols)


def rank(rows):
    ech = Echelon()
    for row in rows:
        ech.add(row)
    return ech.rank


def nullspace(rows, ncols):
    """Basis of the right kernel, one vector per free column (ascending)."""
    ech = Echelon()
    for row in rows:
        ech.add(row)
    basis = []
    for free in range(ncols):
        if free in ech.pivots:
            continue
        basis.append(ech.back_substitute(ncols, {free: Fraction(1)}))
    return basis


def dense_to_rows(mat):
    return [{j: v for j, v in enumerate(r) if v != 0} for r in mat]


def identity(m):
    return [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]


def matmul(a, b):
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        out.append([sum((row[k] * b[k][j] for k in range(inner) if row[k] != 0),
                        Fraction(0)) for j in range(cols)])
    return out


def det(mat):
    m = [list(r) for r in mat]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d = d * m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f != 0:
                for k in range(c, n):
                    m[r][k] = m[r][k] - f * m[c][k]
    return d


def inverse(mat):
    """Inverse of a square constant matrix, or ``None`` if singular."""
    n = len(mat)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(mat)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]
