"""Polynomial Poisson structures and the operators built on them.

Conventions, all checked by the test-suite:

* ``{f, g} = sum_{i<j} pi^{ij} (f_i g_j - f_j g_i)`` and ``X_f = {f, .}``;
  ``sharp(df) = X_f``.
* One-form bracket ``[a, b] = L_{sharp a} b - L_{sharp b} a - d pi(a, b)``,
  so that ``[df, dg] = d{f, g}``.
* ``d_pi`` is minus the algebroid differential of the cotangent algebroid,
  ``d_pi f = X_f`` on functions, and agrees with ``-[pi, .]`` in every grade.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .core import linalg
from .core.forms import OneForm
from .core.matrix import PolyMatrix
from .core.multivector import MultiVector, lie_derivative, schouten_bracket
from .core.poly import Poly, monomials
from .errors import JacobiViolation, NonLinearStructure, ParseError
from .lie import LieAlgebra, preset_algebra

__all__ = [
    "PoissonStructure",
    "d_pi",
    "d_pi_coordinate",
    "from_lie_algebra",
    "hamiltonian",
    "one_form_bracket",
    "pairing",
    "poisson_bracket",
    "poisson_cohomology_dims",
    "preset_poisson",
    "product_poisson",
    "sharp",
    "solve_d_pi",
]


@dataclass(frozen=True, eq=False, init=False)
class PoissonStructure:
    bivector: MultiVector
    algebra: LieAlgebra | None = None
    names: tuple = ()

    def __init__(self, bivector, algebra=None, names=(), check=True):
        if bivector.grade != 2 or not bivector.is_scalar:
            raise TypeError("a Poisson structure is a scalar bivector")
        object.__setattr__(self, "bivector", bivector)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "names", tuple(names) or default_names(bivector.nvars))
        if check:
            jac = schouten_bracket(bivector, bivector)
            if not jac.is_zero():
                key, val = jac.items()[0]
                raise JacobiViolation(key, val.format(self.names))

    @property
    def nvars(self):
        return self.bivector.nvars

    def __getitem__(self, ij):
        return self.bivector[ij]

    @property
    def degree(self):
        return self.bivector.degree

    @property
    def is_constant(self):
        return self.degree <= 0

    @property
    def is_linear(self):
        """Every coefficient homogeneous of degree one (the zero structure counts)."""
        return all(c.homogeneous(1) == c for _, c in self.bivector.items())

    @property
    def kind(self):
        if self.bivector.is_zero():
            return "zero"
        if self.is_constant:
            return "constant"
        return "linear" if self.is_linear else "polynomial"

    def __eq__(self, other):
        return isinstance(other, PoissonStructure) and self.bivector == other.bivector

    def __hash__(self):
        return hash(self.bivector)

    def to_literal(self):
        return [[i, j, c.to_literal()] for (i, j), c in self.bivector.items()]


def default_names(n):
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


def from_lie_algebra(L):
    """Linear structure on the dual: ``{x_i, x_j} = sum_k c_ij^k x_k``."""
    n = L.dim
    comps = {}
    for i, j in combinations(range(n), 2):
        p = Poly.zero(n)
        for k, c in enumerate(L.bracket(i, j)):
            if c != 0:
                p = p + Poly.var(n, k) * c
        if not p.is_zero():
            comps[(i, j)] = p
    return PoissonStructure(MultiVector(n, 2, comps), L, check=False)


def preset_poisson(name):
    """Linear structure of a preset algebra, or ``symplectic`` / ``zero:n``."""
    if name == "symplectic":
        return PoissonStructure(MultiVector(2, 2, {(0, 1): Poly.constant(2, 1)}), check=False)
    if name.startswith("zero:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise ParseError(f"bad zero preset {name!r}") from None
        return PoissonStructure(MultiVector.zero(n, 2), check=False)
    return from_lie_algebra(preset_algebra(name))


def poisson_bracket(pi, f, g):
    acc = Poly.zero(pi.nvars, f.cap if g.cap is None else g.cap)
    for (i, j), c in pi.bivector.items():
        t = f.diff(i) * g.diff(j) - f.diff(j) * g.diff(i)
        if not t.is_zero():
            acc = acc + c * t
    return acc


def sharp(pi, alpha):
    """Anchor ``sum_j (sum_i alpha_i pi^{ij}) d/dx_j``."""
    n = pi.nvars
    coeffs = []
    for j in range(n):
        acc = Poly.zero(n)
        for i in range(n):
            if i != j and not alpha[i].is_zero():
                c = pi[(i, j)]
                if not c.is_zero():
                    acc = acc + alpha[i] * c
        coeffs.append(acc)
    return MultiVector.vector_field(coeffs)


def hamiltonian(pi, f):
    return sharp(pi, OneForm.exact(f))


def _pi_pair(pi, alpha, beta):
    n = pi.nvars
    acc = Poly.zero(n)
    for (i, j), c in pi.bivector.items():
        t = alpha[i] * beta[j] - alpha[j] * beta[i]
        if not t.is_zero():
            acc = acc + c * t
    return acc


def one_form_bracket(pi, alpha, beta):
    la = lie_derivative(sharp(pi, alpha), beta)
    lb = lie_derivative(sharp(pi, beta), alpha)
    return la - lb - OneForm.exact(_pi_pair(pi, alpha, beta))


def pairing(pi, alpha):
    """``<pi, d alpha>`` with ``<d/dx ^ d/dy, dx ^ dy> = 1``."""
    acc = Poly.zero(pi.nvars)
    for (i, j), c in alpha.exterior_derivative().items():
        if not c.is_zero():
            acc = acc + pi[(i, j)] * c
    return acc


def d_pi(pi, T):
    """Lichnerowicz differential; ``-[pi, T]`` for scalar T, coordinate formula otherwise."""
    if T.nvars != pi.nvars:
        raise ValueError(f"variable count mismatch: {pi.nvars} vs {T.nvars}")
    if T.is_scalar:
        return -schouten_bracket(pi.bivector, T)
    return d_pi_coordinate(pi, T)


def d_pi_coordinate(pi, T):
    """``d_pi`` evaluated on coordinate one-forms.

    ``(d_pi T)(dx_{a_0}, ..., dx_{a_k})`` is minus the algebroid differential

        sum_i (-1)^i v_{a_i} T(..^a_i..)
          + sum_{i<j} (-1)^(i+j) sum_c d_c pi^{a_i a_j} T(dx_c, ..^a_i..^a_j..)

    with ``v_a = sharp(dx_a)``.  Works for scalar and matrix coefficients.
    """
    n = pi.nvars
    k = T.grade
    anchors = [sharp(pi, OneForm.coordinate(n, a)) for a in range(n)]
    dpi = {key: [c.diff(l) for l in range(n)] for key, c in pi.bivector.items()}
    out = {}
    for S in combinations(range(n), k + 1):
        acc = T.zero_coeff()
        for i in range(k + 1):
            rest = S[:i] + S[i + 1:]
            t = T[rest]
            if not t.is_zero():
                term = lie_derivative(anchors[S[i]], t)
                acc = acc + term if i % 2 == 0 else acc - term
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                grads = dpi.get((S[i], S[j]))
                if grads is None:
                    continue
                rest = tuple(s for t, s in enumerate(S) if t not in (i, j))
                for l, g in enumerate(grads):
                    if g.is_zero():
                        continue
                    t = T[(l,) + rest]
                    if t.is_zero():
                        continue
                    term = t * g if isinstance(t, PolyMatrix) else g * t
                    acc = acc + term if (i + j) % 2 == 0 else acc - term
        if not acc.is_zero():
            out[S] = -acc
    return MultiVector._raw(n, k + 1, out, T.rank)


def product_poisson(base, m):
    """``base`` plus the standard symplectic form on ``2m`` trailing coordinates.

    Fiber pairs are ``(u_a, v_a) = (x_{n+2a}, x_{n+2a+1})`` with ``{u_a, v_a} = 1``.
    """
    n = base.nvars
    N = n + 2 * m
    comps = {k: c.extend(N) for k, c in base.bivector.items()}
    for a in range(m):
        comps[(n + 2 * a, n + 2 * a + 1)] = Poly.constant(N, 1)
    names = tuple(base.names)
    if m == 1:
        names += ("u", "v")
    else:
        for a in range(m):
            names += (f"u{a + 1}", f"v{a + 1}")
    return PoissonStructure(MultiVector(N, 2, comps), base.algebra, names)


# -- cohomology and exactness ----------------------------------------

def _basis(n, k, degree):
    return [(S, e) for S in combinations(range(n), k) for e in monomials(n, degree)]


def _basis_element(n, k, S, e):
    return MultiVector._raw(n, k, {S: Poly.monomial(e)}, None)


def _coords(mv, index):
    out = {}
    for S, c in mv.items():
        for e, v in c.terms:
            col = index.get((S, e))
            if col is None:
                return None
            out[col] = v
    return out


def _require_filtered(pi):
    if pi.degree > 1:
        raise NonLinearStructure(
            f"Poisson structure of degree {pi.degree} does not preserve the degree filtration")


def _d_rank(pi, k, degree):
    n = pi.nvars
    if k < 0 or k >= n:
        return 0
    target = {b: t for t, b in enumerate(_basis(n, k + 1, degree))}
    ech = linalg.Echelon()
    for S, e in _basis(n, k, degree):
        img = d_pi(pi, _basis_element(n, k, S, e))
        row = _coords(img, target)
        if row is None:
            raise NonLinearStructure("d_pi leaves the truncated complex")
        ech.add(row)
    return ech.rank


def poisson_cohomology_dims(pi, cap, grades):
    """Dimensions of ``H^k_pi`` on multivectors with coefficients of degree <= cap.

    Requires ``deg pi <= 1`` so that ``d_pi`` does not raise degrees.
    """
    _require_filtered(pi)
    n = pi.nvars
    nmono = len(monomials(n, cap))
    dims = []
    ranks = {}
    for k in grades:
        if k < 0 or k > n:
            dims.append(0)
            continue
        for j in (k, k - 1):
            if j not in ranks:
                ranks[j] = _d_rank(pi, j, cap)
        size = len(list(combinations(range(n), k))) * nmono
        dims.append(size - ranks[k] - ranks[k - 1])
    return dims


def solve_d_pi(pi, target, cap):
    """Find a scalar ``T`` with coefficients of degree <= cap and ``d_pi T = target``.

    Returns ``None`` if no such ``T`` exists.  Equality is exact, so for a
    non-filtered structure the images are compared untruncated.
    """
    n = pi.nvars
    k = target.grade - 1
    if k < 0:
        return None if not target.is_zero() else MultiVector.zero(n, -1)
    basis = _basis(n, k, cap)
    cols = {}
    for t, (S, e) in enumerate(basis):
        img = d_pi(pi, _basis_element(n, k, S, e))
        for key, c in img.items():
            for ex, v in c.terms:
                cols.setdefault((key, ex), {})[t] = v
    rhs = {}
    for key, c in target.items():
        for ex, v in c.terms:
            rhs[(key, ex)] = v
    rows, b = [], []
    for r in sorted(set(cols) | set(rhs)):
        rows.append(cols.get(r, {}))
        b.append(rhs.get(r, Fraction(0)))
    x = linalg.solve(rows, b, len(basis))
    if x is None:
        return None
    comps = {}
    for (S, e), v in zip(basis, x):
        if v != 0:
            comps[S] = comps.get(S, Poly.zero(n)) + Poly.monomial(e, v)
    return MultiVector(n, k, comps)


def bracket_table(pi, point):
    """``{x_i, x_j}(p)`` as a dense antisymmetric matrix of scalars."""
    n = pi.nvars
    return [[pi[(i, j)].evaluate(point) if i != j else Fraction(0) for j in range(n)]
            for i in range(n)]

