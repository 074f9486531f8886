"""Poisson vector bundles in a fixed trivialization.

A bundle of rank m over coordinate space is stored as its connection
datum: one gl(m)-valued polynomial ``xi[i]`` per coordinate, so that the
bracket of a one-form with a section reads

    [alpha, s] = L_{sharp alpha} s + Xi(alpha) s,   Xi(alpha) = sum_i alpha_i xi[i].

The Maurer-Cartan residual measures the failure of
``[a, [b, s]] - [b, [a, s]] = [[a, b], s]`` on coordinate forms.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .core import linalg
from .core.forms import OneForm
from .core.matrix import PolyMatrix, inverse_mod
from .core.multivector import MultiVector, lie_derivative, schouten_bracket
from .core.poly import Poly
from .core.scalar import GaussianRational
from .errors import (
    AlgebraMismatch,
    IdentityFails,
    NotFlat,
    NotPoissonField,
    ValidationError,
    WitnessFails,
)
from .poisson import (
    PoissonStructure,
    d_pi,
    d_pi_coordinate,
    from_lie_algebra,
    one_form_bracket,
    product_poisson,
    sharp,
    solve_d_pi,
)

__all__ = [
    "ConnectionData",
    "GlCocycle",
    "Section",
    "action",
    "bracket",
    "canonical_bundle",
    "characteristic_class",
    "from_representation",
    "homogeneity_check",
    "is_unitary",
    "isotropy_representation",
    "mc_residual",
    "product_extension",
    "require_flat",
    "restrict_to_base",
]

FIELDS = ("Q", "Qi")


@dataclass(frozen=True)
class ConnectionData:
    poisson: PoissonStructure
    xi: tuple
    cap: int | None = None
    field: str = "Q"

    def __post_init__(self):
        xi = tuple(self.xi)
        n = self.poisson.nvars
        if len(xi) != n:
            raise ValidationError(f"need {n} components, got {len(xi)}")
        if self.field not in FIELDS:
            raise ValidationError(f"unknown field {self.field!r}")
        sizes = {x.size for x in xi}
        if len(sizes) > 1:
            raise ValidationError(f"components disagree on rank: {sorted(sizes)}")
        if any(x.nvars != n for x in xi):
            raise ValidationError("component variable count does not match the Poisson structure")
        if self.cap is not None:
            xi = tuple(x.with_cap(self.cap) for x in xi)
        if self.field == "Q" and any(not e.is_real() for x in xi for e in x.entries()):
            raise ValidationError("complex coefficients need field 'Qi'")
        object.__setattr__(self, "xi", xi)

    @property
    def rank(self):
        return self.xi[0].size if self.xi else 0

    @property
    def nvars(self):
        return self.poisson.nvars

    def of(self, alpha):
        """``Xi(alpha)`` for a one-form."""
        acc = PolyMatrix.zeros(self.rank, self.nvars, self.cap)
        for a, x in zip(alpha, self.xi):
            if not a.is_zero():
                acc = acc + a * x
        return acc

    def as_multivector(self):
        return MultiVector.vector_field(self.xi)

    def replace(self, xi=None, cap=..., poisson=None):
        return ConnectionData(poisson or self.poisson, self.xi if xi is None else tuple(xi),
                              self.cap if cap is ... else cap, self.field)

    def truncate(self, cap):
        return self.replace([x.truncate(cap) for x in self.xi])

    def is_constant(self):
        return all(x.is_constant() for x in self.xi)

    def constant_matrices(self):
        return [x.constant_part() for x in self.xi]

    def to_literal(self):
        return [x.to_literal() for x in self.xi]

    def __eq__(self, other):
        if not isinstance(other, ConnectionData):
            return NotImplemented
        return self.poisson == other.poisson and self.xi == other.xi

    def __hash__(self):
        return hash(self.xi)


@dataclass(frozen=True)
class Section:
    entries: tuple

    @classmethod
    def basis(cls, m, a, nvars, coeff=None):
        coeff = Poly.constant(nvars, 1) if coeff is None else coeff
        z = Poly.zero(nvars)
        return cls(tuple(coeff if b == a else z for b in range(m)))

    def __add__(self, other):
        return Section(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        return Section(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, f):
        return Section(tuple(f * a for a in self.entries))

    def truncate(self, cap):
        return Section(tuple(a.truncate(cap) for a in self.entries))

    def is_zero(self):
        return all(a.is_zero() for a in self.entries)


def from_representation(module, poisson=None):
    """Constant datum ``xi[i] = rho(e_i)`` over the linear structure of the algebra."""
    L = module.algebra
    if poisson is None:
        poisson = from_lie_algebra(L)
    elif poisson.algebra is not None and poisson.algebra != L:
        raise AlgebraMismatch("module and Poisson structure come from different algebras")
    if poisson.nvars != L.dim:
        raise AlgebraMismatch(f"algebra has dimension {L.dim}, Poisson structure {poisson.nvars}")
    n = poisson.nvars
    return ConnectionData(poisson, tuple(PolyMatrix.constant(mat, n) for mat in module.matrices))


def mc_residual(xi):
    """``F_ij = L_{v_i} xi[j] - L_{v_j} xi[i] - xi([dx_i, dx_j]) + [xi[i], xi[j]]``.

    ``v_i = sharp(dx_i)`` and ``[dx_i, dx_j] = d pi^{ij}``.  The first three
    terms are minus ``d_pi`` of the datum read as a gl(m)-valued vector field.
    """
    pi = xi.poisson
    F = -d_pi_coordinate(pi, xi.as_multivector())
    comm = {}
    for i, j in combinations(range(xi.nvars), 2):
        c = xi.xi[i].commutator(xi.xi[j])
        if not c.is_zero():
            comm[(i, j)] = c
    F = F + MultiVector(xi.nvars, 2, comm, xi.rank)
    return F.truncate(xi.cap) if xi.cap is not None else F


def require_flat(xi):
    F = mc_residual(xi)
    if not F.is_zero():
        key, _ = F.items()[0]
        raise NotFlat(f"Maurer-Cartan residual is nonzero on {key}")


def action(xi, alpha, s):
    """``[alpha, s] = L_{sharp alpha} s + Xi(alpha) s``."""
    X = sharp(xi.poisson, alpha)
    lie = [lie_derivative(X, e) for e in s.entries]
    lin = xi.of(alpha).apply(s.entries)
    out = Section(tuple(a + b for a, b in zip(lie, lin)))
    return out.truncate(xi.cap) if xi.cap is not None else out


def bracket(xi, f, s):
    """``{f, s} = [df, s]``."""
    return action(xi, OneForm.exact(f), s)


# -- isotropy ------------------------------------------------------------

@dataclass(frozen=True)
class IsotropyData:
    point: tuple
    basis: tuple  # covectors spanning ker sharp at the point
    matrices: tuple  # Xi(alpha)(p) per basis covector
    brackets: tuple  # structure constants c[a][b][c] of the conormal algebra


def _coordinates_in(basis, vec):
    rows = [{a: b[j] for a, b in enumerate(basis) if b[j] != 0} for j in range(len(vec))]
    return linalg.solve(rows, list(vec), len(basis))


def isotropy_representation(xi, point):
    """Conormal Lie algebra at ``point`` and its representation on the fiber."""
    from .core.scalar import as_scalar

    point = tuple(as_scalar(v) for v in point)
    pi = xi.poisson
    n = pi.nvars
    if len(point) != n:
        raise ValidationError(f"point must have {n} coordinates")
    require_flat(xi)
    # left kernel: sum_i alpha_i pi^{ij}(p) = 0 for all j
    rows = [{i: pi[(i, j)].evaluate(point) for i in range(n) if i != j} for j in range(n)]
    rows = [{i: v for i, v in r.items() if v != 0} for r in rows]
    basis = [tuple(v) for v in linalg.nullspace(rows, n)]
    mats = []
    for b in basis:
        M = xi.of(OneForm.constant(n, b)).evaluate(point)
        mats.append(tuple(tuple(r) for r in M))
    k = len(basis)
    consts = [[[Fraction(0)] * k for _ in range(k)] for _ in range(k)]
    forms = [OneForm.constant(n, b) for b in basis]
    for a, b in combinations(range(k), 2):
        val = one_form_bracket(pi, forms[a], forms[b]).evaluate(point)
        coords = _coordinates_in(basis, val)
        if coords is None:
            raise IdentityFails("conormal bracket leaves the isotropy kernel")
        for c, v in enumerate(coords):
            consts[a][b][c] = v
            consts[b][a][c] = -v
    for a, b in combinations(range(k), 2):
        lhs = [[sum((consts[a][b][c] * mats[c][r][s] for c in range(k)), Fraction(0))
                for s in range(xi.rank)] for r in range(xi.rank)]
        ab = linalg.matmul(mats[a], mats[b])
        ba = linalg.matmul(mats[b], mats[a])
        rhs = [[ab[r][s] - ba[r][s] for s in range(xi.rank)] for r in range(xi.rank)]
        if lhs != rhs:
            raise IdentityFails(f"isotropy matrices fail the bracket on pair {(a, b)}")
    frozen = tuple(tuple(tuple(c) for c in row) for row in consts)
    return IsotropyData(point, tuple(basis), tuple(mats), frozen)


# -- characteristic classes ----------------------------------------------

def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class GlCocycle:
    """``c(x_1..x_p) = sum_sigma sgn(sigma) tr(x_sigma(1) ... x_sigma(p))``, p odd."""

    arity: int
    name: str = ""

    def __post_init__(self):
        if self.arity < 1 or self.arity % 2 == 0:
            raise ValueError("gl cocycles u_k have odd arity 2k-1")
        if not self.name:
            object.__setattr__(self, "name", "tr" if self.arity == 1 else f"u{(self.arity + 1) // 2}")

    @classmethod
    def named(cls, name):
        if name == "tr":
            return cls(1)
        if name.startswith("u") and name[1:].isdigit() and int(name[1:]) >= 1:
            return cls(2 * int(name[1:]) - 1)
        raise ValidationError(f"unknown cocycle {name!r}; use tr or u<k>")

    def __call__(self, mats, cap=None):
        if len(mats) != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} arguments")
        total = None
        for perm in permutations(range(self.arity)):
            prod = mats[perm[0]]
            for p in perm[1:]:
                prod = prod @ mats[p]
                if cap is not None:
                    prod = prod.truncate(cap)
            t = prod.trace()
            if _perm_sign(perm) < 0:
                t = -t
            total = t if total is None else total + t
        return total


def class_multivector(xi, c):
    comps = {}
    for I in combinations(range(xi.nvars), c.arity):
        v = c([xi.xi[i] for i in I], xi.cap)
        if not v.is_zero():
            comps[I] = v
    return MultiVector(xi.nvars, c.arity, comps)


@dataclass(frozen=True)
class CharacteristicClass:
    cocycle: str
    multivector: MultiVector
    closed: bool
    exact_up_to_cap: bool
    cap: int
    primitive: MultiVector | None = None


def characteristic_class(xi, c, cap=None):
    """``Xi_c = c o Xi`` with closedness and a capped exactness test."""
    require_flat(xi)
    mv = class_multivector(xi, c)
    dmv = d_pi(xi.poisson, mv)
    if xi.cap is not None:
        dmv = dmv.truncate(xi.cap)
    closed = dmv.is_zero()
    if cap is None:
        cap = xi.cap if xi.cap is not None else max(mv.degree, 0)
    primitive = solve_d_pi(xi.poisson, mv, cap) if c.arity <= xi.nvars else None
    exact = mv.is_zero() or primitive is not None
    return CharacteristicClass(c.name, mv, closed, exact, cap, primitive)


def canonical_bundle(pi, density=None, cap=None):
    """Rank-one datum ``xi[i] = div_mu(sharp dx_i)`` for ``mu = density * dx_1^..^dx_n``.

    With the coordinate volume (``density=None``) this is the divergence of
    the coordinate Hamiltonian fields; a polynomial density with invertible
    constant term adds ``v_i(h) / h`` computed modulo ``cap``.
    """
    n = pi.nvars
    inv = None
    if density is not None:
        inv = inverse_mod(PolyMatrix([[density]], n), cap)[0, 0]
    xi = []
    for i in range(n):
        v = sharp(pi, OneForm.coordinate(n, i))
        acc = Poly.zero(n)
        for j in range(n):
            acc = acc + v[(j,)].diff(j)
        if density is not None:
            acc = acc + lie_derivative(v, density) * inv
            if cap is not None:
                acc = acc.truncate(cap)
        xi.append(PolyMatrix([[acc]], n))
    return ConnectionData(pi, tuple(xi), cap)


# -- homogeneity ---------------------------------------------------------

@dataclass(frozen=True)
class HomogeneityReport:
    der_xi: bool
    b: MultiVector
    lhs: MultiVector  # d_pi b
    rhs: MultiVector  # -L_X Xi_c
    holds: bool


def lie_derivative_xi(X, xi):
    """``(L_X Xi)^j = X(xi[j]) - sum_k xi[k] d_k X^j``."""
    n = xi.nvars
    out = []
    for j in range(n):
        acc = lie_derivative(X, xi.xi[j])
        for k in range(n):
            g = X[(j,)].diff(k)
            if not g.is_zero():
                acc = acc - xi.xi[k] * g
        out.append(acc.truncate(xi.cap) if xi.cap is not None else acc)
    return out


def homogeneity_check(xi, X, A, c):
    """Verify the derivation identity for ``(X, A)`` and ``d_pi b = -L_X Xi_c``."""
    pi = xi.poisson
    if X.grade != 1 or not X.is_scalar or X.nvars != xi.nvars:
        raise ValidationError("X must be a scalar vector field on the base")
    if not schouten_bracket(pi.bivector, X).is_zero():
        raise NotPoissonField("[pi, X] is nonzero")
    require_flat(xi)
    n, cap = xi.nvars, xi.cap
    lhs_der = lie_derivative_xi(X, xi)
    for j in range(n):
        v = sharp(pi, OneForm.coordinate(n, j))
        rhs = lie_derivative(v, A) + xi.xi[j].commutator(A)
        if cap is not None:
            rhs = rhs.truncate(cap)
        if lhs_der[j] != rhs:
            raise WitnessFails("der-Xi", j, (lhs_der[j], rhs))
    comps = {}
    for I in combinations(range(n), c.arity - 1):
        val = c([A] + [xi.xi[i] for i in I], cap)
        if not val.is_zero():
            comps[I] = val
    b = MultiVector(n, c.arity - 1, comps)
    lhs = d_pi(pi, b)
    rhs = -schouten_bracket(X, class_multivector(xi, c))
    if cap is not None:
        lhs, rhs = lhs.truncate(cap), rhs.truncate(cap)
    if lhs != rhs:
        raise IdentityFails("d_pi b differs from -L_X Xi_c although the derivation identity holds")
    return HomogeneityReport(True, b, lhs, rhs, True)


# -- unitarity and products ----------------------------------------------

def is_unitary(xi):
    """Every component skew-symmetric (real) or skew-Hermitian (complex)."""
    for x in xi.xi:
        if x.conj_transpose() != -x:
            return False
    return True


def has_imaginary_traces(xi):
    for x in xi.xi:
        for _, c in x.trace().terms:
            re = c.re if isinstance(c, GaussianRational) else c
            if re != 0:
                return False
    return True


def product_extension(xi, m):
    """``(xi[0..n-1], 0, ..., 0)`` over the base times a symplectic factor of dim 2m."""
    require_flat(xi)
    prod = product_poisson(xi.poisson, m)
    N = prod.nvars
    comps = [x.extend(N) for x in xi.xi]
    comps += [PolyMatrix.zeros(xi.rank, N)] * (2 * m)
    return ConnectionData(prod, tuple(comps), xi.cap, xi.field)


def restrict_to_base(xi, n):
    """Inverse of :func:`product_extension` onto the first ``n`` coordinates."""
    pi = xi.poisson
    if any(not x.is_zero() for x in xi.xi[n:]):
        raise ValidationError("fiber components are nonzero; datum is not a product extension")
    base_comps = {}
    for (i, j), c in pi.bivector.items():
        if i < n and j < n:
            base_comps[(i, j)] = c.restrict(n)
        elif i < n <= j:
            raise ValidationError("Poisson structure couples base and fiber")
    try:
        xi_base = [x.restrict(n) for x in xi.xi[:n]]
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    base = PoissonStructure(MultiVector(n, 2, base_comps), pi.algebra, pi.names[:n],
                            check=False)
    return ConnectionData(base, tuple(xi_base), xi.cap, xi.field)
