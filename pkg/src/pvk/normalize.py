"""Degree decomposition, dilation, gauge transformations and formal normalization.

Over a linear Poisson structure with algebra g, write ``v_i = sharp(dx_i)``
and ``Xi_0`` for the constant part of a flat datum.  The space
``H_r`` of gl(m)-valued polynomials homogeneous of degree r is a g-module
under ``rho_i(A) = L_{v_i} A + [Xi_0^i, A]``.  Once degrees ``1..r-1``
vanish, the degree-r part of the Maurer-Cartan equation says that
``e_i -> Xi_r^i`` is a CE 1-cocycle in ``H_r``, and the gauge ``I + A``
changes that cochain by ``-dA``.  Normalization solves ``dA = Xi_r`` degree
by degree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .core.matrix import PolyMatrix, inverse_mod
from .core.multivector import MultiVector, lie_derivative
from .core.forms import OneForm
from .core.poly import Poly, min_cap, monomials
from .core.scalar import GaussianRational, make_scalar
from .core import linalg
from .errors import (
    IdentityFails,
    InternalError,
    NonLinearStructure,
    NotACocycle,
    NotSemisimple,
    ObstructionFound,
    UnitaryObstruction,
    ValidationError,
)
from .lie import CECochain, LieModule, ce_cohomology_dims, killing_form, solve_coboundary, validate_lie_algebra
from .poisson import PoissonStructure, sharp
from .pvb import ConnectionData, is_unitary, mc_residual, require_flat

__all__ = [
    "GaugeTransform",
    "NormalizationResult",
    "dilation_homotopy",
    "formal_normalize",
    "gauge_transform",
    "homogeneous_module",
    "homogeneous_parts",
    "line_bundle_moduli_dim",
    "linear_algebra",
    "trace_word_invariants",
]


# -- decomposition and dilation ------------------------------------------

def homogeneous_parts(xi):
    """Data ``Xi^(0), ..., Xi^(d)`` with homogeneous coefficients summing to ``xi``."""
    top = max((x.degree for x in xi.xi), default=-1)
    if xi.cap is not None:
        top = min(top, xi.cap)
    return [xi.replace([x.homogeneous(r) for x in xi.xi]) for r in range(max(top, 0) + 1)]


def _require_linear(pi):
    if not pi.is_linear:
        raise NonLinearStructure(f"Poisson structure is {pi.kind}, a linear one is required")


def dilation_homotopy(xi, t):
    """``Xi_t = sum_r t^r Xi^(r)``.

    A scalar ``t`` gives the datum over the same base.  ``t="t"`` gives a
    datum over the base with one extra coordinate ``t`` (a Casimir), on
    which flatness can be checked as a polynomial identity in ``t``; the
    result is uncapped so that powers of ``t`` are not truncated.
    """
    pi = xi.poisson
    _require_linear(pi)
    require_flat(xi)
    if not isinstance(t, str):
        return xi.replace([x.scale_degrees(t) for x in xi.xi])
    n = pi.nvars
    N = n + 1
    ext = PoissonStructure(pi.bivector.extend(N), pi.algebra, tuple(pi.names) + (t,), check=False)
    tvar = Poly.var(N, n)
    comps = []
    for x in xi.xi:
        acc = PolyMatrix.zeros(xi.rank, N)
        for r in range(x.degree + 1):
            part = x.homogeneous(r).extend(N).with_cap(None)
            if not part.is_zero():
                acc = acc + part * tvar ** r
        comps.append(acc)
    comps.append(PolyMatrix.zeros(xi.rank, N))
    return ConnectionData(ext, tuple(comps), None, xi.field)


def base_degree_truncate(mv, nvars, cap):
    """Drop monomials whose degree in the first ``nvars`` variables exceeds ``cap``."""
    def cut(p):
        return Poly(p.nvars, {e: c for e, c in p.terms if sum(e[:nvars]) <= cap})

    return mv.map(lambda c: c.map(cut) if isinstance(c, PolyMatrix) else cut(c))


# -- gauge transformations -----------------------------------------------

@dataclass(frozen=True)
class GaugeTransform:
    """Invertible polynomial matrix; the inverse is cached modulo ``cap``."""

    phi: PolyMatrix
    cap: int | None = None
    inverse: PolyMatrix = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        phi = self.phi if self.cap is None else self.phi.truncate(self.cap)
        object.__setattr__(self, "phi", phi)
        if self.inverse is None:
            object.__setattr__(self, "inverse", inverse_mod(phi, self.cap))

    @classmethod
    def identity(cls, m, nvars, cap=None):
        return cls(PolyMatrix.identity(m, nvars), cap)

    def compose(self, first):
        """``self o first``: apply ``first``, then ``self``."""
        cap = min_cap(self.cap, first.cap)
        prod = self.phi @ first.phi
        return GaugeTransform(prod if cap is None else prod.truncate(cap), cap)

    def check(self):
        ident = self.phi @ self.inverse
        if self.cap is not None:
            ident = ident.truncate(self.cap)
        return ident == PolyMatrix.identity(self.phi.size, self.phi.nvars)


def gauge_transform(xi, phi):
    """``Phi* Xi = Phi Xi Phi^-1 + (d_pi Phi) Phi^-1``.

    On coordinate forms ``(d_pi Phi)(dx_i) = -L_{v_i} Phi``, so component i
    is ``Phi xi[i] Phi^-1 - (L_{v_i} Phi) Phi^-1``.
    """
    if not isinstance(phi, GaugeTransform):
        phi = GaugeTransform(phi, xi.cap)
    cap = min_cap(xi.cap, phi.cap)
    if phi.phi.size != xi.rank or phi.phi.nvars != xi.nvars:
        raise ValidationError("gauge matrix does not fit the datum")
    P, Pinv = phi.phi, phi.inverse
    n = xi.nvars
    out = []
    for i in range(n):
        v = sharp(xi.poisson, OneForm.coordinate(n, i))
        left = P @ xi.xi[i]
        if cap is not None:
            left = left.truncate(cap)
        term = left - lie_derivative(v, P)
        term = term @ Pinv
        out.append(term.truncate(cap) if cap is not None else term)
    return ConnectionData(xi.poisson, tuple(out), cap, xi.field)


# -- the degree-r modules --------------------------------------------------

def linear_algebra(pi):
    """The Lie algebra with ``{x_i, x_j} = sum_k c_ij^k x_k``."""
    _require_linear(pi)
    n = pi.nvars
    entries = {}
    for (i, j), c in pi.bivector.items():
        row = {}
        for e, v in c.terms:
            row[e.index(1)] = v
        entries[(i, j)] = row
    names = pi.algebra.names if pi.algebra is not None else pi.names
    name = pi.algebra.name if pi.algebra is not None else None
    return validate_lie_algebra((n, entries), names, name)


@dataclass(frozen=True)
class HomogeneousModule:
    module: LieModule
    degree: int
    rank: int
    monos: tuple

    def coords(self, mat):
        """Coordinates of a degree-r homogeneous PolyMatrix."""
        m = self.rank
        index = {e: k for k, e in enumerate(self.monos)}
        out = {}
        for a in range(m):
            for b in range(m):
                for e, v in mat[a, b].terms:
                    out[index[e] * m * m + a * m + b] = v
        return out

    def matrix(self, vec, nvars):
        m = self.rank
        rows = [[{} for _ in range(m)] for _ in range(m)]
        for k, v in (vec.items() if isinstance(vec, dict) else enumerate(vec)):
            if v == 0:
                continue
            mono, rest = divmod(k, m * m)
            a, b = divmod(rest, m)
            rows[a][b][self.monos[mono]] = v
        return PolyMatrix([[Poly(nvars, t) for t in r] for r in rows], nvars)


def homogeneous_module(pi, L, xi0, r):
    """``H_r`` with ``rho_i(A) = L_{v_i} A + [xi0[i], A]`` as a sparse LieModule."""
    n = pi.nvars
    m = len(xi0[0]) if xi0 else 1
    monos = tuple(monomials(n, r, r))
    index = {e: k for k, e in enumerate(monos)}
    anchors = [sharp(pi, OneForm.coordinate(n, i)) for i in range(n)]
    actions = []
    mm = m * m
    for i in range(n):
        X = anchors[i]
        rows = {}

        def put(row, col, val):
            if val != 0:
                tgt = rows.setdefault(row, {})
                tgt[col] = tgt.get(col, 0) + val

        Xi = xi0[i]
        for k, e in enumerate(monos):
            image = lie_derivative(X, Poly.monomial(e))
            for a, b in product(range(m), repeat=2):
                col = k * mm + a * m + b
                for e2, v in image.terms:
                    put(index[e2] * mm + a * m + b, col, v)
                # [Xi, E_ab] = sum_c Xi[c][a] E_cb - Xi[b][c] E_ac
                for c in range(m):
                    put(k * mm + c * m + b, col, Xi[c][a])
                    put(k * mm + a * m + c, col, -Xi[b][c])
        rows = {r_: {c: v for c, v in row.items() if v != 0} for r_, row in rows.items()}
        actions.append({r_: row for r_, row in rows.items() if row})
    mod = LieModule.from_sparse(L, len(monos) * mm, actions, name=f"H{r}")
    return HomogeneousModule(mod, r, m, monos)


# -- normalization ---------------------------------------------------------

@dataclass(frozen=True)
class NormalizationResult:
    phi: GaugeTransform
    xi0: ConnectionData
    module: LieModule
    degrees_cleared: tuple
    transformed: ConnectionData
    unitary: bool = False


def _skew_basis(hm, complex_field):
    """Q-basis of the skew-symmetric / skew-Hermitian part of ``H_r``, as sparse vectors."""
    m = hm.rank
    mm = m * m
    out = []
    i = GaussianRational(0, 1)
    for k in range(len(hm.monos)):
        base = k * mm
        for a in range(m):
            for b in range(a + 1, m):
                out.append({base + a * m + b: Fraction(1), base + b * m + a: Fraction(-1)})
                if complex_field:
                    out.append({base + a * m + b: i, base + b * m + a: i})
            if complex_field:
                out.append({base + a * m + a: i})
    return out


def _split_re_im(v):
    if isinstance(v, GaussianRational):
        return v.re, v.im
    return v, Fraction(0)


def _solve_skew(hm, target_cochain, complex_field):
    """Solve ``rho_i(A) = target_i`` with A in the skew part; ``None`` if impossible."""
    basis = _skew_basis(hm, complex_field)
    mod = hm.module
    cols = []
    for vec in basis:
        img = {}
        for i in range(mod.algebra.dim):
            for row, val in mod.act(i, vec).items():
                img[(i, row)] = val
        cols.append(img)
    target = target_cochain.sparse()
    keys = set()
    for img in cols:
        keys.update(img)
    for (i,), vec in target.items():
        keys.update((i, r) for r in vec)
    rows, rhs = [], []
    for key in sorted(keys):
        i, row = key
        b = target.get((i,), {}).get(row, Fraction(0))
        coeffs = {t: img[key] for t, img in enumerate(cols) if key in img}
        re_row = {t: _split_re_im(v)[0] for t, v in coeffs.items()}
        im_row = {t: _split_re_im(v)[1] for t, v in coeffs.items()}
        bre, bim = _split_re_im(b)
        rows.append(re_row)
        rhs.append(bre)
        rows.append(im_row)
        rhs.append(bim)
    x = linalg.solve(rows, rhs, len(basis))
    if x is None:
        return None
    out = {}
    for t, vec in zip(x, basis):
        if t == 0:
            continue
        for k, v in vec.items():
            out[k] = out.get(k, 0) + t * v
    return {k: make_scalar(*_split_re_im(v)) for k, v in out.items() if v != 0}


def _exp_mod(A, cap):
    m, n = A.size, A.nvars
    total = PolyMatrix.identity(m, n)
    term = PolyMatrix.identity(m, n)
    k = 1
    while True:
        term = (term @ A).truncate(cap) * Fraction(1, k)
        if term.is_zero():
            return total
        total = total + term
        k += 1


def formal_normalize(xi, cap, force=False, unitary=None):
    """Gauge ``xi`` to its constant part modulo degree ``cap``.

    Raises :class:`NotSemisimple` for a non-semisimple algebra unless
    ``force``, :class:`ObstructionFound` (with the degree and the closed
    cochain) when a step has no solution, and :class:`NotACocycle` if the
    input is not flat.
    """
    pi = xi.poisson
    _require_linear(pi)
    if cap is None or cap < 0:
        raise ValidationError("formal normalization needs a degree cap >= 0")
    L = linear_algebra(pi)
    _, semisimple = killing_form(L)
    if not semisimple and not force:
        raise NotSemisimple(f"Killing form of {L.name or 'the algebra'} is degenerate; use force")
    cur = xi.replace(cap=min_cap(xi.cap, cap)).truncate(cap)
    cap = cur.cap
    n, m = cur.nvars, cur.rank
    xi0_mats = [x.constant_part() for x in cur.xi]
    module = LieModule.from_matrices(L, xi0_mats, name="xi0")
    if unitary is None:
        unitary = is_unitary(cur)
    complex_field = cur.field == "Qi"
    phi = GaugeTransform.identity(m, n, cap)
    cleared = []
    for r in range(1, cap + 1):
        part = [x.homogeneous(r) for x in cur.xi]
        if all(p.is_zero() for p in part):
            cleared.append(r)
            continue
        hm = homogeneous_module(pi, L, xi0_mats, r)
        target = CECochain.from_dict(hm.module, 1, {(i,): hm.coords(p) for i, p in enumerate(part)})
        try:
            sol = solve_coboundary(target)
        except NotACocycle as exc:
            raise NotACocycle(exc.witness, exc.value, degree=r) from None
        except ObstructionFound:
            raise ObstructionFound(target, degree=r) from None
        if unitary:
            skew = _solve_skew(hm, target, complex_field)
            if skew is None:
                raise UnitaryObstruction(target, degree=r)
            A = hm.matrix(skew, n)
            step = GaugeTransform(_exp_mod(A, cap), cap)
        else:
            A = hm.matrix(dict(sol.comps[0][1]) if sol.comps else {}, n)
            step = GaugeTransform(PolyMatrix.identity(m, n) + A, cap)
        nxt = gauge_transform(cur, step)
        for s in range(1, r + 1):
            if any(not x.homogeneous(s).is_zero() for x in nxt.xi):
                raise InternalError(f"step {r} left a nonzero part in degree {s}")
        cur = nxt
        phi = step.compose(phi)
        cleared.append(r)
    final = gauge_transform(xi.replace(cap=cap).truncate(cap), phi)
    if any(not x.homogeneous(s).is_zero() for x in final.xi for s in range(1, cap + 1)):
        raise IdentityFails("assembled gauge does not clear all degrees")
    xi0 = ConnectionData(pi, tuple(PolyMatrix.constant(mat, n) for mat in xi0_mats), cap, xi.field)
    return NormalizationResult(phi, xi0, module, tuple(cleared), final, unitary)


# -- invariants ------------------------------------------------------------

def trace_word_invariants(matrices, max_len):
    """Traces of all words of length 1..max_len, ordered by length then word."""
    mats = [[list(r) for r in M] for M in matrices]
    out = []
    if not mats:
        return out
    k = len(mats)
    for length in range(1, max_len + 1):
        for word in product(range(k), repeat=length):
            prod = mats[word[0]]
            for w in word[1:]:
                prod = linalg.matmul(prod, mats[w])
            out.append(sum((prod[i][i] for i in range(len(prod))), Fraction(0)))
    return out


def line_bundle_moduli_dim(pi, cap):
    """``sum_{r<=cap} dim H^1(g; S^r)``: flat rank-one data modulo gauge, degree <= cap."""
    L = linear_algebra(pi)
    zero = [[[Fraction(0)]] for _ in range(pi.nvars)]
    total = 0
    for r in range(cap + 1):
        hm = homogeneous_module(pi, L, zero, r)
        total += ce_cohomology_dims(L, hm.module, [1])[0]
    return total
