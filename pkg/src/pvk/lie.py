"""Lie algebras by structure constants, their modules, and CE cohomology.

Chevalley-Eilenberg convention (0-based slots)::

    (d phi)(a_0, ..., a_k) = sum_i (-1)^i a_i . phi(..., ^a_i, ...)
                           + sum_{i<j} (-1)^(i+j) phi([a_i, a_j], ..., ^a_i, ..., ^a_j, ...)

Module elements are coordinate vectors; actions are stored as sparse
matrices ``{row: {col: value}}`` so that large modules (the homogeneous
polynomial modules used by normalization) stay cheap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .core import linalg
from .core.multivector import sort_sign
from .core.scalar import as_scalar, format_scalar, parse_scalar
from .errors import JacobiViolation, ModuleViolation, NotACocycle, ObstructionFound, ParseError

__all__ = [
    "CECochain",
    "LieAlgebra",
    "LieModule",
    "PRESET_NAMES",
    "ce_cohomology_dims",
    "ce_differential",
    "killing_form",
    "module_preset",
    "preset_algebra",
    "solve_coboundary",
    "validate_lie_algebra",
]

ZERO = Fraction(0)


@dataclass(frozen=True)
class LieAlgebra:
    """Finite-dimensional Lie algebra with ``[e_i, e_j] = sum_k c[i][j][k] e_k``."""

    dim: int
    constants: tuple
    names: tuple = ()
    name: str | None = None

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"e{i + 1}" for i in range(self.dim)))

    def bracket(self, i, j):
        return self.constants[i][j]

    def bracket_vectors(self, u, v):
        out = [ZERO] * self.dim
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            for j, vj in enumerate(v):
                if vj == 0:
                    continue
                for k, c in enumerate(self.constants[i][j]):
                    if c != 0:
                        out[k] += ui * vj * c
        return out

    def ad(self, i):
        """Matrix of ad_{e_i}; column j holds [e_i, e_j]."""
        n = self.dim
        return [[self.constants[i][j][k] for j in range(n)] for k in range(n)]

    def nonzero_brackets(self):
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                row = {k: c for k, c in enumerate(self.constants[i][j]) if c != 0}
                if row:
                    yield i, j, row

    def to_json(self):
        return {"dim": self.dim,
                "brackets": [[i, j, [[k, format_scalar(c)] for k, c in sorted(row.items())]]
                             for i, j, row in self.nonzero_brackets()]}


def jacobiator(c, i, j, k):
    n = len(c)

    def br(u, v):
        out = [ZERO] * n
        for a, ua in enumerate(u):
            if ua == 0:
                continue
            for b, vb in enumerate(v):
                if vb == 0:
                    continue
                for t, ct in enumerate(c[a][b]):
                    if ct != 0:
                        out[t] += ua * vb * ct
        return out

    e = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
    terms = [br(e[i], c[j][k]), br(e[j], c[k][i]), br(e[k], c[i][j])]
    return [sum(col, ZERO) for col in zip(*terms)]


def validate_lie_algebra(raw, names=(), name=None):
    """Build a :class:`LieAlgebra`, checking antisymmetry and Jacobi.

    ``raw`` is either ``{(i, j): {k: c}}`` for i < j, or the JSON form
    ``{"dim": n, "brackets": [[i, j, [[k, "c"], ...]], ...]}``.
    Raises :class:`JacobiViolation` with the first failing triple.
    """
    if isinstance(raw, dict) and "dim" in raw:
        dim = raw["dim"]
        entries = {}
        for item in raw.get("brackets", []):
            try:
                i, j, terms = item
                entries[(i, j)] = {k: parse_scalar(str(v)) for k, v in terms}
            except (TypeError, ValueError) as exc:
                raise ParseError(f"bad bracket entry {item!r}") from exc
        names = tuple(raw.get("names", names))
    else:
        dim, entries = raw
    c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
    for (i, j), terms in entries.items():
        if not (0 <= i < dim and 0 <= j < dim):
            raise ParseError(f"bracket index ({i}, {j}) out of range for dim {dim}")
        if i == j:
            if any(as_scalar(v) != 0 for v in terms.values()):
                raise JacobiViolation((i, i), "[e_i, e_i] must vanish")
            continue
        for k, v in terms.items():
            if not 0 <= k < dim:
                raise ParseError(f"bracket target {k} out of range for dim {dim}")
            v = as_scalar(v)
            if i > j:
                v = -v
            a, b = min(i, j), max(i, j)
            c[a][b][k] = v
            c[b][a][k] = -v
    frozen = tuple(tuple(tuple(col) for col in row) for row in c)
    for i, j, k in combinations(range(dim), 3):
        jac = jacobiator(frozen, i, j, k)
        if any(v != 0 for v in jac):
            raise JacobiViolation((i, j, k), [format_scalar(v) for v in jac])
    return LieAlgebra(dim, frozen, tuple(names), name)


_PRESETS = {
    "sl2": ({(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, ("h", "e", "f")),
    "so3": ({(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}}, ("e1", "e2", "e3")),
    "h3": ({(0, 1): {2: 1}}, ("e1", "e2", "e3")),
    "aff1": ({(0, 1): {1: 1}}, ("e1", "e2")),
}
PRESET_NAMES = ("sl2", "so3", "h3", "aff1", "abelian:n")


def preset_algebra(name):
    """Catalog: ``sl2``, ``so3``, ``h3``, ``aff1``, ``abelian:n``."""
    if name.startswith("abelian:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise ParseError(f"bad abelian preset {name!r}") from None
        if n < 1:
            raise ParseError("abelian dimension must be positive")
        return validate_lie_algebra((n, {}), name=name)
    if name not in _PRESETS:
        raise ParseError(f"unknown algebra preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    entries, names = _PRESETS[name]
    dim = len(names)
    return validate_lie_algebra((dim, entries), names, name)


def killing_form(L):
    """Killing matrix ``K_ij = tr(ad_i ad_j)`` and whether ``det K != 0``."""
    ads = [L.ad(i) for i in range(L.dim)]
    K = []
    for i in range(L.dim):
        row = []
        for j in range(L.dim):
            prod = linalg.matmul(ads[i], ads[j])
            row.append(sum((prod[k][k] for k in range(L.dim)), ZERO))
        K.append(row)
    return K, linalg.det(K) != 0


# -- modules ----------------------------------------------------------

def _to_sparse(mat):
    out = {}
    for r, row in enumerate(mat):
        d = {c: as_scalar(v) for c, v in enumerate(row) if v != 0}
        if d:
            out[r] = d
    return out


def _sparse_apply(a, vec):
    out = {}
    for r, row in a.items():
        acc = ZERO
        for c, v in row.items():
            x = vec.get(c)
            if x is not None:
                acc = acc + v * x
        if acc != 0:
            out[r] = acc
    return out


def _sparse_mul(a, b):
    out = {}
    for r, row in a.items():
        acc = {}
        for k, v in row.items():
            for c, w in b.get(k, {}).items():
                acc[c] = acc.get(c, 0) + v * w
        acc = {c: v for c, v in acc.items() if v != 0}
        if acc:
            out[r] = acc
    return out


def _sparse_lincomb(terms):
    out = {}
    for coef, mat in terms:
        for r, row in mat.items():
            tgt = out.setdefault(r, {})
            for c, v in row.items():
                tgt[c] = tgt.get(c, 0) + coef * v
    return {r: {c: v for c, v in row.items() if v != 0} for r, row in out.items()
            if any(v != 0 for v in row.values())}


@dataclass(frozen=True)
class LieModule:
    """Representation ``rho: algebra -> gl(dim)`` given by sparse action matrices."""

    algebra: LieAlgebra
    dim: int
    actions: tuple
    name: str | None = None
    labels: tuple = field(default=(), compare=False)

    @classmethod
    def from_matrices(cls, algebra, matrices, name=None, check=True):
        matrices = list(matrices)
        if len(matrices) != algebra.dim:
            raise ModuleViolation((), f"need {algebra.dim} action matrices, got {len(matrices)}")
        m = len(matrices[0]) if matrices else 0
        for mat in matrices:
            if len(mat) != m or any(len(r) != m for r in mat):
                raise ModuleViolation((), "action matrices must be square of equal size")
        mod = cls(algebra, m, tuple(_to_sparse(mat) for mat in matrices), name)
        if check:
            mod.validate()
        return mod

    @classmethod
    def from_sparse(cls, algebra, dim, actions, name=None, labels=(), check=False):
        mod = cls(algebra, dim, tuple(actions), name, tuple(labels))
        if check:
            mod.validate()
        return mod

    def validate(self):
        """Check ``rho([e_i, e_j]) = [rho_i, rho_j]`` for all i < j."""
        L = self.algebra
        for i, j in combinations(range(L.dim), 2):
            lhs = _sparse_lincomb([(c, self.actions[k]) for k, c in enumerate(L.bracket(i, j))
                                   if c != 0])
            a, b = self.actions[i], self.actions[j]
            rhs = _sparse_lincomb([(1, _sparse_mul(a, b)), (-1, _sparse_mul(b, a))])
            if lhs != rhs:
                raise ModuleViolation((i, j))
        return self

    def matrix(self, i):
        mat = [[ZERO] * self.dim for _ in range(self.dim)]
        for r, row in self.actions[i].items():
            for c, v in row.items():
                mat[r][c] = v
        return mat

    @property
    def matrices(self):
        return [self.matrix(i) for i in range(self.algebra.dim)]

    def act(self, i, vec):
        """rho(e_i) applied to a sparse vector ``{coord: value}``."""
        return _sparse_apply(self.actions[i], vec)


def module_preset(L, kind):
    """``trivial`` (1-dim), ``standard`` or ``adjoint`` module of a preset algebra."""
    n = L.dim
    if kind == "trivial":
        return LieModule.from_matrices(L, [[[ZERO]] for _ in range(n)], "trivial")
    if kind == "adjoint":
        return LieModule.from_matrices(L, [L.ad(i) for i in range(n)], "adjoint")
    if kind != "standard":
        raise ParseError(f"unknown module preset {kind!r}")

    def unit(m, i, j):
        return [[Fraction(int((a, b) == (i, j))) for b in range(m)] for a in range(m)]

    name = L.name or ""
    if name == "sl2":
        h = [[Fraction(1), ZERO], [ZERO, Fraction(-1)]]
        mats = [h, unit(2, 0, 1), unit(2, 1, 0)]
    elif name == "so3":
        # rotation generators: (L_k)_{ij} = -eps_{kij}
        mats = [[[ZERO, ZERO, ZERO], [ZERO, ZERO, Fraction(-1)], [ZERO, Fraction(1), ZERO]],
                [[ZERO, ZERO, Fraction(1)], [ZERO, ZERO, ZERO], [Fraction(-1), ZERO, ZERO]],
                [[ZERO, Fraction(-1), ZERO], [Fraction(1), ZERO, ZERO], [ZERO, ZERO, ZERO]]]
    elif name == "h3":
        mats = [unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)]
    elif name == "aff1":
        mats = [unit(2, 0, 0), unit(2, 0, 1)]
    elif name.startswith("abelian:"):
        mats = [unit(n, i, i) for i in range(n)]
    else:
        raise ParseError(f"no standard module known for algebra {name or '<custom>'}")
    return LieModule.from_matrices(L, mats, "standard")


# -- Chevalley-Eilenberg complex ----------------------------------------

@dataclass(frozen=True)
class CECochain:
    """k-cochain: one module vector per increasing k-subset of basis indices."""

    module: LieModule = field(repr=False)
    degree: int
    comps: tuple  # ((subset, sparse vector as sorted tuple of (coord, value))), ...)

    @classmethod
    def from_dict(cls, module, degree, comps):
        clean = []
        for key in sorted(comps):
            vec = comps[key]
            if isinstance(vec, dict):
                items = tuple(sorted((c, as_scalar(v)) for c, v in vec.items() if v != 0))
            else:
                items = tuple((c, as_scalar(v)) for c, v in enumerate(vec) if v != 0)
            if len(key) != degree:
                raise ValueError(f"subset {key} does not match degree {degree}")
            if items:
                clean.append((tuple(key), items))
        return cls(module, degree, tuple(clean))

    def sparse(self):
        return {k: dict(v) for k, v in self.comps}

    def vector(self, key):
        """Dense module vector on a subset (antisymmetry applied)."""
        sign, skey = sort_sign(key)
        out = [ZERO] * self.module.dim
        if sign == 0:
            return out
        for c, v in dict(self.comps).get(skey, ()):
            out[c] = v if sign > 0 else -v
        return out

    def is_zero(self):
        return not self.comps

    def to_json(self):
        return [[list(k), [[c, format_scalar(v)] for c, v in vec]] for k, vec in self.comps]


def _apply_d(module, k, comps):
    """Sparse CE differential of a k-cochain given as ``{subset: {coord: val}}``."""
    L = module.algebra
    n = L.dim
    out = {}

    def get(sub):
        sign, key = sort_sign(sub)
        if sign == 0:
            return None, 0
        return comps.get(key), sign

    def add(key, vec, coef):
        tgt = out.setdefault(key, {})
        for c, v in vec.items():
            tgt[c] = tgt.get(c, 0) + coef * v

    for S in combinations(range(n), k + 1):
        for i in range(k + 1):
            rest = S[:i] + S[i + 1:]
            vec, sign = get(rest)
            if vec:
                add(S, module.act(S[i], vec), (-1) ** i * sign)
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                rest = tuple(s for t, s in enumerate(S) if t not in (i, j))
                for l, c in enumerate(L.bracket(S[i], S[j])):
                    if c == 0:
                        continue
                    vec, sign = get((l,) + rest)
                    if vec:
                        add(S, vec, (-1) ** (i + j) * c * sign)
    return {key: {c: v for c, v in vec.items() if v != 0}
            for key, vec in out.items() if any(v != 0 for v in vec.values())}


def ce_differential(phi):
    """CE differential of a cochain (zero beyond the top degree)."""
    comps = _apply_d(phi.module, phi.degree, phi.sparse())
    return CECochain.from_dict(phi.module, phi.degree + 1, comps)


def _d_columns(module, k):
    """Sparse matrix of d_k as rows over (subset index, coord) coordinates."""
    n = module.algebra.dim
    src = list(combinations(range(n), k))
    dst = {s: t for t, s in enumerate(combinations(range(n), k + 1))}
    m = module.dim
    rows = {}
    for si, S in enumerate(src):
        for a in range(m):
            col = si * m + a
            image = _apply_d(module, k, {S: {a: Fraction(1)}})
            for key, vec in image.items():
                base = dst[key] * m
                for c, v in vec.items():
                    rows.setdefault(base + c, {})[col] = v
    return list(rows.values()), len(src) * m


def ce_rank(module, k):
    n = module.algebra.dim
    if k < 0 or k >= n:
        return 0
    rows, _ = _d_columns(module, k)
    return linalg.rank(rows)


def ce_cohomology_dims(L, M, k_range):
    """``dim H^k(L; M) = dim ker d_k - rank d_{k-1}`` by exact elimination."""
    if M.algebra != L:
        raise ValueError("module belongs to a different algebra")
    n = L.dim
    ranks = {}

    def r(k):
        if k not in ranks:
            ranks[k] = ce_rank(M, k)
        return ranks[k]

    dims = []
    for k in k_range:
        if k < 0 or k > n:
            dims.append(0)
            continue
        size = len(list(combinations(range(n), k))) * M.dim
        dims.append(size - r(k) - r(k - 1))
    return dims


def solve_coboundary(target):
    """Find a 0-cochain ``A`` with ``dA = target`` for a closed 1-cochain.

    Raises :class:`NotACocycle` (with the first failing pair) when
    ``d target != 0`` and :class:`ObstructionFound` when the target is
    closed but not exact.  Free variables are zeroed, pivots taken in
    column order.
    """
    if target.degree != 1:
        raise ValueError("solve_coboundary expects a degree-1 cochain")
    module = target.module
    comps = target.sparse()
    dphi = _apply_d(module, 1, comps)
    if dphi:
        key = min(dphi)
        raise NotACocycle(key, [format_scalar(v) for _, v in sorted(dphi[key].items())])
    n = module.algebra.dim
    rows, rhs = [], []
    for i in range(n):
        act = module.actions[i]
        vec = comps.get((i,), {})
        for r in range(module.dim):
            rows.append(act.get(r, {}))
            rhs.append(vec.get(r, ZERO))
    x = linalg.solve(rows, rhs, module.dim)
    if x is None:
        raise ObstructionFound(target)
    return CECochain.from_dict(module, 0, {(): x})
