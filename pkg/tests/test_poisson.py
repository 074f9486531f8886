from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings

from conftest import PRESETS, from_sympy, polys, rand_multivector, rand_poly, to_sympy
from pvk.core import MultiVector, Poly
from pvk.core.forms import OneForm
from pvk.core.multivector import schouten_bracket
from pvk.errors import JacobiViolation, NonLinearStructure
from pvk.lie import preset_algebra
from pvk.poisson import (
    PoissonStructure,
    d_pi,
    d_pi_coordinate,
    from_lie_algebra,
    hamiltonian,
    one_form_bracket,
    pairing,
    poisson_bracket,
    poisson_cohomology_dims,
    preset_poisson,
    product_poisson,
    sharp,
    solve_d_pi,
)

X, Y, Z = (Poly.var(3, i) for i in range(3))
CASIMIR = X * X + 4 * Y * Z
SL2 = preset_poisson("sl2")
SYMP = preset_poisson("symplectic")
STRUCTURES = PRESETS + ["symplectic", "zero:2"]


def sympy_bracket(pi, f, g, syms):
    """{f, g} from the dense formula sum_{i,j} pi^{ij} f_i g_j."""
    n = len(syms)
    out = 0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            p = to_sympy(pi[(i, j)], syms)
            out += p * sympy.diff(f, syms[i]) * sympy.diff(g, syms[j])
    return sympy.expand(out)


def test_from_lie_algebra_examples():
    assert SL2[(0, 1)] == 2 * Y and SL2[(0, 2)] == -2 * Z and SL2[(1, 2)] == X
    assert preset_poisson("abelian:3").bivector.is_zero()
    aff = preset_poisson("aff1")
    assert aff[(0, 1)] == Poly.var(2, 1)
    assert SL2.kind == "linear" and SYMP.kind == "constant"
    assert preset_poisson("zero:2").kind == "zero"


def test_poisson_bracket_examples():
    assert poisson_bracket(SL2, X, Y) == 2 * Y
    assert poisson_bracket(SL2, X * Y + Z, Poly.constant(3, 1)).is_zero()
    for v in (X, Y, Z):
        assert poisson_bracket(SL2, v, CASIMIR).is_zero()


def test_casimir_oracle():
    # kernel of all coordinate brackets, computed by sympy among quadratics
    x, y, z = syms = sympy.symbols("x y z")
    cs = sympy.symbols("c0:6")
    f = cs[0] * x**2 + cs[1] * y**2 + cs[2] * z**2 + cs[3] * x * y + cs[4] * x * z + cs[5] * y * z
    eqs = []
    for v in syms:
        eqs += sympy.Poly(sympy_bracket(SL2, v, f, syms), *syms).coeffs()
    sol = sympy.solve(eqs, cs, dict=True)[0]
    g = sympy.expand(f.subs(sol))
    free = sorted(g.free_symbols - set(syms), key=str)
    assert len(free) == 1
    assert from_sympy(g.subs(free[0], 1) / g.coeff(x**2).subs(free[0], 1), syms) == CASIMIR


@pytest.mark.parametrize("name", STRUCTURES)
def test_bracket_against_sympy(name, rng):
    pi = preset_poisson(name)
    n = pi.nvars
    syms = sympy.symbols(f"s0:{n}")
    for _ in range(10):
        f, g = rand_poly(rng, n, 3), rand_poly(rng, n, 3)
        want = sympy_bracket(pi, to_sympy(f, syms), to_sympy(g, syms), syms)
        assert poisson_bracket(pi, f, g) == from_sympy(want, syms)


@settings(max_examples=40, deadline=None)
@given(polys(3, 2), polys(3, 2), polys(3, 2))
def test_jacobi_and_leibniz(f, g, h):
    for pi in (SL2, preset_poisson("so3"), preset_poisson("h3")):
        b = lambda a, c: poisson_bracket(pi, a, c)
        assert (b(f, b(g, h)) + b(g, b(h, f)) + b(h, b(f, g))).is_zero()
        assert b(f, g) == -b(g, f)
        assert b(f, g * h) == b(f, g) * h + g * b(f, h)


def test_sharp_examples():
    dx = OneForm.coordinate(3, 0)
    assert sharp(SL2, dx) == MultiVector.vector_field([Poly.zero(3), 2 * Y, -2 * Z])
    assert sharp(preset_poisson("zero:3"), OneForm.exact(X * Y)).is_zero()
    assert sharp(SYMP, OneForm.coordinate(2, 0)) == MultiVector.vector_field(
        [Poly.zero(2), Poly.constant(2, 1)])


def _apply(vf, f):
    acc = Poly.zero(f.nvars)
    for (i,), c in vf.items():
        acc = acc + c * f.diff(i)
    return acc


@pytest.mark.parametrize("name", STRUCTURES)
def test_hamiltonian_is_bracket(name, rng):
    pi = preset_poisson(name)
    for _ in range(10):
        f, g = rand_poly(rng, pi.nvars, 3), rand_poly(rng, pi.nvars, 3)
        assert _apply(hamiltonian(pi, f), g) == poisson_bracket(pi, f, g)


def test_one_form_bracket_examples():
    d = lambda i: OneForm.coordinate(3, i)
    assert one_form_bracket(SL2, d(0), d(1)) == OneForm.exact(2 * Y)
    assert one_form_bracket(SL2, d(1), d(2)) == d(0)
    zero = preset_poisson("zero:3")
    a = OneForm([X * Y, Z, Poly.zero(3)])
    assert one_form_bracket(zero, a, d(2)).is_zero()


@pytest.mark.parametrize("name", STRUCTURES)
def test_exact_forms_bracket_to_differential(name, rng):
    # pins every sign convention at once
    pi = preset_poisson(name)
    for _ in range(100):
        f, g = rand_poly(rng, pi.nvars, 3), rand_poly(rng, pi.nvars, 3)
        got = one_form_bracket(pi, OneForm.exact(f), OneForm.exact(g))
        assert got == OneForm.exact(poisson_bracket(pi, f, g))


def _rand_form(rng, n, deg):
    return OneForm([rand_poly(rng, n, deg, 2) for _ in range(n)])


@pytest.mark.parametrize("name", ["sl2", "so3", "aff1"])
def test_one_form_bracket_lie(name, rng):
    pi = preset_poisson(name)
    n = pi.nvars
    for _ in range(5):
        a, b, c = (_rand_form(rng, n, 2) for _ in range(3))
        br = lambda u, v: one_form_bracket(pi, u, v)
        assert br(a, b) == -br(b, a)
        assert (br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))).is_zero()
        # anchor is a homomorphism on all one-forms
        lhs = sharp(pi, br(a, b))
        rhs = schouten_bracket(sharp(pi, a), sharp(pi, b))
        assert lhs == rhs


@pytest.mark.parametrize("name", STRUCTURES)
def test_d_pi_closed_and_matches_coordinate_route(name, rng):
    pi = preset_poisson(name)
    n = pi.nvars
    assert d_pi(pi, pi.bivector).is_zero()
    for k in range(0, n + 1):
        T = rand_multivector(rng, n, k, 2)
        assert d_pi(pi, T) == d_pi_coordinate(pi, T)
        assert d_pi(pi, d_pi(pi, T)).is_zero()


def test_d_pi_on_functions_is_hamiltonian(rng):
    for name in STRUCTURES:
        pi = preset_poisson(name)
        f = rand_poly(rng, pi.nvars, 3)
        assert d_pi(pi, MultiVector.function(f)) == hamiltonian(pi, f)
    assert d_pi(SL2, MultiVector.function(CASIMIR)).is_zero()


def test_pairing_examples():
    x, y = Poly.var(2, 0), Poly.var(2, 1)
    assert pairing(SYMP, OneForm([y, Poly.zero(2)])) == Poly.constant(2, -1)
    assert pairing(SL2, OneForm.coordinate(3, 0)).is_zero()
    assert pairing(SL2, OneForm.exact(CASIMIR * X)).is_zero()
    assert pairing(SYMP, OneForm([Poly.zero(2), x])) == Poly.constant(2, 1)


def test_product_examples():
    P = product_poisson(preset_poisson("zero:1"), 1)
    assert P.nvars == 3 and P.bivector.items() == [((1, 2), Poly.constant(3, 1))]
    Q = product_poisson(SL2, 1)
    assert schouten_bracket(Q.bivector, Q.bivector).is_zero()
    for i, j in combinations(range(3), 2):
        assert Q[(i, j)] == SL2[(i, j)].extend(5)
    assert Q.names == ("x", "y", "z", "u", "v")


def test_non_poisson_rejected():
    bad = MultiVector(3, 2, {(0, 1): Z, (1, 2): Y})
    with pytest.raises(JacobiViolation):
        PoissonStructure(bad)


@pytest.mark.parametrize("name, cap, grades, dims", [
    ("sl2", 2, [0], [2]),
    ("aff1", 2, [0], [1]),
    ("zero:1", 1, [1], [2]),
    ("sl2", 2, [0, 1, 2, 3], [2, 0, 0, 2]),
])
def test_cohomology_examples(name, cap, grades, dims):
    assert poisson_cohomology_dims(preset_poisson(name), cap, grades) == dims


def test_cohomology_euler_characteristic():
    # truncated complex: alternating sum of dims equals alternating sum of chain sizes
    for name in STRUCTURES:
        pi = preset_poisson(name)
        n = pi.nvars
        dims = poisson_cohomology_dims(pi, 2, range(n + 1))
        size = len(list(combinations(range(n + 2), 2)))  # monomials of degree <= 2 in n vars
        chi = sum((-1) ** k * len(list(combinations(range(n), k))) * size for k in range(n + 1))
        assert sum((-1) ** k * d for k, d in enumerate(dims)) == chi


def test_nonlinear_rejected():
    q = PoissonStructure(MultiVector(2, 2, {(0, 1): Poly.var(2, 0) ** 2}))
    with pytest.raises(NonLinearStructure):
        poisson_cohomology_dims(q, 2, [0])


def test_solve_d_pi_roundtrip(rng):
    for name in ("sl2", "aff1", "h3"):
        pi = preset_poisson(name)
        T = rand_multivector(rng, pi.nvars, 1, 2)
        target = d_pi(pi, T)
        S = solve_d_pi(pi, target, 2)
        assert S is not None and d_pi(pi, S) == target
    # every Hamiltonian field of aff1 vanishes on y = 0, so d/dx is not one
    aff = preset_poisson("aff1")
    assert solve_d_pi(aff, MultiVector.vector_field([Poly.constant(2, 1), Poly.zero(2)]), 3) is None
