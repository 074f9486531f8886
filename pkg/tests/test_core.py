from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fractions, multivectors, polys, rand_multivector, to_sympy
from pvk.core import (
    GaussianRational,
    MultiVector,
    OneForm,
    Poly,
    PolyMatrix,
    format_scalar,
    lie_derivative,
    parse_scalar,
    schouten_bracket,
    truncate,
    wedge,
)
from pvk.core import linalg
from pvk.core.matrix import inverse_mod
from pvk.errors import NonInvertibleConstantTerm, ParseError

x, y, z = (Poly.var(3, i) for i in range(3))
dx, dy, dz = (MultiVector.vector_field([Poly.constant(3, int(i == j)) for j in range(3)]) for i in range(3))

PI_SL2 = MultiVector(3, 2, {(0, 1): 2 * y, (0, 2): -2 * z, (1, 2): x})


def fn(p):
    return MultiVector.function(p)


# -- scalars ---------------------------------------------------------------

@pytest.mark.parametrize("text, value", [
    ("3", Fraction(3)),
    ("-6/4", Fraction(-3, 2)),
    ("1/2+3/4 i", GaussianRational(Fraction(1, 2), Fraction(3, 4))),
    ("-i", GaussianRational(0, -1)),
    ("2/3 i", GaussianRational(0, Fraction(2, 3))),
])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", ["1/0", "abc", "1.5", ""])
def test_parse_scalar_rejects(bad):
    with pytest.raises(ParseError):
        parse_scalar(bad)


@given(fractions, fractions)
def test_scalar_roundtrip(a, b):
    for v in (a, GaussianRational(a, b)):
        text = format_scalar(v)
        assert parse_scalar(text) == v
        assert format_scalar(parse_scalar(text)) == text


def test_gaussian_collapses_to_rational():
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert isinstance(parse_scalar("2+0 i"), Fraction)


# -- polynomials -------------------------------------------------------------

def test_truncate_examples():
    one_var = Poly.var(1, 0)
    p = 1 + one_var + one_var ** 5
    assert truncate(p, 2) == 1 + one_var
    assert truncate(truncate(p, 2), 2) == truncate(p, 2)


@given(polys(), polys(), st.integers(0, 4))
def test_truncation_is_a_ring_map(p, q, D):
    assert truncate(p * q, D) == truncate(truncate(p, D) * truncate(q, D), D)


@given(polys(), polys())
def test_degree_is_additive(p, q):
    if not p.is_zero() and not q.is_zero():
        assert (p * q).degree == p.degree + q.degree


def test_cap_propagates_through_products():
    p = Poly.var(2, 0).with_cap(3)
    q = Poly.var(2, 1).with_cap(5)
    r = (p + 1) ** 4 * q
    assert r.cap == 3
    assert r.degree == 3


def test_terms_are_graded_lex():
    p = x * y + z + 1 + x ** 2
    assert [e for e, _ in p.terms] == [(0, 0, 0), (0, 0, 1), (1, 1, 0), (2, 0, 0)]


@given(polys())
def test_poly_literal_roundtrip(p):
    assert Poly.from_literal(p.to_literal(), 3) == p


def test_poly_agrees_with_sympy(rng):
    syms = sympy.symbols("a b c")
    from conftest import rand_poly
    for _ in range(20):
        p, q = rand_poly(rng, 3, 3), rand_poly(rng, 3, 3)
        assert sympy.expand(to_sympy(p * q, syms) - to_sympy(p, syms) * to_sympy(q, syms)) == 0
        assert sympy.expand(to_sympy(p.diff(1), syms) - sympy.diff(to_sympy(p, syms), syms[1])) == 0


# -- linear algebra ------------------------------------------------------------

def test_solve_fixed_pivots_free_zero():
    rows = [{0: Fraction(1), 1: Fraction(1)}, {1: Fraction(1), 2: Fraction(1)}]
    assert linalg.solve(rows, [Fraction(2), Fraction(3)], 3) == [-1, 3, 0]
    assert linalg.solve([{0: Fraction(1)}, {0: Fraction(2)}], [Fraction(1), Fraction(3)], 1) is None


def test_det_and_inverse():
    m = [[Fraction(2), Fraction(1)], [Fraction(7), Fraction(4)]]
    assert linalg.det(m) == 1
    assert linalg.matmul(m, linalg.inverse(m)) == linalg.identity(2)
    assert linalg.inverse([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) is None


def test_nullspace_dimension():
    rows = linalg.dense_to_rows([[1, 2, 3], [2, 4, 6]])
    basis = linalg.nullspace(rows, 3)
    assert len(basis) == 2
    for v in basis:
        assert sum(a * b for a, b in zip([1, 2, 3], v)) == 0


def test_inverse_mod(rng):
    from conftest import rand_matrix
    for _ in range(5):
        M = PolyMatrix.identity(2, 3) * 2 + rand_matrix(rng, 2, 3, 2, min_degree=1)
        inv = inverse_mod(M, 4)
        assert (M @ inv).truncate(4) == PolyMatrix.identity(2, 3)
    with pytest.raises(NonInvertibleConstantTerm):
        inverse_mod(PolyMatrix.unit(2, 0, 0, 3), 3)


# -- multivectors ----------------------------------------------------------------

def test_constant_fields_commute():
    assert schouten_bracket(dx, dy).is_zero()


def test_sl2_bivector_is_poisson():
    assert schouten_bracket(PI_SL2, PI_SL2).is_zero()


def _jacobiator(bracket_table, n):
    """Brute-force Jacobiator {x_i,{x_j,x_k}} + cyclic with sympy."""
    syms = sympy.symbols(f"s0:{n}")

    def br(f, g):
        return sympy.expand(sum(bracket_table.get((i, j), 0) * (sympy.diff(f, syms[i]) * sympy.diff(g, syms[j])
                                                                 - sympy.diff(f, syms[j]) * sympy.diff(g, syms[i]))
                                for i in range(n) for j in range(i + 1, n)))

    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = syms[i], syms[j], syms[k]
                out.append(sympy.expand(br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))))
    return out, syms


def test_schouten_self_bracket_matches_jacobiator_oracle(rng):
    syms = sympy.symbols("s0:3")
    from conftest import rand_poly
    for _ in range(10):
        comps = {(0, 1): rand_poly(rng, 3, 2, 2), (0, 2): rand_poly(rng, 3, 2, 2), (1, 2): rand_poly(rng, 3, 2, 2)}
        pi = MultiVector(3, 2, comps)
        table = {k: to_sympy(v, syms) for k, v in comps.items()}
        jac, _ = _jacobiator(table, 3)
        assert schouten_bracket(pi, pi).is_zero() == all(j == 0 for j in jac)


def test_non_poisson_bivector():
    # {x,y} = z, {y,z} = y: the Jacobiator is {x,{y,z}} = {x,y} = z
    bad = MultiVector(3, 2, {(0, 1): z, (1, 2): y})
    jac, syms = _jacobiator({(0, 1): sympy.Symbol("s2"), (1, 2): sympy.Symbol("s1")}, 3)
    assert jac == [syms[2]]
    assert not schouten_bracket(bad, bad).is_zero()


def test_vector_field_on_function():
    X = MultiVector.vector_field([y, x * z, Poly.constant(3, 1)])
    f = x ** 2 * y + z
    assert schouten_bracket(X, fn(f))[()] == y * f.diff(0) + x * z * f.diff(1) + f.diff(2)


def test_vector_fields_lie_bracket():
    X = MultiVector.vector_field([y, x * z, Poly.zero(3)])
    Y = MultiVector.vector_field([z, Poly.zero(3), x ** 2])
    got = schouten_bracket(X, Y)
    for j in range(3):
        want = lie_derivative(X, Y[(j,)]) - lie_derivative(Y, X[(j,)])
        assert got[(j,)] == want


def test_lie_derivative_examples():
    X = dx
    assert lie_derivative(X, x ** 2) == 2 * x
    xdx = MultiVector.vector_field([x, Poly.zero(3), Poly.zero(3)])
    assert lie_derivative(X, xdx) == dx
    Xx = MultiVector.vector_field([Poly.zero(3), 2 * y, -2 * z])
    assert lie_derivative(Xx, PI_SL2).is_zero()


def _koszul(p, q):
    return (-1) ** ((p - 1) * (q - 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.data())
def test_graded_antisymmetry(p, q, data):
    a = data.draw(multivectors(3, p, 2))
    b = data.draw(multivectors(3, q, 2))
    assert schouten_bracket(a, b) == -schouten_bracket(b, a).scale(Fraction(_koszul(p, q)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.data())
def test_graded_jacobi(p, q, r, data):
    a = data.draw(multivectors(3, p, 2))
    b = data.draw(multivectors(3, q, 2))
    c = data.draw(multivectors(3, r, 2))
    br = schouten_bracket
    # [a,[b,c]] = [[a,b],c] + (-1)^{(p-1)(q-1)} [b,[a,c]]
    lhs = br(a, br(b, c))
    rhs = br(br(a, b), c) + br(b, br(a, c)).scale(Fraction(_koszul(p, q)))
    if lhs.grade >= 0:
        assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(multivectors(3, 1, 2), polys(3, 2), st.integers(0, 2), st.data())
def test_lie_derivative_leibniz(X, f, k, data):
    T = data.draw(multivectors(3, k, 2))
    lhs = lie_derivative(X, T.scale(f))
    rhs = T.scale(lie_derivative(X, f)) + lie_derivative(X, T).scale(f)
    assert lhs == rhs


def test_lie_derivative_on_one_form_matches_cartan():
    # L_X(df) = d(X f)
    X = MultiVector.vector_field([y, x * z, Poly.constant(3, 1)])
    f = x * y ** 2 + z ** 3
    assert lie_derivative(X, OneForm.exact(f)) == OneForm.exact(lie_derivative(X, f))


def test_matrix_valued_bracket_is_entrywise():
    M = PolyMatrix([[x, y], [z, x * y]], 3)
    X = MultiVector.vector_field([y, x, z])
    got = schouten_bracket(X, MultiVector.function(M))[()]
    assert got == M.map(lambda e: lie_derivative(X, e))


def test_wedge_anticommutes_on_vectors():
    assert wedge(dx, dy) == -wedge(dy, dx)
    assert wedge(dx, dx).is_zero()


def test_grade_beyond_dimension_is_zero(rng):
    a = rand_multivector(rng, 2, 2, 2)
    b = rand_multivector(rng, 2, 2, 2)
    assert schouten_bracket(a, b).is_zero()


def test_variable_mismatch_raises():
    with pytest.raises(ValueError):
        schouten_bracket(dx, MultiVector.function(Poly.var(2, 0)))
