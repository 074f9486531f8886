from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import strategies as st

from pvk.core import MultiVector, Poly, PolyMatrix
from pvk.core.poly import monomials

PRESETS = ["sl2", "so3", "h3", "aff1", "abelian:3"]
MODULES = ["trivial", "standard", "adjoint"]


def rand_poly(rng, nvars, degree, terms=4, lo=-3, hi=3, min_degree=0):
    pool = monomials(nvars, degree, min_degree)
    picked = rng.sample(pool, min(terms, len(pool)))
    return Poly(nvars, {e: Fraction(rng.randint(lo, hi), rng.choice([1, 1, 2, 3])) for e in picked})


def rand_multivector(rng, nvars, grade, degree, terms=3):
    comps = {S: rand_poly(rng, nvars, degree, terms) for S in combinations(range(nvars), grade)}
    return MultiVector(nvars, grade, comps)


def rand_matrix(rng, m, nvars, degree, terms=2, min_degree=0):
    return PolyMatrix([[rand_poly(rng, nvars, degree, terms, min_degree=min_degree)
                        for _ in range(m)] for _ in range(m)], nvars)


def to_sympy(p, syms):
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** k for s, k in zip(syms, e)])
                       for e, c in p.terms])


def from_sympy(expr, syms):
    expr = sympy.expand(expr)
    n = len(syms)
    if expr == 0:
        return Poly.zero(n)
    poly = sympy.Poly(expr, *syms)
    return Poly(n, {e: Fraction(int(c.p), int(c.q)) for e, c in poly.terms()})


@pytest.fixture
def rng():
    return random.Random(20261018)


fractions = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 12))


@st.composite
def polys(draw, nvars=3, degree=2, max_terms=4):
    pool = monomials(nvars, degree)
    keys = draw(st.lists(st.sampled_from(pool), max_size=max_terms, unique=True))
    return Poly(nvars, {k: draw(fractions) for k in keys})


@st.composite
def multivectors(draw, nvars=3, grade=1, degree=2):
    comps = {S: draw(polys(nvars, degree, 3)) for S in combinations(range(nvars), grade)}
    return MultiVector(nvars, grade, comps)


# -- acceptance summary ----------------------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        key = report.nodeid.rsplit("[", 1)[-1].rstrip("]")
        _ACCEPTANCE[key] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split("_")[1])):
        status = "PASS" if _ACCEPTANCE[key] == "passed" else "FAIL"
        terminalreporter.write_line(f"{key.replace('_', ' ')}: {status}")
