from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from spherepar import frames as fr
from spherepar.geometry import GeometryError, ParityError, sample_points
from spherepar.polybracket import (
    PolyVectorField,
    SparsePoly,
    SphereIdeal,
    Universe,
    UniverseMismatch,
    coords,
    frame_as_poly,
    lie_bracket,
    reduce,
    reduce_field,
    torsion_polys,
)

U = Universe(1, 1)  # x1 x2 y1 y2


def to_sympy(p: SparsePoly, syms):
    return sum(sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s**k for s, k in zip(syms, e)])
               for e, c in ((e, Fraction(c)) for e, c in p.terms.items()))


def symbols(u):
    return sp.symbols(" ".join(u.name(k) for k in range(u.nvars)))


def test_floats_forbidden():
    with pytest.raises(TypeError):
        SparsePoly.const(U, 0.5)
    with pytest.raises(TypeError):
        SparsePoly.var(U, 0) * 1.5


def test_basic_ring_ops():
    (x1, x2), (y1, y2) = coords(U)
    assert (y1 * y1).diff(U.y(1)) == y1 * 2
    p = (x1 + 1) * (x1 - 1)
    assert p == x1 * x1 - 1
    assert (x1 * Fraction(1, 3) * 3) == x1
    assert (x1 - x1).is_zero()
    with pytest.raises(UniverseMismatch):
        x1 + SparsePoly.var(Universe(2, 1), 0)


def test_torsion_poly():
    u = Universe(1, 3)
    t = torsion_polys(u)
    _, ys = coords(u)
    assert t[0] == -ys[1]
    assert t[1] == ys[0]
    with pytest.raises(ParityError):
        torsion_polys(Universe(1, 2))


def test_reduce_examples():
    u = Universe(2, 1)
    xs, (y1, y2) = coords(u)
    gx, gy = SphereIdeal(u).generators
    assert reduce(gx).is_zero() and reduce(gy).is_zero()
    sum_sq = xs[0] ** 2 + xs[1] ** 2 + xs[2] ** 2
    assert reduce(sum_sq) == 1
    t1, t2 = torsion_polys(u)
    # y1 t2 - y2 t1 = y1^2 + y2^2 -> 1
    assert reduce(y1 * t2 - y2 * t1) == 1
    assert reduce(xs[0] * y1) == xs[0] * y1


def test_reduce_matches_sympy_groebner():
    u = Universe(2, 1)
    syms = symbols(u)
    xs, ys = coords(u)
    G = sp.groebner([sum(s**2 for s in syms[:3]) - 1, sum(s**2 for s in syms[3:]) - 1],
                    syms[2], syms[1], syms[0], syms[4], syms[3], order="lex")
    rng = np.random.default_rng(0)
    for _ in range(20):
        p = SparsePoly.zero(u)
        for _ in range(4):
            e = tuple(int(k) for k in rng.integers(0, 4, size=u.nvars))
            p = p + SparsePoly(u, {e: int(rng.integers(-5, 6))})
        mine = to_sympy(reduce(p), syms)
        theirs = G.reduce(sp.expand(to_sympy(p, syms)))[1]
        assert sp.expand(mine - theirs) == 0


def test_bracket_textbook():
    (x1, x2), _ = coords(U)
    d1 = PolyVectorField.coordinate(U, U.x(1))
    X = PolyVectorField.coordinate(U, U.x(2)).scale(x1)
    assert lie_bracket(d1, X) == PolyVectorField.coordinate(U, U.x(2))
    assert lie_bracket(X, X).is_zero()


# random small polynomials and fields ------------------------------------------------

coef = st.integers(-3, 3)
expo = st.tuples(*[st.integers(0, 2)] * U.nvars)
polys = st.dictionaries(expo, coef, max_size=4).map(lambda d: SparsePoly(U, d))
fields = st.lists(polys, min_size=U.nvars, max_size=U.nvars).map(lambda cs: PolyVectorField(U, cs))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    k = U.x(1)
    assert (a * b).diff(k) == a.diff(k) * b + a * b.diff(k)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_reduce_normal_form(a, b):
    ra, rb = reduce(a), reduce(b)
    assert reduce(ra) == ra
    assert reduce(a + b) == reduce(ra + rb)
    assert reduce(a * b) == reduce(ra * rb)
    lx, ly = SphereIdeal(U).leading_variables
    assert all(e[lx] <= 1 and e[ly] <= 1 for e in ra.terms)


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_ideal_members_reduce_to_zero(a, b):
    gx, gy = SphereIdeal(U).generators
    assert reduce(a * gx + b * gy).is_zero()


@settings(max_examples=30, deadline=None)
@given(fields, fields, fields)
def test_bracket_antisymmetric_bilinear_jacobi(X, Y, Z):
    assert (lie_bracket(X, Y) + lie_bracket(Y, X)).is_zero()
    assert lie_bracket(X + Y, Z) == lie_bracket(X, Z) + lie_bracket(Y, Z)
    jac = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))
    assert jac.is_zero()


@settings(max_examples=30, deadline=None)
@given(polys, polys, fields, fields)
def test_leibniz(f, g, X, Y):
    lhs = lie_bracket(X.scale(f), Y.scale(g))
    rhs = lie_bracket(X, Y).scale(f * g) + Y.scale(f * X.apply(g)) - X.scale(g * Y.apply(f))
    assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(fields, fields)
def test_bracket_matches_sympy(X, Y):
    syms = symbols(U)
    xs = [to_sympy(c, syms) for c in X.components]
    ys = [to_sympy(c, syms) for c in Y.components]
    ref = [sp.expand(sum(xs[l] * sp.diff(ys[k], syms[l]) - ys[l] * sp.diff(xs[k], syms[l]) for l in range(4)))
           for k in range(4)]
    mine = lie_bracket(X, Y)
    for k in range(4):
        assert sp.expand(to_sympy(mine.components[k], syms) - ref[k]) == 0


def test_frame_as_poly_first_field_components():
    b = frame_as_poly("B_S1", 2, 1)
    u = Universe(2, 1)
    (x1, x2, x3), _ = coords(u)
    assert b[0].components[:3] == (1 - x1 * x1, -x1 * x2, -x1 * x3)


@pytest.mark.parametrize("m,n", [(1, 1), (3, 3), (4, 5), (2, 7)])
def test_frame_P_degree(m, n):
    assert max(f.degree() for f in frame_as_poly("P", m, n)) <= 3


@pytest.mark.parametrize("kind,m,n", [("B_S1", 3, 1), ("B_S3", 2, 3), ("P", 3, 5), ("P", 1, 1)])
def test_frame_as_poly_matches_numeric(kind, m, n):
    polys_ = frame_as_poly(kind, m, n)
    pts = sample_points(m, n, 25, 9)
    arr = np.array([p.stacked() for p in pts])
    vals = np.stack([f.evaluate(arr) for f in polys_], axis=2)
    ref = np.stack([fr.build_frame(kind, p).matrix for p in pts])
    assert np.max(np.abs(vals - ref)) < 1e-12


def test_frame_as_poly_errors():
    with pytest.raises(GeometryError):
        frame_as_poly("B_S1", 2, 3)
    with pytest.raises(ParityError):
        frame_as_poly("P", 2, 4)
    with pytest.raises(GeometryError):
        frame_as_poly("B_GENERIC", 2, 3)


@pytest.mark.parametrize("kind,m,n", [("B_S1", 3, 1), ("B_S3", 2, 3), ("P", 2, 3)])
def test_brackets_of_frame_fields_are_tangent(kind, m, n):
    f = frame_as_poly(kind, m, n)
    u = Universe(m, n)
    xs, ys = coords(u)
    for i in range(len(f)):
        for j in range(i + 1, len(f)):
            br = lie_bracket(f[i], f[j])
            dx = sum((br.components[k] * xs[k] for k in range(m + 1)), SparsePoly.zero(u))
            dy = sum((br.components[m + 1 + k] * ys[k] for k in range(n + 1)), SparsePoly.zero(u))
            assert reduce(dx).is_zero() and reduce(dy).is_zero()


def test_reduce_field_and_compiled_jacobian():
    f = frame_as_poly("P", 2, 3)
    arr = np.array([p.stacked() for p in sample_points(2, 3, 5, 1)])
    from spherepar.polybracket import CompiledField, numeric_bracket

    a, b = CompiledField(f[0]), CompiledField(f[3])
    num = numeric_bracket(a, b, arr)
    exact = reduce_field(lie_bracket(f[0], f[3])).evaluate(arr)
    assert np.max(np.abs(num - exact)) < 1e-12
