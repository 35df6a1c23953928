import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dpparam.fields import QQ
from dpparam.linalg import Matrix
from dpparam.polys import (
    ArityMismatch,
    MultiPoly,
    NotQuadratic,
    PolyMap,
    SingularTransform,
    linear_change,
    matrix_times_map,
    matrix_to_quadric,
    parse_multipoly,
    poly_to_str,
    quadric_to_matrix,
    substitute,
    z_varnames,
)


def zpoly(s, n=3):
    return parse_multipoly(s, z_varnames(n))


ST = ["s", "t"]


def stmap(*comps):
    return PolyMap([parse_multipoly(c, ST) for c in comps])


class TestSubstitute:
    def test_standard_conic_param(self):
        f = zpoly("z0*z2 - z1^2")
        assert substitute(f, stmap("s^2", "s*t", "t^2")).is_zero()

    def test_projection(self):
        f = parse_multipoly("z0", z_varnames(2))
        out = substitute(f, stmap("s", "t"))
        assert poly_to_str(out, ST) == "s"

    def test_circle_display(self):
        f = zpoly("z1^2 + z2^2 - z0^2")
        assert substitute(f, stmap("s^2 + t^2", "s^2 - t^2", "2*s*t")).is_zero()

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatch):
            substitute(zpoly("z0 + z1 + z2"), stmap("s", "t"))

    @given(st.data())
    @settings(max_examples=220, deadline=None)
    def test_ring_homomorphism(self, data):
        rng = random.Random(data.draw(st.integers(0, 10**6)))

        def rand_poly(nv, deg):
            terms = {}
            for _ in range(rng.randint(1, 4)):
                e = [0] * nv
                for _ in range(deg):
                    e[rng.randrange(nv)] += 1
                terms[tuple(e)] = Fraction(rng.randint(-4, 4))
            return MultiPoly(QQ, nv, terms)

        f = rand_poly(2, 2)
        g = rand_poly(2, 2)
        comps = [parse_multipoly("s^2 + t^2", ST), parse_multipoly("s*t - t^2", ST)]
        assert substitute(f + g, comps) == substitute(f, comps) + substitute(g, comps)
        assert substitute(f * g, comps) == substitute(f, comps) * substitute(g, comps)


class TestQuadricMatrix:
    def test_splitting(self):
        q = quadric_to_matrix(zpoly("z0*z2 - z1^2"))
        assert q.A.rows == [
            [0, 0, Fraction(1, 2)],
            [0, -1, 0],
            [Fraction(1, 2), 0, 0],
        ]

    def test_single_square(self):
        q = quadric_to_matrix(parse_multipoly("z0^2", z_varnames(1)))
        assert q.A.rows == [[1]]

    def test_roundtrip(self):
        rng = random.Random(5)
        for _ in range(30):
            n = rng.randint(1, 5)
            terms = {}
            for i in range(n):
                for j in range(i, n):
                    e = [0] * n
                    e[i] += 1
                    e[j] += 1
                    c = rng.randint(-4, 4)
                    if c:
                        terms[tuple(e)] = Fraction(c)
            if not terms:
                continue
            f = MultiPoly(QQ, n, terms)
            assert matrix_to_quadric(quadric_to_matrix(f)) == f

    def test_not_quadratic(self):
        with pytest.raises(NotQuadratic):
            quadric_to_matrix(zpoly("z0^3"))
        with pytest.raises(NotQuadratic):
            quadric_to_matrix(zpoly("z0^2 + z1"))


class TestLinearChange:
    def test_identity(self):
        f = zpoly("z0*z2 - z1^2")
        assert linear_change(f, Matrix.identity(QQ, 3)) == f

    def test_scaling(self):
        f = zpoly("z0*z2 - z1^2")
        assert linear_change(f, Matrix.identity(QQ, 3).scale(2)) == f * 4

    def test_transformation_law(self):
        rng = random.Random(11)
        f = zpoly("z0*z2 - z1^2 + z0*z1")
        A = quadric_to_matrix(f).A
        for _ in range(10):
            T = Matrix(QQ, [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)])
            if T.det() == 0:
                continue
            g = linear_change(f, T)
            assert quadric_to_matrix(g).A == T.transpose() * A * T

    def test_inverse_restores(self):
        rng = random.Random(13)
        f = zpoly("z0^2 + 2*z1*z2 - z2^2")
        while True:
            T = Matrix(QQ, [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)])
            if T.det() != 0:
                break
        assert linear_change(linear_change(f, T), T.inverse()) == f

    def test_singular_rejected(self):
        with pytest.raises(SingularTransform):
            linear_change(zpoly("z0^2"), Matrix.zero(QQ, 3, 3))


class TestParsePrint:
    def test_implicit_multiplication(self):
        f = parse_multipoly("2z0^2 - 3/4z1z2", z_varnames(3))
        assert poly_to_str(f) == "2*z0^2 - 3/4*z1*z2"

    def test_roundtrip(self):
        for s in ("z0*z2 - z1^2", "z0^2 + z1^2 + z2^2", "1/2*z0*z1 - 7*z2^2"):
            f = zpoly(s)
            assert zpoly(poly_to_str(f)) == f

    def test_matrix_times_map(self):
        Mx = Matrix(QQ, [[1, 0, 1], [1, 0, -1], [0, 2, 0]])
        pm = stmap("s^2", "s*t", "t^2")
        comp = matrix_times_map(Mx, pm)
        assert [poly_to_str(c, ST) for c in comp.components] == [
            "s^2 + t^2", "s^2 - t^2", "2*s*t",
        ]
