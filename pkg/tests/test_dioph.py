import itertools
from fractions import Fraction
from math import isqrt

import pytest

from dpparam.fields import QQ
from dpparam.linalg import Matrix, SymQuadric
from dpparam.dioph import (
    ConicPoint,
    FactorizationLimit,
    conic_parametrization,
    conic_point,
    factor_integer,
    is_probable_prime,
    sqrt_mod_squarefree,
    squarefree_split,
    tonelli_shanks,
)
from dpparam.polys import matrix_to_quadric, substitute, PolyMap, MultiPoly


def diag(a, b, c):
    return SymQuadric(Matrix(QQ, [[a, 0, 0], [0, b, 0], [0, 0, c]]))


def brute_force_point(a, b, c, H):
    """Oracle: exhaustive search over coprime triples of height <= H."""
    from math import gcd

    for x in range(0, H + 1):
        for y in range(0, H + 1):
            num = -(a * x * x + b * y * y)
            if c == 0:
                if num == 0 and (x or y):
                    return (x, y, 1)
                continue
            if num % c:
                continue
            z2 = num // c
            if z2 < 0:
                continue
            z = isqrt(z2)
            if z * z == z2 and (x or y or z):
                return (x, y, z)
    return None


class TestFactor:
    def test_basics(self):
        assert factor_integer(12) == [2, 2, 3]
        assert factor_integer(1) == []
        assert factor_integer(10**9 + 7) == [10**9 + 7]

    def test_rho_semiprime(self):
        n = 1000003 * 1000033
        assert factor_integer(n) == [1000003, 1000033]

    def test_primality(self):
        assert is_probable_prime(2) and is_probable_prime(10**9 + 7)
        assert not is_probable_prime(561)  # Carmichael number
        assert not is_probable_prime(10**9 + 8)

    def test_squarefree_split(self):
        assert squarefree_split(-720) == (-5, 12)
        assert squarefree_split(0) == (0, 1)

    def test_tonelli(self):
        for p in (7, 13, 10007):
            for a in range(1, 12):
                r = tonelli_shanks(a, p)
                if a % p == 0:
                    assert r == 0
                elif pow(a, (p - 1) // 2, p) == 1:
                    assert r is not None and r * r % p == a % p
                else:
                    assert r is None

    def test_crt_sqrt(self):
        m = 3 * 5 * 7
        r = sqrt_mod_squarefree(4, m, [3, 5, 7])
        assert r is not None and r * r % m == 4


class TestConicPoint:
    def test_isotropic(self):
        pt = conic_point(diag(1, 1, -1))
        assert pt is not None

    def test_quaternion_conic(self):
        assert conic_point(diag(1, 1, 1)) is None

    def test_three(self):
        # brute-force oracle: nothing of height <= 100
        assert brute_force_point(1, 1, -3, 100) is None
        assert conic_point(diag(1, 1, -3)) is None

    def test_point_invariant(self):
        q = diag(3, 5, -7 * 11 * 2)
        pt = conic_point(q)
        bf = brute_force_point(3, 5, -7 * 11 * 2, 60)
        assert (pt is None) == (bf is None)
        if pt is not None:
            assert q.value([Fraction(c) for c in pt.coords]) == 0

    def test_descent_large_coefficient(self):
        q = diag(1, 1, -(10**6 + 33))
        pt = conic_point(q)
        assert pt is not None

    def test_nondiagonal(self):
        A = Matrix(QQ, [[0, 0, Fraction(1, 2)], [0, -1, 0], [Fraction(1, 2), 0, 0]])
        pt = conic_point(SymQuadric(A))
        assert pt is not None

    def test_degenerate_rank2(self):
        pt = conic_point(diag(1, -1, 0))
        assert pt is not None

    def test_oracle_agreement_sample(self):
        import random

        rng = random.Random(7)
        for _ in range(80):
            a, b, c = (rng.randint(-15, 15) for _ in range(3))
            if a * b * c == 0:
                continue
            got = conic_point(diag(a, b, c))
            bf = brute_force_point(a, b, c, 60)
            if got is None:
                assert bf is None, (a, b, c)


class TestParametrization:
    def _check(self, q, pt):
        M = conic_parametrization(q, pt)
        mono = PolyMap([
            MultiPoly(QQ, 2, {(2, 0): 1}),
            MultiPoly(QQ, 2, {(1, 1): 1}),
            MultiPoly(QQ, 2, {(0, 2): 1}),
        ])
        from dpparam.polys import matrix_times_map

        comp = matrix_times_map(M, mono)
        f = matrix_to_quadric(q)
        assert substitute(f, comp).is_zero()
        assert M.det() != 0
        return M

    def test_345(self):
        self._check(diag(1, 1, -1), [3, 4, 5])

    def test_circle_paper(self):
        q = diag(-1, 1, 1)
        pt = conic_point(q)
        self._check(q, list(pt))

    def test_permutation_case(self):
        self._check(diag(1, 1, -1), [1, 0, 1])
        self._check(diag(1, -1, 1), [1, 1, 0])  # p2 = 0 forces a swap
