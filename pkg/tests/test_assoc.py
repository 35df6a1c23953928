import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dpparam.fields import QQ, poly_str
from dpparam.linalg import Matrix, Subspace
from dpparam.assoc import (
    AssocAlgebra,
    NotIdeal,
    NotMinimal,
    algebra_from_matrix_span,
    centralizer,
    first_noncentral,
    generated_subalgebra,
    is_zero_divisor,
    iso_from_left_ideal,
    left_ideal_from,
    left_mul_map,
    matrix_algebra,
    min_poly_element,
    quotient_by_nilpotent_ideal,
    right_mul_map,
)


def scramble_matrix_algebra(n, rng):
    dim = n * n
    while True:
        T = Matrix(QQ, [[rng.randint(-4, 4) for _ in range(dim)] for _ in range(dim)])
        if T.det() != 0:
            break

    def unflat(v):
        return Matrix(QQ, [v[i * n:(i + 1) * n] for i in range(n)])

    mats = [unflat([T[j, i] for j in range(dim)]) for i in range(dim)]
    return algebra_from_matrix_span(QQ, mats)[0]


class TestMulMaps:
    def test_identity_and_zero(self):
        A = matrix_algebra(QQ, 2)
        assert right_mul_map(A.one_element()) == Matrix.identity(QQ, 4)
        assert right_mul_map(A.zero_element()).is_zero()
        assert left_mul_map(A.one_element()) == Matrix.identity(QQ, 4)

    def test_e11_rank(self):
        A = matrix_algebra(QQ, 2)
        assert right_mul_map(A.basis_element(0)).rank() == 2

    @given(st.lists(st.integers(-3, 3), min_size=4, max_size=4),
           st.lists(st.integers(-3, 3), min_size=4, max_size=4))
    @settings(max_examples=220, deadline=None)
    def test_homomorphism_laws(self, u, v):
        A = matrix_algebra(QQ, 2)
        a, b = A.element(u), A.element(v)
        assert left_mul_map(a * b) == left_mul_map(a) * left_mul_map(b)
        assert right_mul_map(a * b) == right_mul_map(b) * right_mul_map(a)


class TestMinPoly:
    def test_one(self):
        A = matrix_algebra(QQ, 3)
        assert poly_str(min_poly_element(A.one_element())) == "x - 1"

    def test_idempotent(self):
        A = matrix_algebra(QQ, 2)
        assert poly_str(min_poly_element(A.basis_element(0))) == "x^2 - x"

    def test_matches_matrix_minpoly(self):
        from dpparam.linalg import minimal_polynomial

        rng = random.Random(4)
        A = matrix_algebra(QQ, 3)
        for _ in range(10):
            coords = [rng.randint(-3, 3) for _ in range(9)]
            a = A.element(coords)
            Mmat = Matrix(QQ, [coords[0:3], coords[3:6], coords[6:9]])
            assert min_poly_element(a) == minimal_polynomial(Mmat)


class TestCentralizer:
    def test_one_gives_all(self):
        A = matrix_algebra(QQ, 2)
        C, incl = centralizer(A.one_element())
        assert C.dim == 4

    def test_diagonal(self):
        A = matrix_algebra(QQ, 3)
        a = A.element([1, 0, 0, 0, 2, 0, 0, 0, 3])
        C, _ = centralizer(a)
        assert C.dim == 3

    def test_center(self):
        assert matrix_algebra(QQ, 3).center().dim == 1


class TestZeroDivisorsAndIdeals:
    def test_basic(self):
        A = matrix_algebra(QQ, 2)
        assert is_zero_divisor(A.basis_element(0))
        assert not is_zero_divisor(A.zero_element())
        assert not is_zero_divisor(A.one_element() + A.basis_element(1))

    def test_ideal_and_iso(self):
        A = matrix_algebra(QQ, 2)
        L = left_ideal_from(A.basis_element(0))
        assert L.dim == 2
        iso = iso_from_left_ideal(A, L)
        # multiplicativity is checked in the constructor; spot check roundtrip
        a = A.element([1, 2, 3, 4])
        assert iso.from_matrix(iso.to_matrix(a)) == a

    def test_invertible_gives_everything(self):
        A = matrix_algebra(QQ, 2)
        assert left_ideal_from(A.one_element()).dim == 4

    def test_not_minimal(self):
        A = matrix_algebra(QQ, 2)
        with pytest.raises(NotMinimal):
            iso_from_left_ideal(A, left_ideal_from(A.one_element()))

    def test_scrambled_roundtrip(self):
        rng = random.Random(42)
        A = scramble_matrix_algebra(2, rng)
        # find a zero divisor by brute inspection of small elements
        found = None
        for i in range(A.dim):
            for j in range(A.dim):
                cand = A.basis_element(i) + A.basis_element(j) if i != j else A.basis_element(i)
                if is_zero_divisor(cand):
                    found = cand
                    break
            if found:
                break
        if found is None:
            pytest.skip("no small zero divisor in this scramble")
        L = left_ideal_from(found)
        if L.dim == 2:
            iso_from_left_ideal(A, L)


class TestSubalgebras:
    def test_empty_gens(self):
        A = matrix_algebra(QQ, 3)
        B, _ = generated_subalgebra(A, [])
        assert B.dim == 1

    def test_full(self):
        A = matrix_algebra(QQ, 2)
        B, _ = generated_subalgebra(A, [A.basis_element(i) for i in range(4)])
        assert B.dim == 4

    def test_idempotent_closure(self):
        A = matrix_algebra(QQ, 3)
        B, incl = generated_subalgebra(A, [A.basis_element(1)])
        again, _ = generated_subalgebra(A, incl)
        assert again.dim == B.dim


class TestQuotient:
    def _upper_triangular(self):
        mats = [
            Matrix(QQ, [[1, 0], [0, 0]]),
            Matrix(QQ, [[0, 0], [0, 1]]),
            Matrix(QQ, [[0, 1], [0, 0]]),
        ]
        return algebra_from_matrix_span(QQ, mats)[0]

    def test_trivial_quotient(self):
        A = self._upper_triangular()
        Q, proj, sect = quotient_by_nilpotent_ideal(A, Subspace(QQ, 3, []))
        assert Q.dim == 3

    def test_quotient_by_nilpotents(self):
        A = self._upper_triangular()
        Q, proj, sect = quotient_by_nilpotent_ideal(A, Subspace(QQ, 3, [[0, 0, 1]]))
        assert Q.dim == 2
        # projection is an algebra map on a sample
        a = A.element([1, 2, 3])
        b = A.element([0, 1, -1])
        assert proj(a * b) == proj(a) * proj(b)

    def test_whole_not_ideal(self):
        A = self._upper_triangular()
        with pytest.raises(NotIdeal):
            quotient_by_nilpotent_ideal(A, Subspace(QQ, 3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]))


class TestNoncentral:
    def test_first_noncentral_deterministic(self):
        A = matrix_algebra(QQ, 2)
        x = first_noncentral(A)
        assert x == A.basis_element(0)
