import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dpparam.fields import QQ
from dpparam.linalg import Matrix, Subspace
from dpparam.lie import (
    ChevalleySL2,
    LieAlgebra,
    NoConic,
    NotClosed,
    ShapeMismatch,
    UnsupportedType,
    canonical_chevalley_basis,
    cartan_subalgebra,
    centroid,
    decompose_semisimple,
    levi_subalgebra,
    lie_from_matrix_space,
    module_isomorphism,
    module_weights,
    nilradical_scoped,
    root_space_decomposition,
    sl2_twist_to_conic,
    solvable_radical,
    split_sl2,
    CartanData,
)


def M(rows):
    return Matrix(QQ, rows)


def sl2_std():
    e = M([[0, 1], [0, 0]])
    f = M([[0, 0], [1, 0]])
    h = M([[1, 0], [0, -1]])
    return LieAlgebra(QQ, [e, f, h])


def blockdiag(A, B):
    n = A.nrows + B.nrows
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(A.nrows):
        for j in range(A.nrows):
            rows[i][j] = A[i, j]
    for i in range(B.nrows):
        for j in range(B.nrows):
            rows[A.nrows + i][A.nrows + j] = B[i, j]
    return Matrix(QQ, rows)


def sl2_plus_sl2():
    e = M([[0, 1], [0, 0]])
    f = M([[0, 0], [1, 0]])
    h = M([[1, 0], [0, -1]])
    Z = Matrix.zero(QQ, 2, 2)
    return LieAlgebra(QQ, [blockdiag(x, Z) for x in (e, f, h)] + [blockdiag(Z, x) for x in (e, f, h)])


def circle_algebra():
    x = M([[0, 0, 1], [0, 0, 1], [1, -1, 0]])
    y = M([[0, 0, 1], [0, 0, -1], [1, 1, 0]])
    h = M([[0, 2, 0], [2, 0, 0], [0, 0, 0]])
    return LieAlgebra(QQ, [x, y, h])


def so3():
    return LieAlgebra(QQ, [
        M([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]),
        M([[0, 0, 1], [0, 0, 0], [-1, 0, 0]]),
        M([[0, 0, 0], [0, 0, 1], [0, -1, 0]]),
    ])


def blowup_h0():
    E = M([[2, 0, 0], [0, -1, 0], [0, 0, -1]])
    E12 = M([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    E13 = M([[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    C1 = M([[0, 0, 0], [0, 1, 0], [0, 0, -1]])
    C2 = M([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    C3 = M([[0, 0, 0], [0, 0, 0], [0, 1, 0]])
    return LieAlgebra(QQ, [E, E12, E13, C1, C2, C3]), (E, E12, E13)


class TestConstruction:
    def test_trace_zero_2x2_is_sl2(self):
        g = lie_from_matrix_space(Subspace(QQ, 4, [[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, -1]]))
        assert g.dim == 3

    def test_abelian_identity_span(self):
        g = lie_from_matrix_space(Subspace(QQ, 4, [[1, 0, 0, 1]]))
        assert g.dim == 1 and all(all(c == 0 for c in g.sc[0][0]) for _ in [0])

    def test_single_nilpotent(self):
        g = LieAlgebra(QQ, [M([[0, 1], [0, 0]])])
        assert g.sc[0][0] == [0]

    def test_not_closed(self):
        with pytest.raises(NotClosed) as ei:
            LieAlgebra(QQ, [M([[0, 1], [0, 0]]), M([[0, 0], [1, 0]])])
        assert ei.value.witness == (0, 1)


class TestRadical:
    def test_sl2_semisimple(self):
        assert solvable_radical(sl2_std()).dim == 0

    def test_blowup_radical(self):
        g, (E, E12, E13) = blowup_h0()
        rad = solvable_radical(g)
        assert rad.dim == 3
        for mat in (E, E12, E13):
            assert rad.contains(g.coords_of(mat))

    def test_abelian_whole(self):
        g = LieAlgebra(QQ, [Matrix.identity(QQ, 2)])
        assert solvable_radical(g).dim == 1


class TestDecompose:
    def test_two_ideals(self):
        ideals = decompose_semisimple(sl2_plus_sl2())
        assert sorted(i.dim for i in ideals) == [3, 3]
        # pairwise brackets vanish
        g = sl2_plus_sl2()
        for a in ideals[0].basis:
            for b in ideals[1].basis:
                assert a.commutator(b).is_zero()

    def test_simple_returns_itself(self):
        assert [a.dim for a in decompose_semisimple(sl2_std())] == [3]

    def test_sl3_single(self):
        g = _sl3()
        assert [a.dim for a in decompose_semisimple(g)] == [8]


def _sl3():
    def E(i, j):
        m = [[Fraction(0)] * 3 for _ in range(3)]
        m[i][j] = Fraction(1)
        return Matrix(QQ, m)

    basis = [E(0, 1), E(1, 2), E(0, 2), E(1, 0), E(2, 1), E(2, 0),
             E(0, 0) - E(1, 1), E(1, 1) - E(2, 2)]
    return LieAlgebra(QQ, basis)


class TestCentroid:
    def test_sl2_dim1(self):
        basis, _ = centroid(sl2_std())
        assert len(basis) == 1

    def test_product_dim2(self):
        basis, _ = centroid(sl2_plus_sl2())
        assert len(basis) == 2

    def test_sphere_algebra_gauss(self):
        # g0 of the sphere: simple with centroid Q(i); check dimension 2 and
        # that the non-scalar generator squares to a negative rational
        from dpparam.polys import parse_multipoly, z_varnames, quadric_to_matrix
        from dpparam.surfaces import QuadricVariety, lie_algebra_of_variety

        sph = parse_multipoly("z1^2 + z2^2 + z3^2 - z0^2", z_varnames(4))
        V = QuadricVariety(3, [quadric_to_matrix(sph)])
        _, g0 = lie_algebra_of_variety(V)
        basis, table = centroid(g0)
        assert len(basis) == 2
        assert len(decompose_semisimple(g0)) == 1  # simple over Q


class TestCartan:
    def test_sl2_rank1(self):
        h = cartan_subalgebra(sl2_std())
        assert h.dim == 1

    def test_sl3_rank2(self):
        h = cartan_subalgebra(_sl3())
        assert h.dim == 2

    def test_circle_nonsplit_cartan(self):
        # the circle algebra has 1-dim Cartans; the ad eigenvalues of the
        # paper's generator are irrational (the minimal polynomial of ad h
        # has an irreducible quadratic factor)
        g = circle_algebra()
        h = cartan_subalgebra(g)
        assert h.dim == 1
        from dpparam.linalg import minimal_polynomial
        from dpparam.fields import factor_rational_poly

        mp = minimal_polynomial(g.ad(h.basis_vectors()[0]))
        deg2 = [p for p in factor_rational_poly(mp.monic()) if p.degree >= 2]
        assert deg2, "expected a nonsplit factor in the Cartan minimal polynomial"

    def test_roots_split_sl2(self):
        g = sl2_std()
        cd = root_space_decomposition(g, Subspace(QQ, 3, [[0, 0, 1]]))
        assert sorted(r[0] for r, _ in cd.root_spaces) == [-2, 2]

    def test_roots_sl3(self):
        g = _sl3()
        h = Subspace(QQ, 8, [[0] * 6 + [1, 0], [0] * 7 + [1]])
        cd = root_space_decomposition(g, h)
        assert len(cd.root_spaces) == 6
        assert all(S.dim == 1 for _, S in cd.root_spaces)

    def test_roots_product(self):
        g = sl2_plus_sl2()
        h = Subspace(QQ, 6, [[0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1]])
        cd = root_space_decomposition(g, h)
        roots = sorted(tuple(r) for r, _ in cd.root_spaces)
        assert roots == [(-2, 0), (0, -2), (0, 2), (2, 0)]


class TestConic:
    def test_lemma_basis_conic(self):
        rng = random.Random(2)
        for _ in range(12):
            a = Fraction(rng.randint(1, 6)) * rng.choice([1, -1])
            b = Fraction(rng.randint(1, 6)) * rng.choice([1, -1])
            adx = M([[0, 0, 0], [0, 0, -1], [0, b, 0]])
            ady = M([[0, 0, -a], [0, 0, 0], [-b, 0, 0]])
            adh = M([[0, a, 0], [1, 0, 0], [0, 0, 0]])
            g = LieAlgebra(QQ, [adx, ady, adh])
            q = sl2_twist_to_conic(g)
            d = [q.A[i, i] for i in range(3)]
            assert all(q.A[i, j] == 0 for i in range(3) for j in range(3) if i != j)
            # proportional to diag(-b, ab, a)
            ratios = {d[0] / (-b), d[1] / (a * b), d[2] / a}
            assert len(ratios) == 1

    def test_so3_conic_is_sum_of_squares(self):
        q = sl2_twist_to_conic(so3())
        assert [q.A[i, i] for i in range(3)] == [1, 1, 1]

    def test_split_standard(self):
        chev = split_sl2(sl2_std())
        assert chev is not None

    def test_circle_splits(self):
        g = circle_algebra()
        chev = split_sl2(g)
        assert chev is not None
        # triple lies in g and satisfies the relations (checked in ChevalleySL2)
        xm, ym, hm = chev.matrices()
        assert g.coords_of(xm) is not None

    def test_so3_does_not_split(self):
        assert split_sl2(so3()) is None

    def test_no_conic_for_wrong_dim(self):
        with pytest.raises(NoConic):
            sl2_twist_to_conic(sl2_plus_sl2())


class TestLevi:
    def test_semisimple_identity(self):
        g = sl2_std()
        assert levi_subalgebra(g).dim == 3

    def test_blowup_levi(self):
        g, _ = blowup_h0()
        lev = levi_subalgebra(g)
        assert lev.dim == 3
        assert solvable_radical(lev).dim == 0
        rad = solvable_radical(g)
        levspace = Subspace(QQ, 6, [g.coords_of(b) for b in lev.basis])
        assert levspace.intersect(rad).dim == 0

    def test_nilradical(self):
        g, (E, E12, E13) = blowup_h0()
        N = nilradical_scoped(g)
        assert N.dim == 2
        assert N.contains(g.coords_of(E12)) and N.contains(g.coords_of(E13))

    def test_nilradical_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            nilradical_scoped(sl2_std())

    def test_conjugated_blowup(self):
        rng = random.Random(9)
        g, _ = blowup_h0()
        while True:
            T = M([[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
            if T.det() != 0:
                break
        Ti = T.inverse()
        g2 = LieAlgebra(QQ, [T * b * Ti for b in g.basis])
        assert solvable_radical(g2).dim == 3
        assert nilradical_scoped(g2).dim == 2
        lev = levi_subalgebra(g2)
        assert solvable_radical(lev).dim == 0


class TestChevalleyAndModules:
    def test_a1_integral(self):
        g = sl2_std()
        cd = root_space_decomposition(g, Subspace(QQ, 3, [[0, 0, 1]]))
        cb = canonical_chevalley_basis(g, cd)
        ChevalleySL2(g, cb["x"], cb["y"], cb["h"])

    def test_a2_integral_constants(self):
        g = _sl3()
        h = Subspace(QQ, 8, [[0] * 6 + [1, 0], [0] * 7 + [1]])
        cb = canonical_chevalley_basis(g, root_space_decomposition(g, h))
        names = ["x_a", "x_b", "x_ab", "y_a", "y_b", "y_ab", "h_a", "h_b"]
        sub = g.subalgebra([cb[n] for n in names])
        assert all(
            c.denominator == 1 for i in range(8) for j in range(8) for c in sub.sc[i][j]
        )

    def test_unsupported(self):
        g = sl2_plus_sl2()
        h = Subspace(QQ, 6, [[0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1]])
        with pytest.raises(UnsupportedType):
            canonical_chevalley_basis(g, root_space_decomposition(g, h))

    def test_module_weights_natural_sl2(self):
        g = sl2_std()
        cd = root_space_decomposition(g, Subspace(QQ, 3, [[0, 0, 1]]))
        wm = module_weights(g, cd)
        assert sorted(w[0] for w, _ in wm.weights) == [-1, 1]

    def test_module_isomorphism_identity_is_scalar(self):
        g = circle_algebra()
        cd = root_space_decomposition(g, _split_cartan_of(g))
        N = module_isomorphism(g, g, lambda v: list(v), cd)
        # Schur: N is a scalar matrix
        lam = N[0, 0]
        assert N == Matrix.identity(QQ, 3).scale(lam)


def _split_cartan_of(g):
    chev = split_sl2(g)
    return Subspace(QQ, g.dim, [chev.h])
