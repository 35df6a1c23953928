import random
from fractions import Fraction

import pytest

from dpparam.fields import QQ
from dpparam.linalg import Matrix, Subspace
from dpparam.polys import parse_multipoly, quadric_to_matrix, substitute, z_varnames
from dpparam.surfaces import (
    EXPECTED_GEN_COUNT,
    KINDS,
    Parametrization,
    QuadricVariety,
    auto_classify,
    generate_example,
    induced_rep,
    lie_algebra_of_variety,
    parametrize_conic,
    parametrize_variety,
    standard_monomials,
    standard_surface,
    verify_parametrization,
)
from dpparam.lie import solvable_radical, decompose_semisimple, module_weights, split_sl2
from dpparam.lie import root_space_decomposition


def variety_from(texts, n1):
    names = z_varnames(n1)
    return QuadricVariety(n1 - 1, [quadric_to_matrix(parse_multipoly(t, names)) for t in texts])


def circle():
    return variety_from(["z1^2 + z2^2 - z0^2"], 3)


class TestStandardSurfaces:
    @pytest.mark.parametrize("kind", KINDS)
    def test_generator_counts(self, kind):
        ss = standard_surface(kind)
        assert len(ss.variety.gens) == EXPECTED_GEN_COUNT[kind]

    @staticmethod
    def _proportional(f, g):
        for e, c in f.terms.items():
            lam = g.terms.get(e)
            if lam is not None:
                ratio = c / lam
                return f == g * ratio
        return False

    def test_conic_generator(self):
        ss = standard_surface("Conic")
        f = ss.variety.polynomials()[0]
        target = parse_multipoly("z0*z2 - z1^2", z_varnames(3))
        assert self._proportional(f, target)

    def test_segre_generator(self):
        ss = standard_surface("SegreQuadric")
        f = ss.variety.polynomials()[0]
        target = parse_multipoly("z0*z3 - z1*z2", z_varnames(4))
        assert self._proportional(f, target)

    @pytest.mark.parametrize("kind", KINDS)
    def test_param_satisfies_ideal(self, kind):
        ss = standard_surface(kind)
        for f in ss.variety.polynomials():
            assert substitute(f, ss.param).is_zero()


class TestLieAlgebraOfVariety:
    def test_circle_dims(self):
        g, g0 = lie_algebra_of_variety(circle())
        assert g.dim == 4 and g0.dim == 3
        # g contains the antisymmetric generators and the identity
        assert g.coords_of(Matrix.identity(QQ, 3)) is not None

    @pytest.mark.parametrize("kind,dim0", [
        ("SegreQuadric", 6), ("P1xP1Antican", 6), ("BlowupP2", 6), ("P2Antican", 8),
    ])
    def test_standard_dims(self, kind, dim0):
        ss = standard_surface(kind)
        _, g0 = lie_algebra_of_variety(ss.variety)
        assert g0.dim == dim0

    def test_conjugation_equivariance(self):
        V, S = generate_example("Conic", 5, 17)
        std = standard_surface("Conic")
        _, g0_std = lie_algebra_of_variety(std.variety)
        _, g0_t = lie_algebra_of_variety(V)
        # points map by p -> Sp, so the algebra conjugates by S (= T^{-1})
        Sinv = S.inverse()
        conj = [S * b * Sinv for b in g0_std.basis]
        span1 = Subspace(QQ, 9, [m.flatten() for m in conj])
        span2 = Subspace(QQ, 9, [m.flatten() for m in g0_t.basis])
        assert span1 == span2


class TestClassification:
    @pytest.mark.parametrize("kind", KINDS)
    def test_standards_classify(self, kind):
        ss = standard_surface(kind)
        assert auto_classify(ss.variety) == kind

    def test_transform_preserves_class(self):
        V, _ = generate_example("BlowupP2", 4, 3)
        assert auto_classify(V) == "BlowupP2"

    def test_unrecognized(self):
        # a quadric system that is no Del Pezzo model: rank-2 pencil in P^2
        V = variety_from(["z0^2", "z1^2"], 3)
        assert auto_classify(V) == "Unrecognized"


class TestConicDriver:
    def test_circle(self):
        res = parametrize_conic(circle())
        assert res.status == "parametrized"
        assert verify_parametrization(circle(), res.parametrization)

    def test_anisotropic(self):
        V = variety_from(["z0^2 + z1^2 + z2^2"], 3)
        res = parametrize_variety(V)
        assert res.status == "not_rational"

    def test_standard_against_itself(self):
        ss = standard_surface("Conic")
        res = parametrize_variety(ss.variety)
        assert res.status == "parametrized"


class TestModuleStructure:
    def test_blowup_levi_submodule_dims(self):
        ss = standard_surface("BlowupP2")
        _, g0 = lie_algebra_of_variety(ss.variety)
        from dpparam.lie import levi_subalgebra

        lev = levi_subalgebra(g0)
        chev = split_sl2(lev)
        assert chev is not None
        _, _, hm = chev.matrices()
        from dpparam.linalg import simultaneous_eigenspaces

        spaces = simultaneous_eigenspaces([hm])
        weights = sorted((int(w[0]), S.dim) for w, S in spaces)
        # W2+W3+W4: weights -3..3 with dims 1,1,2,1,2,1,1
        assert weights == [(-3, 1), (-2, 1), (-1, 2), (0, 1), (1, 2), (2, 1), (3, 1)]

    def test_dp9_weight_count(self):
        ss = standard_surface("P2Antican")
        _, g0 = lie_algebra_of_variety(ss.variety)
        from dpparam.surfaces import _dp9_std_data, _dp9_std_cartan
        from dpparam.lie import LieAlgebra

        pm, labels, mats = _dp9_std_data()
        std_alg = LieAlgebra(QQ, mats, check_jacobi=False)
        cartan = _dp9_std_cartan(std_alg, labels)
        wm = module_weights(std_alg, cartan)
        assert len(wm.weights) == 10
        # multiset of weights of Sym^3(natural): highest weight (3, 0)
        ws = sorted(tuple(int(x) for x in w) for w, _ in wm.weights)
        assert (3, 0) in ws
        assert all(S.dim == 1 for _, S in wm.weights)


class TestRoundTripSmoke:
    @pytest.mark.parametrize("kind,seed", [
        ("SegreQuadric", 11), ("P1xP1Antican", 12), ("BlowupP2", 13),
    ])
    def test_small_transform(self, kind, seed):
        V, _ = generate_example(kind, 5, seed)
        res = parametrize_variety(V)
        assert res.status == "parametrized"
        assert verify_parametrization(V, res.parametrization)

    def test_dp9_standard(self):
        ss = standard_surface("P2Antican")
        res = parametrize_variety(ss.variety)
        assert res.status == "parametrized"


class TestTwistDriver:
    def test_sphere(self):
        V = variety_from(["z1^2 + z2^2 + z3^2 - z0^2"], 4)
        res = parametrize_variety(V)
        assert res.status == "parametrized"
        assert res.parametrization.monomials.degree == 2
        assert verify_parametrization(V, res.parametrization)

    def test_isotropic_quadric_is_product(self):
        V = variety_from(["z0^2 - z1^2 - z2^2 + z3^2"], 4)
        res = parametrize_variety(V)
        assert res.status == "parametrized"
        assert verify_parametrization(V, res.parametrization)

    def test_definite_quadric_no_parametrization(self):
        V = variety_from(["z0^2 + z1^2 + z2^2 + z3^2"], 4)
        res = parametrize_variety(V)
        assert res.status in ("not_rational", "unknown")
        # brute-force oracle: no small rational points
        f = V.polynomials()[0]
        for x in range(-4, 5):
            for y in range(-4, 5):
                for z in range(-4, 5):
                    for w in range(-4, 5):
                        if (x, y, z, w) != (0, 0, 0, 0):
                            assert f.evaluate([x, y, z, w]) != 0


class TestInducedRep:
    def test_sl2_on_conic_monomials_matches_paper(self):
        pm = standard_monomials("Conic")
        a = Matrix(QQ, [[0, 1], [0, 0]])
        R = induced_rep(a, pm)
        assert R == Matrix(QQ, [[0, 2, 0], [0, 0, 1], [0, 0, 0]])

    def test_homomorphism(self):
        pm = standard_monomials("P2Antican")
        rng = random.Random(2)
        for _ in range(5):
            A = Matrix(QQ, [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
            B = Matrix(QQ, [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
            RA, RB = induced_rep(A, pm), induced_rep(B, pm)
            RC = induced_rep(A.commutator(B), pm)
            assert RA.commutator(RB) == RC
