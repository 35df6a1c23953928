"""Shared fixture builders for the test suite."""

from fractions import Fraction

from dpparam.fields import QQ
from dpparam.assoc import AssocAlgebra
from dpparam.linalg import Matrix
from dpparam.assoc import algebra_from_matrix_span


def quaternion_algebra(a, b) -> AssocAlgebra:
    """The quaternion algebra (a, b) over Q on the basis 1, i, j, k."""
    a, b = Fraction(a), Fraction(b)

    def mulvec(x, y):
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return [
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ]

    E = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    sc = [[mulvec(E[i], E[j]) for j in range(4)] for i in range(4)]
    return AssocAlgebra(QQ, sc, [1, 0, 0, 0])


def quaternion_sc_text(a, b) -> str:
    A = quaternion_algebra(a, b)
    toks = []
    for i in range(A.dim):
        for j in range(A.dim):
            for k in range(A.dim):
                toks.append(str(A.sc[i][j][k]))
    return f"{A.dim}\n" + " ".join(toks) + "\n"


def scramble_matrix_algebra(n, rng) -> AssocAlgebra:
    """Random basis change of M_n(Q) (a planted split fixture)."""
    dim = n * n
    while True:
        T = Matrix(QQ, [[rng.randint(-4, 4) for _ in range(dim)] for _ in range(dim)])
        if T.det() != 0:
            break

    def unflat(v):
        return Matrix(QQ, [v[i * n:(i + 1) * n] for i in range(n)])

    mats = [unflat([T[j, i] for j in range(dim)]) for i in range(dim)]
    return algebra_from_matrix_span(QQ, mats)[0]
