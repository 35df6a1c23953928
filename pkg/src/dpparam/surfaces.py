"""The geometry pipeline: standard embeddings, variety Lie algebras, drivers.

A variety is a list of symmetric matrices (its quadric generators).  The
pipeline computes the Lie algebra g0 of the embedded variety, classifies the
surface by the structure of g0, identifies g0 with the model algebra of the
matching standard embedding, lifts the identification to the natural modules
via highest weight vectors, and verifies the resulting projective map by
exact substitution into the generators.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd

from .fields import QQ, NumberField, UniPoly, cyclic_generator, nf_create
from .linalg import Matrix, Subspace, SymQuadric, kernel, minimal_polynomial, solve
from .polys import (
    MultiPoly,
    PolyMap,
    matrix_times_map,
    matrix_to_quadric,
    quadric_to_matrix,
    substitute,
)
from .lie import (
    CartanData,
    ChevalleySL2,
    LieAlgebra,
    NoConic,
    ShapeMismatch,
    SL2_STD_H,
    SL2_STD_X,
    SL2_STD_Y,
    decompose_semisimple,
    centroid,
    module_isomorphism,
    nilradical_scoped,
    levi_subalgebra,
    solvable_radical,
    split_sl2,
    sl3_standard_basis,
)
from .csa import trivialize_lie, DEFAULT_HEIGHT_CAP, DEFAULT_SEARCH_BUDGET


KINDS = ("Conic", "SegreQuadric", "P1xP1Antican", "BlowupP2", "P2Antican")


class QuadricVariety:
    """Projective variety in P^n cut out by quadrics (symmetric matrices)."""

    def __init__(self, n, gens, field=QQ):
        self.n = n
        self.field = field
        self.gens = list(gens)
        assert self.gens, "no generators"
        for q in self.gens:
            assert q.A.nrows == n + 1, "generator size mismatch"
            assert not q.A.is_zero(), "zero generator"
        flat = [q.A.flatten() for q in self.gens]
        assert Subspace(field, (n + 1) ** 2, flat).dim == len(self.gens), (
            "generators are linearly dependent"
        )

    def polynomials(self):
        return [matrix_to_quadric(q) for q in self.gens]

    def span_matrix_rows(self):
        """Generators as vectors of upper-triangle coordinates."""
        n1 = self.n + 1
        rows = []
        for q in self.gens:
            rows.append([q.A[i, j] for i in range(n1) for j in range(i, n1)])
        return rows

    def __repr__(self):
        return f"QuadricVariety(P^{self.n}, {len(self.gens)} gens)"


class Parametrization:
    """matrix (n+1 rows) composed with a monomial map, verified elsewhere."""

    def __init__(self, field, matrix: Matrix, monomials: PolyMap):
        self.field = field
        self.matrix = matrix
        self.monomials = monomials
        self.composed = matrix_times_map(matrix, monomials)

    def __repr__(self):
        return f"Parametrization({self.matrix.nrows} coords, deg {self.monomials.degree})"


class ParamResult:
    """status in {'parametrized', 'not_rational', 'unknown', 'unrecognized'}."""

    def __init__(self, status, parametrization=None, kind=None, detail="", g0=None):
        self.status = status
        self.parametrization = parametrization
        self.kind = kind
        self.detail = detail
        self.g0 = g0

    def __repr__(self):
        return f"ParamResult({self.status}, kind={self.kind})"


# ---------------------------------------------------------------------------
# standard surfaces


def _mono(nvars, exps):
    return MultiPoly(QQ, nvars, {tuple(exps): 1})


def _monomial_map(nvars, exp_list):
    return PolyMap([_mono(nvars, e) for e in exp_list])


def standard_monomials(kind) -> PolyMap:
    if kind == "Conic":
        return _monomial_map(2, [(2, 0), (1, 1), (0, 2)])
    if kind == "SegreQuadric":
        # (s0 t0, s0 t1, s1 t0, s1 t1) in parameters (s0, s1, t0, t1)
        return _monomial_map(4, [
            (1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)
        ])
    if kind == "P1xP1Antican":
        out = []
        for i in range(3):          # s0^(2-i) s1^i
            for j in range(3):      # t0^(2-j) t1^j
                out.append((2 - i, i, 2 - j, j))
        return _monomial_map(4, out)
    if kind == "BlowupP2":
        return _monomial_map(3, [
            (2, 1, 0), (2, 0, 1),
            (1, 2, 0), (1, 1, 1), (1, 0, 2),
            (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3),
        ])
    if kind == "P2Antican":
        return _monomial_map(3, [
            (3, 0, 0), (0, 3, 0), (0, 0, 3),
            (2, 1, 0), (0, 2, 1), (1, 0, 2),
            (1, 2, 0), (0, 1, 2), (2, 0, 1),
            (1, 1, 1),
        ])
    raise ValueError(f"unknown kind {kind!r}")


class StandardSurface:
    def __init__(self, kind, variety: QuadricVariety, param: PolyMap):
        self.kind = kind
        self.variety = variety
        self.param = param


def standard_surface(kind) -> StandardSurface:
    """Standard embedding with its quadric generators (kernel computation)."""
    pm = standard_monomials(kind)
    n1 = len(pm.components)
    # products phi_i phi_j expanded in parameter monomials
    prods = {}
    cols = []
    for i in range(n1):
        for j in range(i, n1):
            cols.append((i, j, pm[i] * pm[j]))
    monos = sorted({e for (_, _, p) in cols for e in p.terms})
    rows = []
    for e in monos:
        rows.append([p.terms.get(e, Fraction(0)) for (_, _, p) in cols])
    ker = kernel(Matrix(QQ, rows))
    gens = []
    for vec in ker.basis_vectors():
        A = [[Fraction(0)] * n1 for _ in range(n1)]
        for (i, j, _), c in zip(cols, vec):
            if i == j:
                A[i][i] = c
            else:
                A[i][j] = A[i][j] + c / 2
                A[j][i] = A[j][i] + c / 2
        gens.append(SymQuadric(Matrix(QQ, [_int_scale_row(r) for r in _int_scale(A)])))
    V = QuadricVariety(n1 - 1, gens)
    for f in V.polynomials():
        assert substitute(f, pm).is_zero(), "standard parametrization fails its ideal"
    return StandardSurface(kind, V, pm)


def _int_scale(A):
    flat = [x for row in A for x in row]
    den = 1
    for x in flat:
        den = den * (x.denominator // gcd(den, x.denominator))
    ints = [x * den for x in flat]
    g = 0
    for v in ints:
        g = gcd(g, int(abs(v)))
    g = max(g, 1)
    lead = next((v for v in ints if v != 0), 1)
    sgn = -1 if lead < 0 else 1
    n = len(A)
    return [[Fraction(sgn) * ints[i * n + j] / g for j in range(n)] for i in range(n)]


def _int_scale_row(row):
    return list(row)


EXPECTED_GEN_COUNT = {
    "Conic": 1,
    "SegreQuadric": 1,
    "P1xP1Antican": 20,
    "BlowupP2": 20,
    "P2Antican": 27,
}


# ---------------------------------------------------------------------------
# induced representations of parameter transformations


def induced_rep(a: Matrix, pm: PolyMap, field=None) -> Matrix:
    """Derivation action of a parameter-space matrix on the monomial embedding.

    Row m expands the derivative of the m-th component along the vector field
    of a; the result must stay in the span of the components (true for the
    stabilizer algebras used here).
    """
    f = field or a.field
    k = pm.source_vars
    comp_index = {next(iter(c.terms)): i for i, c in enumerate(pm.components)}
    rows = []
    for comp in pm.components:
        (exps, coef) = next(iter(comp.terms.items()))
        assert coef == 1
        out = {}
        for i in range(k):
            if exps[i] == 0:
                continue
            for j in range(k):
                if a[i, j] == f.zero:
                    continue
                e = list(exps)
                e[i] -= 1
                e[j] += 1
                e = tuple(e)
                assert e in comp_index, "derivation leaves the monomial span"
                out[comp_index[e]] = out.get(comp_index[e], f.zero) + a[i, j] * exps[i]
        rows.append([out.get(t, f.zero) for t in range(len(pm.components))])
    return Matrix(f, rows)


def _gl_basis_mats(field, pairs, size):
    out = []
    for (i, j) in pairs:
        m = [[field.zero] * size for _ in range(size)]
        m[i][j] = field.one
        out.append(Matrix(field, m))
    return out


def _blockdiag(A, B, field):
    n = A.nrows + B.nrows
    rows = [[field.zero] * n for _ in range(n)]
    for i in range(A.nrows):
        for j in range(A.nrows):
            rows[i][j] = A[i, j]
    for i in range(B.nrows):
        for j in range(B.nrows):
            rows[A.nrows + i][A.nrows + j] = B[i, j]
    return Matrix(field, rows)


def _sl2_mats(field):
    e = Matrix(field, [[0, 1], [0, 0]])
    f_ = Matrix(field, [[0, 0], [1, 0]])
    h = Matrix(field, [[1, 0], [0, -1]])
    return e, f_, h


# ---------------------------------------------------------------------------
# the Lie algebra of a quadric variety


def lie_algebra_of_variety(V: QuadricVariety):
    """(g, g0): solutions of x^t A_i + A_i x in span{A_j}, and its traceless part.

    The membership conditions are reduced against an integer echelon basis of
    span{A_i} with cross-multiplication (row scalings do not change the
    kernel), keeping the hot loop in plain integer arithmetic.
    """
    f = V.field
    n1 = V.n + 1
    sym_idx = [(i, j) for i in range(n1) for j in range(i, n1)]
    pos = {ij: t for t, ij in enumerate(sym_idx)}
    # integer generator matrices (scaling each generator is harmless)
    int_gens = []
    for q in V.gens:
        flat = _int_scale(q.A.rows)
        int_gens.append([[int(x) for x in row] for row in flat])
    from .linalg import _rref_rows, _row_to_int

    span_rows = [
        [Fraction(G[i][j]) for (i, j) in sym_idx] for G in int_gens
    ]
    red, pivots = _rref_rows(f, span_rows)
    assert len(pivots) == len(V.gens)
    red_int = [_row_to_int([Fraction(x) for x in row]) for row in red]
    leads = [row[pc] for row, pc in zip(red_int, pivots)]

    total_scale = 1
    for lead in leads:
        total_scale *= lead

    def reduce_sym_int(v):
        applied = 1
        for prow, pc, lead in zip(red_int, pivots, leads):
            t = v[pc]
            if t:
                v = [x * lead - t * y for x, y in zip(v, prow)]
                applied *= lead
        # bring every column to the same overall scaling (total_scale)
        fix = total_scale // applied
        if fix != 1:
            v = [x * fix for x in v]
        return v

    from math import gcd

    eq_rows = []
    for G in int_gens:
        # columns indexed by entries (p, q) of x, rows by symmetric coords
        cols = []
        for p in range(n1):
            for qq in range(n1):
                col = [0] * len(sym_idx)
                # S = E_pq^T A + A E_pq: S_ij = [i==q] A[p][j] + A[i][p] [j==q]
                for (i, j) in sym_idx:
                    val = 0
                    if i == qq:
                        val += G[p][j]
                    if j == qq:
                        val += G[i][p]
                    if val:
                        col[pos[(i, j)]] = val
                cols.append(reduce_sym_int(col))
        for t in range(len(sym_idx)):
            if t in pivots:
                continue
            row = [cols[u][t] for u in range(n1 * n1)]
            g0_ = 0
            for x in row:
                g0_ = gcd(g0_, x)
            if g0_:
                eq_rows.append([x // g0_ for x in row])
    ker = kernel(Matrix(f, eq_rows)) if eq_rows else None
    assert ker is not None and ker.dim >= 1
    mats = [
        Matrix(f, [vec[i * n1 : (i + 1) * n1] for i in range(n1)])
        for vec in ker.basis_vectors()
    ]
    g = LieAlgebra(f, mats, check_jacobi=False)
    # traceless part
    tr_row = [[m.trace() for m in mats]]
    tr_ker = kernel(Matrix(f, tr_row))
    g0_mats = []
    for combo in tr_ker.basis_vectors():
        m = Matrix.zero(f, n1, n1)
        for c, base in zip(combo, mats):
            if c != f.zero:
                m = m + base.scale(c)
        g0_mats.append(m)
    g0 = LieAlgebra(f, g0_mats, check_jacobi=False)
    return g, g0


# ---------------------------------------------------------------------------
# verification and example generation


def verify_parametrization(V: QuadricVariety, P: Parametrization) -> bool:
    """Every generator vanishes identically under P and P.matrix has full row rank."""
    if P.matrix.rank() != P.matrix.nrows:
        return False
    for fpoly in V.polynomials():
        if not substitute(fpoly, P.composed).is_zero():
            return False
    return True


def generate_example(kind, bound, seed):
    """(transformed variety, secret point-transformation matrix)."""
    assert bound >= 1
    std = standard_surface(kind)
    rng = random.Random(seed)
    n1 = std.variety.n + 1
    while True:
        S = Matrix(QQ, [[rng.randint(-bound, bound) for _ in range(n1)] for _ in range(n1)])
        if S.det() != 0:
            break
    T = S.inverse()
    gens = []
    for q in std.variety.gens:
        A = T.transpose() * q.A * T
        gens.append(SymQuadric(Matrix(QQ, _int_scale(A.rows))))
    return QuadricVariety(std.variety.n, gens), S


# ---------------------------------------------------------------------------
# classification


def auto_classify(V: QuadricVariety, g0: LieAlgebra | None = None):
    """Surface kind from the Lie algebra signature; 'Unrecognized' otherwise."""
    if g0 is None:
        g0 = lie_algebra_of_variety(V)[1]
    n = V.n
    d = g0.dim
    if n == 2 and d == 3 and len(V.gens) == 1:
        return "Conic"
    if n == 3 and d == 6 and len(V.gens) == 1:
        rad = solvable_radical(g0)
        if rad.dim == 0:
            return "SegreQuadric"
        return "Unrecognized"
    if n == 8 and d == 6:
        rad = solvable_radical(g0)
        if rad.dim == 3:
            return "BlowupP2"
        if rad.dim == 0:
            return "P1xP1Antican"
        return "Unrecognized"
    if n == 9 and d == 8:
        if solvable_radical(g0).dim == 0 and len(decompose_semisimple(g0)) == 1:
            return "P2Antican"
        return "Unrecognized"
    return "Unrecognized"


# ---------------------------------------------------------------------------
# driver helpers


def _sl2_std_algebra():
    return LieAlgebra(QQ, [Matrix(QQ, SL2_STD_X), Matrix(QQ, SL2_STD_Y), Matrix(QQ, SL2_STD_H)])


def _cartan_sl2_std(std_alg):
    # basis order (x0, y0, h0): Cartan = span{h0}, roots +-2
    return CartanData(std_alg, [[0, 0, 1]], [
        ((Fraction(2),), Subspace(QQ, 3, [[1, 0, 0]])),
        ((Fraction(-2),), Subspace(QQ, 3, [[0, 1, 0]])),
    ])


def _phi_from_images(images):
    """Linear map on coordinates sending basis k to images[k]."""

    def phi(vec):
        out = None
        for c, img in zip(vec, images):
            term = [c * x for x in img]
            out = term if out is None else [a + b for a, b in zip(out, term)]
        return out

    return phi


def parametrize_conic(V: QuadricVariety, g0=None) -> ParamResult:
    assert V.n == 2 and len(V.gens) == 1
    assert V.gens[0].A.rank() == 3, "degenerate conic"
    if g0 is None:
        g0 = lie_algebra_of_variety(V)[1]
    if g0.dim != 3:
        return ParamResult("unrecognized", detail=f"g0 has dimension {g0.dim}")
    chev = split_sl2(g0)
    if chev is None:
        return ParamResult("not_rational", kind="Conic",
                           detail="conic of the Lie algebra has no rational point", g0=g0)
    std_alg = _sl2_std_algebra()
    cartanA = _cartan_sl2_std(std_alg)
    phi = _phi_from_images([chev.x, chev.y, chev.h])
    N = module_isomorphism(std_alg, g0, phi, cartanA)
    if N is None:
        return ParamResult("unrecognized", kind="Conic", detail="module weight mismatch", g0=g0)
    P = Parametrization(QQ, _clear_matrix(N), standard_monomials("Conic"))
    assert verify_parametrization(V, P), "conic parametrization failed verification"
    return ParamResult("parametrized", P, kind="Conic", g0=g0)


def _clear_matrix(N: Matrix) -> Matrix:
    """Scale a rational matrix to coprime integers (projective normalization)."""
    flat = N.flatten()
    den = 1
    for x in flat:
        den = den * (x.denominator // gcd(den, x.denominator))
    ints = [int(x * den) for x in flat]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    g = max(g, 1)
    n = N.nrows
    return Matrix(N.field, [[Fraction(ints[i * N.ncols + j], g) for j in range(N.ncols)] for i in range(n)])


def _product_std_generators(kind, field=QQ):
    """Standard sl2+sl2 generators acting on the product embedding."""
    pm = standard_monomials(kind)
    e, f_, h = _sl2_mats(field)
    z2 = Matrix.zero(field, 2, 2)
    mats = [
        _blockdiag(e, z2, field), _blockdiag(f_, z2, field), _blockdiag(h, z2, field),
        _blockdiag(z2, e, field), _blockdiag(z2, f_, field), _blockdiag(z2, h, field),
    ]
    return [induced_rep(m, pm, field) for m in mats], pm


def _product_std_cartan(std_alg):
    f = std_alg.field
    two = f.coerce(2)
    zero = f.zero
    return CartanData(std_alg, [[0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1]], [
        ((two, zero), Subspace(f, 6, [[1, 0, 0, 0, 0, 0]])),
        ((-two, zero), Subspace(f, 6, [[0, 1, 0, 0, 0, 0]])),
        ((zero, two), Subspace(f, 6, [[0, 0, 0, 1, 0, 0]])),
        ((zero, -two), Subspace(f, 6, [[0, 0, 0, 0, 1, 0]])),
    ])


def parametrize_dp8_product(V: QuadricVariety, g0=None, kind=None) -> ParamResult:
    if g0 is None:
        g0 = lie_algebra_of_variety(V)[1]
    kind = kind or ("SegreQuadric" if V.n == 3 else "P1xP1Antican")
    ideals = decompose_semisimple(g0)
    if len(ideals) != 2:
        return ParamResult("unrecognized", kind=kind, detail="expected two simple ideals", g0=g0)
    chevs = []
    for gi in ideals:
        c = split_sl2(gi)
        if c is None:
            return ParamResult("not_rational", kind=kind, g0=g0,
                               detail="a P^1 factor has no rational point (Legendre)")
        chevs.append(c)
    # express the triples in g0 coordinates
    images = []
    for gi, c in zip(ideals, chevs):
        for vec in (c.x, c.y, c.h):
            m = gi.element(vec)
            coords = g0.coords_of(m)
            assert coords is not None
            images.append(coords)
    std_mats, pm = _product_std_generators(kind)
    std_alg = LieAlgebra(QQ, std_mats)
    cartanA = _product_std_cartan(std_alg)
    phi = _phi_from_images(images)
    N = module_isomorphism(std_alg, g0, phi, cartanA)
    if N is None:
        return ParamResult("unrecognized", kind=kind, detail="module weight mismatch", g0=g0)
    P = Parametrization(QQ, _clear_matrix(N), pm)
    assert verify_parametrization(V, P), "product parametrization failed verification"
    return ParamResult("parametrized", P, kind=kind, g0=g0)


def _blowup_std_data():
    pm = standard_monomials("BlowupP2")

    def m3(rows):
        return Matrix(QQ, rows)

    E = m3([[2, 0, 0], [0, -1, 0], [0, 0, -1]])
    E12 = m3([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    X = m3([[0, 0, 0], [0, 0, 1], [0, 0, 0]])   # e23
    Y = m3([[0, 0, 0], [0, 0, 0], [0, 1, 0]])   # e32
    H = m3([[0, 0, 0], [0, 1, 0], [0, 0, -1]])  # e22 - e33
    return pm, induced_rep(X, pm), induced_rep(Y, pm), induced_rep(H, pm), induced_rep(E12, pm)


def _eigvec(M: Matrix, lam):
    f = M.field
    n = M.nrows
    shifted = Matrix(f, [
        [M[i, j] - (lam if i == j else f.zero) for j in range(n)] for i in range(n)
    ])
    ker = kernel(shifted)
    return ker


def _blowup_module_chains(x: Matrix, y: Matrix, h: Matrix, e12: Matrix):
    """Chain vectors of W4, W3, W2 plus the E12 chaining scalars."""
    f = x.field
    k4 = _eigvec(h, f.coerce(3))
    assert k4.dim == 1, f"weight-3 space has dim {k4.dim}"
    v4 = k4.basis_vectors()[0]
    k3 = _eigvec(h, f.coerce(2))
    assert k3.dim == 1
    v3 = k3.basis_vectors()[0]
    k1 = _eigvec(h, f.coerce(1))
    assert k1.dim == 2
    # W2 highest weight: weight-1 vectors killed by x
    rows = []
    B = k1.basis_vectors()
    imgs = [x.apply(v) for v in B]
    eq = [[imgs[c][coord] for c in range(len(B))] for coord in range(len(imgs[0]))]
    kk = kernel(Matrix(f, eq))
    assert kk.dim == 1, "W2 highest weight vector not unique"
    t = kk.basis_vectors()[0]
    v2 = [f.zero] * len(B[0])
    for c, bv in zip(t, B):
        v2 = [a + c * b for a, b in zip(v2, bv)]
    chains = []
    for v, size in ((v4, 4), (v3, 3), (v2, 2)):
        cur = v
        chain = [cur]
        for _ in range(size - 1):
            cur = y.apply(cur)
            chain.append(cur)
        chains.append(chain)
    # E12 scalars: e12 v4 = k43 v3, e12 v3 = k32 v2
    def scalar_of(img, ref):
        idx = next(i for i, c in enumerate(ref) if c != f.zero)
        lam = img[idx] / ref[idx]
        assert img == [lam * c for c in ref], "E12 image is not proportional"
        return lam

    k43 = scalar_of(e12.apply(v4), v3)
    k32 = scalar_of(e12.apply(v3), v2)
    assert k43 != f.zero and k32 != f.zero
    return chains, k43, k32


def parametrize_dp8_blowup(V: QuadricVariety, g0=None) -> ParamResult:
    if g0 is None:
        g0 = lie_algebra_of_variety(V)[1]
    try:
        lev = levi_subalgebra(g0)
        N_rad = nilradical_scoped(g0)
    except ShapeMismatch as e:
        return ParamResult("unrecognized", kind="BlowupP2", detail=str(e), g0=g0)
    chev = split_sl2(lev)
    if chev is None:
        return ParamResult("not_rational", kind="BlowupP2", g0=g0,
                           detail="Levi conic has no rational point (Legendre)")
    xm, ym, hm = chev.matrices()
    # E12: eigenvector of ad h on the nilradical with eigenvalue -1
    h_coords = g0.coords_of(hm)
    adh = g0.ad(h_coords)
    nb = N_rad.basis_vectors()
    cols = []
    for v in nb:
        img = adh.apply(v)
        coords = N_rad.coordinates(img)
        assert coords is not None
        cols.append(coords)
    M2 = Matrix.from_cols(QQ, cols)
    kneg = _eigvec(M2, Fraction(-1))
    assert kneg.dim == 1, "eigenvalue -1 space in the nilradical not 1-dim"
    combo = kneg.basis_vectors()[0]
    e12_coords = [Fraction(0)] * g0.dim
    for c, v in zip(combo, nb):
        e12_coords = [a + c * b for a, b in zip(e12_coords, v)]
    e12m = g0.element(e12_coords)
    pm, X0, Y0, H0, E120 = _blowup_std_data()
    chains0, k43_0, k32_0 = _blowup_module_chains(X0, Y0, H0, E120)
    chains1, k43_1, k32_1 = _blowup_module_chains(xm, ym, hm, e12m)
    t4 = Fraction(1)
    t3 = t4 * k43_1 / k43_0
    t2 = t3 * k32_1 / k32_0
    cols_std = [v for chain in chains0 for v in chain]
    cols_v = []
    for t, chain in zip((t4, t3, t2), chains1):
        for v in chain:
            cols_v.append([t * c for c in v])
    U0 = Matrix.from_cols(QQ, cols_std)
    U1 = Matrix.from_cols(QQ, cols_v)
    N = U1 * U0.inverse()
    P = Parametrization(QQ, _clear_matrix(N), pm)
    assert verify_parametrization(V, P), "blowup parametrization failed verification"
    return ParamResult("parametrized", P, kind="BlowupP2", g0=g0)


def _dp9_std_data(field=QQ):
    pm = standard_monomials("P2Antican")
    std = sl3_standard_basis(field)
    labels = ["x_a", "x_b", "x_ab", "y_a", "y_b", "y_ab", "h_a", "h_b"]
    mats = [induced_rep(std[l], pm, field) for l in labels]
    return pm, labels, mats


_SL3_ROOTS = {
    "x_a": (2, -1), "x_b": (-1, 2), "x_ab": (1, 1),
    "y_a": (-2, 1), "y_b": (1, -2), "y_ab": (-1, -1),
}


def _dp9_std_cartan(std_alg, labels):
    f = std_alg.field
    idx = {l: i for i, l in enumerate(labels)}
    def unit(i):
        v = [0] * 8
        v[i] = 1
        return v

    roots = []
    for l, (r1, r2) in _SL3_ROOTS.items():
        roots.append(((f.coerce(r1), f.coerce(r2)), Subspace(f, 8, [unit(idx[l])])))
    return CartanData(std_alg, [unit(idx["h_a"]), unit(idx["h_b"])], roots)


_TAU_MAP = {
    # x -> -x^T on the standard Chevalley basis
    "x_a": ("y_a", -1), "x_b": ("y_b", -1), "x_ab": ("y_ab", -1),
    "y_a": ("x_a", -1), "y_b": ("x_b", -1), "y_ab": ("x_ab", -1),
    "h_a": ("h_a", -1), "h_b": ("h_b", -1),
}


def parametrize_dp9(V: QuadricVariety, g0=None,
                    height_cap=DEFAULT_HEIGHT_CAP,
                    budget=DEFAULT_SEARCH_BUDGET) -> ParamResult:
    if g0 is None:
        g0 = lie_algebra_of_variety(V)[1]
    triv = trivialize_lie(g0, 3, height_cap, budget)
    if triv.verdict != "split":
        status = "unknown" if triv.verdict == "unknown" else "not_rational"
        return ParamResult(status, kind="P2Antican", detail=triv.detail, g0=g0)
    pm, labels, mats = _dp9_std_data()
    std_alg = LieAlgebra(QQ, mats, check_jacobi=False)
    cartanA = _dp9_std_cartan(std_alg, labels)
    images1 = [triv.images[l] for l in labels]
    N = module_isomorphism(std_alg, g0, _phi_from_images(images1), cartanA)
    if N is None:
        images2 = []
        for l in labels:
            tgt, sgn = _TAU_MAP[l]
            images2.append([sgn * c for c in triv.images[tgt]])
        N = module_isomorphism(std_alg, g0, _phi_from_images(images2), cartanA)
    assert N is not None, "neither orientation matches the module weights"
    P = Parametrization(QQ, _clear_matrix(N), pm)
    assert verify_parametrization(V, P), "DP9 parametrization failed verification"
    return ParamResult("parametrized", P, kind="P2Antican", g0=g0)


# ---------------------------------------------------------------------------
# proper twists


def _conjugate_matrix(M: Matrix, sigma):
    return Matrix(M.field, [[sigma(x) for x in row] for row in M.rows])


def _rationalize_point(vec, Kp, sigma):
    """Galois-stabilize a projective K'-point: multiply by sigma of a coord."""
    j0 = next((i for i, x in enumerate(vec) if not x.is_zero()), None)
    if j0 is None:
        return None
    scaled = [x * sigma(vec[j0]) for x in vec]
    out = []
    for x in scaled:
        if any(c != 0 for c in x.coords[1:]):
            return None
        out.append(x.coords[0])
    if all(c == 0 for c in out):
        return None
    return _primitive_ints(out)


def _primitive_ints(vec):
    den = 1
    fr = [Fraction(x) for x in vec]
    for x in fr:
        den = den * (x.denominator // gcd(den, x.denominator))
    ints = [int(x * den) for x in fr]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return [v // max(g, 1) for v in ints]


def parametrize_dp8_twist(V: QuadricVariety, g0=None, kind=None,
                          height_cap=DEFAULT_HEIGHT_CAP,
                          budget=DEFAULT_SEARCH_BUDGET) -> ParamResult:
    """Simple g0: pass to the quadratic centroid field, split there, descend.

    The composed parametrization P^2 -> X is recovered from exact sample
    intersections of conjugate ruling lines, interpolated at the smallest
    degree that verifies identically.
    """
    if g0 is None:
        g0 = lie_algebra_of_variety(V)[1]
    kind = kind or ("SegreQuadric" if V.n == 3 else "P1xP1Antican")
    basis, _ = centroid(g0)
    assert len(basis) == 2, f"centroid dimension {len(basis)} != 2"
    ident = Matrix.identity(QQ, g0.dim)
    T = next(b for b in basis if not _is_scalar_matrix(b))
    mpT = minimal_polynomial(T)
    assert mpT.degree == 2, "centroid generator is not quadratic"
    Kp = nf_create(mpT)
    sigma = cyclic_generator(Kp)
    lam1 = Kp.gen
    lam2 = sigma(Kp.gen)
    g0K = g0.change_field(Kp)
    TK = Matrix(Kp, [[Kp.coerce(x) for x in row] for row in T.rows])
    idK = Matrix.identity(Kp, g0.dim)
    ideals = []
    for lam, other in ((lam1, lam2), (lam2, lam1)):
        proj = (TK - idK.scale(other)).scale(Kp.one / (lam - other))
        vecs = [proj.apply(v) for v in idK.rows]
        S = Subspace(Kp, g0.dim, vecs)
        assert S.dim == 3
        ideals.append(g0K.subalgebra(S.basis_vectors()))
    images = []
    for gi in ideals:
        triv = trivialize_lie(gi, 2, height_cap, budget)
        if triv.verdict != "split":
            return ParamResult("unknown", kind=kind, g0=g0,
                               detail=f"sl2 summand over the centroid field: {triv.detail or triv.verdict}")
        for l in ("x", "y", "h"):
            m = gi.element(triv.images[l])
            coords = g0K.coords_of(m)
            assert coords is not None
            images.append(coords)
    std_mats, pm = _product_std_generators(kind, Kp)
    std_alg = LieAlgebra(Kp, std_mats, check_jacobi=False)
    cartanA = _product_std_cartan(std_alg)
    NK = module_isomorphism(std_alg, g0K, _phi_from_images(images), cartanA)
    if NK is None:
        return ParamResult("unrecognized", kind=kind, detail="module weight mismatch over k'", g0=g0)
    # sample exact intersection points of conjugate ruling lines
    n1 = V.n + 1
    samples = []
    polys = V.polynomials()
    for (a0, b0, c0) in _twist_sample_points():
        alpha = Kp.element([a0, b0])
        beta = Kp.element([c0])
        u1 = _line_vector(NK, pm, alpha, beta, 0, Kp)
        v1 = _line_vector(NK, pm, alpha, beta, 1, Kp)
        u2 = [sigma(x) for x in u1]
        v2 = [sigma(x) for x in v1]
        Mline = Matrix.from_cols(Kp, [u1, v1, [-x for x in u2], [-x for x in v2]])
        kerM = kernel(Mline)
        if kerM.dim != 1:
            continue
        lam, mu = kerM.basis_vectors()[0][:2]
        q = [u * lam + v * mu for u, v in zip(u1, v1)]
        pt = _rationalize_point(q, Kp, sigma)
        if pt is None:
            continue
        if any(fp.evaluate(pt) != 0 for fp in polys):
            continue
        samples.append(((a0, b0, c0), pt))
        if len(samples) >= 60:
            break
    if len(samples) < 20:
        return ParamResult("unknown", kind=kind, g0=g0,
                           detail="too few usable line intersections")
    for deg in range(2, 9):
        P = _interpolate_map(samples, n1, deg)
        if P is not None and verify_parametrization(V, P):
            return ParamResult("parametrized", P, kind=kind, g0=g0)
    return ParamResult("unknown", kind=kind, g0=g0,
                       detail="no low-degree interpolation verified")


def _is_scalar_matrix(M: Matrix):
    f = M.field
    d = M[0, 0]
    return all(
        M[i, j] == (d if i == j else f.zero)
        for i in range(M.nrows)
        for j in range(M.ncols)
    )


def _line_vector(NK: Matrix, pm: PolyMap, alpha, beta, t_index, Kp):
    """Column of the ruling line: N * monomials with (s0,s1)=(alpha,beta), t = e_i."""
    t0 = Kp.one if t_index == 0 else Kp.zero
    t1 = Kp.one if t_index == 1 else Kp.zero
    vals = [c.evaluate([alpha, beta, t0, t1]) for c in pm.components]
    return NK.apply(vals)


def _twist_sample_points():
    for bound in range(1, 6):
        for a0 in range(-bound, bound + 1):
            for b0 in range(-bound, bound + 1):
                for c0 in range(0, bound + 1):
                    if max(abs(a0), abs(b0), c0) != bound:
                        continue
                    if a0 == 0 and b0 == 0 and c0 == 0:
                        continue
                    yield (a0, b0, c0)


def _degree_monomials(deg):
    out = []
    for i in range(deg + 1):
        for j in range(deg + 1 - i):
            out.append((i, j, deg - i - j))
    return out


def _interpolate_map(samples, n1, deg):
    """Least-degree polynomial map through the sampled projective points."""
    monos = _degree_monomials(deg)
    nm = len(monos)
    nunk = n1 * nm
    rows = []
    for (abc, pt) in samples:
        mvals = [
            Fraction(abc[0]) ** e[0] * Fraction(abc[1]) ** e[1] * Fraction(abc[2]) ** e[2]
            for e in monos
        ]
        for i in range(n1):
            for j in range(i + 1, n1):
                row = [Fraction(0)] * nunk
                for t in range(nm):
                    row[i * nm + t] += mvals[t] * pt[j]
                    row[j * nm + t] -= mvals[t] * pt[i]
                rows.append(row)
    ker = kernel(Matrix(QQ, rows))
    if ker.dim != 1:
        return None
    vec = ker.basis_vectors()[0]
    comps = []
    for i in range(n1):
        terms = {}
        for t, e in enumerate(monos):
            c = vec[i * nm + t]
            if c != 0:
                terms[e] = c
        comps.append(MultiPoly(QQ, 3, terms))
    if all(c.is_zero() for c in comps):
        return None
    try:
        pm = PolyMap(comps)
    except (ValueError, AssertionError):
        return None
    coeff_matrix = Matrix(QQ, [
        [comps[i].terms.get(e, Fraction(0)) for e in monos] for i in range(n1)
    ])
    P = Parametrization(QQ, _clear_matrix(coeff_matrix), _monomial_map(3, monos))
    return P


# ---------------------------------------------------------------------------
# dispatcher


def parametrize_variety(V: QuadricVariety, kind=None,
                        height_cap=DEFAULT_HEIGHT_CAP,
                        budget=DEFAULT_SEARCH_BUDGET) -> ParamResult:
    """Classify by the Lie algebra signature and run the matching driver."""
    g, g0 = lie_algebra_of_variety(V)
    if kind is None:
        kind = auto_classify(V, g0)
    if kind == "Unrecognized":
        return ParamResult("unrecognized", g0=g0, detail="no Lie algebra signature matched")
    if kind == "Conic":
        return parametrize_conic(V, g0)
    if kind in ("SegreQuadric", "P1xP1Antican"):
        rad = solvable_radical(g0)
        if rad.dim != 0:
            return ParamResult("unrecognized", kind=kind, g0=g0, detail="g0 not semisimple")
        ideals = decompose_semisimple(g0)
        if len(ideals) == 2:
            return parametrize_dp8_product(V, g0, kind)
        return parametrize_dp8_twist(V, g0, kind, height_cap, budget)
    if kind == "BlowupP2":
        return parametrize_dp8_blowup(V, g0)
    if kind == "P2Antican":
        return parametrize_dp9(V, g0, height_cap, budget)
    return ParamResult("unrecognized", g0=g0)
