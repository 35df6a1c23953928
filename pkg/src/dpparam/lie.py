"""Lie algebras as matrix subalgebras of gl_m with cached structure constants.

Elements are coordinate vectors relative to the basis the algebra was built
with (the basis order is preserved, not canonicalized).  Provides radicals,
Levi complements, Cartan subalgebras, root/weight decompositions, the
conic attached to a 3-dimensional twist of sl2, Chevalley bases for types
A1 and A2, and highest-weight module isomorphisms.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .fields import QQ, NFElement, QuadExtElement, UniPoly
from .linalg import (
    Matrix,
    NotDiagonalizable,
    Subspace,
    SymQuadric,
    full_space,
    kernel,
    minimal_polynomial,
    simultaneous_eigenspaces,
    solve,
    complement_basis,
)


class NotClosed(Exception):
    def __init__(self, i, j):
        self.witness = (i, j)
        super().__init__(f"bracket of basis elements {i},{j} leaves the span")


class NotSemisimple(Exception):
    pass


class NotSplit(Exception):
    pass


class NotFound(Exception):
    pass


class ShapeMismatch(Exception):
    pass


class LiftFailed(Exception):
    pass


class NotIrreducible(Exception):
    pass


class NoConic(Exception):
    pass


class UnsupportedType(Exception):
    pass


def _elt_key(x):
    """Canonical comparison key making any field element set totally ordered."""
    if isinstance(x, Fraction):
        return (x,)
    if isinstance(x, int):
        return (Fraction(x),)
    if isinstance(x, NFElement):
        return tuple(x.coords)
    if isinstance(x, QuadExtElement):
        return _elt_key(x.p) + _elt_key(x.q)
    raise TypeError(f"no key for {x!r}")


def weight_is_positive(w, zero):
    """First nonzero coordinate positive (lexicographic group order)."""
    zk = _elt_key(zero)
    for x in w:
        k = _elt_key(x)
        if k != zk:
            return k > zk
    return False


class _SpanSolver:
    """Express vectors in the span of a fixed (ordered) basis of row vectors."""

    def __init__(self, field, rows):
        self.field = field
        self.n = len(rows[0]) if rows else 0
        self.rref = []  # (pivot, reduced row, combo over original rows)
        for k, row in enumerate(rows):
            v = [field.coerce(x) for x in row]
            combo = [field.zero] * len(rows)
            combo[k] = field.one
            v, combo = self._reduce(v, combo)
            nz = next((i for i, x in enumerate(v) if x != field.zero), None)
            assert nz is not None, "basis rows are linearly dependent"
            inv = field.one / v[nz]
            self.rref.append((nz, [x * inv for x in v], [x * inv for x in combo]))
        self.rref.sort(key=lambda t: t[0])

    def _reduce(self, v, combo):
        f = self.field
        for (pc, rv, rc) in self.rref:
            t = v[pc]
            if t != f.zero:
                v = [a - t * b for a, b in zip(v, rv)]
                combo = [a - t * b for a, b in zip(combo, rc)]
        return v, combo

    def solve(self, vec):
        """Coordinates of vec over the original rows, or None if outside."""
        f = self.field
        v = [f.coerce(x) for x in vec]
        expr = [f.zero] * len(self.rref[0][2]) if self.rref else []
        for (pc, rv, rc) in self.rref:
            t = v[pc]
            if t != f.zero:
                v = [a - t * b for a, b in zip(v, rv)]
                expr = [a + t * b for a, b in zip(expr, rc)]
        if any(x != f.zero for x in v):
            return None
        return expr


class LieAlgebra:
    """Finite-dimensional Lie algebra spanned by matrices inside gl_m."""

    def __init__(self, field, basis_matrices, check_jacobi=True, sc=None):
        assert basis_matrices, "empty basis"
        self.field = field
        self.basis = list(basis_matrices)
        self.ambient = self.basis[0].nrows
        assert all(b.nrows == b.ncols == self.ambient for b in self.basis)
        self.dim = len(self.basis)
        self._solver_cache = None
        if sc is not None:
            # trusted structure constants (scalar extension of a verified algebra)
            self.sc = [[[field.coerce(c) for c in vec] for vec in row] for row in sc]
        else:
            solver = self._solver
            self.sc = []
            for i in range(self.dim):
                row = []
                for j in range(self.dim):
                    br = self.basis[i].commutator(self.basis[j])
                    coords = solver.solve(br.flatten())
                    if coords is None:
                        raise NotClosed(i, j)
                    row.append(coords)
                self.sc.append(row)
            if check_jacobi and self.dim <= 10:
                self._verify_jacobi()

    @property
    def _solver(self):
        if self._solver_cache is None:
            self._solver_cache = _SpanSolver(self.field, [b.flatten() for b in self.basis])
        return self._solver_cache

    def _verify_jacobi(self):
        f = self.field
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                # antisymmetry
                assert all(
                    self.sc[i][j][k] == -self.sc[j][i][k] for k in range(self.dim)
                ), "structure constants not antisymmetric"
                for k in range(j + 1, self.dim):
                    acc = [f.zero] * self.dim
                    for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                        inner = self.sc[b][c]
                        for t in range(self.dim):
                            if inner[t] != f.zero:
                                term = self.sc[a][t]
                                acc = [u + inner[t] * v for u, v in zip(acc, term)]
                    assert all(x == f.zero for x in acc), "Jacobi identity fails"

    # -- element handling ---------------------------------------------------

    def element(self, coords) -> Matrix:
        f = self.field
        m = Matrix.zero(f, self.ambient, self.ambient)
        for c, b in zip(coords, self.basis):
            c = f.coerce(c)
            if c != f.zero:
                m = m + b.scale(c)
        return m

    def coords_of(self, mat: Matrix):
        return self._solver.solve(mat.flatten())

    def bracket_coords(self, u, v):
        f = self.field
        out = [f.zero] * self.dim
        for i, a in enumerate(u):
            if a == f.zero:
                continue
            for j, b in enumerate(v):
                if b == f.zero:
                    continue
                ab = a * b
                row = self.sc[i][j]
                out = [x + ab * y for x, y in zip(out, row)]
        return out

    def ad(self, coords) -> Matrix:
        """Matrix of ad(x) on the coordinate space, columns = [x, e_j]."""
        f = self.field
        cols = []
        for j in range(self.dim):
            ej = [f.zero] * self.dim
            ej[j] = f.one
            cols.append(self.bracket_coords(coords, ej))
        return Matrix.from_cols(f, cols)

    def killing(self, u, v):
        return (self.ad(u) * self.ad(v)).trace()

    def derived_subspace(self) -> Subspace:
        vecs = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                vecs.append(self.sc[i][j])
        return Subspace(self.field, self.dim, vecs)

    def bracket_space(self, U: Subspace, V: Subspace) -> Subspace:
        vecs = []
        for u in U.basis_vectors():
            for v in V.basis_vectors():
                vecs.append(self.bracket_coords(u, v))
        return Subspace(self.field, self.dim, vecs)

    def subalgebra(self, coord_vectors, check_jacobi=False) -> "LieAlgebra":
        mats = [self.element(v) for v in coord_vectors]
        return LieAlgebra(self.field, mats, check_jacobi=check_jacobi)

    def change_field(self, newfield) -> "LieAlgebra":
        """Same basis matrices over an extension field (entries coerced).

        The structure constants are carried over directly: brackets are not
        affected by extending scalars.
        """
        mats = [
            Matrix(newfield, [[newfield.coerce(x) for x in row] for row in b.rows])
            for b in self.basis
        ]
        return LieAlgebra(newfield, mats, sc=self.sc)

    def __repr__(self):
        return f"LieAlgebra(dim {self.dim} in gl_{self.ambient} over {self.field})"


def lie_from_matrix_space(S: Subspace) -> LieAlgebra:
    """Lie algebra from a subspace of flattened m x m matrices."""
    import math

    m = math.isqrt(S.ambient_dim)
    assert m * m == S.ambient_dim
    mats = [
        Matrix(S.field, [row[i * m : (i + 1) * m] for i in range(m)])
        for row in S.basis_vectors()
    ]
    return LieAlgebra(S.field, mats)


# ---------------------------------------------------------------------------
# radicals and decomposition


def solvable_radical(g: LieAlgebra) -> Subspace:
    """{x : kappa(x, [g,g]) = 0}; equals the radical in characteristic 0."""
    f = g.field
    der = g.derived_subspace()
    if der.dim == 0:
        return full_space(f, g.dim)
    ads = [g.ad([f.one if i == k else f.zero for i in range(g.dim)]) for k in range(g.dim)]
    rows = []
    for dvec in der.basis_vectors():
        add = g.ad(dvec)
        rows.append([(ads[k] * add).trace() for k in range(g.dim)])
    return kernel(Matrix(f, rows))


def centroid(g: LieAlgebra):
    """(basis of endomorphisms commuting with all ad x, multiplication table)."""
    f = g.field
    n = g.dim
    ads = [g.ad([f.one if i == k else f.zero for i in range(n)]) for k in range(n)]
    # unknown T (n x n), equations T ad_k - ad_k T = 0
    rows = []
    for A in ads:
        for i in range(n):
            for j in range(n):
                row = [f.zero] * (n * n)
                # (T A)_{ij} = sum_t T_{it} A_{tj}; (A T)_{ij} = sum_t A_{it} T_{tj}
                for t in range(n):
                    row[i * n + t] = row[i * n + t] + A[t, j]
                    row[t * n + j] = row[t * n + j] - A[i, t]
                rows.append(row)
    ker = kernel(Matrix(f, rows))
    basis = [
        Matrix(f, [vec[i * n : (i + 1) * n] for i in range(n)])
        for vec in ker.basis_vectors()
    ]
    solver = _SpanSolver(f, [b.flatten() for b in basis])
    table = []
    for Ti in basis:
        trow = []
        for Tj in basis:
            coords = solver.solve((Ti * Tj).flatten())
            assert coords is not None, "centroid not closed under composition"
            trow.append(coords)
        table.append(trow)
    return basis, table


def decompose_semisimple(g: LieAlgebra) -> list[LieAlgebra]:
    """Simple ideals of a semisimple algebra via centroid idempotents."""
    if solvable_radical(g).dim != 0:
        raise NotSemisimple("nonzero radical")
    return _split_by_centroid(g)


def _split_by_centroid(g: LieAlgebra) -> list[LieAlgebra]:
    f = g.field
    basis, _ = centroid(g)
    if len(basis) == 1:
        return [g]
    ident = Matrix.identity(f, g.dim)
    T = next((b for b in basis if _SpanSolver(f, [ident.flatten()]).solve(b.flatten()) is None), None)
    if T is None:
        return [g]
    mp = minimal_polynomial(T)
    from .fields import roots_in_field

    lams = roots_in_field(mp, f)
    if len(lams) < mp.degree:
        return [g]  # centroid is a field: g is simple over this field
    pieces = []
    for lam in lams:
        # projector by Lagrange interpolation
        proj = ident
        denom = f.one
        for mu in lams:
            if mu == lam:
                continue
            proj = proj * (T - ident.scale(mu))
            denom = denom * (lam - mu)
        proj = proj.scale(f.one / denom)
        img_vecs = [proj.apply(v) for v in ident.rows]
        S = Subspace(f, g.dim, img_vecs)
        if S.dim:
            sub = g.subalgebra(S.basis_vectors())
            pieces.extend(_split_by_centroid(sub))
    assert sum(p.dim for p in pieces) == g.dim
    return pieces


def levi_subalgebra(g: LieAlgebra) -> LieAlgebra:
    """Semisimple complement to the radical (Levi), by chainwise lifting."""
    f = g.field
    rad = solvable_radical(g)
    if rad.dim == 0:
        return g
    # derived chain of the radical
    chain = [rad]
    while chain[-1].dim:
        chain.append(g.bracket_space(chain[-1], chain[-1]))
    svecs = complement_basis(rad)
    for level in range(len(chain) - 1):
        svecs = _levi_lift(g, svecs, chain[level], chain[level + 1])
    out = g.subalgebra(svecs)
    # verification
    out_space = Subspace(f, g.dim, svecs)
    assert out_space.intersect(rad).dim == 0, "Levi complement meets radical"
    assert solvable_radical(out).dim == 0, "Levi complement is not semisimple"
    return out


def _levi_lift(g: LieAlgebra, svecs, R: Subspace, Rnext: Subspace):
    """Correct svecs by elements of R so brackets close modulo Rnext."""
    f = g.field
    p = len(svecs)
    rbasis = R.basis_vectors()
    q = len(rbasis)
    if q == 0:
        return svecs
    # quotient structure constants: [x_i, x_j] = sum c_ijk x_k (mod R)
    solver = _SpanSolver(f, svecs + rbasis)
    cs = {}
    d = {}
    for i in range(p):
        for j in range(i + 1, p):
            expr = solver.solve(g.bracket_coords(svecs[i], svecs[j]))
            assert expr is not None, "input basis does not span"
            cs[i, j] = expr[:p]
            rest = [f.zero] * g.dim
            for t, c in enumerate(expr[p:]):
                if c != f.zero:
                    rest = [a + c * b for a, b in zip(rest, rbasis[t])]
            d[i, j] = rest
    # unknowns a_i in R (p*q of them); linear equations modulo Rnext
    def reduce_mod(vec):
        """Residual of vec against Rnext's RREF basis (zero iff in Rnext)."""
        v = list(vec)
        for pc, brow in zip(Rnext.pivots, Rnext.basis.rows):
            t = v[pc]
            if t != f.zero:
                v = [a - t * b for a, b in zip(v, brow)]
        return v

    nunk = p * q
    rows = []
    rhs = []
    # columns: effect of each unknown a_i^t on the bracket residual
    for i in range(p):
        for j in range(i + 1, p):
            # base term d_ij; unknown terms [x_i, a_j] - [x_j, a_i] - sum_k c_ijk a_k
            cols = [[f.zero] * g.dim for _ in range(nunk)]
            for t in range(q):
                v = g.bracket_coords(svecs[i], rbasis[t])
                idx = j * q + t
                cols[idx] = [a + b for a, b in zip(cols[idx], v)]
                w = g.bracket_coords(svecs[j], rbasis[t])
                idx = i * q + t
                cols[idx] = [a - b for a, b in zip(cols[idx], w)]
                for k in range(p):
                    ck = cs[i, j][k]
                    if ck != f.zero:
                        idx = k * q + t
                        cols[idx] = [
                            a - ck * b for a, b in zip(cols[idx], rbasis[t])
                        ]
            base = reduce_mod(d[i, j])
            red_cols = [reduce_mod(c) for c in cols]
            for coord in range(g.dim):
                row = [red_cols[u][coord] for u in range(nunk)]
                if any(x != f.zero for x in row) or base[coord] != f.zero:
                    rows.append(row)
                    rhs.append(-base[coord])
    if rows:
        sol = solve(Matrix(f, rows), rhs)
        if sol is None:
            raise LiftFailed("Levi lifting system unsolvable")
    else:
        sol = [f.zero] * nunk
    out = []
    for i in range(p):
        v = list(svecs[i])
        for t in range(q):
            c = sol[i * q + t]
            if c != f.zero:
                v = [a + c * b for a, b in zip(v, rbasis[t])]
        out.append(v)
    return out


def nilradical_scoped(g: LieAlgebra) -> Subspace:
    """[g, rad g] for the blowup shape, verified to consist of ad-nilpotents."""
    f = g.field
    rad = solvable_radical(g)
    if rad.dim != 3:
        raise ShapeMismatch(f"radical has dimension {rad.dim}, expected 3")
    N = g.bracket_space(full_space(f, g.dim), rad)
    if N.dim != 2:
        raise ShapeMismatch(f"[g, rad] has dimension {N.dim}, expected 2")
    for v in N.basis_vectors():
        A = g.ad(v)
        P = A
        for _ in range(g.dim):
            P = P * A
        if not P.is_zero():
            raise ShapeMismatch("element of [g, rad] is not ad-nilpotent")
    b = N.basis_vectors()
    if any(x != f.zero for x in g.bracket_coords(b[0], b[1])):
        raise ShapeMismatch("[g, rad] is not abelian")
    return N


# ---------------------------------------------------------------------------
# Cartan subalgebras and roots


_RANK_BY_DIM = {3: 1, 8: 2}


def cartan_subalgebra(g: LieAlgebra, max_norm_bound: int = 4) -> Subspace:
    """Fitting null component of the first regular element in the search order.

    Candidates are integer coordinate vectors ordered by max-norm then
    lexicographically; the first whose ad has the minimal nullity (the rank:
    1 for sl2 twists, 2 for sl3 twists) is used.
    """
    f = g.field
    n = g.dim
    rank = _RANK_BY_DIM.get(n)
    if rank is None:
        raise UnsupportedType(f"no rank known for dimension {n}")
    for B in range(1, max_norm_bound + 1):
        for vec in itertools.product(range(-B, B + 1), repeat=n):
            if max(abs(c) for c in vec) != B:
                continue
            coords = [f.coerce(c) for c in vec]
            A = g.ad(coords)
            if kernel(A).dim != rank:
                continue
            # Fitting null component: kernel of A^n
            P = A
            for _ in range(n - 1):
                P = P * A
            h = kernel(P)
            if h.dim != rank:
                continue
            _verify_cartan(g, h)
            return h
    raise NotFound(f"no regular element with max-norm <= {max_norm_bound}")


def _verify_cartan(g: LieAlgebra, h: Subspace):
    f = g.field
    hb = h.basis_vectors()
    # nilpotency: the lower central series of h reaches zero
    cur = h
    for _ in range(h.dim + 1):
        assert all(h.contains(v) for v in g.bracket_space(h, cur).basis_vectors()), (
            "candidate is not a subalgebra"
        )
        cur = g.bracket_space(h, cur)
        if cur.dim == 0:
            break
    assert cur.dim == 0, "Cartan candidate is not nilpotent"
    # self-normalizing: {y : [h_i, y] in h for all i} = h
    rows = []
    for hv in hb:
        rows.extend(_residual_rows(g.ad(hv), h))
    norm = kernel(Matrix(f, rows)) if rows else full_space(f, g.dim)
    assert norm.dim == h.dim, "Cartan candidate is not self-normalizing"


def _residual_rows(A: Matrix, S: Subspace):
    """Rows of y -> (A y reduced mod S); zero rows dropped."""
    f = A.field
    n = A.nrows
    cols = []
    for j in range(n):
        v = A.col(j)
        for pc, brow in zip(S.pivots, S.basis.rows):
            t = v[pc]
            if t != f.zero:
                v = [a - t * b for a, b in zip(v, brow)]
        cols.append(v)
    rows = []
    for i in range(n):
        row = [cols[j][i] for j in range(n)]
        if any(x != f.zero for x in row):
            rows.append(row)
    return rows


class CartanData:
    """Split Cartan subalgebra with its root space decomposition."""

    def __init__(self, algebra: LieAlgebra, h_basis, root_spaces):
        self.algebra = algebra
        self.h_basis = [list(v) for v in h_basis]
        self.root_spaces = list(root_spaces)  # (root tuple, Subspace of coords)

    def positive_roots(self):
        zero = self.algebra.field.zero
        return [(r, S) for (r, S) in self.root_spaces if weight_is_positive(r, zero)]

    def negative_roots(self):
        zero = self.algebra.field.zero
        return [(r, S) for (r, S) in self.root_spaces if not weight_is_positive(r, zero)]

    def root_vector(self, root):
        for r, S in self.root_spaces:
            if tuple(r) == tuple(root):
                return S.basis_vectors()[0]
        raise KeyError(root)


def root_space_decomposition(g: LieAlgebra, h: Subspace, hints=None) -> CartanData:
    """Simultaneous ad-eigenspace decomposition for a split Cartan h."""
    f = g.field
    hb = h.basis_vectors()
    ads = [g.ad(v) for v in hb]
    try:
        spaces = simultaneous_eigenspaces(ads, hints=hints)
    except NotDiagonalizable as e:
        raise NotSplit(str(e)) from e
    zero_w = tuple([f.zero] * len(hb))
    roots = []
    for w, S in spaces:
        if tuple(w) == zero_w:
            assert S.dim == h.dim and all(S.contains(v) for v in hb), (
                "zero weight space differs from the Cartan subalgebra"
            )
        else:
            roots.append((tuple(w), S))
    return CartanData(g, hb, roots)


# ---------------------------------------------------------------------------
# conics from sl2 twists


def sl2_twist_to_conic(g: LieAlgebra) -> SymQuadric:
    """The invariant conic of the adjoint representation of a 3-dim twist of sl2.

    Solves ad(x)^T A + A ad(x) = 0 for symmetric A in the given basis order;
    the solution space must be 1-dimensional (it is spanned by the Killing
    form).  Over Q the matrix is normalized to coprime integers with positive
    first nonzero entry.
    """
    f = g.field
    if g.dim != 3:
        raise NoConic(f"dimension {g.dim} != 3")
    idx = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    rows = []
    for k in range(3):
        ek = [f.one if i == k else f.zero for i in range(3)]
        M = g.ad(ek)
        # equation matrix for vec_sym(A): (M^T A + A M)_{rs} = 0
        for r in range(3):
            for s in range(r, 3):
                row = []
                for (i, j) in idx:
                    # coefficient of A_ij (with A_ji = A_ij for i != j)
                    c = f.zero
                    # (M^T A)_{rs} = sum_t M_{tr} A_{ts}; (A M)_{rs} = sum_t A_{rt} M_{ts}
                    for t in range(3):
                        if (t, s) == (i, j) or (s, t) == (i, j):
                            c = c + M[t, r]
                        if (r, t) == (i, j) or (t, r) == (i, j):
                            c = c + M[t, s]
                    row.append(c)
                rows.append(row)
    ker = kernel(Matrix(f, rows))
    if ker.dim != 1:
        raise NoConic(f"invariant-form space has dimension {ker.dim}")
    v = ker.basis_vectors()[0]
    A = [[f.zero] * 3 for _ in range(3)]
    for (i, j), c in zip(idx, v):
        A[i][j] = c
        A[j][i] = c
    if f == QQ:
        flat = [A[i][j] for i in range(3) for j in range(3)]
        from math import gcd

        den = 1
        for x in flat:
            den = den * (x.denominator // gcd(den, x.denominator))
        ints = [int(x * den) for x in flat]
        gg = 0
        for t in ints:
            gg = gcd(gg, abs(t))
        ints = [t // gg for t in ints]
        lead = next(t for t in ints if t)
        if lead < 0:
            ints = [-t for t in ints]
        A = [[Fraction(ints[3 * i + j]) for j in range(3)] for i in range(3)]
    return SymQuadric(Matrix(f, A))


class ChevalleySL2:
    """Chevalley triple: [h,x] = 2x, [h,y] = -2y, [x,y] = h."""

    def __init__(self, algebra: LieAlgebra, x, y, h):
        self.algebra = algebra
        self.x = list(x)
        self.y = list(y)
        self.h = list(h)
        two = algebra.field.coerce(2)
        assert algebra.bracket_coords(h, x) == [two * c for c in x], "[h,x] != 2x"
        assert algebra.bracket_coords(h, y) == [-two * c for c in y], "[h,y] != -2y"
        assert algebra.bracket_coords(x, y) == list(h), "[x,y] != h"

    def matrices(self):
        g = self.algebra
        return g.element(self.x), g.element(self.y), g.element(self.h)


# the Chevalley basis of g0(C0) for the standard conic z0 z2 - z1^2
SL2_STD_X = ((0, 2, 0), (0, 0, 1), (0, 0, 0))
SL2_STD_Y = ((0, 0, 0), (1, 0, 0), (0, 2, 0))
SL2_STD_H = ((2, 0, 0), (0, 0, 0), (0, 0, -2))


def split_sl2(g: LieAlgebra):
    """Chevalley triple of a 3-dim semisimple algebra over Q, or None.

    None means the associated conic has no rational point, i.e. g is a proper
    twist of sl2 (decided by the Legendre criterion).
    """
    from .dioph import conic_point, conic_parametrization
    from .linalg import congruence_diagonalize

    q = sl2_twist_to_conic(g)
    pt = conic_point(q)
    if pt is None:
        return None
    P, d = congruence_diagonalize(q)
    Dq = SymQuadric(Matrix(g.field, [
        [d[i] if i == j else 0 for j in range(3)] for i in range(3)
    ]))
    y = P.inverse().apply([Fraction(c) for c in pt.coords])
    from .dioph import _primitive

    M_D = conic_parametrization(Dq, _primitive(y))
    M = P * M_D
    x0 = Matrix(QQ, SL2_STD_X)
    y0 = Matrix(QQ, SL2_STD_Y)
    h0 = Matrix(QQ, SL2_STD_H)
    Minv = M.inverse()
    triple = []
    for T in (x0, y0, h0):
        conj = M * T * Minv
        coords = _solve_ad_preimage(g, conj)
        assert coords is not None, "conjugated generator outside ad(g)"
        triple.append(coords)
    return ChevalleySL2(g, triple[0], triple[1], triple[2])


def _solve_ad_preimage(g: LieAlgebra, T: Matrix):
    """Solve sum v_i ad(b_i) = T for v (the adjoint map is injective here)."""
    f = g.field
    ads = [g.ad([f.one if i == k else f.zero for i in range(g.dim)]) for k in range(g.dim)]
    rows = []
    rhs = []
    n = g.dim
    for r in range(n):
        for s in range(n):
            rows.append([ads[k][r, s] for k in range(n)])
            rhs.append(T[r, s])
    return solve(Matrix(f, rows), rhs)


# ---------------------------------------------------------------------------
# Chevalley bases (types A1 and A2)


def canonical_chevalley_basis(g: LieAlgebra, cartan: CartanData):
    """Chevalley basis of a split algebra of type A1 or A2.

    Returns (elements, labels): coordinate vectors together with labels among
    'x_a', 'x_b', 'x_ab', 'y_a', 'y_b', 'y_ab', 'h_a', 'h_b' (A2) or
    'x', 'y', 'h' (A1); the structure constants are integral.
    """
    f = g.field
    roots = cartan.root_spaces
    if g.dim == 3 and len(roots) == 2:
        return _chevalley_a1(g, cartan)
    if g.dim == 8 and len(roots) == 6:
        return _chevalley_a2(g, cartan)
    raise UnsupportedType(f"dim {g.dim} with {len(roots)} roots is not A1 or A2")


def _root_value(g: LieAlgebra, hvec, xvec):
    """alpha(h) with [h, x_alpha] = alpha(h) x_alpha."""
    br = g.bracket_coords(hvec, xvec)
    f = g.field
    for i, c in enumerate(xvec):
        if c != f.zero:
            return br[i] / c
    raise ValueError("zero root vector")


def _normalize_pair(g: LieAlgebra, xv, yv):
    """Scale y so [x, y] = h has alpha(h) = 2; returns (x, y, h)."""
    f = g.field
    t = g.bracket_coords(xv, yv)
    val = _root_value(g, t, xv)
    assert val != f.zero, "degenerate sl2 pair"
    scale = f.coerce(2) / val
    yv2 = [c * scale for c in yv]
    h = g.bracket_coords(xv, yv2)
    return xv, yv2, h


def _chevalley_a1(g: LieAlgebra, cartan: CartanData):
    pos = cartan.positive_roots()
    assert len(pos) == 1
    (alpha, Sp) = pos[0]
    neg_alpha = tuple(-c for c in alpha)
    xv = Sp.basis_vectors()[0]
    yv = cartan.root_vector(neg_alpha)
    x, y, h = _normalize_pair(g, xv, yv)
    return {"x": x, "y": y, "h": h}


def _chevalley_a2(g: LieAlgebra, cartan: CartanData):
    f = g.field
    pos = cartan.positive_roots()
    assert len(pos) == 3, "A2 needs 3 positive roots"
    proots = [tuple(r) for r, _ in pos]
    # the simple roots are the two whose sum is the third
    simple = None
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            s = tuple(a + b for a, b in zip(proots[i], proots[j]))
            if s in proots:
                simple = (proots[i], proots[j], s)
    assert simple is not None, "no A2 root pattern"
    a_r, b_r, ab_r = simple
    xa, ya, ha = _normalize_pair(g, cartan.root_vector(a_r), cartan.root_vector(tuple(-c for c in a_r)))
    xb, yb, hb = _normalize_pair(g, cartan.root_vector(b_r), cartan.root_vector(tuple(-c for c in b_r)))
    xab = g.bracket_coords(xa, xb)
    yab = [-c for c in g.bracket_coords(ya, yb)]
    # [x_ab, y_ab] must equal h_a + h_b; fix the remaining scalar on y_ab
    t = g.bracket_coords(xab, yab)
    target = [u + v for u, v in zip(ha, hb)]
    ratio = None
    for ti, tg in zip(t, target):
        if tg != f.zero:
            ratio = ti / tg
            break
    assert ratio is not None and ratio != f.zero, "degenerate composite root pair"
    yab = [c / ratio for c in yab]
    assert g.bracket_coords(xab, yab) == target, "composite normalization failed"
    return {
        "x_a": xa, "x_b": xb, "x_ab": xab,
        "y_a": ya, "y_b": yb, "y_ab": yab,
        "h_a": ha, "h_b": hb,
    }


def sl3_standard_basis(field):
    """Standard Chevalley basis of sl3 as 3x3 matrices, keyed like _chevalley_a2."""
    def E(i, j):
        m = [[field.zero] * 3 for _ in range(3)]
        m[i][j] = field.one
        return Matrix(field, m)

    return {
        "x_a": E(0, 1), "x_b": E(1, 2), "x_ab": E(0, 2),
        "y_a": E(1, 0), "y_b": E(2, 1), "y_ab": E(2, 0),
        "h_a": E(0, 0) - E(1, 1), "h_b": E(1, 1) - E(2, 2),
    }


def sl2_standard_basis(field):
    def M(rows):
        return Matrix(field, rows)

    return {
        "x": M([[0, 1], [0, 0]]),
        "y": M([[0, 0], [1, 0]]),
        "h": M([[1, 0], [0, -1]]),
    }


# ---------------------------------------------------------------------------
# modules and module isomorphisms


class WeightModule:
    def __init__(self, rep_dim, weights):
        self.rep_dim = rep_dim
        self.weights = list(weights)  # (weight tuple, Subspace of ambient)


def module_weights(g: LieAlgebra, cartan: CartanData) -> WeightModule:
    """Weight decomposition of the natural (ambient column) module."""
    mats = [g.element(h) for h in cartan.h_basis]
    try:
        spaces = simultaneous_eigenspaces(mats)
    except NotDiagonalizable as e:
        raise NotSplit(str(e)) from e
    return WeightModule(g.ambient, [(tuple(w), S) for w, S in spaces])


def _highest_weight_vector(field, weights, pos_action_mats):
    """(weight, vector) of the unique highest weight vector, up to scalar."""
    hw = []
    for w, S in weights:
        B = S.basis_vectors()
        # vectors sum_c t_c B_c with X (sum t_c B_c) = 0 for all positive X
        cols = len(B)
        eqrows = []
        for X in pos_action_mats:
            imgs = [X.apply(v) for v in B]
            for coord in range(len(imgs[0])):
                row = [imgs[c][coord] for c in range(cols)]
                if any(x != field.zero for x in row):
                    eqrows.append(row)
        if eqrows:
            ker = kernel(Matrix(field, eqrows))
            vecs = ker.basis_vectors()
        else:
            vecs = [[field.one if i == c else field.zero for i in range(cols)] for c in range(cols)]
        for t in vecs:
            v = [field.zero] * len(B[0])
            for c, bv in zip(t, B):
                if c != field.zero:
                    v = [a + c * b for a, b in zip(v, bv)]
            hw.append((tuple(w), v))
    if len(hw) != 1:
        raise NotIrreducible(f"{len(hw)} highest weight vectors")
    return hw[0]


def module_isomorphism(gA: LieAlgebra, gB: LieAlgebra, phi, cartanA: CartanData):
    """Intertwiner N with N(x v) = phi(x)(N v), or None on weight mismatch.

    phi maps coordinate vectors of gA to coordinate vectors of gB and must be
    a verified Lie algebra isomorphism.  Both natural modules must be
    irreducible with split weights.  The construction matches highest weight
    vectors and propagates along negative root chains; the intertwining
    identity is verified exhaustively before returning.
    """
    f = gA.field
    m = gA.ambient
    assert gB.ambient == m, "modules have different dimensions"

    def phiB(vec):
        return gB.element(phi(vec))

    hA = [gA.element(h) for h in cartanA.h_basis]
    hB = [phiB(h) for h in cartanA.h_basis]
    try:
        wA = simultaneous_eigenspaces(hA)
        wB = simultaneous_eigenspaces(hB)
    except NotDiagonalizable as e:
        raise NotSplit(str(e)) from e
    posA = [gA.element(cartanA.root_vector(r)) for r, _ in cartanA.positive_roots()]
    posB = [phiB(cartanA.root_vector(r)) for r, _ in cartanA.positive_roots()]
    lamA, vA = _highest_weight_vector(f, wA, posA)
    lamB, vB = _highest_weight_vector(f, wB, posB)
    if lamA != lamB:
        return None
    negA = [gA.element(cartanA.root_vector(r)) for r, _ in cartanA.negative_roots()]
    negB = [phiB(cartanA.root_vector(r)) for r, _ in cartanA.negative_roots()]
    basisA, basisB = [vA], [vB]
    span = Subspace(f, m, [vA])
    frontier = [(vA, vB)]
    while span.dim < m and frontier:
        new_frontier = []
        for (ua, ub) in frontier:
            for XA, XB in zip(negA, negB):
                wa = XA.apply(ua)
                if all(x == f.zero for x in wa):
                    continue
                if span.contains(wa):
                    continue
                wb = XB.apply(ub)
                basisA.append(wa)
                basisB.append(wb)
                span = Subspace(f, m, span.basis_vectors() + [wa])
                new_frontier.append((wa, wb))
                if span.dim == m:
                    break
            if span.dim == m:
                break
        frontier = new_frontier
    if span.dim < m:
        raise NotIrreducible("negative chains do not span the module")
    UA = Matrix.from_cols(f, basisA)
    UB = Matrix.from_cols(f, basisB)
    N = UB * UA.inverse()
    # exact intertwining check on all basis pairs
    for k in range(gA.dim):
        ek = [f.one if i == k else f.zero for i in range(gA.dim)]
        XA = gA.element(ek)
        XB = phiB(ek)
        assert (N * XA - XB * N).is_zero(), "intertwining identity failed"
    return N
