"""Finite-dimensional unital associative algebras by structure constants.

Elements are coordinate vectors; multiplication maps, centralizers, one-sided
ideals and the left-ideal-to-matrix-algebra isomorphism are the raw material
for the central-simple-algebra trivializations in dpparam.csa.
"""

from __future__ import annotations

from .fields import UniPoly
from .linalg import Matrix, Subspace, full_space, kernel
from .lie import _SpanSolver


class NotMinimal(Exception):
    pass


class NotIdeal(Exception):
    pass


class AssocAlgebra:
    """Unital associative algebra with basis b_0..b_{dim-1} over a field.

    sc[i][j] is the coordinate vector of b_i * b_j; one is the coordinate
    vector of the identity.  Associativity and the identity law are verified
    at construction for dim <= 16.
    """

    def __init__(self, field, sc, one, verify=True):
        self.field = field
        self.dim = len(sc)
        self.sc = [[[field.coerce(c) for c in vec] for vec in row] for row in sc]
        self.one = [field.coerce(c) for c in one]
        assert len(self.one) == self.dim
        if verify and self.dim <= 16:
            self._verify()

    def _verify(self):
        f = self.field
        for i in range(self.dim):
            ei = self.basis_element(i)
            assert (self.element(self.one) * ei).coords == ei.coords, "1*b != b"
            assert (ei * self.element(self.one)).coords == ei.coords, "b*1 != b"
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    lhs = self._mul_coords(self.sc[i][j], self._ek(k))
                    rhs = self._mul_coords(self._ek(i), self.sc[j][k])
                    assert lhs == rhs, f"associativity fails at ({i},{j},{k})"

    def _ek(self, k):
        f = self.field
        return [f.one if i == k else f.zero for i in range(self.dim)]

    def _mul_coords(self, u, v):
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

    def element(self, coords) -> "AElement":
        return AElement(self, [self.field.coerce(c) for c in coords])

    def basis_element(self, i) -> "AElement":
        return self.element(self._ek(i))

    def one_element(self) -> "AElement":
        return self.element(self.one)

    def zero_element(self) -> "AElement":
        return self.element([self.field.zero] * self.dim)

    def scalar(self, c) -> "AElement":
        c = self.field.coerce(c)
        return self.element([x * c for x in self.one])

    def center(self) -> Subspace:
        rows = []
        for i in range(self.dim):
            L = left_mul_map(self.basis_element(i))
            R = right_mul_map(self.basis_element(i))
            D = L - R
            rows.extend(D.rows)
        return kernel(Matrix(self.field, rows)) if rows else full_space(self.field, self.dim)

    def __repr__(self):
        return f"AssocAlgebra(dim {self.dim} over {self.field})"


class AElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        assert len(coords) == algebra.dim
        self.algebra = algebra
        self.coords = list(coords)

    def is_zero(self):
        z = self.algebra.field.zero
        return all(c == z for c in self.coords)

    def _same(self, other):
        if isinstance(other, AElement):
            assert other.algebra is self.algebra, "mixed algebras"
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        o = self._same(other)
        return AElement(self.algebra, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._same(other)
        return AElement(self.algebra, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        return self._same(other).__sub__(self)

    def __neg__(self):
        return AElement(self.algebra, [-a for a in self.coords])

    def __mul__(self, other):
        if not isinstance(other, AElement):
            c = self.algebra.field.coerce(other)
            return AElement(self.algebra, [a * c for a in self.coords])
        o = self._same(other)
        return AElement(self.algebra, self.algebra._mul_coords(self.coords, o.coords))

    def __rmul__(self, other):
        # scalar * element (scalars commute with everything)
        c = self.algebra.field.coerce(other)
        return AElement(self.algebra, [a * c for a in self.coords])

    def __pow__(self, n):
        out = self.algebra.one_element()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, AElement):
            other = self._same(other)
        return self.coords == other.coords

    def __hash__(self):
        return hash(tuple(self.coords))

    def inverse(self) -> "AElement | None":
        """Two-sided inverse, or None if the element is not invertible."""
        from .linalg import solve

        L = left_mul_map(self)
        sol = solve(L, self.algebra.one)
        if sol is None:
            return None
        inv = self.algebra.element(sol)
        if (inv * self).coords != self.algebra.one:
            return None
        return inv

    def commutator(self, other):
        return self * other - other * self

    def is_rational_multiple_of_one(self):
        """Whether the element lies in the span of the identity."""
        f = self.algebra.field
        one = self.algebra.one
        k = next((i for i, c in enumerate(one) if c != f.zero), None)
        assert k is not None
        lam = self.coords[k] / one[k]
        return all(c == lam * o for c, o in zip(self.coords, one)), lam

    def __repr__(self):
        return f"AElement({self.coords})"


# ---------------------------------------------------------------------------
# multiplication maps and basic invariants


def right_mul_map(d: AElement) -> Matrix:
    """Matrix of x -> x*d on the basis (columns are images of basis elements)."""
    A = d.algebra
    cols = [A._mul_coords(A._ek(i), d.coords) for i in range(A.dim)]
    return Matrix.from_cols(A.field, cols)


def left_mul_map(d: AElement) -> Matrix:
    """Matrix of x -> d*x on the basis."""
    A = d.algebra
    cols = [A._mul_coords(d.coords, A._ek(i)) for i in range(A.dim)]
    return Matrix.from_cols(A.field, cols)


def min_poly_element(a: AElement) -> UniPoly:
    """Minimal polynomial of a (Krylov on 1, a, a^2, ...)."""
    A = a.algebra
    f = A.field
    vecs = [list(A.one)]
    cur = A.one_element()
    basis = []  # (pivot, reduced, combo)
    while True:
        v = list(vecs[-1])
        combo = [f.zero] * len(vecs)
        combo[-1] = f.one
        for (pc, rv, rc) in basis:
            t = v[pc]
            if t != f.zero:
                v = [x - t * y for x, y in zip(v, rv)]
                combo = [x - t * y for x, y in zip(combo, rc + [f.zero] * (len(combo) - len(rc)))]
        nz = next((i for i, x in enumerate(v) if x != f.zero), None)
        if nz is None:
            return UniPoly(f, combo).monic()
        inv = f.one / v[nz]
        basis.append((nz, [x * inv for x in v], [x * inv for x in combo]))
        cur = cur * a
        vecs.append(cur.coords)
        assert len(vecs) <= A.dim + 1


def is_zero_divisor(a: AElement) -> bool:
    """True iff a != 0 and right multiplication by a is singular."""
    if a.is_zero():
        return False
    return kernel(right_mul_map(a)).dim > 0


class LeftIdeal:
    """Left ideal given by a subspace, verified: b_i * v in the space."""

    def __init__(self, algebra: AssocAlgebra, space: Subspace):
        self.algebra = algebra
        self.space = space
        for i in range(algebra.dim):
            for v in space.basis_vectors():
                img = algebra._mul_coords(algebra._ek(i), v)
                assert space.contains(img), "not a left ideal"

    @property
    def dim(self):
        return self.space.dim

    def basis_elements(self):
        return [self.algebra.element(v) for v in self.space.basis_vectors()]


def left_ideal_from(b: AElement) -> LeftIdeal:
    """The left ideal A*b (column space of right multiplication by b)."""
    assert not b.is_zero()
    A = b.algebra
    R = right_mul_map(b)
    cols = [R.col(j) for j in range(A.dim)]
    return LeftIdeal(A, Subspace(A.field, A.dim, cols))


class AlgebraIso:
    """Verified isomorphism between an algebra and a full matrix algebra."""

    def __init__(self, algebra: AssocAlgebra, n, basis_images):
        self.algebra = algebra
        self.n = n
        self.basis_images = basis_images  # Matrix image of each basis element
        f = algebra.field
        rows = [img.flatten() for img in basis_images]
        self._solver = _SpanSolver(f, rows)
        # verify multiplicativity exhaustively and phi(1) = identity
        assert self.to_matrix(algebra.one_element()) == Matrix.identity(f, n)
        for i in range(algebra.dim):
            for j in range(algebra.dim):
                lhs = self.to_matrix(algebra.basis_element(i) * algebra.basis_element(j))
                rhs = basis_images[i] * basis_images[j]
                assert lhs == rhs, "isomorphism is not multiplicative"

    def to_matrix(self, a: AElement) -> Matrix:
        f = self.algebra.field
        out = Matrix.zero(f, self.n, self.n)
        for c, img in zip(a.coords, self.basis_images):
            if c != f.zero:
                out = out + img.scale(c)
        return out

    def from_matrix(self, M: Matrix) -> AElement:
        coords = self._solver.solve(M.flatten())
        assert coords is not None, "matrix outside the image (impossible for an iso)"
        return self.algebra.element(coords)


def iso_from_left_ideal(A: AssocAlgebra, L: LeftIdeal) -> AlgebraIso:
    """phi(a) = matrix of x -> a*x on a basis of the minimal left ideal L."""
    import math

    n = math.isqrt(A.dim)
    assert n * n == A.dim, "algebra dimension is not a square"
    if L.dim != n:
        raise NotMinimal(f"ideal dimension {L.dim} != {n}")
    f = A.field
    lbasis = L.space.basis_vectors()
    solver = _SpanSolver(f, lbasis)
    images = []
    for i in range(A.dim):
        cols = []
        for v in lbasis:
            img = A._mul_coords(A._ek(i), v)
            coords = solver.solve(img)
            assert coords is not None, "ideal is not invariant"
            cols.append(coords)
        images.append(Matrix.from_cols(f, cols))
    return AlgebraIso(A, n, images)


# ---------------------------------------------------------------------------
# subalgebras and quotients


def algebra_from_subspace(A: AssocAlgebra, space: Subspace, one_coords=None):
    """Subalgebra structure on a multiplicatively closed subspace of A.

    Returns (B, inclusion) where inclusion lists the basis of B as elements
    of A; one_coords (in A) defaults to A's identity, which must lie in the
    subspace.
    """
    f = A.field
    basis = space.basis_vectors()
    solver = _SpanSolver(f, basis)
    one = one_coords if one_coords is not None else A.one
    one_in = solver.solve(one)
    assert one_in is not None, "identity not in subspace"
    sc = []
    for u in basis:
        row = []
        for v in basis:
            prod = A._mul_coords(u, v)
            coords = solver.solve(prod)
            assert coords is not None, "subspace is not multiplicatively closed"
            row.append(coords)
        sc.append(row)
    B = AssocAlgebra(f, sc, one_in)
    inclusion = [A.element(v) for v in basis]
    return B, inclusion


def centralizer(a: AElement):
    """Centralizer {x : xa = ax} as a subalgebra, with its inclusion into A."""
    A = a.algebra
    D = left_mul_map(a) - right_mul_map(a)
    space = kernel(D)
    return algebra_from_subspace(A, space)


def generated_subalgebra(A: AssocAlgebra, gens):
    """Smallest unital subalgebra of A containing gens, with inclusion."""
    f = A.field
    vecs = [list(A.one)] + [list(g.coords) for g in gens]
    space = Subspace(f, A.dim, vecs)
    while True:
        basis = space.basis_vectors()
        new_vecs = list(basis)
        for u in basis:
            for v in basis:
                new_vecs.append(A._mul_coords(u, v))
        bigger = Subspace(f, A.dim, new_vecs)
        if bigger.dim == space.dim:
            return algebra_from_subspace(A, space)
        space = bigger


def quotient_by_nilpotent_ideal(A: AssocAlgebra, R: Subspace):
    """Quotient A/R for a nilpotent two-sided ideal R.

    Returns (Q, project, section): project maps an AElement of A to one of Q,
    section maps a Q-element back to a fixed representative in A.
    """
    f = A.field
    rbasis = R.basis_vectors()
    for i in range(A.dim):
        for v in rbasis:
            if not R.contains(A._mul_coords(A._ek(i), v)) or not R.contains(
                A._mul_coords(v, A._ek(i))
            ):
                raise NotIdeal("subspace is not a two-sided ideal")
    for v in rbasis:
        mp = min_poly_element(A.element(v))
        if any(c != f.zero for c in mp.coeffs[:-1]):
            raise NotIdeal("ideal contains a non-nilpotent element")
    comp = []
    from .linalg import complement_basis

    comp = complement_basis(R)
    q = len(comp)
    solver = _SpanSolver(f, comp + rbasis)

    def project_coords(vec):
        expr = solver.solve(vec)
        assert expr is not None
        return expr[:q]

    one_q = project_coords(A.one)
    sc = []
    for u in comp:
        row = []
        for v in comp:
            row.append(project_coords(A._mul_coords(u, v)))
        sc.append(row)
    Q = AssocAlgebra(f, sc, one_q)

    def project(a: AElement) -> AElement:
        return Q.element(project_coords(a.coords))

    def section(qe: AElement) -> AElement:
        vec = [f.zero] * A.dim
        for c, cv in zip(qe.coords, comp):
            if c != f.zero:
                vec = [x + c * y for x, y in zip(vec, cv)]
        return A.element(vec)

    return Q, project, section


# ---------------------------------------------------------------------------
# constructions


def matrix_algebra(field, n) -> AssocAlgebra:
    """M_n(field) with the basis e_11, e_12, ..., e_nn (row-major)."""
    dim = n * n
    zero = field.zero
    sc = []
    for i in range(dim):
        r1, c1 = divmod(i, n)
        row = []
        for j in range(dim):
            r2, c2 = divmod(j, n)
            vec = [zero] * dim
            if c1 == r2:
                vec[r1 * n + c2] = field.one
            row.append(vec)
        sc.append(row)
    one = [field.one if divmod(i, n)[0] == divmod(i, n)[1] else zero for i in range(dim)]
    return AssocAlgebra(field, sc, one)


def algebra_from_matrix_span(field, mats, verify=True):
    """Algebra structure on the span of matrices closed under products.

    The identity matrix must lie in the span.  Returns (A, basis_mats) where
    basis_mats[i] realizes A.basis_element(i).
    """
    solver = _SpanSolver(field, [m.flatten() for m in mats])
    n = mats[0].nrows
    ident = Matrix.identity(field, n)
    one = solver.solve(ident.flatten())
    assert one is not None, "identity outside the span"
    sc = []
    for mi in mats:
        row = []
        for mj in mats:
            coords = solver.solve((mi * mj).flatten())
            assert coords is not None, "span not closed under products"
            row.append(coords)
        sc.append(row)
    return AssocAlgebra(field, sc, one, verify=verify), list(mats)


def matrix_closure(field, gens, max_dim=None):
    """Basis of the unital matrix algebra generated by gens inside M_m."""
    m = gens[0].nrows
    vecs = [Matrix.identity(field, m).flatten()] + [g.flatten() for g in gens]
    space = Subspace(field, m * m, vecs)

    def unflatten(v):
        return Matrix(field, [v[i * m : (i + 1) * m] for i in range(m)])

    while True:
        basis = [unflatten(v) for v in space.basis_vectors()]
        new_vecs = [b.flatten() for b in basis]
        for u in basis:
            for v in basis:
                new_vecs.append((u * v).flatten())
        bigger = Subspace(field, m * m, new_vecs)
        if bigger.dim == space.dim:
            return basis
        if max_dim is not None and bigger.dim > max_dim:
            return [unflatten(v) for v in bigger.basis_vectors()]
        space = bigger


def first_noncentral(A: AssocAlgebra) -> AElement:
    """Deterministic noncentral element: basis elements, then pair sums."""
    center = A.center()
    for i in range(A.dim):
        if not center.contains(A._ek(i)):
            return A.basis_element(i)
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            v = [a + b for a, b in zip(A._ek(i), A._ek(j))]
            if not center.contains(v):
                return A.element(v)
    raise ValueError("algebra is commutative")
