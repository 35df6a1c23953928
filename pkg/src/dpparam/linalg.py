"""Exact dense linear algebra over any field from dpparam.fields.

Matrices are immutable by convention; subspaces are stored as canonical
reduced-row-echelon bases so subspace equality is plain matrix equality.
Over Q the elimination kernels run on integer rows (cleared denominators,
gcd-reduced) for speed; the results are identical to naive rational RREF.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .fields import QQ, RationalField, UniPoly, roots_in_field


class NotDiagonalizable(Exception):
    pass


class SingularMatrix(Exception):
    pass


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows):
        self.field = field
        self.rows = [[field.coerce(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        assert all(len(r) == self.ncols for r in self.rows)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def identity(field, n):
        return Matrix(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(field, m, n):
        return Matrix(field, [[field.zero] * n for _ in range(m)])

    @staticmethod
    def from_cols(field, cols):
        n = len(cols[0])
        return Matrix(field, [[cols[j][i] for j in range(len(cols))] for i in range(n)])

    # -- basics -------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def col(self, j):
        return [self.rows[i][j] for i in range(self.nrows)]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(tuple(r) for r in self.rows)))

    def __add__(self, other):
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        return Matrix(self.field, [
            [a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)
        ])

    def __sub__(self, other):
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        return Matrix(self.field, [
            [a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)
        ])

    def __neg__(self):
        return Matrix(self.field, [[-a for a in r] for r in self.rows])

    def scale(self, c):
        c = self.field.coerce(c)
        return Matrix(self.field, [[a * c for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            assert self.ncols == other.nrows, "dimension mismatch"
            zero = self.field.zero
            ocols = list(zip(*other.rows))
            out = []
            for r in self.rows:
                orow = []
                for c in ocols:
                    s = zero
                    for a, b in zip(r, c):
                        if a != zero and b != zero:
                            s = s + a * b
                    orow.append(s)
                out.append(orow)
            return Matrix(self.field, out)
        return self.scale(other)

    __rmul__ = scale

    def apply(self, vec):
        """Matrix times column vector (a plain list)."""
        zero = self.field.zero
        out = []
        for r in self.rows:
            s = zero
            for a, b in zip(r, vec):
                if a != zero and b != zero:
                    s = s + a * b
            out.append(s)
        return out

    def transpose(self):
        return Matrix(self.field, [list(c) for c in zip(*self.rows)]) if self.rows else self

    def trace(self):
        assert self.nrows == self.ncols
        t = self.field.zero
        for i in range(self.nrows):
            t = t + self.rows[i][i]
        return t

    def is_zero(self):
        z = self.field.zero
        return all(x == z for r in self.rows for x in r)

    def is_symmetric(self):
        return self.nrows == self.ncols and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.nrows)
            for j in range(i + 1, self.ncols)
        )

    def flatten(self):
        return [x for r in self.rows for x in r]

    def commutator(self, other):
        return self * other - other * self

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix[{body}]"

    # -- elimination --------------------------------------------------------

    def rref(self):
        """Canonical reduced row echelon form with pivot column list."""
        rows, pivots = _rref_rows(self.field, [list(r) for r in self.rows])
        return Matrix(self.field, rows) if rows else Matrix.zero(self.field, 0, self.ncols), pivots

    def rank(self):
        return len(self.rref()[1])

    def det(self):
        assert self.nrows == self.ncols
        f = self.field
        m = [list(r) for r in self.rows]
        n = self.nrows
        det = f.one
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col] != f.zero), None)
            if piv is None:
                return f.zero
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                det = -det
            det = det * m[col][col]
            inv = f.one / m[col][col]
            for r in range(col + 1, n):
                if m[r][col] != f.zero:
                    fct = m[r][col] * inv
                    m[r] = [a - fct * b for a, b in zip(m[r], m[col])]
        return det

    def inverse(self):
        assert self.nrows == self.ncols
        f = self.field
        n = self.nrows
        aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != f.zero), None)
            if piv is None:
                raise SingularMatrix("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = f.one / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != f.zero:
                    fct = aug[r][col]
                    aug[r] = [x - fct * y for x, y in zip(aug[r], aug[col])]
        return Matrix(f, [row[n:] for row in aug])

    def is_invertible(self):
        try:
            self.inverse()
            return True
        except SingularMatrix:
            return False


# ---------------------------------------------------------------------------
# elimination cores


def _rref_rows(field, rows):
    """Canonical RREF; returns (nonzero rows, pivot columns)."""
    if not rows:
        return [], []
    if isinstance(field, RationalField):
        return _rref_rows_QQ(rows)
    zero, one = field.zero, field.one
    rows = [list(r) for r in rows]
    m, n = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != zero), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != zero:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows[:r], pivots


def _row_to_int(row):
    den = 1
    for x in row:
        den = den * (x.denominator // gcd(den, x.denominator))
    ints = [int(x * den) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _rref_rows_QQ(rows):
    """Integer fraction-free Gauss-Jordan, canonical rational RREF at the end."""
    work = [_row_to_int(r) for r in rows]
    work = [r for r in work if any(r)]
    if not work:
        return [], []
    n = len(work[0])
    pivots = []
    piv_rows = []
    for c in range(n):
        best = None
        for i, r in enumerate(work):
            if r[c]:
                if best is None or abs(r[c]) < abs(work[best][c]):
                    best = i
        if best is None:
            continue
        prow = work.pop(best)
        a = prow[c]
        nxt = []
        for r in work:
            b = r[c]
            if b:
                nr = [a * x - b * y for x, y in zip(r, prow)]
                g = 0
                for v in nr:
                    g = gcd(g, v)
                if g > 1:
                    nr = [v // g for v in nr]
                if any(nr):
                    nxt.append(nr)
            else:
                nxt.append(r)
        work = nxt
        pivots.append(c)
        piv_rows.append(prow)
        if not work:
            break
    # back-substitute among pivot rows, then normalize to fractions
    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    pivots_sorted = [pivots[k] for k in order]
    rows_sorted = [piv_rows[k] for k in order]
    for i in range(len(rows_sorted) - 1, -1, -1):
        for j in range(i + 1, len(rows_sorted)):
            c = pivots_sorted[j]
            b = rows_sorted[i][c]
            if b:
                a = rows_sorted[j][c]
                nr = [a * x - b * y for x, y in zip(rows_sorted[i], rows_sorted[j])]
                g = 0
                for v in nr:
                    g = gcd(g, v)
                if g > 1:
                    nr = [v // g for v in nr]
                rows_sorted[i] = nr
    out = []
    for row, c in zip(rows_sorted, pivots_sorted):
        lead = row[c]
        out.append([Fraction(x, lead) for x in row])
    return out, pivots_sorted


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Subspace of field^n stored as a canonical RREF basis (rows)."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field, ambient_dim, vectors):
        self.field = field
        self.ambient_dim = ambient_dim
        if vectors:
            rows, pivots = _rref_rows(field, [list(v) for v in vectors])
        else:
            rows, pivots = [], []
        self.basis = Matrix(field, rows) if rows else Matrix.zero(field, 0, ambient_dim)
        self.pivots = pivots

    @property
    def dim(self):
        return self.basis.nrows

    def basis_vectors(self):
        return [self.basis.row(i) for i in range(self.dim)]

    def contains(self, vec):
        return self.coordinates(vec) is not None

    def coordinates(self, vec):
        """Coordinates of vec in the RREF basis, or None if not in the span."""
        zero = self.field.zero
        v = [self.field.coerce(x) for x in vec]
        coords = []
        for i, c in enumerate(self.pivots):
            t = v[c]
            coords.append(t)
            if t != zero:
                brow = self.basis.rows[i]
                v = [a - t * b for a, b in zip(v, brow)]
        if any(x != zero for x in v):
            return None
        return coords

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def intersect(self, other):
        return subspace_ops(self, other, "intersect")

    def __add__(self, other):
        return subspace_ops(self, other, "sum")

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim})"


def subspace_ops(U: Subspace, V: Subspace, op: str) -> Subspace:
    assert U.ambient_dim == V.ambient_dim, "ambient dimension mismatch"
    if op == "sum":
        return Subspace(U.field, U.ambient_dim, U.basis_vectors() + V.basis_vectors())
    if op == "intersect":
        # Zassenhaus: row reduce [U U; V 0]; rows with zero left half carry
        # intersection vectors in the right half
        n = U.ambient_dim
        rows = [u + u for u in U.basis_vectors()] + [
            v + [U.field.zero] * n for v in V.basis_vectors()
        ]
        red, _ = _rref_rows(U.field, rows)
        zero = U.field.zero
        inter = [r[n:] for r in red if all(x == zero for x in r[:n])]
        return Subspace(U.field, n, inter)
    raise ValueError(f"unknown op {op!r}")


def full_space(field, n):
    return Subspace(field, n, Matrix.identity(field, n).rows)


def solve(M: Matrix, b) -> list | None:
    """One solution of Mx = b with all free variables zero, or None."""
    f = M.field
    aug = [M.row(i) + [f.coerce(b[i])] for i in range(M.nrows)]
    red, pivots = _rref_rows(f, aug)
    n = M.ncols
    x = [f.zero] * n
    for row, c in zip(red, pivots):
        if c == n:
            return None  # pivot in the constant column: inconsistent
        x[c] = row[n]
    # verify (also kills the case of pivotless inconsistency)
    chk = M.apply(x)
    if any(u != f.coerce(v) for u, v in zip(chk, b)):
        return None
    return x


def kernel(M: Matrix) -> Subspace:
    """Canonical basis of the right null space."""
    f = M.field
    red, pivots = _rref_rows(f, [list(r) for r in M.rows]) if M.nrows else ([], [])
    n = M.ncols
    free = [c for c in range(n) if c not in pivots]
    vecs = []
    for fc in free:
        v = [f.zero] * n
        v[fc] = f.one
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        vecs.append(v)
    return Subspace(f, n, vecs)


def complement_basis(W: Subspace, inside: Subspace | None = None):
    """Vectors extending W's basis to a basis of `inside` (default full space)."""
    f = W.field
    n = W.ambient_dim
    cands = inside.basis_vectors() if inside is not None else Matrix.identity(f, n).rows
    chosen = []
    cur = Subspace(f, n, W.basis_vectors())
    for v in cands:
        if not cur.contains(v):
            chosen.append(list(v))
            cur = Subspace(f, n, cur.basis_vectors() + [list(v)])
    return chosen


# ---------------------------------------------------------------------------
# minimal polynomials and eigen decompositions


def minimal_polynomial(M: Matrix) -> UniPoly:
    """Monic least-degree annihilating polynomial, Krylov per basis vector."""
    assert M.nrows == M.ncols
    f = M.field
    n = M.nrows
    result = UniPoly(f, [f.one])
    for i in range(n):
        e = [f.zero] * n
        e[i] = f.one
        rel = _krylov_relation(M, e)
        result = _lcm_poly(result, rel)
        if result.degree == n:
            break
    return result


def _krylov_relation(M: Matrix, v) -> UniPoly:
    """Monic minimal p with p(M) v = 0."""
    f = M.field
    n = M.nrows
    vecs = [list(v)]
    cur = list(v)
    # reduced echelon bookkeeping: rows with pivot info, plus expression in vecs
    basis = []  # list of (pivot_col, reduced_vector, combo over vecs)
    k = 0
    while True:
        w = list(vecs[-1])
        combo = [f.zero] * (len(vecs) + 1)
        combo[len(vecs) - 1] = f.one
        for (pc, bv, bc) in basis:
            if w[pc] != f.zero:
                t = w[pc]
                w = [a - t * b for a, b in zip(w, bv)]
                combo = [a - t * b for a, b in zip(combo, bc + [f.zero] * (len(combo) - len(bc)))]
        nz = next((j for j, x in enumerate(w) if x != f.zero), None)
        if nz is None:
            # dependence: sum combo[j] M^j v = 0
            return UniPoly(f, combo[: len(vecs)]).monic()
        inv = f.one / w[nz]
        basis.append((nz, [x * inv for x in w], [x * inv for x in combo]))
        cur = M.apply(vecs[-1])
        vecs.append(cur)
        k += 1
        assert k <= n + 1


def _lcm_poly(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.degree <= 0:
        return b.monic()
    if b.degree <= 0:
        return a.monic()
    g = a.gcd(b)
    return (a * b).divmod(g)[0].monic()


def eigenvalues_in_field(M: Matrix):
    """Eigenvalues of M lying in its field, from the minimal polynomial."""
    return roots_in_field(minimal_polynomial(M), M.field)


def simultaneous_eigenspaces(Ms, hints=None):
    """Common eigenspace decomposition of commuting diagonalizable matrices.

    Returns [(weight tuple, Subspace)], spaces independent, dims summing to
    the ambient dimension; raises NotDiagonalizable otherwise.  hints may
    supply a candidate eigenvalue list per matrix (skipping the minimal
    polynomial root search); candidates are verified by the kernel and
    coverage checks, so wrong hints fail loudly rather than corrupting.
    """
    assert Ms, "need at least one matrix"
    f = Ms[0].field
    n = Ms[0].nrows
    for A in Ms:
        for B in Ms:
            assert (A * B - B * A).is_zero(), "matrices must commute"
    spaces = [((), full_space(f, n))]
    for mi, M in enumerate(Ms):
        hint = hints[mi] if hints is not None else None
        nxt = []
        for w, S in spaces:
            B = S.basis_vectors()
            r = len(B)
            # restriction of M to S in the RREF basis: coords via pivot columns
            cols = []
            for v in B:
                img = M.apply(v)
                coords = S.coordinates(img)
                if coords is None:
                    raise NotDiagonalizable("space not invariant (non-commuting input?)")
                cols.append(coords)
            MS = Matrix.from_cols(f, cols)
            lams = hint if hint is not None else eigenvalues_in_field(MS)
            covered = 0
            for lam in lams:
                shifted = Matrix(f, [
                    [MS.rows[i][j] - (lam if i == j else f.zero) for j in range(r)]
                    for i in range(r)
                ])
                ker = kernel(shifted)
                if ker.dim == 0:
                    continue
                lifted = []
                for coeffs in ker.basis_vectors():
                    vec = [f.zero] * n
                    for c, bv in zip(coeffs, B):
                        if c != f.zero:
                            vec = [a + c * b for a, b in zip(vec, bv)]
                    lifted.append(vec)
                covered += len(lifted)
                nxt.append((w + (lam,), Subspace(f, n, lifted)))
            if covered != r:
                raise NotDiagonalizable(
                    f"eigenspaces cover {covered} of {r} dimensions (not split or not diagonalizable)"
                )
        spaces = nxt
    return spaces


# ---------------------------------------------------------------------------
# quadratic forms


class SymQuadric:
    """Projective quadric in P^n given by a symmetric (n+1)x(n+1) matrix."""

    __slots__ = ("n", "A")

    def __init__(self, A: Matrix):
        assert A.is_symmetric(), "quadric matrix must be symmetric"
        self.A = A
        self.n = A.nrows - 1

    def value(self, p):
        v = self.A.apply(p)
        s = self.A.field.zero
        for a, b in zip(p, v):
            s = s + self.A.field.coerce(a) * b
        return s

    def __eq__(self, other):
        return isinstance(other, SymQuadric) and self.A == other.A

    def __hash__(self):
        return hash(self.A)

    def __repr__(self):
        return f"SymQuadric({self.A!r})"


def congruence_diagonalize(q: SymQuadric):
    """Invertible P and diagonal d with P^T A P = diag(d), by symmetric Gauss."""
    f = q.A.field
    n = q.A.nrows
    A = [[x for x in row] for row in q.A.rows]
    P = [[f.one if i == j else f.zero for j in range(n)] for i in range(n)]

    def col_op(dst, src, factor):
        # col_dst += factor * col_src, applied to A on both sides and to P
        for i in range(n):
            A[i][dst] = A[i][dst] + factor * A[i][src]
        for j in range(n):
            A[dst][j] = A[dst][j] + factor * A[src][j]
        for i in range(n):
            P[i][dst] = P[i][dst] + factor * P[i][src]

    def col_swap(i, j):
        for r in range(n):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        A[i], A[j] = A[j], A[i]
        for r in range(n):
            P[r][i], P[r][j] = P[r][j], P[r][i]

    for k in range(n):
        if A[k][k] == f.zero:
            j = next((t for t in range(k + 1, n) if A[t][t] != f.zero), None)
            if j is not None:
                col_swap(k, j)
            else:
                j = next((t for t in range(k + 1, n) if A[k][t] != f.zero), None)
                if j is None:
                    continue  # row/col already zero
                col_op(k, j, f.one)  # makes A[k][k] = 2*A[k][j] != 0 in char 0
        piv = A[k][k]
        for j in range(k + 1, n):
            if A[k][j] != f.zero:
                col_op(j, k, -A[k][j] / piv)
    Pm = Matrix(f, P)
    d = [A[i][i] for i in range(n)]
    return Pm, d
