"""Sparse multivariate polynomials over exact fields, plus homogeneous maps.

Exponent vectors are fixed-length tuples; printing uses graded-lex term order
so output is reproducible.  The ASCII syntax uses variables z0..zN for
implicit equations and s,t / s,t,u / s0,s1,t0,t1 / a,b,c for parameters,
with '*' optional between a coefficient and a monomial.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .fields import QQ, FieldMismatch
from .linalg import Matrix, SymQuadric


class ArityMismatch(Exception):
    pass


class NotQuadratic(Exception):
    pass


class SingularTransform(Exception):
    pass


class MultiPoly:
    """Polynomial in nvars variables; terms map exponent tuples to coefficients."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars, terms=None):
        self.field = field
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            c = field.coerce(c)
            if c == field.zero:
                continue
            exps = tuple(int(e) for e in exps)
            assert len(exps) == nvars and all(e >= 0 for e in exps)
            clean[exps] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero_poly(field, nvars):
        return MultiPoly(field, nvars, {})

    @staticmethod
    def constant(field, nvars, c):
        return MultiPoly(field, nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(field, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return MultiPoly(field, nvars, {tuple(e): field.one})

    # -- ring operations ----------------------------------------------------

    def _same(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars or other.field != self.field:
                raise ArityMismatch("mixed polynomial rings")
            return other
        return MultiPoly.constant(self.field, self.nvars, other)

    def __add__(self, other):
        o = self._same(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, self.field.zero) + c
        return MultiPoly(self.field, self.nvars, t)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __neg__(self):
        return MultiPoly(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = self.field.coerce(other)
            return MultiPoly(self.field, self.nvars, {e: a * c for e, a in self.terms.items()})
        o = self._same(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, self.field.zero) + c1 * c2
        return MultiPoly(self.field, self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = MultiPoly.constant(self.field, self.nvars, self.field.one)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    # -- queries ------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, deg=None):
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if deg is None:
            return len(degs) == 1
        return degs == {deg}

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.field.zero)

    def evaluate(self, point):
        """Evaluate at a point whose entries may live in an extension field."""
        if len(point) != self.nvars:
            raise ArityMismatch("point arity mismatch")
        out = None
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                for _ in range(k):
                    v = v * x
            out = v if out is None else out + v
        return self.field.zero if out is None else out

    def sorted_terms(self):
        """Graded-lex order: higher total degree first, then lex on exponents."""
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    def __repr__(self):
        return f"MultiPoly({poly_to_str(self)})"


def substitute(f: MultiPoly, maps) -> MultiPoly:
    """Exact composition f(maps[0], ..., maps[k-1])."""
    comps = maps.components if isinstance(maps, PolyMap) else list(maps)
    if f.nvars != len(comps):
        raise ArityMismatch(f"f has {f.nvars} variables, map has {len(comps)} components")
    if not comps:
        raise ArityMismatch("empty map")
    nv = comps[0].nvars
    out = MultiPoly.zero_poly(f.field, nv)
    # cache powers of each component
    pow_cache = [{0: MultiPoly.constant(f.field, nv, f.field.one)} for _ in comps]

    def power(i, k):
        cache = pow_cache[i]
        if k not in cache:
            cache[k] = power(i, k - 1) * comps[i]
        return cache[k]

    for e, c in f.terms.items():
        term = MultiPoly.constant(f.field, nv, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


class PolyMap:
    """Tuple of homogeneous polynomials of one shared degree (a projective map)."""

    __slots__ = ("source_vars", "degree", "components")

    def __init__(self, components):
        comps = list(components)
        assert comps, "empty map"
        nv = comps[0].nvars
        degs = {c.total_degree() for c in comps if not c.is_zero()}
        if not degs:
            raise ValueError("all components identically zero")
        if len(degs) != 1 or any(not c.is_homogeneous() for c in comps):
            raise ValueError("components must be homogeneous of one shared degree")
        assert all(c.nvars == nv for c in comps)
        self.components = comps
        self.source_vars = nv
        self.degree = degs.pop()

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def evaluate(self, point):
        return [c.evaluate(point) for c in self.components]

    def __eq__(self, other):
        return isinstance(other, PolyMap) and self.components == other.components

    def __repr__(self):
        return f"PolyMap({len(self.components)} comps, deg {self.degree})"


def matrix_times_map(M: Matrix, pm: PolyMap) -> PolyMap:
    """Compose a linear map with a polynomial map: components M * pm."""
    assert M.ncols == len(pm.components)
    field = pm.components[0].field
    nv = pm.source_vars
    out = []
    for i in range(M.nrows):
        acc = MultiPoly.zero_poly(field, nv)
        for j, comp in enumerate(pm.components):
            c = M[i, j]
            if c != field.zero:
                acc = acc + comp * c
        out.append(acc)
    return PolyMap(out)


def quadric_to_matrix(f: MultiPoly) -> SymQuadric:
    """Symmetric matrix of a homogeneous quadratic, off-diagonals split evenly."""
    if f.is_zero() or not f.is_homogeneous(2):
        raise NotQuadratic("polynomial is not a nonzero homogeneous quadratic")
    n = f.nvars
    A = [[f.field.zero] * n for _ in range(n)]
    for e, c in f.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            A[i][i] = c
        else:
            half = c / 2
            A[i][j] = half
            A[j][i] = half
    return SymQuadric(Matrix(f.field, A))


def matrix_to_quadric(q: SymQuadric, field=None) -> MultiPoly:
    A = q.A
    f = field or A.field
    n = A.nrows
    terms = {}
    for i in range(n):
        for j in range(i, n):
            c = A[i, j] if i == j else A[i, j] + A[j, i]
            if c != A.field.zero:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = c
    return MultiPoly(f, n, terms)


def linear_change(f: MultiPoly, T: Matrix) -> MultiPoly:
    """f composed with z -> T z."""
    if T.nrows != T.ncols or T.nrows != f.nvars:
        raise ArityMismatch("transform size mismatch")
    if not T.is_invertible():
        raise SingularTransform("transform is singular")
    nv = f.nvars
    comps = []
    for i in range(nv):
        terms = {}
        for j in range(nv):
            if T[i, j] != f.field.zero:
                e = [0] * nv
                e[j] = 1
                terms[tuple(e)] = T[i, j]
        comps.append(MultiPoly(f.field, nv, terms))
    return substitute(f, comps)


# ---------------------------------------------------------------------------
# text format

_TOKEN = re.compile(r"\s*([A-Za-z]+\d*|\d+/\d+|\d+|\^|\*|\+|-|\(|\))")


def parse_multipoly(text: str, varnames, field=QQ) -> MultiPoly:
    """Parse a polynomial in the named variables (sum of monomial terms)."""
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"bad character at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    var_index = {v: i for i, v in enumerate(varnames)}
    nv = len(varnames)
    out = MultiPoly.zero_poly(field, nv)
    i = 0
    n = len(tokens)
    first = True
    while i < n:
        sign = 1
        saw_sign = False
        while i < n and tokens[i] in "+-":
            saw_sign = True
            if tokens[i] == "-":
                sign = -sign
            i += 1
        if not first and not saw_sign:
            raise ValueError("missing +/- between terms")
        if i >= n:
            raise ValueError("dangling sign")
        coef = Fraction(sign)
        exps = [0] * nv
        expect_factor = True
        while i < n:
            t = tokens[i]
            if t in "+-":
                break
            if t == "*":
                i += 1
                expect_factor = True
                continue
            if not expect_factor and t not in ("^",):
                # juxtaposition: '2z0' or 'z0z1'
                pass
            if re.fullmatch(r"\d+(/\d+)?", t):
                coef *= Fraction(t)
                i += 1
            elif t in var_index:
                j = var_index[t]
                k = 1
                i += 1
                if i < n and tokens[i] == "^":
                    i += 1
                    if i >= n or not tokens[i].isdigit():
                        raise ValueError("bad exponent")
                    k = int(tokens[i])
                    i += 1
                exps[j] += k
            else:
                raise ValueError(f"unknown token {t!r} (variables: {varnames})")
            expect_factor = False
        out = out + MultiPoly(field, nv, {tuple(exps): coef})
        first = False
    return out


def z_varnames(n):
    return [f"z{i}" for i in range(n)]


def detect_z_arity(lines):
    """Ambient arity from the highest z-index appearing in the input lines."""
    mx = -1
    for line in lines:
        for m in re.finditer(r"z(\d+)", line):
            mx = max(mx, int(m.group(1)))
    if mx < 0:
        raise ValueError("no z-variables found")
    return mx + 1


def poly_to_str(f: MultiPoly, varnames=None) -> str:
    if f.is_zero():
        return "0"
    names = varnames or z_varnames(f.nvars)
    parts = []
    for e, c in f.sorted_terms():
        mon = "*".join(
            names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
        )
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        if mon and mag == f.field.one:
            s = mon
        elif mon:
            s = f"{mag}*{mon}"
        else:
            s = str(mag)
        parts.append(("-" if neg else "+", s))
    sign0, s0 = parts[0]
    out = ("-" if sign0 == "-" else "") + s0
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out
