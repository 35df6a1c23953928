"""Trivialization of central simple algebras and the Lie-to-associative bridge.

The enveloping-algebra construction turns a twist of sl_n (n = 2, 3) into an
n^2-dimensional associative algebra; writing that algebra cyclically reduces
splitting to a norm equation.  Quadratic norm equations over Q are decided by
the conic machinery (Legendre); cubic and relative quadratic ones are
semi-decided by a bounded-height search, so the outcome lattice is
Split / NotSplit (certified, degree 2 over Q only) / Unknown.

Every element produced along the way is screened: a singular element or a
reducible minimal polynomial yields a zero divisor immediately, which
short-circuits straight to a minimal left ideal (the ZeroDivisorFound
exception carries the witness).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .fields import (
    QQ,
    NumberField,
    QuadExt,
    RationalField,
    UniPoly,
    factor_rational_poly,
    flatten_tower,
    nf_create,
    roots_in_field,
    sqrt_in_field,
)
from .linalg import Matrix, Subspace, kernel, minimal_polynomial, solve
from .lie import (
    CartanData,
    LieAlgebra,
    UnsupportedType,
    _SpanSolver,
    canonical_chevalley_basis,
    cartan_subalgebra,
    root_space_decomposition,
    sl2_standard_basis,
    sl3_standard_basis,
)
from .assoc import (
    AElement,
    AssocAlgebra,
    AlgebraIso,
    LeftIdeal,
    algebra_from_matrix_span,
    algebra_from_subspace,
    centralizer,
    first_noncentral,
    is_zero_divisor,
    iso_from_left_ideal,
    left_ideal_from,
    left_mul_map,
    matrix_algebra,
    matrix_closure,
    min_poly_element,
    quotient_by_nilpotent_ideal,
    right_mul_map,
)

DEFAULT_HEIGHT_CAP = 1 << 10
DEFAULT_SEARCH_BUDGET = 300_000


class ZeroDivisorFound(Exception):
    """Short-circuit: a zero divisor appeared during the computation."""

    def __init__(self, witness: AElement):
        self.witness = witness
        super().__init__("zero divisor found")


class SearchExhausted(Exception):
    pass


class DimensionMismatch(Exception):
    def __init__(self, found, expected):
        self.found = found
        self.expected = expected
        super().__init__(f"enveloping algebra has dimension {found}, expected {expected}")


class TrivializationResult:
    """verdict in {'split', 'not_split', 'unknown'}; iso set iff split."""

    def __init__(self, verdict, iso=None, detail=""):
        assert verdict in ("split", "not_split", "unknown")
        assert (iso is not None) == (verdict == "split")
        self.verdict = verdict
        self.iso = iso
        self.detail = detail

    def __repr__(self):
        return f"TrivializationResult({self.verdict}{': ' + self.detail if self.detail else ''})"


class CyclicPresentation:
    """Cyclic algebra data: basis {c^i u^j}, u c = sigma(c) u, u^n = gamma."""

    def __init__(self, algebra: AssocAlgebra, n, c: AElement, u: AElement, gamma, mu_c: UniPoly):
        self.algebra = algebra
        self.n = n
        self.c = c
        self.u = u
        self.gamma = gamma
        self.mu_c = mu_c
        f = algebra.field
        assert gamma != f.zero
        # u^n = gamma * 1
        assert (u ** n) == algebra.scalar(gamma), "u^n != gamma"
        # u c u^-1 is a polynomial in c (the Galois conjugate)
        uinv = u.inverse()
        assert uinv is not None
        w = u * c * uinv
        pows = _power_span(c, n)
        coords = pows.solve(w.coords)
        assert coords is not None, "u c u^{-1} is not in k(c)"
        self.sigma_c_poly = UniPoly(f, coords)  # sigma(c) = poly(c)
        assert _lift_field_poly(mu_c, f)(w).is_zero(), "conjugate is not a root of mu_c"
        assert not (w == c), "sigma is the identity"
        # {c^i u^j} has full rank
        vecs = []
        ci = algebra.one_element()
        for i in range(n):
            uj = algebra.one_element()
            for j in range(n):
                vecs.append((ci * uj).coords)
                uj = uj * u
            ci = ci * c
        assert Subspace(f, algebra.dim, vecs).dim == n * n, "c^i u^j not a basis"

    def sigma_of_poly(self, s_coords):
        """Apply sigma to s = sum s_i c^i, returning the element of the algebra."""
        A = self.algebra
        sig_c = self.sigma_c_poly(self.c)
        out = A.zero_element()
        p = A.one_element()
        for coef in s_coords:
            out = out + p * coef
            p = p * sig_c
        return out

    def element_of_subfield(self, s_coords):
        A = self.algebra
        out = A.zero_element()
        p = A.one_element()
        for coef in s_coords:
            out = out + p * coef
            p = p * self.c
        return out


def _power_span(c: AElement, n) -> _SpanSolver:
    A = c.algebra
    rows = []
    p = A.one_element()
    for _ in range(n):
        rows.append(p.coords)
        p = p * c
    return _SpanSolver(A.field, rows)


def _lift_field_poly(p: UniPoly, field):
    if p.field == field:
        return p
    return UniPoly(field, [field.coerce(c) for c in p.coeffs])


# ---------------------------------------------------------------------------
# screening


def _poly_reducible_factor(mp: UniPoly):
    """A proper monic factor of mp over its field, or None if irreducible."""
    f = mp.field
    if mp.degree <= 1:
        return None
    if isinstance(f, RationalField):
        fac = factor_rational_poly(mp)
        if len(fac) > 1:
            return fac[0]
        return None
    rts = roots_in_field(mp, f) if mp.degree <= 3 else []
    if rts:
        return UniPoly(f, [-rts[0], f.one])
    if mp.degree == 2:
        return None
    if mp.degree == 3:
        return None
    raise UnsupportedType(f"reducibility test for degree {mp.degree} over {f}")


def screen(x: AElement) -> UniPoly:
    """Minimal polynomial of x; raises ZeroDivisorFound on any degeneracy."""
    if not x.is_zero() and is_zero_divisor(x):
        raise ZeroDivisorFound(x)
    mp = min_poly_element(x)
    fac = _poly_reducible_factor(mp)
    if fac is not None:
        w = fac(x)
        if w.is_zero():  # fac is itself an annihilator: complement divides too
            w = mp.divmod(fac)[0](x)
        assert not w.is_zero(), "minimal polynomial inconsistency"
        raise ZeroDivisorFound(w)
    return mp


def _primitive_rescale(a: AElement) -> AElement:
    """Scale an element by a rational so its coordinate data is coprime integral."""
    from math import gcd

    comps = []
    for c in a.coords:
        if isinstance(c, Fraction):
            comps.append(c)
        else:
            try:
                comps.extend(c.coords)
            except AttributeError:
                return a
    den = 1
    for c in comps:
        den = den * (c.denominator // gcd(den, c.denominator))
    ints = [int(c * den) for c in comps]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    g = max(g, 1)
    scale = Fraction(den, g)
    return a.algebra.element([c * scale for c in a.coords])


def _frac_bits(x: Fraction) -> int:
    return max(abs(x.numerator).bit_length(), x.denominator.bit_length())


def _scalar_bits(x) -> int:
    if isinstance(x, Fraction):
        return _frac_bits(x)
    return max(_frac_bits(c) for c in x.coords)


def _best_kernel_generator(A: AssocAlgebra, ker, n, box=1):
    """Smallest-gamma invertible element of the intertwiner kernel.

    Any nonzero kernel element u satisfies u c u^-1 = sigma(c) and u^n is
    central, so all are admissible principal generators; shopping over small
    combinations keeps the norm-equation target small.  A nonzero singular
    combination is a zero divisor and short-circuits.
    """
    f = A.field
    basis = [A.element(v) for v in ker.basis_vectors()]
    best = None
    for vec in itertools.product(range(-box, box + 1), repeat=len(basis)):
        if all(v == 0 for v in vec):
            continue
        u = A.zero_element()
        for c, b in zip(vec, basis):
            if c:
                u = u + b * c
        u = _primitive_rescale(u)
        if u.inverse() is None:
            raise ZeroDivisorFound(u)
        ok, gamma = (u ** n).is_rational_multiple_of_one()
        if not ok:
            continue
        key = _scalar_bits(gamma)
        if best is None or key < best[0]:
            best = (key, u, gamma)
    assert best is not None, "no invertible principal generator in the kernel"
    return best[1], best[2]


def _pool_zero_divisor(A: AssocAlgebra, limit=1200, extra=None):
    """First zero divisor among small combinations of basis/extra elements.

    The paper screens every element that pops up; scrambled split algebras
    very often expose a singular small combination, which skips the whole
    cyclic/norm machinery.  extra elements (e.g. the embedded Lie algebra
    generators) are screened with the same combination pattern.
    """
    pools = [ [A.basis_element(i) for i in range(A.dim)] ]
    if extra:
        pools.insert(0, list(extra))
    count = 0
    for pool in pools:
        n = len(pool)
        for x in pool:
            if not x.is_zero() and is_zero_divisor(x):
                return x
            count += 1
            if count >= limit:
                return None
        for i in range(n):
            for j in range(i + 1, n):
                for x in (pool[i] + pool[j], pool[i] - pool[j]):
                    if not x.is_zero() and is_zero_divisor(x):
                        return x
                    count += 1
                    if count >= limit:
                        return None
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    for x in (pool[i] + pool[j] + pool[k],
                              pool[i] + pool[j] - pool[k],
                              pool[i] - pool[j] + pool[k],
                              pool[i] - pool[j] - pool[k]):
                        if not x.is_zero() and is_zero_divisor(x):
                            return x
                        count += 1
                        if count >= limit:
                            return None
    return None


def _element_pool(A: AssocAlgebra, max_norm=3, limit=20000):
    """Deterministic candidate elements: basis, pair sums, small combos."""
    for i in range(A.dim):
        yield A.basis_element(i)
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            yield A.basis_element(i) + A.basis_element(j)
    count = 0
    for B in range(1, max_norm + 1):
        for vec in itertools.product(range(-B, B + 1), repeat=A.dim):
            if max(abs(c) for c in vec) != B:
                continue
            yield A.element(list(vec))
            count += 1
            if count >= limit:
                return


# ---------------------------------------------------------------------------
# ideals from zero divisors (degrees 2, 3)


def ideal_from_zero_divisor(A: AssocAlgebra, d: AElement, n: int) -> LeftIdeal:
    """A minimal left ideal from a zero divisor; complete for degree <= 3."""
    assert is_zero_divisor(d)
    R = right_mul_map(d)
    im_cols = [R.col(j) for j in range(A.dim)]
    im = Subspace(A.field, A.dim, im_cols)
    ker = kernel(R)
    if im.dim == n:
        return LeftIdeal(A, im)
    if ker.dim == n:
        return LeftIdeal(A, ker)
    inter = ker.intersect(im)
    if inter.dim == n:
        return LeftIdeal(A, inter)
    if n == 4:
        return minimal_ideal_deg4(A, d)
    raise AssertionError(f"no {n}-dim ideal from zero divisor (dims {im.dim}/{ker.dim})")


# ---------------------------------------------------------------------------
# norm equations


def _compiled_norm_form(K: NumberField):
    """Integer-coefficient norm form N(a0 + a1 c + ...) as a fast callable."""
    from .polys import MultiPoly

    d = K.degree
    # symbolic coordinates: entries of the multiplication matrix are linear
    polys = [[MultiPoly(QQ, d, {}) for _ in range(d)] for _ in range(d)]
    for j in range(d):
        # column j of mul matrix = coords of x * c^j, x = sum a_i c^i
        for i in range(d):
            # contribution of a_i: coords of c^(i+j) reduced
            e = [0] * d
            e[i] = 1
            red = _power_coords(K, i + j)
            for t in range(d):
                if red[t] != 0:
                    polys[t][j] = polys[t][j] + MultiPoly(QQ, d, {tuple(e): red[t]})
    det = _det_poly(polys)
    # clear denominators: returns (f, D) with f integer-valued and f = D * norm
    denom = 1
    for c in det.terms.values():
        denom = denom * (c.denominator // _igcd(denom, c.denominator))
    int_det = det * Fraction(denom)
    names = [f"a{i}" for i in range(d)]
    src = _poly_source(int_det, names)
    code = compile(f"lambda {', '.join(names)}: ({src})", "<normform>", "eval")
    return eval(code), denom  # noqa: S307 - source generated from our own polynomial


def _igcd(a, b):
    from math import gcd

    return gcd(a, b)


def _power_coords(K: NumberField, k):
    x = K.one
    for _ in range(k):
        x = x * K.gen
    return list(x.coords)


def _det_poly(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    from .polys import MultiPoly

    total = MultiPoly(QQ, m[0][0].nvars, {})
    for j in range(n):
        sub = [[m[i][t] for t in range(n) if t != j] for i in range(1, n)]
        term = m[0][j] * _det_poly(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


def _poly_source(p, names):
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        assert c.denominator == 1
        factors = [str(c.numerator)]
        for i, k in enumerate(e):
            if k == 1:
                factors.append(names[i])
            elif k > 1:
                factors.append(f"{names[i]}**{k}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def _height_rounds(cap):
    h = 1
    while h <= cap:
        yield h
        h *= 2


def norm_equation_cubic(K: NumberField, target: Fraction,
                        height_cap=DEFAULT_HEIGHT_CAP,
                        budget=DEFAULT_SEARCH_BUDGET):
    """Search s in K with N(s) = target; bounded height and work budget.

    Candidates s = (a0 + a1 c + a2 c^2)/q are enumerated by doubling height
    rounds H = max(|a_i|, q), in deterministic order.  None means exhausted
    (never "no solution exists").
    """
    assert K.degree == 3
    if max(_frac_bits(c) for c in K.min_poly.coeffs) > 1500:
        return None  # hopeless presentation; searching would be theater
    norm, denom = _compiled_norm_form(K)  # norm(v) = denom * N(v), integer-valued
    tn, td = target.numerator, target.denominator
    count = 0
    for H in _height_rounds(height_cap):
        prev = H // 2
        for q in range(1, H + 1):
            q3 = q * q * q
            for a0 in range(-H, H + 1):
                for a1 in range(-H, H + 1):
                    for a2 in range(-H, H + 1):
                        if max(abs(a0), abs(a1), abs(a2), q) <= prev:
                            continue
                        count += 1
                        if count > budget:
                            return None
                        if norm(a0, a1, a2) * td == tn * q3 * denom:
                            s = K.element([Fraction(a0, q), Fraction(a1, q), Fraction(a2, q)])
                            from .fields import norm_and_trace

                            assert norm_and_trace(s)[0] == target
                            return s
    return None


def norm_equation_rel_quadratic(Kb, b, e, target,
                                height_cap=DEFAULT_HEIGHT_CAP,
                                budget=DEFAULT_SEARCH_BUDGET):
    """Solve x^2 - b x y + e y^2 = target over the base field Kb.

    This is the norm form of Kb(c)/Kb for mu_c = X^2 + bX + e.  y is
    enumerated by bounded height; x comes from the quadratic formula with an
    exact square root in Kb.  Returns (x, y) or None (exhausted).
    """
    zero = Kb.zero

    def try_y(y):
        # x^2 - (b y) x + (e y^2 - target) = 0
        disc = (b * b - 4 * e) * y * y + 4 * target
        r = sqrt_in_field(disc)
        if r is None:
            return None
        for sgn in (1, -1):
            x = (b * y + (r if sgn > 0 else -r)) / 2
            if x * x - b * x * y + e * y * y == target:
                return (x, y)
        return None

    got = try_y(zero)
    if got:
        return got
    if isinstance(Kb, RationalField):
        coords = 1
    else:
        coords = Kb.degree
    count = 0
    for H in _height_rounds(height_cap):
        prev = H // 2
        for q in range(1, H + 1):
            for vec in itertools.product(range(-H, H + 1), repeat=coords):
                if max(max(abs(v) for v in vec), q) <= prev:
                    continue
                if all(v == 0 for v in vec):
                    continue
                count += 1
                if count > budget:
                    return None
                if coords == 1:
                    y = Kb.coerce(Fraction(vec[0], q))
                else:
                    y = Kb.element([Fraction(v, q) for v in vec])
                got = try_y(y)
                if got:
                    return got
    return None


# ---------------------------------------------------------------------------
# gamma reduction (shrink the norm-equation target)


def _cube_free_part(x: Fraction, limit=10**7):
    """x = x0 * t^3 with t rational; returns (x0, t).  Skips huge factorizations."""
    from .dioph import FactorizationLimit, factor_integer

    if _frac_bits(x) > 1200:
        return x, Fraction(1)  # opportunistic only; factorization hopeless here

    def cube_split(n):
        if abs(n) <= 1:
            return n, 1
        try:
            primes = factor_integer(n, trial_bound=10**4, rho_budget=50_000)
        except FactorizationLimit:
            return n, 1
        from collections import Counter

        n0, t = 1 if n > 0 else -1, 1
        for p, k in Counter(primes).items():
            n0 *= p ** (k % 3)
            t *= p ** (k // 3)
        return n0, t

    num0, tn = cube_split(x.numerator)
    den0, td = cube_split(x.denominator)
    return Fraction(num0, den0), Fraction(tn, td)


def _reduce_cyclic_generator(pres: CyclicPresentation):
    """Replace c by a small-height generator of the same subfield.

    u c'' u^{-1} = sigma(c'') holds for every generator c'' of k(c), so the
    presentation survives; a short minimal polynomial keeps the norm form and
    the height search well-conditioned.
    """
    A = pres.algebra

    def complexity(mu: UniPoly):
        m = 1
        for co in mu.coeffs:
            m = max(m, abs(co.numerator), co.denominator)
        return m

    best = (complexity(pres.mu_c), pres.c, pres.mu_c)
    box = 2 if max(_frac_bits(c) for c in pres.mu_c.coeffs) <= 200 else 1
    csq = pres.c * pres.c
    for (a, b, d) in itertools.product(range(-box, box + 1), repeat=3):
        if b == 0 and d == 0:
            continue
        cand = A.scalar(a) + pres.c * b + csq * d
        mu = min_poly_element(cand)
        if mu.degree != pres.n:
            continue
        if complexity(mu) < best[0]:
            best = (complexity(mu), cand, mu)
    if best[1] is pres.c:
        return pres
    return CyclicPresentation(A, pres.n, best[1], pres.u, pres.gamma, best[2])


def _norm_table_cubic(K: NumberField, box=None):
    """|N(w)| -> (w coords, N(w)) over an integer box, smallest norms kept.

    The box shrinks as the field's defining coefficients grow, keeping the
    table build time bounded on badly presented fields.
    """
    bits = max(_frac_bits(c) for c in K.min_poly.coeffs)
    if bits > 1500:
        return {}
    if box is None:
        box = 24 if bits <= 96 else (10 if bits <= 256 else 3)
    norm, denom = _compiled_norm_form(K)
    table = {}
    rng = range(-box, box + 1)
    for a0 in rng:
        for a1 in rng:
            for a2 in rng:
                if a0 == 0 and a1 == 0 and a2 == 0:
                    continue
                nv = Fraction(norm(a0, a1, a2), denom)
                if nv == 0:
                    continue
                key = (abs(nv.numerator), nv.denominator)
                if key not in table:
                    table[key] = ((a0, a1, a2), nv)
    return table


def _reduce_gamma_cubic(pres: CyclicPresentation, K: NumberField):
    """Replace u by w*u (w in k(c)) to shrink |gamma|; returns updated pres."""
    A = pres.algebra
    gamma = pres.gamma
    u = pres.u
    changed = False

    def strip_cubes(u, gamma):
        g0, t = _cube_free_part(gamma)
        if t != 1:
            return u * (Fraction(1) / t), g0, True
        return u, gamma, False

    u, gamma, ch = strip_cubes(u, gamma)
    changed = changed or ch

    def complexity(x: Fraction):
        return abs(x.numerator) * x.denominator

    if complexity(gamma) > 1:
        table = list(_norm_table_cubic(K).values())
        improved = True
        while improved and complexity(gamma) > 1:
            improved = False
            best = (complexity(gamma), None, gamma, 1)
            for (wvec, nw) in table:
                for direction in (1, -1):
                    cand = gamma * nw if direction > 0 else gamma / nw
                    if complexity(cand) < best[0]:
                        best = (complexity(cand), wvec, cand, direction)
            if best[1] is not None:
                wvec, direction = best[1], best[3]
                w = K.element(list(wvec))
                if direction < 0:
                    w = w.inverse()
                w_elt = pres.element_of_subfield(w.coords)
                u = w_elt * u
                gamma = best[2]
                changed = True
                improved = True
                u, gamma, _ = strip_cubes(u, gamma)
    if changed:
        return CyclicPresentation(A, pres.n, pres.c, u, gamma, pres.mu_c)
    return pres


# ---------------------------------------------------------------------------
# cyclic algebra construction (test fixtures and CLI examples)


def cyclic_algebra(K: NumberField, sigma, gamma) -> AssocAlgebra:
    """The cyclic algebra (K/Q, sigma, gamma) on the basis c^i u^j.

    Basis index i + n*j; multiplication from u c = sigma(c) u and u^n = gamma.
    """
    n = K.degree
    gamma = Fraction(gamma)
    assert gamma != 0
    dim = n * n

    def mul_basis(i1, j1, i2, j2):
        # (c^i1 u^j1)(c^i2 u^j2) = c^i1 sigma^j1(c^i2) u^(j1+j2)
        x = K.gen ** i2
        for _ in range(j1):
            x = sigma(x)
        elt = (K.gen ** i1) * x
        j = j1 + j2
        scale = Fraction(1)
        if j >= n:
            j -= n
            scale = gamma
        vec = [Fraction(0)] * dim
        for t in range(n):
            vec[t + n * j] = elt.coords[t] * scale
        return vec

    sc = []
    for a in range(dim):
        i1, j1 = a % n, a // n
        row = []
        for b in range(dim):
            i2, j2 = b % n, b // n
            row.append(mul_basis(i1, j1, i2, j2))
        sc.append(row)
    one = [Fraction(0)] * dim
    one[0] = Fraction(1)
    return AssocAlgebra(QQ, sc, one)


# ---------------------------------------------------------------------------
# degree 2


def _deg2_cyclic_data(A: AssocAlgebra):
    """(c, mu, sigma_c, u, gamma) for a 4-dim central algebra; screens throughout."""
    c = first_noncentral(A)
    mu = screen(c)
    assert mu.degree == 2, f"noncentral element has minimal degree {mu.degree}"
    f = A.field
    b1, b0 = mu[1], mu[0]
    sig_c = A.scalar(-b1) - c
    D = right_mul_map(c) - left_mul_map(sig_c)
    ker = kernel(D)
    assert ker.dim > 0, "no principal generator (conjugates not similar?)"
    u, gamma = _best_kernel_generator(A, ker, 2)
    return c, mu, u, gamma


def _deg2_zero_divisor(A: AssocAlgebra, height_cap=DEFAULT_HEIGHT_CAP,
                       budget=DEFAULT_SEARCH_BUDGET):
    """A zero divisor in a split 4-dim CSA.

    Over Q the norm equation is decided by the conic solver: the return is
    either a zero divisor or None meaning *certified* not split.  Over a
    number field the bounded search may also raise SearchExhausted (unknown).
    """
    f = A.field
    d0 = _pool_zero_divisor(A)
    if d0 is not None:
        return d0
    try:
        c, mu, u, gamma = _deg2_cyclic_data(A)
    except ZeroDivisorFound as zd:
        return zd.witness
    b1, b0 = mu[1], mu[0]
    r = sqrt_in_field(gamma)
    if r is not None:
        uu = u * (f.one / r)
        assert uu * uu == A.one_element()
        w = uu + A.one_element()
        assert is_zero_divisor(w)
        return w
    if isinstance(f, RationalField):
        # gamma (x^2 - b1 x y + b0 y^2) = z^2 as a ternary conic
        from .dioph import conic_point
        from .linalg import SymQuadric

        Aq = Matrix(QQ, [
            [gamma, -gamma * b1 / 2, 0],
            [-gamma * b1 / 2, gamma * b0, 0],
            [0, 0, -1],
        ])
        pt = conic_point(SymQuadric(Aq))
        if pt is None:
            return None  # certified by Legendre
        x, y, z = pt.coords
        assert z != 0, "projective point cannot have z = 0 on this conic"
        s = (A.scalar(Fraction(x, z)) + c * Fraction(y, z))
    else:
        # mu = X^2 + b1 X + b0 gives the norm form x^2 - b1 x y + b0 y^2
        got = norm_equation_rel_quadratic(f, b1, b0, f.one / gamma,
                                          height_cap, budget)
        if got is None:
            raise SearchExhausted("relative quadratic norm search exhausted")
        x, y = got
        s = A.scalar(x) + c * y
    su = s * u
    assert su * su == A.one_element(), "s u is not an involution"
    w = su + A.one_element()
    assert is_zero_divisor(w)
    return w


def trivialize_deg2(A: AssocAlgebra, height_cap=DEFAULT_HEIGHT_CAP,
                    budget=DEFAULT_SEARCH_BUDGET) -> TrivializationResult:
    assert A.dim == 4 and A.center().dim == 1
    try:
        d = _deg2_zero_divisor(A, height_cap, budget)
    except SearchExhausted:
        return TrivializationResult("unknown", detail="norm search exhausted")
    if d is None:
        return TrivializationResult("not_split", detail="Legendre: conic has no rational point")
    L = ideal_from_zero_divisor(A, d, 2)
    return TrivializationResult("split", iso_from_left_ideal(A, L))


# ---------------------------------------------------------------------------
# polynomial arithmetic in A[xi] (coefficients on the left, right division)


def _poly_div_right(coeffs, a: AElement):
    """p(xi) = q(xi)(xi - a) + r with r = sum p_i a^i; returns (q, r)."""
    A = a.algebra
    n = len(coeffs) - 1
    q = [A.zero_element()] * n
    q[n - 1] = coeffs[n]
    for i in range(n - 1, 0, -1):
        q[i - 1] = coeffs[i] + q[i] * a
    r = coeffs[0] + q[0] * a
    return q, r


def _poly_eval_right(coeffs, b: AElement):
    A = b.algebra
    out = A.zero_element()
    p = A.one_element()
    for c in coeffs:
        out = out + c * p
        p = p * b
    return out


def _rational_poly_to_elements(p: UniPoly, A: AssocAlgebra):
    return [A.scalar(c) for c in p.coeffs]


# ---------------------------------------------------------------------------
# Wedderburn factorization and degree 3


def wedderburn_factor_step(a: AElement, m_coeffs=None):
    """A conjugate a' of a that is a root of m (mu_a = m(xi)(xi - a)).

    Searches the deterministic element pool for y with [y, a] invertible;
    returns (a_prime, commutator_witness).  Any singular nonzero intermediate
    raises ZeroDivisorFound.
    """
    A = a.algebra
    if m_coeffs is None:
        mu = min_poly_element(a)
        m_coeffs, rem = _poly_div_right(_rational_poly_to_elements(mu, A), a)
        assert rem.is_zero()
    for y in _element_pool(A):
        z = _primitive_rescale(y.commutator(a))
        if z.is_zero():
            continue
        zinv = z.inverse()
        if zinv is None:
            raise ZeroDivisorFound(z)
        a2 = z * a * zinv
        if _poly_eval_right(m_coeffs, a2).is_zero():
            return a2, z
    raise SearchExhausted("no suitable y for the Wedderburn step")


def cubic_root_element(a: AElement) -> AElement:
    """c = [a, a'] with c^3 central and c invertible (CubicRoot)."""
    A = a.algebra
    mu = min_poly_element(a)
    assert mu.degree == 3
    m_coeffs, rem = _poly_div_right(_rational_poly_to_elements(mu, A), a)
    assert rem.is_zero()
    for y in _element_pool(A):
        z = _primitive_rescale(y.commutator(a))
        if z.is_zero():
            continue
        zinv = z.inverse()
        if zinv is None:
            raise ZeroDivisorFound(z)
        a2 = z * a * zinv
        if not _poly_eval_right(m_coeffs, a2).is_zero():
            continue
        c = _primitive_rescale(a.commutator(a2))
        if c.is_zero():
            continue  # a would be cyclic; try another conjugate
        cinv = c.inverse()
        if cinv is None:
            raise ZeroDivisorFound(c)
        ok, _ = (c ** 3).is_rational_multiple_of_one()
        assert ok, "c^3 is not central"
        return c
    raise SearchExhausted("CubicRoot found no suitable commutator")


def _is_cyclic_element(x: AElement, mu: UniPoly):
    """If k(x) is a cyclic cubic field, return (K, other_root_poly); else None."""
    try:
        K = nf_create(mu)
    except Exception:
        return None
    rts = roots_in_field(_lift_nf(mu, K), K)
    others = [r for r in rts if not r == K.gen]
    if not others:
        return None
    return K, others[0]


def _lift_nf(p: UniPoly, K: NumberField):
    return UniPoly(K, [K.element([c]) for c in p.coeffs])


def cyclic_generators_deg3(A: AssocAlgebra, preferred=None) -> CyclicPresentation:
    """Cyclic element and principal generator of a degree-3 CSA over Q.

    Follows GeneratorsOfCyclicAlgebra: a cyclic noncentral element is used
    directly; otherwise two CubicRoot applications produce u' u and u.
    Raises ZeroDivisorFound whenever the computation trips over one.
    preferred elements (e.g. the image of a Cartan element, whose subfield is
    the Cartan splitting data) are tried first: a short minimal polynomial
    there keeps the norm equation well-conditioned.
    """
    candidates = [_primitive_rescale(p) for p in (preferred or [])]
    candidates.append(first_noncentral(A))
    best = None
    for cand in candidates:
        if cand.is_zero():
            continue
        rat, _ = cand.is_rational_multiple_of_one()
        if rat:
            continue
        mu_cand = screen(cand)
        if mu_cand.degree != 3:
            continue
        size = max(_frac_bits(co) for co in mu_cand.coeffs)
        if best is None or size < best[0]:
            best = (size, cand, mu_cand)
    assert best is not None, "no usable noncentral element"
    _, x, mu = best
    assert mu.degree == 3, f"expected cubic minimal polynomial, got {mu.degree}"
    cyc = _is_cyclic_element(x, mu)
    if cyc is not None:
        K, other = cyc
        c = x
        sig_c = _eval_in_algebra(other.coords, c)
        # u c = sigma(c) u
        D = right_mul_map(c) - left_mul_map(sig_c)
        ker = kernel(D)
        assert ker.dim > 0
        u, gamma = _best_kernel_generator(A, ker, 3)
        return CyclicPresentation(A, 3, c, u, gamma, mu)
    ok, _ = (x ** 3).is_rational_multiple_of_one()
    if ok:
        u1 = x
    else:
        u1 = cubic_root_element(x)
    u1 = _primitive_rescale(u1)
    mu1 = screen(u1)
    assert mu1.degree == 3
    u = _primitive_rescale(cubic_root_element(u1))
    screen(u)
    c = _primitive_rescale(u1 * u)
    mu_c = screen(c)
    assert mu_c.degree == 3, "cyclic element has wrong degree"
    ok, gamma = (u ** 3).is_rational_multiple_of_one()
    assert ok
    return CyclicPresentation(A, 3, c, u, gamma, mu_c)


def _eval_in_algebra(coords, c: AElement):
    A = c.algebra
    out = A.zero_element()
    p = A.one_element()
    for t in coords:
        out = out + p * t
        p = p * c
    return out


def trivialize_deg3(A: AssocAlgebra, height_cap=DEFAULT_HEIGHT_CAP,
                    budget=DEFAULT_SEARCH_BUDGET, preferred=None) -> TrivializationResult:
    assert A.dim == 9 and A.center().dim == 1
    d0 = _pool_zero_divisor(A)
    if d0 is not None:
        L = ideal_from_zero_divisor(A, d0, 3)
        return TrivializationResult("split", iso_from_left_ideal(A, L))
    try:
        pres = cyclic_generators_deg3(A, preferred=preferred)
        pres = _reduce_cyclic_generator(pres)
        K = nf_create(pres.mu_c)
        pres = _reduce_gamma_cubic(pres, K)
        # searches over badly presented fields get a proportionally smaller
        # budget: each candidate costs more and solutions live out of reach
        size = max(
            max(_frac_bits(c) for c in pres.mu_c.coeffs), _frac_bits(pres.gamma)
        )
        eff_budget = max(2000, budget // max(1, (size // 64) ** 2))
        s = norm_equation_cubic(K, Fraction(1) / pres.gamma, height_cap, eff_budget)
        if s is None:
            return TrivializationResult("unknown", detail="norm search exhausted")
        s_elt = pres.element_of_subfield(s.coords)
        s_sig = pres.u * s_elt * pres.u.inverse()  # sigma(s) inside the algebra
        # b (s u - 1) = 0 since (su)^3 = N(s) gamma = 1
        b = A.one_element() + s_elt * pres.u + (s_elt * s_sig) * (pres.u * pres.u)
        assert is_zero_divisor(b), "norm solution did not produce a zero divisor"
        d = b
    except ZeroDivisorFound as zd:
        d = zd.witness
    L = ideal_from_zero_divisor(A, d, 3)
    return TrivializationResult("split", iso_from_left_ideal(A, L))


# ---------------------------------------------------------------------------
# degree 4


def relative_algebra_over_subfield(A: AssocAlgebra, a: AElement, mu_a: UniPoly):
    """The centralizer of a quadratic element as a 4-dim algebra over k(a).

    Returns (B, lift, K): B is over K = Q[x]/(mu_a); lift maps B-elements back
    to A-elements.
    """
    f = A.field
    assert isinstance(f, RationalField), "relative construction implemented over Q"
    K = nf_create(mu_a)
    C, incl = centralizer(a)
    assert C.dim == 8, f"centralizer has dimension {C.dim}, expected 8"
    a_in_C = None
    solver_C = _SpanSolver(f, [el.coords for el in incl])
    a_in_C = solver_C.solve(a.coords)
    assert a_in_C is not None
    aC = C.element(a_in_C)
    # greedy K-basis of C: vectors w with {w, a w} independent over Q
    chosen = []
    span = None
    from .linalg import Subspace as _Sub

    vecs = []
    for i in range(C.dim + 1):
        cand = C.one_element() if i == 0 else (C.basis_element(i - 1) if i <= C.dim else None)
        if cand is None:
            break
        cand = _primitive_rescale(cand)
        trial = vecs + [cand.coords, (aC * cand).coords]
        S = _Sub(f, C.dim, trial)
        if S.dim == len(trial):
            chosen.append(cand)
            vecs = trial
            if len(chosen) == 4:
                break
    assert len(chosen) == 4, "no K-basis found for the centralizer"
    pair_solver = _SpanSolver(f, vecs)  # order: w0, a w0, w1, a w1, ...

    def to_K_coords(celt: AElement):
        expr = pair_solver.solve(celt.coords)
        if expr is None:
            return None
        return [K.element([expr[2 * t], expr[2 * t + 1]]) for t in range(4)]

    sc = []
    for wi in chosen:
        row = []
        for wj in chosen:
            kc = to_K_coords(wi * wj)
            assert kc is not None, "centralizer not closed (impossible)"
            row.append(kc)
        sc.append(row)
    one_k = to_K_coords(C.one_element())
    B = AssocAlgebra(K, sc, one_k)

    def lift(belt: AElement) -> AElement:
        out = A.zero_element()
        for coord, w in zip(belt.coords, chosen):
            p_, q_ = coord.coords
            welt_A = _c_elt_to_A(w, incl)
            if p_ != 0:
                out = out + welt_A * p_
            if q_ != 0:
                out = out + (a * welt_A) * q_
        return out

    def _c_elt_to_A(celt, incl):
        out = A.zero_element()
        for coord, base in zip(celt.coords, incl):
            if coord != f.zero:
                out = out + base * coord
        return out

    assert B.center().dim == 1, "relative algebra is not central over k(a)"
    return B, lift, K


def _square_free_split_frac(x: Fraction):
    """x = d0 * t^2 with d0 a squarefree integer (budgeted factorization)."""
    from .dioph import FactorizationLimit, squarefree_split

    if _frac_bits(x) > 600:
        return x, Fraction(1)
    try:
        sn, fn = squarefree_split(x.numerator, trial_bound=10**5, rho_budget=100_000)
        sd, fd = squarefree_split(x.denominator, trial_bound=10**5, rho_budget=100_000)
    except FactorizationLimit:
        return x, Fraction(1)
    d0 = sn * sd
    t = Fraction(fn, fd * sd)
    assert d0 * t * t == x
    return Fraction(d0), t


def _reduce_gamma_rel(B: AssocAlgebra, c2b: AElement, b_co, e_co, u, gamma):
    """Shrink gamma by relative norms: (w u)^2 = N(w) gamma for w = x + y c.

    N(x + y c) = x^2 - b x y + e y^2 where mu_c = X^2 + bX + e over the base.
    Greedy descent over small integer coordinates of (x, y).
    """
    K = B.field
    coords = 1 if isinstance(K, RationalField) else K.degree

    def mk(vec):
        if coords == 1:
            return K.coerce(vec[0])
        return K.element(list(vec))

    cands = []
    for xv in itertools.product(range(-2, 3), repeat=coords):
        for yv in itertools.product(range(-2, 3), repeat=coords):
            if all(v == 0 for v in xv) and all(v == 0 for v in yv):
                continue
            x, y = mk(xv), mk(yv)
            nw = x * x - b_co * x * y + e_co * y * y
            if nw == K.zero:
                continue
            cands.append((x, y, nw))
    changed = True
    while changed:
        changed = False
        best = (_scalar_bits(gamma), None)
        for (x, y, nw) in cands:
            for direction in (1, -1):
                cand = gamma * nw if direction > 0 else gamma / nw
                if _scalar_bits(cand) < best[0]:
                    best = (_scalar_bits(cand), (x, y, nw, direction, cand))
        if best[1] is not None:
            x, y, nw, direction, cand = best[1]
            w = B.scalar(x) + c2b * y
            if direction < 0:
                winv = w.inverse()
                assert winv is not None
                w = winv
            u = w * u
            gamma = cand
            changed = True
    return u, gamma


def find_zero_divisor_deg4(A: AssocAlgebra, height_cap=DEFAULT_HEIGHT_CAP,
                           budget=DEFAULT_SEARCH_BUDGET) -> AElement:
    """A zero divisor in a split 16-dim CSA over Q (FindZeroDivisor).

    Raises SearchExhausted when the relative norm search hits its budget
    (the Unknown outcome for genuinely nonsplit inputs).
    """
    try:
        return _find_zero_divisor_deg4_inner(A, height_cap, budget)
    except ZeroDivisorFound as zd:
        w = zd.witness
        if w.algebra is not A:
            raise AssertionError("witness from a foreign algebra must be lifted at source")
        return w


def _find_zero_divisor_deg4_inner(A, height_cap, budget):
    f = A.field
    d0 = _pool_zero_divisor(A)
    if d0 is not None:
        return d0
    c = first_noncentral(A)
    mu = screen(c)
    if mu.degree == 4:
        c = c + A.scalar(mu[3] / 4)
        mu = screen(c)
    if mu.degree == 2:
        a, mu_a = c, mu
    elif mu.degree == 4 and mu[1] == 0 and mu[3] == 0:
        a = c * c
        mu_a = screen(a)
        assert mu_a.degree == 2, "biquadratic square must be quadratic"
    else:
        assert mu.degree == 4
        # two Wedderburn steps: mu = m2(xi)(xi - c2)(xi - c1)
        c1 = c
        m1, rem = _poly_div_right(_rational_poly_to_elements(mu, A), c1)
        assert rem.is_zero()
        c2, _ = wedderburn_factor_step(c1, m1)
        screen(c2)
        a_lin = -(c1 + c2)          # quadratic factor xi^2 + a_lin xi + b_quad
        if a_lin.is_zero():
            # only possible in the biquadratic case, handled above
            raise AssertionError("unexpected vanishing linear coefficient")
        screen(a_lin)
        asq = a_lin * a_lin
        mu_sq = screen(asq)
        rat, _ = asq.is_rational_multiple_of_one()
        if not rat and mu_sq.degree == 2:
            a, mu_a = asq, mu_sq          # case (a)
        else:
            a = a_lin                     # case (b): a itself is quadratic
            mu_a = screen(a)
            assert mu_a.degree == 2, "Rowen case (b) must give a quadratic element"
    # re-generate the quadratic subfield by a square root: (2a + p)^2 = p^2 - 4q,
    # and strip the square part so K = Q(sqrt(D)) with D small squarefree
    p_co, q_co = mu_a[1], mu_a[0]
    delta = p_co * p_co - 4 * q_co
    d0, t = _square_free_split_frac(delta)
    alpha = (a * 2 + A.scalar(p_co)) * (Fraction(1) / t)
    mu_alpha = UniPoly(QQ, [-d0, 0, 1])
    assert _poly_eval_right(_rational_poly_to_elements(mu_alpha, A), alpha).is_zero()
    B, lift, K = relative_algebra_over_subfield(A, alpha, mu_alpha)
    try:
        c2b = first_noncentral(B)
        mu2 = screen(c2b)
        assert mu2.degree == 2
        # depress and rescale: mu becomes X^2 - d with small coordinate data
        c2b = _primitive_rescale(c2b + B.scalar(mu2[1] / 2))
        mu2 = screen(c2b)
        assert mu2.degree == 2 and mu2[1] == K.zero
        b1, b0 = mu2[1], mu2[0]
        sig_c = B.scalar(-b1) - c2b
        ker = kernel(right_mul_map(c2b) - left_mul_map(sig_c))
        assert ker.dim > 0
        u1, gamma = _best_kernel_generator(B, ker, 2)
        u1, gamma = _reduce_gamma_rel(B, c2b, b1, b0, u1, gamma)
        r = sqrt_in_field(gamma)
        if r is not None:
            u = u1 * (K.one / r)
        else:
            size = max(_scalar_bits(b1), _scalar_bits(b0), _scalar_bits(gamma))
            eff_budget = max(2000, budget // max(1, (size // 64) ** 2))
            got = norm_equation_rel_quadratic(K, b1, b0, K.one / gamma,
                                              height_cap, eff_budget)
            if got is None:
                raise SearchExhausted("relative norm search exhausted")
            x, y = got
            s = B.scalar(x) + c2b * y
            u = s * u1
        assert u * u == B.one_element(), "u^2 != 1"
        w = u + B.one_element()
        assert is_zero_divisor(w)
        return lift(w)
    except ZeroDivisorFound as zd:
        lifted = lift(zd.witness)
        assert is_zero_divisor(lifted)
        return lifted


def minimal_ideal_deg4(A: AssocAlgebra, d: AElement) -> LeftIdeal:
    """Four-dimensional left ideal from a zero divisor (FindMinimalLeftIdeal)."""
    f = A.field
    R = right_mul_map(d)
    Lm = left_mul_map(d)
    im_r = Subspace(f, A.dim, [R.col(j) for j in range(A.dim)])
    ker_r = kernel(R)
    if ker_r.dim == 4:
        return LeftIdeal(A, ker_r)
    if im_r.dim == 4:
        return LeftIdeal(A, im_r)
    inter = ker_r.intersect(im_r)
    if inter.dim == 4:
        return LeftIdeal(A, inter)
    if inter.dim == 0:
        # type (1): A1 = Im rho_d cap Im lambda_d is a copy of M_2(k)
        im_l = Subspace(f, A.dim, [Lm.col(j) for j in range(A.dim)])
        A1_space = im_r.intersect(im_l)
        assert A1_space.dim == 4, f"block subalgebra has dim {A1_space.dim}"
        e = _unit_of_subalgebra(A, A1_space)
        B, incl = algebra_from_subspace(A, A1_space, one_coords=e)
        d1B = _deg2_zero_divisor(B)
        assert d1B is not None, "block M_2 must be split"
        d1 = _include(A, incl, d1B)
        L = left_ideal_from(d1)
        assert L.dim == 4
        return L
    # type (2): quotient the centralizer of d by its radical
    C, incl = centralizer(d)
    Rad_space_A = kernel(R).intersect(kernel(Lm))
    solver_C = _SpanSolver(f, [el.coords for el in incl])
    rad_in_C = []
    for v in Rad_space_A.basis_vectors():
        cc = solver_C.solve(v)
        assert cc is not None, "radical not inside the centralizer"
        rad_in_C.append(cc)
    RadC = Subspace(f, C.dim, rad_in_C)
    Q, project, section = quotient_by_nilpotent_ideal(C, RadC)
    assert Q.dim == 4, f"quotient has dim {Q.dim}, expected 4"
    eQ = _deg2_zero_divisor(Q)
    assert eQ is not None, "quotient M_2 must be split"
    f0 = section(eQ)
    rbasis = RadC.basis_vectors()
    m = 1
    while True:
        for combo in _signed_combos(len(rbasis), m):
            fC = f0
            for coeff, vec in zip(combo, rbasis):
                if coeff:
                    fC = fC + C.element(vec) * Fraction(coeff)
            fA = _include(A, incl, fC)
            kr = kernel(right_mul_map(fA))
            if kr.dim == 4:
                return LeftIdeal(A, kr)
        m += 1
        assert m <= 64, "generic-element loop failed to terminate"


def _signed_combos(k, total):
    """Integer vectors with sum |c_i| = total, deterministic order."""
    out = []
    for parts in itertools.product(range(total + 1), repeat=k):
        if sum(parts) != total:
            continue
        idx = [i for i, p in enumerate(parts) if p]
        for signs in itertools.product((1, -1), repeat=len(idx)):
            vec = list(parts)
            for t, i in enumerate(idx):
                vec[i] *= signs[t]
            out.append(tuple(vec))
    return out


def _unit_of_subalgebra(A: AssocAlgebra, space: Subspace):
    """Coordinates of the identity element of a (unital) subalgebra span."""
    f = A.field
    basis = space.basis_vectors()
    k = len(basis)
    rows = []
    rhs = []
    for v in basis:
        # e * v = v for all basis v: unknowns are coords of e over basis
        cols = [A._mul_coords(b, v) for b in basis]
        for coord in range(A.dim):
            rows.append([cols[t][coord] for t in range(k)])
            rhs.append(f.coerce(v[coord]))
    sol = solve(Matrix(f, rows), rhs)
    assert sol is not None, "subalgebra has no identity"
    e = [f.zero] * A.dim
    for corr, b in zip(sol, basis):
        if corr != f.zero:
            e = [x + corr * y for x, y in zip(e, b)]
    return e


def _include(A: AssocAlgebra, incl, belt: AElement) -> AElement:
    out = A.zero_element()
    for coord, base in zip(belt.coords, incl):
        if coord != A.field.zero:
            out = out + base * coord
    return out


def trivialize_deg4(A: AssocAlgebra, height_cap=DEFAULT_HEIGHT_CAP,
                    budget=DEFAULT_SEARCH_BUDGET) -> TrivializationResult:
    assert A.dim == 16 and A.center().dim == 1
    try:
        d = find_zero_divisor_deg4(A, height_cap, budget)
    except SearchExhausted:
        return TrivializationResult("unknown", detail="relative norm search exhausted")
    L = minimal_ideal_deg4(A, d)
    return TrivializationResult("split", iso_from_left_ideal(A, L))


def trivialize(A: AssocAlgebra, n, height_cap=DEFAULT_HEIGHT_CAP,
               budget=DEFAULT_SEARCH_BUDGET, preferred=None) -> TrivializationResult:
    """Dispatch to the degree-specific trivialization routine."""
    assert A.dim == n * n, "algebra dimension must be n^2"
    if n == 2:
        return trivialize_deg2(A, height_cap, budget)
    if n == 3:
        return trivialize_deg3(A, height_cap, budget, preferred=preferred)
    if n == 4:
        return trivialize_deg4(A, height_cap, budget)
    raise UnsupportedType(f"degree {n} not supported")


# ---------------------------------------------------------------------------
# enveloping algebra


def _regular_cartan_element(g: LieAlgebra, h: Subspace):
    """Element of h with all root values distinct (regular semisimple).

    For rank 1 the ad minimal polynomial must have degree 3, for rank 2
    degree 7; such elements are dense in h, so a small deterministic sweep
    finds one.
    """
    f = g.field
    hb = h.basis_vectors()
    expected = {1: 3, 2: 7}[len(hb)]
    best = None
    for t in range(0, 40):
        coords = list(hb[0])
        for extra in range(1, len(hb)):
            coords = [a + (t ** extra) * b for a, b in zip(coords, hb[extra])]
        mp = minimal_polynomial(g.ad(coords))
        if best is None or mp.degree > best[1].degree:
            best = (coords, mp)
        if best[1].degree == expected:
            return best
    raise UnsupportedType(
        f"no regular semisimple element found in the Cartan (best degree {best[1].degree})"
    )


def _roots_with_deflation(p: UniPoly, K: NumberField, extra_candidates=()):
    """(roots found in K, deflated remainder); cheap candidates tried first.

    Every root of p in K divides off exactly; the leftover polynomial is
    attacked with the generic embedding search only at the reduced degree.
    """
    roots = []
    rem = p.monic()

    def absorb(r):
        nonlocal rem
        quo, remd = rem.divmod(UniPoly(K, [-r, K.one]))
        if remd.is_zero():
            roots.append(r)
            rem = quo
            return True
        return False

    for cand in extra_candidates:
        if rem.degree > 0 and rem(cand).is_zero():
            absorb(cand)
    while rem.degree > 0:
        if rem.degree == 1:
            absorb(-rem[0] / rem[1])
            continue
        rts = roots_in_field(rem, K)
        if not rts:
            break
        for r in rts:
            if rem.degree > 0:
                absorb(r)
    return roots, rem


def _even_sextic_candidates(p: UniPoly, K, known_root):
    """Roots of an even sextic from its cubic resolvent in w = x^2.

    p = (x^2-w1)(x^2-w2)(x^2-w3) and w1 = known_root^2, so w2, w3 come from a
    quadratic and the remaining roots from two square roots in K; much cheaper
    than the generic embedding search.
    """
    zero = K.zero
    if p.degree != 6 or any(not (p[i] == zero) for i in (1, 3, 5)):
        return []
    w1 = known_root * known_root
    if w1 == zero:
        return []
    s = -p[4] - w1           # w2 + w3
    pr = (-p[0]) / w1        # w2 * w3
    disc = s * s - 4 * pr
    r = sqrt_in_field(disc)
    if r is None:
        return []
    out = []
    for w in ((s + r) / 2, (s - r) / 2):
        d = sqrt_in_field(w)
        if d is not None:
            out.extend([d, -d])
    return out


def _splitting_field_with_roots(q: UniPoly):
    """Splitting field (degree <= 6 over Q) of a squarefree rational polynomial.

    Returns (K, roots): K is QQ or a NumberField containing every root of q.
    The polynomials in scope are even (ad eigenvalues come in +- pairs) and
    their splitting fields are splitting fields of cubics, so degree <= 6.
    """
    assert q.field == QQ
    from .fields import rational_roots

    rr = rational_roots(q)
    work = q.monic()
    for r in rr:
        work = work.divmod(UniPoly(QQ, [-r, 1]))[0]
    if work.degree == 0:
        return QQ, rr
    factors = factor_rational_poly(work)
    factors.sort(key=lambda p: p.degree)
    K = nf_create(factors[0])
    roots_K = [K.element([r]) for r in rr]
    pending = [_lift_nf(p, K) for p in factors]
    while pending:
        p = pending.pop(0)
        cands = [K.gen, -K.gen] + roots_K + [-r for r in roots_K]
        cands = cands + _even_sextic_candidates(p, K, K.gen)
        rts, rem = _roots_with_deflation(p, K, extra_candidates=cands)
        roots_K.extend(rts)
        if rem.degree == 0:
            continue
        # extend: flatten the tower K(root of rem)/Q and restart the factor
        L, K_gen_in_L, new_root = flatten_tower(K, rem.monic())

        def into_L(x):
            out = L.zero
            p_ = L.one
            for c in x.coords:
                out = out + p_ * c
                p_ = p_ * K_gen_in_L
            return out

        roots_K = [into_L(r) for r in roots_K]
        lifted_rem = UniPoly(L, [into_L(c) for c in rem.coeffs])
        more, rem2 = _roots_with_deflation(
            lifted_rem, L, extra_candidates=[new_root, -new_root]
        )
        roots_K.extend(more)
        assert rem2.degree == 0, "flattened field does not split its own factor"
        pending = [UniPoly(L, [into_L(c) for c in pp.coeffs]) for pp in pending]
        K = L
    return K, roots_K


def enveloping_algebra(g: LieAlgebra, n):
    """(A, images): the n^2-dimensional enveloping algebra of a twist of sl_n.

    images[i] is the A-element realizing g's i-th basis vector; raises
    DimensionMismatch when the generated algebra is larger than n^2 (the
    obstruction case g + k not isomorphic to A_Lie).
    """
    assert n in (2, 3)
    assert g.dim == n * n - 1
    F = g.field
    h = cartan_subalgebra(g)
    h_reg, mp = _regular_cartan_element(g, h)
    q = mp
    # strip the zero eigenvalue factors (x | mp exactly once for regular h)
    while q.degree > 0 and q[0] == F.zero:
        q = q.divmod(UniPoly(F, [F.zero, F.one]))[0]
    if n == 2:
        assert q.degree == 2 and q[1] == F.zero, "sl2 Cartan minpoly must be x^2 - delta"
        delta = -q[0]
        r = sqrt_in_field(delta)
        if r is not None:
            eig = [F.zero, r, -r]
            return _enveloping_split(g, n, h, h_reg, eig)
        Kx = QuadExt(F, delta)
        eig = [Kx.zero, Kx.gen, -Kx.gen]
        return _enveloping_nonsplit(g, n, h, h_reg, Kx, eig)
    # n == 3, over Q
    assert isinstance(F, RationalField), "sl3 enveloping implemented over Q"
    assert q.degree == 6, f"regular element has {q.degree} nonzero ad eigenvalues"
    K, roots = _splitting_field_with_roots(q)
    if K == QQ:
        eig = [QQ.zero] + roots
        return _enveloping_split(g, n, h, h_reg, eig)
    eig = [K.zero] + roots
    return _enveloping_nonsplit(g, n, h, h_reg, K, eig)


def _hints_for(h_basis, h_reg, eig, g):
    """Eigenvalue hints: exact list for the regular element, none for others."""
    hints = []
    for v in h_basis:
        if v == h_reg:
            hints.append(eig)
        else:
            hints.append(None)
    return hints


def _cartan_data_with_regular_first(g: LieAlgebra, h: Subspace, h_reg, eig):
    # basis of h with the regular element first (drop one original vector to
    # keep the count; independence is guaranteed since h_reg has a nonzero
    # coefficient on every dropped vector by construction)
    hb = h.basis_vectors()
    ordered = ([h_reg] + [v for v in hb if v != h_reg])[: h.dim]
    assert Subspace(g.field, g.dim, ordered).dim == h.dim
    ads = [g.ad(v) for v in ordered]
    from .linalg import simultaneous_eigenspaces

    hints = [eig] + [None] * (len(ordered) - 1)
    spaces = simultaneous_eigenspaces(ads, hints=hints)
    zero_w = tuple([g.field.zero] * len(ordered))
    roots = [(tuple(w), S) for w, S in spaces if tuple(w) != zero_w]
    return CartanData(g, ordered, roots)


def _enveloping_split(g: LieAlgebra, n, h, h_reg, eig):
    F = g.field
    cd = _cartan_data_with_regular_first(g, h, h_reg, eig)
    chev = canonical_chevalley_basis(g, cd)
    std = sl2_standard_basis(F) if n == 2 else sl3_standard_basis(F)
    names = list(chev.keys())
    solver = _SpanSolver(F, [chev[k] for k in names])
    A = matrix_algebra(F, n)
    images = []
    for k in range(g.dim):
        coords = solver.solve([F.one if i == k else F.zero for i in range(g.dim)])
        assert coords is not None
        M = Matrix.zero(F, n, n)
        for coef, name in zip(coords, names):
            if coef != F.zero:
                M = M + std[name].scale(coef)
        images.append(A.element(M.flatten()))
    _verify_embedding(g, A, images)
    return A, images


def _restrict_scalars_matrix(M: Matrix, F, Kx):
    """View a matrix over Kx (NumberField over QQ, or QuadExt over F) over F."""
    n = M.nrows
    if isinstance(Kx, QuadExt):
        d = 2

        def block(x):
            return [[x.p, Kx.delta * x.q], [x.q, x.p]]
    else:
        d = Kx.degree

        def block(x):
            return x.mul_matrix()
    rows = [[F.zero] * (n * d) for _ in range(n * d)]
    for i in range(n):
        for j in range(n):
            b = block(M[i, j])
            for r in range(d):
                for s in range(d):
                    rows[i * d + r][j * d + s] = b[r][s]
    return Matrix(F, rows)


def _enveloping_nonsplit(g: LieAlgebra, n, h, h_reg, Kx, eig):
    F = g.field
    gK = g.change_field(Kx)
    hK_vectors = [[Kx.coerce(c) for c in v] for v in h.basis_vectors()]
    hK = Subspace(Kx, g.dim, hK_vectors)
    h_regK = [Kx.coerce(c) for c in h_reg]
    cd = _cartan_data_with_regular_first(gK, hK, h_regK, eig)
    chev = canonical_chevalley_basis(gK, cd)
    std = sl2_standard_basis(Kx) if n == 2 else sl3_standard_basis(Kx)
    names = list(chev.keys())
    solver = _SpanSolver(Kx, [chev[k] for k in names])
    gens = []
    for k in range(g.dim):
        coords = solver.solve([Kx.one if i == k else Kx.zero for i in range(g.dim)])
        assert coords is not None
        M = Matrix.zero(Kx, n, n)
        for coef, name in zip(coords, names):
            if not (coef == Kx.zero):
                M = M + std[name].scale(coef)
        gens.append(_restrict_scalars_matrix(M, F, Kx))
    basis_mats = matrix_closure(F, gens, max_dim=n * n)
    if len(basis_mats) != n * n:
        raise DimensionMismatch(len(basis_mats), n * n)
    A, _ = algebra_from_matrix_span(F, basis_mats)
    solver2 = _SpanSolver(F, [b.flatten() for b in basis_mats])
    images = []
    for Mg in gens:
        coords = solver2.solve(Mg.flatten())
        assert coords is not None
        images.append(A.element(coords))
    _verify_embedding(g, A, images)
    return A, images


def _verify_embedding(g: LieAlgebra, A: AssocAlgebra, images):
    """Check the map g -> A_Lie preserves brackets on all basis pairs."""
    F = g.field
    for i in range(g.dim):
        for j in range(g.dim):
            lhs = images[i] * images[j] - images[j] * images[i]
            br = g.sc[i][j]
            rhs = A.zero_element()
            for c, img in zip(br, images):
                if c != F.zero:
                    rhs = rhs + img * c
            assert lhs == rhs, "embedding does not preserve brackets"


# ---------------------------------------------------------------------------
# TrivializeLieAlgebra


class LieTrivialization:
    """verdict plus, when split, the images of the standard sl_n basis in g."""

    def __init__(self, verdict, images=None, detail=""):
        self.verdict = verdict
        self.images = images  # dict: standard basis label -> coords in g
        self.detail = detail


def _sl_n_standard_labels(n):
    if n == 2:
        return ["x", "y", "h"]
    return ["x_a", "x_b", "x_ab", "y_a", "y_b", "y_ab", "h_a", "h_b"]


def trivialize_lie(g: LieAlgebra, n, height_cap=DEFAULT_HEIGHT_CAP,
                   budget=DEFAULT_SEARCH_BUDGET) -> LieTrivialization:
    """Isomorphism sl_n -> g when the enveloping algebra splits."""
    try:
        A, images = enveloping_algebra(g, n)
    except DimensionMismatch as e:
        return LieTrivialization("unknown", detail=str(e))
    d0 = _pool_zero_divisor(A, extra=[_primitive_rescale(im) for im in images])
    if d0 is not None:
        L = ideal_from_zero_divisor(A, d0, n)
        res = TrivializationResult("split", iso_from_left_ideal(A, L))
    else:
        preferred = []
        if n == 3:
            # the image of a regular Cartan element generates the etale cubic
            # subalgebra whose splitting data the enveloping step already used
            h = cartan_subalgebra(g)
            h_reg, _ = _regular_cartan_element(g, h)
            img = A.zero_element()
            for coef, im in zip(h_reg, images):
                if coef != g.field.zero:
                    img = img + im * coef
            preferred.append(img)
        res = trivialize(A, n, height_cap, budget, preferred=preferred)
    if res.verdict != "split":
        return LieTrivialization(res.verdict, detail=res.detail)
    iso = res.iso
    F = g.field
    emb_solver = _SpanSolver(F, [im.coords for im in images])
    std = sl2_standard_basis(F) if n == 2 else sl3_standard_basis(F)
    out = {}
    for label in _sl_n_standard_labels(n):
        a_elt = iso.from_matrix(std[label])
        coords = emb_solver.solve(a_elt.coords)
        assert coords is not None, "preimage outside the embedded Lie algebra"
        out[label] = coords
    # verify bracket preservation against the standard structure constants
    std_alg = LieAlgebra(F, [std[l] for l in _sl_n_standard_labels(n)])
    labels = _sl_n_standard_labels(n)
    for i, li in enumerate(labels):
        for j, lj in enumerate(labels):
            br = std_alg.sc[i][j]
            lhs = g.bracket_coords(out[li], out[lj])
            rhs = [F.zero] * g.dim
            for c, lk in zip(br, labels):
                if c != F.zero:
                    rhs = [x + c * y for x, y in zip(rhs, out[lk])]
            assert lhs == rhs, "lifted map does not preserve brackets"
    return LieTrivialization("split", images=out)
