"""Diophantine subroutines: integer factorization, rational points on conics.

conic_point decides solvability of a ternary quadratic form over Q by the
classical Legendre criterion (after squarefree pairwise-coprime reduction)
and finds a point by Lagrange descent: repeatedly shrink the largest
coefficient using a square root of -ab modulo c, then search the Holzer box
directly once the coefficients are small.  All transformations are tracked
so the returned point exactly satisfies the original form.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd, isqrt

from .fields import QQ
from .linalg import Matrix, SymQuadric, congruence_diagonalize, kernel


class FactorizationLimit(Exception):
    pass


class DegeneratePoint(Exception):
    pass


DEFAULT_TRIAL_BOUND = 10**6
DEFAULT_RHO_BUDGET = 2_000_000


# ---------------------------------------------------------------------------
# primality and factorization

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (our working range)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int, budget: int) -> int | None:
    """Brent's cycle variant of Pollard rho; budget is total across constants."""
    if n % 2 == 0:
        return 2
    steps = 0
    for c in range(1, 64):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = 2
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
                steps += min(m, r - k + m)
                if steps > budget:
                    break
            r *= 2
            if steps > budget:
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
                steps += 1
                if steps > budget:
                    break
        if 1 < g < n:
            return g
        if steps > budget:
            return None
    return None


def factor_integer(n: int, trial_bound: int = DEFAULT_TRIAL_BOUND,
                   rho_budget: int = DEFAULT_RHO_BUDGET) -> list[int]:
    """Complete prime factorization of |n| >= 1, sorted with multiplicity."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = []
    for p in (2, 3, 5):
        while n % p == 0:
            out.append(p)
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    wi = 0
    while d * d <= n and d <= trial_bound:
        while n % d == 0:
            out.append(d)
            n //= d
        d += wheel[wi]
        wi = (wi + 1) % len(wheel)
    if n == 1:
        return sorted(out)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out.append(m)
            continue
        r = isqrt(m)
        if r * r == m:
            stack.extend([r, r])
            continue
        g = _brent_rho(m, rho_budget)
        if g is None:
            raise FactorizationLimit(f"factorization budget exhausted on {m}")
        stack.extend([g, m // g])
    return sorted(out)


def squarefree_split(n: int, **kw) -> tuple[int, int]:
    """n = s * f^2 with s squarefree (sign carried by s)."""
    if n == 0:
        return 0, 1
    sign = -1 if n < 0 else 1
    s, f = 1, 1
    from collections import Counter

    for p, e in Counter(factor_integer(n, **kw)).items():
        if e % 2:
            s *= p
        f *= p ** (e // 2)
    return sign * s, f


# ---------------------------------------------------------------------------
# modular square roots


def tonelli_shanks(a: int, p: int) -> int | None:
    """Square root of a mod odd prime p, or None for a non-residue."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q 2^s
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod_squarefree(a: int, m: int, primes: list[int]) -> int | None:
    """Square root of a modulo squarefree m with known prime factors (CRT)."""
    if m == 1:
        return 0
    rem, mod = 0, 1
    for p in primes:
        if p == 2:
            rp = a % 2  # 0 and 1 are both squares mod 2
        else:
            rp = tonelli_shanks(a, p)
            if rp is None:
                return None
        # CRT combine
        g, inv = _crt_inv(mod, p)
        rem = rem + mod * ((rp - rem) * inv % p)
        mod *= p
        rem %= mod
    return rem


def _crt_inv(a, p):
    inv = pow(a % p, -1, p)
    return 1, inv


# ---------------------------------------------------------------------------
# conic points


class ConicPoint:
    """Primitive integer point on a ternary quadric, verified at construction."""

    __slots__ = ("coords",)

    def __init__(self, quadric: SymQuadric, coords):
        x = [int(c) for c in coords]
        g = gcd(gcd(abs(x[0]), abs(x[1])), abs(x[2]))
        assert g > 0, "zero point"
        x = [c // g for c in x]
        assert quadric.value([Fraction(c) for c in x]) == 0, "point not on conic"
        self.coords = tuple(x)

    def __iter__(self):
        return iter(self.coords)

    def __repr__(self):
        return f"ConicPoint{self.coords}"


def conic_point(q: SymQuadric, trial_bound=DEFAULT_TRIAL_BOUND,
                rho_budget=DEFAULT_RHO_BUDGET) -> ConicPoint | None:
    """A rational point on z^t A z = 0, or None when Legendre certifies none.

    Rank <= 2 forms are degenerate; the kernel then contains a rational point
    which is returned.  May raise FactorizationLimit.
    """
    A = q.A
    assert A.nrows == 3, "ternary forms only"
    if A.is_zero():
        return ConicPoint(q, (1, 0, 0))
    ker = kernel(A)
    if ker.dim >= 1:
        v = ker.basis_vectors()[0]
        return ConicPoint(q, _primitive(v))
    P, d = congruence_diagonalize(q)
    # clear denominators: coefficients to integers
    den = 1
    for x in d:
        den = den * (x.denominator // gcd(den, x.denominator))
    coeffs = [int(x * den) for x in d]
    g = gcd(gcd(abs(coeffs[0]), abs(coeffs[1])), abs(coeffs[2]))
    coeffs = [c // g for c in coeffs]
    sol = _solve_diagonal(coeffs, trial_bound, rho_budget)
    if sol is None:
        return None
    y = [Fraction(v) for v in sol]
    p = P.apply(y)
    return ConicPoint(q, _primitive(p))


def _primitive(vec):
    den = 1
    fr = [Fraction(x) for x in vec]
    for x in fr:
        den = den * (x.denominator // gcd(den, x.denominator))
    ints = [int(x * den) for x in fr]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return [v // g for v in ints]


def _solve_diagonal(coeffs, trial_bound, rho_budget):
    """Solve a x^2 + b y^2 + c z^2 = 0 for integer nonzero coefficients."""
    state = _DiagState(coeffs, trial_bound, rho_budget)
    if not state.locally_solvable():
        return None
    sol = state.descend()
    a, b, c = coeffs
    x, y, z = sol
    assert a * x * x + b * y * y + c * z * z == 0
    return sol


class _DiagState:
    def __init__(self, coeffs, trial_bound, rho_budget):
        self.trial_bound = trial_bound
        self.rho_budget = rho_budget
        self.orig = list(coeffs)
        # transform: columns map solutions of the reduced form back to original
        self.coeffs, self.U = self._normalize(list(coeffs))

    def _factor(self, n):
        return factor_integer(n, trial_bound=self.trial_bound, rho_budget=self.rho_budget)

    def _normalize(self, cs):
        """Squarefree, pairwise coprime; returns (coeffs, back-map matrix)."""
        U = [[Fraction(1) if i == j else Fraction(0) for j in range(3)] for i in range(3)]

        def scale_var(i, f):
            for r in range(3):
                U[r][i] /= f

        changed = True
        while changed:
            changed = False
            # overall content
            g = gcd(gcd(abs(cs[0]), abs(cs[1])), abs(cs[2]))
            if g > 1:
                cs = [c // g for c in cs]
                changed = True
            # squarefree parts
            for i in range(3):
                s, f = squarefree_split(cs[i], trial_bound=self.trial_bound,
                                        rho_budget=self.rho_budget)
                if f > 1:
                    cs[i] = s
                    scale_var(i, f)
                    changed = True
            # pairwise coprime
            for i in range(3):
                for j in range(3):
                    if i == j:
                        continue
                    k = 3 - i - j
                    g = gcd(abs(cs[i]), abs(cs[j]))
                    if g > 1:
                        # multiply form by g: (ci/g, cj/g, ck*g), vars i,j scale by g
                        cs[i] //= g
                        cs[j] //= g
                        cs[k] *= g
                        scale_var(i, g)
                        scale_var(j, g)
                        changed = True
        return cs, U

    def locally_solvable(self):
        a, b, c = self.coeffs
        if a > 0 and b > 0 and c > 0:
            return False
        if a < 0 and b < 0 and c < 0:
            return False
        # Legendre conditions for squarefree pairwise coprime coefficients
        for (u, v, w) in ((a, b, c), (b, c, a), (c, a, b)):
            target = (-v * w) % abs(u) if abs(u) > 1 else 0
            if abs(u) > 1:
                primes = sorted(set(self._factor(u)))
                if sqrt_mod_squarefree(target, abs(u), primes) is None:
                    return False
        return True

    def descend(self):
        """Find a solution of the reduced form, map back through U."""
        sol = self._descend(self.coeffs)
        x = [Fraction(0), Fraction(0), Fraction(0)]
        for r in range(3):
            x[r] = sum((self.U[r][i] * sol[i] for i in range(3)), Fraction(0))
        return _primitive(x)

    def _descend(self, cs, depth=0):
        assert depth < 200, "descent failed to terminate"
        a, b, c = cs
        box = self._holzer_box(cs)
        if box is not None:
            return box
        # reduce the slot with the largest |coefficient|
        order = sorted(range(3), key=lambda i: abs(cs[i]))
        i0, i1, i2 = order  # |cs[i2]| largest
        aa, bb, cc = cs[i0], cs[i1], cs[i2]
        t = sqrt_mod_squarefree((-aa * bb) % abs(cc), abs(cc),
                                sorted(set(self._factor(cc))))
        assert t is not None, "local solvability should have been checked"
        if t > abs(cc) // 2:
            t -= abs(cc)
        m = (t * t + aa * bb) // cc
        assert (t * t + aa * bb) % cc == 0
        if m == 0:
            # t^2 = -ab: (t, a, 0) solves aa x^2 + bb y^2 + cc z^2
            sol3 = [0, 0, 0]
            sol3[i0], sol3[i1], sol3[i2] = t, aa, 0
            return sol3
        c1, dsq = squarefree_split(m, trial_bound=self.trial_bound,
                                   rho_budget=self.rho_budget)
        assert abs(c1) < abs(cc), "descent must strictly decrease the largest coefficient"
        sub = self._descend([aa, bb, c1], depth + 1)
        x1, y1, z1 = sub
        X = t * x1 - bb * y1
        Y = t * y1 + aa * x1
        Z = c1 * dsq * z1
        assert aa * X * X + bb * Y * Y + cc * Z * Z == 0
        if X == 0 and Y == 0 and Z == 0:
            # degenerate composition; restart from the Holzer box (rare)
            forced = self._holzer_box(cs, force=True)
            assert forced is not None
            return forced
        sol3 = [0, 0, 0]
        sol3[i0], sol3[i1], sol3[i2] = X, Y, Z
        return sol3

    def _holzer_box(self, cs, force=False):
        """Direct search inside the Holzer bound box; None if box too large."""
        a, b, c = cs
        order = sorted(range(3), key=lambda i: abs(cs[i]))
        i0, i1, i2 = order
        aa, bb, cc = cs[i0], cs[i1], cs[i2]  # |aa| smallest: solve for x
        ybound = isqrt(abs(aa * cc)) + 1
        zbound = isqrt(abs(aa * bb)) + 1
        volume = (2 * ybound + 1) * (2 * zbound + 1)
        if not force and (max(abs(aa), abs(bb), abs(cc)) > 64 and volume > 400_000):
            return None
        if volume > 50_000_000:
            raise FactorizationLimit("conic search box infeasible")
        # sign flips of y, z do not change the squares: search y, z >= 0
        for y in range(0, ybound + 1):
            for z in range(0, zbound + 1):
                if y == 0 and z == 0:
                    continue
                num = -(bb * y * y + cc * z * z)
                if num % aa:
                    continue
                x2 = num // aa
                if x2 < 0:
                    continue
                x = isqrt(x2)
                if x * x == x2:
                    sol3 = [0, 0, 0]
                    sol3[i0], sol3[i1], sol3[i2] = x, y, z
                    return sol3
        assert not force, "Holzer box search failed on a locally solvable form"
        return None


# ---------------------------------------------------------------------------
# conic parametrization (for diagonal forms)


def conic_parametrization(q: SymQuadric, p) -> Matrix:
    """3x3 matrix M with M (s^2, st, t^2)^t tracing the diagonal conic through p.

    The conic must be diagonal of rank 3 and p an exact point on it.  A
    coordinate permutation is applied internally (first nonzero coordinate of
    p moved to position 2) and composed into the returned matrix.
    """
    A = q.A
    assert A.nrows == 3
    assert all(A[i, j] == 0 for i in range(3) for j in range(3) if i != j), "need a diagonal conic"
    d = [A[i, i] for i in range(3)]
    assert all(x != 0 for x in d), "need rank 3"
    pf = [Fraction(c) for c in p]
    assert q.value(pf) == 0, "point must lie on the conic"
    j = next(i for i in range(3) if pf[i] != 0)
    perm = [0, 1, 2]
    perm[j], perm[2] = perm[2], perm[j]  # transposition (j 2)
    dp = [d[perm[0]], d[perm[1]], d[perm[2]]]
    pp = [pf[perm[0]], pf[perm[1]], pf[perm[2]]]
    Acf, Bcf = dp[0], dp[1]
    p0, p1, p2 = pp
    Mp = Matrix(QQ, [
        [Acf * p0, 2 * Bcf * p1, -Bcf * p0],
        [-Acf * p1, 2 * Acf * p0, Bcf * p1],
        [Acf * p2, 0, Bcf * p2],
    ])
    # undo the permutation: row i of M is row perm^{-1}(i)... rows of Mp are the
    # permuted coordinates, so original coordinate perm[i] is row i of Mp
    rows = [None, None, None]
    for i in range(3):
        rows[perm[i]] = Mp.row(i)
    M = Matrix(QQ, rows)
    if M.det() == 0:
        raise DegeneratePoint("parametrization matrix singular")
    _verify_conic_param(q, M)
    return M


def _verify_conic_param(q: SymQuadric, M: Matrix):
    from .polys import MultiPoly, PolyMap, matrix_times_map, matrix_to_quadric, substitute

    mono = PolyMap([
        MultiPoly(QQ, 2, {(2, 0): 1}),
        MultiPoly(QQ, 2, {(1, 1): 1}),
        MultiPoly(QQ, 2, {(0, 2): 1}),
    ])
    composed = matrix_times_map(M, mono)
    f = matrix_to_quadric(q)
    assert substitute(f, composed).is_zero(), "parametrization does not satisfy the conic"
