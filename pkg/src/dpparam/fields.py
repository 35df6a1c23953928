"""Exact scalar arithmetic: rationals, simple number fields, univariate polynomials.

All field elements are immutable and support +, -, *, /, ** and exact equality,
so the linear algebra and Lie algebra layers are generic over the scalar field.
Number fields are simple extensions Q(c) of degree <= 6 given by a monic
irreducible minimal polynomial; quadratic extensions of an arbitrary base field
are provided separately (QuadExt) for relative constructions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath


class ReduciblePolynomial(Exception):
    """Raised when a supposed minimal polynomial has a nontrivial factor."""

    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"reducible: factor {factor}")


class DegreeOutOfRange(Exception):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class FieldMismatch(Exception):
    pass


class NotGalois(Exception):
    pass


class UnsupportedDegree(Exception):
    pass


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


class RationalField:
    """The field Q; elements are fractions.Fraction."""

    degree = 1

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return _frac(x)
        raise FieldMismatch(f"cannot coerce {x!r} into Q")

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


# ---------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Dense univariate polynomial over a field, coefficients low degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        cs = [field.coerce(c) for c in coeffs]
        while cs and cs[-1] == field.zero:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i <= self.degree else self.field.zero

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.field, [self[i] + other[i] for i in range(n)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.field, [self[i] - other[i] for i in range(n)])

    def __neg__(self):
        return UniPoly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly(self.field, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly(self.field, [])
        out = [self.field.zero] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a == self.field.zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(self.field, out)

    __rmul__ = __mul__

    def scale(self, c):
        return UniPoly(self.field, [a * c for a in self.coeffs])

    def monic(self):
        if self.is_zero():
            return self
        lc = self.coeffs[-1]
        return UniPoly(self.field, [a / lc for a in self.coeffs])

    def divmod(self, other):
        """Euclidean division; other must be nonzero."""
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        q = [f.zero] * max(0, len(rem) - len(other.coeffs) + 1)
        dlc = other.coeffs[-1]
        dd = other.degree
        while len(rem) - 1 >= dd and rem:
            c = rem[-1] / dlc
            k = len(rem) - 1 - dd
            q[k] = c
            for i, b in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - c * b
            while rem and rem[-1] == f.zero:
                rem.pop()
        return UniPoly(f, q), UniPoly(f, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self):
        f = self.field
        return UniPoly(f, [self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def is_squarefree(self):
        return self.gcd(self.derivative()).degree == 0

    def __call__(self, x):
        """Horner evaluation; works for any value supporting the ring ops."""
        if not self.coeffs:
            try:
                return x * 0
            except TypeError:
                return self.field.zero
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return acc

    def shift(self, a):
        """Return self(x + a)."""
        f = self.field
        a = f.coerce(a)
        out = UniPoly(f, [])
        xa = UniPoly(f, [a, f.one])
        for c in reversed(self.coeffs):
            out = out * xa + UniPoly(f, [c])
        return out

    def __repr__(self):
        return f"UniPoly({poly_str(self)})"


def poly_str(p: UniPoly, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p[i]
        if c == p.field.zero:
            continue
        if i == 0:
            mon = ""
        elif i == 1:
            mon = var
        else:
            mon = f"{var}^{i}"
        parts.append((c, mon))
    out = ""
    for k, (c, mon) in enumerate(parts):
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        coef = "" if (mag == 1 and mon) else str(mag)
        sep = "*" if (coef and mon) else ""
        term = f"{coef}{sep}{mon}" or "1"
        if k == 0:
            out = ("-" if neg else "") + term
        else:
            out += (" - " if neg else " + ") + term
    return out


def parse_unipoly(text: str, field=QQ, var: str = "x") -> UniPoly:
    """Parse ASCII polynomial syntax like "x^3 - 3*x - 1" over Q."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    # split into signed terms
    terms = []
    cur = ""
    for ch in s:
        if ch in "+-" and cur and cur[-1] not in "+-*^/":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    coeffs = {}
    for t in terms:
        sign = 1
        while t and t[0] in "+-":
            if t[0] == "-":
                sign = -sign
            t = t[1:]
        if not t:
            raise ValueError(f"dangling sign in {text!r}")
        coef = Fraction(1)
        exp = 0
        for piece in t.split("*"):
            if not piece:
                raise ValueError(f"bad term in {text!r}")
            if piece.startswith(var):
                rest = piece[len(var):]
                if rest == "":
                    exp += 1
                elif rest.startswith("^"):
                    exp += int(rest[1:])
                else:
                    raise ValueError(f"bad monomial {piece!r}")
            else:
                coef *= Fraction(piece)
        coeffs[exp] = coeffs.get(exp, Fraction(0)) + sign * coef
    n = max(coeffs) + 1 if coeffs else 0
    return UniPoly(field, [coeffs.get(i, Fraction(0)) for i in range(n)])


# ---------------------------------------------------------------------------
# rational utilities

def rational_roots(p: UniPoly):
    """All rational roots of a polynomial over Q (complete, any degree).

    Small leading/constant coefficients use the classical divisor test; large
    ones switch to high-precision numeric roots with continued-fraction
    reconstruction, each candidate verified exactly (so results stay exact).
    """
    assert p.field == QQ
    if p.is_zero():
        raise ValueError("zero polynomial")
    # strip powers of x
    roots = set()
    coeffs = list(p.coeffs)
    while coeffs and coeffs[0] == 0:
        roots.add(Fraction(0))
        coeffs.pop(0)
    if len(coeffs) <= 1:
        return sorted(roots)
    if len(coeffs) == 2:
        roots.add(-coeffs[0] / coeffs[1])
        return sorted(roots)
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])
    q = UniPoly(QQ, coeffs)
    if a0 <= 10**6 and an <= 10**6:
        for pnum in _divisors(a0):
            for qden in _divisors(an):
                for cand in (Fraction(pnum, qden), Fraction(-pnum, qden)):
                    if cand not in roots and q(cand) == 0:
                        roots.add(cand)
        return sorted(roots)
    roots.update(_rational_roots_numeric(q))
    return sorted(roots)


def _rational_roots_numeric(q: UniPoly):
    """Rational roots by numeric root reconstruction + exact verification.

    A rational root p/q of the integer model has p | a0 and q | an, so the
    working precision is sized from the coefficient bit lengths; candidates
    are always verified exactly.
    """
    den = 1
    for c in q.coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in q.coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])
    prec = max(256, 2 * (a0.bit_length() + an.bit_length()) + 128)
    prec = min(prec, 1 << 15)
    found = set()
    with mpmath.workprec(prec):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(q.coeffs)]
        try:
            rts = mpmath.polyroots(cs, maxsteps=400, extraprec=prec // 2)
        except mpmath.libmp.NoConvergence:
            return found
        den_bound = max(an, 2)
        for r in rts:
            if abs(mpmath.im(r)) > mpmath.mpf(2) ** (-(prec // 4)):
                continue
            cand = _mpf_to_fraction(mpmath.re(r), den_bound)
            if cand not in found and q(cand) == 0:
                found.add(cand)
    return found


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _mpf_to_fraction(x, den_bound):
    """Rational reconstruction of an mpmath real by continued fractions."""
    scale = 1 << (mpmath.mp.prec - 8)
    num = int(mpmath.nint(x * scale))
    return Fraction(num, scale).limit_denominator(den_bound)


def _frac_close(q, x, prec):
    """Whether rational q approximates mpmath real x to ~prec/4 bits."""
    qq = mpmath.mpf(q.numerator) / q.denominator
    return abs(qq - x) <= mpmath.mpf(2) ** (-(prec // 4))


# ---------------------------------------------------------------------------
# number fields


class NumberField:
    """Q(c) for c a root of a monic irreducible polynomial of degree 1..6."""

    def __init__(self, min_poly: UniPoly, _trusted=False):
        if min_poly.field != QQ:
            raise FieldMismatch("minimal polynomial must be over Q")
        if not min_poly.is_monic():
            raise ValueError("minimal polynomial must be monic")
        d = min_poly.degree
        if not (1 <= d <= 6):
            raise DegreeOutOfRange(f"degree {d} outside 1..6")
        if not _trusted:
            _check_irreducible(min_poly)
        self.min_poly = min_poly
        self.degree = d

    @property
    def zero(self):
        return NFElement(self, (Fraction(0),) * self.degree)

    @property
    def one(self):
        return self.element([1])

    @property
    def gen(self):
        if self.degree == 1:
            return self.element([-self.min_poly[0]])
        return self.element([0, 1])

    def element(self, coords):
        cs = [_frac(c) for c in coords]
        if len(cs) > self.degree:
            raise ValueError("too many coordinates")
        cs += [Fraction(0)] * (self.degree - len(cs))
        return NFElement(self, tuple(cs))

    def coerce(self, x):
        if isinstance(x, NFElement):
            if x.field == self:
                return x
            if x.field.degree == 1:
                return self.element([x.coords[0]])
            raise FieldMismatch("element of a different number field")
        if isinstance(x, (int, Fraction)):
            return self.element([x])
        raise FieldMismatch(f"cannot coerce {x!r}")

    def embeddings(self, prec):
        return _embeddings_cached(self.min_poly.coeffs, prec)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly.coeffs == other.min_poly.coeffs

    def __hash__(self):
        return hash(self.min_poly.coeffs)

    def __repr__(self):
        return f"NumberField({poly_str(self.min_poly)})"


@lru_cache(maxsize=None)
def _embeddings_cached(min_poly_coeffs, prec):
    with mpmath.workprec(prec):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(min_poly_coeffs)]
        roots = mpmath.polyroots(cs, maxsteps=200, extraprec=prec // 2)
        # deterministic order: by real part then imaginary part
        return tuple(sorted(roots, key=lambda z: (mpmath.re(z), mpmath.im(z))))


class NFElement:
    """Element of a NumberField in the power basis 1, c, ..., c^(d-1)."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        assert len(coords) == field.degree
        self.field = field
        self.coords = coords

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def _same(self, other):
        if isinstance(other, NFElement):
            if other.field != self.field:
                raise FieldMismatch("mixed number fields")
            return other
        return self.field.coerce(other)

    def _compatible(self, other):
        return isinstance(other, (int, Fraction, NFElement))

    def __add__(self, other):
        if not self._compatible(other):
            return NotImplemented
        o = self._same(other)
        return NFElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        if not self._compatible(other):
            return NotImplemented
        o = self._same(other)
        return NFElement(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        if not self._compatible(other):
            return NotImplemented
        return self._same(other).__sub__(self)

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if not self._compatible(other):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            q = _frac(other)
            return NFElement(self.field, tuple(a * q for a in self.coords))
        o = self._same(other)
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(o.coords):
                if b != 0:
                    prod[i + j] += a * b
        return NFElement(self.field, _reduce_mod(prod, self.field))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        f = UniPoly(QQ, self.coords)
        m = self.field.min_poly
        # extended gcd: s*f + t*m = 1
        r0, r1 = m, f
        s0, s1 = UniPoly(QQ, []), UniPoly(QQ, [1])
        while r1.degree > 0:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r1.is_zero():
            raise DivisionByZero("noninvertible element (reducible modulus?)")
        inv = s1.scale(Fraction(1) / r1.coeffs[0])
        return self.field.element(list((inv % m).coeffs))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _frac(other)
            if q == 0:
                raise DivisionByZero("division by zero")
            return NFElement(self.field, tuple(a / q for a in self.coords))
        return self * self._same(other).inverse()

    def __rtruediv__(self, other):
        return self._same(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        try:
            o = self._same(other)
        except (FieldMismatch, TypeError):
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash((self.field, self.coords))

    def mul_matrix(self):
        """Matrix (rows) of the multiplication-by-self map on the power basis."""
        d = self.field.degree
        cols = []
        cj = self.field.one
        for _ in range(d):
            cols.append((self * cj).coords)
            cj = cj * self.field.gen
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def embed(self, prec):
        """Values of self under each complex embedding, in cached order."""
        roots = self.field.embeddings(prec)
        with mpmath.workprec(prec):
            out = []
            for r in roots:
                acc = mpmath.mpc(0)
                for c in reversed(self.coords):
                    acc = acc * r + mpmath.mpf(c.numerator) / c.denominator
                out.append(acc)
            return out

    def __repr__(self):
        return f"NF({poly_str(UniPoly(QQ, self.coords), 'c')})"


def _reduce_mod(prod, field):
    """Reduce a coefficient list of length 2d-1 modulo the minimal polynomial."""
    d = field.degree
    m = field.min_poly.coeffs
    for i in range(len(prod) - 1, d - 1, -1):
        c = prod[i]
        if c == 0:
            continue
        prod[i] = Fraction(0)
        for j in range(d):
            prod[i - d + j] += -c * m[j]
    return tuple(prod[:d])


def nf_create(min_poly: UniPoly) -> NumberField:
    """Create a number field, verifying irreducibility of the minimal polynomial."""
    return NumberField(min_poly)


def _check_irreducible(p: UniPoly):
    d = p.degree
    if d == 1:
        return
    rts = rational_roots(p)
    if rts:
        r = rts[0]
        raise ReduciblePolynomial(UniPoly(QQ, [-r, 1]))
    if d <= 3:
        return
    if not p.is_squarefree():
        g = p.gcd(p.derivative())
        raise ReduciblePolynomial(g)
    fac = _find_small_factor(p)
    if fac is not None:
        raise ReduciblePolynomial(fac)


def _find_small_factor(p: UniPoly):
    """Look for a monic factor of degree 2..deg/2 via complex root clustering.

    Candidate factors are built from subsets of the complex roots, their
    coefficients rationalized and the division checked exactly, so a returned
    factor is always genuine.  Precision escalates before giving up.
    """
    from itertools import combinations

    d = p.degree
    prec = 256
    while prec <= 4096:
        with mpmath.workprec(prec):
            cs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)]
            try:
                roots = mpmath.polyroots(cs, maxsteps=200, extraprec=prec // 2)
            except mpmath.libmp.NoConvergence:
                prec *= 2
                continue
            den_bound = 1 << (prec // 3)
            for k in range(2, d // 2 + 1):
                for idx in combinations(range(d), k):
                    # candidate factor = prod (x - roots[i]), coefficients low-first
                    fac = [mpmath.mpc(1)]
                    for i in idx:
                        nxt = [mpmath.mpc(0)] * (len(fac) + 1)
                        for j, c in enumerate(fac):
                            nxt[j + 1] += c
                            nxt[j] -= roots[i] * c
                        fac = nxt
                    if any(abs(mpmath.im(c)) > mpmath.mpf(2) ** (-prec // 4) for c in fac):
                        continue
                    cand = []
                    ok = True
                    for c in fac:
                        q = _mpf_to_fraction(mpmath.re(c), den_bound)
                        if not _frac_close(q, mpmath.re(c), prec):
                            ok = False
                            break
                        cand.append(q)
                    if not ok:
                        continue
                    cand_poly = UniPoly(QQ, cand)
                    if cand_poly.degree != k or not cand_poly.is_monic():
                        continue
                    quo, rem = p.divmod(cand_poly)
                    if rem.is_zero() and 0 < cand_poly.degree < d:
                        return cand_poly
        prec *= 2
    return None


def factor_rational_poly(p: UniPoly):
    """Factor a squarefree monic polynomial over Q into irreducible factors.

    Complete for degree <= 7 at desk scale: linear factors by the rational
    root test, higher ones by exact-verified complex-root clustering.
    """
    assert p.is_monic()
    factors = []
    work = p
    for r in rational_roots(p):
        lin = UniPoly(QQ, [-r, 1])
        while True:
            q, rem = work.divmod(lin)
            if rem.is_zero():
                factors.append(lin)
                work = q
            else:
                break
    while work.degree > 0:
        if work.degree <= 3 and not rational_roots(work):
            factors.append(work)
            break
        fac = _find_small_factor(work)
        if fac is None:
            factors.append(work)
            break
        factors.append(fac)
        work = work.divmod(fac)[0]
    return factors


# ---------------------------------------------------------------------------
# norms, square roots, roots in field


def norm_and_trace(a: NFElement):
    """(norm, trace) of a number field element: det and trace of multiplication."""
    d = a.field.degree
    m = a.mul_matrix()
    tr = sum((m[i][i] for i in range(d)), Fraction(0))
    return _det_frac(m), tr


def _det_frac(m):
    n = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def _sqrt_fraction(q: Fraction):
    if q < 0:
        return None
    import math

    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def sqrt_in_field(D):
    """A square root of D in its field, or None if none is found.

    Exact closed forms for degree 1 and 2 and for quadratic extensions of an
    arbitrary base; for higher degrees the root is reconstructed from
    high-precision embeddings and verified exactly, so a non-None result is
    always correct.  None means no root was found within the precision budget
    (for the closed-form cases it is a definitive "no").
    """
    if isinstance(D, (int, Fraction)):
        return _sqrt_fraction(_frac(D))
    if isinstance(D, QuadExtElement):
        return _sqrt_quadext(D)
    K = D.field
    if K.degree == 1:
        r = _sqrt_fraction(D.coords[0])
        return None if r is None else K.element([r])
    if K.degree == 2:
        return _sqrt_quadratic(D)
    return _sqrt_numeric(D)


def _sqrt_quadext(D):
    """Exact square root in base(sqrt(delta)): reduces to base-field sqrts."""
    K = D.field
    t = K.delta
    d0, d1 = D.p, D.q
    zero = K.base.zero
    # (u + v g)^2 = u^2 + t v^2 + 2uv g
    if d1 == zero:
        r = sqrt_in_field(d0)
        if r is not None:
            return K.element(r, zero)
        r = sqrt_in_field(d0 / t)
        if r is not None:
            return K.element(zero, r)
        return None
    # v^2 = V solves 4t V^2 - 4 d0 V + d1^2 = 0
    disc = sqrt_in_field(d0 * d0 - t * d1 * d1)
    if disc is None:
        return None
    for Vnum in (d0 + disc, d0 - disc):
        V = Vnum / (2 * t)
        v = sqrt_in_field(V)
        if v is None or v == zero:
            continue
        u = d1 / (2 * v)
        y = K.element(u, v)
        if y * y == D:
            return y
    return None


def _normalize_sign(y: NFElement):
    for c in y.coords:
        if c > 0:
            return y
        if c < 0:
            return -y
    return y


def _sqrt_quadratic(D: NFElement):
    """Exact square root in a quadratic field Q(w), w^2 = s*w + t."""
    K = D.field
    m = K.min_poly
    s, t = -m[1], -m[0]  # w^2 = s*w + t
    d0, d1 = D.coords
    # (u + v*w)^2 = u^2 + t*v^2 + (2uv + s v^2) w
    if d1 == 0:
        r = _sqrt_fraction(d0)
        if r is not None:
            return _normalize_sign(K.element([r]))
        # try u = 0: t*v^2 + s*v^2*w ... only if s == 0
        if s == 0 and t != 0:
            r = _sqrt_fraction(d0 / t)
            if r is not None:
                return _normalize_sign(K.element([0, r]))
        if s != 0:
            # general fallthrough to the resolvent below with d1 = 0
            pass
        else:
            return None
    # solve u from 2uv + s v^2 = d1, u = (d1 - s v^2) / (2v); substitute:
    # u^2 + t v^2 = d0 -> quartic in v; set V = v^2:
    # (d1 - sV)^2 / (4V) + tV = d0  ->  (s^2 + 4t) V^2 - (2 s d1 + 4 d0) V + d1^2 = 0
    A = s * s + 4 * t
    B = -(2 * s * d1 + 4 * d0)
    C = d1 * d1
    sols = []
    if A == 0:
        if B != 0:
            sols = [-C / B]
    else:
        disc = B * B - 4 * A * C
        rd = _sqrt_fraction(disc)
        if rd is not None:
            sols = [(-B + rd) / (2 * A), (-B - rd) / (2 * A)]
    for V in sols:
        if V < 0:
            continue
        v = _sqrt_fraction(V)
        if v is None:
            continue
        if v == 0:
            if d1 == 0:
                r = _sqrt_fraction(d0)
                if r is not None:
                    return _normalize_sign(K.element([r]))
            continue
        u = (d1 - s * V) / (2 * v)
        y = K.element([u, v])
        if y * y == D:
            return _normalize_sign(y)
    return None



def _coeff_bits(values):
    b = 1
    for v in values:
        b = max(b, abs(v.numerator).bit_length(), v.denominator.bit_length())
    return b


def _adaptive_prec(K, extra_values):
    """Working precision scaled to the coefficient sizes involved."""
    bk = _coeff_bits(K.min_poly.coeffs)
    be = _coeff_bits(extra_values) if extra_values else 1
    return max(256, 2 * (bk * K.degree + be) + 192)

def _sqrt_numeric(D: NFElement):
    """Square root via embeddings + rational reconstruction + exact check."""
    K = D.field
    d = K.degree
    prec = _adaptive_prec(K, D.coords)
    cap = max(4096, 4 * prec)
    while prec <= cap:
        with mpmath.workprec(prec):
            roots = K.embeddings(prec)
            vals = D.embed(prec)
            sqrts = [mpmath.sqrt(v) for v in vals]
            # solve Vandermonde system for each sign assignment; embeddings come
            # in conjugate pairs, signs of a pair are tied by conjugation
            import itertools

            n = len(roots)
            V = mpmath.matrix(n, n)
            for i, r in enumerate(roots):
                p = mpmath.mpc(1)
                for j in range(n):
                    V[i, j] = p
                    p = p * r
            for signs in itertools.product([1, -1], repeat=n):
                rhs = mpmath.matrix([signs[i] * sqrts[i] for i in range(n)])
                try:
                    sol = mpmath.lu_solve(V, rhs)
                except ZeroDivisionError:
                    continue
                if any(abs(mpmath.im(x)) > mpmath.mpf(2) ** (-prec // 4) for x in sol):
                    continue
                den_bound = 1 << (prec // 3)
                coords = []
                ok = True
                for x in sol:
                    q = _mpf_to_fraction(mpmath.re(x), den_bound)
                    if not _frac_close(q, mpmath.re(x), prec):
                        ok = False
                        break
                    coords.append(q)
                if not ok:
                    continue
                y = K.element(coords)
                if y * y == D:
                    return _normalize_sign(y)
        prec *= 2
    return None


def roots_in_field(f: UniPoly, K):
    """All roots of f lying in K, each verified exactly by substitution."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    if isinstance(K, RationalField):
        return rational_roots(f)
    if isinstance(K, QuadExt):
        return _roots_quadext(f, K)
    assert isinstance(K, NumberField)
    if K.degree == 1 and f.field == QQ:
        return [K.element([r]) for r in rational_roots(f)]
    fk = _lift_poly(f, K)
    d = fk.degree
    if d <= 0:
        return []
    if d == 1:
        return [-fk[0] / fk[1]]
    if d == 2:
        a, b, c = fk[2], fk[1], fk[0]
        disc = b * b - 4 * a * c
        r = sqrt_in_field(disc)
        if r is None:
            return []
        out = [(-b + r) / (2 * a), (-b - r) / (2 * a)]
        return _dedup([x for x in out if fk(x).is_zero()])
    return _roots_numeric(fk, K)


def _lift_poly(f: UniPoly, K: NumberField) -> UniPoly:
    if f.field == K:
        return f
    if f.field == QQ:
        return UniPoly(K, [K.element([c]) for c in f.coeffs])
    raise FieldMismatch("cannot lift polynomial")


def _dedup(xs):
    out = []
    for x in xs:
        if all(not (x == y) for y in out):
            out.append(x)
    return out


def _roots_numeric(f: UniPoly, K: NumberField):
    """Roots in K of a polynomial over K via embedding assignments."""
    import itertools

    dK = K.degree
    deg = f.degree
    found = []
    allc = []
    for c in f.coeffs:
        allc.extend(c.coords if isinstance(c, NFElement) else [_frac(c)])
    prec = _adaptive_prec(K, allc)
    cap = max(4096, 4 * prec)
    while prec <= cap and not found:
        with mpmath.workprec(prec):
            roots_K = K.embeddings(prec)
            per_embedding = []
            degenerate = False
            for i in range(dK):
                cs = []
                for c in reversed(f.coeffs):
                    v = c.embed(prec)[i] if isinstance(c, NFElement) else mpmath.mpf(
                        c.numerator
                    ) / c.denominator
                    cs.append(v)
                try:
                    per_embedding.append(
                        mpmath.polyroots(cs, maxsteps=200, extraprec=prec // 2)
                    )
                except mpmath.libmp.NoConvergence:
                    degenerate = True
                    break
            if degenerate:
                prec *= 2
                continue
            V = mpmath.matrix(dK, dK)
            for i, r in enumerate(roots_K):
                p = mpmath.mpc(1)
                for j in range(dK):
                    V[i, j] = p
                    p = p * r
            den_bound = 1 << (prec // 3)
            for assign in itertools.product(range(deg), repeat=dK):
                rhs = mpmath.matrix([per_embedding[i][assign[i]] for i in range(dK)])
                try:
                    sol = mpmath.lu_solve(V, rhs)
                except ZeroDivisionError:
                    continue
                if any(abs(mpmath.im(x)) > mpmath.mpf(2) ** (-prec // 4) for x in sol):
                    continue
                coords = []
                ok = True
                for x in sol:
                    q = _mpf_to_fraction(mpmath.re(x), den_bound)
                    if not _frac_close(q, mpmath.re(x), prec):
                        ok = False
                        break
                    coords.append(q)
                if not ok:
                    continue
                y = K.element(coords)
                if f(y).is_zero() if isinstance(f(y), NFElement) else f(y) == 0:
                    found.append(y)
        prec *= 2
    return _dedup(found)


def _roots_quadext(f: UniPoly, K) -> list:
    """Roots over a quadratic extension: zero roots stripped, then deg <= 2."""
    zero = K.zero
    coeffs = [K.coerce(c) for c in f.coeffs]
    roots = []
    while coeffs and coeffs[0] == zero:
        if not roots:
            roots.append(zero)
        coeffs.pop(0)
    d = len(coeffs) - 1
    if d <= 0:
        return roots
    if d == 1:
        return _dedup(roots + [-coeffs[0] / coeffs[1]])
    if d == 2:
        a, b, c = coeffs[2], coeffs[1], coeffs[0]
        r = sqrt_in_field(b * b - 4 * a * c)
        if r is None:
            return roots
        cands = [(-b + r) / (2 * a), (-b - r) / (2 * a)]
        return _dedup(roots + cands)
    raise UnsupportedDegree("degree > 2 over a quadratic extension")


def poly_roots_in_field(f: UniPoly, K) -> list:
    """Spec operation: roots in K for deg f <= 3 (UnsupportedDegree beyond)."""
    if f.degree > 3:
        raise UnsupportedDegree(f"degree {f.degree} > 3")
    return roots_in_field(f, K)


# ---------------------------------------------------------------------------
# automorphisms


class FieldAutomorphism:
    """Automorphism of a number field, given by the image of the generator."""

    def __init__(self, field: NumberField, image_of_generator: NFElement):
        assert image_of_generator.field == field
        mp = field.min_poly
        val = _lift_poly(mp, field)(image_of_generator)
        if not val.is_zero():
            raise ValueError("image of generator is not a root of the minimal polynomial")
        self.field = field
        self.image_of_generator = image_of_generator
        # powers of the image, for fast application
        pows = [field.one]
        for _ in range(field.degree - 1):
            pows.append(pows[-1] * image_of_generator)
        self._pows = pows

    def __call__(self, a: NFElement) -> NFElement:
        assert a.field == self.field
        out = self.field.zero
        for c, p in zip(a.coords, self._pows):
            if c != 0:
                out = out + p * c
        return out

    def is_identity(self):
        return self.image_of_generator == self.field.gen

    def __repr__(self):
        return f"sigma: c -> {self.image_of_generator}"


def cyclic_generator(K: NumberField) -> FieldAutomorphism:
    """A generator of Gal(K|Q) for quadratic or cyclic cubic K."""
    if K.degree == 2:
        b = K.min_poly[1]
        return FieldAutomorphism(K, K.element([-b, -1]))  # the other root -b - c
    if K.degree == 3:
        # divide the minimal polynomial by (x - c) over K and solve the quadratic
        mk = _lift_poly(K.min_poly, K)
        lin = UniPoly(K, [-K.gen, K.one])
        quo, rem = mk.divmod(lin)
        assert rem.is_zero()
        a, b, c = quo[2], quo[1], quo[0]
        disc = b * b - 4 * a * c
        r = sqrt_in_field(disc)
        if r is None:
            raise NotGalois("cubic field is not Galois (discriminant not a square)")
        img = (-b + r) / (2 * a)
        if img == K.gen:
            img = (-b - r) / (2 * a)
        return FieldAutomorphism(K, img)
    raise DegreeOutOfRange("cyclic_generator supports degrees 2 and 3")


# ---------------------------------------------------------------------------
# relative quadratic extensions (for scalar extension of algebras over k')


class QuadExt:
    """Quadratic extension F(sqrt(delta)) of an arbitrary base field F."""

    def __init__(self, base, delta):
        self.base = base
        self.delta = base.coerce(delta)
        if sqrt_in_field(self.delta) is not None:
            raise ValueError("delta is a square; extension is not a field")

    @property
    def zero(self):
        return QuadExtElement(self, self.base.zero, self.base.zero)

    @property
    def one(self):
        return QuadExtElement(self, self.base.one, self.base.zero)

    @property
    def gen(self):
        return QuadExtElement(self, self.base.zero, self.base.one)

    def element(self, p, q=None):
        if q is None:
            q = self.base.zero
        return QuadExtElement(self, self.base.coerce(p), self.base.coerce(q))

    def coerce(self, x):
        if isinstance(x, QuadExtElement) and x.field == self:
            return x
        if isinstance(x, QuadExtElement):
            raise FieldMismatch("mixed quadratic extensions")
        return QuadExtElement(self, self.base.coerce(x), self.base.zero)

    def __eq__(self, other):
        return (
            isinstance(other, QuadExt)
            and self.base == other.base
            and self.delta == other.delta
        )

    def __hash__(self):
        return hash(("QuadExt", self.base, self.delta))

    def __repr__(self):
        return f"QuadExt({self.base}, delta={self.delta})"


class QuadExtElement:
    """p + q*sqrt(delta) over the base field."""

    __slots__ = ("field", "p", "q")

    def __init__(self, field, p, q):
        self.field = field
        self.p = p
        self.q = q

    def is_zero(self):
        z = self.field.base.zero
        return self.p == z and self.q == z

    def conj(self):
        return QuadExtElement(self.field, self.p, -self.q)

    def _same(self, other):
        if isinstance(other, QuadExtElement):
            if other.field != self.field:
                raise FieldMismatch("mixed extensions")
            return other
        return self.field.coerce(other)

    def _compatible(self, other):
        return isinstance(other, (int, Fraction, NFElement, QuadExtElement))

    def __add__(self, other):
        if not self._compatible(other):
            return NotImplemented
        o = self._same(other)
        return QuadExtElement(self.field, self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __sub__(self, other):
        if not self._compatible(other):
            return NotImplemented
        o = self._same(other)
        return QuadExtElement(self.field, self.p - o.p, self.q - o.q)

    def __rsub__(self, other):
        if not self._compatible(other):
            return NotImplemented
        return self._same(other).__sub__(self)

    def __neg__(self):
        return QuadExtElement(self.field, -self.p, -self.q)

    def __mul__(self, other):
        if not self._compatible(other):
            return NotImplemented
        o = self._same(other)
        d = self.field.delta
        return QuadExtElement(
            self.field, self.p * o.p + d * self.q * o.q, self.p * o.q + self.q * o.p
        )

    __rmul__ = __mul__

    def inverse(self):
        d = self.field.delta
        n = self.p * self.p - d * self.q * self.q
        if n == self.field.base.zero:
            raise DivisionByZero("inverse of zero")
        return QuadExtElement(self.field, self.p / n, -self.q / n)

    def __truediv__(self, other):
        return self * self._same(other).inverse()

    def __rtruediv__(self, other):
        return self._same(other) * self.inverse()

    def __pow__(self, n):
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        try:
            o = self._same(other)
        except (FieldMismatch, TypeError):
            return NotImplemented
        return self.p == o.p and self.q == o.q

    def __hash__(self):
        return hash((self.field, self.p, self.q))

    def __repr__(self):
        return f"({self.p} + {self.q}*r)"


# ---------------------------------------------------------------------------
# tower flattening


def flatten_tower(base: NumberField, rel_poly: UniPoly):
    """Flatten the tower base(c)/Q, c a root of rel_poly over base, to Q(theta).

    Returns (L, base_gen_in_L, c_in_L).  theta = a + t*c for the smallest
    natural t; its minimal polynomial over Q is computed by Krylov iteration
    on the tensor basis, and is irreducible automatically (the tower is a
    field), so no factorization is needed.
    """
    m = base.degree
    r = rel_poly.degree
    assert r >= 2, "relative extension must be proper"
    n = m * r
    if n > 6:
        raise DegreeOutOfRange("flattened degree exceeds 6")
    # tensor basis a^i c^j, index i + m*j; multiplication tables
    rel = [rel_poly[k] for k in range(r + 1)]  # coefficients in base

    def mul_by_a(vec):
        out = [Fraction(0)] * n
        for j in range(r):
            elt = base.element([vec[i + m * j] for i in range(m)]) * base.gen
            for i in range(m):
                out[i + m * j] = elt.coords[i]
        return out

    def mul_by_c(vec):
        # vec as coefficients over base: e_j = coefficient of c^j (element of base)
        es = [base.element([vec[i + m * j] for i in range(m)]) for j in range(r)]
        shifted = [base.zero] + es[:-1]
        top = es[-1]
        if not (top == base.zero):
            for k in range(r):
                shifted[k] = shifted[k] - top * rel[k]
        out = []
        for j in range(r):
            out.extend(shifted[j].coords)
        return out

    def add(u, v):
        return [x + y for x, y in zip(u, v)]

    def scale(u, s):
        return [x * s for x in u]

    for t in range(1, 40):
        # theta = a + t*c acting on the tensor basis
        one_vec = [Fraction(0)] * n
        one_vec[0] = Fraction(1)

        def mul_theta(vec, t=t):
            u = mul_by_a(vec)
            v = mul_by_c(vec)
            return add(u, scale(v, Fraction(t)))

        if m == 1:
            def mul_theta(vec, t=t):  # base is Q; theta = a0 + t*c with a = a0 rational
                v = mul_by_c(vec)
                a0 = -base.min_poly[0]
                return add(scale(vec, a0), scale(v, Fraction(t)))

        # Krylov: powers of theta
        vecs = [one_vec]
        cur = one_vec
        for _ in range(n):
            cur = mul_theta(cur)
            vecs.append(cur)
        # find the first linear dependence
        rows = []
        pivots = {}
        rel_found = None
        for k, v in enumerate(vecs):
            w = [Fraction(x) for x in v]
            combo = [Fraction(0)] * len(vecs)
            combo[k] = Fraction(1)
            for pc, (pr, pcombo) in sorted(pivots.items()):
                if w[pc] != 0:
                    f = w[pc]
                    w = [a - f * b for a, b in zip(w, pr)]
                    combo = [a - f * b for a, b in zip(combo, pcombo)]
            nzc = next((i for i, x in enumerate(w) if x != 0), None)
            if nzc is None:
                rel_found = (k, combo)
                break
            inv = Fraction(1) / w[nzc]
            pivots[nzc] = ([x * inv for x in w], [x * inv for x in combo])
        assert rel_found is not None
        k, combo = rel_found
        if k < n:
            continue  # theta not primitive, try next t
        # minimal polynomial: sum combo[i] theta^i = 0 with combo[k] = 1
        mp = UniPoly(QQ, combo[: k + 1]).monic()
        L = NumberField(mp, _trusted=True)
        # express a and c in the power basis of theta: solve V x = target
        V_cols = [vecs[i] for i in range(n)]  # theta^i in tensor coords
        a_vec = [Fraction(0)] * n
        if m > 1:
            a_vec[1] = Fraction(1)
        else:
            a_vec[0] = -base.min_poly[0]
        c_vec = [Fraction(0)] * n
        c_vec[m] = Fraction(1)
        a_in_L = L.element(_solve_square([ [V_cols[j][i] for j in range(n)] for i in range(n)], a_vec))
        c_in_L = L.element(_solve_square([ [V_cols[j][i] for j in range(n)] for i in range(n)], c_vec))
        return L, a_in_L, c_in_L
    raise RuntimeError("no primitive element found (unexpectedly)")


def _solve_square(m, b):
    """Solve m x = b for square rational m by Gaussian elimination."""
    n = len(m)
    a = [row[:] + [b[i]] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]
