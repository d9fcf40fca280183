"""Exact arithmetic in multi-quadratic towers Q(i, sqrt(k1), ..., sqrt(kt)).

An element is a finite sum  sum_k  c_k * sqrt(k)  over signed square-free
integer radicands k, with rational coefficients c_k:

*  k = 1   denotes the rational part,
*  k = -1  denotes i,
*  k = -m  (m > 1) denotes i*sqrt(m).

Products of radicals rewrite by gcd extraction,
sqrt(a)*sqrt(b) = g*sqrt(m) with g = gcd, m square-free, and a factor -1
whenever both radicands are negative (i^2 = -1).  Elements are kept in
canonical form (square-free keys, no zero coefficients), so equality is
structural.  Nonzero canonical elements are nonzero complex numbers, which
``to_complex`` exploits to produce enclosures of guaranteed relative width.

``Rational`` is the standard library Fraction: it already maintains the
gcd-reduced, positive-denominator canonical form required here.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from .errors import UNREPRESENTABLE, Unrepresentable

__all__ = [
    "Rational",
    "FieldElement",
    "ComplexBall",
    "Unrepresentable",
    "UNREPRESENTABLE",
    "sqrt_if_nice",
    "render_field_element",
    "parse_field_element",
    "field_element_to_json",
    "field_element_from_json",
]

Rational = Fraction


# -- integer factorization helpers --------------------------------------------

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
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


def _pollard_rho(n):
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"factorization failed for {n}")


def factorize(n):
    """Prime factorization of n >= 1 as an exponent dict."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return out


def squarefree_decompose(n):
    """n = s^2 * m with m square-free (sign carried by m); n != 0."""
    if n == 0:
        raise ValueError("zero has no square-free decomposition")
    sign = -1 if n < 0 else 1
    s = 1
    m = 1
    for p, e in factorize(abs(n)).items():
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, sign * m


def _rad_mul(a, b):
    """sqrt(a)*sqrt(b) = mult * sqrt(rad) for signed square-free a, b."""
    if a == 1:
        return 1, b
    if b == 1:
        return 1, a
    aa, bb = abs(a), abs(b)
    g = math.gcd(aa, bb)
    m = (aa // g) * (bb // g)
    if a < 0 and b < 0:
        return -g, m
    if (a < 0) != (b < 0):
        return g, -m
    return g, m


# -- the field element ---------------------------------------------------------


class FieldElement:
    """Immutable element of the radical tower; see the module docstring."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None, _canonical=False):
        if terms is None:
            terms = {}
        if not _canonical:
            clean = {}
            for rad, c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                if rad == 0:
                    raise ValueError("radicand 0 is not allowed")
                s, m = squarefree_decompose(rad)
                if s != 1:
                    c *= s
                clean[m] = clean.get(m, Fraction(0)) + c
            terms = {r: c for r, c in clean.items() if c != 0}
        self.terms = terms
        self._hash = None

    # constructors
    @classmethod
    def zero(cls):
        return cls({}, _canonical=True)

    @classmethod
    def one(cls):
        return cls({1: Fraction(1)}, _canonical=True)

    @classmethod
    def from_rational(cls, q):
        q = Fraction(q)
        return cls({1: q} if q else {}, _canonical=True)

    @classmethod
    def i(cls):
        return cls({-1: Fraction(1)}, _canonical=True)

    @classmethod
    def term(cls, coeff, rad):
        """coeff * sqrt(rad) for an arbitrary nonzero integer radicand."""
        return cls({rad: Fraction(coeff)})

    @classmethod
    def sqrt_int(cls, n):
        """Exact sqrt of an integer: sqrt(12) = 2*sqrt(3), sqrt(-7) = i*sqrt(7)."""
        if n == 0:
            return cls.zero()
        s, m = squarefree_decompose(n)
        return cls({m: Fraction(s)}, _canonical=True)

    # predicates and accessors
    def is_zero(self):
        return not self.terms

    def is_rational(self):
        return not self.terms or set(self.terms) == {1}

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.terms.get(1, Fraction(0))

    def rational_part(self):
        return self.terms.get(1, Fraction(0))

    def is_real(self):
        return all(r > 0 for r in self.terms)

    def support_primes(self):
        """Primes under the radicals, plus -1 when i is involved."""
        out = set()
        for r in self.terms:
            if r < 0:
                out.add(-1)
            for p in factorize(abs(r)):
                out.add(p)
        out.discard(1)
        return out

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for r, c in other.terms.items():
            s = out.get(r)
            if s is None:
                out[r] = c
            else:
                s = s + c
                if s:
                    out[r] = s
                else:
                    del out[r]
        return FieldElement(out, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(
            {r: -c for r, c in self.terms.items()}, _canonical=True
        )

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return FieldElement.zero()
        # fast path: rational * anything
        if set(a) == {1}:
            q = a[1]
            return FieldElement({r: c * q for r, c in b.items()}, _canonical=True)
        if set(b) == {1}:
            q = b[1]
            return FieldElement({r: c * q for r, c in a.items()}, _canonical=True)
        out = {}
        for r1, c1 in a.items():
            for r2, c2 in b.items():
                mult, rad = _rad_mul(r1, r2)
                c = c1 * c2
                if mult != 1:
                    c *= mult
                s = out.get(rad)
                out[rad] = c if s is None else s + c
        return FieldElement(
            {r: c for r, c in out.items() if c != 0}, _canonical=True
        )

    __rmul__ = __mul__

    def scaled(self, q):
        """Multiply by an exact rational, cheaply."""
        q = Fraction(q)
        if not q:
            return FieldElement.zero()
        return FieldElement(
            {r: c * q for r, c in self.terms.items()}, _canonical=True
        )

    def __pow__(self, n):
        if n < 0:
            return self.invert() ** (-n)
        out = FieldElement.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def _flip(self, which):
        """Conjugation flipping one radical: which = -1 flips i, a prime p
        flips sqrt(p)."""
        if which == -1:
            return FieldElement(
                {r: (-c if r < 0 else c) for r, c in self.terms.items()},
                _canonical=True,
            )
        return FieldElement(
            {r: (-c if abs(r) % which == 0 else c) for r, c in self.terms.items()},
            _canonical=True,
        )

    def conjugate(self):
        """Complex conjugation: flip the sign of every i-carrying term."""
        return self._flip(-1)

    def invert(self):
        """Multiplicative inverse by successive conjugation.

        Each round multiplies numerator and denominator by the conjugate
        flipping one radical, removing that radical from the denominator;
        at most (number of distinct primes) + 1 rounds.
        """
        if not self.terms:
            raise ZeroDivisionError("inverse of zero field element")
        num = FieldElement.one()
        den = self
        while not den.is_rational():
            flips = sorted(den.support_primes())
            sigma = den._flip(flips[0])
            num = num * sigma
            den = den * sigma
        return num.scaled(1 / den.rational_value())

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_rational():
            return self.scaled(1 / other.rational_value())
        return self * other.invert()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.invert()

    # comparisons / hashing
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self):
        """(rad, coeff) pairs: |rad| ascending, positive radicand first."""
        return sorted(self.terms.items(), key=lambda t: (abs(t[0]), t[0] < 0))

    def __repr__(self):
        return f"FieldElement({render_field_element(self)})"

    def to_complex(self, precision=53):
        """Complex enclosure of guaranteed width <= 2^(1-precision)*|value|.

        Nonzero canonical elements are nonzero numbers, so evaluating at
        increasing working precision eventually clears any cancellation and
        meets the relative-width contract.
        """
        if precision < 53:
            raise ValueError("precision must be at least 53 bits")
        if not self.terms:
            return ComplexBall(mpmath.mpc(0), mpmath.mpf(0))
        work = precision + 24
        while True:
            with mpmath.workprec(work):
                total = mpmath.mpc(0)
                abssum = mpmath.mpf(0)
                for rad, c in self.terms.items():
                    cval = mpmath.mpf(c.numerator) / c.denominator
                    if rad == 1:
                        t = mpmath.mpc(cval)
                    elif rad == -1:
                        t = mpmath.mpc(0, cval)
                    elif rad > 0:
                        t = mpmath.mpc(cval * mpmath.sqrt(rad))
                    else:
                        t = mpmath.mpc(0, cval * mpmath.sqrt(-rad))
                    total += t
                    abssum += abs(t)
                err = abssum * mpmath.mpf(2) ** (-(work - 8))
                # relative-width contract: 2*err <= 2^(1-precision)*|value|
                if err <= abs(total) * mpmath.mpf(2) ** (-precision):
                    return ComplexBall(+total, +err)
            work *= 2


def _coerce(x):
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, (int, Fraction)):
        return FieldElement.from_rational(x)
    return NotImplemented


FE = FieldElement


# -- restricted square roots ---------------------------------------------------


def _sqrt_fraction(q):
    """Exact sqrt of a rational as a tower element (always representable)."""
    q = Fraction(q)
    if q == 0:
        return FieldElement.zero()
    s, m = squarefree_decompose(q.numerator * q.denominator)
    return FieldElement({m: Fraction(s, q.denominator)}, _canonical=True)


def _rational_sqrt_or_none(q):
    """sqrt of q as a plain Fraction, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def _split_square_times_squarefree(w):
    """w = u^2 * d with u rational > 0, d square-free positive; w > 0."""
    w = Fraction(w)
    _, d = squarefree_decompose(w.numerator * w.denominator)
    u2 = w / d
    u = _rational_sqrt_or_none(u2)
    return u, d


def _coprime_splittings(m):
    """Ordered pairs (a, b) of coprime positive integers with a*b = m."""
    primes = list(factorize(m))
    out = []
    for mask in range(1 << len(primes)):
        a = 1
        for i, p in enumerate(primes):
            if mask >> i & 1:
                a *= p
        out.append((a, m // a))
    return out


def sqrt_if_nice(a):
    """Square root inside the tower when one exists in the searchable shape.

    Succeeds when a = q * s^2 for rational q and a tower element s with at
    most two terms; detection is a bounded search over the coprime splittings
    of the radicand support.  Returns ``UNREPRESENTABLE`` otherwise; numeric
    fallback is the caller's job.  Every returned value x satisfies x*x == a
    exactly (verified before returning).
    """
    a = _coerce(a)
    if a.is_zero():
        return FieldElement.zero()
    items = a.sorted_terms()
    if len(items) == 1:
        rad, c = items[0]
        if rad == 1:
            return _sqrt_fraction(c)
        if rad == -1:
            return _sqrt_pure_imaginary(c)
        return UNREPRESENTABLE
    if len(items) == 2 and items[0][0] == 1:
        c1 = items[0][1]
        r, c2 = items[1]
        x = _sqrt_two_term(c1, c2, r)
        if x is not None and x * x == a:
            return x
        return UNREPRESENTABLE
    return UNREPRESENTABLE


def _sqrt_pure_imaginary(c):
    """sqrt(c*i): c*i = (u*sqrt(d)*(1 ± i))^2 with 2*u^2*d = |c|."""
    w = abs(Fraction(c)) / 2
    u, d = _split_square_times_squarefree(w)
    if u is None:
        return UNREPRESENTABLE
    sign = 1 if c > 0 else -1
    return FieldElement({d: u, -d: sign * u})


def _sqrt_two_term(c1, c2, r):
    """Search x = u*sqrt(k1) + v*sqrt(k2) with x^2 = c1 + c2*sqrt(r).

    The two rational-part contributions are the roots of
    S^2 - c1*S + r*c2^2/4, independent of how the radicand support is split.
    """
    disc = c1 * c1 - Fraction(r) * c2 * c2
    t = _rational_sqrt_or_none(disc)
    if t is None:
        return None
    roots = [(c1 + t) / 2, (c1 - t) / 2]
    if r > 0:
        sign_patterns = [(1, 1), (-1, -1)]
    else:
        sign_patterns = [(1, -1)]
    for s_first, s_second in ((0, 1), (1, 0)):
        s1v, s2v = roots[s_first], roots[s_second]
        for a1, b1 in _coprime_splittings(abs(r)):
            for sg1, sg2 in sign_patterns:
                w1 = Fraction(sg1) * s1v / a1
                w2 = Fraction(sg2) * s2v / b1
                if w1 <= 0 or w2 <= 0:
                    continue
                u, d = _split_square_times_squarefree(w1)
                if u is None or math.gcd(d, a1 * b1) != 1:
                    continue
                v2 = w2 / d
                v = _rational_sqrt_or_none(v2)
                if v is None:
                    continue
                # fix the sign of v from the cross term 2*u*v*G = c2, |G| = d
                g = -d if (sg1, sg2) == (-1, -1) else d
                if 2 * u * v * g != c2:
                    v = -v
                    if 2 * u * v * g != c2:
                        continue
                k1 = sg1 * d * a1
                k2 = sg2 * d * b1
                if k1 == k2:
                    continue
                return FieldElement({k1: u, k2: v})
    return None


# -- complex enclosures ----------------------------------------------------------


class ComplexBall:
    """Midpoint-radius complex enclosure on top of mpmath.

    Arithmetic is outward-padded by a few ulps of the current working
    precision, which keeps the enclosures honest for the verification jobs
    here (residual checks against tolerances far above 2^-prec).
    """

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mpmath.mpc(mid)
        self.rad = mpmath.mpf(rad)

    @classmethod
    def exact(cls, value):
        return cls(value, 0)

    @staticmethod
    def _eps():
        return mpmath.mpf(2) ** (6 - mpmath.mp.prec)

    def __add__(self, other):
        other = _ball(other)
        mid = self.mid + other.mid
        spread = abs(self.mid) + abs(other.mid) + self.rad + other.rad
        # rounding error of the midpoint op scales with the operands, not the
        # result (cancellation), so the slop uses the operand magnitudes
        rad = self.rad + other.rad + spread * self._eps()
        return ComplexBall(mid, rad)

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.mid, self.rad)

    def __sub__(self, other):
        other = _ball(other)
        return self + (-other)

    def __rsub__(self, other):
        return _ball(other) + (-self)

    def __mul__(self, other):
        other = _ball(other)
        mid = self.mid * other.mid
        am, bm = abs(self.mid), abs(other.mid)
        rad = am * other.rad + bm * self.rad + self.rad * other.rad
        rad = rad + (am * bm + rad) * self._eps()
        return ComplexBall(mid, rad)

    __rmul__ = __mul__

    def contains_zero(self):
        return abs(self.mid) <= self.rad

    def mag_upper(self):
        return abs(self.mid) + self.rad

    def mag_lower(self):
        lo = abs(self.mid) - self.rad
        return lo if lo > 0 else mpmath.mpf(0)

    def width(self):
        return 2 * self.rad

    def __repr__(self):
        return f"ComplexBall({self.mid}, rad={mpmath.nstr(self.rad, 3)})"


def _ball(x):
    if isinstance(x, ComplexBall):
        return x
    if isinstance(x, FieldElement):
        return x.to_complex(mpmath.mp.prec)
    if isinstance(x, Fraction):
        return ComplexBall(mpmath.mpf(x.numerator) / x.denominator, 0)
    return ComplexBall(x, 0)


# -- rendering and parsing ------------------------------------------------------


def _atom(c, rad, lead=False):
    """Render c*sqrt(rad); ``lead`` drops the sign handling to the caller."""
    c = Fraction(c)
    parts = []
    if rad == 1:
        return str(c)
    mag = abs(c)
    sign = "-" if c < 0 else ""
    if mag != 1:
        parts.append(str(mag))
    if rad < 0:
        parts.append("I")
    if abs(rad) != 1:
        parts.append(f"sqrt({abs(rad)})")
    return sign + "*".join(parts)


def render_field_element(fe, factored=True):
    """Deterministic text form, e.g. ``1/14*(1 - 3/7*I*sqrt(7))``.

    Term order: |rad| ascending, positive radicand before negative.  With
    ``factored`` (the default, mirroring the appendix tables of the usual
    references) multi-term values are written as leading-coefficient times a
    parenthesized sum whose first coefficient is 1.
    """
    fe = _coerce(fe)
    items = fe.sorted_terms()
    if not items:
        return "0"
    if len(items) == 1:
        return _atom(items[0][1], items[0][0])
    if factored:
        lead = items[0][1]
        inner = render_field_element(fe.scaled(1 / lead), factored=False)
        if lead == 1:
            return inner
        return f"{lead}*({inner})"
    out = []
    for idx, (rad, c) in enumerate(items):
        if idx == 0:
            out.append(_atom(c, rad))
        else:
            body = _atom(abs(c), rad)
            out.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(out)


class _Parser:
    """Recursive-descent parser for the rendered grammar.

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := rational | 'I' | 'sqrt' '(' integer ')' | '(' expr ')'
    """

    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        value = self.expr()
        self._skip()
        if self.pos != len(self.text):
            raise ValueError(
                f"trailing input at {self.pos}: {self.text[self.pos:]!r}"
            )
        return value

    def expr(self):
        value = self.term()
        while True:
            ch = self._peek()
            if ch == "+":
                self.pos += 1
                value = value + self.term()
            elif ch == "-":
                self.pos += 1
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.factor()
        while self._peek() == "*":
            self.pos += 1
            value = value * self.factor()
        return value

    def factor(self):
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if self._peek() != ")":
                raise ValueError("unbalanced parenthesis")
            self.pos += 1
            return value
        if ch == "-":
            self.pos += 1
            return -self.factor()
        if ch == "+":
            self.pos += 1
            return self.factor()
        if self.text.startswith("I", self.pos):
            self.pos += 1
            return FieldElement.i()
        if self.text.startswith("sqrt", self.pos):
            self.pos += 4
            if self._peek() != "(":
                raise ValueError("sqrt needs parentheses")
            self.pos += 1
            n = self._integer()
            if self._peek() != ")":
                raise ValueError("unbalanced sqrt parenthesis")
            self.pos += 1
            return FieldElement.sqrt_int(n)
        return FieldElement.from_rational(self._rational())

    def _integer(self):
        self._skip()
        start = self.pos
        if self._peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ValueError(f"expected integer at {start}")
        return int(self.text[start : self.pos])

    def _rational(self):
        num = self._integer()
        if self._peek() == "/":
            self.pos += 1
            den = self._integer()
            return Fraction(num, den)
        return Fraction(num)


def parse_field_element(text):
    return _Parser(text).parse()


def field_element_to_json(fe):
    fe = _coerce(fe)
    return {
        "terms": [
            {"rad": rad, "num": str(c.numerator), "den": str(c.denominator)}
            for rad, c in fe.sorted_terms()
        ]
    }


def field_element_from_json(obj):
    return FieldElement(
        {int(t["rad"]): Fraction(int(t["num"]), int(t["den"])) for t in obj["terms"]}
    )
