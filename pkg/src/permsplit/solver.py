"""Solution points of the idempotency systems.

A zero-dimensional lex basis is triangular in a usable sense: every variable
x_j owns a basis element whose leading monomial is a pure power x_j^m, and
under lex (weakest variable first) that element involves x_2..x_j only.
Enumeration walks this chain: factor the univariate in the least variable,
back-substitute, recurse.

Exact root extraction covers degrees 1 and 2 over the tower plus rational
roots of any degree; deeper factors are solved numerically (root finding plus
Newton polishing, with enclosure verification by ball arithmetic and
precision doubling) and flagged ``numeric``.  Exact coordinates substitute to
exactly zero in every generator; numeric ones carry certified enclosures for
which every generator's interval evaluation contains zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import (
    InvariantViolation,
    NotZeroDimensional,
    ResourceLimit,
    SliceExhausted,
    UNREPRESENTABLE,
)
from .exactfield import ComplexBall, FieldElement, sqrt_if_nice, factorize
from .polynomial import (
    Ideal,
    Poly,
    groebner_basis,
    hilbert_dimension,
    is_trivial_basis,
    max_independent_set,
)

__all__ = [
    "SolutionPoint",
    "solve_zero_dimensional",
    "particular_solution_on_slice",
]

DEFAULT_PRECISION = 128
MAX_PRECISION = 2048

_PIN_VALUES = [
    Fraction(0),
    Fraction(1),
    Fraction(-1),
    Fraction(1, 2),
    Fraction(-1, 2),
    Fraction(2),
    Fraction(-2),
    Fraction(1, 3),
]


@dataclass(frozen=True)
class SolutionPoint:
    """One solution of a polynomial system over the ambient variables.

    ``values[i]`` is the exact coordinate (FieldElement) where available,
    else None with a certified enclosure in ``numeric_values[i]``.
    """

    values: tuple
    exact: tuple
    numeric_values: tuple
    precision: int = DEFAULT_PRECISION

    def __len__(self):
        return len(self.values)

    def is_exact(self):
        return all(self.exact)

    def coordinate_ball(self, i, precision=None):
        if self.exact[i]:
            return self.values[i].to_complex(precision or self.precision)
        return self.numeric_values[i]

    def sort_key(self):
        """Lexicographic on (Re, Im) of the coordinate embeddings."""
        key = []
        for i in range(len(self.values)):
            b = self.coordinate_ball(i, 64)
            key.append((mpmath.mpf(b.mid.real), mpmath.mpf(b.mid.imag)))
        return key

    def conjugate_exact(self):
        """Coordinate-wise complex conjugate; exact points only."""
        if not self.is_exact():
            raise ValueError("conjugate of a numeric point is not tracked")
        return SolutionPoint(
            tuple(v.conjugate() for v in self.values),
            self.exact,
            self.numeric_values,
            self.precision,
        )


# -- univariate helpers ---------------------------------------------------------


def _univariate_coeffs(poly, var):
    """Coefficient list (ascending) of a poly involving only ``var``."""
    coeffs = {}
    for mono, c in poly.terms.items():
        for i, e in enumerate(mono):
            if e and i != var:
                raise ValueError("poly is not univariate in the given variable")
        coeffs[mono[var]] = c
    deg = max(coeffs, default=0)
    return [coeffs.get(e, FieldElement.zero()) for e in range(deg + 1)]


def _deflate(coeffs, root):
    """Synthetic division of sum c_k x^k by (x - root); exact remainder must
    vanish (caller guarantees root)."""
    out = [FieldElement.zero()] * (len(coeffs) - 1)
    acc = FieldElement.zero()
    for k in range(len(coeffs) - 1, 0, -1):
        acc = coeffs[k] + acc
        out[k - 1] = acc
        acc = acc * root
    return out


def _poly_eval(coeffs, x):
    acc = FieldElement.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _divisors(n, cap=4096):
    n = abs(n)
    if n == 0:
        return None
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
        if len(divs) > cap:
            return None
    return divs


def _rational_roots(coeffs):
    """All rational roots, found by bounded divisor search.

    With irrational coefficients a rational root must kill every radicand
    component, so the search runs on the component of the leading
    coefficient's first radicand (a rational polynomial with nonzero leading
    entry) and each candidate is verified against the full polynomial.
    """
    import math as _math

    roots = []
    work = list(coeffs)
    while len(work) > 1 and work[0].is_zero():
        roots.append(FieldElement.zero())
        work = work[1:]
    if len(work) <= 1:
        return roots, work
    key = work[-1].sorted_terms()[0][0]
    comp = [c.terms.get(key, Fraction(0)) for c in work]
    den_lcm = 1
    for q in comp:
        den_lcm = den_lcm * q.denominator // _math.gcd(den_lcm, q.denominator)
    ints = [int(q * den_lcm) for q in comp]
    low = 0
    while ints[low] == 0:
        low += 1  # nonzero candidates divide the lowest nonzero entry
    d0 = _divisors(ints[low])
    dn = _divisors(ints[-1])
    if d0 is None or dn is None:
        return roots, work
    candidates = set()
    for p in d0:
        for q in dn:
            candidates.add(Fraction(p, q))
            candidates.add(Fraction(-p, q))
    for cand in sorted(candidates):
        fe = FieldElement.from_rational(cand)
        while len(work) > 1 and _poly_eval(work, fe).is_zero():
            roots.append(fe)
            work = _deflate(work, fe)
    return roots, work


def _quadratic_roots(coeffs):
    """Exact roots of a degree-2 factor over the tower, or None."""
    c0, c1, c2 = coeffs
    disc = c1 * c1 - FieldElement.from_rational(4) * c2 * c0
    s = sqrt_if_nice(disc)
    if s is UNREPRESENTABLE:
        return None
    inv = (FieldElement.from_rational(2) * c2).invert()
    if s.is_zero():
        return [(-c1) * inv]
    return [(-c1 + s) * inv, (-c1 - s) * inv]


# -- ball evaluation -------------------------------------------------------------


def _coeff_ball(c, prec):
    if isinstance(c, ComplexBall):
        return c
    return c.to_complex(prec)


def _eval_ball_poly(coeffs, x_ball, prec):
    acc = ComplexBall(mpmath.mpc(0), 0)
    for c in reversed(coeffs):
        acc = acc * x_ball + _coeff_ball(c, prec)
    return acc


def _eval_poly_at_balls(poly, balls, prec):
    """Interval evaluation of a multivariate poly at per-variable balls."""
    total = ComplexBall(mpmath.mpc(0), 0)
    for mono, c in poly.terms.items():
        term = _coeff_ball(c, prec)
        for i, e in enumerate(mono):
            for _ in range(e):
                term = term * balls[i]
        total = total + term
    return total


def _numeric_roots(coeffs, prec):
    """Certified enclosures of all roots of an exact/ball coefficient list.

    The enclosure radius combines the final Newton correction with a
    first-order bound for the coefficient uncertainty, sum(rad_k |x|^k)/|f'|.
    """
    with mpmath.workprec(prec + 40):
        balls = [_coeff_ball(c, prec + 40) for c in coeffs]
        mids = [b.mid for b in balls]
        deg = len(mids) - 1
        roots = mpmath.polyroots(
            list(reversed(mids)), maxsteps=200, extraprec=prec
        )
        out = []
        dpoly = [mids[k] * k for k in range(1, deg + 1)]
        tiny = mpmath.mpf(2) ** (-(prec + 20))
        for r in roots:
            x = mpmath.mpc(r)
            last = mpmath.mpf(1)
            for _ in range(80):
                fx = _horner(mids, x)
                dfx = _horner(dpoly, x)
                if dfx == 0:
                    break
                step = fx / dfx
                x -= step
                last = abs(step)
                if last < tiny * (1 + abs(x)):
                    break
            coeff_rad = mpmath.mpf(0)
            scale = mpmath.mpf(1)
            xm = max(mpmath.mpf(1), abs(x))
            for b in balls:
                coeff_rad += b.rad * scale
                scale *= xm
            dfx_abs = max(abs(_horner(dpoly, x)), mpmath.mpf(2) ** (-prec))
            rad = (
                32 * last
                + (1 + abs(x)) * mpmath.mpf(2) ** (-(prec + 10))
                + 4 * coeff_rad / dfx_abs
            )
            out.append(ComplexBall(+x, +rad))
        return out


def _horner(coeffs, x):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _dedupe_balls(balls, prec):
    """Cluster overlapping/near-identical enclosures, keeping first-found."""
    out = []
    tol = mpmath.mpf(2) ** (-max(prec // 2, 24))
    for b in balls:
        dup = False
        for kept in out:
            if abs(b.mid - kept.mid) <= tol * (1 + abs(kept.mid)) + b.rad + kept.rad:
                dup = True
                break
        if not dup:
            out.append(b)
    return out


# -- the solver -------------------------------------------------------------------


def _triangular_chain(G, ring):
    """For each variable the minimal pure-power-led basis element."""
    nvars = ring.nvars
    chain = [None] * nvars
    for g in G:
        lm = g.leading_monomial()
        support = [i for i, e in enumerate(lm) if e]
        if len(support) == 1:
            j = support[0]
            if chain[j] is None or lm[j] < chain[j].leading_monomial()[j]:
                chain[j] = g
    if any(c is None for c in chain):
        raise NotZeroDimensional(
            "some variable has no pure-power leading term in the lex basis"
        )
    return chain


def _to_lex(polys, max_pairs, max_basis):
    ring = polys[0].ring
    if ring.order == "lex":
        lex_ring = ring
        lex_gens = list(polys)
    else:
        lex_ring = ring.with_order("lex")
        lex_gens = [Poly(lex_ring, p.terms) for p in polys]
    return groebner_basis(lex_gens, max_pairs=max_pairs, max_basis=max_basis), lex_ring


def solve_zero_dimensional(
    system,
    precision=DEFAULT_PRECISION,
    max_precision=MAX_PRECISION,
    max_pairs=None,
    max_basis=None,
):
    """All solutions over the complex numbers of a zero-dimensional system.

    ``system`` is an Ideal or a list of Poly sharing one ring.  Returns
    SolutionPoints in deterministic order (lexicographic over the numeric
    embeddings of the coordinates).
    """
    from .polynomial import DEFAULT_MAX_PAIRS, DEFAULT_MAX_BASIS

    max_pairs = max_pairs or DEFAULT_MAX_PAIRS
    max_basis = max_basis or DEFAULT_MAX_BASIS
    gens = list(system.generators) if isinstance(system, Ideal) else list(system)
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise NotZeroDimensional("empty system is not zero-dimensional")
    lex_basis, lex_ring = _to_lex(gens, max_pairs, max_basis)
    if is_trivial_basis(lex_basis):
        return []
    chain = _triangular_chain(lex_basis, lex_ring)

    prec = precision
    while True:
        points = []
        _enumerate(chain, lex_ring, [], points, prec)
        verified = []
        ambiguous = 0
        for pt in points:
            status = _classify_point(pt, lex_basis, prec)
            if status == "ok":
                verified.append(pt)
            elif status == "ambiguous":
                ambiguous += 1
        if not ambiguous:
            verified.sort(key=SolutionPoint.sort_key)
            _assert_exact_roots(verified, gens)
            return verified
        if prec >= max_precision:
            raise ResourceLimit(
                f"{ambiguous} candidate roots neither verified nor rejected "
                f"up to precision {prec}"
            )
        prec *= 2


def _enumerate(chain, ring, partial, sink, prec):
    """Depth-first root enumeration along the triangular chain.

    ``partial`` holds (value, ball) pairs for assigned variables.  Returns
    False to request a global precision escalation.
    """
    j = len(partial)
    if j == len(chain):
        values = tuple(v for v, _ in partial)
        exact = tuple(v is not None for v, _ in partial)
        balls = tuple(
            None if v is not None else b for v, b in partial
        )
        sink.append(SolutionPoint(values, exact, balls, prec))
        return True
    g = chain[j]
    # substitute exact coordinates exactly
    sub = g
    numeric_positions = []
    for i, (v, b) in enumerate(partial):
        if v is not None:
            sub = sub.substitute(i, v)
        else:
            numeric_positions.append(i)
    if not numeric_positions:
        coeffs = _collect_univariate(sub, j)
        roots_exact, residual = _rational_roots(coeffs)
        if len(residual) == 2:
            roots_exact.append((-residual[0]) / residual[1])
            residual = residual[:1]
        elif len(residual) == 3:
            qr = _quadratic_roots(residual)
            if qr is not None:
                roots_exact.extend(qr)
                residual = residual[:1]
        # multiplicity is ignored: repeated roots collapse to one branch
        seen_roots = set()
        branches = []
        for root in roots_exact:
            if root not in seen_roots:
                seen_roots.add(root)
                branches.append((root, None))
        if len(residual) > 1:
            for b in _dedupe_balls(_numeric_roots(residual, prec), prec):
                branches.append((None, b))
    else:
        # some earlier coordinate is numeric: the whole level goes numeric
        balls_env = [
            (b if v is None else None) for v, b in partial
        ]
        coeffs = _collect_univariate_balls(sub, j, balls_env, prec)
        branches = [
            (None, b) for b in _dedupe_balls(_numeric_roots(coeffs, prec), prec)
        ]
    for value, ball in branches:
        if value is not None:
            entry = (value, None)
        else:
            entry = (None, ball)
        if not _enumerate(chain, ring, partial + [entry], sink, prec):
            return False
    return True


def _collect_univariate(poly, var):
    coeffs = {}
    for mono, c in poly.terms.items():
        e = mono[var]
        rest = sum(mono) - e
        if rest:
            raise InvariantViolation("chain element not triangular after substitution")
        prev = coeffs.get(e)
        coeffs[e] = c if prev is None else prev + c
    deg = max(coeffs, default=0)
    return [coeffs.get(e, FieldElement.zero()) for e in range(deg + 1)]


def _collect_univariate_balls(poly, var, balls_env, prec):
    """Coefficients of x_var as balls, with earlier numeric vars evaluated."""
    with mpmath.workprec(prec + 40):
        buckets = {}
        for mono, c in poly.terms.items():
            e = mono[var]
            term = _coeff_ball(c, prec)
            for i, exp in enumerate(mono):
                if i == var or not exp:
                    continue
                b = balls_env[i]
                if b is None:
                    raise InvariantViolation(
                        "unexpected free variable in chain element"
                    )
                for _ in range(exp):
                    term = term * b
            prev = buckets.get(e)
            buckets[e] = term if prev is None else prev + term
        deg = max(buckets, default=0)
        zero = ComplexBall(mpmath.mpc(0), 0)
        return [buckets.get(e, zero) for e in range(deg + 1)]


def _point_satisfies(point, polys, prec):
    """True when every poly vanishes at the point (exactly, or certifiably
    within the numeric enclosures)."""
    if point.is_exact():
        return all(p.evaluate(list(point.values)).is_zero() for p in polys)
    with mpmath.workprec(prec + 40):
        balls = [point.coordinate_ball(i, prec) for i in range(len(point))]
        for p in polys:
            if not _eval_poly_at_balls(p, balls, prec).contains_zero():
                return False
    return True


def _classify_point(point, polys, prec):
    """'ok' when every residual encloses zero, 'reject' when some residual is
    confidently nonzero, 'ambiguous' otherwise (requesting more precision)."""
    if point.is_exact():
        good = all(p.evaluate(list(point.values)).is_zero() for p in polys)
        return "ok" if good else "reject"
    margin = mpmath.mpf(2) ** 24
    status = "ok"
    with mpmath.workprec(prec + 40):
        balls = [point.coordinate_ball(i, prec) for i in range(len(point))]
        for p in polys:
            res = _eval_poly_at_balls(p, balls, prec)
            if res.contains_zero():
                continue
            if abs(res.mid) > res.rad * margin:
                return "reject"
            status = "ambiguous"
    return status


def _assert_exact_roots(points, original_gens):
    for pt in points:
        if pt.is_exact():
            for g in original_gens:
                if not g.evaluate(list(pt.values)).is_zero():
                    raise InvariantViolation(
                        "exact solution does not annihilate a generator"
                    )


# -- slicing for positive-dimensional systems --------------------------------------


def _sum_tuples(h, total, maxidx):
    if h == 1:
        if total <= maxidx:
            yield (total,)
        return
    for first in range(min(total, maxidx) + 1):
        for rest in _sum_tuples(h - 1, total - first, maxidx):
            yield (first,) + rest


def _pin_assignments(h, attempts):
    """Graded deterministic sequence of pin-value tuples (all zeros first)."""
    count = 0
    maxidx = len(_PIN_VALUES) - 1
    for total in range(h * maxidx + 1):
        for combo in _sum_tuples(h, total, maxidx):
            yield tuple(_PIN_VALUES[i] for i in combo)
            count += 1
            if count >= attempts:
                return


def particular_solution_on_slice(
    system,
    rng,
    attempts=64,
    precision=DEFAULT_PRECISION,
    max_pairs=None,
    max_basis=None,
    accept=None,
):
    """One verified solution of a positive-dimensional system.

    Augments the system with h affine constraints (h = Hilbert dimension):
    first coordinate pins over a maximal independent set of the leading-term
    ideal (zero first, then small rationals), then random rational affine
    forms drawn from ``rng``.  The first solution of the augmented
    zero-dimensional system that also satisfies the original one (and the
    optional ``accept`` predicate) is returned.
    """
    from .polynomial import DEFAULT_MAX_PAIRS, DEFAULT_MAX_BASIS

    max_pairs = max_pairs or DEFAULT_MAX_PAIRS
    max_basis = max_basis or DEFAULT_MAX_BASIS
    gens = list(system.generators) if isinstance(system, Ideal) else list(system)
    ring = gens[0].ring
    basis = groebner_basis(gens, max_pairs=max_pairs, max_basis=max_basis)
    if is_trivial_basis(basis):
        raise ValueError("inconsistent system cannot be sliced")
    h = hilbert_dimension(basis, nvars=ring.nvars)
    if h <= 0:
        raise ValueError("slice requested for a zero-dimensional system")
    free = sorted(max_independent_set(basis, ring.nvars))[:h]

    tried = 0
    for pins in _pin_assignments(h, attempts):
        tried += 1
        extra = [
            Poly.variable(ring, v) - Poly.const(ring, val)
            for v, val in zip(free, pins)
        ]
        pt = _try_slice(basis + extra, gens, precision, max_pairs, max_basis, accept)
        if pt is not None:
            return pt
        if tried >= attempts:
            break
    while tried < attempts:
        tried += 1
        extra = []
        for _ in range(h):
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(ring.nvars)]
            if all(c == 0 for c in coeffs):
                coeffs[rng.randrange(ring.nvars)] = Fraction(1)
            rhs = Fraction(rng.randint(-2, 2))
            form = Poly.const(ring, -rhs)
            for i, cf in enumerate(coeffs):
                if cf:
                    form = form + Poly.variable(ring, i) * cf
            extra.append(form)
        pt = _try_slice(basis + extra, gens, precision, max_pairs, max_basis, accept)
        if pt is not None:
            return pt
    raise SliceExhausted(f"no particular solution within {attempts} slice attempts")


def _try_slice(augmented, original_gens, precision, max_pairs, max_basis, accept):
    try:
        gb = groebner_basis(augmented, max_pairs=max_pairs, max_basis=max_basis)
    except ResourceLimit:
        return None
    if is_trivial_basis(gb):
        return None
    if hilbert_dimension(gb, nvars=augmented[0].ring.nvars) != 0:
        return None
    points = solve_zero_dimensional(
        gb, precision=precision, max_pairs=max_pairs, max_basis=max_basis
    )
    for pt in points:
        if not _point_satisfies(pt, original_gens, precision):
            continue
        if accept is not None and not accept(pt):
            continue
        return pt
    return None
