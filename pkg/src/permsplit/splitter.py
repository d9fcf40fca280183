"""The main splitting loop: idempotency systems, the dimension scan, and the
assembly of the complete orthogonal family of irreducible projectors.

For each candidate dimension d the generic invariant form is constrained by
x_1 = d/N (the trace pins the coefficient of the identity basis matrix), the
accumulated orthogonality forms are joined in, and the Groebner basis decides:
inconsistent (advance d), zero-dimensional (enumerate and accept every
solution), or positive-dimensional (a multiplicity-k isotypic block, peeled
off by slicing for particular solutions).  A dimension is re-run until its
system turns inconsistent, because freshly added orthogonality constraints
can expose further components of equal dimension.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .centralizer import (
    OrbitalBasis,
    StructureConstants,
    compute_orbitals,
    compute_structure_constants,
)
from .errors import (
    IncompleteDecomposition,
    IntransitiveAction,
    InvariantViolation,
    MultiplicityMismatch,
    OrthogonalityViolation,
    SliceExhausted,
)
from .exactfield import ComplexBall, FieldElement
from .perms import GeneratorSet, is_transitive
from .polynomial import Poly, Ring, groebner_basis, hilbert_dimension, is_trivial_basis
from .solver import (
    SolutionPoint,
    particular_solution_on_slice,
    solve_zero_dimensional,
)

__all__ = [
    "SplitConfig",
    "IdempotencySystem",
    "Projector",
    "Decomposition",
    "SplitEvent",
    "build_idempotency_system",
    "build_orthogonality_system",
    "build_orthogonality_system_right",
    "algebra_product",
    "process_single_solution",
    "split",
]


@dataclass
class SplitConfig:
    """Knobs for the splitting pipeline; defaults suit desk-scale inputs."""

    max_dimension: int = None
    max_groebner_pairs: int = 40000
    max_groebner_basis: int = 800
    slice_seed: int = 0
    slice_attempts: int = 64
    precision: int = 128
    max_precision: int = 2048
    rank_cap: int = 64
    matrix_cap: int = 2000
    threads: int = 1


@dataclass
class IdempotencySystem:
    """E_r = Q_r - x_r over x_1..x_R, plus accumulated orthogonality forms."""

    rank: int
    ring: Ring
    polys: list
    orthogonality: list = field(default_factory=list)


@dataclass
class Projector:
    """Coefficient vector of one irreducible projector in the ordered basis.

    ``coefficients[r-1]`` multiplies basis matrix A_r; entries are exact
    FieldElements, or ComplexBall enclosures on coordinates that fell through
    to the numeric solver.  b_1 = d/N is always exact.
    """

    coefficients: tuple
    dimension: int
    exact: bool
    provenance: str            # "uniqueSolution" | "slicedSolution"
    precision: int = 0
    block: int = None          # shared id for one multiplicity block
    conjugate_of: int = None   # index in the decomposition, when paired

    @property
    def rank(self):
        return len(self.coefficients)

    def coefficient_balls(self, prec):
        return [
            c if isinstance(c, ComplexBall) else c.to_complex(prec)
            for c in self.coefficients
        ]

    def conjugate_coefficients(self):
        if not self.exact:
            raise ValueError("conjugate of a numeric projector is not tracked")
        return tuple(c.conjugate() for c in self.coefficients)


@dataclass
class Decomposition:
    """The complete orthogonal family, with its certificate data."""

    degree: int
    rank: int
    projectors: list
    complete: bool
    suborbit_lengths: list
    events: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def dimension_multiset(self):
        return sorted(p.dimension for p in self.projectors)

    def exact_only(self):
        return all(p.exact for p in self.projectors)


@dataclass(frozen=True)
class SplitEvent:
    """One step of the dimension loop, for reports and diagnostics."""

    d: int
    kind: str            # "inconsistent" | "solutions" | "slice" | "filtered"
    hilbert: int = None
    extracted: int = 0
    multiplicity: int = None


def build_idempotency_system(consts: StructureConstants):
    """E_r = sum_pq C_pq^r x_p x_q  -  x_r, for r = 1..R."""
    rank = consts.rank
    ring = Ring(tuple(f"x{i}" for i in range(1, rank + 1)), "degrevlex")
    polys = []
    for r in range(1, rank + 1):
        terms = {}
        for p in range(1, rank + 1):
            for q in range(1, rank + 1):
                cpq = consts.c(p, q, r)
                if not cpq:
                    continue
                mono = [0] * rank
                mono[p - 1] += 1
                mono[q - 1] += 1
                mono = tuple(mono)
                terms[mono] = terms.get(mono, 0) + cpq
        lin = tuple(1 if i == r - 1 else 0 for i in range(rank))
        terms[lin] = terms.get(lin, 0) - 1
        polys.append(Poly(ring, {m: Fraction(c) for m, c in terms.items() if c}))
    return IdempotencySystem(rank=rank, ring=ring, polys=polys)


def _orthogonality_forms(consts, coeffs, side):
    """Linear forms of B·X = 0 (side="left") or X·B = 0 (side="right")."""
    rank = consts.rank
    ring = Ring(tuple(f"x{i}" for i in range(1, rank + 1)), "degrevlex")
    forms = []
    for r in range(1, rank + 1):
        terms = {}
        for var in range(1, rank + 1):
            acc = FieldElement.zero()
            for other in range(1, rank + 1):
                c = (
                    consts.c(other, var, r)
                    if side == "left"
                    else consts.c(var, other, r)
                )
                if c:
                    acc = acc + coeffs[other - 1].scaled(c)
            if not acc.is_zero():
                mono = tuple(1 if i == var - 1 else 0 for i in range(rank))
                terms[mono] = acc
        if terms:
            forms.append(Poly(ring, terms, _canonical=True))
    return forms


def build_orthogonality_system(consts: StructureConstants, projector: Projector):
    """The R linear forms L_r(x) = sum_q (sum_p b_p C_pq^r) x_q of B·X = 0."""
    if not projector.exact:
        raise ValueError("orthogonality forms need an exact projector")
    return _orthogonality_forms(consts, projector.coefficients, "left")


def build_orthogonality_system_right(consts: StructureConstants, projector: Projector):
    """The mirrored forms of X·B = 0.

    Inside a multiplicity block one-sided annihilation still leaves a
    parameter family (B X = 0 does not force X B = 0 in a noncommutative
    block), so the complement is pinned down only with both sides; mutual
    orthogonality of the family is the two-sided condition.
    """
    if not projector.exact:
        raise ValueError("orthogonality forms need an exact projector")
    return _orthogonality_forms(consts, projector.coefficients, "right")


# -- products in the centralizer algebra ---------------------------------------


def algebra_product(consts: StructureConstants, a, b, precision=128):
    """Coefficients of (sum a_p A_p)(sum b_q A_q) in the basis.

    Exact when both vectors are exact; otherwise interval arithmetic.
    """
    rank = consts.rank
    exact = all(isinstance(x, FieldElement) for x in a) and all(
        isinstance(x, FieldElement) for x in b
    )
    if exact:
        out = [FieldElement.zero() for _ in range(rank)]
        for p in range(1, rank + 1):
            if a[p - 1].is_zero():
                continue
            for q in range(1, rank + 1):
                if b[q - 1].is_zero():
                    continue
                ab = a[p - 1] * b[q - 1]
                col = consts.table[p, q]
                for r in range(1, rank + 1):
                    c = int(col[r])
                    if c:
                        out[r - 1] = out[r - 1] + ab.scaled(c)
        return out
    with mpmath.workprec(precision + 40):
        ab_balls = [_as_ball(x, precision) for x in a]
        bb_balls = [_as_ball(x, precision) for x in b]
        out = [ComplexBall(mpmath.mpc(0), 0) for _ in range(rank)]
        for p in range(1, rank + 1):
            for q in range(1, rank + 1):
                prod = ab_balls[p - 1] * bb_balls[q - 1]
                col = consts.table[p, q]
                for r in range(1, rank + 1):
                    c = int(col[r])
                    if c:
                        out[r - 1] = out[r - 1] + prod * ComplexBall(mpmath.mpc(c), 0)
        return out


def _as_ball(x, precision):
    if isinstance(x, ComplexBall):
        return x
    return x.to_complex(precision)


def _vanishes(vec, reference=None, precision=128):
    """Componentwise zero test: exact for FieldElements, enclosure for balls.

    ``reference`` supplies the expected values to subtract first.
    """
    with mpmath.workprec(precision + 40):
        for i, v in enumerate(vec):
            want = None if reference is None else reference[i]
            if isinstance(v, FieldElement) and (
                want is None or isinstance(want, FieldElement)
            ):
                diff = v if want is None else v - want
                if not diff.is_zero():
                    return False
            else:
                b = v if isinstance(v, ComplexBall) else _as_ball(v, precision)
                if want is not None:
                    b = b - (
                        want
                        if isinstance(want, ComplexBall)
                        else _as_ball(want, precision)
                    )
                if not b.contains_zero():
                    return False
        return True


# -- the splitting state ---------------------------------------------------------


class _SplitState:
    def __init__(self, basis, consts, config):
        self.basis = basis
        self.consts = consts
        self.config = config
        self.idem = build_idempotency_system(consts)
        self.sub_ring = Ring(self.idem.ring.names[1:], "degrevlex")
        self.projectors = []
        self.numeric_projectors = []
        self.found = 0
        self.events = []
        self.notes = []
        self.rng = random.Random(config.slice_seed)
        self._current_d = None

    def d_system(self, d):
        """Substitute x_1 = d/N into E and the accumulated forms; drop x_1."""
        x1 = FieldElement.from_rational(Fraction(d, self.basis.degree))
        out = []
        inconsistent = False
        for poly in self.idem.polys + self.idem.orthogonality:
            s = poly.substitute(0, x1)
            dropped = s.drop_variable(0, self.sub_ring)
            if dropped.is_zero():
                continue
            if dropped.is_constant():
                inconsistent = True
                break
            out.append(dropped)
        return None if inconsistent else out

    def accept_candidate(self, point):
        """Numeric-side orthogonality filter for solver output.

        Constraints from exact projectors already live in the polynomial
        system; projectors with numeric coordinates cannot be injected there
        without poisoning the exact Groebner kernel, so their orthogonality
        is enforced here on every candidate solution instead.
        """
        if not self.numeric_projectors:
            return True
        d = self._current_d
        b = self._point_to_coeffs(point, d)
        prec = max(self.config.precision, point.precision)
        for other in self.numeric_projectors:
            left = algebra_product(self.consts, other.coefficients, b, prec)
            right = algebra_product(self.consts, b, other.coefficients, prec)
            if not _vanishes(left, precision=prec) or not _vanishes(
                right, precision=prec
            ):
                return False
        return True

    def _point_to_coeffs(self, point, d):
        b1 = FieldElement.from_rational(Fraction(d, self.basis.degree))
        coeffs = [b1]
        for i in range(len(point)):
            if point.exact[i]:
                coeffs.append(point.values[i])
            else:
                coeffs.append(point.numeric_values[i])
        return tuple(coeffs)

    def make_projector(self, point, d, provenance, block=None):
        return Projector(
            coefficients=self._point_to_coeffs(point, d),
            dimension=d,
            exact=point.is_exact(),
            provenance=provenance,
            precision=point.precision,
            block=block,
        )


def process_single_solution(state: _SplitState, projector: Projector):
    """Accept one projector: verify, accumulate its orthogonality, record it.

    Verifies idempotency in the algebra and two-sided orthogonality against
    every previously accepted projector, then joins the new orthogonality
    forms to the polynomial set so later systems exclude the subspace.
    """
    consts = state.consts
    prec = max(state.config.precision, projector.precision or 0)
    square = algebra_product(consts, projector.coefficients, projector.coefficients, prec)
    if not _vanishes(square, reference=list(projector.coefficients), precision=prec):
        raise InvariantViolation(
            f"candidate at dimension {projector.dimension} is not idempotent"
        )
    for prev in state.projectors:
        left = algebra_product(consts, prev.coefficients, projector.coefficients, prec)
        right = algebra_product(consts, projector.coefficients, prev.coefficients, prec)
        if not _vanishes(left, precision=prec) or not _vanishes(right, precision=prec):
            raise OrthogonalityViolation(
                f"candidate at dimension {projector.dimension} is not orthogonal "
                f"to accepted projector of dimension {prev.dimension}"
            )
    if projector.exact:
        forms = build_orthogonality_system(consts, projector)
        forms += build_orthogonality_system_right(consts, projector)
        seen = {hash(f) for f in state.idem.orthogonality}
        for f in forms:
            if hash(f) not in seen:
                state.idem.orthogonality.append(f)
                seen.add(hash(f))
    else:
        state.numeric_projectors.append(projector)
    state.projectors.append(projector)
    state.found += projector.dimension
    return state


def _multiplicity_from_hilbert(h):
    k = 1
    while k * k // 2 < h:
        k += 1
    if k * k // 2 != h:
        raise MultiplicityMismatch(
            f"no integer k satisfies floor(k^2/2) = {h}"
        )
    return k


def split(gens: GeneratorSet, config: SplitConfig = None):
    """Decompose a transitive permutation action into irreducible projectors."""
    config = config or SplitConfig()
    if not is_transitive(gens):
        from .perms import orbit_with_tree

        orbit, _ = orbit_with_tree(gens, 1)
        raise IntransitiveAction(orbit)
    basis = compute_orbitals(gens, rank_cap=config.rank_cap)
    consts = compute_structure_constants(gens, basis, threads=config.threads)
    return split_from_constants(basis, consts, config)


def split_from_constants(basis: OrbitalBasis, consts: StructureConstants, config=None):
    """The dimension loop, starting from precomputed structure constants."""
    config = config or SplitConfig()
    n = basis.degree
    state = _SplitState(basis, consts, config)
    max_d = config.max_dimension or (n - 1 if n > 1 else 1)

    d = 0
    while state.found < n:
        d += 1
        # a dimension with found + d > N can never fit, nor can any larger one
        if state.found + d > n or d > max_d:
            raise IncompleteDecomposition(
                f"dimensions exhausted at d={d} with {state.found}/{n} found"
            )
        _run_dimension(state, d)
    deco = Decomposition(
        degree=n,
        rank=basis.rank,
        projectors=state.projectors,
        complete=True,
        suborbit_lengths=basis.lengths_in_order(),
        events=state.events,
        notes=state.notes,
    )
    _finalize(state, deco)
    return deco


def _run_dimension(state: _SplitState, d):
    """Process one candidate dimension until its system turns inconsistent."""
    cfg = state.config
    state._current_d = d
    extracted = 0
    multiplicity = None
    saw_unique = False
    saw_slice = False
    guard = 0
    while True:
        guard += 1
        if guard > state.basis.degree + state.basis.rank + 8:
            raise InvariantViolation(f"dimension {d} failed to stabilize")
        polys = state.d_system(d)
        if polys is None:
            state.events.append(SplitEvent(d, "inconsistent"))
            break
        if not polys:
            # rank 1 action: the empty system has the single empty solution
            point = SolutionPoint((), (), (), cfg.precision)
            proj = state.make_projector(point, d, "uniqueSolution")
            process_single_solution(state, proj)
            extracted += 1
            state.events.append(SplitEvent(d, "solutions", 0, 1))
            break
        gb = groebner_basis(
            polys, max_pairs=cfg.max_groebner_pairs, max_basis=cfg.max_groebner_basis
        )
        if is_trivial_basis(gb):
            state.events.append(SplitEvent(d, "inconsistent"))
            break
        h = hilbert_dimension(gb, nvars=state.sub_ring.nvars)
        if h == 0:
            points = solve_zero_dimensional(
                gb,
                precision=cfg.precision,
                max_precision=cfg.max_precision,
                max_pairs=cfg.max_groebner_pairs,
                max_basis=cfg.max_groebner_basis,
            )
            points = [p for p in points if state.accept_candidate(p)]
            if not points:
                state.events.append(SplitEvent(d, "filtered", h, 0))
                break
            block = d if multiplicity else None
            for point in points:
                proj = state.make_projector(point, d, "uniqueSolution", block=block)
                process_single_solution(state, proj)
                extracted += 1
            saw_unique = True
            state.events.append(SplitEvent(d, "solutions", h, len(points)))
            if state.found >= state.basis.degree:
                break  # the family is complete; no re-run needed
            continue
        # positive dimension: a multiplicity block
        if multiplicity is None:
            multiplicity = _multiplicity_from_hilbert(h)
        saw_slice = True
        try:
            point = particular_solution_on_slice(
                polys,
                state.rng,
                attempts=cfg.slice_attempts,
                precision=cfg.precision,
                max_pairs=cfg.max_groebner_pairs,
                max_basis=cfg.max_groebner_basis,
                accept=state.accept_candidate,
            )
        except SliceExhausted:
            if state.numeric_projectors:
                state.notes.append(
                    f"d={d}: slice attempts exhausted against numeric projectors"
                )
                state.events.append(SplitEvent(d, "filtered", h, 0))
                break
            raise
        proj = state.make_projector(point, d, "slicedSolution", block=d)
        process_single_solution(state, proj)
        extracted += 1
        state.events.append(SplitEvent(d, "slice", h, 1, multiplicity))
        if state.found >= state.basis.degree:
            break
    if multiplicity:
        if saw_unique and saw_slice and extracted:
            # retag everything extracted at this d as one block
            for proj in state.projectors[-extracted:]:
                proj.block = d
        if extracted % multiplicity != 0:
            if saw_unique and saw_slice:
                state.notes.append(
                    f"d={d}: mixed unique/sliced extraction, count {extracted} "
                    f"not a multiple of k={multiplicity}"
                )
            else:
                raise MultiplicityMismatch(
                    f"extracted {extracted} projectors at d={d}, "
                    f"not a multiple of k={multiplicity}"
                )


def _finalize(state: _SplitState, deco: Decomposition):
    """Completeness certificate plus conjugate pairing."""
    n = deco.degree
    rank = deco.rank
    if sum(p.dimension for p in deco.projectors) != n:
        raise IncompleteDecomposition("dimension sum mismatch at finalize")
    for p in deco.projectors:
        b1 = p.coefficients[0]
        if not isinstance(b1, FieldElement) or b1 != Fraction(p.dimension, n):
            raise InvariantViolation("b_1 is not d/N on an accepted projector")
    # sum of projectors must be the identity vector (1, 0, ..., 0)
    total = [FieldElement.zero()] * rank
    numeric = [ComplexBall(mpmath.mpc(0), 0)] * rank
    any_numeric = False
    for p in deco.projectors:
        for r in range(rank):
            c = p.coefficients[r]
            if isinstance(c, FieldElement):
                total[r] = total[r] + c
            else:
                any_numeric = True
                numeric[r] = numeric[r] + c
    identity = [FieldElement.one()] + [FieldElement.zero()] * (rank - 1)
    if not any_numeric:
        for r in range(rank):
            if total[r] != identity[r]:
                raise InvariantViolation("projector sum is not the identity")
    else:
        with mpmath.workprec(state.config.precision + 40):
            for r in range(rank):
                combined = numeric[r] + total[r].to_complex(state.config.precision)
                combined = combined - identity[r].to_complex(state.config.precision)
                if not combined.contains_zero():
                    raise InvariantViolation("projector sum is not the identity")
    _pair_conjugates(deco)


def _pair_conjugates(deco: Decomposition):
    exact_index = {}
    for i, p in enumerate(deco.projectors):
        if p.exact:
            exact_index[_coeff_key(p.coefficients)] = i
    for i, p in enumerate(deco.projectors):
        if not p.exact or p.conjugate_of is not None:
            continue
        conj = tuple(c.conjugate() for c in p.coefficients)
        j = exact_index.get(_coeff_key(conj))
        if j is not None and j != i:
            deco.projectors[i].conjugate_of = j
            deco.projectors[j].conjugate_of = i


def _coeff_key(coeffs):
    return tuple(tuple(sorted(c.terms.items())) for c in coeffs)
