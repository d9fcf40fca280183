import random
from fractions import Fraction

import pytest

from permsplit import (
    FieldElement,
    GeneratorSet,
    IntransitiveAction,
    OrthogonalityViolation,
    Permutation,
    Poly,
    SplitConfig,
    build_idempotency_system,
    build_orthogonality_system,
    compute_orbitals,
    compute_structure_constants,
    split,
)
from permsplit.splitter import (
    Projector,
    _SplitState,
    algebra_product,
    build_orthogonality_system_right,
    process_single_solution,
)

from conftest import cyclic, petersen, regular_action, symmetric
from oracles import (
    dimension_multiset,
    petersen_eigenprojectors,
    s3_character_projectors,
)

FE = FieldElement


def fe(q):
    return FE.from_rational(Fraction(q))


def constants_for(gens):
    basis = compute_orbitals(gens)
    return basis, compute_structure_constants(gens, basis)


class TestIdempotencySystem:
    def test_s3(self):
        _, consts = constants_for(symmetric(3))
        system = build_idempotency_system(consts)
        r = system.ring
        x1, x2 = Poly.variable(r, 0), Poly.variable(r, 1)
        assert system.polys[0] == x1 * x1 + x2 * x2 * 2 - x1
        assert system.polys[1] == x1 * x2 * 2 + x2 * x2 - x2

    def test_petersen_e1(self):
        _, consts = constants_for(petersen())
        system = build_idempotency_system(consts)
        r = system.ring
        x1, x2, x3 = (Poly.variable(r, i) for i in range(3))
        assert system.polys[0] == x1 * x1 + x2 * x2 * 3 + x3 * x3 * 6 - x1

    def test_trivial_rank_one(self):
        g = GeneratorSet(1, (Permutation.identity(1),))
        _, consts = constants_for(g)
        system = build_idempotency_system(consts)
        r = system.ring
        x1 = Poly.variable(r, 0)
        assert system.polys == [x1 * x1 - x1]


class TestOrthogonalitySystem:
    def test_s3_proportional_forms(self):
        _, consts = constants_for(symmetric(3))
        b1 = Projector(
            coefficients=(fe(Fraction(1, 3)), fe(Fraction(1, 3))),
            dimension=1,
            exact=True,
            provenance="uniqueSolution",
        )
        forms = build_orthogonality_system(consts, b1)
        r = forms[0].ring
        x1, x2 = Poly.variable(r, 0), Poly.variable(r, 1)
        target = (x1 + x2 * 2) * Fraction(1, 3)
        assert all(f == target for f in forms)

    def test_trivial_rank_one(self):
        g = GeneratorSet(1, (Permutation.identity(1),))
        _, consts = constants_for(g)
        b = Projector((fe(1),), 1, True, "uniqueSolution")
        forms = build_orthogonality_system(consts, b)
        r = forms[0].ring
        assert forms == [Poly.variable(r, 0)]

    def test_petersen_row_sum_pattern(self):
        _, consts = constants_for(petersen())
        b1 = Projector(
            coefficients=(fe(Fraction(1, 10)),) * 3,
            dimension=1,
            exact=True,
            provenance="uniqueSolution",
        )
        forms = build_orthogonality_system(consts, b1)
        r = forms[0].ring
        x1, x2, x3 = (Poly.variable(r, i) for i in range(3))
        target = (x1 + x2 * 3 + x3 * 6) * Fraction(1, 10)
        assert all(f == target for f in forms)

    def test_right_forms_differ_in_noncommutative_algebra(self):
        gens = regular_action(symmetric(3))
        _, consts = constants_for(gens)
        deco = split(gens)
        sliced = [p for p in deco.projectors if p.provenance == "slicedSolution"][0]
        left = build_orthogonality_system(consts, sliced)
        right = build_orthogonality_system_right(consts, sliced)
        assert set(left) != set(right)


class TestProcessSingleSolution:
    def _state(self, gens):
        basis, consts = constants_for(gens)
        return _SplitState(basis, consts, SplitConfig())

    def test_accepts_valid_projector(self):
        state = self._state(symmetric(3))
        b1 = Projector((fe(Fraction(1, 3)), fe(Fraction(1, 3))), 1, True, "uniqueSolution")
        process_single_solution(state, b1)
        assert len(state.projectors) == 1
        assert state.idem.orthogonality

    def test_duplicate_rejected(self):
        state = self._state(symmetric(3))
        b1 = Projector((fe(Fraction(1, 3)), fe(Fraction(1, 3))), 1, True, "uniqueSolution")
        process_single_solution(state, b1)
        with pytest.raises(OrthogonalityViolation):
            process_single_solution(state, b1)

    def test_s3_d2_forced_linearly(self):
        from permsplit.polynomial import groebner_basis

        state = self._state(symmetric(3))
        b1 = Projector((fe(Fraction(1, 3)), fe(Fraction(1, 3))), 1, True, "uniqueSolution")
        process_single_solution(state, b1)
        polys = state.d_system(2)
        basis = groebner_basis(polys)
        r = basis[0].ring
        x2 = Poly.variable(r, 0)
        assert basis == [x2 + Poly.const(r, Fraction(1, 3))]


class TestAlgebraProduct:
    def test_exact_idempotent(self):
        _, consts = constants_for(symmetric(3))
        b = [fe(Fraction(2, 3)), fe(Fraction(-1, 3))]
        sq = algebra_product(consts, b, b)
        assert sq == b


class TestSplit:
    def test_s3(self):
        deco = split(symmetric(3))
        assert deco.dimension_multiset == [1, 2]
        assert deco.projectors[0].coefficients == (fe(Fraction(1, 3)), fe(Fraction(1, 3)))
        assert deco.projectors[1].coefficients == (fe(Fraction(2, 3)), fe(Fraction(-1, 3)))

    def test_s3_matches_character_oracle(self):
        gens = symmetric(3)
        deco = split(gens)
        basis = compute_orbitals(gens)
        computed = {tuple(p.coefficients) for p in deco.projectors}
        matched = 0
        for dim, mat in s3_character_projectors(gens):
            if all(x == 0 for row in mat for x in row):
                continue  # the sign character is absent from the natural action
            coeffs = _matrix_to_basis_coeffs(mat, basis)
            assert coeffs is not None and coeffs in computed
            matched += 1
        assert matched == len(deco.projectors) == 2

    def test_petersen(self):
        deco = split(petersen())
        assert deco.dimension_multiset == [1, 4, 5]
        got = {p.dimension: p.coefficients for p in deco.projectors}
        assert got[1] == (fe(Fraction(1, 10)),) * 3
        assert got[4] == (
            fe(Fraction(2, 5)),
            fe(Fraction(-4, 15)),
            fe(Fraction(1, 15)),
        )
        assert got[5] == (
            fe(Fraction(1, 2)),
            fe(Fraction(1, 6)),
            fe(Fraction(-1, 6)),
        )

    def test_petersen_matches_eigenprojector_oracle(self):
        gens = petersen()
        basis = compute_orbitals(gens)
        deco = split(gens)
        import numpy as np

        adjacency = np.zeros((10, 10), dtype=np.int64)
        for i in range(10):
            for j in range(10):
                if basis.orbital_of_pair(i + 1, j + 1) == 2:
                    adjacency[i, j] = 1
        got = {p.dimension: p.coefficients for p in deco.projectors}
        for dim, mat in petersen_eigenprojectors(adjacency):
            coeffs = _matrix_to_basis_coeffs(mat, basis)
            assert got[dim] == coeffs

    def test_c4_gaussian_and_conjugate_pairing(self):
        deco = split(cyclic(4))
        assert deco.dimension_multiset == [1, 1, 1, 1]
        total = [FE.zero()] * 4
        for p in deco.projectors:
            assert p.exact
            for c in p.coefficients:
                # Gaussian rationals only
                assert all(rad in (1, -1) for rad in c.terms)
            for r in range(4):
                total[r] = total[r] + p.coefficients[r]
        assert total[0] == FE.one()
        assert all(t.is_zero() for t in total[1:])
        pairs = {
            i: p.conjugate_of for i, p in enumerate(deco.projectors)
            if p.conjugate_of is not None
        }
        assert len(pairs) == 2  # one conjugate pair among the four
        for i, j in pairs.items():
            conj = tuple(c.conjugate() for c in deco.projectors[i].coefficients)
            assert conj == deco.projectors[j].coefficients

    def test_s3_regular_multiplicity_branch(self):
        deco = split(regular_action(symmetric(3)))
        assert deco.dimension_multiset == [1, 1, 2, 2]
        slice_events = [e for e in deco.events if e.kind == "slice"]
        assert slice_events and slice_events[0].d == 2
        assert slice_events[0].hilbert == 2
        assert slice_events[0].multiplicity == 2
        two_dims = [p for p in deco.projectors if p.dimension == 2]
        assert len(two_dims) == 2
        assert all(p.block == 2 for p in two_dims)

    def test_intransitive_raises(self):
        g = GeneratorSet(3, (Permutation.from_images([2, 1, 3]),))
        with pytest.raises(IntransitiveAction):
            split(g)

    def test_seed_determinism(self):
        gens = regular_action(symmetric(3))
        a = split(gens, SplitConfig(slice_seed=5))
        b = split(gens, SplitConfig(slice_seed=5))
        assert [p.coefficients for p in a.projectors] == [
            p.coefficients for p in b.projectors
        ]

    def test_trivial_single_point(self):
        g = GeneratorSet(1, (Permutation.identity(1),))
        deco = split(g)
        assert deco.dimension_multiset == [1]
        assert deco.projectors[0].coefficients == (fe(1),)


class TestCorpusProperties:
    def test_dimension_multiset_matches_oracle(self, corpus_member):
        name, gens = corpus_member
        deco = split(gens)
        assert deco.dimension_multiset == dimension_multiset(gens)

    def test_completeness_and_trace(self, corpus_member):
        name, gens = corpus_member
        deco = split(gens)
        n = gens.degree
        assert sum(p.dimension for p in deco.projectors) == n
        for p in deco.projectors:
            b1 = p.coefficients[0]
            assert b1.rational_value() * n == p.dimension

    def test_conjugation_closure_of_unique_solutions(self, corpus_member):
        """The enumerated (non-sliced) part of an exact decomposition is
        closed under complex conjugation; members of multiplicity blocks need
        not be (the slice choices are not conjugation-symmetric)."""
        name, gens = corpus_member
        deco = split(gens)
        unique_exact = [
            p for p in deco.projectors
            if p.exact and p.provenance == "uniqueSolution" and p.block is None
        ]
        keys = {tuple(sorted((r, c) for r, c in enumerate(p.coefficients)))
                for p in unique_exact}
        for p in unique_exact:
            conj = tuple(c.conjugate() for c in p.coefficients)
            key = tuple(sorted((r, c) for r, c in enumerate(conj)))
            assert key in keys


def _matrix_to_basis_coeffs(mat, basis):
    """Read exact basis coefficients off representative entries; None when
    the matrix is not constant on some orbital."""
    coeffs = []
    for r in range(1, basis.rank + 1):
        j = basis.suborbit_members(r)[0]
        coeffs.append(FE.from_rational(Fraction(mat[0][j - 1])))
    # cross-check a second representative for safety
    for r in range(1, basis.rank + 1):
        for j in basis.suborbit_members(r)[:2]:
            if Fraction(mat[0][j - 1]) != coeffs[r - 1].rational_value():
                return None
    return tuple(coeffs)
