"""Orbitals, the ordered centralizer-algebra basis, and structure constants.

The basis matrices A_1..A_R are 0/1 matrices supported on the orbitals of the
group acting diagonally on ordered pairs; they are never materialized here.
Everything is driven by the suborbit partition of the point-1 stabilizer plus
Schreier-word translation, so no N x N storage is ever allocated.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as _sp
import scipy.sparse.csgraph as _csgraph

from .errors import IntransitiveAction, InvariantViolation, ResourceLimit
from .perms import (
    GeneratorSet,
    SchreierTree,
    orbit_with_tree,
    schreier_generator_array,
)

__all__ = [
    "OrbitalBasis",
    "StructureConstants",
    "compute_orbitals",
    "order_basis",
    "compute_structure_constants",
]

DEFAULT_RANK_CAP = 64


@dataclass(frozen=True)
class OrbitalBasis:
    """The ordered basis A_1..A_R of the centralizer algebra.

    Arrays indexed by orbital are padded so that index r means orbital r
    (slot 0 unused).  ``sidx0[p]`` gives the orbital index of the pair
    (1, p+1); equivalently the suborbit of point p+1.
    """

    degree: int
    rank: int
    base: int
    sidx0: np.ndarray
    suborbit_lengths: np.ndarray        # [r] = n_r
    suborbit_representative: np.ndarray  # [r] = min j with (j,1) in orbital r
    transpose_of: np.ndarray            # [r] = r*
    symmetric: np.ndarray               # [r] = (r == r*)
    tree: SchreierTree = field(repr=False)

    def orbital_size(self, r):
        """|Delta_r| = N * n_r."""
        return self.degree * int(self.suborbit_lengths[r])

    def suborbit_members(self, r):
        """1-based points of the suborbit paired with the base, ascending."""
        return [int(p) + 1 for p in np.nonzero(self.sidx0 == r)[0]]

    def orbital_of_pair(self, x, y):
        """Orbital index of an arbitrary ordered pair (1-based points).

        Translates x to the base point along its Schreier word and reads the
        suborbit index of the transported y; costs O(tree depth).
        """
        y0 = self.tree.transport_to_base0(x - 1, y - 1)
        return int(self.sidx0[y0])

    def lengths_in_order(self):
        return [int(self.suborbit_lengths[r]) for r in range(1, self.rank + 1)]


@dataclass(frozen=True)
class StructureConstants:
    """Integer tensor C with A_p A_q = sum_r C[p,q,r] A_r (1-based indices)."""

    rank: int
    table: np.ndarray   # shape (R+1, R+1, R+1), slot 0 unused

    def c(self, p, q, r):
        return int(self.table[p, q, r])

    def is_commutative(self):
        """True iff C is symmetric in (p, q); equivalent to the action being
        multiplicity-free."""
        return bool(np.array_equal(self.table, self.table.transpose(1, 0, 2)))


def _stabilizer_cell_labels(gens: GeneratorSet, tree: SchreierTree):
    """Partition of points into orbits of the point-base stabilizer.

    Processes every Schreier generator u_p s u_{p^s}^{-1}; a generator whose
    action respects the current partition is skipped after one O(N) check, so
    coarse partitions (low rank) converge quickly even for large N.
    """
    n = gens.degree
    labels = np.arange(n, dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    words = {}
    for p0 in range(n):
        for g in gens.generators:
            arr = schreier_generator_array(tree, p0, g, words)
            lab_img = labels[arr]
            if np.array_equal(lab_img, labels):
                continue
            ncells = int(labels.max()) + 1
            graph = _sp.coo_matrix(
                (np.ones(n, dtype=np.int8), (labels, lab_img)),
                shape=(ncells, ncells),
            )
            _, roots = _csgraph.connected_components(graph, directed=False)
            labels = roots[labels]
    return labels


def order_basis(cells, tree: SchreierTree, degree: int):
    """Apply the basis ordering rule to raw suborbit cells.

    ``cells`` maps each 1-based point to an arbitrary cell id.  Ordering:
    the diagonal orbital first; then all symmetric orbitals; then asymmetric
    orbitals in adjacent transpose pairs.  Both the symmetric block and the
    pair leaders are sorted by i_X = min{ i : (A)_{i,1} = 1 }, which is the
    minimal point of the transpose suborbit; within a pair the member with
    the smaller i_X leads.
    """
    cell_ids = {}
    members = {}
    for p0 in range(degree):
        c = int(cells[p0])
        members.setdefault(c, []).append(p0 + 1)
    base_cell = int(cells[tree.base - 1])

    # transpose pairing on raw cells: (j, 1) lies in the orbital of (1, j*)
    # where j* is the image of the base under the inverse word base -> j.
    transpose_cell = {}
    for c, pts in members.items():
        j = min(pts)
        jstar0 = tree.transport_to_base0(j - 1, tree.base - 1)
        transpose_cell[c] = int(cells[jstar0])
    for c, cstar in transpose_cell.items():
        if transpose_cell[cstar] != c:
            raise InvariantViolation("transpose pairing is not an involution")

    def i_x(c):
        # minimal point whose pair (point, base) lies in the orbital of cell c
        return min(members[transpose_cell[c]])

    symmetric_cells = sorted(
        (c for c in members if transpose_cell[c] == c and c != base_cell),
        key=i_x,
    )
    pairs = []
    done = set()
    for c in members:
        cstar = transpose_cell[c]
        if c == cstar or c in done or c == base_cell:
            continue
        done.update((c, cstar))
        leader = c if i_x(c) < i_x(cstar) else cstar
        pairs.append((leader, transpose_cell[leader]))
    pairs.sort(key=lambda pr: i_x(pr[0]))

    ordered = [base_cell] + symmetric_cells
    for a, b in pairs:
        ordered.extend((a, b))
    rank = len(ordered)
    cell_ids = {c: r for r, c in enumerate(ordered, start=1)}

    sidx0 = np.zeros(degree, dtype=np.int64)
    for p0 in range(degree):
        sidx0[p0] = cell_ids[int(cells[p0])]
    lengths = np.zeros(rank + 1, dtype=np.int64)
    reps = np.zeros(rank + 1, dtype=np.int64)
    transpose_of = np.zeros(rank + 1, dtype=np.int64)
    symmetric = np.zeros(rank + 1, dtype=bool)
    for r, c in enumerate(ordered, start=1):
        lengths[r] = len(members[c])
        reps[r] = i_x(c)
        transpose_of[r] = cell_ids[transpose_cell[c]]
        symmetric[r] = transpose_cell[c] == c
    for a in (sidx0, lengths, reps, transpose_of, symmetric):
        a.setflags(write=False)
    return OrbitalBasis(
        degree=degree,
        rank=rank,
        base=tree.base,
        sidx0=sidx0,
        suborbit_lengths=lengths,
        suborbit_representative=reps,
        transpose_of=transpose_of,
        symmetric=symmetric,
        tree=tree,
    )


def compute_orbitals(gens: GeneratorSet, rank_cap=DEFAULT_RANK_CAP):
    """Orbitals of a transitive action as an ordered OrbitalBasis."""
    orbit, tree = orbit_with_tree(gens, 1)
    if len(orbit) != gens.degree:
        raise IntransitiveAction(orbit)
    cells = _stabilizer_cell_labels(gens, tree)
    basis = order_basis(cells, tree, gens.degree)
    if rank_cap is not None and basis.rank > rank_cap:
        raise ResourceLimit(
            f"rank {basis.rank} exceeds configured cap {rank_cap}"
        )
    _check_basis(basis)
    return basis


def _check_basis(basis: OrbitalBasis):
    r1 = int(basis.sidx0[basis.base - 1])
    if r1 != 1 or basis.suborbit_lengths[1] != 1 or basis.suborbit_representative[1] != basis.base:
        raise InvariantViolation("diagonal orbital is not first")
    if int(basis.suborbit_lengths[1:].sum()) != basis.degree:
        raise InvariantViolation("suborbit lengths do not sum to the degree")
    for r in range(1, basis.rank + 1):
        rs = int(basis.transpose_of[r])
        if int(basis.transpose_of[rs]) != r:
            raise InvariantViolation("transpose map is not an involution")
        if basis.suborbit_lengths[r] != basis.suborbit_lengths[rs]:
            raise InvariantViolation("transpose-paired suborbits differ in length")


def _inverse_transversal_array(basis: OrbitalBasis, j):
    """Array of y^(u_j^{-1}) over all points y (0-based), via the tree word."""
    tree = basis.tree
    word = tree.word_to(j)
    gens = tree.gens.generators
    arr = np.arange(basis.degree, dtype=np.int64)
    for gi, d in reversed(word):
        g = gens[gi]
        arr = g.inv_images0[arr] if d > 0 else g.images0[arr]
    return arr


def _constants_slab(basis: OrbitalBasis, q_vec, r):
    """C[:, :, r] counted from the representative pair (j_r, 1)."""
    rank = basis.rank
    j = int(basis.suborbit_representative[r])
    trans = _inverse_transversal_array(basis, j)
    p_vec = basis.sidx0[trans]
    flat = np.bincount(p_vec * (rank + 1) + q_vec, minlength=(rank + 1) ** 2)
    return flat.reshape(rank + 1, rank + 1)


def compute_structure_constants(gens: GeneratorSet, basis: OrbitalBasis, threads=1):
    """The integer tensor C_pq^r, one representative pair per orbital.

    For each r the count runs over all N points k of the pair
    (j_r, k) in Delta_p, (k, 1) in Delta_q with (j_r, 1) a fixed
    representative of Delta_r; orbital membership of arbitrary pairs is read
    off via Schreier-word translation.  Slabs for distinct r are independent
    and may be computed concurrently; the merge is by index, hence
    deterministic.
    """
    rank = basis.rank
    # orbital of (k, 1) is the transpose of the orbital of (1, k): constant in r
    q_vec = basis.transpose_of[basis.sidx0]
    table = np.zeros((rank + 1, rank + 1, rank + 1), dtype=np.int64)
    rs = range(1, rank + 1)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            slabs = list(ex.map(lambda r: _constants_slab(basis, q_vec, r), rs))
        for r, slab in zip(rs, slabs):
            table[:, :, r] = slab
    else:
        for r in rs:
            table[:, :, r] = _constants_slab(basis, q_vec, r)
    table.setflags(write=False)
    consts = StructureConstants(rank=rank, table=table)
    _check_constants(basis, consts)
    return consts


def _check_constants(basis: OrbitalBasis, consts: StructureConstants):
    rank = basis.rank
    n = basis.suborbit_lengths
    c = consts.table
    if c.min() < 0:
        raise InvariantViolation("negative structure constant")
    # row-sum identity: sum_r C_pq^r n_r = n_p n_q
    sums = np.tensordot(c[1:, 1:, 1:], n[1:], axes=([2], [0]))
    expected = np.outer(n[1:], n[1:])
    if not np.array_equal(sums, expected):
        raise InvariantViolation("row-sum identity failed")
    # C_pq^1 = n_p when q = p*, else 0
    for p in range(1, rank + 1):
        for q in range(1, rank + 1):
            want = int(n[p]) if q == int(basis.transpose_of[p]) else 0
            if int(c[p, q, 1]) != want:
                raise InvariantViolation(
                    f"diagonal rule failed at C[{p},{q},1]"
                )
    # identity element: A_1 A_q = A_q
    for q in range(1, rank + 1):
        col = np.zeros(rank + 1, dtype=np.int64)
        col[q] = 1
        if not np.array_equal(c[1, q, :], col) or not np.array_equal(c[q, 1, :], col):
            raise InvariantViolation("A_1 is not the multiplicative identity")
    # transpose consistency: C_pq^r = C_{q* p*}^{r*}
    t = basis.transpose_of
    for p in range(1, rank + 1):
        for q in range(1, rank + 1):
            for r in range(1, rank + 1):
                if c[p, q, r] != c[t[q], t[p], t[r]]:
                    raise InvariantViolation("transpose consistency failed")
