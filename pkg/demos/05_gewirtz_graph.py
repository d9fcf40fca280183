"""A bigger exact split, built from scratch: PSL(3,4) on 56 hyperovals.

The projective plane PG(2,4) has 21 points and 168 hyperovals (6-point arcs
with no 3 collinear); PSL(3,4) splits the hyperovals into three orbits of
56.  The induced rank-3 action on one orbit carries the Gewirtz graph
srg(56, 10, 0, 2), and the permutation module splits as 56 = 1 + 20 + 35
with rational projector coefficients.  Everything below is derived; no
tables are consulted.
"""

from itertools import combinations

from permsplit import (
    GeneratorSet,
    Permutation,
    compute_orbitals,
    compute_structure_constants,
    split,
    verify_family_algebraic,
)
from permsplit.cli import render_decomposition_text

# GF(4) as {0, 1, w, w+1} encoded 0..3 with w^2 = w + 1
_EXP = [1, 2, 3]
_LOG = {1: 0, 2: 1, 3: 2}


def gmul(a, b):
    if a == 0 or b == 0:
        return 0
    return _EXP[(_LOG[a] + _LOG[b]) % 3]


def ginv(a):
    return {1: 1, 2: 3, 3: 2}[a]


def normalize(v):
    for x in v:
        if x:
            s = ginv(x)
            return tuple(gmul(s, y) for y in v)
    return None


def mat_apply(m, v):
    out = []
    for row in m:
        acc = 0
        for a, x in zip(row, v):
            acc ^= gmul(a, x)
        out.append(acc)
    return tuple(out)


def build_psl34():
    points = []
    for a in range(4):
        for b in range(4):
            for c in range(4):
                v = (a, b, c)
                if v == (0, 0, 0):
                    continue
                n = normalize(v)
                if n not in points:
                    points.append(n)
    assert len(points) == 21
    pidx = {p: i for i, p in enumerate(points)}

    def perm_of(m):
        return Permutation.from_images(
            [pidx[normalize(mat_apply(m, p))] + 1 for p in points]
        )

    w = 2
    mats = (
        ((1, 0, 0), (1, 1, 0), (0, 0, 1)),   # transvection x21(1)
        ((1, 0, 0), (w, 1, 0), (0, 0, 1)),   # transvection x21(w)
        ((0, 1, 0), (0, 0, 1), (1, 0, 0)),   # coordinate 3-cycle
    )
    gens = GeneratorSet(21, tuple(perm_of(m) for m in mats))
    return points, gens


def hyperoval_orbit(points, gens):
    # collinear triples from the 21 lines (kernels of linear forms)
    collinear = set()
    for f in points:
        line = [
            i
            for i, p in enumerate(points)
            if gmul(f[0], p[0]) ^ gmul(f[1], p[1]) ^ gmul(f[2], p[2]) == 0
        ]
        for t in combinations(sorted(line), 3):
            collinear.add(t)

    hypers = []

    def extend(arc, start):
        if len(arc) == 6:
            hypers.append(frozenset(arc))
            return
        for q in range(start, 21):
            if all(
                tuple(sorted((a, b, q))) not in collinear
                for a, b in combinations(arc, 2)
            ):
                arc.append(q)
                extend(arc, q + 1)
                arc.pop()

    extend([], 0)
    assert len(hypers) == 168

    arrays = [g.images0 for g in gens.generators]

    def act(h, arr):
        return frozenset(int(arr[x]) for x in h)

    orbit = [hypers[0]]
    seen = {hypers[0]}
    frontier = [hypers[0]]
    while frontier:
        nxt = []
        for h in frontier:
            for arr in arrays:
                h2 = act(h, arr)
                if h2 not in seen:
                    seen.add(h2)
                    orbit.append(h2)
                    nxt.append(h2)
        frontier = nxt
    assert len(orbit) == 56
    hidx = {h: i + 1 for i, h in enumerate(orbit)}
    return GeneratorSet(
        56,
        tuple(
            Permutation.from_images([hidx[act(h, arr)] for h in orbit])
            for arr in arrays
        ),
    )


def main():
    points, g21 = build_psl34()
    g56 = hyperoval_orbit(points, g21)
    basis = compute_orbitals(g56)
    print("rank:", basis.rank, "suborbit lengths:", basis.lengths_in_order())

    deco = split(g56)
    print(render_decomposition_text(deco))

    consts = compute_structure_constants(g56, basis)
    report = verify_family_algebraic(consts, deco)
    print("algebraic verification:", "all passed" if report.passed else "FAILED")
    assert deco.dimension_multiset == [1, 20, 35]


if __name__ == "__main__":
    main()
