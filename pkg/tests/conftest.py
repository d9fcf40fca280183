"""Shared group constructions and the acceptance-corpus fixture."""

import os
from itertools import combinations

import pytest

from permsplit import GeneratorSet, Permutation


def perm(imgs):
    return Permutation.from_images(imgs)


def cyclic(n):
    return GeneratorSet(n, (perm([i % n + 1 for i in range(1, n + 1)]),))


def dihedral(n):
    rot = perm([i % n + 1 for i in range(1, n + 1)])
    ref = perm([(n + 1 - i) % n + 1 for i in range(1, n + 1)])
    return GeneratorSet(n, (rot, ref))


def symmetric(n):
    if n == 2:
        return GeneratorSet(2, (perm([2, 1]),))
    return GeneratorSet(
        n,
        (perm([2, 1] + list(range(3, n + 1))), perm([i % n + 1 for i in range(1, n + 1)])),
    )


def alternating(n):
    three = perm([2, 3, 1] + list(range(4, n + 1)))
    if n % 2 == 1:
        big = perm([i % n + 1 for i in range(1, n + 1)])
    else:
        big = perm([1] + [i + 1 for i in range(2, n)] + [2])
    return GeneratorSet(n, (three, big))


def pair_action(gens, m, pair_order=None):
    """Induced action on unordered pairs of {1..m}, with a chosen labeling."""
    pairs = pair_order or list(combinations(range(1, m + 1), 2))
    idx = {p: i + 1 for i, p in enumerate(pairs)}
    out = []
    for g in gens.generators:
        imgs = []
        for a, b in pairs:
            x, y = g.apply(a), g.apply(b)
            imgs.append(idx[(min(x, y), max(x, y))])
        out.append(perm(imgs))
    return GeneratorSet(len(pairs), tuple(out))


# Petersen labeling: point 2 is disjoint from point 1 = {1,2}, which puts the
# valency-3 (disjointness) suborbit ahead of the valency-6 one in the basis
# ordering and yields suborbit lengths 1, 3, 6.
PETERSEN_PAIR_ORDER = [
    (1, 2), (3, 4), (3, 5), (4, 5), (1, 3),
    (1, 4), (1, 5), (2, 3), (2, 4), (2, 5),
]


def petersen():
    return pair_action(alternating(5), 5, PETERSEN_PAIR_ORDER)


def regular_action(gens):
    """Right-regular action of the group generated by ``gens``."""

    def mul(p, q):
        return tuple(q[i] for i in p)

    gi = [tuple(x - 1 for x in g.images()) for g in gens.generators]
    ident = tuple(range(gens.degree))
    elems = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gi:
                h = mul(e, g)
                if h not in seen:
                    seen.add(h)
                    elems.append(h)
                    nxt.append(h)
        frontier = nxt
    idx = {e: i + 1 for i, e in enumerate(elems)}
    return GeneratorSet(
        len(elems),
        tuple(perm([idx[mul(e, g)] for e in elems]) for g in gi),
    )


def q8_regular():
    """Right-regular action of the quaternion group from its unit table."""

    def mul(a, b):
        sa, ua = a & 1, a >> 1
        sb, ub = b & 1, b >> 1
        table = {
            (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
            (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
            (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
            (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
        }
        uu, extra = table[(ua, ub)]
        return (uu << 1) | (sa ^ sb ^ extra)

    return GeneratorSet(
        8, tuple(perm([mul(e, g) + 1 for e in range(8)]) for g in (2, 4))
    )


def klein_regular():
    return GeneratorSet(4, (perm([2, 1, 4, 3]), perm([3, 4, 1, 2])))


def frobenius21():
    """C7 : C3 on 7 points: x -> x+1 and x -> 2x over GF(7)."""
    add = perm([i % 7 + 1 for i in range(1, 8)])
    mul2 = perm([((2 * (i - 1)) % 7) + 1 for i in range(1, 8)])
    return GeneratorSet(7, (add, mul2))


def wreath_c2_c3():
    return GeneratorSet(6, (perm([2, 1, 3, 4, 5, 6]), perm([3, 4, 5, 6, 1, 2])))


def wreath_s3_c2():
    return GeneratorSet(
        6,
        (perm([2, 1, 3, 4, 5, 6]), perm([2, 3, 1, 4, 5, 6]), perm([4, 5, 6, 1, 2, 3])),
    )


def wreath_c3_c2():
    return GeneratorSet(6, (perm([2, 3, 1, 4, 5, 6]), perm([4, 5, 6, 1, 2, 3])))


def corpus_actions():
    """The transitive-action corpus of the acceptance property suite."""
    return [
        ("C4_regular", cyclic(4)),
        ("C5_natural", cyclic(5)),
        ("C6_natural", cyclic(6)),
        ("C7_natural", cyclic(7)),
        ("C8_natural", cyclic(8)),
        ("C9_natural", cyclic(9)),
        ("D4_natural", dihedral(4)),
        ("D5_natural", dihedral(5)),
        ("D6_natural", dihedral(6)),
        ("D7_natural", dihedral(7)),
        ("S3_natural", symmetric(3)),
        ("S4_natural", symmetric(4)),
        ("A4_natural", alternating(4)),
        ("A5_natural", alternating(5)),
        ("S4_pairs", pair_action(symmetric(4), 4)),
        ("A4_pairs", pair_action(alternating(4), 4)),
        ("A5_petersen", petersen()),
        ("S3_regular", regular_action(symmetric(3))),
        ("D4_regular", regular_action(dihedral(4))),
        ("Q8_regular", q8_regular()),
        ("V4_regular", klein_regular()),
        ("F21_natural", frobenius21()),
        ("C2wrC3", wreath_c2_c3()),
        ("S3wrC2", wreath_s3_c2()),
        ("C3wrC2", wreath_c3_c2()),
    ]


CORPUS = corpus_actions()


@pytest.fixture(params=CORPUS, ids=[name for name, _ in CORPUS])
def corpus_member(request):
    return request.param


def m22_path():
    path = os.environ.get("PERMSPLIT_M22_FILE")
    if path and os.path.exists(path):
        return path
    here = os.path.join(os.path.dirname(__file__), "data", "m22_770.gens")
    return here if os.path.exists(here) else None


requires_m22 = pytest.mark.skipif(
    m22_path() is None,
    reason="M22 on 770 points needs user-supplied generators "
    "(tests/data/m22_770.gens or PERMSPLIT_M22_FILE)",
)
