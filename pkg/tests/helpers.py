"""Shared fixtures data and generators for the test suite."""

import itertools
import random

from sxvcs import oracle
from sxvcs.access import AccessStructure, qualified_matrix, threshold_structure
from sxvcs.gf2 import BitMatrix, rank
from sxvcs.scheme import LinearScheme, check_contrast, check_security, check_security_pw, classify

PAIRS3 = threshold_structure(2, 3)
B1_23 = BitMatrix.from_lists([[1, 0], [0, 1], [1, 1]])

# the printed solution sets of the (2,3), m=2 construction
S0_23 = [
    [[1, 1], [1, 1], [1, 1]],
    [[0, 1], [0, 1], [0, 1]],
    [[1, 0], [1, 0], [1, 0]],
    [[0, 0], [0, 0], [0, 0]],
]
S1_23 = [
    [[1, 1], [0, 1], [1, 0]],
    [[0, 1], [1, 1], [0, 0]],
    [[1, 0], [0, 0], [1, 1]],
    [[0, 0], [1, 0], [0, 1]],
]

# m=3 (2,3) scheme whose white stacks are not blank
B0_23_M3 = BitMatrix.from_lists([[0, 0, 1], [0, 0, 0], [0, 0, 1]])
B1_23_M3 = BitMatrix.from_lists([[1, 0, 1], [0, 1, 0], [1, 1, 1]])

# four participants, qualified rows {1,2,3}, {1,2,4}, {2,3,4}, pixel expansion 1
FOUR_PARTY = AccessStructure.from_sets(4, [{1, 2, 3}, {1, 2, 4}, {2, 3, 4}])


def example_23():
    return LinearScheme.build(PAIRS3, BitMatrix.zeros(3, 2), B1_23)


def example_23_m3():
    return LinearScheme.build(PAIRS3, B0_23_M3, B1_23_M3)


def four_party_scheme():
    return LinearScheme.build(FOUR_PARTY, BitMatrix.zeros(3, 1), BitMatrix.ones(3, 1))


def semi_white_24():
    """k=2 perfect-white (2,4) scheme: the optimal B1 and its column swap as the black systems."""
    from sxvcs.builder2n import build_optimal_2n

    base = build_optimal_2n(4)
    b1 = base.b1_list[0]
    swapped = b1.column_block(1, 2).hstack(b1.column_block(0, 1))
    zero = BitMatrix.zeros(3, 2)
    return LinearScheme.build(base.structure, [zero, zero], [b1, swapped], base.qualified)


def _relabel(mask, perm):
    return sum(((mask >> i) & 1) << perm[i] for i in range(len(perm)))


def structure_classes(max_n=4, max_t=4):
    """One representative per relabelling class of antichains with ``n <= max_n``, ``t <= max_t``."""
    out = []
    for n in range(1, max_n + 1):
        seen = set()
        perms = list(itertools.permutations(range(n)))
        for t in range(1, max_t + 1):
            for combo in itertools.combinations(range(1, 1 << n), t):
                if any(a != b and a & b == a for a in combo for b in combo):
                    continue
                key = min(tuple(sorted(_relabel(q, p) for q in combo)) for p in perms)
                if key not in seen:
                    seen.add(key)
                    out.append(AccessStructure(n, key))
    return out


def image(structure, m):
    """All right-hand sides ``G X`` for ``n x m`` matrices ``X`` (distinct)."""
    g = qualified_matrix(structure).matrix
    cols = sorted({(g @ BitMatrix.from_columns([x], structure.n)).column(0) for x in range(1 << structure.n)})
    return cols


def rhs_from_columns(columns, t):
    return BitMatrix.from_columns(list(columns), t)


def random_scheme(rng: random.Random, structure=None, n_range=(2, 4), m_range=(1, 2), k_range=(1, 2)):
    """A random consistent scheme: every right-hand side is ``G X`` for a random ``X``."""
    if structure is None:
        n = rng.randint(*n_range)
        while True:
            sets = {rng.randrange(1, 1 << n) for _ in range(rng.randint(1, 4))}
            try:
                structure = AccessStructure.from_sets(n, [[i + 1 for i in range(n) if (q >> i) & 1] for q in sets])
                break
            except ValueError:
                continue
    g = qualified_matrix(structure).matrix
    m = rng.randint(*m_range)
    k = rng.randint(*k_range)

    def rhs():
        x = BitMatrix(structure.n, m, tuple(rng.randrange(1 << m) for _ in range(structure.n)))
        return g @ x

    return LinearScheme.build(structure, [rhs() for _ in range(k)], [rhs() for _ in range(k)])


def disagreements(s: LinearScheme) -> list[str]:
    """Every way the linear-algebra verdicts differ from the brute-force oracle."""
    out = []
    c0, c1 = oracle.solution_sets(s)
    st = s.structure
    kind, pw = oracle.classify_collections(c0, c1, st)
    cls = classify(s)
    if (cls.kind, cls.perfect_white) != (kind, pw):
        out.append(f"classify {cls.name} vs oracle {kind.value}{'+PW' if pw else ''}")
    sec = bool(oracle.security_ok(c0, c1, st))
    if check_security(s, method="coset").passed != sec:
        out.append("coset security")
    if s.k == 1:
        if check_security(s, method="block").passed != sec:
            out.append("block security")
        if s.is_pw() and check_security_pw(s).passed != sec:
            out.append("pw security")
    rep = check_contrast(s)
    if rep.passed != bool(oracle.contrast_ok(c0, c1, st)):
        out.append("contrast")
    if rep.pxvcs_passed != bool(oracle.average_contrast_ok(c0, c1, st)):
        out.append("average contrast")
    return out


def exhaustive_family():
    """Yield every instance of the oracle-agreement family.

    Structures are all relabelling classes with ``n <= 4`` and ``t <= 4``.
    Right-hand sides run over every ``G X``: all pairs for ``k = m = 1``;
    for ``m = 2`` up to column order and for ``k = 2`` up to the order of
    the systems of one colour.  ``k = m = 2`` is swept only for rank-1
    structures: at rank 2 and above it runs to 4.8e7 (rank 3) and 3.2e9
    (rank 4) instances, so those corners are sampled by
    :func:`corner_samples` and the random sweep instead.
    """
    for st in structure_classes():
        t = st.t
        cols = image(st, 1)
        r = rank(qualified_matrix(st).matrix)
        for a in cols:
            for b in cols:
                yield LinearScheme.build(st, [BitMatrix.from_columns([a], t)], [BitMatrix.from_columns([b], t)])
        joint = list(itertools.product(cols, cols))
        for (a0, a1), (b0, b1) in itertools.combinations_with_replacement(joint, 2):
            yield LinearScheme.build(st, [BitMatrix.from_columns([a0, b0], t)], [BitMatrix.from_columns([a1, b1], t)])
        pairs = list(itertools.combinations_with_replacement(cols, 2))
        for w in pairs:
            for b in pairs:
                yield LinearScheme.build(
                    st, [BitMatrix.from_columns([c], t) for c in w], [BitMatrix.from_columns([c], t) for c in b]
                )
        if r == 1:
            mats = [BitMatrix.from_columns([a, b], t) for a in cols for b in cols]
            mpairs = list(itertools.combinations_with_replacement(range(len(mats)), 2))
            for w in mpairs:
                for b in mpairs:
                    yield LinearScheme.build(st, [mats[i] for i in w], [mats[i] for i in b])


def corner_samples(count=1500, seed=4):
    """Seeded ``k = m = 2`` instances on the structures of rank 2 and above."""
    rng = random.Random(seed)
    wide = [st for st in structure_classes() if rank(qualified_matrix(st).matrix) >= 2]
    for _ in range(count):
        yield random_scheme(rng, structure=rng.choice(wide), m_range=(2, 2), k_range=(2, 2))


def random_family(count=500, seed=2024):
    """Seeded random instances with ``n`` up to 5, ``m`` up to 3 and ``k`` up to 3."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        s = random_scheme(rng, n_range=(2, 5), m_range=(1, 3), k_range=(1, 3))
        # keep within the oracle's enumeration cap
        if sum(r.solution_count() for r in s.solve0) <= oracle.MAX_COLLECTION:
            made += 1
            yield s
