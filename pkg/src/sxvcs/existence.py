"""Existence tests for noise-free XOR schemes.

Two questions are answered for an access structure:

* whether a scheme with pixel expansion 1 exists (odd row combinations of
  the qualified matrix must never land on a forbidden set), and
* whether a perfect-white static scheme exists at all, together with the
  smallest pixel expansion and an explicit ``B1`` achieving it.

The second test works in the space of row functionals.  For a forbidden
set ``F`` a functional ``y`` with ``y^T G`` supported inside ``F`` forces
``y^T B1 = 0``; collecting these over the maximal forbidden sets gives a
subspace ``L``.  Admissible ``B1`` columns are exactly the vectors of
``L``'s orthogonal complement, and a row can be made nonzero iff its unit
vector is outside ``L``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import ceil, log2

import networkx as nx

from .access import AccessStructure, ForbiddenFamily, format_set, forbidden_family, qualified_matrix
from .gf2 import BitMatrix, Echelon, bits_to_str, iter_bits, left_nullspace, nullspace, popcount

MAX_EXPANSION1_ROWS = 20
MAX_COMPLEMENT_DIM = 20
MAX_SIZE = 24
EXACT_SEARCH_NODES = 2_000_000


class ExistenceTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class ExistenceVerdict:
    """Outcome of an existence test.

    ``certificate`` is a ``B1`` (with ``B0 = 0``) realizing the verdict;
    ``minimal_exact`` is False only when the cover search gave up and
    ``minimal_m`` is an upper bound.  ``witness`` is a bitmask over
    qualified-matrix rows (failing odd subset) and ``forced_rows`` lists
    0-based rows that every admissible ``B1`` must leave zero.
    """

    exists: bool
    minimal_m: int | None = None
    certificate: BitMatrix | None = None
    reason: str = ""
    minimal_exact: bool = True
    lower_bound: int | None = None
    witness: int | None = None
    forced_rows: tuple[int, ...] = ()

    def as_dict(self) -> dict:
        out = {"exists": self.exists, "minimal_m": self.minimal_m}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_strings()
        if self.minimal_m is not None:
            out["minimal_exact"] = self.minimal_exact
        if self.reason:
            out["reason"] = self.reason
        if self.witness is not None:
            out["witness_rows"] = [i + 1 for i in iter_bits(self.witness)]
        if self.forced_rows:
            out["forced_rows"] = [i + 1 for i in self.forced_rows]
        return out


def _odd_combination_search(rows: list[int], minimal: tuple[int, ...]):
    """First odd row subset whose XOR is forbidden, as ``(subset, xor)``."""

    def forbidden(v: int) -> bool:
        return not any(q & v == q for q in minimal)

    t = len(rows)
    if t <= MAX_EXPANSION1_ROWS:
        # Gray code: subset i ^ (i >> 1); one row toggles per step
        acc = 0
        subset = 0
        for i in range(1, 1 << t):
            bit = (i & -i).bit_length() - 1
            subset ^= 1 << bit
            acc ^= rows[bit]
            if popcount(subset) & 1 and forbidden(acc):
                return subset, acc
        return None
    # odd combinations form the affine space rows[0] + span{rows[0] ^ rows[i]}
    basis: list[tuple[int, int]] = []
    pivots: dict[int, int] = {}
    for i in range(1, t):
        v, tag = rows[0] ^ rows[i], 1 << i
        for p in sorted(pivots):
            if (v >> p) & 1:
                bv, bt = basis[pivots[p]]
                v ^= bv
                tag ^= bt
        if v:
            pivots[(v & -v).bit_length() - 1] = len(basis)
            basis.append((v, tag))
    if len(basis) > MAX_EXPANSION1_ROWS:
        raise ExistenceTooLarge(f"odd-combination space has dimension {len(basis)} > {MAX_EXPANSION1_ROWS}")
    for coeffs in range(1 << len(basis)):
        v, tag = rows[0], 0
        for b in iter_bits(coeffs):
            v ^= basis[b][0]
            tag ^= basis[b][1]
        if forbidden(v):
            subset = tag if popcount(tag) & 1 else tag ^ 1
            return subset, v
    return None


def exists_expansion1(s: AccessStructure) -> ExistenceVerdict:
    """Decide whether a scheme with one subpixel exists.

    With ``m = 1`` every nonzero row of ``B1`` is 1, so the only candidate
    is the all-ones column; it is secure iff no odd set of qualified rows
    XORs to a forbidden set.
    """
    q = qualified_matrix(s)
    found = _odd_combination_search(list(q.matrix.rows), s.minimal_qualified)
    if found is None:
        return ExistenceVerdict(True, 1, BitMatrix.ones(q.t, 1), minimal_exact=True, lower_bound=1)
    subset, acc = found
    rows = ", ".join(format_set(q.row_sets[i]) for i in iter_bits(subset))
    reason = f"odd row combination {rows} stacks to forbidden set {format_set(acc)}"
    return ExistenceVerdict(False, reason=reason, witness=subset)


def forced_functionals(s: AccessStructure, fam: ForbiddenFamily | None = None) -> Echelon:
    """Echelon basis of ``L``: functionals that must vanish on every ``B1`` column."""
    fam = forbidden_family(s) if fam is None else fam
    g = qualified_matrix(s).matrix
    ech = Echelon(left_nullspace(g))
    for f in fam.maximal_forbidden:
        outside = [c for c in range(s.n) if not (f >> c) & 1]
        for y in left_nullspace(g.select_columns(outside)):
            ech.add(y)
    return ech


def admissible_columns(s: AccessStructure, fam: ForbiddenFamily | None = None) -> tuple[int, ...]:
    """Basis of the space of admissible ``B1`` columns (bit ``r`` = row ``r``)."""
    basis = forced_functionals(s, fam).basis()
    t = qualified_matrix(s).t
    if not basis:
        return tuple(1 << r for r in range(t))
    return nullspace(BitMatrix(len(basis), t, tuple(basis)))


def _span(basis: tuple[int, ...]) -> list[int]:
    out = [0]
    for v in basis:
        out += [x ^ v for x in out]
    return out


def _greedy_cover(candidates: list[int], t: int) -> list[int]:
    full = (1 << t) - 1
    chosen: list[int] = []
    covered = 0
    while covered != full:
        # most new rows; ties go to the lexicographically smallest column string
        best = min(candidates, key=lambda v: (-popcount(v & ~covered), bits_to_str(v, t)))
        chosen.append(best)
        covered |= best
    return chosen


def _clique_bound(generators: list[int]) -> int:
    """Lower bound on the number of columns from forced row inequalities.

    Rows ``s`` and ``s'`` of any admissible ``B1`` are images ``M g_s`` of
    their generator columns, so if ``g_s ^ g_s'`` is itself a generator
    the two rows must differ.  A clique of such pairs needs that many
    distinct nonzero rows.
    """
    nodes = sorted(set(generators))
    present = set(nodes)
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    for a, b in itertools.combinations(nodes, 2):
        if a ^ b in present:
            graph.add_edge(a, b)
    clique, _ = nx.max_weight_clique(graph, weight=None)
    return max(1, ceil(log2(len(clique) + 1)))


def _exact_cover(candidates: list[int], full: int, depth: int, budget: list[int]) -> list[int] | None:
    """Cover ``full`` with at most ``depth`` candidates, or None; raises on budget exhaustion."""

    def go(covered: int, left: int) -> list[int] | None:
        if covered == full:
            return []
        if left == 0:
            return None
        budget[0] -= 1
        if budget[0] < 0:
            raise ExistenceTooLarge("cover search budget exhausted")
        missing = full & ~covered
        target = missing & -missing
        for v in candidates:
            if v & target:
                rest = go(covered | v, left - 1)
                if rest is not None:
                    return [v, *rest]
        return None

    return go(0, depth)


def _maximal_candidates(space: list[int], t: int) -> list[int]:
    """Drop vectors whose support is contained in another's."""
    vecs = sorted({v for v in space if v}, key=lambda v: (-popcount(v), bits_to_str(v, t)[::-1]))
    kept: list[int] = []
    for v in vecs:
        if not any(k & v == v for k in kept):
            kept.append(v)
    return kept


def exists_sxvcs(s: AccessStructure, fam: ForbiddenFamily | None = None) -> ExistenceVerdict:
    """Decide whether a (perfect-white) static scheme exists for ``s``.

    When it does, the verdict carries the smallest pixel expansion and a
    ``B1`` certificate whose columns are admissible vectors covering every
    qualified row.
    """
    # t itself is not capped: the work grows with the dimension of the admissible space
    if s.n > MAX_SIZE:
        raise ExistenceTooLarge(f"existence search is limited to n <= {MAX_SIZE}, got n={s.n}")
    fam = forbidden_family(s) if fam is None else fam
    q = qualified_matrix(s)
    t = q.t
    forced = forced_functionals(s, fam)
    bad = tuple(r for r in range(t) if forced.contains(1 << r))
    if bad:
        names = ", ".join(f"row {r + 1} {format_set(q.row_sets[r])}" for r in bad)
        return ExistenceVerdict(
            False,
            reason=f"security forces these rows of B1 to zero: {names}",
            forced_rows=bad,
        )
    basis = admissible_columns(s, fam)
    if len(basis) > MAX_COMPLEMENT_DIM:
        raise ExistenceTooLarge(f"admissible column space has dimension {len(basis)} > {MAX_COMPLEMENT_DIM}")
    full = (1 << t) - 1
    candidates = _maximal_candidates(_span(basis), t)
    chosen = _greedy_cover(candidates, t)
    generators = [sum(((v >> r) & 1) << b for b, v in enumerate(basis)) for r in range(t)]
    lower = _clique_bound(generators)
    exact = True
    if len(chosen) > lower:
        try:
            for depth in range(lower, len(chosen)):
                found = _exact_cover(candidates, full, depth, [EXACT_SEARCH_NODES])
                if found is not None:
                    chosen = found
                    break
        except ExistenceTooLarge:
            exact = False
    cols = sorted(chosen, key=lambda v: bits_to_str(v, t), reverse=True)
    cert = BitMatrix.from_columns(cols, t)
    return ExistenceVerdict(True, len(cols), cert, minimal_exact=exact, lower_bound=lower)
