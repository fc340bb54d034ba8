"""Access structures, forbidden families and their matrix encodings.

Participants are numbered from 1 in every public signature and in the
structure file format.  Internally a subset of participants is an ``int``
bitmask where participant ``i`` is bit ``i - 1``, which is also the column
layout of a qualified-matrix row.
"""

from __future__ import annotations

import itertools
import operator
import re
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Sequence

from .gf2 import BitMatrix, iter_bits, popcount

MAX_FORBIDDEN_SEARCH_N = 24


class StructureParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def to_mask(subset: Iterable[int], n: int | None = None) -> int:
    """Bitmask of a 1-based participant subset."""
    out = 0
    for i in subset:
        if i < 1 or (n is not None and i > n):
            raise ValueError(f"participant {i} out of range 1..{n}")
        out |= 1 << (i - 1)
    return out


def to_set(mask: int) -> tuple[int, ...]:
    """1-based participant tuple of a bitmask."""
    return tuple(i + 1 for i in iter_bits(mask))


def format_set(mask: int) -> str:
    return "{" + ",".join(str(i) for i in to_set(mask)) + "}"


def _as_mask(subset, n: int | None = None) -> int:
    return subset if isinstance(subset, int) else to_mask(subset, n)


def _antichain(masks: Iterable[int]) -> tuple[tuple[int, ...], list[int]]:
    """Reduce to inclusion-minimal members; also return the dropped ones.

    Kept sets come back in increasing bitmask order, the canonical row
    order used throughout.
    """
    ordered = sorted(masks)
    if len(set(map(int.bit_count, ordered))) <= 1 and not any(map(operator.eq, ordered, ordered[1:])):
        return tuple(ordered), []
    unique = sorted(set(ordered), key=int.bit_count)
    smaller: list[int] = []  # kept sets strictly smaller than the current size
    level: list[int] = []
    size = 0
    dropped: list[int] = []
    for q in unique:
        if q.bit_count() != size:
            smaller += level
            level = []
            size = q.bit_count()
        if smaller and any(k & q == k for k in smaller):
            dropped.append(q)
        else:
            level.append(q)
    return tuple(sorted(smaller + level)), sorted(dropped)


@dataclass(frozen=True)
class AccessStructure:
    """Participant count plus the minimal qualified sets (as bitmasks).

    ``declared_qualified`` is the list of sets used as rows of the
    qualified matrix and over which contrast is evaluated.  When omitted
    it is the minimal qualified family itself.
    """

    n: int
    minimal_qualified: tuple[int, ...]
    declared_qualified: tuple[int, ...] | None = None
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("an access structure needs at least one participant")
        if not self.minimal_qualified:
            raise ValueError("an access structure needs at least one qualified set")
        full = (1 << self.n) - 1
        for q in self.minimal_qualified + (self.declared_qualified or ()):
            if q == 0:
                raise ValueError("qualified sets must be nonempty")
            if q & ~full:
                raise ValueError(f"qualified set {format_set(q)} exceeds n={self.n}")
        reduced, dropped = _antichain(self.minimal_qualified)
        if dropped:
            raise ValueError("minimal_qualified is not an antichain")
        object.__setattr__(self, "minimal_qualified", reduced)

    @classmethod
    def from_sets(
        cls,
        n: int,
        sets: Iterable[Iterable[int]],
        declared: Iterable[Iterable[int]] | None = None,
    ) -> "AccessStructure":
        """Build from 1-based sets, reducing them to an antichain."""
        masks = [to_mask(s, n) for s in sets]
        if any(m == 0 for m in masks):
            raise ValueError("qualified sets must be nonempty")
        kept, dropped = _antichain(masks)
        warnings = tuple(f"non-minimal qualified set {format_set(d)} dropped" for d in dropped)
        decl = None if declared is None else tuple(to_mask(s, n) for s in declared)
        return cls(n, kept, decl, warnings)

    @property
    def qualified_sets(self) -> tuple[int, ...]:
        return self.declared_qualified if self.declared_qualified is not None else self.minimal_qualified

    @property
    def t(self) -> int:
        return len(self.qualified_sets)

    def minimal_sets(self) -> list[tuple[int, ...]]:
        return [to_set(q) for q in self.minimal_qualified]

    def is_qualified(self, subset) -> bool:
        """True iff the subset contains some minimal qualified set."""
        f = _as_mask(subset, self.n)
        return any(q & f == q for q in self.minimal_qualified)

    def is_forbidden(self, subset) -> bool:
        return not self.is_qualified(subset)

    def uniform_threshold(self) -> int | None:
        """Return ``k`` if this is the ``(k, n)`` threshold structure."""
        sizes = set(map(int.bit_count, self.minimal_qualified))
        if len(sizes) != 1:
            return None
        k = sizes.pop()
        return k if len(self.minimal_qualified) == comb(self.n, k) else None

    def __str__(self) -> str:
        return f"n={self.n}; " + " ".join(format_set(q) for q in self.minimal_qualified)


@dataclass(frozen=True)
class QualifiedMatrix:
    """``t x n`` matrix whose row ``i`` is the indicator of ``row_sets[i]``."""

    matrix: BitMatrix
    row_sets: tuple[int, ...]

    @property
    def t(self) -> int:
        return self.matrix.nrows

    @property
    def n(self) -> int:
        return self.matrix.ncols


def qualified_matrix(s: AccessStructure) -> QualifiedMatrix:
    rows = s.qualified_sets
    return QualifiedMatrix(BitMatrix(len(rows), s.n, tuple(rows)), tuple(rows))


def matrix_from_sets(n: int, sets: Sequence[Iterable[int]]) -> QualifiedMatrix:
    rows = tuple(to_mask(s, n) for s in sets)
    return QualifiedMatrix(BitMatrix(len(rows), n, rows), rows)


@dataclass(frozen=True)
class ForbiddenFamily:
    """Maximal forbidden sets of a structure plus a membership test."""

    n: int
    minimal_qualified: tuple[int, ...]
    maximal_forbidden: tuple[int, ...]

    def __contains__(self, subset) -> bool:
        f = _as_mask(subset, self.n)
        return not any(q & f == q for q in self.minimal_qualified)

    def is_forbidden(self, subset) -> bool:
        return subset in self

    def maximal_sets(self) -> list[tuple[int, ...]]:
        return [to_set(f) for f in self.maximal_forbidden]

    def all_forbidden(self) -> Iterator[int]:
        """Every forbidden set, including the empty set."""
        seen = set()
        for top in self.maximal_forbidden:
            sub = top
            while True:
                if sub not in seen:
                    seen.add(sub)
                    yield sub
                if sub == 0:
                    break
                sub = (sub - 1) & top


def _maximal_forbidden_search(n: int, minimal: Sequence[int]) -> list[int]:
    full = (1 << n) - 1
    found: set[int] = set()
    seen: set[int] = set()
    stack = [full]
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        inside = next((q for q in minimal if q & s == q), None)
        if inside is None:
            found.add(s)
            continue
        for i in iter_bits(inside):
            stack.append(s & ~(1 << i))
    out = []
    for f in found:
        outside = full & ~f
        if all(any(q & (f | (1 << i)) == q for q in minimal) for i in iter_bits(outside)):
            out.append(f)
    return out


def forbidden_family(s: AccessStructure) -> ForbiddenFamily:
    """Compute the maximal forbidden sets of ``s``."""
    k = s.uniform_threshold()
    if k is not None:
        tops = [to_mask(c) for c in itertools.combinations(range(1, s.n + 1), k - 1)]
    else:
        if s.n > MAX_FORBIDDEN_SEARCH_N:
            raise ValueError(f"forbidden-set search is limited to n <= {MAX_FORBIDDEN_SEARCH_N}")
        tops = _maximal_forbidden_search(s.n, s.minimal_qualified)
    tops.sort(key=lambda f: (popcount(f), f))
    return ForbiddenFamily(s.n, s.minimal_qualified, tuple(tops))


def threshold_structure(k: int, n: int) -> AccessStructure:
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    # by_top[j]: size-r sets whose largest member is j, in increasing order
    by_top = [[1 << j] for j in range(n)]
    for _ in range(k - 1):
        by_top = [[m | (1 << j) for i in range(j) for m in by_top[i]] for j in range(n)]
    return AccessStructure(n, tuple(itertools.chain.from_iterable(by_top)))


def build_T_F(subset, n: int) -> BitMatrix:
    """Selector matrix with ``T_F @ X == X`` restricted to the rows in ``F``."""
    f = _as_mask(subset, n)
    if f == 0:
        raise ValueError("T_F needs a nonempty set")
    if f >> n:
        raise ValueError(f"set {format_set(f)} exceeds n={n}")
    return BitMatrix(popcount(f), n, tuple(1 << i for i in iter_bits(f)))


def _expand_mask(mask: int, offsets: Sequence[int], multiplicities: Sequence[int]) -> int:
    out = 0
    for i in iter_bits(mask):
        out |= ((1 << multiplicities[i]) - 1) << offsets[i]
    return out


def derive_structure(s: AccessStructure, multiplicities: Sequence[int]) -> AccessStructure:
    """Replace participant ``i`` by ``multiplicities[i-1]`` participants who must all be present."""
    if len(multiplicities) != s.n:
        raise ValueError(f"need {s.n} multiplicities, got {len(multiplicities)}")
    if any(mi < 1 for mi in multiplicities):
        raise ValueError("multiplicities must be positive")
    offsets = list(itertools.accumulate([0, *multiplicities[:-1]]))
    new_n = sum(multiplicities)
    minimal = tuple(_expand_mask(q, offsets, multiplicities) for q in s.minimal_qualified)
    declared = None
    if s.declared_qualified is not None:
        declared = tuple(_expand_mask(q, offsets, multiplicities) for q in s.declared_qualified)
    return AccessStructure(new_n, minimal, declared)


_SET_RE = re.compile(r"\{([^{}]*)\}")
_N_RE = re.compile(r"^\s*n\s*=\s*(\d+)\s*$")


def parse_structure(text: str) -> AccessStructure:
    """Parse the structure file format.

    ::

        # comment
        n=4
        {1,2}
        {1,3} {2,4}

    The first statement must be ``n=<int>``; statements may also be
    separated by ``;`` on a single line.  Every ``{...}`` is one qualified
    set of 1-based indices.
    """
    n = None
    sets: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for stmt in line.split(";"):
            stmt = stmt.strip()
            if not stmt:
                continue
            if n is None:
                m = _N_RE.match(stmt)
                if not m:
                    raise StructureParseError("expected 'n=<int>' before any set", lineno)
                n = int(m.group(1))
                if n < 1:
                    raise StructureParseError("n must be positive", lineno)
                continue
            pos = 0
            for m in _SET_RE.finditer(stmt):
                if stmt[pos:m.start()].strip():
                    raise StructureParseError(f"unexpected text {stmt[pos:m.start()].strip()!r}", lineno)
                pos = m.end()
                body = m.group(1).strip()
                if not body:
                    raise StructureParseError("empty qualified set", lineno)
                try:
                    members = [int(tok) for tok in body.split(",")]
                except ValueError:
                    raise StructureParseError(f"bad set {m.group(0)!r}", lineno) from None
                for i in members:
                    if i < 1 or i > n:
                        raise StructureParseError(f"index {i} out of range 1..{n}", lineno)
                sets.append((lineno, members))
            if stmt[pos:].strip():
                raise StructureParseError(f"unexpected text {stmt[pos:].strip()!r}", lineno)
    if n is None:
        raise StructureParseError("empty structure file", 1)
    if not sets:
        raise StructureParseError("no qualified sets given", len(text.splitlines()) or 1)
    return AccessStructure.from_sets(n, [s for _, s in sets])


def format_structure(s: AccessStructure) -> str:
    lines = [f"n={s.n}"]
    lines += [format_set(q) for q in s.minimal_qualified]
    return "\n".join(lines) + "\n"
