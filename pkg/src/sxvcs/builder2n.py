"""Optimal noise-free (2, n) schemes.

The black right-hand side ``B1*`` is an ``(n-1) x ceil(log2 n)`` matrix
for the path system whose row ``i`` is the pair ``{i, i+1}``.  The stack of
a pair ``{i, j}`` is the XOR of rows ``i .. j-1``, so the scheme is valid
iff every contiguous run of rows has a nonzero XOR.  The matrix is grown
one participant at a time: a fresh column is opened whenever the row count
passes a power of two, otherwise the next row mirrors an earlier one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .access import QualifiedMatrix, threshold_structure, to_mask
from .gf2 import BitMatrix
from .scheme import LinearScheme


@dataclass(frozen=True)
class B1Star:
    matrix: BitMatrix
    n: int

    @property
    def m(self) -> int:
        return self.matrix.ncols


def _grow(n: int) -> Iterator[tuple[int, list[int], int]]:
    """Yield ``(i, rows, m)`` after each participant count ``i = 2 .. n``."""
    rows, m = [1], 1
    yield 2, rows, m
    for i in range(3, n + 1):
        if (i - 1) & (i - 2) == 0:
            # i - 1 is a power of two: widen, then close the new column
            top = 1 << m
            rows = [r | top for r in rows]
            rows.append(top)
            m += 1
        else:
            rows.append(rows[(1 << m) - i])
        yield i, rows, m


def build_b1_star(n: int) -> B1Star:
    if n < 2:
        raise ValueError("need n >= 2")
    for _, rows, m in _grow(n):
        pass
    return B1Star(BitMatrix(n - 1, m, tuple(rows)), n)


def build_all_prefix(n: int) -> list[B1Star]:
    """``B1*`` for every participant count ``2 .. n`` from a single run."""
    if n < 2:
        raise ValueError("need n >= 2")
    return [B1Star(BitMatrix(i - 1, m, tuple(rows)), i) for i, rows, m in _grow(n)]


def path_matrix(n: int) -> QualifiedMatrix:
    rows = tuple(to_mask((i, i + 1)) for i in range(1, n))
    return QualifiedMatrix(BitMatrix(n - 1, n, rows), rows)


def build_optimal_2n(n: int) -> LinearScheme:
    """Perfect-white (2, n) scheme on the path system with ``B1 = B1*``.

    Contrast is measured over all pairs even though only the ``n - 1``
    consecutive pairs appear as equations.
    """
    star = build_b1_star(n)
    return LinearScheme.build(
        threshold_structure(2, n),
        [BitMatrix.zeros(n - 1, star.m)],
        [star.matrix],
        path_matrix(n),
    )

