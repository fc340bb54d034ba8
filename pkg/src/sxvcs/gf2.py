"""Dense linear algebra over GF(2) on bit-packed rows.

A :class:`BitMatrix` stores each row as a Python ``int``; column ``c`` of a
row is bit ``c`` (least significant bit = first column).  Column vectors
that are passed around on their own (nullspace basis vectors, left-kernel
vectors) use the same convention with the row index as the bit position.

Bit-strings used for display and serialization list columns left to right,
so ``"110"`` is a row with columns 0 and 1 set.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

DEFAULT_ENUM_CAP = 1 << 20


class DimensionError(ValueError):
    """Raised when matrix shapes are incompatible."""


class EnumerationTooLarge(RuntimeError):
    """Raised when a solution set is too large to materialize."""


def popcount(x: int) -> int:
    return x.bit_count()


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def mask_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def bits_to_str(x: int, width: int) -> str:
    return "".join("1" if (x >> c) & 1 else "0" for c in range(width))


def str_to_bits(s: str) -> int:
    out = 0
    for c, ch in enumerate(s):
        if ch == "1":
            out |= 1 << c
        elif ch != "0":
            raise ValueError(f"invalid bit character {ch!r} in {s!r}")
    return out


@dataclass(frozen=True)
class BitMatrix:
    """Immutable Boolean matrix with rows packed into integers."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise DimensionError("negative dimension")
        if len(self.rows) != self.nrows:
            raise DimensionError(f"expected {self.nrows} rows, got {len(self.rows)}")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise DimensionError("row has bits outside the column range")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[int], ncols: int) -> "BitMatrix":
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]], ncols: int | None = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for row in data:
            if len(row) != ncols:
                raise DimensionError("ragged row list")
            rows.append(mask_of(c for c, v in enumerate(row) if v))
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def from_strings(cls, rows: Sequence[str], ncols: int | None = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("bit-strings have unequal length")
        return cls(len(rows), ncols, tuple(str_to_bits(r) for r in rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def ones(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols, ((1 << ncols) - 1,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> "BitMatrix":
        """Build a matrix whose ``c``-th column is the bit vector ``columns[c]``."""
        rows = [0] * nrows
        for c, col in enumerate(columns):
            for r in iter_bits(col):
                if r >= nrows:
                    raise DimensionError("column vector longer than nrows")
                rows[r] |= 1 << c
        return cls(nrows, len(columns), tuple(rows))

    # -- views ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx: tuple[int, int]) -> int:
        r, c = idx
        return (self.rows[r] >> c) & 1

    def column(self, c: int) -> int:
        out = 0
        for r, row in enumerate(self.rows):
            if (row >> c) & 1:
                out |= 1 << r
        return out

    def columns(self) -> list[int]:
        return [self.column(c) for c in range(self.ncols)]

    def to_lists(self) -> list[list[int]]:
        return [[(row >> c) & 1 for c in range(self.ncols)] for row in self.rows]

    def to_strings(self) -> list[str]:
        return [bits_to_str(row, self.ncols) for row in self.rows]

    def __str__(self) -> str:
        return "\n".join(self.to_strings()) if self.nrows else f"<empty {self.nrows}x{self.ncols}>"

    def is_zero(self) -> bool:
        return not any(self.rows)

    def weight(self) -> int:
        return sum(popcount(r) for r in self.rows)

    def row_weights(self) -> list[int]:
        return [popcount(r) for r in self.rows]

    # -- algebra ---------------------------------------------------------------

    def __xor__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return BitMatrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    __add__ = __xor__

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        orows = other.rows
        for row in self.rows:
            acc = 0
            for j in iter_bits(row):
                acc ^= orows[j]
            out.append(acc)
        return BitMatrix(self.nrows, other.ncols, tuple(out))

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.ncols, self.nrows, tuple(self.columns()))

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def select_rows(self, indices: Iterable[int]) -> "BitMatrix":
        rows = tuple(self.rows[i] for i in indices)
        return BitMatrix(len(rows), self.ncols, rows)

    def select_columns(self, indices: Sequence[int]) -> "BitMatrix":
        rows = []
        for row in self.rows:
            rows.append(mask_of(k for k, c in enumerate(indices) if (row >> c) & 1))
        return BitMatrix(self.nrows, len(indices), tuple(rows))

    def stack_rows(self, indices: Iterable[int]) -> int:
        """XOR of the selected rows, as a packed row."""
        acc = 0
        for i in indices:
            acc ^= self.rows[i]
        return acc

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.nrows != other.nrows:
            raise DimensionError("hstack needs equal row counts")
        shift = self.ncols
        return BitMatrix(
            self.nrows,
            self.ncols + other.ncols,
            tuple(a | (b << shift) for a, b in zip(self.rows, other.rows)),
        )

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.ncols:
            raise DimensionError("vstack needs equal column counts")
        return BitMatrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def column_block(self, start: int, stop: int) -> "BitMatrix":
        width = stop - start
        mask = (1 << width) - 1
        return BitMatrix(self.nrows, width, tuple((r >> start) & mask for r in self.rows))


def block(blocks: Sequence[Sequence[BitMatrix]]) -> BitMatrix:
    """Assemble a block matrix from a grid of compatible blocks."""
    out = None
    for brow in blocks:
        line = brow[0]
        for b in brow[1:]:
            line = line.hstack(b)
        out = line if out is None else out.vstack(line)
    return out


class Echelon:
    """Incrementally built echelon basis of a subspace of GF(2)^w.

    Each stored vector is keyed by its lowest set bit, and no two stored
    vectors share that bit.  ``reduce`` returns the canonical representative
    of ``v`` modulo the span: the unique coset element with every pivot bit
    cleared.
    """

    __slots__ = ("_rows", "_order")

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: dict[int, int] = {}
        self._order: list[int] | None = None
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self._rows)

    def _pivots(self) -> list[int]:
        if self._order is None:
            self._order = sorted(self._rows)
        return self._order

    def reduce(self, v: int) -> int:
        rows = self._rows
        for p in self._pivots():
            if (v >> p) & 1:
                v ^= rows[p]
        return v

    def add(self, v: int) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        v = self.reduce(v)
        if not v:
            return False
        self._rows[(v & -v).bit_length() - 1] = v
        self._order = None
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def basis(self) -> list[int]:
        return [self._rows[p] for p in self._pivots()]


@dataclass(frozen=True)
class GF2SolveResult:
    """Solution set of ``A X = B`` as particular solution plus nullspace.

    ``nullspace_basis`` holds length-``n`` column vectors packed as ints
    (bit ``i`` = row ``i`` of ``X``).  Every solution is
    ``particular ^ K @ C`` where ``K`` has the basis vectors as columns and
    ``C`` ranges over all ``dim x m`` matrices.
    """

    consistent: bool
    n: int
    m: int
    rank: int
    particular: BitMatrix | None
    nullspace_basis: tuple[int, ...]
    pivots: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.nullspace_basis)

    def solution_count(self) -> int:
        return (1 << (self.dim * self.m)) if self.consistent else 0

    def kernel_matrix(self) -> BitMatrix:
        return BitMatrix.from_columns(self.nullspace_basis, self.n)

    def combine(self, coeffs: Sequence[int]) -> BitMatrix:
        """Return ``particular ^ K @ C`` where ``coeffs[b]`` is row ``b`` of ``C``."""
        if not self.consistent:
            raise ValueError("inconsistent system has no solutions")
        rows = list(self.particular.rows)
        for vec, c in zip(self.nullspace_basis, coeffs):
            if c:
                for i in iter_bits(vec):
                    rows[i] ^= c
        return BitMatrix(self.n, self.m, tuple(rows))


def _eliminate(rows: Sequence[int], ncols: int) -> dict[int, int]:
    """Echelon-reduce augmented rows, pivoting on the lowest set bit.

    Returns pivot column -> reduced row.  A row whose coefficient part
    vanishes but whose augmented part does not is stored under the key
    ``-1`` to flag inconsistency.
    """
    pivots: dict[int, int] = {}
    coef_mask = (1 << ncols) - 1
    for row in rows:
        while row & coef_mask:
            low = (row & -row).bit_length() - 1
            prow = pivots.get(low)
            if prow is None:
                pivots[low] = row
                break
            row ^= prow
        else:
            if row:
                pivots[-1] = row
    return pivots


def rank(a: BitMatrix) -> int:
    """Rank of ``a`` over GF(2)."""
    return len(_eliminate(a.rows, a.ncols))


def solve(a: BitMatrix, b: BitMatrix) -> GF2SolveResult:
    """Solve ``a @ X = b`` over GF(2) for an ``a.ncols x b.ncols`` matrix ``X``."""
    if a.nrows != b.nrows:
        raise DimensionError(f"A has {a.nrows} rows but B has {b.nrows}")
    n, m = a.ncols, b.ncols
    aug = [ra | (rb << n) for ra, rb in zip(a.rows, b.rows)]
    piv = _eliminate(aug, n)
    consistent = piv.pop(-1, None) is None

    coef_mask = (1 << n) - 1
    order = sorted(piv, reverse=True)
    pivot_set = set(piv)

    particular = None
    if consistent:
        # back substitution, one packed X-column at a time
        xcols = [0] * m
        for p in order:
            row = piv[p]
            rhs = row >> n
            others = row & coef_mask & ~(1 << p)
            for c in range(m):
                bit = ((rhs >> c) & 1) ^ (popcount(others & xcols[c]) & 1)
                if bit:
                    xcols[c] |= 1 << p
        particular = BitMatrix.from_columns(xcols, n) if m else BitMatrix.zeros(n, 0)

    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = 1 << f
        for p in order:
            if popcount(piv[p] & coef_mask & v) & 1:
                v |= 1 << p
        basis.append(v)
    return GF2SolveResult(consistent, n, m, len(piv), particular, tuple(basis), tuple(sorted(piv)))


def is_consistent(a: BitMatrix, b: BitMatrix) -> bool:
    if a.nrows != b.nrows:
        raise DimensionError(f"A has {a.nrows} rows but B has {b.nrows}")
    n = a.ncols
    return -1 not in _eliminate([ra | (rb << n) for ra, rb in zip(a.rows, b.rows)], n)


def nullspace(a: BitMatrix) -> tuple[int, ...]:
    """Canonical basis of ``{x : a @ x = 0}``."""
    return solve(a, BitMatrix.zeros(a.nrows, 0)).nullspace_basis


def left_nullspace(a: BitMatrix) -> tuple[int, ...]:
    """Canonical basis of ``{y : y^T a = 0}`` as length-``a.nrows`` vectors."""
    return nullspace(a.transpose())


def enum_cap() -> int:
    value = os.environ.get("XVCS_ENUM_CAP")
    return int(value) if value else DEFAULT_ENUM_CAP


def enumerate_solutions(r: GF2SolveResult, m: int | None = None, cap: int | None = None) -> Iterator[BitMatrix]:
    """Yield every solution once.

    Order is lexicographic in the coefficient bit-string ``C[0][0] C[0][1]
    ... C[dim-1][m-1]`` read most-significant first.
    """
    if not r.consistent:
        raise ValueError("inconsistent system has no solutions")
    m = r.m if m is None else m
    if m != r.m:
        raise DimensionError(f"result has {r.m} columns, asked for {m}")
    cap = enum_cap() if cap is None else cap
    total_bits = r.dim * m
    if (1 << total_bits) > cap:
        raise EnumerationTooLarge(f"solution set has 2^{total_bits} members (cap {cap})")
    word = (1 << m) - 1
    rev = [int(format(c, f"0{m}b")[::-1], 2) if m else 0 for c in range(1 << m)]
    for idx in range(1 << total_bits):
        coeffs = []
        for b in range(r.dim):
            chunk = (idx >> ((r.dim - 1 - b) * m)) & word
            coeffs.append(rev[chunk])
        yield r.combine(coeffs)


def sample_solution(r: GF2SolveResult, m: int | None = None, seed: int | random.Random | None = None) -> BitMatrix:
    """Draw a uniformly random member of the solution set."""
    if not r.consistent:
        raise ValueError("inconsistent system has no solutions")
    m = r.m if m is None else m
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    coeffs = [rng.getrandbits(m) if m else 0 for _ in range(r.dim)]
    return r.combine(coeffs)


def solve_many(a: BitMatrix, bs: Sequence[BitMatrix]) -> list[GF2SolveResult]:
    """Solve ``a @ X = b`` for several right-hand sides in one elimination."""
    if not bs:
        return []
    widths = [b.ncols for b in bs]
    big = bs[0]
    for b in bs[1:]:
        big = big.hstack(b)
    joint = solve(a, big)
    if not joint.consistent:
        return [solve(a, b) for b in bs]
    out = []
    start = 0
    for w in widths:
        part = joint.particular.column_block(start, start + w)
        out.append(GF2SolveResult(True, joint.n, w, joint.rank, part, joint.nullspace_basis, joint.pivots))
        start += w
    return out
