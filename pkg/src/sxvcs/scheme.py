"""XOR visual cryptography schemes in linear-system form.

A scheme is ``2k`` systems ``G X = B0_j`` and ``G X = B1_j`` over GF(2)
sharing one coefficient matrix ``G`` (the qualified matrix).  White pixels
draw their share matrix from the union of the ``B0_j`` solution sets,
black pixels from the ``B1_j`` ones.  All systems share one nullspace, so
every solution set is a coset of the same subspace; the checks below work
on particular solutions and that nullspace and never enumerate cosets.
"""

from __future__ import annotations

import enum
import itertools
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .access import (
    AccessStructure,
    ForbiddenFamily,
    QualifiedMatrix,
    build_T_F,
    forbidden_family,
    format_set,
    qualified_matrix,
    to_mask,
    to_set,
)
from .gf2 import (
    BitMatrix,
    Echelon,
    GF2SolveResult,
    block,
    enumerate_solutions,
    is_consistent,
    iter_bits,
    popcount,
    solve,
    solve_many,
)

WITNESS_SEARCH_LIMIT = 12
LISTING_LIMIT = 16


class InconsistentSystem(ValueError):
    pass


class StackUndetermined(ValueError):
    pass


class SchemeError(ValueError):
    """Operation not applicable to a scheme of this class."""


class SchemeKind(str, enum.Enum):
    SXVCS = "SXVCS"
    SEMI_WHITE = "SemiSXVCS_White"
    SEMI_BLACK = "SemiSXVCS_Black"
    GENERAL = "General_XVCS"
    NOT_A_SCHEME = "NotAScheme"


def _subset_mask(q, n: int) -> int:
    return q if isinstance(q, int) else to_mask(q, n)


@dataclass(frozen=True)
class LinearScheme:
    """An XVCS given by its qualified matrix and right-hand sides.

    ``structure`` supplies the participant count, the forbidden family and
    the qualified sets over which contrast is measured; ``qualified`` is
    the coefficient matrix of the systems, usually the structure's own
    qualified matrix.
    """

    structure: AccessStructure
    qualified: QualifiedMatrix
    b0_list: tuple[BitMatrix, ...]
    b1_list: tuple[BitMatrix, ...]
    solve0: tuple[GF2SolveResult, ...]
    solve1: tuple[GF2SolveResult, ...]

    @classmethod
    def build(
        cls,
        structure: AccessStructure,
        b0_list: Sequence[BitMatrix] | BitMatrix,
        b1_list: Sequence[BitMatrix] | BitMatrix,
        qualified: QualifiedMatrix | None = None,
    ) -> "LinearScheme":
        if isinstance(b0_list, BitMatrix):
            b0_list = [b0_list]
        if isinstance(b1_list, BitMatrix):
            b1_list = [b1_list]
        b0_list, b1_list = tuple(b0_list), tuple(b1_list)
        if qualified is None:
            qualified = qualified_matrix(structure)
        if qualified.n != structure.n:
            raise ValueError("qualified matrix width differs from participant count")
        if not b0_list or len(b0_list) != len(b1_list):
            raise ValueError("need the same positive number of white and black systems")
        m = b0_list[0].ncols
        for b in b0_list + b1_list:
            if b.shape != (qualified.t, m):
                raise ValueError(f"right-hand side has shape {b.shape}, expected {(qualified.t, m)}")
        results = solve_many(qualified.matrix, b0_list + b1_list)
        for idx, r in enumerate(results):
            if not r.consistent:
                color, j = divmod(idx, len(b0_list))
                raise InconsistentSystem(f"system B{color}{j + 1} is inconsistent")
        k = len(b0_list)
        return cls(structure, qualified, b0_list, b1_list, tuple(results[:k]), tuple(results[k:]))

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def t(self) -> int:
        return self.qualified.t

    @property
    def m(self) -> int:
        return self.b0_list[0].ncols

    @property
    def k(self) -> int:
        return len(self.b0_list)

    @property
    def nullspace_basis(self) -> tuple[int, ...]:
        return self.solve0[0].nullspace_basis

    @cached_property
    def _signatures(self) -> tuple[int, ...]:
        # bit b of signature i = component i of nullspace vector b
        sig = [0] * self.n
        for b, vec in enumerate(self.nullspace_basis):
            for i in iter_bits(vec):
                sig[i] |= 1 << b
        return tuple(sig)

    @cached_property
    def _particular_columns(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        return tuple(tuple(tuple(r.particular.columns()) for r in res) for res in (self.solve0, self.solve1))

    def determines(self, q) -> bool:
        """True iff the XOR stack of ``q`` is constant on every solution set."""
        acc = 0
        sig = self._signatures
        for i in iter_bits(_subset_mask(q, self.n)):
            acc ^= sig[i]
        return acc == 0

    def particulars(self, color: int) -> tuple[BitMatrix, ...]:
        return tuple(r.particular for r in (self.solve0 if color == 0 else self.solve1))

    def is_pw(self) -> bool:
        return all(b.is_zero() for b in self.b0_list)


# -- stacks -----------------------------------------------------------------


def row_space_coefficients(qualified: QualifiedMatrix, q) -> int | None:
    """Return ``y`` (bit ``s`` = row ``s``) with ``y^T G = indicator(q)``, or None."""
    target = _subset_mask(q, qualified.n)
    col = BitMatrix(qualified.n, 1, tuple((target >> i) & 1 for i in range(qualified.n)))
    r = solve(qualified.matrix.transpose(), col)
    if not r.consistent:
        return None
    return r.particular.column(0)


def stack_result(s: LinearScheme, q) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Reconstructed subpixel rows ``(E0_j, E1_j)`` of the qualified set ``q``.

    Each entry is a packed row of length ``m``; for ``k > 1`` the tuples
    hold one stack per system.  Raises :class:`StackUndetermined` when the
    indicator of ``q`` is outside the row space of the qualified matrix.
    """
    y = row_space_coefficients(s.qualified, q)
    if y is None:
        raise StackUndetermined(f"stack of {format_set(_subset_mask(q, s.n))} is not determined by the systems")
    rows = list(iter_bits(y))
    e0 = tuple(b.stack_rows(rows) for b in s.b0_list)
    e1 = tuple(b.stack_rows(rows) for b in s.b1_list)
    return e0, e1


@dataclass(frozen=True)
class StackTable:
    """Stacks of every contrast set in every system.

    ``e0[j, q]`` / ``e1[j, q]`` are packed rows (``uint64`` when ``m <= 64``,
    Python ints otherwise) and ``w0`` / ``w1`` their weights;
    ``determined[q]`` is False when the set's stack varies inside a
    solution set.
    """

    sets: tuple[int, ...]
    determined: np.ndarray
    e0: np.ndarray
    e1: np.ndarray
    w0: np.ndarray
    w1: np.ndarray


def _words(masks: Sequence[int], n: int) -> np.ndarray:
    """Pack bitmasks into an ``(len, words)`` array of little-endian ``uint64``."""
    nw = max(1, (n + 63) // 64)
    blob = b"".join(map(int.to_bytes, masks, itertools.repeat(8 * nw), itertools.repeat("little")))
    return np.frombuffer(blob, dtype="<u8").reshape(len(masks), nw)


def _parities(set_words: np.ndarray, vectors: Sequence[int], n: int) -> np.ndarray:
    """``out[q, c]`` = parity of ``|set_q & vectors[c]|``."""
    out = np.zeros((set_words.shape[0], len(vectors)), dtype=bool)
    for c, vw in enumerate(_words(vectors, n)):
        acc = set_words[:, 0] & vw[0]
        for w in range(1, len(vw)):
            acc ^= set_words[:, w] & vw[w]
        out[:, c] = np.bitwise_count(acc) & 1
    return out


def _pack(bits: np.ndarray) -> np.ndarray:
    m = bits.shape[1]
    if m <= 64:
        packed = np.zeros(len(bits), dtype=np.uint64)
        for c in range(m):
            packed |= bits[:, c].astype(np.uint64) << np.uint64(c)
        return packed
    out = np.zeros(len(bits), dtype=object)
    for c in range(m):
        out += bits[:, c].astype(object) * (1 << c)
    return out


def stack_table(s: LinearScheme, sets: Iterable[int] | None = None) -> StackTable:
    sets = tuple(s.structure.qualified_sets if sets is None else sets)
    words = _words(sets, s.n)
    determined = ~_parities(words, s.nullspace_basis, s.n).any(axis=1)
    stacks = {}
    for color in (0, 1):
        bits = [_parities(words, cols, s.n) for cols in s._particular_columns[color]]
        stacks[color] = (
            np.stack([_pack(b) for b in bits]),
            np.stack([b.sum(axis=1, dtype=np.int64) for b in bits]),
        )
    return StackTable(sets, determined, stacks[0][0], stacks[1][0], stacks[0][1], stacks[1][1])


# -- contrast -----------------------------------------------------------------


@dataclass(frozen=True)
class ContrastFailure:
    q: int
    white_system: int | None
    black_system: int | None
    reason: str

    def __str__(self) -> str:
        if self.reason == "undetermined":
            return f"contrast fails at Q={format_set(self.q)}: stack not determined by the systems"
        return (
            f"contrast fails at Q={format_set(self.q)}: "
            f"white system {self.white_system} is not lighter than black system {self.black_system}"
        )


@dataclass(frozen=True)
class ContrastReport:
    """Per-set contrast of a scheme, in exact rationals.

    ``alpha[q]`` is the mean black-stack weight minus the mean white-stack
    weight over the systems, divided by ``m``.  A set whose stack is not
    determined contributes 0 (both colours then stack uniformly).  The
    values are held as integer numerators over the common ``denominator``.
    """

    passed: bool
    m: int
    sets: tuple[int, ...]
    numerators: tuple[int, ...]
    denominator: int
    e0: tuple[int, ...] | None
    e1: tuple[int, ...] | None
    failure: ContrastFailure | None

    @cached_property
    def alpha(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.denominator) for a in self.numerators)

    @property
    def average(self) -> Fraction:
        if not self.sets:
            return Fraction(0)
        return Fraction(sum(self.numerators), self.denominator * len(self.sets))

    @property
    def minimum(self) -> Fraction:
        return Fraction(min(self.numerators, default=0), self.denominator)

    @property
    def pxvcs_passed(self) -> bool:
        """Averaged (probabilistic) contrast condition."""
        return all(a > 0 for a in self.numerators)

    def alpha_of(self, q) -> Fraction:
        return self.alpha[self.sets.index(q if isinstance(q, int) else to_mask(q))]

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "m": self.m,
            "per_set": [{"Q": list(to_set(q)), "alpha": str(a)} for q, a in zip(self.sets, self.alpha)],
            "average": str(self.average),
            "minimum": str(self.minimum),
            "failure": None if self.failure is None else str(self.failure),
        }


def check_contrast(s: LinearScheme, table: StackTable | None = None) -> ContrastReport:
    table = stack_table(s) if table is None else table
    m, k = s.m, s.k
    numer = (table.w1.sum(axis=0) - table.w0.sum(axis=0)) * table.determined
    bad_weight = (table.w0.max(axis=0, initial=0) >= table.w1.min(axis=0, initial=m + 1)) & table.determined
    bad = np.flatnonzero(bad_weight | ~table.determined)
    failure = None
    if bad.size:
        idx = int(bad[0])
        q = table.sets[idx]
        if not table.determined[idx]:
            failure = ContrastFailure(q, None, None, "undetermined")
        else:
            i = int(np.argmax(table.w0[:, idx]))
            j = int(np.argmin(table.w1[:, idx]))
            failure = ContrastFailure(q, i + 1, j + 1, "weight")
    static = k == 1 and bool(table.determined.all())
    return ContrastReport(
        passed=failure is None,
        m=m,
        sets=table.sets,
        numerators=tuple(numer.tolist()),
        denominator=k * m,
        e0=tuple(table.e0[0].tolist()) if static else None,
        e1=tuple(table.e1[0].tolist()) if static else None,
        failure=failure,
    )


# -- security -------------------------------------------------------------------


@dataclass(frozen=True)
class SecurityReport:
    passed: bool
    method: str
    failing_set: int | None = None
    witness: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        return "security holds" if self.passed else self.detail


def _coset_signature(s: LinearScheme, f: int) -> tuple[Counter, Counter]:
    ech = Echelon(v & f for v in s.nullspace_basis)

    def reps(columns):
        out = Counter()
        for cols in columns:
            out[tuple(ech.reduce(col & f) for col in cols)] += 1
        return out

    return reps(s._particular_columns[0]), reps(s._particular_columns[1])


def _secure_on_coset(s: LinearScheme, f: int) -> bool:
    a, b = _coset_signature(s, f)
    return a == b


def _secure_on_block(s: LinearScheme, f: int) -> bool:
    if s.k != 1:
        raise SchemeError("the block security system applies to single-system schemes")
    g = s.qualified.matrix
    t, n, m = s.t, s.n, s.m
    tf = build_T_F(f, n)
    zero = BitMatrix.zeros(t, n)
    a = block([[g, zero], [zero, g], [tf, tf]])
    b = s.b0_list[0].vstack(s.b1_list[0]).vstack(BitMatrix.zeros(tf.nrows, m))
    return is_consistent(a, b)


def _secure_on_pw(s: LinearScheme, f: int) -> bool:
    tf = build_T_F(f, s.n)
    a = s.qualified.matrix.vstack(tf)
    b = s.b1_list[0].vstack(BitMatrix.zeros(tf.nrows, s.m))
    return is_consistent(a, b)


def _restricted_listing(s: LinearScheme, f: int) -> str | None:
    total = sum(r.solution_count() for r in s.solve0)
    if total > LISTING_LIMIT:
        return None
    rows = list(iter_bits(f))

    def listing(results):
        items = []
        for r in results:
            for x in enumerate_solutions(r):
                items.append("/".join(x.select_rows(rows).to_strings()))
        return "{" + ",".join(items) + "}"

    return f"S0[F]={listing(s.solve0)} != S1[F]={listing(s.solve1)}"


def _find_witness(f: int, test) -> int:
    members = list(iter_bits(f))
    if len(members) > WITNESS_SEARCH_LIMIT:
        return f
    for size in range(1, len(members) + 1):
        for combo in itertools.combinations(members, size):
            sub = sum(1 << i for i in combo)
            if not test(sub):
                return sub
    return f


def _run_security(s: LinearScheme, fam: ForbiddenFamily, test, method: str) -> SecurityReport:
    for f in fam.maximal_forbidden:
        if f == 0 or test(f):
            continue
        witness = _find_witness(f, test)
        detail = f"security fails at F={format_set(witness)}"
        if witness != f:
            detail += f" (inside maximal forbidden set {format_set(f)})"
        listing = _restricted_listing(s, witness)
        if listing:
            detail += ": " + listing
        return SecurityReport(False, method, f, witness, detail)
    return SecurityReport(True, method)


def check_security(s: LinearScheme, fam: ForbiddenFamily | None = None, method: str | None = None) -> SecurityReport:
    """Check that forbidden sets learn nothing.

    ``method`` is ``"block"`` (consistency of the doubled block system,
    single-system schemes only) or ``"coset"`` (multiset equality of
    canonical coset representatives).  The default is ``"block"`` for
    ``k == 1`` and ``"coset"`` otherwise.  Only maximal forbidden sets are
    tested; equality of restrictions passes down to subsets.
    """
    fam = forbidden_family(s.structure) if fam is None else fam
    if method is None:
        method = "block" if s.k == 1 else "coset"
    if method == "block":
        test = lambda f: _secure_on_block(s, f)  # noqa: E731
    elif method == "coset":
        test = lambda f: _secure_on_coset(s, f)  # noqa: E731
    else:
        raise ValueError(f"unknown security method {method!r}")
    return _run_security(s, fam, test, method)


def check_security_pw(s: LinearScheme, fam: ForbiddenFamily | None = None) -> SecurityReport:
    """Security test for perfect-white single-system schemes via ``[G; T_F] X = [B1; 0]``."""
    if s.k != 1 or not s.b0_list[0].is_zero():
        raise SchemeError("check_security_pw needs k == 1 and B0 == 0")
    fam = forbidden_family(s.structure) if fam is None else fam
    return _run_security(s, fam, lambda f: _secure_on_pw(s, f), "pw")


# -- classification ---------------------------------------------------------------


@dataclass(frozen=True)
class SchemeClass:
    kind: SchemeKind
    perfect_white: bool
    contrast: ContrastReport
    security: SecurityReport

    @property
    def name(self) -> str:
        return self.kind.value + ("+PW" if self.perfect_white else "")

    @property
    def is_scheme(self) -> bool:
        return self.kind is not SchemeKind.NOT_A_SCHEME

    @property
    def is_sxvcs(self) -> bool:
        return self.kind is SchemeKind.SXVCS

    @property
    def is_semi_white(self) -> bool:
        return self.kind in (SchemeKind.SXVCS, SchemeKind.SEMI_WHITE)

    @property
    def is_semi_black(self) -> bool:
        return self.kind in (SchemeKind.SXVCS, SchemeKind.SEMI_BLACK)

    @property
    def diagnostics(self) -> list[str]:
        out = []
        if self.contrast.failure is not None:
            out.append(str(self.contrast.failure))
        if not self.security.passed:
            out.append(self.security.detail)
        return out

    def __str__(self) -> str:
        return self.name


def _static(stacks: np.ndarray, determined: np.ndarray) -> bool:
    if not determined.all():
        return False
    return bool((stacks == stacks[:1]).all())


def classify(
    s: LinearScheme,
    fam: ForbiddenFamily | None = None,
    security_method: str = "coset",
    table: StackTable | None = None,
) -> SchemeClass:
    """Classify ``s`` as SXVCS / SemiSXVCS / general XVCS or not a scheme."""
    table = stack_table(s) if table is None else table
    contrast = check_contrast(s, table)
    security = check_security(s, fam, method=security_method)
    if not (contrast.passed and security.passed):
        return SchemeClass(SchemeKind.NOT_A_SCHEME, False, contrast, security)
    white = _static(table.e0, table.determined)
    black = _static(table.e1, table.determined)
    if white and black:
        kind = SchemeKind.SXVCS
    elif white:
        kind = SchemeKind.SEMI_WHITE
    elif black:
        kind = SchemeKind.SEMI_BLACK
    else:
        kind = SchemeKind.GENERAL
    pw = white and not table.e0[0].any()
    return SchemeClass(kind, pw, contrast, security)


# -- transformations ------------------------------------------------------------------


def insert(
    c0: Sequence[BitMatrix],
    c1: Sequence[BitMatrix],
    structure: AccessStructure,
    qualified: QualifiedMatrix | None = None,
) -> LinearScheme:
    """Embed explicit basis-matrix collections into linear-system form.

    The collections are first replicated to a common size
    (``|C1|`` copies of ``C0`` and ``|C0|`` copies of ``C1``), then every
    matrix ``X`` contributes the system ``G X = G @ X``.
    """
    if not c0 or not c1:
        raise ValueError("collections must be nonempty")
    shape = c0[0].shape
    if any(x.shape != shape for x in list(c0) + list(c1)):
        raise ValueError("all basis matrices must share one shape")
    if shape[0] != structure.n:
        raise ValueError(f"basis matrices have {shape[0]} rows, structure has {structure.n} participants")
    qualified = qualified_matrix(structure) if qualified is None else qualified
    g = qualified.matrix
    c0s = list(c0) * len(c1)
    c1s = list(c1) * len(c0)
    return LinearScheme.build(structure, [g @ x for x in c0s], [g @ x for x in c1s], qualified)


def _require(s: LinearScheme, kinds, fam, what: str) -> SchemeClass:
    cls = classify(s, fam)
    if cls.kind not in kinds:
        raise SchemeError(f"{what} needs a scheme of class {'/'.join(k.value for k in kinds)}, got {cls.name}")
    return cls


def to_perfect_white(s: LinearScheme, fam: ForbiddenFamily | None = None) -> LinearScheme:
    """Return the SXVCS with ``B0' = 0`` and ``B1' = B0 ^ B1``."""
    _require(s, (SchemeKind.SXVCS,), fam, "to_perfect_white")
    b0, b1 = s.b0_list[0], s.b1_list[0]
    return LinearScheme.build(s.structure, [BitMatrix.zeros(s.t, s.m)], [b0 ^ b1], s.qualified)


def decompose_semi(s: LinearScheme, fam: ForbiddenFamily | None = None) -> list[LinearScheme]:
    """Split a SemiSXVCS into ``k`` single-system SXVCSs (pairing system ``j`` with ``j``)."""
    _require(s, (SchemeKind.SXVCS, SchemeKind.SEMI_WHITE, SchemeKind.SEMI_BLACK), fam, "decompose_semi")
    if s.k == 1:
        return [s]
    return [
        LinearScheme(s.structure, s.qualified, (b0,), (b1,), (r0,), (r1,))
        for b0, b1, r0, r1 in zip(s.b0_list, s.b1_list, s.solve0, s.solve1)
    ]


def best_member(parts: Sequence[LinearScheme]) -> LinearScheme:
    """Member with the largest average contrast (first one on ties)."""
    return max(parts, key=lambda p: check_contrast(p).average)


def to_pxvcs(s: LinearScheme, fam: ForbiddenFamily | None = None) -> LinearScheme:
    """Split an SXVCS column-wise into ``m`` single-column systems."""
    _require(s, (SchemeKind.SXVCS,), fam, "to_pxvcs")
    if s.m == 1:
        return s
    b0, b1 = s.b0_list[0], s.b1_list[0]
    cols0 = [b0.column_block(c, c + 1) for c in range(s.m)]
    cols1 = [b1.column_block(c, c + 1) for c in range(s.m)]
    return LinearScheme.build(s.structure, cols0, cols1, s.qualified)


def pxvcs_contrast_bound(n: int) -> Fraction:
    """Largest average pair contrast of a perfect-white (2, n) scheme."""
    if n < 2:
        raise ValueError("need n >= 2")
    return Fraction((n // 2) * ((n + 1) // 2), comb(n, 2))


@dataclass(frozen=True)
class PixelDistribution:
    """Distribution of an ``n``-bit share column (bit ``i`` = participant ``i+1``)."""

    n: int
    support: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        vecs = [v for v, _ in self.support]
        if len(set(vecs)) != len(vecs):
            raise ValueError("support vectors must be distinct")
        if any(p < 0 for _, p in self.support):
            raise ValueError("negative probability")
        if sum((p for _, p in self.support), Fraction(0)) != 1:
            raise ValueError("probabilities must sum to 1")
        if any(v >> self.n for v in vecs):
            raise ValueError("support vector longer than n")

    @classmethod
    def uniform(cls, n: int, vectors: Iterable[int]) -> "PixelDistribution":
        vecs = sorted(set(vectors))
        p = Fraction(1, len(vecs))
        return cls(n, tuple((v, p) for v in vecs))

    def marginals(self) -> tuple[Fraction, ...]:
        """``P(bit i = 1)`` per participant."""
        return tuple(sum((p for v, p in self.support if (v >> i) & 1), Fraction(0)) for i in range(self.n))

    def pair_contrast(self) -> Fraction:
        """Average over all pairs of ``P(xi_i != xi_j)``, the black-pixel contrast
        of a perfect-white (2, n) scheme with pixel expansion 1."""
        total = sum((p * popcount(v) * (self.n - popcount(v)) for v, p in self.support), Fraction(0))
        return total / comb(self.n, 2)


# -- serialization ----------------------------------------------------------------------


def scheme_to_dict(s: LinearScheme, cls: SchemeClass | None = None) -> dict:
    cls = classify(s) if cls is None else cls
    out = {
        "n": s.n,
        "m": s.m,
        "k": s.k,
        "qualified_rows": s.qualified.matrix.to_strings(),
        "minimal_qualified": [list(q) for q in s.structure.minimal_sets()],
    }
    if s.structure.declared_qualified is not None:
        out["declared_qualified"] = [list(to_set(q)) for q in s.structure.declared_qualified]
    out["b0"] = [b.to_strings() for b in s.b0_list]
    out["b1"] = [b.to_strings() for b in s.b1_list]
    out["class"] = cls.name
    return out


def scheme_to_json(s: LinearScheme, cls: SchemeClass | None = None) -> str:
    return json.dumps(scheme_to_dict(s, cls), indent=2) + "\n"


def scheme_from_dict(data: dict) -> LinearScheme:
    try:
        n = int(data["n"])
        m = int(data["m"])
        k = int(data["k"])
        rows = data["qualified_rows"]
        minimal = data["minimal_qualified"]
        b0 = data["b0"]
        b1 = data["b1"]
    except KeyError as exc:
        raise ValueError(f"scheme JSON lacks field {exc.args[0]!r}") from None
    structure = AccessStructure.from_sets(n, minimal, data.get("declared_qualified"))
    g = BitMatrix.from_strings(rows, n)
    qualified = QualifiedMatrix(g, g.rows)
    if len(b0) != k or len(b1) != k:
        raise ValueError(f"k={k} but found {len(b0)} white and {len(b1)} black systems")
    t = len(rows)
    mats0 = [BitMatrix.from_strings(b, m) if b else BitMatrix.zeros(0, m) for b in b0]
    mats1 = [BitMatrix.from_strings(b, m) if b else BitMatrix.zeros(0, m) for b in b1]
    for b in mats0 + mats1:
        if b.nrows != t:
            raise ValueError(f"right-hand side has {b.nrows} rows, expected {t}")
    return LinearScheme.build(structure, mats0, mats1, qualified)


def scheme_from_json(text: str) -> LinearScheme:
    return scheme_from_dict(json.loads(text))


def describe_security_sets(s: LinearScheme, f) -> tuple[list[str], list[str]]:
    """Restrictions of the white and black solution multisets to ``f`` (small schemes)."""
    f = _subset_mask(f, s.n)
    rows = list(iter_bits(f))
    out = []
    for results in (s.solve0, s.solve1):
        items = []
        for r in results:
            for x in enumerate_solutions(r):
                items.append("/".join(x.select_rows(rows).to_strings()))
        out.append(items)
    return out[0], out[1]
