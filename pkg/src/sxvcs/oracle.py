"""Brute-force reference checks on explicit matrix collections.

Everything here works by enumerating share matrices and quantifying
literally over members, qualified sets and *all* forbidden sets.  It is
slow on purpose and exists to validate the linear-algebra shortcuts in
:mod:`sxvcs.scheme`.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .access import AccessStructure, forbidden_family, format_set
from .gf2 import BitMatrix, enumerate_solutions, iter_bits, popcount
from .scheme import LinearScheme, PixelDistribution, SchemeKind

MAX_COLLECTION = 4096
MAX_N = 8
MAX_M = 4


class OracleTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def solution_sets(s: LinearScheme) -> tuple[list[BitMatrix], list[BitMatrix]]:
    """All share matrices of each colour (multiset union over the systems)."""
    total = sum(r.solution_count() for r in s.solve0 + s.solve1)
    if total > 2 * MAX_COLLECTION:
        raise OracleTooLarge(f"{total} matrices exceed the oracle cap")
    c0 = [x for r in s.solve0 for x in enumerate_solutions(r)]
    c1 = [x for r in s.solve1 for x in enumerate_solutions(r)]
    return c0, c1


def _check_sizes(c0: Sequence[BitMatrix], c1: Sequence[BitMatrix], s: AccessStructure) -> None:
    if not c0 or not c1:
        raise ValueError("collections must be nonempty")
    if len(c0) > MAX_COLLECTION or len(c1) > MAX_COLLECTION:
        raise OracleTooLarge(f"collections of {len(c0)} and {len(c1)} exceed {MAX_COLLECTION}")
    if s.n > MAX_N:
        raise OracleTooLarge(f"n={s.n} exceeds {MAX_N}")
    shape = c0[0].shape
    if shape[1] > MAX_M:
        raise OracleTooLarge(f"m={shape[1]} exceeds {MAX_M}")
    if shape[0] != s.n or any(x.shape != shape for x in list(c0) + list(c1)):
        raise ValueError("all matrices must be n x m with one common m")


def _stack(x: BitMatrix, q: int) -> int:
    acc = 0
    for i in iter_bits(q):
        acc ^= x.rows[i]
    return acc


def _stack_weights(c: Sequence[BitMatrix], q: int) -> list[int]:
    return [popcount(_stack(x, q)) for x in c]


def contrast_ok(c0, c1, s: AccessStructure) -> Verdict:
    for q in s.qualified_sets:
        w0, w1 = _stack_weights(c0, q), _stack_weights(c1, q)
        if max(w0) >= min(w1):
            return Verdict(False, f"contrast fails at Q={format_set(q)}")
    return Verdict(True)


def average_contrast_ok(c0, c1, s: AccessStructure) -> Verdict:
    for q in s.qualified_sets:
        w0, w1 = _stack_weights(c0, q), _stack_weights(c1, q)
        if Fraction(sum(w0), len(c0)) >= Fraction(sum(w1), len(c1)):
            return Verdict(False, f"average contrast fails at Q={format_set(q)}")
    return Verdict(True)


def security_ok(c0, c1, s: AccessStructure) -> Verdict:
    """Frequency equality of restrictions to every forbidden set, after size normalization."""
    fam = forbidden_family(s)
    for f in sorted(fam.all_forbidden()):
        rows = list(iter_bits(f))
        r0 = Counter(tuple(x.rows[i] for i in rows) for x in c0)
        r1 = Counter(tuple(x.rows[i] for i in rows) for x in c1)
        if any(r0[key] * len(c1) != r1[key] * len(c0) for key in r0.keys() | r1.keys()):
            return Verdict(False, f"security fails at F={format_set(f)}")
    return Verdict(True)


def _static(c, s: AccessStructure) -> bool:
    return all(len({_stack(x, q) for x in c}) == 1 for q in s.qualified_sets)


def is_xvcs(c0, c1, s: AccessStructure) -> Verdict:
    _check_sizes(c0, c1, s)
    v = contrast_ok(c0, c1, s)
    return v if not v else security_ok(c0, c1, s)


def is_sxvcs(c0, c1, s: AccessStructure) -> Verdict:
    v = is_xvcs(c0, c1, s)
    if not v:
        return v
    if not (_static(c0, s) and _static(c1, s)):
        return Verdict(False, "a stack varies with the chosen matrix")
    return Verdict(True)


def is_semi(c0, c1, s: AccessStructure) -> Verdict:
    """Scheme static on at least one colour (reason names which)."""
    v = is_xvcs(c0, c1, s)
    if not v:
        return v
    white, black = _static(c0, s), _static(c1, s)
    if white and black:
        return Verdict(True, "both")
    if white:
        return Verdict(True, "white")
    if black:
        return Verdict(True, "black")
    return Verdict(False, "neither colour has fixed stacks")


def is_pxvcs(c0, c1, s: AccessStructure) -> Verdict:
    _check_sizes(c0, c1, s)
    v = average_contrast_ok(c0, c1, s)
    return v if not v else security_ok(c0, c1, s)


def is_pw(c0, c1, s: AccessStructure) -> Verdict:
    v = is_xvcs(c0, c1, s)
    if not v:
        return v
    if any(_stack(x, q) for x in c0 for q in s.qualified_sets):
        return Verdict(False, "a white stack is not blank")
    return Verdict(True)


def classify_collections(c0, c1, s: AccessStructure) -> tuple[SchemeKind, bool]:
    """Class and perfect-white flag, decided from the definitions alone."""
    if not is_xvcs(c0, c1, s):
        return SchemeKind.NOT_A_SCHEME, False
    white, black = _static(c0, s), _static(c1, s)
    if white and black:
        kind = SchemeKind.SXVCS
    elif white:
        kind = SchemeKind.SEMI_WHITE
    elif black:
        kind = SchemeKind.SEMI_BLACK
    else:
        kind = SchemeKind.GENERAL
    pw = white and not any(_stack(x, q) for x in c0 for q in s.qualified_sets)
    return kind, pw


def classify_scheme(s: LinearScheme) -> tuple[SchemeKind, bool]:
    c0, c1 = solution_sets(s)
    return classify_collections(c0, c1, s.structure)


def restricted_equal(s: LinearScheme, f: int) -> bool:
    """Literal test: do the white and black multisets agree on the rows in ``f``?"""
    c0, c1 = solution_sets(s)
    rows = list(iter_bits(f))
    r0 = Counter(tuple(x.rows[i] for i in rows) for x in c0)
    r1 = Counter(tuple(x.rows[i] for i in rows) for x in c1)
    return all(r0[key] * len(c1) == r1[key] * len(c0) for key in r0.keys() | r1.keys())


def restrictions_meet(s: LinearScheme, f: int) -> bool:
    """Literal test: is some white matrix equal on ``f`` to some black matrix?"""
    c0, c1 = solution_sets(s)
    rows = list(iter_bits(f))
    left = {tuple(x.rows[i] for i in rows) for x in c0}
    return any(tuple(x.rows[i] for i in rows) in left for x in c1)


def best_point_mass(n: int) -> tuple[Fraction, list[int]]:
    """Maximize the average pair contrast over point masses on ``GF(2)^n``.

    The objective is linear in the distribution, so its maximum over the
    probability simplex sits at a vertex, i.e. a single column vector.
    Returns the best value and every maximizing vector.
    """
    if n < 2 or n > 16:
        raise OracleTooLarge("point-mass search needs 2 <= n <= 16")
    pairs = comb(n, 2)
    best, arg = Fraction(-1), []
    for v in range(1 << n):
        w = popcount(v)
        val = Fraction(w * (n - w), pairs)
        if val > best:
            best, arg = val, [v]
        elif val == best:
            arg.append(v)
    return best, arg


def balanced_distribution(n: int, weight: int) -> PixelDistribution:
    """Uniform distribution over all columns of a given weight (equal marginals)."""
    vecs = [sum(1 << i for i in c) for c in itertools.combinations(range(n), weight)]
    return PixelDistribution.uniform(n, vecs)


def _exact_solve(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan over the rationals for a square system; None if singular."""
    n = len(a)
    rows = [list(r) + [v] for r, v in zip(a, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if p is None:
            return None
        rows[c], rows[p] = rows[p], rows[c]
        piv = rows[c][c]
        rows[c] = [v / piv for v in rows[c]]
        for r in range(n):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return [rows[r][n] for r in range(n)]


def best_equal_marginal(n: int, tol: float = 1e-9) -> tuple[Fraction, PixelDistribution]:
    """Maximize the average pair contrast over distributions whose shares all
    have the same marginal (so no single share reveals the pixel).

    The feasible set is the polytope ``{P >= 0, sum P = 1, P(bit i) = P(bit 0)}``
    with ``n`` equality rows, so every vertex is a basic feasible solution on
    ``n`` support vectors.  All ``C(2^n, n)`` bases are solved in one batched
    floating-point pass; bases within ``tol`` of the best are then re-solved
    exactly and the exact maximum is returned with its distribution.
    """
    if n < 2 or n > 5:
        raise OracleTooLarge("vertex enumeration needs 2 <= n <= 5")
    vecs = np.arange(1 << n)
    bits = (vecs[None, :] >> np.arange(n)[:, None]) & 1
    a = np.vstack([np.ones(1 << n), bits[1:] - bits[0]]).astype(float)
    b = np.zeros(n)
    b[0] = 1.0
    weight = bits.sum(axis=0)
    gain = weight * (n - weight) / comb(n, 2)
    bases = np.array(list(itertools.combinations(range(1 << n), n)))
    mats = a[:, bases].transpose(1, 0, 2)
    ok = np.abs(np.linalg.det(mats)) > tol
    bases, mats = bases[ok], mats[ok]
    x = np.linalg.solve(mats, np.broadcast_to(b, (len(mats), n))[..., None])[..., 0]
    feasible = (x >= -tol).all(axis=1)
    values = np.where(feasible, (x * gain[bases]).sum(axis=1), -np.inf)
    top = values.max()
    best: tuple[Fraction, PixelDistribution] | None = None
    exact_a = [[Fraction(int(v)) for v in row] for row in a]
    seen = set()
    for idx in np.flatnonzero(values >= top - tol):
        # degenerate bases repeat a vertex; one exact solve per support suffices
        key = frozenset(int(c) for c, v in zip(bases[idx], x[idx]) if v > tol)
        if key in seen:
            continue
        seen.add(key)
        cols = [int(c) for c in bases[idx]]
        sol = _exact_solve([[exact_a[r][c] for c in cols] for r in range(n)], [Fraction(int(v)) for v in b])
        if sol is None or any(p < 0 for p in sol):
            continue
        support = tuple((c, p) for c, p in zip(cols, sol) if p)
        dist = PixelDistribution(n, support)
        val = dist.pair_contrast()
        if best is None or val > best[0]:
            best = (val, dist)
    assert best is not None
    return best
