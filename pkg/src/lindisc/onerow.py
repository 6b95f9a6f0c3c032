"""Linear discrepancy and bounded rounding for single-row matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import InputError, Matrix, RefusalError, as_weight, env_cap, integer_scaled

DEFAULT_ENUM_CAP = 20


@dataclass(frozen=True)
class GapProfile:
    sums: tuple  # sorted subset sums, length 2^n
    max_gap: Fraction
    witness_pair: int  # index i such that sums[i+1] - sums[i] == max_gap; -1 when n == 0


def _row(A: Matrix | Sequence) -> tuple:
    if isinstance(A, Matrix):
        if A.m != 1:
            raise InputError(f"expected a single-row matrix, got {A.m} rows")
        return A.rows[0]
    return tuple(Fraction(a) for a in A)


def gap_fold(magnitudes: Sequence[Fraction]) -> list[Fraction]:
    """Largest subset-sum gap of every prefix of a decreasing magnitude list.

    Entry k is the largest gap for the first k+1 magnitudes.
    """
    gaps = []
    ell = None
    for a in magnitudes:
        ell = a if ell is None else max(a, ell - a)
        gaps.append(ell)
    return gaps


def lindisc_onerow(A: Matrix | Sequence) -> Fraction:
    """Exact lindisc of a 1 x n matrix in O(n log n).

    Sorting the magnitudes in decreasing order, the largest gap between
    consecutive subset sums evolves as ``l <- max(a, l - a)``; lindisc is
    half the final gap.
    """
    mags = sorted((abs(a) for a in _row(A) if a != 0), reverse=True)
    if not mags:
        return Fraction(0)
    return gap_fold(mags)[-1] / 2


def _scaled_subset_sums(row: Sequence) -> tuple[list[int], int]:
    ints, D = integer_scaled(Matrix([row]))
    sums = [0]
    for a in ints[0]:
        sums = [t for s in sums for t in (s, s + a)]
    return sums, D


def subset_sums(row: Sequence) -> list[Fraction]:
    """All 2^n subset sums, unsorted, in coloring order (x_1 most significant)."""
    sums, D = _scaled_subset_sums(row)
    return [Fraction(s, D) for s in sums]


def gap_profile_bruteforce(A: Matrix | Sequence, cap: int | None = None) -> GapProfile:
    """Enumerate all subset sums and find the widest consecutive gap."""
    row = _row(A)
    if cap is None:
        cap = env_cap("LINDISC_ENUM_CAP", DEFAULT_ENUM_CAP)
    if len(row) > cap:
        raise RefusalError(f"n = {len(row)} exceeds the enumeration cap {cap}")
    # sort and scan as scaled integers; Fraction comparisons dominate otherwise
    ints, D = _scaled_subset_sums(row)
    ints.sort()
    best, where = 0, -1
    for i in range(len(ints) - 1):
        gap = ints[i + 1] - ints[i]
        if gap > best or where < 0:
            best, where = gap, i
    sums = tuple(Fraction(s, D) for s in ints)
    return GapProfile(sums=sums, max_gap=Fraction(best, D), witness_pair=where)


def round_onerow(A: Matrix | Sequence, w: Sequence) -> tuple:
    """Round w to a coloring x with |A(w - x)| <= lindisc(A).

    Keeps an interval [u, v] of subset sums around Aw and tightens it by
    visiting entries in decreasing magnitude. Negative entries start
    "included" in u and are switched off when their magnitude is added.
    """
    row = _row(A)
    w = as_weight(w, len(row))
    n = len(row)
    x = [0] * n

    active = []
    for i, a in enumerate(row):
        if a == 0:
            x[i] = 1 if w[i] >= Fraction(1, 2) else 0
        else:
            active.append(i)
    if not active:
        return tuple(x)

    target = sum((row[i] * w[i] for i in active), Fraction(0))
    u_vec = {i: (1 if row[i] < 0 else 0) for i in active}
    v_vec = {i: (1 if row[i] > 0 else 0) for i in active}
    u = sum((row[i] for i in active if row[i] < 0), Fraction(0))
    v = sum((row[i] for i in active if row[i] > 0), Fraction(0))

    def finish(vec):
        for i in active:
            x[i] = vec[i]
        return tuple(x)

    if target == v:
        return finish(v_vec)
    if target == u:
        return finish(u_vec)

    order = sorted(active, key=lambda i: abs(row[i]), reverse=True)
    for k in order:
        step = abs(row[k])
        flipped = 1 - u_vec[k]
        if u + step > target:
            if u + step <= v:
                v = u + step
                v_vec = dict(u_vec)
                v_vec[k] = flipped
        else:
            u += step
            u_vec[k] = flipped
            if u == target:
                return finish(u_vec)

    if target - u < v - target:
        return finish(u_vec)
    return finish(v_vec)
