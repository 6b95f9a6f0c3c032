"""Brute-force verification oracles.

``lindisc_at`` enumerates every coloring. ``lindisc_grid_bracket`` sweeps the
grid (h Z)^n within the unit cube and certifies an interval for lindisc(A)
through the Lipschitz bound ||A(w - w')||_inf <= ||A||_inf * ||w - w'||_inf.
Both work in scaled integer units so every comparison is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .core import (
    Bracket,
    InputError,
    LowerProvenance,
    Matrix,
    RefusalError,
    UpperProvenance,
    as_weight,
    env_cap,
    integer_scaled,
    operator_inf_norm,
)

DEFAULT_ENUM_CAP = 20
DEFAULT_GRID_BUDGET = 200_000_000
_SAFE = 2**62
_BLOCK_BITS = 14
_CHUNK = 4_000_000


@dataclass(frozen=True)
class DeepHoleReport:
    """A weight w, lindisc(A, w) and a coloring attaining it.

    ``image`` is Aw when the producer knows it (the low-dimensional solver
    reports the deep-hole center there).
    """

    w: tuple
    value: Fraction
    minimizer: tuple
    image: tuple | None = None

    @property
    def radius(self) -> Fraction:
        return self.value


def _dtype_for(bound: int):
    return np.int64 if bound < _SAFE else object


def _subset_images(cols: list[list[int]], m: int, dtype) -> np.ndarray:
    """Images of all 2^len(cols) colorings, rows in lexicographic coloring order."""
    P = np.zeros((1, m), dtype=dtype)
    for col in cols:
        a = np.array(col, dtype=dtype)
        nxt = np.empty((2 * len(P), m), dtype=dtype)
        nxt[0::2] = P
        nxt[1::2] = P + a
        P = nxt
    return P


def lindisc_at(A: Matrix, w: Sequence, cap: int | None = None) -> DeepHoleReport:
    """min over x in {0,1}^n of ||A(w - x)||_inf, by exhaustive enumeration.

    Ties go to the lexicographically smallest coloring.
    """
    w = as_weight(w, A.n)
    if cap is None:
        cap = env_cap("LINDISC_ENUM_CAP", DEFAULT_ENUM_CAP)
    n, m = A.n, A.m
    if n > cap:
        raise RefusalError(f"n = {n} exceeds the enumeration cap {cap}")
    if n == 0:
        return DeepHoleReport(w=(), value=Fraction(0), minimizer=())

    # residual of x, in units of 1/(D*q): A_int (W - q x)
    ints, D = integer_scaled(A)
    q = 1
    for c in w:
        q = lcm(q, c.denominator)
    W = [int(c * q) for c in w]
    cols = [[ints[i][j] * q for i in range(m)] for j in range(n)]
    center = [sum(ints[i][j] * W[j] for j in range(n)) for i in range(m)]
    bound = max(abs(c) for c in center) + sum(max((abs(v) for v in col), default=0) for col in cols) + 1
    dtype = _dtype_for(bound)

    lo_bits = min(n, _BLOCK_BITS)
    hi_cols, lo_cols = cols[: n - lo_bits], cols[n - lo_bits:]
    lo_images = _subset_images(lo_cols, m, dtype)
    hi_images = _subset_images(hi_cols, m, dtype)
    base = np.array(center, dtype=dtype)

    best_val, best_idx = None, None
    for h, hi in enumerate(hi_images):
        res = np.abs(base - hi - lo_images).max(axis=1)
        j = int(np.argmin(res))
        val = int(res[j])
        if best_val is None or val < best_val:
            best_val, best_idx = val, (h << lo_bits) | j
            if val == 0:
                break
    x = tuple((best_idx >> (n - 1 - t)) & 1 for t in range(n))
    return DeepHoleReport(w=w, value=Fraction(best_val, D * q), minimizer=x)


class _Box:
    """Mixed-radix integer keys for lattice points inside an axis box."""

    def __init__(self, lo: Sequence[int], hi: Sequence[int]):
        self.lo = list(lo)
        self.widths = [h - l + 1 for l, h in zip(lo, hi)]
        self.strides = []
        s = 1
        for wdt in reversed(self.widths):
            self.strides.append(s)
            s *= wdt
        self.strides.reverse()
        self.size = s
        self.dtype = _dtype_for(s)

    def encode(self, rows: np.ndarray) -> np.ndarray:
        keys = np.zeros(len(rows), dtype=self.dtype)
        for i, (l, st) in enumerate(zip(self.lo, self.strides)):
            keys += (rows[:, i].astype(self.dtype) - l) * st
        return keys

    def decode(self, keys: np.ndarray) -> np.ndarray:
        out = np.empty((len(keys), len(self.lo)), dtype=self.dtype)
        rest = keys.copy()
        for i, (l, st) in enumerate(zip(self.lo, self.strides)):
            out[:, i] = rest // st + l
            rest = rest % st
        return out

    def offset(self, vec: Sequence[int]) -> int:
        return sum(v * st for v, st in zip(vec, self.strides))


def _reachable_keys(box: _Box, cols: list[list[int]], steps: int) -> list[np.ndarray]:
    """Suffix reachability: entry j holds keys of sum_{t >= j} y_t * col_t, y_t in 0..steps.

    Entry len(cols) is the origin alone.
    """
    origin = box.encode(np.zeros((1, len(box.lo)), dtype=box.dtype))
    suffix = [None] * (len(cols) + 1)
    suffix[len(cols)] = origin
    cur = origin
    for j in range(len(cols) - 1, -1, -1):
        off = box.offset(cols[j])
        cur = np.unique(np.concatenate([cur + t * off for t in range(steps + 1)]))
        suffix[j] = cur
    return suffix


def _lex_smallest(box: _Box, cols, steps: int, suffix, targets: np.ndarray) -> tuple:
    """Lexicographically smallest y in {0..steps}^n whose image lands in ``targets``."""
    y = []
    cur = box.decode(targets)
    lo = np.array(box.lo, dtype=box.dtype)
    hi = lo + np.array(box.widths, dtype=box.dtype) - 1
    for j, col in enumerate(cols):
        step = np.array(col, dtype=box.dtype)
        for t in range(steps + 1):
            cand = cur - t * step
            cand = cand[((cand >= lo) & (cand <= hi)).all(axis=1)]
            keep = cand[np.isin(box.encode(cand), suffix[j + 1])]
            if len(keep):
                y.append(t)
                cur = keep
                break
        else:  # pragma: no cover - targets are reachable by construction
            raise AssertionError("target not reachable")
    return tuple(y)


def _min_linf(points: np.ndarray, sites: np.ndarray) -> np.ndarray:
    out = np.empty(len(points), dtype=points.dtype)
    step = max(1, _CHUNK // max(1, len(sites) * points.shape[1]))
    for s in range(0, len(points), step):
        blk = points[s:s + step]
        out[s:s + step] = np.abs(blk[:, None, :] - sites[None, :, :]).max(axis=2).min(axis=1)
    return out


def grid_work(A: Matrix, k: int) -> int:
    """Upper estimate of (grid images) x (distinct sites) for resolution 1/k."""
    ints, _ = integer_scaled(A)
    images, sites = 1, 1
    for r in ints:
        span = sum(abs(v) for v in r)
        images *= k * span + 1
        sites *= span + 1
    images = min(images, (k + 1) ** A.n)
    sites = min(sites, 2 ** A.n)
    return images * sites


def lindisc_grid_bracket(A: Matrix, h, budget: int | None = None) -> tuple[Bracket, DeepHoleReport]:
    """Certified bracket for lindisc(A) from a sweep of the grid (h Z)^n in [0,1]^n.

    lower is the best grid value (a valid lower bound, attained at the returned
    weight); upper adds ||A||_inf * h / 2, since every w in the cube lies within
    h/2 of a grid point in the sup norm.
    """
    h = Fraction(h)
    if h <= 0 or h > 1 or h.numerator != 1:
        raise InputError(f"grid resolution must be 1/k for an integer k >= 1, got {h}")
    k = h.denominator
    if budget is None:
        budget = env_cap("LINDISC_GRID_BUDGET", DEFAULT_GRID_BUDGET)
    work = grid_work(A, k)
    if work > budget:
        feasible = [kk for kk in range(k - 1, 0, -1) if grid_work(A, kk) <= budget]
        hint = f"; smallest feasible h is 1/{feasible[0]}" if feasible else "; no grid resolution fits"
        raise RefusalError(f"grid work estimate {work} exceeds budget {budget}{hint}")

    L = operator_inf_norm(A)
    n, m = A.n, A.m
    if n == 0:
        bracket = Bracket(Fraction(0), Fraction(0), LowerProvenance.GRID_SAMPLE, UpperProvenance.GRID_LIPSCHITZ)
        return bracket, DeepHoleReport(w=(), value=Fraction(0), minimizer=())

    # grid image A y (y in 0..k) and site image k A x share units 1/(D k)
    ints, D = integer_scaled(A)
    cols = [[ints[i][j] for i in range(m)] for j in range(n)]
    site_cols = [[k * v for v in col] for col in cols]
    lo = [k * sum(v for v in r if v < 0) for r in ints]
    hi = [k * sum(v for v in r if v > 0) for r in ints]
    box = _Box(lo, hi)

    grid_suffix = _reachable_keys(box, cols, k)
    site_suffix = _reachable_keys(box, site_cols, 1)
    images = box.decode(grid_suffix[0])
    sites = box.decode(site_suffix[0])
    dist = _min_linf(images, sites)

    best = dist.max()
    targets = grid_suffix[0][dist == best]
    y = _lex_smallest(box, cols, k, grid_suffix, targets)
    w = tuple(Fraction(t, k) for t in y)

    img = np.array([[sum(cols[j][i] * y[j] for j in range(n)) for i in range(m)]], dtype=box.dtype)
    near = np.abs(img - sites).max(axis=1)
    nearest_keys = site_suffix[0][near == best]
    x = _lex_smallest(box, site_cols, 1, site_suffix, nearest_keys)

    lower = Fraction(int(best), D * k)
    upper = lower + L * h / 2
    report = DeepHoleReport(w=w, value=lower, minimizer=x)
    return Bracket(lower, upper, LowerProvenance.GRID_SAMPLE, UpperProvenance.GRID_LIPSCHITZ), report
