"""Exact lindisc for integer matrices with one or two rows and bounded entries.

Pipeline: dynamic programming over the lattice box [-n*delta, n*delta]^d finds
every point Ax, x in {0,1}^n (the sites); lindisc(A) is then the radius of the
largest empty sup-norm ball centred inside the convex hull of the sites, which
is the zonotope A[0,1]^n.

In the plane, the distance to the nearest site is piecewise linear and its
breakpoints lie on lines of four directions (x1, x2, x1 - x2, x1 + x2). The
maximum over the hull is therefore attained at an intersection of two such
lines, an intersection of one with a hull edge, or a hull vertex; all of those
points are evaluated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable

import numpy as np

from .core import InputError, Matrix, RefusalError, env_cap
from .onerow import lindisc_onerow
from .oracle import DeepHoleReport

DEFAULT_DP_BUDGET = 50_000_000
DEFAULT_LEB_BUDGET = 500_000_000
_SAFE = 2**62


class UnsupportedDimensionError(InputError):
    pass


@dataclass(frozen=True)
class SiteSet:
    d: int
    bound: int
    sites: frozenset
    columns: tuple = field(repr=False, default=())
    # tables[i] marks points reachable with the first i columns
    tables: tuple = field(repr=False, compare=False, default=())

    @property
    def size(self) -> int:
        return len(self.sites)

    def sorted_sites(self) -> list:
        return sorted(self.sites)

    def coloring_of(self, point: Iterable[int]) -> tuple:
        """Back-trace the DP tables to a coloring x with Ax = point."""
        p = tuple(int(c) for c in point)
        if p not in self.sites:
            raise InputError(f"{p} is not a reachable point")
        x = [0] * len(self.columns)
        for i in range(len(self.columns), 0, -1):
            if self.tables[i - 1][self._index(p)]:
                continue
            x[i - 1] = 1
            p = tuple(a - b for a, b in zip(p, self.columns[i - 1]))
        return tuple(x)

    def _index(self, p):
        return tuple(c + self.bound for c in p)


def _check_integer(A: Matrix):
    if not A.is_integer():
        raise InputError("low-dimensional solver needs integer entries")


def _shifted_or(src: np.ndarray, offset) -> np.ndarray:
    out = src.copy()
    dst_sl, src_sl = [], []
    size = src.shape[0]
    for o in offset:
        if o >= 0:
            dst_sl.append(slice(o, size))
            src_sl.append(slice(0, size - o))
        else:
            dst_sl.append(slice(0, size + o))
            src_sl.append(slice(-o, size))
    out[tuple(dst_sl)] |= src[tuple(src_sl)]
    return out


def reachable_points(A: Matrix, budget: int | None = None) -> SiteSet:
    """All points Ax for x in {0,1}^n, by reachability DP over the lattice box."""
    _check_integer(A)
    d, n = A.m, A.n
    delta = int(A.max_abs())
    bound = n * delta
    side = 2 * bound + 1
    if budget is None:
        budget = env_cap("LINDISC_DP_BUDGET", DEFAULT_DP_BUDGET)
    cells = side**d * (n + 1)
    if cells > budget:
        raise RefusalError(f"DP table needs {cells} cells, budget is {budget}")

    cols = tuple(tuple(int(v) for v in c) for c in A.columns())
    table = np.zeros((side,) * d, dtype=bool)
    table[(bound,) * d] = True
    tables = [table]
    for col in cols:
        table = _shifted_or(table, col)
        tables.append(table)
    sites = frozenset(tuple(int(c) - bound for c in idx) for idx in np.argwhere(table))
    return SiteSet(d=d, bound=bound, sites=sites, columns=cols, tables=tuple(tables))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class Hull2D:
    vertices: tuple  # counter-clockwise, strictly convex

    def edges(self) -> list:
        vs = self.vertices
        if len(vs) < 2:
            return []
        if len(vs) == 2:
            return [(vs[0], vs[1])]
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def contains(self, p) -> bool:
        """Exact membership test for a rational point."""
        p = (Fraction(p[0]), Fraction(p[1]))
        vs = self.vertices
        if len(vs) == 1:
            return p == vs[0]
        if len(vs) == 2:
            a, b = vs
            if _cross(a, b, p) != 0:
                return False
            return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
        return all(_cross(a, b, p) >= 0 for a, b in self.edges())


def hull_2d(S: SiteSet | Iterable) -> Hull2D:
    """Monotone-chain convex hull with integer orientation tests."""
    pts = sorted(set(S.sites if isinstance(S, SiteSet) else (tuple(p) for p in S)))
    if not pts:
        raise InputError("hull of an empty point set")
    if len(pts) <= 2:
        return Hull2D(tuple(pts))

    def chain(points):
        out = []
        for p in points:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return Hull2D(tuple(hull))


@dataclass(frozen=True, order=True)
class CandidateLine:
    """The line alpha*x1 + beta*x2 = gamma with coprime integer coefficients."""

    alpha: int
    beta: int
    gamma: int

    @staticmethod
    def normalized(alpha: int, beta: int, gamma: int) -> "CandidateLine":
        g = gcd(gcd(alpha, beta), gamma)
        alpha, beta, gamma = alpha // g, beta // g, gamma // g
        if alpha < 0 or (alpha == 0 and beta < 0):
            alpha, beta, gamma = -alpha, -beta, -gamma
        return CandidateLine(alpha, beta, gamma)

    @property
    def direction(self) -> tuple:
        g = gcd(self.alpha, self.beta)
        return self.alpha // g, self.beta // g

    def passes_through(self, p) -> bool:
        return self.alpha * Fraction(p[0]) + self.beta * Fraction(p[1]) == self.gamma


def candidate_lines(S: SiteSet | Iterable) -> set:
    """Every line carrying a piece of a sup-norm bisector or distance kink.

    For sites u, v the pieces lie on s*x_i - t*x_j = s*u_i - t*v_j with signs
    s, t and coordinates i, j, excluding i == j with s == t. Self-pairs (u = v)
    contribute the kinks of the distance to a single site. Enumerating over
    distinct coordinate values gives the same set as enumerating ordered pairs.
    """
    pts = S.sites if isinstance(S, SiteSet) else {tuple(p) for p in S}
    xs = {p[0] for p in pts}
    ys = {p[1] for p in pts}
    lines = set()
    for a in xs:
        for b in xs:
            lines.add(CandidateLine.normalized(2, 0, a + b))
    for a in ys:
        for b in ys:
            lines.add(CandidateLine.normalized(0, 2, a + b))
    for a in xs:
        for b in ys:
            lines.add(CandidateLine.normalized(1, -1, a - b))
            lines.add(CandidateLine.normalized(1, 1, a + b))
    return lines


@dataclass(frozen=True)
class LebResult:
    center: tuple
    radius: Fraction
    nearest_sites: tuple


def _line_line_points(lines: list) -> set:
    pts = set()
    for i in range(len(lines)):
        a1, b1, c1 = lines[i].alpha, lines[i].beta, lines[i].gamma
        for j in range(i + 1, len(lines)):
            a2, b2, c2 = lines[j].alpha, lines[j].beta, lines[j].gamma
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            pts.add(_reduce(c1 * b2 - c2 * b1, a1 * c2 - a2 * c1, det))
    return pts


def _line_edge_points(lines: list, hull: Hull2D) -> set:
    pts = set()
    for (a1, a2), (b1, b2) in hull.edges():
        d1, d2 = b1 - a1, b2 - a2
        for ln in lines:
            den = ln.alpha * d1 + ln.beta * d2
            if den == 0:
                continue
            num = ln.gamma - ln.alpha * a1 - ln.beta * a2
            if den < 0:
                num, den = -num, -den
            if 0 <= num <= den:
                pts.add(_reduce(a1 * den + num * d1, a2 * den + num * d2, den))
    return pts


def _reduce(x: int, y: int, q: int) -> tuple:
    if q < 0:
        x, y, q = -x, -y, -q
    g = gcd(gcd(x, y), q)
    return x // g, y // g, q // g


def _inside(hull: Hull2D, P: np.ndarray) -> np.ndarray:
    X, Y, Q = P[:, 0], P[:, 1], P[:, 2]
    vs = hull.vertices
    if len(vs) == 1:
        return (X == Q * vs[0][0]) & (Y == Q * vs[0][1])
    mask = np.ones(len(P), dtype=bool)
    for (a1, a2), (b1, b2) in hull.edges():
        cross = (b1 - a1) * (Y - Q * a2) - (b2 - a2) * (X - Q * a1)
        if len(vs) == 2:
            mask &= cross == 0
            mask &= (X >= Q * min(a1, b1)) & (X <= Q * max(a1, b1))
            mask &= (Y >= Q * min(a2, b2)) & (Y <= Q * max(a2, b2))
        else:
            mask &= cross >= 0
    return mask


def _nearest_numerators(P: np.ndarray, sites: np.ndarray) -> np.ndarray:
    """min over sites of max(|X - Q s1|, |Y - Q s2|) per candidate (X, Y, Q)."""
    out = np.empty(len(P), dtype=P.dtype)
    step = max(1, 4_000_000 // max(1, len(sites)))
    for s in range(0, len(P), step):
        blk = P[s:s + step]
        q = blk[:, 2:3]
        dx = np.abs(blk[:, 0:1] - q * sites[None, :, 0])
        dy = np.abs(blk[:, 1:2] - q * sites[None, :, 1])
        out[s:s + step] = np.maximum(dx, dy).min(axis=1)
    return out


def leb_linf_2d(S: SiteSet | Iterable, budget: int | None = None) -> LebResult:
    """Largest empty sup-norm ball centred in the hull of a planar site set.

    Ties on the radius go to the lexicographically smallest center.
    """
    pts = sorted(S.sites if isinstance(S, SiteSet) else {tuple(p) for p in S})
    if not pts:
        raise InputError("largest empty ball of an empty site set")
    if len(pts) == 1:
        c = (Fraction(pts[0][0]), Fraction(pts[0][1]))
        return LebResult(center=c, radius=Fraction(0), nearest_sites=(pts[0],))

    hull = hull_2d(pts)
    lines = sorted(candidate_lines(pts))
    if budget is None:
        budget = env_cap("LINDISC_LEB_BUDGET", DEFAULT_LEB_BUDGET)
    work = (len(lines) ** 2 // 2 + len(lines) * len(hull.vertices) + len(hull.vertices)) * len(pts)
    if work > budget:
        raise RefusalError(f"largest-empty-ball work estimate {work} exceeds budget {budget}")

    cands = _line_line_points(lines)
    cands |= _line_edge_points(lines, hull)
    cands |= {(v[0], v[1], 1) for v in hull.vertices}
    cands = sorted(cands)

    magnitude = max(max(abs(c) for c in p) for p in cands) * (1 + max(max(abs(c) for c in s) for s in pts))
    dtype = np.int64 if 4 * magnitude < _SAFE else object
    P = np.array(cands, dtype=dtype)
    sites = np.array(pts, dtype=dtype)
    P = P[_inside(hull, P)]
    nums = _nearest_numerators(P, sites)

    best = None
    for (x, y, q), num in zip(P.tolist(), nums.tolist()):
        r = Fraction(num, q)
        c = (Fraction(x, q), Fraction(y, q))
        if best is None or r > best[0] or (r == best[0] and c < best[1]):
            best = (r, c)
    radius, center = best
    nearest = tuple(s for s in pts if max(abs(center[0] - s[0]), abs(center[1] - s[1])) == radius)
    return LebResult(center=center, radius=radius, nearest_sites=nearest)


def _convex_weights(hull: Hull2D, c) -> list:
    """Express c as a convex combination of at most three hull vertices."""
    vs = hull.vertices
    if len(vs) == 1:
        return [(vs[0], Fraction(1))]
    if len(vs) == 2:
        a, b = vs
        span = (b[0] - a[0]) if b[0] != a[0] else (b[1] - a[1])
        off = (c[0] - a[0]) if b[0] != a[0] else (c[1] - a[1])
        t = Fraction(off) / span
        return [(a, 1 - t), (b, t)]
    v0 = vs[0]
    for i in range(1, len(vs) - 1):
        v1, v2 = vs[i], vs[i + 1]
        det = _cross(v0, v1, v2)
        l1 = Fraction((c[0] - v0[0]) * (v2[1] - v0[1]) - (c[1] - v0[1]) * (v2[0] - v0[0])) / det
        l2 = Fraction((v1[0] - v0[0]) * (c[1] - v0[1]) - (v1[1] - v0[1]) * (c[0] - v0[0])) / det
        l0 = 1 - l1 - l2
        if l0 >= 0 and l1 >= 0 and l2 >= 0:
            return [(v0, l0), (v1, l1), (v2, l2)]
    raise AssertionError(f"{c} is outside the hull")


def lindisc_lowdim(A: Matrix) -> DeepHoleReport:
    """Exact lindisc(A) for an integer matrix with one or two rows.

    Returns the deep hole as a weight w in [0,1]^n together with its image Aw
    (the center of the largest empty ball) and a nearest coloring.
    """
    if A.m > 2:
        raise UnsupportedDimensionError(f"only 1 or 2 rows are supported, got {A.m}")
    _check_integer(A)
    n, d = A.n, A.m
    if n == 0:
        return DeepHoleReport(w=(), value=Fraction(0), minimizer=(), image=(Fraction(0),) * d)
    S = reachable_points(A)

    if d == 1:
        value = lindisc_onerow(A)
        sums = [p[0] for p in S.sorted_sites()]
        if len(sums) == 1:
            x = S.coloring_of((sums[0],))
            return DeepHoleReport(w=tuple(Fraction(v) for v in x), value=value, minimizer=x,
                                  image=(Fraction(sums[0]),))
        gaps = [b - a for a, b in zip(sums, sums[1:])]
        j = gaps.index(max(gaps))
        if max(gaps) != 2 * value:
            raise AssertionError("gap fold disagrees with the reachable sums")
        lo, hi = S.coloring_of((sums[j],)), S.coloring_of((sums[j + 1],))
        w = tuple(Fraction(a + b, 2) for a, b in zip(lo, hi))
        return DeepHoleReport(w=w, value=value, minimizer=lo,
                              image=(Fraction(sums[j] + sums[j + 1], 2),))

    leb = leb_linf_2d(S)
    combo = _convex_weights(hull_2d(S), leb.center)
    w = [Fraction(0)] * n
    for vertex, lam in combo:
        if lam == 0:
            continue
        for i, xi in enumerate(S.coloring_of(vertex)):
            if xi:
                w[i] += lam
    minimizer = S.coloring_of(leb.nearest_sites[0])
    return DeepHoleReport(w=tuple(w), value=leb.radius, minimizer=minimizer, image=leb.center)
