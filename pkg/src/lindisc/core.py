"""Exact rational matrices, weights, colorings and the shared data model.

All discrepancy arithmetic runs on :class:`fractions.Fraction`; floats only
show up when rendering values for humans.
"""

from __future__ import annotations

import enum
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
Weight = tuple  # tuple[Fraction, ...], every coordinate in [0, 1]
Coloring = tuple  # tuple[int, ...], every coordinate 0 or 1

MAX_TOKEN_LEN = 4096

_INT_RE = re.compile(r"[+-]?\d+(?:/\d+)?")
_DEC_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


class InputError(ValueError):
    """Malformed or out-of-contract input."""


class ParseError(InputError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class RefusalError(RuntimeError):
    """The request would exceed an enumeration cap or memory budget."""


def env_cap(name: str, default: int) -> int:
    """Read an integer cap override from the environment, e.g. ``LINDISC_ENUM_CAP``."""
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"environment variable {name}={raw!r} is not an integer") from None
    if value < 0:
        raise InputError(f"environment variable {name} must be non-negative")
    return value


def parse_rational(token: str) -> Fraction:
    """Parse ``p/q``, an integer, or a decimal string into an exact Fraction."""
    if len(token) > MAX_TOKEN_LEN:
        raise InputError(f"token longer than {MAX_TOKEN_LEN} characters")
    if _INT_RE.fullmatch(token):
        if "/" in token and int(token.split("/")[1]) == 0:
            raise InputError(f"zero denominator in {token!r}")
        return Fraction(token)
    if _DEC_RE.fullmatch(token):
        return Fraction(token)
    raise InputError(f"not a rational number: {token!r}")


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Matrix:
    """Immutable m x n matrix of Fractions, stored row-major."""

    rows: tuple

    def __init__(self, rows: Iterable[Iterable]):
        frozen = tuple(tuple(Fraction(v) for v in row) for row in rows)
        if len(frozen) < 1:
            raise InputError("a matrix needs at least one row")
        n = len(frozen[0])
        if any(len(r) != n for r in frozen):
            raise InputError("ragged matrix rows")
        object.__setattr__(self, "rows", frozen)

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.n)]

    def is_integer(self) -> bool:
        return all(v.denominator == 1 for r in self.rows for v in r)

    def max_abs(self) -> Fraction:
        return max((abs(v) for r in self.rows for v in r), default=Fraction(0))

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.n:
            raise InputError(f"vector of length {len(v)} does not match {self.n} columns")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(v) for v in r) for r in self.rows)
        return f"Matrix([{body}])"


def as_weight(w: Iterable, n: int | None = None) -> tuple:
    coords = tuple(Fraction(c) for c in w)
    if n is not None and len(coords) != n:
        raise InputError(f"weight has length {len(coords)}, expected {n}")
    for c in coords:
        if c < 0 or c > 1:
            raise InputError(f"weight coordinate {format_rational(c)} outside [0, 1]")
    return coords


def as_coloring(x: Iterable, n: int | None = None) -> tuple:
    coords = tuple(int(c) for c in x)
    if n is not None and len(coords) != n:
        raise InputError(f"coloring has length {len(coords)}, expected {n}")
    if any(c not in (0, 1) for c in coords):
        raise InputError("coloring coordinates must be 0 or 1")
    return coords


class LowerProvenance(str, enum.Enum):
    OPERATOR_NORM = "operator_norm"
    GRID_SAMPLE = "grid_sample"
    EXACT = "exact"


class UpperProvenance(str, enum.Enum):
    OPERATOR_NORM = "operator_norm"
    GRID_LIPSCHITZ = "grid_lipschitz"
    EXACT = "exact"


@dataclass(frozen=True)
class Bracket:
    """Certified interval [lower, upper] containing lindisc(A)."""

    lower: Fraction
    upper: Fraction
    lower_provenance: LowerProvenance
    upper_provenance: UpperProvenance

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty bracket [{self.lower}, {self.upper}]")
        exact = (self.lower_provenance is LowerProvenance.EXACT
                 and self.upper_provenance is UpperProvenance.EXACT)
        if exact and self.lower != self.upper:
            raise ValueError("exact bracket must be a single point")

    def __contains__(self, value) -> bool:
        return self.lower <= value <= self.upper


def eval_residual(A: Matrix, w: Sequence, x: Sequence) -> Fraction:
    """Return ||A(w - x)||_inf exactly."""
    if len(w) != A.n or len(x) != A.n:
        raise InputError(f"expected vectors of length {A.n}, got {len(w)} and {len(x)}")
    diff = [Fraction(a) - b for a, b in zip(w, x)]
    return max(abs(v) for v in A.apply(diff))


def operator_inf_norm(A: Matrix) -> Fraction:
    """Max row l1 norm, which equals max over z in [-1,1]^n of ||Az||_inf."""
    return max(sum((abs(v) for v in r), Fraction(0)) for r in A.rows)


def _tokens(line: str):
    for match in re.finditer(r"\S+", line):
        yield match.group(0), match.start() + 1


def parse_matrix(text: str | bytes) -> Matrix:
    """Parse the "m n" header followed by m rows of n rational tokens."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8 text ({exc.reason})", 1, 1) from None
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty input, expected header 'm n'", 1, 1)

    header = list(_tokens(lines[0]))
    if len(header) != 2 or not all(tok.isdigit() for tok, _ in header):
        raise ParseError("header must be two non-negative integers 'm n'", 1, 1)
    m, n = (int(tok) for tok, _ in header)
    if m < 1:
        raise ParseError("matrix needs at least one row", 1, header[0][1])
    found = len(lines) - 1
    if n == 0 and found <= m:
        # empty rows may have been eaten as trailing blank lines
        return Matrix([[] for _ in range(m)])
    if found < m:
        raise ParseError(f"expected {m} rows, found {found}", len(lines) + 1, 1)
    if found > m:
        raise ParseError(f"expected {m} rows, found {found}", m + 2, 1)

    rows = []
    for i in range(m):
        lineno = i + 2
        toks = list(_tokens(lines[i + 1]))
        if len(toks) != n:
            raise ParseError(f"row {i + 1}: expected {n} entries, found {len(toks)}", lineno, 1)
        row = []
        for tok, col in toks:
            try:
                row.append(parse_rational(tok))
            except InputError as exc:
                raise ParseError(f"row {i + 1}: {exc}", lineno, col) from None
        rows.append(row)
    return Matrix(rows)


def serialize_matrix(A: Matrix) -> str:
    out = [f"{A.m} {A.n}"]
    out.extend(" ".join(format_rational(v) for v in r) for r in A.rows)
    return "\n".join(out) + "\n"


def parse_vector(text: str) -> tuple:
    """Comma- or whitespace-separated rational tokens."""
    toks = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    return tuple(parse_rational(t) for t in toks)


def integer_scaled(A: Matrix) -> tuple[list[list[int]], int]:
    """Return (D*A as Python ints, D) for the least common denominator D."""
    from math import lcm

    D = 1
    for r in A.rows:
        for v in r:
            D = lcm(D, v.denominator)
    return [[int(v * D) for v in r] for r in A.rows], D
