"""Instance generators from the hardness side: monotone NAE-3SAT and subset sum."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import InputError, Matrix, ParseError, RefusalError, env_cap

DEFAULT_SAT_CAP = 24


@dataclass(frozen=True)
class MonotoneCnf:
    """Monotone 3-CNF over variables 1..num_vars; every clause has 3 distinct variables."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.num_vars < 3:
            raise InputError(f"need at least 3 variables to form a clause, got {self.num_vars}")
        for c in clauses:
            if len(c) != 3 or len(set(c)) != 3:
                raise InputError(f"clause {c} must name 3 distinct variables")
            if any(not isinstance(v, int) or v < 1 or v > self.num_vars for v in c):
                raise InputError(f"clause {c} has a variable outside 1..{self.num_vars}")


@dataclass(frozen=True)
class SubsetSumInstance:
    values: tuple
    t: Fraction  # fraction of the total: the target sum is t * sum(values)

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "t", Fraction(self.t))
        if not values or any(v <= 0 for v in values):
            raise InputError("subset-sum values must be a nonempty list of positive integers")
        if not 0 <= self.t <= 1:
            raise InputError("target fraction t must lie in [0, 1]")

    @property
    def target(self) -> Fraction:
        return self.t * sum(self.values)


def incidence_matrix(C: MonotoneCnf) -> Matrix:
    """Row i is the 0/1 indicator of the variables of clause i."""
    if not C.clauses:
        raise InputError("a CNF without clauses has no incidence matrix (needs m >= 1)")
    rows = []
    for clause in C.clauses:
        row = [0] * C.num_vars
        for v in clause:
            row[v - 1] = 1
        rows.append(row)
    return Matrix(rows)


def nae_satisfiable(C: MonotoneCnf, cap: int | None = None) -> tuple | None:
    """First assignment (in lexicographic order, False < True) under which
    every clause has a true and a false variable, or None."""
    if cap is None:
        cap = env_cap("LINDISC_SAT_CAP", DEFAULT_SAT_CAP)
    if C.num_vars > cap:
        raise RefusalError(f"{C.num_vars} variables exceed the enumeration cap {cap}")
    masks = [sum(1 << (C.num_vars - v) for v in c) for c in C.clauses]
    for bits in range(1 << C.num_vars):
        if all(0 < bits & mk < mk for mk in masks):
            return tuple(bool((bits >> (C.num_vars - 1 - i)) & 1) for i in range(C.num_vars))
    return None


def subset_sum_weight(S: SubsetSumInstance) -> tuple[Matrix, tuple]:
    """The row matrix [values] and the uniform weight t*1.

    lindisc(A, t*1) == 0 exactly when t*sum(values) is a subset sum.
    """
    return Matrix([S.values]), tuple(S.t for _ in S.values)


def subset_sum_reachable(values: Sequence[int], target) -> bool:
    """Plain set-based subset-sum decision, independent of the lindisc code."""
    target = Fraction(target)
    if target.denominator != 1:
        return False
    reach = {0}
    for v in values:
        reach |= {r + v for r in reach}
    return int(target) in reach


def random_cnf(rng: random.Random, num_vars: int, num_clauses: int) -> MonotoneCnf:
    clauses = [tuple(sorted(rng.sample(range(1, num_vars + 1), 3))) for _ in range(num_clauses)]
    return MonotoneCnf(num_vars, tuple(clauses))


def find_nae_unsat(seed: int, num_vars: int = 7, max_tries: int = 100_000) -> MonotoneCnf:
    """Search random clause sets for a NAE-unsatisfiable instance, then prune
    clauses that are not needed for unsatisfiability."""
    rng = random.Random(seed)
    triples = list(itertools.combinations(range(1, num_vars + 1), 3))
    for _ in range(max_tries):
        k = rng.randint(1, len(triples))
        cnf = MonotoneCnf(num_vars, tuple(rng.sample(triples, k)))
        if nae_satisfiable(cnf) is not None:
            continue
        clauses = list(cnf.clauses)
        for c in list(clauses):
            trial = [d for d in clauses if d != c]
            if trial and nae_satisfiable(MonotoneCnf(num_vars, tuple(trial))) is None:
                clauses = trial
        return MonotoneCnf(num_vars, tuple(sorted(clauses)))
    raise RefusalError(f"no NAE-unsatisfiable instance found in {max_tries} tries")


def parse_cnf(text: str | bytes) -> MonotoneCnf:
    """Header "n m", then m lines of three variable indices. Lines starting
    with '#' are comments (used to record generator seeds)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    lines = [(i + 1, ln) for i, ln in enumerate(text.splitlines())
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty CNF input, expected header 'n m'", 1, 1)
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError("header must be 'n m'", lineno, 1)
    n, m = int(parts[0]), int(parts[1])
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"expected {m} clauses, found {len(body)}", lineno, 1)
    clauses = []
    for lineno, ln in body:
        toks = ln.split()
        if len(toks) != 3 or not all(t.isdigit() for t in toks):
            raise ParseError("a clause is three positive variable indices", lineno, 1)
        clauses.append(tuple(int(t) for t in toks))
    try:
        return MonotoneCnf(n, tuple(clauses))
    except InputError as exc:
        raise ParseError(str(exc), lineno, 1) from None


def serialize_cnf(C: MonotoneCnf, comment: str | None = None) -> str:
    out = [f"# {comment}"] if comment else []
    out.append(f"{C.num_vars} {len(C.clauses)}")
    out.extend(" ".join(str(v) for v in c) for c in C.clauses)
    return "\n".join(out) + "\n"
