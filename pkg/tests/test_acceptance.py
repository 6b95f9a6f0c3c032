"""Exit criteria. Each test records one pass/fail line, printed in the
terminal summary under "acceptance criteria"."""

import io
import itertools
import random
import statistics
import subprocess
import sys
import time
from fractions import Fraction as F

import pytest

from lindisc import (
    Matrix,
    approx_lindisc,
    eval_residual,
    gap_profile_bruteforce,
    incidence_matrix,
    lindisc_at,
    lindisc_grid_bracket,
    lindisc_lowdim,
    lindisc_onerow,
    nae_satisfiable,
    operator_inf_norm,
    reachable_points,
    round_onerow,
    subset_sum_weight,
    SubsetSumInstance,
)
from lindisc.cli import run
from lindisc.onerow import gap_fold
from lindisc.reduction import parse_cnf, random_cnf, subset_sum_reachable

from conftest import FIXTURES, integer_matrix, lowdim_corpus, onerow_corpus, random_row


@pytest.fixture(scope="module")
def onerow_instances():
    return onerow_corpus()


@pytest.fixture(scope="module")
def lowdim_instances():
    return lowdim_corpus()


@pytest.fixture(scope="module")
def lowdim_reports(lowdim_instances):
    return [lindisc_lowdim(A) for A in lowdim_instances]


def d1_corpus():
    rng = random.Random(606)
    return [integer_matrix(rng, 1, rng.randint(1, 12), rng.randint(1, 9)) for _ in range(100)]


def test_c01_onerow_oracle_equivalence(onerow_instances, criterion):
    start = time.perf_counter()
    mismatches = sum(2 * lindisc_onerow(A) != gap_profile_bruteforce(A).max_gap for A in onerow_instances)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60
    criterion("C1 one-row oracle equivalence, 500 matrices, < 60 s", ok, f"{mismatches} mismatches, {elapsed:.1f} s")
    assert ok


def test_c02_gap_recursion(onerow_instances, criterion):
    mismatches = 0
    for A in onerow_instances:
        mags = sorted((abs(a) for a in A.rows[0]), reverse=True)
        prefix_gaps = gap_fold(mags)
        for k in range(1, len(mags) + 1):
            brute = gap_profile_bruteforce(mags[:k]).max_gap
            mismatches += prefix_gaps[k - 1] != brute
            if k >= 2:
                mismatches += prefix_gaps[k - 1] != max(mags[k - 1], prefix_gaps[k - 2] - mags[k - 1])
    ok = mismatches == 0
    criterion("C2 gap recursion matches brute-force prefix gaps", ok, f"{mismatches} mismatches")
    assert ok


def test_c03_magnitude_invariance(onerow_instances, criterion):
    rng = random.Random(303)
    mismatches = 0
    for A in onerow_instances:
        mags = [abs(a) for a in A.rows[0]]
        signed = [a if rng.random() < 0.5 else -a for a in mags]
        mismatches += lindisc_onerow(Matrix([signed])) != lindisc_onerow(Matrix([mags]))
    ok = mismatches == 0
    criterion("C3 magnitude invariance on 500 sign patterns", ok, f"{mismatches} mismatches")
    assert ok


def test_c04_rounding_soundness(criterion):
    rng = random.Random(404)
    violations = 0
    for _ in range(200):
        n = rng.randint(1, 16)
        A = Matrix([random_row(rng, n)])
        w = tuple(F(rng.randint(0, 1000), rng.randint(1, 1000)) for _ in range(n))
        w = tuple(min(c, F(1)) for c in w)
        violations += eval_residual(A, w, round_onerow(A, w)) > lindisc_onerow(A)

    A = Matrix([random_row(rng, 16)])
    w = tuple(F(rng.randint(0, 997), 997) for _ in range(16))
    timings = []
    for _ in range(50):
        t0 = time.perf_counter()
        round_onerow(A, w)
        timings.append(time.perf_counter() - t0)
    median_ms = statistics.median(timings) * 1000
    ok = violations == 0 and median_ms < 1.0
    criterion("C4 rounding soundness on 200 (A, w), < 1 ms at n = 16", ok,
              f"{violations} violations, median {median_ms:.3f} ms")
    assert ok


def test_c05_lowdim_exactness(lowdim_instances, lowdim_reports, criterion):
    start = time.perf_counter()
    failures = 0
    for A, rep in zip(lowdim_instances, lowdim_reports):
        br, _ = lindisc_grid_bracket(A, F(1, 16))
        failures += not (br.lower <= rep.value <= br.upper)
        failures += lindisc_at(A, rep.w).value != rep.value
    for A in d1_corpus():
        failures += lindisc_lowdim(A).value != lindisc_onerow(A)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 600
    criterion("C5 low-dimension exactness (grid h=1/16, pulled-back w, d=1 vs one-row), < 10 min", ok,
              f"{failures} failures, {elapsed:.1f} s")
    assert ok


def test_c06_dp_correctness(criterion):
    rng = random.Random(606_1)
    failures = 0
    for _ in range(200):
        A = integer_matrix(rng, rng.randint(1, 2), rng.randint(1, 12), rng.randint(1, 3))
        brute = {tuple(int(v) for v in A.apply(x)) for x in itertools.product((0, 1), repeat=A.n)}
        failures += reachable_points(A).sites != brute
    ok = failures == 0
    criterion("C6 DP reachable set equals brute force on 200 matrices", ok, f"{failures} failures")
    assert ok


def test_c07_approx_bracket(onerow_instances, lowdim_instances, lowdim_reports, criterion):
    failures = 0
    pairs = [(A, lindisc_onerow(A)) for A in onerow_instances]
    pairs += [(A, rep.value) for A, rep in zip(lowdim_instances, lowdim_reports)]
    for A, exact in pairs:
        br = approx_lindisc(A)
        failures += not (br.lower <= exact <= br.upper)
        if operator_inf_norm(A) > 0:
            failures += br.upper / br.lower != 2**A.n
    ok = failures == 0
    criterion("C7 approximation bracket contains exact values, ratio 2^n", ok, f"{failures} failures on {len(pairs)}")
    assert ok


def test_c08_reduction_dichotomy(criterion):
    rng = random.Random(808)
    cnfs = []
    for _ in range(50):
        n = rng.randint(3, 12)
        cnfs.append(random_cnf(rng, n, rng.randint(1, 3 * n)))
    cnfs.append(parse_cnf((FIXTURES / "nae_no.cnf").read_text()))
    failures, outcomes = 0, set()
    for C in cnfs:
        value = lindisc_at(incidence_matrix(C), [F(1, 2)] * C.num_vars).value
        sat = nae_satisfiable(C) is not None
        outcomes.add(sat)
        failures += value != (F(1, 2) if sat else F(3, 2))
    ok = failures == 0 and outcomes == {True, False}
    criterion("C8 reduction dichotomy at w = 1/2 (50 random + golden NO)", ok,
              f"{failures} failures, outcomes seen {sorted(outcomes)}")
    assert ok


def test_c09_subset_sum_probe(criterion):
    rng = random.Random(909)
    failures, hits = 0, 0
    for i in range(100):
        values = [rng.randint(1, 60) for _ in range(rng.randint(1, 16))]
        if i % 2:
            target = sum(v for v in values if rng.random() < 0.5)
            t = F(target, sum(values))
        else:
            t = F(rng.randint(0, 40), 40)
        A, w = subset_sum_weight(SubsetSumInstance(values, t))
        zero = lindisc_at(A, w).value == 0
        reachable = subset_sum_reachable(values, t * sum(values))
        hits += reachable
        failures += zero != reachable
    ok = failures == 0 and 0 < hits < 100
    criterion("C9 subset-sum probe: lindisc(A, t1) = 0 iff target reachable", ok, f"{failures} failures, {hits} reachable")
    assert ok


def refinement_instances():
    rng = random.Random(1010)
    out = []
    for i in range(20):
        if i < 8:
            out.append(integer_matrix(rng, 1, rng.randint(1, 6), rng.randint(1, 5)))
        else:
            out.append(integer_matrix(rng, 2, rng.randint(1, 4), rng.randint(1, 3)))
    return out


def test_c10_grid_refinement(criterion):
    failures = 0
    for A in refinement_instances():
        exact = lindisc_onerow(A) if A.m == 1 else lindisc_lowdim(A).value
        prev = None
        for k in (4, 8, 16, 32):
            br, _ = lindisc_grid_bracket(A, F(1, k))
            failures += exact not in br
            if prev is not None:
                failures += br.lower < prev.lower or br.upper > prev.upper
            prev = br
    ok = failures == 0
    criterion("C10 grid brackets nested over h = 1/4..1/32 and contain exact value", ok, f"{failures} failures")
    assert ok


def cli_invocations():
    f = FIXTURES
    return [
        ["onerow", "exact", f / "row_3_1.txt"],
        ["onerow", "exact", f / "row_mixed.txt", "--witness"],
        ["onerow", "exact", f / "ones.txt", "--format", "json"],
        ["onerow", "round", f / "row_mixed.txt", "--w", "1/3,1/2,1"],
        ["lowdim", "exact", f / "rot_square.txt"],
        ["lowdim", "exact", f / "two_row.txt"],
        ["lowdim", "exact", f / "row_3_1.txt", "--format", "json"],
        ["approx", f / "zero.txt"],
        ["approx", f / "two_row.txt"],
        ["oracle", "at", f / "two_row.txt", "--w", "1/2,1/3,1/4,1/5"],
        ["oracle", "grid", f / "two_row.txt", "--h", "1/4"],
        ["oracle", "grid", f / "row_mixed.txt", "--h", "1/8", "--format", "json"],
        ["gen", "nae", f / "nae_no.cnf"],
        ["gen", "nae", f / "yes.cnf"],
        ["gen", "subsetsum", "--values", "3,1,7,2", "--t", "1/3"],
        ["onerow", "exact", f / "bad.txt"],
    ]


def test_c11_cli_determinism(criterion):
    differing = []
    for argv in cli_invocations():
        argv = [str(a) for a in argv]
        runs = []
        for _ in range(2):
            out, err = io.StringIO(), io.StringIO()
            code = run(argv, stdout=out, stderr=err)
            runs.append((code, out.getvalue(), err.getvalue()))
        proc = subprocess.run([sys.executable, "-m", "lindisc.cli", *argv], capture_output=True, text=True)
        runs.append((proc.returncode, proc.stdout, proc.stderr))
        if len(set(runs)) != 1:
            differing.append(" ".join(argv))
    ok = not differing
    criterion("C11 CLI byte-identical output across repeated runs", ok,
              f"{len(cli_invocations())} invocations, {len(differing)} differing")
    assert ok
