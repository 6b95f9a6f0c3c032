import itertools
import random
from fractions import Fraction as F

from lindisc import Matrix, approx_lindisc, eval_residual, lindisc_lowdim, lindisc_onerow, operator_inf_norm
from lindisc.approx import nearest_rounding

from conftest import integer_matrix, random_row


def test_examples():
    br = approx_lindisc(Matrix([[1, 1, 1]]))
    assert (br.lower, br.upper) == (F(3, 16), F(3, 2))
    assert F(1, 2) in br
    br = approx_lindisc(Matrix([[0, 0], [0, 0]]))
    assert (br.lower, br.upper) == (0, 0)
    br = approx_lindisc(Matrix([[3, 1]]))
    assert (br.lower, br.upper) == (F(1, 2), 2)
    assert lindisc_onerow(Matrix([[3, 1]])) in br


def test_ratio_and_containment():
    rng = random.Random(41)
    for _ in range(100):
        A = Matrix([random_row(rng, rng.randint(1, 10), mag=40)])
        br = approx_lindisc(A)
        if operator_inf_norm(A) > 0:
            assert br.upper / br.lower == 2**A.n
        assert lindisc_onerow(A) in br
    for _ in range(30):
        A = integer_matrix(rng, 2, rng.randint(1, 5), 3)
        assert lindisc_lowdim(A).value in approx_lindisc(A)


def test_upper_is_half_max_sign_image():
    rng = random.Random(43)
    for _ in range(30):
        n = rng.randint(1, 8)
        A = Matrix([random_row(rng, n, mag=20) for _ in range(rng.randint(1, 3))])
        brute = max(max(abs(v) for v in A.apply(z)) for z in itertools.product((-1, 1), repeat=A.n))
        assert approx_lindisc(A).upper == brute / 2


def test_nearest_rounding_meets_upper_bound():
    rng = random.Random(47)
    for _ in range(50):
        A = Matrix([random_row(rng, 5, mag=20) for _ in range(2)])
        w = [F(rng.randint(0, 10), 10) for _ in range(5)]
        assert eval_residual(A, w, nearest_rounding(w)) <= approx_lindisc(A).upper
