"""Polynomial-time bracket for lindisc(A) within a factor of 2^(n+1)."""

from fractions import Fraction

from .core import Bracket, LowerProvenance, Matrix, UpperProvenance, operator_inf_norm


def approx_lindisc(A: Matrix) -> Bracket:
    """Bracket lindisc(A) between ||A||/2^(n+1) and ||A||/2.

    ||A|| is the inf->inf operator norm (max row l1 norm). Rounding each
    coordinate of w to the nearest integer gives the upper bound; the lower
    bound comes from covering the unit cube by 2^n translates of the
    lindisc-scaled parallelepiped.
    """
    L = operator_inf_norm(A)
    return Bracket(
        lower=L / 2 ** (A.n + 1),
        upper=L / 2,
        lower_provenance=LowerProvenance.OPERATOR_NORM,
        upper_provenance=UpperProvenance.OPERATOR_NORM,
    )


def nearest_rounding(w) -> tuple:
    """Coordinate-wise rounding to the nearest integer (ties go up)."""
    return tuple(1 if Fraction(c) >= Fraction(1, 2) else 0 for c in w)
