"""Enumerative formulas for pencils and ramification budgets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .errors import OutOfRange, ParityError


@dataclass(frozen=True)
class SeriesParams:
    g: int
    r: int
    d: int

    def __post_init__(self) -> None:
        if self.r < 1 or self.d < 1 or self.g < 0:
            raise OutOfRange(f"bad linear series parameters {self}")

    @property
    def slack(self) -> int:
        """Expected dimension g - (r+1)(g-d+r) of the space of g^r_d's."""
        return self.g - (self.r + 1) * (self.g - self.d + self.r)


@dataclass(frozen=True)
class RamificationSeq:
    Z: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.Z:
            raise OutOfRange("ramification sequence must be nonempty")
        if self.Z[0] < 0 or any(a > b for a, b in zip(self.Z, self.Z[1:])):
            raise OutOfRange(f"ramification sequence {self.Z} must be nonnegative and nondecreasing")

    @property
    def r(self) -> int:
        return len(self.Z) - 1

    def check(self, p: SeriesParams) -> None:
        if self.r != p.r or self.Z[-1] > p.d - p.r:
            raise OutOfRange(f"{self.Z} is not a ramification sequence for a g^{p.r}_{p.d}")


def catalan(k: int) -> int:
    if k < 0:
        raise OutOfRange(f"catalan({k})")
    return factorial(2 * k) // (factorial(k) * factorial(k + 1))


def a_count(g: int, m: int, n: int) -> int:
    """Number of g^1_d's with ramification m-1 at a fixed point and n-1 at a free one.

    d is determined by 2d = g + m + n - 1.
    """
    if m < 1 or n < 1:
        raise OutOfRange(f"a_count needs m, n >= 1 (got m={m}, n={n})")
    if (g + m + n - 1) % 2:
        raise ParityError(f"2d = {g + m + n - 1} is odd")
    d = (g + m + n - 1) // 2
    if d < 1:
        raise OutOfRange(f"degree d={d} < 1")
    lo, hi = max(0, m + n - d - 1), min(m - 1, n - 1, d)
    total = Fraction(0)
    for j in range(lo, hi + 1):
        total += Fraction(m + n - 2 * j - 1, factorial(d - m - n + j + 1) * factorial(d - j))
    value = factorial(g) * (n * n - 1) * total
    if value.denominator != 1 or value < 0:
        raise ArithmeticError(f"a_count({g},{m},{n}) = {value} is not a nonnegative integer")
    return int(value)


def a_count_by_degree(g: int, d: int, n: int) -> int:
    """Same count indexed by the degree d instead of m."""
    return a_count(g, 2 * d - g - n + 1, n)


def plucker_total(g: int, r: int, d: int) -> int:
    """Total ramification weight (r+1)(d + r(g-1)) of a g^r_d on a smooth genus-g curve."""
    return (r + 1) * (d + r * (g - 1))


def beta_weight(Z: RamificationSeq | Sequence[int]) -> int:
    Z = Z.Z if isinstance(Z, RamificationSeq) else tuple(Z)
    return sum(Z)


def elliptic_tail_feasible(p: SeriesParams, Zs: Sequence[RamificationSeq]) -> tuple[bool, int]:
    """Budget on the rational spine with g elliptic tails.

    The spine receives (r+1)(d-r) units of ramification, at least r of which
    go to each tail point; the remaining a = slack units must absorb every
    marked-point condition.  Returns (feasible, a - sum |Z|).
    """
    for Z in Zs:
        Z.check(p)
    a = (p.r + 1) * (p.d - p.r) - p.g * p.r
    assert a == p.slack
    slack = a - sum(beta_weight(Z) for Z in Zs)
    return slack >= 0, slack


def odd_genus_pair_check(g: int) -> tuple[int, int, bool]:
    """Compare A(g,1,3) with 6g c_{(g+1)/2}; they agree iff the delta_{0;{1,2}} coefficient vanishes."""
    if g % 2 == 0:
        raise ParityError(f"odd genus check needs odd g, got {g}")
    if g < 3:
        raise OutOfRange(f"odd genus check needs g >= 3, got {g}")
    lhs = a_count(g, 1, 3)
    rhs = 6 * g * catalan((g + 1) // 2)
    K = Fraction(factorial((g + 1) // 2) * factorial((g + 3) // 2), 6 * factorial(g))
    assert lhs * K == (g - 1) * (g + 1), "reduced left side"
    assert rhs * K == g * (g + 1), "reduced right side"
    return lhs, rhs, lhs != rhs


def even_genus_pair_check(g: int) -> tuple[int, int, int, bool]:
    """Compare A(g,2,3) + A(g,3,2) with A(g,1,2) + A(g,1,4)."""
    if g % 2:
        raise ParityError(f"even genus check needs even g, got {g}")
    if g < 4:
        raise OutOfRange(f"even genus check needs g >= 4, got {g}")
    h = g // 2
    lhs = a_count(g, 2, 3) + a_count(g, 3, 2)
    rhs = a_count(g, 1, 2) + a_count(g, 1, 4)
    scale = Fraction(factorial(g), factorial(h - 1) * factorial(h + 2))
    # after dividing by g!/((h-1)!(h+2)!) the two sides are 33g and 33g - 48
    assert lhs == scale * (44 * (h - 1) + 22 * (h + 2))
    assert rhs == scale * (6 * (h + 2) + 60 * (h - 1))
    diff = lhs - rhs
    assert diff == 48 * scale
    return lhs, rhs, diff, diff != 0


def pencil_residual_ramification(g: int) -> int:
    """Simple ramification points of a g^1_{(g+3)/2} away from one ramified point (odd g)."""
    if g % 2 == 0:
        raise ParityError("needs odd g")
    return plucker_total(g, 1, (g + 3) // 2) - 1


def a13_closed_form(g: int) -> int:
    """24 * C(g, (g+3)/2), the specialization A(g,1,3) for odd g."""
    return 24 * comb(g, (g + 3) // 2)
