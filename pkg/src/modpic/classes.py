"""Named divisor classes."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .basis import DELTA_IRR, LAMBDA, DivisorClass, SpaceId, delta, omega
from .errors import InvalidBoundary, OutOfRange
from .theta import ThetaClass, theta_key


def bn_class(g: int) -> DivisorClass:
    """Brill-Noether class (g+3) lambda - (g+1)/6 delta0 - sum i(g-i) delta_i on M_g."""
    if g < 3:
        raise OutOfRange(f"bn_class needs g >= 3, got {g}")
    space = SpaceId(g, 0)
    coeffs = {LAMBDA: g + 3, DELTA_IRR: Fraction(-(g + 1), 6)}
    for i in range(1, g // 2 + 1):
        coeffs[delta(space, i, ())] = -i * (g - i)
    return DivisorClass(space, coeffs)


def marked_delta(g: int, i: int) -> DivisorClass:
    """On M_{g,1}: the boundary divisor whose genus-i side carries the mark."""
    return DivisorClass.of((g, 1), delta((g, 1), i, {1}))


def weierstrass_class(g: int) -> DivisorClass:
    """Class of the Weierstrass divisor on M_{g,1}.

    g(g+1)/2 omega - lambda - sum_{i=1}^{g-1} (g-i)(g-i+1)/2 delta_i, where
    delta_i has the marked point on its genus-i side.
    """
    if g < 2:
        raise OutOfRange(f"weierstrass_class needs g >= 2, got {g}")
    space = SpaceId(g, 1)
    coeffs = {omega(1): Fraction(g * (g + 1), 2), LAMBDA: -1}
    for i in range(1, g):
        b = delta(space, i, {1})
        coeffs[b] = coeffs.get(b, 0) - Fraction((g - i) * (g - i + 1), 2)
    return DivisorClass(space, coeffs)


def theta_class(g: int, n: int, i: int, S: Iterable[int]) -> DivisorClass:
    """theta_{i;S} on M_{0,g+n}, fully expanded (C(g, i) terms)."""
    S = frozenset(S)
    theta_key(g, n, i, S)
    return ThetaClass.basic(g, n, i, S).expand()


def epsilon_class(m: int, i: int) -> DivisorClass:
    """Sum of delta_{0;S} over all i-subsets S of {1..m}, with canonical merging."""
    if not 2 <= i <= m - 2:
        raise InvalidBoundary(f"epsilon_{i} undefined on M_0,{m}")
    space = SpaceId(0, m)
    acc: dict = {}
    for S in combinations(range(1, m + 1), i):
        b = delta(space, 0, S)
        acc[b] = acc.get(b, 0) + 1
    return DivisorClass(space, acc)
