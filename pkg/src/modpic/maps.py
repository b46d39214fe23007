"""Pullback homomorphisms between Picard spaces.

Each :class:`PullbackMap` is given by its value on every canonical basis
element of the source space and extended linearly.  ``source`` is the space
whose classes are pulled back (the target of the geometric map).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from .basis import (
    DELTA_IRR, LAMBDA, BasisElement, DivisorClass, SpaceId, basis, canonical_boundary,
    delta, omega, psi, psi_expansion,
)
from .classes import weierstrass_class
from .errors import InvalidMark, OutOfRange, SpaceMismatch
from .linalg import RationalMatrix
from .theta import ThetaClass, theta_keys

Image = Union[DivisorClass, ThetaClass]


@dataclass(frozen=True)
class PullbackMap:
    name: str
    source: SpaceId
    dest: SpaceId
    table: Mapping[BasisElement, Image] = field(repr=False)
    zero: Image = field(repr=False)

    def __call__(self, d: DivisorClass) -> Image:
        return apply(self, d)

    def matrix(self) -> RationalMatrix:
        """Columns indexed by ``basis(source)``; rows by the destination coordinates."""
        cols = [self.table[b].vector() for b in basis(self.source)]
        nrows = len(self.zero.vector())
        return RationalMatrix([[col[r] for col in cols] for r in range(nrows)], ncols=len(cols))

    def row_labels(self) -> list[str]:
        if isinstance(self.zero, ThetaClass):
            return [str(k) for k in theta_keys(self.zero.g, self.zero.n)]
        return [str(b) for b in basis(self.dest)]


def apply(m: PullbackMap, d: DivisorClass) -> Image:
    if d.space != m.source:
        raise SpaceMismatch(f"{m.name} expects a class on {m.source}, got {d.space}")
    out = m.zero
    for b, c in d.items():
        out = out.combine(1, m.table[b], c)
    return out


def _check_perm(n: int, perm: Mapping[int, int]) -> dict[int, int]:
    perm = dict(perm)
    marks = set(range(1, n + 1))
    if set(perm) != marks or set(perm.values()) != marks:
        raise InvalidMark(f"{perm} is not a permutation of 1..{n}")
    return perm


def _relabel_element(space: SpaceId, b: BasisElement, perm: Mapping[int, int]) -> BasisElement:
    if b.kind in ("omega", "psi"):
        return BasisElement(b.kind, mark=perm[b.mark])
    if b.kind == "delta":
        return delta(space, b.boundary.genus, {perm[s] for s in b.boundary.marks})
    return b


def relabel(d: DivisorClass, perm: Mapping[int, int]) -> DivisorClass:
    """Push ``d`` forward along the mark permutation ``k -> perm[k]``."""
    perm = _check_perm(d.space.n, perm)
    return DivisorClass(d.space, [(_relabel_element(d.space, b, perm), c) for b, c in d.items()])


def _boundary_class(space: SpaceId, b: BasisElement) -> DivisorClass:
    return DivisorClass._raw(space, {b: Fraction(1)})


@lru_cache(maxsize=None)
def forgetful_pullback(g: int, n: int, j: int) -> PullbackMap:
    """Pullback along the map M_{g,n} -> M_{g,n-1} forgetting mark j.

    Source mark k is identified with destination mark k (k < j) or k+1 (k >= j).
    """
    if not 1 <= j <= n:
        raise InvalidMark(f"cannot forget mark {j} of M_{g},{n}")
    source, dest = SpaceId(g, n - 1), SpaceId(g, n)

    def up(k: int) -> int:
        return k if k < j else k + 1

    table: dict[BasisElement, DivisorClass] = {}
    for b in basis(source):
        if b.kind in ("lambda", "delta0"):
            table[b] = DivisorClass.of(dest, b)
        elif b.kind == "omega":
            table[b] = DivisorClass.of(dest, omega(up(b.mark)))
        else:
            S = {up(s) for s in b.boundary.marks}
            first = delta(dest, b.boundary.genus, S)
            second = delta(dest, b.boundary.genus, S | {j})
            # the two pieces coincide only for delta_{g/2} on M_{g,1}
            table[b] = DivisorClass(dest, {first: 1} if first == second else {first: 1, second: 1})
    return PullbackMap(f"pi{j}*", source, dest, table, DivisorClass.zero(dest))


def forget(d: DivisorClass, j: int | None = None) -> DivisorClass:
    """Pull ``d`` back to one more mark, forgetting mark j (default: the new last mark)."""
    n = d.space.n + 1
    return apply(forgetful_pullback(d.space.g, n, n if j is None else j), d)


def pullback_from_mg(d: DivisorClass, n: int) -> DivisorClass:
    """Pull a class on M_{g,k} back to M_{g,n} by forgetting the marks k+1..n."""
    while d.space.n < n:
        d = forget(d)
    return d


@lru_cache(maxsize=None)
def elliptic_tails_pullback(g: int) -> PullbackMap:
    """f'^*: Pic M_{g,1} -> theta-span on M_{0,g+1} (elliptic tails at marks 1..g).

    Here delta_i means the boundary divisor whose genus-i side carries the mark.
    """
    if g < 3:
        raise OutOfRange(f"elliptic tails pullback needs g >= 3, got {g}")
    source = SpaceId(g, 1)
    zero = ThetaClass.zero(g, 1)

    def th(i: int) -> ThetaClass:
        return ThetaClass.basic(g, 1, i, {1})

    table: dict[BasisElement, ThetaClass] = {LAMBDA: zero, DELTA_IRR: zero}
    for i in range(1, g - 1):
        table[delta(source, i, {1})] = th(i)
    table[delta(source, g - 1, {1})] = ThetaClass(
        g, 1, {(i, frozenset({1})): Fraction(-i * (g - i), g - 1) for i in range(1, g - 1)})
    table[omega(1)] = ThetaClass(
        g, 1, {(i, frozenset({1})): Fraction((g - i) * (g - i - 1), g * (g - 1))
               for i in range(1, g - 1)})
    return PullbackMap("fprime*", source, SpaceId(0, g + 1), table, zero)


def genus2_lambda(n: int = 1) -> DivisorClass:
    """lambda on M_{2,n} rewritten as delta0/10 + delta1/5 (delta1 pulled back from M_2)."""
    d1 = pullback_from_mg(DivisorClass.of((2, 0), delta((2, 0), 1, ())), n)
    return DivisorClass.of((2, n), DELTA_IRR, Fraction(1, 10)) + d1 * Fraction(1, 5)


def genus2_normal_form(d: DivisorClass) -> DivisorClass:
    """Eliminate lambda from a class on M_{2,n} using the genus-2 relation."""
    if d.space.g != 2:
        return d
    lam = d[LAMBDA]
    if not lam:
        return d
    return d - DivisorClass.of(d.space, LAMBDA, lam) + genus2_lambda(d.space.n) * lam


def w2() -> DivisorClass:
    """The Weierstrass class of M_{2,1} in lambda-free normal form."""
    return genus2_normal_form(weierstrass_class(2))


@lru_cache(maxsize=None)
def genus2_tail_pullback(g: int, n: int = 1, sign: int = -1) -> PullbackMap:
    """g'^*: Pic M_{g,n} -> Pic M_{2,1}.

    The moving genus-2 curve is glued to a fixed general genus-(g-2) curve that
    carries all n marks.  ``sign`` is the coefficient of omega in the image of
    the genus-(g-2) boundary divisor; -1 is the consistent choice, +1 exists to
    exhibit the failure of the other reading.
    """
    if g < 4:
        raise OutOfRange(f"genus-2 tail pullback needs g >= 4, got {g}")
    if n < 1:
        raise OutOfRange("genus-2 tail pullback needs at least one mark")
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    source, dest = SpaceId(g, n), SpaceId(2, 1)
    zero = DivisorClass.zero(dest)
    d1 = delta(dest, 1, ())
    table: dict[BasisElement, DivisorClass] = {b: zero for b in basis(source)}
    table[LAMBDA] = genus2_lambda(1)
    table[DELTA_IRR] = DivisorClass.of(dest, DELTA_IRR)
    every = set(range(1, n + 1))
    table[delta(source, g - 1, every)] = DivisorClass.of(dest, d1)
    table[delta(source, g - 2, every)] = DivisorClass.of(dest, omega(1), sign)
    return PullbackMap("gprime*", source, dest, table, zero)


@lru_cache(maxsize=None)
def genus2_tail_pullback_unpointed(g: int) -> PullbackMap:
    """g^*: Pic M_g -> Pic M_{2,1}, the unpointed table taken as input data."""
    if g < 4:
        raise OutOfRange(f"genus-2 tail pullback needs g >= 4, got {g}")
    source, dest = SpaceId(g, 0), SpaceId(2, 1)
    zero = DivisorClass.zero(dest)
    table: dict[BasisElement, DivisorClass] = {b: zero for b in basis(source)}
    table[LAMBDA] = genus2_lambda(1)
    table[DELTA_IRR] = DivisorClass.of(dest, DELTA_IRR)
    table[delta(source, 1, ())] = DivisorClass.of(dest, delta(dest, 1, ()))
    table[delta(source, 2, ())] = DivisorClass.of(dest, omega(1), -1)
    return PullbackMap("g*", source, dest, table, zero)


def _bubble_last_table(g: int, n: int) -> dict[BasisElement, DivisorClass]:
    """Bubble at p_n carrying marks n and n+1: Pic M_{g,n+1} -> Pic M_{g,n}."""
    source, dest = SpaceId(g, n + 1), SpaceId(g, n)
    pair = frozenset({n, n + 1})
    special = canonical_boundary(source, 0, pair)

    def image_delta(b: BasisElement) -> DivisorClass:
        idx = b.boundary
        if idx == special:
            return DivisorClass(dest, {psi(n): -1})
        if pair <= idx.marks:
            return DivisorClass.of(dest, delta(dest, idx.genus, idx.marks - {n + 1}))
        if not pair & idx.marks:
            return DivisorClass.of(dest, delta(dest, idx.genus, idx.marks))
        return DivisorClass.zero(dest)

    def image_psi(k: int) -> DivisorClass:
        return DivisorClass(dest, {psi(k): 1}) if k < n else DivisorClass.zero(dest)

    table: dict[BasisElement, DivisorClass] = {}
    for b in basis(source):
        if b.kind in ("lambda", "delta0"):
            table[b] = DivisorClass.of(dest, b)
        elif b.kind == "delta":
            table[b] = image_delta(b)
    for k in range(1, n + 2):
        img = image_psi(k)
        for e, m in psi_expansion(source, k):
            if e.kind == "delta":
                img = img.combine(1, image_delta(e), -m)
        table[omega(k)] = img
    return table


@lru_cache(maxsize=None)
def bubble_pullback(g: int, n: int, i: int, j: int) -> PullbackMap:
    """Pullback along M_{g,n} -> M_{g,n+1} replacing p_i by a rational bubble with p_i, p_j.

    On classes this is D -> pi_j*(D . delta_{0;{i,j}}).  The marks of M_{g,n}
    are those of {1..n+1} minus j, renumbered in increasing order.
    """
    if g < 1:
        raise OutOfRange("bubble pullback is modeled for g >= 1 only")
    if i == j or not (1 <= i <= n + 1 and 1 <= j <= n + 1) or n < 1:
        raise InvalidMark(f"bad bubble marks ({i},{j}) for n={n}")
    source, dest = SpaceId(g, n + 1), SpaceId(g, n)
    others = [k for k in range(1, n + 2) if k not in (i, j)]
    sigma = {k: r + 1 for r, k in enumerate(others)}
    sigma[i], sigma[j] = n, n + 1
    kept = [k for k in range(1, n + 2) if k != j]
    rank = {k: r + 1 for r, k in enumerate(kept)}
    tau = {r + 1: rank[k] for r, k in enumerate(others)}
    tau[n] = rank[i]

    last = _bubble_last_table(g, n)
    table = {}
    for b in basis(source):
        moved = _relabel_element(source, b, sigma)
        table[b] = relabel(last[moved], tau)
    return PullbackMap(f"bubble{i},{j}*", source, dest, table, DivisorClass.zero(dest))
