"""Tail-symmetric boundary sums on M_{0,g+n}.

Marks ``1..g`` of M_{0,g+n} are the elliptic-tail attachment points and mark
``g+j`` is the j-th mark of M_{g,n}.  The class

    theta_{i;S} = sum over T in {1..g}, |T| = i, of delta_{0; T u (S+g)}

is stored symbolically by its key ``(i, S)``, so that classes for large g never
have to be expanded into their C(g, i) boundary terms.  Distinct canonical
keys have disjoint delta-supports, hence a combination vanishes formally iff
all of its theta coefficients vanish.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

from .basis import DivisorClass, SpaceId, Scalar, delta
from .errors import InvalidBoundary, SpaceMismatch

ThetaKey = tuple[int, frozenset]


def theta_key(g: int, n: int, i: int, S: Iterable[int]) -> ThetaKey:
    """Canonical key of theta_{i;S}; the mirror of (i, S) is (g-i, S^c)."""
    S = frozenset(S)
    if n < 1 or not S <= frozenset(range(1, n + 1)):
        raise InvalidBoundary(f"theta mark set {sorted(S)} not inside 1..{n}")
    if not 0 <= i <= g or not 2 <= i + len(S) <= g + n - 2:
        raise InvalidBoundary(f"theta_{{{i};{sorted(S)}}} is unstable for g={g}, n={n}")
    if n in S:
        return (g - i, frozenset(range(1, n + 1)) - S)
    return (i, S)


@lru_cache(maxsize=None)
def theta_keys(g: int, n: int) -> tuple[ThetaKey, ...]:
    """All canonical theta keys for (g, n), sorted."""
    keys = set()
    for k in range(n + 1):
        for S in combinations(range(1, n + 1), k):
            for i in range(g + 1):
                if 2 <= i + k <= g + n - 2:
                    keys.add(theta_key(g, n, i, S))
    return tuple(sorted(keys, key=_key_order))


def _key_order(key: ThetaKey) -> tuple:
    i, S = key
    return (len(S), tuple(sorted(S)), i)


def theta_label(key: ThetaKey, n: int) -> str:
    i, S = key
    return f"theta_{{{i};{{{','.join(map(str, sorted(S)))}}}}}"


class ThetaClass:
    """Exact combination of theta_{i;S} symbols for fixed (g, n)."""

    __slots__ = ("g", "n", "_coeffs")

    def __init__(self, g: int, n: int, coeffs: Mapping[ThetaKey, Scalar] = None):
        self.g, self.n = g, n
        acc: dict[ThetaKey, Fraction] = {}
        for (i, S), c in (coeffs or {}).items():
            if c:
                key = theta_key(g, n, i, S)
                acc[key] = acc.get(key, 0) + Fraction(c)
        self._coeffs = {k: c for k, c in acc.items() if c}

    @property
    def space(self) -> SpaceId:
        return SpaceId(0, self.g + self.n)

    @classmethod
    def zero(cls, g: int, n: int) -> "ThetaClass":
        return cls(g, n)

    @classmethod
    def basic(cls, g: int, n: int, i: int, S: Iterable[int]) -> "ThetaClass":
        return cls(g, n, {(i, frozenset(S)): 1})

    def __getitem__(self, key: ThetaKey) -> Fraction:
        return self._coeffs.get(key, Fraction(0))

    def items(self) -> list[tuple[ThetaKey, Fraction]]:
        return sorted(self._coeffs.items(), key=lambda kv: _key_order(kv[0]))

    def is_zero(self) -> bool:
        return not self._coeffs

    def combine(self, s: Scalar, other: "ThetaClass", t: Scalar) -> "ThetaClass":
        if not isinstance(other, ThetaClass):
            raise SpaceMismatch("cannot combine a theta class with a class on another space")
        if (other.g, other.n) != (self.g, self.n):
            raise SpaceMismatch(f"theta classes for {(self.g, self.n)} vs {(other.g, other.n)}")
        acc = {k: Fraction(s) * c for k, c in self._coeffs.items()}
        for k, c in other._coeffs.items():
            acc[k] = acc.get(k, 0) + Fraction(t) * c
        out = ThetaClass(self.g, self.n)
        out._coeffs = {k: c for k, c in acc.items() if c}
        return out

    def __add__(self, other: "ThetaClass") -> "ThetaClass":
        return self.combine(1, other, 1)

    def __sub__(self, other: "ThetaClass") -> "ThetaClass":
        return self.combine(1, other, -1)

    def __mul__(self, s: Scalar) -> "ThetaClass":
        if not isinstance(s, (int, Fraction)):
            return NotImplemented
        return self.combine(s, ThetaClass.zero(self.g, self.n), 0)

    __rmul__ = __mul__

    def __neg__(self) -> "ThetaClass":
        return self * -1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ThetaClass):
            return NotImplemented
        return (self.g, self.n, self._coeffs) == (other.g, other.n, other._coeffs)

    def __hash__(self) -> int:
        return hash((self.g, self.n, frozenset(self._coeffs.items())))

    def vector(self) -> list[Fraction]:
        return [self[k] for k in theta_keys(self.g, self.n)]

    def expand(self) -> DivisorClass:
        """Explicit boundary expansion on M_{0,g+n}; exponential in g."""
        space = self.space
        acc: dict = {}
        for (i, S), c in self._coeffs.items():
            shifted = tuple(self.g + s for s in S)
            for T in combinations(range(1, self.g + 1), i):
                b = delta(space, 0, T + shifted)
                acc[b] = acc.get(b, 0) + c
        return DivisorClass(space, acc)

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"ThetaClass(g={self.g}, n={self.n}, 0)"
        body = " + ".join(f"{c}*{theta_label(k, self.n)}" for k, c in self.items())
        return f"ThetaClass(g={self.g}, n={self.n}, {body})"
