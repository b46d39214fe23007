"""Picard spaces of pointed curves, canonical basis elements and divisor classes.

A divisor class is stored as a sparse map from canonical basis elements to
exact rationals.  For genus ``g >= 1`` the basis is

    lambda, delta0, omega_1..omega_n, delta_{i;S} (canonical boundary indices)

and for genus 0 it is the set of canonical ``delta_{0;S}`` only.  Psi classes
are accepted on input and rewritten in terms of omega.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Union

from .errors import InvalidBoundary, InvalidMark, InvalidSpace, SpaceMismatch

Scalar = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class SpaceId:
    g: int
    n: int

    def __post_init__(self) -> None:
        if self.g < 0 or self.n < 0:
            raise InvalidSpace(f"negative genus or mark count: {self}")
        if 2 * self.g - 2 + self.n <= 0:
            raise InvalidSpace(f"M_{self.g},{self.n} is not stable")

    @property
    def marks(self) -> frozenset[int]:
        return frozenset(range(1, self.n + 1))

    def __str__(self) -> str:
        return f"M({self.g},{self.n})"


@dataclass(frozen=True)
class BoundaryIndex:
    """Pair (i, S): a node cutting off a genus-i side carrying the marks S."""

    genus: int
    marks: frozenset[int]

    def __str__(self) -> str:
        return f"{self.genus};{{{','.join(map(str, sorted(self.marks)))}}}"


def _as_space(space: SpaceId | tuple[int, int]) -> SpaceId:
    return space if isinstance(space, SpaceId) else SpaceId(*space)


def is_stable_boundary(space: SpaceId, i: int, S: Iterable[int]) -> bool:
    S = frozenset(S)
    if not 0 <= i <= space.g or not S <= space.marks:
        return False
    if i == 0 and len(S) < 2:
        return False
    if i == space.g and space.n - len(S) < 2:
        return False
    return True


def canonical_boundary(space: SpaceId | tuple[int, int], i: int,
                       S: Iterable[int]) -> BoundaryIndex:
    """Canonical representative of the pair {(i, S), (g-i, S^c)}.

    The representative with the smaller genus wins; at ``i == g/2`` the
    representative whose mark set avoids the largest mark ``n`` wins.
    """
    space = _as_space(space)
    S = frozenset(S)
    if not is_stable_boundary(space, i, S):
        raise InvalidBoundary(f"unstable boundary index ({i},{sorted(S)}) on {space}")
    j, T = space.g - i, space.marks - S
    if i < j:
        return BoundaryIndex(i, S)
    if j < i:
        return BoundaryIndex(j, T)
    if space.n == 0:
        return BoundaryIndex(i, S)
    return BoundaryIndex(i, S) if space.n not in S else BoundaryIndex(j, T)


@dataclass(frozen=True)
class BasisElement:
    """One generator of the Picard group.

    ``kind`` is one of ``"lambda"``, ``"delta0"``, ``"omega"``, ``"psi"`` or
    ``"delta"``.  ``mark`` is used by omega/psi, ``boundary`` by delta.
    """

    kind: str
    mark: int = 0
    boundary: BoundaryIndex | None = None

    def sort_key(self) -> tuple:
        order = {"lambda": 0, "delta0": 1, "omega": 2, "psi": 3, "delta": 4}
        if self.boundary is not None:
            b = self.boundary
            return (4, b.genus, len(b.marks), tuple(sorted(b.marks)))
        return (order[self.kind], self.mark)

    def __str__(self) -> str:
        if self.kind in ("omega", "psi"):
            return f"{self.kind}_{self.mark}"
        if self.kind == "delta":
            return f"delta_{{{self.boundary}}}"
        return self.kind


LAMBDA = BasisElement("lambda")
DELTA_IRR = BasisElement("delta0")


def omega(i: int) -> BasisElement:
    return BasisElement("omega", mark=i)


def psi(i: int) -> BasisElement:
    return BasisElement("psi", mark=i)


def delta(space: SpaceId | tuple[int, int], i: int, S: Iterable[int]) -> BasisElement:
    return BasisElement("delta", boundary=canonical_boundary(space, i, S))


@lru_cache(maxsize=None)
def boundary_indices(space: SpaceId) -> tuple[BoundaryIndex, ...]:
    """All canonical boundary indices of ``space``, in basis order."""
    found = set()
    marks = sorted(space.marks)
    for i in range(space.g + 1):
        for k in range(space.n + 1):
            for S in combinations(marks, k):
                if is_stable_boundary(space, i, S):
                    found.add(canonical_boundary(space, i, S))
    return tuple(sorted(found, key=lambda b: (b.genus, len(b.marks), tuple(sorted(b.marks)))))


@lru_cache(maxsize=None)
def basis(space: SpaceId) -> tuple[BasisElement, ...]:
    """Canonical basis of the modeled Picard space, in its fixed order."""
    out: list[BasisElement] = []
    if space.g >= 1:
        out += [LAMBDA, DELTA_IRR]
        out += [omega(i) for i in range(1, space.n + 1)]
    out += [BasisElement("delta", boundary=b) for b in boundary_indices(space)]
    return tuple(out)


@lru_cache(maxsize=None)
def basis_position(space: SpaceId) -> dict[BasisElement, int]:
    return {b: k for k, b in enumerate(basis(space))}


def _check_element(space: SpaceId, b: BasisElement) -> BasisElement:
    """Validate ``b`` for ``space``; returns the canonical form (psi kept)."""
    if b.kind in ("lambda", "delta0"):
        if space.g < 1:
            raise InvalidSpace(f"{b} is not modeled on genus-0 space {space}")
        return b
    if b.kind in ("omega", "psi"):
        if not 1 <= b.mark <= space.n:
            raise InvalidMark(f"{b} has no mark on {space}")
        if space.g < 1:
            raise InvalidSpace(f"{b} is not modeled on genus-0 space {space}")
        return b
    if b.kind == "delta" and b.boundary is not None:
        return delta(space, b.boundary.genus, b.boundary.marks)
    raise ValueError(f"malformed basis element {b!r}")


@lru_cache(maxsize=None)
def psi_expansion(space: SpaceId, i: int) -> tuple[tuple[BasisElement, int], ...]:
    """``psi_i = omega_i + sum of delta_{0;S}`` over S containing i, |S| >= 2."""
    others = sorted(space.marks - {i})
    terms = [(omega(i), 1)]
    for k in range(1, len(others) + 1):
        for T in combinations(others, k):
            terms.append((delta(space, 0, (i,) + T), 1))
    return tuple(terms)


class DivisorClass:
    """An immutable exact-rational combination of canonical basis elements."""

    __slots__ = ("space", "_coeffs")

    def __init__(self, space: SpaceId | tuple[int, int],
                 coeffs: Mapping[BasisElement, Scalar] | Iterable[tuple[BasisElement, Scalar]] = ()):
        space = _as_space(space)
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[BasisElement, Fraction] = {}
        for b, c in items:
            c = Fraction(c)
            if c == 0:
                continue
            b = _check_element(space, b)
            if b.kind == "psi":
                for e, m in psi_expansion(space, b.mark):
                    acc[e] = acc.get(e, 0) + m * c
            else:
                acc[b] = acc.get(b, 0) + c
        self.space = space
        self._coeffs = {b: c for b, c in acc.items() if c != 0}

    @classmethod
    def _raw(cls, space: SpaceId, coeffs: dict[BasisElement, Fraction]) -> "DivisorClass":
        # trusted constructor: keys already canonical, no zeros
        obj = object.__new__(cls)
        obj.space = space
        obj._coeffs = coeffs
        return obj

    @classmethod
    def zero(cls, space: SpaceId | tuple[int, int]) -> "DivisorClass":
        return cls._raw(_as_space(space), {})

    @classmethod
    def of(cls, space: SpaceId | tuple[int, int], b: BasisElement,
           c: Scalar = 1) -> "DivisorClass":
        return cls(space, {b: c})

    def __getitem__(self, b: BasisElement) -> Fraction:
        return self._coeffs.get(b, Fraction(0))

    def items(self) -> list[tuple[BasisElement, Fraction]]:
        return sorted(self._coeffs.items(), key=lambda kv: kv[0].sort_key())

    def support(self) -> list[BasisElement]:
        return [b for b, _ in self.items()]

    def is_zero(self) -> bool:
        return not self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def _check(self, other: "DivisorClass") -> None:
        if not isinstance(other, DivisorClass):
            raise TypeError(f"cannot combine DivisorClass with {type(other).__name__}")
        if other.space != self.space:
            raise SpaceMismatch(f"{self.space} vs {other.space}")

    def combine(self, s: Scalar, other: "DivisorClass", t: Scalar) -> "DivisorClass":
        """Return ``s*self + t*other``."""
        self._check(other)
        s, t = Fraction(s), Fraction(t)
        acc: dict[BasisElement, Fraction] = {}
        if s:
            acc = {b: s * c for b, c in self._coeffs.items()}
        if t:
            for b, c in other._coeffs.items():
                v = acc.get(b, 0) + t * c
                if v:
                    acc[b] = v
                else:
                    acc.pop(b, None)
        return DivisorClass._raw(self.space, acc)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return self.combine(1, other, 1)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self.combine(1, other, -1)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass._raw(self.space, {b: -c for b, c in self._coeffs.items()})

    def __mul__(self, s: Scalar) -> "DivisorClass":
        if not isinstance(s, (int, Fraction)):
            return NotImplemented
        s = Fraction(s)
        if s == 0:
            return DivisorClass.zero(self.space)
        return DivisorClass._raw(self.space, {b: s * c for b, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, s: Scalar) -> "DivisorClass":
        return self * (1 / Fraction(s))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.space == other.space and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.space, frozenset(self._coeffs.items())))

    def vector(self) -> list[Fraction]:
        """Coordinates in the order of :func:`basis`."""
        pos = basis_position(self.space)
        v = [Fraction(0)] * len(pos)
        for b, c in self._coeffs.items():
            v[pos[b]] = c
        return v

    @classmethod
    def from_vector(cls, space: SpaceId, v: Iterable[Scalar]) -> "DivisorClass":
        return cls(space, zip(basis(space), v))

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"DivisorClass({self.space}, 0)"
        terms = " + ".join(f"{c}*{b}" for b, c in self.items())
        return f"DivisorClass({self.space}, {terms})"


def lincomb(terms: Iterable[tuple[Scalar, DivisorClass]],
            space: SpaceId | None = None) -> DivisorClass:
    """Sum of ``c * d`` over ``terms``; ``space`` is needed only when empty."""
    out: DivisorClass | None = None if space is None else DivisorClass.zero(space)
    for c, d in terms:
        out = d * c if out is None else out.combine(1, d, c)
    if out is None:
        raise ValueError("empty linear combination needs an explicit space")
    return out


def psi_to_omega(space: SpaceId | tuple[int, int],
                 terms: Mapping[BasisElement, Scalar] | Iterable[tuple[BasisElement, Scalar]]
                 ) -> DivisorClass:
    """Ingest a combination that may mention psi classes."""
    return DivisorClass(space, terms)


def omega_to_psi(d: DivisorClass) -> dict[BasisElement, Fraction]:
    """Inverse substitution: rewrite every omega_i as psi_i minus its delta_{0;S} tail.

    The result is a plain mapping since it leaves the canonical basis.
    """
    out: dict[BasisElement, Fraction] = {}
    for b, c in d.items():
        if b.kind != "omega":
            out[b] = out.get(b, 0) + c
            continue
        for e, m in psi_expansion(d.space, b.mark):
            key = psi(b.mark) if e.kind == "omega" else e
            sign = 1 if e.kind == "omega" else -1
            out[key] = out.get(key, 0) + sign * m * c
    return {b: c for b, c in out.items() if c != 0}
