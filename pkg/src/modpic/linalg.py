"""Exact rational matrices with fraction-free elimination."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Number = int | Fraction


def _integer_row(row: Sequence[Number]) -> list[int]:
    """Scale a rational row to a primitive integer row (same span)."""
    den = reduce(lcm, (Fraction(x).denominator for x in row), 1)
    ints = [int(Fraction(x) * den) for x in row]
    return _primitive(ints)


def _primitive(v: list[int]) -> list[int]:
    g = reduce(gcd, v, 0)
    return [x // g for x in v] if g > 1 else v


class RationalMatrix:
    """Dense exact-rational matrix.  Rows are lists of Fractions."""

    def __init__(self, rows: Iterable[Sequence[Number]], ncols: int | None = None):
        self.rows = [[Fraction(x) for x in r] for r in rows]
        if ncols is None:
            if not self.rows:
                raise ValueError("an empty matrix needs ncols")
            ncols = len(self.rows[0])
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @classmethod
    def identity(cls, k: int) -> "RationalMatrix":
        return cls([[int(r == c) for c in range(k)] for r in range(k)], ncols=k)

    @classmethod
    def zeros(cls, r: int, c: int) -> "RationalMatrix":
        return cls([[0] * c for _ in range(r)], ncols=c)

    def __getitem__(self, rc: tuple[int, int]) -> Fraction:
        return self.rows[rc[0]][rc[1]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        return RationalMatrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows],
            ncols=other.ncols)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix([list(c) for c in zip(*self.rows)] if self.rows else [],
                              ncols=self.nrows)

    def stack(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.ncols != self.ncols:
            raise ValueError("column mismatch in stack")
        return RationalMatrix(self.rows + other.rows, ncols=self.ncols)

    def echelon(self) -> tuple[list[list[int]], list[int]]:
        """Reduced echelon form over Z via fraction-free elimination.

        Returns integer rows (one per pivot) and pivot columns.  Each pivot row
        vanishes in every other pivot column; rows are primitive with positive
        pivots, so the result is unique and independent of the input row order.
        """
        work = [_integer_row(r) for r in self.rows if any(r)]
        pivots: list[int] = []
        done: list[list[int]] = []
        col = 0
        while work and col < self.ncols:
            k = next((t for t, r in enumerate(work) if r[col]), None)
            if k is None:
                col += 1
                continue
            piv = work.pop(k)
            if piv[col] < 0:
                piv = [-x for x in piv]
            p = piv[col]
            nxt = []
            for r in work:
                if r[col]:
                    r = _primitive([p * a - r[col] * b for a, b in zip(r, piv)])
                if any(r):
                    nxt.append(r)
            work = nxt
            for t, r in enumerate(done):
                if r[col]:
                    r = _primitive([p * a - r[col] * b for a, b in zip(r, piv)])
                    if r[pivots[t]] < 0:
                        r = [-x for x in r]
                    done[t] = r
            done.append(piv)
            pivots.append(col)
            col += 1
        return done, pivots

    def rank(self) -> int:
        return len(self.echelon()[1])

    def kernel(self) -> list[list[int]]:
        """Basis of the right null space as primitive integer vectors.

        One vector per free column, in increasing column order, with a positive
        entry in its own free column.
        """
        rows, pivots = self.echelon()
        pivset = set(pivots)
        basis = []
        for f in range(self.ncols):
            if f in pivset:
                continue
            L = reduce(lcm, (r[pc] for r, pc in zip(rows, pivots) if r[f]), 1)
            v = [0] * self.ncols
            v[f] = L
            for r, pc in zip(rows, pivots):
                if r[f]:
                    v[pc] = -L * r[f] // r[pc]
            basis.append(_primitive(v))
        return basis

    def nullity(self) -> int:
        return self.ncols - self.rank()

    def __repr__(self) -> str:
        return f"RationalMatrix({self.nrows}x{self.ncols})"


def rank(m: RationalMatrix) -> int:
    return m.rank()


def kernel(m: RationalMatrix) -> list[list[int]]:
    return m.kernel()


def span_rank(vectors: Sequence[Sequence[Number]], ncols: int) -> int:
    return RationalMatrix(vectors, ncols=ncols).rank()


def in_span(v: Sequence[Number], vectors: Sequence[Sequence[Number]]) -> bool:
    ncols = len(v)
    return span_rank(list(vectors) + [v], ncols) == span_rank(vectors, ncols)


def annihilator(vectors: Sequence[Sequence[Number]], ncols: int) -> list[list[int]]:
    """Integer functionals vanishing on the span of ``vectors``."""
    return RationalMatrix(vectors, ncols=ncols).kernel()
