"""One-parameter test families and their intersection numbers.

A family is a tree of components with constant moduli in which a single
special point ``x`` moves over a rational component ``A``; the base of the
family is ``A`` itself.  The total space is modeled as (constant tree) x A with
the moving section the diagonal of A x A, blown up once at each collision of
``x`` with another special point of ``A``.  From this model:

* sigma_x^2 = 2 - #events, a fixed special point of A has sigma^2 = -1, any
  other section has sigma^2 = 0;
* psi_i = -sigma_i^2 for a mark i;
* a collision of x with p creates a node whose far side carries the contents
  beyond x and beyond p (one transverse point of that boundary divisor);
* a persistent node contributes sigma^2 of its two branch sections;
* lambda and delta0 pair to 0 (constant moduli, only separating nodes).

If A has exactly three special points the family is isotrivial and every
pairing vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .basis import (
    DivisorClass, SpaceId, BasisElement, BoundaryIndex, basis, canonical_boundary,
    is_stable_boundary, omega, psi, psi_expansion,
)
from .errors import InvalidFamily, InvalidMark, SpaceMismatch
from .linalg import RationalMatrix
from .theta import ThetaClass, ThetaKey, theta_key

MarkPoint = tuple[str, int]   # ("mark", j) or ("node", edge index)


@dataclass(frozen=True)
class Component:
    genus: int
    marks: frozenset[int]


@dataclass(frozen=True)
class ComponentTree:
    components: tuple[Component, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        k = len(self.components)
        if k == 0 or len(self.edges) != k - 1:
            raise InvalidFamily("a component tree needs exactly #components - 1 edges")
        seen, stack = {0}, [0]
        while stack:
            c = stack.pop()
            for a, b in self.edges:
                for u, v in ((a, b), (b, a)):
                    if u == c and v not in seen:
                        seen.add(v)
                        stack.append(v)
        if len(seen) != k:
            raise InvalidFamily("component graph is not connected")
        all_marks = [m for c in self.components for m in c.marks]
        if sorted(all_marks) != list(range(1, len(all_marks) + 1)):
            raise InvalidFamily("marks must partition 1..n")
        for idx, c in enumerate(self.components):
            if c.genus < 0:
                raise InvalidFamily("negative genus")
            if 2 * c.genus - 2 + len(c.marks) + self.valence(idx) <= 0:
                raise InvalidFamily(f"component {idx} is unstable")

    @classmethod
    def build(cls, components: Iterable[tuple[int, Iterable[int]]],
              edges: Iterable[tuple[int, int]] = ()) -> "ComponentTree":
        return cls(tuple(Component(g, frozenset(m)) for g, m in components),
                   tuple(tuple(e) for e in edges))

    def valence(self, c: int) -> int:
        return sum((a == c) + (b == c) for a, b in self.edges)

    @property
    def space(self) -> SpaceId:
        return SpaceId(sum(c.genus for c in self.components),
                       sum(len(c.marks) for c in self.components))

    def special_points(self, c: int) -> list[MarkPoint]:
        pts = [("mark", m) for m in sorted(self.components[c].marks)]
        pts += [("node", e) for e, (a, b) in enumerate(self.edges) if c in (a, b)]
        return pts

    def far_side(self, c: int, e: int) -> tuple[int, frozenset[int]]:
        """Genus and marks of the subtree across edge e, seen from component c."""
        a, b = self.edges[e]
        start = b if a == c else a
        seen, stack = {c, start}, [start]
        genus, marks = 0, set()
        while stack:
            u = stack.pop()
            genus += self.components[u].genus
            marks |= self.components[u].marks
            for t, (p, q) in enumerate(self.edges):
                if t == e:
                    continue
                for v, w in ((p, q), (q, p)):
                    if v == u and w not in seen:
                        seen.add(w)
                        stack.append(w)
        return genus, frozenset(marks)

    def content(self, c: int, point: MarkPoint) -> tuple[int, frozenset[int]]:
        kind, idx = point
        return (0, frozenset({idx})) if kind == "mark" else self.far_side(c, idx)


@dataclass(frozen=True)
class TestFamily:
    tree: ComponentTree
    base: int
    moving: MarkPoint

    __test__ = False  # not a pytest class

    def __post_init__(self) -> None:
        if not 0 <= self.base < len(self.tree.components):
            raise InvalidFamily("base component out of range")
        if self.tree.components[self.base].genus != 0:
            raise InvalidFamily("the base component must be rational")
        if self.moving not in self.tree.special_points(self.base):
            raise InvalidFamily(f"moving point {self.moving} is not on the base component")

    @property
    def space(self) -> SpaceId:
        return self.tree.space

    @cached_property
    def degrees(self) -> dict[BasisElement, int]:
        return _degrees(self)

    def boundary_degrees(self) -> dict[BoundaryIndex, int]:
        return {b.boundary: v for b, v in self.degrees.items() if b.kind == "delta"}


def _degrees(f: TestFamily) -> dict[BasisElement, int]:
    """Nonzero intersection numbers of ``f`` with boundary, psi and omega classes."""
    tree, A, space = f.tree, f.base, f.tree.space
    pts = tree.special_points(A)
    out: dict[BasisElement, int] = {}
    if len(pts) == 3:
        return out

    def bump(b: BasisElement, v: int) -> None:
        if v:
            out[b] = out.get(b, 0) + v
            if not out[b]:
                del out[b]

    def bdry(genus: int, marks: frozenset[int]) -> BasisElement | None:
        if not is_stable_boundary(space, genus, marks):
            return None
        return BasisElement("delta", boundary=canonical_boundary(space, genus, marks))

    sq = {p: -1 for p in pts}
    sq[f.moving] = 2 - (len(pts) - 1)
    gx, mx = tree.content(A, f.moving)
    for p in pts:
        if p == f.moving:
            continue
        gp, mp = tree.content(A, p)
        b = bdry(gx + gp, mx | mp)
        if b is None:
            raise InvalidFamily(f"event {f.moving} meets {p} has unstable type")
        bump(b, 1)
    for e, (a, c) in enumerate(tree.edges):
        if A not in (a, c):
            continue
        genus, marks = tree.far_side(A, e)
        b = bdry(genus, marks)
        bump(b, sq[("node", e)])
    for p in pts:
        if p[0] == "mark":
            bump(psi(p[1]), -sq[p])
    if space.g >= 1:
        for i in range(1, space.n + 1):
            v = out.get(psi(i), 0)
            for e, m in psi_expansion(space, i):
                if e.kind == "delta":
                    v -= m * out.get(e, 0)
            bump(omega(i), v)
    return out


def intersect(f: TestFamily, b: BasisElement) -> int:
    """Intersection number of the family with one basis element (psi allowed)."""
    if b.kind == "delta":
        b = BasisElement("delta", boundary=canonical_boundary(f.space, b.boundary.genus,
                                                              b.boundary.marks))
    elif b.kind in ("omega", "psi") and not 1 <= b.mark <= f.space.n:
        raise InvalidMark(f"{b} not on {f.space}")
    return f.degrees.get(b, 0)


def pair(f: TestFamily, d: DivisorClass) -> Fraction:
    if d.space != f.space:
        raise SpaceMismatch(f"family on {f.space}, class on {d.space}")
    deg = f.degrees
    return sum((c * deg.get(b, 0) for b, c in d.items()), Fraction(0))


def pairing_matrix(fams: Sequence[TestFamily], classes: Sequence[DivisorClass]) -> RationalMatrix:
    spaces = {f.space for f in fams} | {d.space for d in classes}
    if len(spaces) > 1:
        raise SpaceMismatch(f"mixed spaces {sorted(spaces)}")
    return RationalMatrix([[pair(f, d) for d in classes] for f in fams], ncols=len(classes))


# -- constructors -----------------------------------------------------------

def fiber_family(m: int, k: int) -> TestFamily:
    """Fiber of the projection forgetting mark k of M_{0,m}."""
    if m < 4:
        raise InvalidMark(f"M_0,{m} has one-point fibers")
    if not 1 <= k <= m:
        raise InvalidMark(f"no mark {k} on M_0,{m}")
    tree = ComponentTree.build([(0, range(1, m + 1))])
    return TestFamily(tree, 0, ("mark", k))


def two_component_family(tree: ComponentTree, moving: int) -> TestFamily:
    """Move mark ``moving`` over its (rational) component of a two-component tree."""
    if len(tree.components) != 2:
        raise InvalidFamily("expected exactly two components")
    for c, comp in enumerate(tree.components):
        if moving in comp.marks:
            if comp.genus != 0:
                raise InvalidFamily("moving mark must lie on a rational component")
            return TestFamily(tree, c, ("mark", moving))
    raise InvalidFamily(f"mark {moving} not found")


def attach_family(S: Iterable[int], fixed_side: tuple[int, Iterable[int]]) -> TestFamily:
    """Rational component with marks S glued at a moving point to a fixed curve."""
    S = frozenset(S)
    if len(S) < 2:
        raise InvalidFamily("the rational bubble needs at least two marks")
    h, marks = fixed_side
    tree = ComponentTree.build([(0, S), (h, marks)], [(0, 1)])
    return TestFamily(tree, 0, ("node", 0))


# -- elliptic tails ---------------------------------------------------------

def elliptic_tails_forward(f: TestFamily, g: int) -> TestFamily:
    """Image of a family on M_{0,g+n} in M_{g,n}: tail marks 1..g become elliptic tails."""
    space = f.space
    if space.g != 0 or space.n < g:
        raise SpaceMismatch(f"{space} is not M_0,g+n for g={g}")
    comps = [(c.genus, {m - g for m in c.marks if m > g}) for c in f.tree.components]
    edges = list(f.tree.edges)
    moving = f.moving
    for c, comp in enumerate(f.tree.components):
        for t in sorted(comp.marks):
            if t > g:
                continue
            comps.append((1, set()))
            edges.append((c, len(comps) - 1))
            if f.moving == ("mark", t):
                moving = ("node", len(edges) - 1)
    if moving[0] == "mark":
        moving = ("mark", moving[1] - g)
    return TestFamily(ComponentTree.build(comps, edges), f.base, moving)


def forward_pair(f: TestFamily, d: DivisorClass) -> Fraction:
    """Degree of d on the image of f under the elliptic-tails map."""
    g = d.space.g
    if f.space != SpaceId(0, g + d.space.n):
        raise SpaceMismatch(f"family on {f.space} cannot be sent to {d.space}")
    return pair(elliptic_tails_forward(f, g), d)


def theta_degree(f: TestFamily, g: int, n: int, key: ThetaKey, shift: int | None = None) -> int:
    """Degree of f on theta_{i;S}, summed from f's boundary degrees.

    ``shift`` is the offset applied to S (g by default).
    """
    shift = g if shift is None else shift
    i, S = key
    Sp = frozenset(s + shift for s in S)
    m = f.space.n
    total = 0
    for idx, v in f.boundary_degrees().items():
        U = idx.marks
        count = 0
        for V in (U, frozenset(range(1, m + 1)) - U):
            if not Sp <= V:
                continue
            must = V - Sp
            if not must <= frozenset(range(1, g + 1)):
                continue
            free = len(V & Sp & frozenset(range(1, g + 1)))
            need = i - len(must)
            if 0 <= need <= free:
                count += comb(free, need)
        total += v * count
    return total


def theta_pair(f: TestFamily, t: ThetaClass) -> Fraction:
    return sum((c * theta_degree(f, t.g, t.n, k) for k, c in t.items()), Fraction(0))


def theta_catalog(g: int, n: int, node_moving: bool = False) -> list[TestFamily]:
    """Standard catalog on M_{0,g+n}, up to permutations of the tail marks 1..g.

    Fibers of every projection and every two-component family moving one mark
    (tail or real) on a rational side.  Isotrivial families are omitted.
    """
    m = g + n
    reals = list(range(g + 1, m + 1))
    fams = [fiber_family(m, 1)] + [fiber_family(m, r) for r in reals]
    for a in range(g + 1):
        tails_a = list(range(1, a + 1))
        tails_b = list(range(a + 1, g + 1))
        for k in range(n + 1):
            for RA in combinations(reals, k):
                RB = [r for r in reals if r not in RA]
                A = tails_a + list(RA)
                B = tails_b + RB
                if len(A) + 1 < 4 or len(B) + 1 < 3:
                    continue
                tree = ComponentTree.build([(0, A), (0, B)], [(0, 1)])
                movers = ([1] if a else []) + list(RA)
                fams += [two_component_family(tree, x) for x in movers]
                if node_moving:
                    fams.append(TestFamily(tree, 0, ("node", 0)))
    return fams
