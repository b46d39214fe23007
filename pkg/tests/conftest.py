from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import strategies as st

from modpic.basis import DivisorClass, SpaceId, basis, delta
from modpic.linalg import RationalMatrix

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"{criterion} {'PASS' if ok else 'FAIL'} {detail}")


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: (int(s[1:].split("_")[0].rstrip("ab")), s)):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'}  {detail}")


# -- strategies ---------------------------------------------------------------

def spaces(max_g: int = 5, max_n: int = 4, min_g: int = 0):
    def ok(gn):
        g, n = gn
        return 2 * g - 2 + n > 0 and (g, n) != (0, 3)
    return st.tuples(st.integers(min_g, max_g), st.integers(0, max_n)).filter(ok).map(
        lambda gn: SpaceId(*gn))


rationals = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 12))


@st.composite
def classes(draw, space=None, max_g: int = 5, max_n: int = 4):
    space = space if space is not None else draw(spaces(max_g, max_n))
    B = basis(space)
    picks = draw(st.lists(st.sampled_from(B), max_size=6))
    return DivisorClass(space, {b: draw(rationals) for b in picks})


# -- Keel presentation of Pic(M_{0,m}), an oracle independent of the family engine

def keel_relations(m: int) -> list[list[Fraction]]:
    """Four-point relations: the three boundary sums separating a 4-tuple agree."""
    space = SpaceId(0, m)
    subsets = [frozenset(S) for k in range(2, m - 1) for S in combinations(range(1, m + 1), k)]

    def side(a, b, c, d):
        acc: dict = {}
        for S in subsets:
            if a in S and b in S and c not in S and d not in S:
                e = delta(space, 0, S)
                acc[e] = acc.get(e, 0) + 1
        return DivisorClass(space, acc)

    rows = []
    for a, b, c, d in combinations(range(1, m + 1), 4):
        ab, ac, ad = side(a, b, c, d), side(a, c, b, d), side(a, d, b, c)
        rows += [(ab - ac).vector(), (ab - ad).vector()]
    return rows


def keel_rank(m: int, vectors: list[list[Fraction]]) -> int:
    """Rank of the given boundary vectors in Pic(M_{0,m})."""
    rel = keel_relations(m)
    ncols = len(basis(SpaceId(0, m)))
    base = RationalMatrix(rel, ncols).rank()
    return RationalMatrix(rel + list(vectors), ncols).rank() - base
