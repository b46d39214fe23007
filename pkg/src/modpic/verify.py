"""Batch verification suites and their reports."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Iterable

from .basis import DivisorClass, SpaceId, basis, delta, omega
from .bnspace import bn_space_general, bn_space_n1, showtriv_propagate, theta_rank_certificate
from .classes import bn_class, weierstrass_class
from .counting import (
    a13_closed_form, a_count, elliptic_tail_feasible, even_genus_pair_check,
    odd_genus_pair_check, pencil_residual_ramification, plucker_total, RamificationSeq,
    SeriesParams,
)
from .families import (
    attach_family, fiber_family, forward_pair, intersect, theta_catalog, theta_degree,
    theta_pair,
)
from .linalg import in_span
from .maps import (
    apply, bubble_pullback, elliptic_tails_pullback, forget, forgetful_pullback,
    genus2_tail_pullback, genus2_tail_pullback_unpointed, w2,
)
from .theta import theta_key

NOTES = {
    "g2_sign": "g'^*(delta_{g-2}) = -omega (sign fixed by g'^* o pi^* = g^*)",
    "theta_range": "theta indices run over 1..g-2; theta_{g-1} would be unstable",
    "theta_shift": "theta_{i;S} shifts S by g (marks of M_{g,n} sit after the g tail points)",
    "tail_genus": "the fixed curve of the second map has genus g-2",
    "delta_i_on_Mg1": "on M_{g,1}, delta_i has the mark on its genus-i side",
    "gprime_condition": "g'^*D is required to lie in span(W_2), not to vanish",
    "theta_n2_columns": "n=2 certificate uses every merged theta_{i;S}; one relation among them exists",
}


@dataclass
class CheckReport:
    check: str
    params: dict[str, Any]
    expected: Any
    computed: Any
    passed: bool
    notes: list[str] = field(default_factory=list)
    elapsed: float | None = None

    def to_json(self, timing: bool = False) -> str:
        doc = {
            "check": self.check,
            "params": self.params,
            "expected": self.expected,
            "computed": self.computed,
            "pass": self.passed,
            "notes": self.notes,
        }
        if timing and self.elapsed is not None:
            doc["elapsed"] = round(self.elapsed, 4)
        return json.dumps(doc, separators=(",", ":"), default=str)

    def to_text(self, timing: bool = False) -> str:
        status = "PASS" if self.passed else "FAIL"
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        line = f"{status} {self.check} [{params}] expected={self.expected} computed={self.computed}"
        if timing and self.elapsed is not None:
            line += f" ({self.elapsed:.3f}s)"
        return line


def _report(check: str, params: dict, expected: Any, computed: Any,
            notes: Iterable[str] = (), passed: bool | None = None) -> CheckReport:
    ok = expected == computed if passed is None else passed
    return CheckReport(check, params, expected, computed, ok, [NOTES[n] for n in notes])


def _sign_name(sign: int) -> str:
    return "minus" if sign == -1 else "plus"


# -- individual checks (top level so they can run in worker processes) ------

def check_fprime_w(g: int) -> CheckReport:
    img = elliptic_tails_pullback(g)(weierstrass_class(g))
    return _report("fprime*W=0", {"g": g}, "0", "0" if img.is_zero() else repr(img),
                   ["delta_i_on_Mg1", "theta_range"])


def check_fprime_bn(g: int) -> CheckReport:
    img = elliptic_tails_pullback(g)(forget(bn_class(g)))
    return _report("fprime*piBN=0", {"g": g}, "0", "0" if img.is_zero() else repr(img),
                   ["delta_i_on_Mg1"])


def check_gprime_w(g: int, sign: int = -1) -> CheckReport:
    img = genus2_tail_pullback(g, 1, sign)(weierstrass_class(g))
    return _report("gprime*W=W2", {"g": g, "g2_sign": _sign_name(sign)}, True, img == w2(),
                   ["g2_sign", "tail_genus"])


def check_gprime_bn(g: int, sign: int = -1) -> CheckReport:
    img = genus2_tail_pullback(g, 1, sign)(forget(bn_class(g)))
    exact = img == w2() * Fraction(2 * (g - 2), 3)
    member = in_span(img.vector(), [w2().vector()])
    return _report("gprime*piBN in span(W2)", {"g": g, "g2_sign": _sign_name(sign)},
                   {"in_span": True, "equals_2(g-2)/3_W2": True},
                   {"in_span": member, "equals_2(g-2)/3_W2": exact}, ["g2_sign"])


def check_gprime_unpointed(g: int) -> CheckReport:
    gp, eh = genus2_tail_pullback(g, 1), genus2_tail_pullback_unpointed(g)
    ok = all(gp(forget(DivisorClass.of((g, 0), b))) == eh.table[b] for b in basis(SpaceId(g, 0)))
    return _report("gprime o pi* = g*", {"g": g}, True, ok, ["g2_sign"])


def check_bubble_identities(g: int, n: int) -> CheckReport:
    bub = bubble_pullback(g, n, n, n + 1)
    ok = True
    for j in (n + 1, n):
        fgt = forgetful_pullback(g, n + 1, j)
        for b in basis(SpaceId(g, n)):
            d = DivisorClass.of((g, n), b)
            ok = ok and apply(bub, apply(fgt, d)) == d
    return _report("bubble o forget = id", {"g": g, "n": n}, True, ok)


def check_kernel_n1(g: int, sign: int = -1) -> CheckReport:
    bn = bn_space_n1(g, sign)
    cert = theta_rank_certificate(g, 1)
    computed = {"dimension": bn.dimension, "checks_pass": all(bn.checks.values()),
                "theta_rank": cert.rank, "verified": bn.passed and cert.passed}
    expected = {"dimension": 2, "checks_pass": True, "theta_rank": g - 2, "verified": True}
    return _report("bn_space_n1", {"g": g, "g2_sign": _sign_name(sign)}, expected, computed,
                   ["g2_sign", "gprime_condition", "theta_range"])


def check_theta_rank(g: int, n: int, columns: str = "all") -> CheckReport:
    cert = theta_rank_certificate(g, n, columns)
    notes = ["theta_shift"] + (["theta_n2_columns"] if n == 2 and columns == "all" else [])
    return _report("theta_rank", {"g": g, "n": n, "columns": columns},
                   cert.expected, cert.rank, notes)


def check_subspace_dim(g: int, n: int, sign: int = -1) -> CheckReport:
    bs = bn_space_general(g, n, sign)
    computed = {"dimension": bs.dimension, **bs.checks}
    expected = {"dimension": bs.expected, **{k: True for k in bs.checks}}
    return _report("bn_space_general", {"g": g, "n": n, "g2_sign": _sign_name(sign)},
                   expected, computed, ["g2_sign", "gprime_condition", "tail_genus"])


def check_pair_coeff(g: int) -> CheckReport:
    if g % 2:
        lhs, rhs, nz = odd_genus_pair_check(g)
        return _report("pair_coeff_odd", {"g": g}, True, nz and lhs != rhs)
    lhs, rhs, diff, nz = even_genus_pair_check(g)
    return _report("pair_coeff_even", {"g": g}, True, nz)


def check_counts_fixed() -> CheckReport:
    expected = {"A(5,1,3)": 120, "A(4,2,3)": 96, "A(4,3,2)": 36, "A(4,1,2)": 24,
                "A(4,1,4)": 60, "lhs-rhs(g=4)": 48}
    computed = {"A(5,1,3)": a_count(5, 1, 3), "A(4,2,3)": a_count(4, 2, 3),
                "A(4,3,2)": a_count(4, 3, 2), "A(4,1,2)": a_count(4, 1, 2),
                "A(4,1,4)": a_count(4, 1, 4), "lhs-rhs(g=4)": even_genus_pair_check(4)[2]}
    return _report("a_count_values", {}, expected, computed)


def check_counts_genus(g: int) -> CheckReport:
    if g % 2:
        lhs, rhs, nz = odd_genus_pair_check(g)
        computed = {"A(g,1,3)=24C(g,(g+3)/2)": a_count(g, 1, 3) == a13_closed_form(g),
                    "nonzero": nz}
        return _report("counts_odd", {"g": g}, {k: True for k in computed}, computed)
    lhs, rhs, diff, nz = even_genus_pair_check(g)
    return _report("counts_even", {"g": g}, True, nz)


def check_plucker(g: int) -> CheckReport:
    ok = True
    for r in range(1, 21):
        for d in range(1, 21):
            ok &= (r + 1) * (2 * d + r * (g - 2)) - (r + 1) * (d - r) == plucker_total(g, r, d)
            ok &= (r + 1) * (d - r) - g * r == g - (r + 1) * (g - d + r)
    for r in range(1, 5):
        for d in range(1, 4 * g + 6):
            p = SeriesParams(g, r, d)
            a = p.slack
            if abs(a) > 5 or a + 1 < 0 or a + 1 > d - r:
                continue
            # put all a+1 conditions on the top entry of a single sequence
            Z = RamificationSeq((0,) * r + (a + 1,))
            ok &= elliptic_tail_feasible(p, [Z]) == (False, -1)
    if g % 2 and g >= 3:
        ok &= pencil_residual_ramification(g) == 3 * g
    return _report("plucker_identities", {"g": g}, True, ok)


def check_attach_goldens(g: int, k: int) -> CheckReport:
    n = k + 1
    S = frozenset(range(1, k + 1))
    space = SpaceId(g, n)
    fam = attach_family(S, (g, {n}))
    computed = {"delta_S": intersect(fam, delta(space, 0, S)),
                "removed_rows": sorted({intersect(fam, delta(space, 0, S - {x}))
                                        for x in S} if k >= 3 else []),
                "omega_S": sorted({intersect(fam, omega(i)) for i in S})}
    expected = {"delta_S": 2 - k, "removed_rows": [1] if k >= 3 else [], "omega_S": [0]}
    return _report("attach_family", {"g": g, "card_S": k}, expected, computed)


def check_fiber_theta1(g: int) -> CheckReport:
    f = fiber_family(g + 1, g + 1)
    return _report("fiber_theta1", {"g": g}, g, theta_degree(f, g, 1, theta_key(g, 1, 1, {1})))


def check_cross_oracle(g: int) -> CheckReport:
    fp = elliptic_tails_pullback(g)
    bad = 0
    fams = theta_catalog(g, 1, node_moving=True)
    for f in fams:
        for b in basis(SpaceId(g, 1)):
            if forward_pair(f, DivisorClass.of((g, 1), b)) != theta_pair(f, fp.table[b]):
                bad += 1
    return _report("forward_pair=theta_pair(fprime)", {"g": g, "families": len(fams)}, 0, bad,
                   ["delta_i_on_Mg1"])


def check_showtriv() -> CheckReport:
    fs = frozenset
    ex1 = showtriv_propagate(3, {fs({1, 2}): 1, fs({1, 3}): 1, fs({2, 3}): 1})[fs({1, 2, 3})]
    zero = showtriv_propagate(4, {})
    ind = showtriv_propagate(4, {fs({1, 2}): 1})
    computed = {"n3_all_ones": ex1, "n4_zero": all(v == 0 for v in zero.values()),
                "n4_indicator": [ind[fs({1, 2, 3})], ind[fs({1, 3, 4})], ind[fs({1, 2, 3, 4})]]}
    expected = {"n3_all_ones": 3, "n4_zero": True, "n4_indicator": [1, 0, 1]}
    return _report("showtriv_propagate", {}, expected, computed)


# -- suites -----------------------------------------------------------------

Cell = tuple[Callable[..., CheckReport], tuple]


def _clip(rng: range | None, default: range) -> range:
    return default if rng is None else rng


def _intersect_range(rng: range | None, lo: int, hi: int) -> range:
    r = rng if rng is not None else range(lo, hi + 1)
    return range(max(r.start, lo), min(r.stop, hi + 1))


def suite_cells(suite: str, g: range | None = None, n: range | None = None,
                sign: int = -1) -> list[Cell]:
    cells: list[Cell] = []
    if suite in ("map-identities", "all"):
        for gg in _intersect_range(g, 3, 40):
            cells += [(check_fprime_w, (gg,)), (check_fprime_bn, (gg,))]
        for gg in _intersect_range(g, 4, 40):
            cells += [(check_gprime_w, (gg, sign)), (check_gprime_bn, (gg, sign)),
                      (check_gprime_unpointed, (gg,))]
        for gg in _intersect_range(g, 1, 10):
            for nn in _intersect_range(n, 1, 4):
                cells.append((check_bubble_identities, (gg, nn)))
    if suite in ("kernel-n1", "all"):
        cells += [(check_kernel_n1, (gg, sign)) for gg in _intersect_range(g, 4, 30)]
    if suite in ("theta-rank", "all"):
        ns = _clip(n, range(1, 3))
        if 1 in ns:
            cells += [(check_theta_rank, (gg, 1)) for gg in _intersect_range(g, 4, 30)]
        if 2 in ns:
            for gg in _intersect_range(g, 4, 15):
                cells += [(check_theta_rank, (gg, 2, "all")), (check_theta_rank, (gg, 2, "marked1"))]
    if suite in ("subspace-dim", "all"):
        ns = _clip(n, range(2, 4))
        if 2 in ns:
            cells += [(check_subspace_dim, (gg, 2, sign)) for gg in _intersect_range(g, 4, 15)]
        if 3 in ns:
            cells += [(check_subspace_dim, (gg, 3, sign)) for gg in _intersect_range(g, 4, 10)]
    if suite in ("pair-coeff", "all"):
        cells += [(check_pair_coeff, (gg,)) for gg in _intersect_range(g, 3, 41)]
    if suite in ("counts", "all"):
        cells.append((check_counts_fixed, ()))
        cells += [(check_counts_genus, (gg,)) for gg in _intersect_range(g, 3, 41)]
    if suite in ("plucker", "all"):
        cells += [(check_plucker, (gg,)) for gg in _intersect_range(g, 0, 40)]
    if suite in ("engine-goldens", "all"):
        for gg in _intersect_range(g, 1, 10):
            cells += [(check_attach_goldens, (gg, k)) for k in range(2, 7)]
        cells += [(check_fiber_theta1, (gg,)) for gg in _intersect_range(g, 3, 40)]
        cells += [(check_cross_oracle, (gg,)) for gg in _intersect_range(g, 3, 12)]
        cells.append((check_showtriv, ()))
    return cells


SUITES = ("kernel-n1", "theta-rank", "subspace-dim", "pair-coeff", "counts", "plucker",
          "engine-goldens", "map-identities", "all")


def _run_cell(cell: Cell) -> CheckReport:
    fn, args = cell
    t0 = time.perf_counter()
    rep = fn(*args)
    rep.elapsed = time.perf_counter() - t0
    return rep


def run_suite(suite: str, g: range | None = None, n: range | None = None, sign: int = -1,
              jobs: int = 1) -> list[CheckReport]:
    """Run a suite; reports come back in canonical cell order regardless of ``jobs``."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    cells = suite_cells(suite, g, n, sign)
    if jobs <= 1 or len(cells) < 2:
        return [_run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_cell, cells))
