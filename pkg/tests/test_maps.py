from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from modpic.basis import (
    DELTA_IRR, LAMBDA, DivisorClass, SpaceId, basis, canonical_boundary, delta, omega, psi,
)
from modpic.classes import bn_class, weierstrass_class
from modpic.errors import InvalidMark, OutOfRange
from modpic.maps import (
    apply, bubble_pullback, elliptic_tails_pullback, forget, forgetful_pullback,
    genus2_tail_pullback, genus2_tail_pullback_unpointed, relabel, w2,
)
from modpic.theta import ThetaClass
from conftest import classes, spaces


def cls(space, b, c=1):
    return DivisorClass(space, {b: c})


def test_forget_half_genus_coefficient_one():
    for g in (2, 4, 6):
        img = forget(cls((g, 0), delta((g, 0), g // 2, ())))
        assert img == cls((g, 1), delta((g, 1), g // 2, ()))


def test_forget_examples():
    # psi_1 -> psi_1 - delta_{0;{1,2}}, i.e. omega_1 -> omega_1
    img = apply(forgetful_pullback(3, 2, 2), cls((3, 1), psi(1)))
    assert img == DivisorClass((3, 2), {psi(1): 1, delta((3, 2), 0, {1, 2}): -1})
    assert img == cls((3, 2), omega(1))
    img = forget(cls((3, 0), delta((3, 0), 1, ())))
    assert img == DivisorClass((3, 1), {delta((3, 1), 1, ()): 1, delta((3, 1), 2, ()): 1})
    assert len(img) == 2
    assert forget(cls((5, 2), LAMBDA)) == cls((5, 3), LAMBDA)


@settings(max_examples=150)
@given(spaces(max_g=4, max_n=3, min_g=1), st.data())
def test_forget_psi_rule(space, data):
    g, n = space.g, space.n
    if n == 0:
        return
    j = data.draw(st.integers(1, n + 1))
    up = lambda k: k if k < j else k + 1
    for k in range(1, n + 1):
        img = apply(forgetful_pullback(g, n + 1, j), cls(space, psi(k)))
        expect = DivisorClass((g, n + 1), {psi(up(k)): 1, delta((g, n + 1), 0, {up(k), j}): -1})
        assert img == expect


def _insert(d, p, q):
    """Pull back to two more marks whose labels end up p < q."""
    return apply(forgetful_pullback(d.space.g, d.space.n + 2, q),
                 apply(forgetful_pullback(d.space.g, d.space.n + 1, p), d))


def _insert_other_order(d, p, q):
    return apply(forgetful_pullback(d.space.g, d.space.n + 2, p),
                 apply(forgetful_pullback(d.space.g, d.space.n + 1, q - 1), d))


@pytest.mark.parametrize("g,n", [(g, n) for g in range(0, 13) for n in range(0, 4)
                                 if 2 * g - 2 + n > 0 and (g, n) != (0, 3) and g <= 7 or
                                 (g > 7 and n <= 1)])
def test_composition_coherence(g, n):
    for b in basis(SpaceId(g, n)):
        d = cls((g, n), b)
        for q in range(2, n + 3):
            for p in range(1, q):
                assert _insert(d, p, q) == _insert_other_order(d, p, q)


def test_relabel():
    d = cls((0, 5), delta((0, 5), 0, {1, 3}))
    assert relabel(d, {1: 1, 2: 2, 3: 3, 4: 4, 5: 5}) == d
    swap = {1: 2, 2: 1, 3: 3, 4: 4, 5: 5}
    assert relabel(relabel(d, swap), swap) == d
    d = cls((2, 3), delta((2, 3), 0, {1, 3}))
    assert relabel(d, {1: 2, 2: 1, 3: 3}) == cls((2, 3), delta((2, 3), 0, {2, 3}))
    with pytest.raises(InvalidMark):
        relabel(d, {1: 1, 2: 1, 3: 3})


def test_apply_examples():
    assert apply(forgetful_pullback(4, 2, 1), DivisorClass.zero((4, 1))).is_zero()
    assert apply(forgetful_pullback(4, 2, 1), cls((4, 1), LAMBDA)) == cls((4, 2), LAMBDA)
    assert elliptic_tails_pullback(5)(cls((5, 1), DELTA_IRR)).is_zero()


def test_fprime_examples():
    for g in (5, 8):
        assert elliptic_tails_pullback(g)(weierstrass_class(g)).is_zero()
        assert elliptic_tails_pullback(g)(forget(bn_class(g))).is_zero()
    img = elliptic_tails_pullback(4)(cls((4, 1), delta((4, 1), 1, {1})))
    assert img == ThetaClass.basic(4, 1, 1, {1})
    with pytest.raises(OutOfRange):
        elliptic_tails_pullback(2)


def test_fprime_kills_bn_termwise():
    # the coefficient of theta_i is -i(g-i) from delta_i plus i(g-i) from the forgotten pieces
    g = 9
    img = elliptic_tails_pullback(g)(forget(bn_class(g)))
    assert img.is_zero()


def test_w2_normal_form():
    s = (2, 1)
    expect = DivisorClass(s, {omega(1): 3, DELTA_IRR: Fraction(-1, 10), delta(s, 1, ()): Fraction(-6, 5)})
    assert w2() == expect


def test_gprime_examples():
    gp = genus2_tail_pullback(5)
    assert gp(weierstrass_class(5)) == w2()
    assert gp(forget(bn_class(5))) == w2() * 2
    assert gp(cls((5, 1), DELTA_IRR)) == cls((2, 1), DELTA_IRR)
    assert genus2_tail_pullback(5, 1, 1)(forget(bn_class(5))) != w2() * 2


@pytest.mark.parametrize("g", range(4, 12))
def test_gprime_consistent_with_unpointed(g):
    gp, eh = genus2_tail_pullback(g, 1), genus2_tail_pullback_unpointed(g)
    for b in basis(SpaceId(g, 0)):
        d = cls((g, 0), b)
        assert gp(forget(d)) == eh(d)
    for n in (2, 3):
        gpn = genus2_tail_pullback(g, n)
        for b in basis(SpaceId(g, 0)):
            d = cls((g, 0), b)
            e = d
            while e.space.n < n:
                e = forget(e)
            assert gpn(e) == eh(d)


def test_bubble_example():
    img = bubble_pullback(3, 1, 1, 2)(cls((3, 2), delta((3, 2), 1, {1, 2})))
    assert img == cls((3, 1), delta((3, 1), 1, {1}))
    assert delta((3, 1), 1, {1}).boundary == canonical_boundary((3, 1), 1, {1})


@pytest.mark.parametrize("g,n", [(g, n) for g in range(1, 11) for n in range(1, 4)])
def test_bubble_after_forget_is_identity(g, n):
    bub = bubble_pullback(g, n, n, n + 1)
    for j in (n + 1, n):
        fgt = forgetful_pullback(g, n + 1, j)
        for b in basis(SpaceId(g, n)):
            d = cls((g, n), b)
            assert apply(bub, apply(fgt, d)) == d


@pytest.mark.parametrize("g,n", [(1, 2), (2, 3), (3, 2)])
def test_bubble_psi_and_collision(g, n):
    for i in range(1, n + 2):
        for j in range(1, n + 2):
            if i == j:
                continue
            bub = bubble_pullback(g, n, i, j)
            src = SpaceId(g, n + 1)
            # the collision divisor restricts to minus psi of the bubble point
            keep = i - (1 if j < i else 0)
            assert bub(cls(src, delta(src, 0, {i, j}))) == -cls((g, n), psi(keep))
            assert bub(cls(src, psi(i))).is_zero() and bub(cls(src, psi(j))).is_zero()
            for k in range(1, n + 2):
                if k not in (i, j):
                    kk = k - (1 if k > j else 0)
                    assert bub(cls(src, psi(k))) == cls((g, n), psi(kk))


def test_matrix_columns_follow_basis():
    m = forgetful_pullback(3, 2, 1)
    M = m.matrix()
    assert M.shape == (len(basis(SpaceId(3, 2))), len(basis(SpaceId(3, 1))))
    for c, b in enumerate(basis(SpaceId(3, 1))):
        col = [M[r, c] for r in range(M.shape[0])]
        assert col == m(cls((3, 1), b)).vector()


@settings(max_examples=100)
@given(classes(max_g=4, max_n=3))
def test_pullbacks_are_linear(d):
    if d.space.g < 1 or d.space.n < 1:
        return
    g, n = d.space.g, d.space.n
    fgt = forgetful_pullback(g, n + 1, 1)
    assert fgt(d * 3) == fgt(d) * 3
    assert fgt(d + d) == fgt(d) + fgt(d)
