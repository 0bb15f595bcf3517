"""Exact real algebraic arithmetic: Sturm counts, root isolation, towers."""

import random
from fractions import Fraction

import pytest
import sympy as sp

from sharpcells.realalg import (
    Num,
    QQ,
    RealAlgebraError,
    RootHandle,
    compare_roots,
    count_roots,
    isolate_roots,
    num_in,
    rational_between,
    root_bound,
    sort_roots,
    squarefree,
    sturm_chain,
)


def upoly(coeffs):
    return [Fraction(c) for c in coeffs]


def handles(field, p):
    return [RootHandle(field, e) for e in isolate_roots(field, p)]


def test_sturm_count_matches_sympy():
    rng = random.Random(3)
    x = sp.Symbol("x")
    for _ in range(20):
        coeffs = [rng.randrange(-5, 6) for _ in range(rng.randrange(2, 7))]
        if all(c == 0 for c in coeffs):
            continue
        p = squarefree(QQ, upoly(coeffs))
        if len(p) < 2:
            continue
        expr = sum(sp.Rational(c.numerator, c.denominator) * x**i
                   for i, c in enumerate(p))
        expected = len(sp.Poly(expr, x).real_roots())
        chain = sturm_chain(QQ, p)
        b = root_bound(QQ, p) + 1
        assert count_roots(QQ, chain, -b, b) == expected


def test_isolate_roots_exact_positions():
    # (x-1)(x-2)(x-3)(x-4)
    p = upoly([24, -50, 35, -10, 1])
    hs = handles(QQ, p)
    assert len(hs) == 4
    for h, want in zip(hs, [1, 2, 3, 4]):
        h.refine_below(Fraction(1, 100))
        assert h.lo <= want <= h.hi


def test_rational_roots_isolated():
    p = upoly([-1, 0, 4])  # 4x^2 - 1
    for h, want in zip(handles(QQ, p), [Fraction(-1, 2), Fraction(1, 2)]):
        h.refine_below(Fraction(1, 10**6))
        assert h.lo <= want <= h.hi


def test_rational_midpoint_does_not_hide_neighbors():
    # 0 shows up as a bisection midpoint; +-1 must still be found
    hs = handles(QQ, upoly([0, 1, 0, -1]))  # x - x^3
    assert len(hs) == 3
    for h, want in zip(hs, [-1, 0, 1]):
        h.refine_below(Fraction(1, 100))
        assert h.lo <= want <= h.hi
    # same shape one degree up: roots 0, +-1, +-2
    hs = handles(QQ, upoly([0, 4, 0, -5, 0, 1]))
    assert len(hs) == 5


def test_compare_and_separate_close_roots():
    # sqrt(2) and a 26-digit rational approximation of it
    a = Fraction(14142135623730950488016887, 10**25)
    r1 = handles(QQ, upoly([-2, 0, 1]))[-1]
    (r2,) = handles(QQ, upoly([-a, 1]))
    assert compare_roots(r1, r2) == 1
    q = rational_between(r2, r1)
    assert a < q and q * q < 2


def test_sort_roots_merges_duplicates():
    a = handles(QQ, upoly([-2, 0, 1]))       # +-sqrt(2)
    b = handles(QQ, upoly([-4, 0, 0, 0, 1]))  # +-sqrt(2) again
    groups = sort_roots(a + b)
    assert len(groups) == 2
    assert all(len(g) == 2 for g in groups)


def test_extension_field_arithmetic():
    r = handles(QQ, upoly([-2, 0, 1]))[-1]
    K = r.as_extension()
    sqrt2 = Num(K, K.gen)
    assert (sqrt2 * sqrt2).as_fraction() == 2
    assert ((sqrt2 + 1) * (sqrt2 - 1)).as_fraction() == 1
    assert sqrt2.sign() == 1 and (-sqrt2).sign() == -1
    lo, hi = sqrt2.approx(50)
    assert lo * lo < 2 < hi * hi
    third = num_in(K, Fraction(1, 3))
    assert (sqrt2 * third * 3 - sqrt2).is_zero()


def test_tower_of_extensions():
    r2 = handles(QQ, upoly([-2, 0, 1]))[-1]
    K = r2.as_extension()
    # x^2 - 3 over K: coefficients [-3, 0, 1] as K payloads
    p3 = [num_in(K, -3).data, K.zero, K.one]
    r3 = handles(K, p3)[-1]
    L = r3.as_extension()
    sqrt2 = num_in(L, Num(K, K.gen))
    sqrt3 = Num(L, L.gen)
    prod = sqrt2 * sqrt3
    assert (prod * prod).as_fraction() == 6
    assert prod.as_fraction() is None
    assert (sqrt3 - sqrt2).sign() == 1


def test_incomparable_towers_rejected():
    r2 = handles(QQ, upoly([-2, 0, 1]))[-1]
    r3 = handles(QQ, upoly([-3, 0, 1]))[-1]
    K2, K3 = r2.as_extension(), r3.as_extension()
    with pytest.raises((RealAlgebraError, TypeError)):
        _ = Num(K2, K2.gen) + Num(K3, K3.gen)


def test_vanishes_and_sign_of():
    r = handles(QQ, upoly([-2, 0, 1]))[-1]
    assert r.vanishes(upoly([-2, 0, 1]))
    assert not r.vanishes(upoly([-1, 1]))
    assert r.sign_of(upoly([-1, 1])) == 1     # sqrt2 - 1 > 0
    assert r.sign_of(upoly([2, -1])) == 1     # 2 - sqrt2 > 0
    assert r.sign_of(upoly([-3, 1])) == -1
