import random
from fractions import Fraction

import pytest

from bicircle.quatpoly import Q_I, Q_J, QPoly, Quaternion, U, V, univariate
from bicircle.realpoly import (
    bivariate_gcd,
    divides,
    factor_real_univariate,
    gcd_with_components,
    monic,
    try_divide,
    univariate_gcd,
)
from bicircle.scalar import sqrt_adjoin


def upoly(*coeffs):
    """Real polynomial in u from ascending coefficients."""
    return univariate(list(coeffs), "u")


# --- exact division ------------------------------------------------------

def test_try_divide_basic():
    a = (U * U + 1) * (V + 2)
    assert try_divide(a, U * U + 1) == V + 2
    assert try_divide(a, V + 2) == U * U + 1
    assert try_divide(a, U + 1) is None
    assert try_divide(QPoly.zero(), U + 1) == QPoly.zero()
    assert divides(U * U + 1, a)
    assert not divides(U + Quaternion(1), U * V + 1)


def test_try_divide_random_products():
    rng = random.Random(3)
    for _ in range(30):
        a = univariate([rng.randrange(-4, 5) for _ in range(3)] + [1], "u")
        b = QPoly({(i, j): Quaternion(rng.randrange(-4, 5))
                   for i in range(2) for j in range(2)}) + U * V
        prod = a * b
        assert try_divide(prod, a) == b
        assert try_divide(prod + 1, a) is None


# --- gcd -----------------------------------------------------------------

def test_univariate_gcd_fixture():
    a = upoly(-1, 0, 1)        # u^2 - 1
    b = upoly(1, 2, 1)         # (u+1)^2
    assert univariate_gcd(a, b, "u") == upoly(1, 1)
    assert univariate_gcd(a, upoly(-2, 0, 2), "u") == upoly(-1, 0, 1)  # monic
    assert univariate_gcd(QPoly.zero(), QPoly.zero(), "u").is_zero()


def test_bivariate_gcd_common_factor():
    g = U * U + 1
    a = g * (V + 2)
    b = g * (V * V + 3)
    assert bivariate_gcd(a, b) == g
    c = (U + V) * (U + V)
    d = (U + V) * (U - V)
    assert bivariate_gcd(c, d) == U + V
    assert bivariate_gcd(a, QPoly.zero()) == monic(a)[0]


def test_bivariate_gcd_coprime():
    assert bivariate_gcd(U * V + 1, U + V) == QPoly.one()
    assert bivariate_gcd(U * U + 1, V * V + 1) == QPoly.one()


def test_bivariate_gcd_random_products():
    rng = random.Random(7)
    for _ in range(20):
        g = U * V + univariate([rng.randrange(1, 5)], "u")
        a = g * (U + rng.randrange(-3, 4))
        b = g * (V + rng.randrange(-3, 4))
        got = bivariate_gcd(a, b)
        assert divides(got, a) and divides(got, b)
        assert divides(monic(g)[0], got) or got == monic(g)[0]


def test_gcd_with_components_fixture():
    q = (U * U + 1) * (QPoly.one() + Q_J) * V
    r = (U * U + 1) * U
    assert gcd_with_components(q, r) == U * U + 1


def test_gcd_with_components_coprime_and_zero():
    assert gcd_with_components(U + Q_I, U * U) == QPoly.one()
    assert gcd_with_components(QPoly.zero(), QPoly.zero()).is_zero()


# --- factorization: exact ------------------------------------------------

def test_factor_u4_plus_1_over_sqrt2():
    p = upoly(1, 0, 0, 0, 1)
    fact = factor_real_univariate(p)
    assert fact.backend == "exact"
    s = sqrt_adjoin(2)
    f1 = U * U - QPoly.constant(s) * U + 1
    f2 = U * U + QPoly.constant(s) * U + 1
    got = fact.all_factors()
    assert len(got) == 2
    assert {0: f1, 1: f2} == {i: f for i, f in enumerate(sorted(
        got, key=lambda f: f.coefficient(1, 0).w.to_float()))}
    assert fact.product() == p


def test_factor_difference_of_squares():
    fact = factor_real_univariate(upoly(-1, 0, 1))
    assert fact.backend == "exact"
    assert sorted(f.constant_coefficient().w.to_float() for f in fact.all_factors()) == [-1.0, 1.0]
    assert fact.product() == upoly(-1, 0, 1)


def test_factor_cubic_with_rational_root():
    p = upoly(1, 1, 1) * upoly(-2, 1)  # (u^2+u+1)(u-2)
    fact = factor_real_univariate(p)
    assert fact.backend == "exact"
    polys = fact.all_factors()
    assert upoly(-2, 1) in polys
    assert upoly(1, 1, 1) in polys
    assert fact.product() == p


def test_factor_scale_and_multiplicity():
    p = upoly(-3, 0, 3)  # 3(u-1)(u+1)
    fact = factor_real_univariate(p)
    assert fact.scale == 3
    assert fact.product() == p
    sq = upoly(1, 2, 1)  # (u+1)^2
    fact2 = factor_real_univariate(sq)
    assert fact2.factors == [(upoly(1, 1), 2)]


def test_factor_zero_roots_peeled():
    p = upoly(0, 1, 0, 1)  # u(u^2+1)
    fact = factor_real_univariate(p)
    assert fact.backend == "exact"
    assert (upoly(0, 1), 1) in fact.factors
    assert (upoly(1, 0, 1), 1) in fact.factors
    assert fact.product() == p


def test_factor_quartic_resolvent_pairs():
    # product of two negative-discriminant quadratics with distinct linear parts
    q1 = upoly(3, 2, 1)   # u^2+2u+3
    q2 = upoly(5, -4, 1)  # u^2-4u+5
    p = q1 * q2
    fact = factor_real_univariate(p)
    assert fact.backend == "exact"
    assert sorted(fact.all_factors(), key=lambda f: f.coefficient(1, 0).w.to_float()) \
        == [q2, q1]
    assert fact.product() == p


def test_factor_biquadratic_all_linear():
    # u^4 - 6u^2 + 1 = product of (u +/- (1+sqrt2))(u +/- (sqrt2-1))
    p = upoly(1, 0, -6, 0, 1)
    fact = factor_real_univariate(p)
    assert fact.backend == "exact"
    assert all(f.degu == 1 for f in fact.all_factors())
    assert len(fact.all_factors()) == 4
    assert fact.product() == p


def test_factor_palindromic_quartic():
    # u^4 + u^3 + u^2 + u + 1 (cyclotomic): splits over sqrt5
    p = upoly(1, 1, 1, 1, 1)
    fact = factor_real_univariate(p)
    assert fact.backend == "exact"
    assert all(f.degu == 2 for f in fact.all_factors())
    assert fact.product() == p


def test_factor_norm_quartets_random():
    # norms of linear quaternion polynomials: the exact shapes the solver feeds in
    rng = random.Random(99)
    for _ in range(40):
        a = QPoly({(1, 0): Quaternion(*(rng.randrange(-3, 4) for _ in range(4))),
                   (0, 0): Quaternion(*(rng.randrange(-3, 4) for _ in range(4)))})
        b = QPoly({(1, 0): Quaternion(*(rng.randrange(-3, 4) for _ in range(4))),
                   (0, 0): Quaternion(*(rng.randrange(-3, 4) for _ in range(4)))})
        p = a.norm_poly() * b.norm_poly()
        if p.is_zero() or p.degu < 4:
            continue
        fact = factor_real_univariate(p)
        assert fact.backend == "exact", p.text()
        assert fact.product() == p


def test_factor_invariants_random():
    rng = random.Random(5)
    for _ in range(30):
        coeffs = [Fraction(rng.randrange(-5, 6)) for _ in range(rng.randrange(2, 5))]
        coeffs.append(Fraction(rng.randrange(1, 4)))
        p = upoly(*coeffs)
        fact = factor_real_univariate(p)
        for f, mult in fact.factors:
            assert mult >= 1
            d = int(f.degu)
            assert d in (1, 2)
            lead = f.coefficient(d, 0).w
            assert lead == 1
            if d == 2 and fact.backend == "exact":
                b, c = f.coefficient(1, 0).w, f.coefficient(0, 0).w
                assert (b * b - 4 * c).sign() < 0
        if fact.backend == "exact":
            assert fact.product() == p


# --- factorization: float fallback ---------------------------------------

def test_factor_cubic_irrational_root_degrades():
    p = upoly(-2, 0, 0, 1)  # u^3 - 2: real root is a cube root
    fact = factor_real_univariate(p)
    assert fact.backend == "float"
    prod = fact.product()
    for ij in set(prod.coeffs) | set(p.coeffs):
        assert abs(prod.coefficient(*ij).w.to_float()
                   - p.coefficient(*ij).w.to_float()) <= 1e-9


def test_factor_float_input():
    p = univariate([0.5, -1.25, 1.0], "u")
    fact = factor_real_univariate(p)
    assert fact.backend == "float"
    prod = fact.product()
    for ij in set(prod.coeffs) | set(p.coeffs):
        assert abs(prod.coefficient(*ij).w.to_float()
                   - p.coefficient(*ij).w.to_float()) <= 1e-9


def test_float_gcds_are_coprime_by_policy():
    a = univariate([1.0, 2.0, 1.0], "u")
    b = univariate([1.0, 1.0], "u")
    assert univariate_gcd(a, b, "u") == QPoly.one()
    assert bivariate_gcd(a, b) == QPoly.one()
