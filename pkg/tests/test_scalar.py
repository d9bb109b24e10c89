import math
import random
from fractions import Fraction

import pytest

from bicircle.errors import (
    DependentRadicands,
    DivisionByZero,
    IncompatibleTowers,
    NegativeRadicand,
    NoExactSquareRoot,
    ParseError,
    TowerDepthExceeded,
)
from bicircle.scalar import (
    EMPTY_TOWER,
    FieldElement,
    FloatScalar,
    FieldTower,
    get_tower,
    parse_scalar,
    sqrt_adjoin,
    squarefree_decompose,
)


def elem(text):
    return parse_scalar(text)


# --- square-free decomposition ------------------------------------------

def test_squarefree_decompose_small():
    assert squarefree_decompose(1) == (1, 1)
    assert squarefree_decompose(2) == (2, 1)
    assert squarefree_decompose(4) == (1, 2)
    assert squarefree_decompose(8) == (2, 2)
    assert squarefree_decompose(12) == (3, 2)
    assert squarefree_decompose(72) == (2, 6)
    assert squarefree_decompose(9991 * 9991) == (1, 9991)


def test_squarefree_decompose_random():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randrange(1, 10**6)
        s, m = squarefree_decompose(n)
        assert s * m * m == n
        assert squarefree_decompose(s)[0] == s


# --- towers --------------------------------------------------------------

def test_tower_rejects_dependent_radicands():
    # 2 * 3 = 6 is a square times 6; the set {2, 3, 6} has subset product 36
    with pytest.raises(DependentRadicands):
        FieldTower((2, 3, 6))


def test_tower_rejects_non_squarefree():
    with pytest.raises(DependentRadicands):
        FieldTower((4,))
    with pytest.raises(DependentRadicands):
        FieldTower((2, 12))


def test_tower_rejects_depth_over_four():
    with pytest.raises(TowerDepthExceeded):
        FieldTower((2, 3, 5, 7, 11))


def test_tower_accepts_independent_sets():
    FieldTower((2, 3, 5, 7))
    FieldTower((2, 6))   # pairwise products 12: not a square
    FieldTower((6, 10))  # 60 is not a square


def test_tower_rejects_triple_product_square():
    # pairwise checks are not enough: every pair of {6, 10, 15} is fine
    # but 6 * 10 * 15 = 30^2
    with pytest.raises(DependentRadicands):
        FieldTower((6, 10, 15))


def test_automerge_small_towers():
    s = sqrt_adjoin(2) + sqrt_adjoin(3)
    assert s.tower.radicands == (2, 3)
    assert s * s == 5 + 2 * sqrt_adjoin(6)


def test_incompatible_towers_past_depth_cap():
    t = get_tower((2, 3, 5, 7))
    a = (sqrt_adjoin(2, t) + sqrt_adjoin(3, t)
         + sqrt_adjoin(5, t) + sqrt_adjoin(7, t))
    with pytest.raises(IncompatibleTowers):
        a + sqrt_adjoin(11)


def test_embedding_into_larger_tower():
    t23 = get_tower((2, 3))
    a = sqrt_adjoin(2, t23)
    b = sqrt_adjoin(3, t23)
    s = a + b
    assert s * s == 5 + 2 * sqrt_adjoin(6, t23)


# --- field arithmetic ----------------------------------------------------

def test_inverse_of_one_plus_sqrt2():
    a = 1 + sqrt_adjoin(2)
    inv = a.inv()
    assert inv == -1 + sqrt_adjoin(2)
    assert a * inv == 1


def test_inverse_random_deep():
    rng = random.Random(42)
    tower = get_tower((2, 3, 5))
    for _ in range(40):
        coords = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 7)) for _ in range(8)]
        a = FieldElement(tower, coords)
        if a.is_zero():
            continue
        assert a * a.inv() == 1
        assert (a / a) == 1


def test_div_by_zero():
    with pytest.raises(DivisionByZero):
        FieldElement.one() / FieldElement.zero()
    with pytest.raises(DivisionByZero):
        FieldElement.zero().inv()


def test_pow():
    a = 1 + sqrt_adjoin(2)
    assert a ** 2 == 3 + 2 * sqrt_adjoin(2)
    assert a ** 0 == 1
    assert a ** -1 == a.inv()
    assert a ** 5 == a * a * a * a * a


def test_canonical_reduction_drops_unused_radicands():
    t = get_tower((2, 3))
    a = FieldElement(t, (Fraction(1), Fraction(2), Fraction(0), Fraction(0)))
    assert a.tower.radicands == (2,)
    assert a == 1 + 2 * sqrt_adjoin(2)
    b = FieldElement(t, (Fraction(5), 0, 0, 0))
    assert b.tower is EMPTY_TOWER
    assert b == 5
    assert hash(b) == hash(Fraction(5))


def test_mixed_int_fraction_ops():
    a = sqrt_adjoin(2)
    assert (a + Fraction(1, 2)) * 2 == 1 + 2 * a
    assert 1 - a == -(a - 1)
    assert (2 / a) == a  # 2/sqrt(2) = sqrt(2)


# --- signs and comparisons ----------------------------------------------

def test_sign_exact():
    r2, r3, r5 = sqrt_adjoin(2), sqrt_adjoin(3), sqrt_adjoin(5)
    t = get_tower((2, 3, 5))
    a = sqrt_adjoin(2, t) + sqrt_adjoin(3, t) - sqrt_adjoin(5, t) * 141 / 100
    # sqrt2 + sqrt3 = 3.1462..., 1.41 * sqrt5 = 3.1529... -> negative
    assert a.sign() == -1
    b = sqrt_adjoin(2, t) + sqrt_adjoin(3, t) - sqrt_adjoin(5, t) * 140 / 100
    assert b.sign() == 1
    assert FieldElement.zero().sign() == 0
    assert (r2 - r2).sign() == 0
    assert r3 > r2
    assert r5 >= r5 and r5 <= r5


def test_sign_close_call():
    # 3363/2378 is a continued-fraction convergent of sqrt(2): the difference
    # is ~9e-8, far below a naive float32-style threshold but exactly signed
    a = sqrt_adjoin(2) - Fraction(3363, 2378)
    assert a.sign() == -1
    assert (-a).sign() == 1


# --- conversion to float -------------------------------------------------

def test_to_float_correctly_rounded():
    assert (1 + sqrt_adjoin(2)).to_float() == 2.414213562373095
    assert sqrt_adjoin(2).to_float() == math.sqrt(2)
    assert sqrt_adjoin(3).to_float() == math.sqrt(3)
    x = (sqrt_adjoin(2, get_tower((2, 3))) * 7 / 3 - sqrt_adjoin(3, get_tower((2, 3))))
    assert abs(x.to_float() - (7 / 3 * math.sqrt(2) - math.sqrt(3))) < 1e-15


# --- square roots --------------------------------------------------------

def test_sqrt_rational_perfect():
    assert sqrt_adjoin(Fraction(9, 4)) == Fraction(3, 2)
    assert sqrt_adjoin(0) == 0
    assert sqrt_adjoin(1) == 1


def test_sqrt_adjoin_new_radical():
    r = sqrt_adjoin(8)
    assert r.tower.radicands == (2,)
    assert r == 2 * sqrt_adjoin(2)
    assert r * r == 8


def test_sqrt_reuses_context():
    t = get_tower((2,))
    r = sqrt_adjoin(Fraction(1, 2), t)
    assert r.tower.radicands == (2,)
    assert r * r == Fraction(1, 2)


def test_sqrt_through_subset_products():
    t = get_tower((2, 3))
    r6 = sqrt_adjoin(6, t)
    # canonical form uses the single radical 6, and matches sqrt2*sqrt3
    assert r6.tower.radicands == (6,)
    assert r6 * r6 == 6
    assert r6 == sqrt_adjoin(2, t) * sqrt_adjoin(3, t)
    t26 = get_tower((2, 6))
    r3 = sqrt_adjoin(3, t26)  # sqrt3 = sqrt2*sqrt6 / 2
    assert r3 * r3 == 3
    assert r3 == sqrt_adjoin(3)


def test_sqrt_of_tower_element_in_same_tower():
    a = 3 + 2 * sqrt_adjoin(2)  # (1 + sqrt2)^2
    r = sqrt_adjoin(a)
    assert r == 1 + sqrt_adjoin(2)


def test_sqrt_of_deep_square():
    t = get_tower((2, 3))
    w = 1 + sqrt_adjoin(2, t) + sqrt_adjoin(3, t)
    a = w * w
    r = sqrt_adjoin(a)
    assert r == w
    assert r * r == a


def test_sqrt_needs_one_new_radical():
    # 9 + 6*sqrt2 = 3 * (1 + sqrt2)^2, so its root needs sqrt3 adjoined
    a = 9 + 6 * sqrt_adjoin(2)
    r = sqrt_adjoin(a)
    assert r * r == a
    assert r.sign() == 1


def test_sqrt_unrepresentable():
    r2 = sqrt_adjoin(2)
    with pytest.raises(NoExactSquareRoot):
        sqrt_adjoin(r2)  # 2^(1/4) is not in any square-root tower
    with pytest.raises(NoExactSquareRoot):
        sqrt_adjoin(2 + r2)  # cyclic quartic field


def test_sqrt_negative():
    with pytest.raises(NegativeRadicand):
        sqrt_adjoin(-2)
    with pytest.raises(NegativeRadicand):
        sqrt_adjoin(1 - sqrt_adjoin(2))


def test_sqrt_random_squares_roundtrip():
    rng = random.Random(3)
    tower = get_tower((2, 5))
    for _ in range(30):
        coords = [Fraction(rng.randrange(-5, 6)) for _ in range(4)]
        w = FieldElement(tower, coords)
        a = w * w
        r = sqrt_adjoin(a)
        assert r * r == a
        if not w.is_zero():
            assert r == (w if w.sign() > 0 else -w)


# --- text form and parsing ----------------------------------------------

def test_text_forms():
    assert FieldElement.zero().text() == "0"
    assert FieldElement.rational(Fraction(-3, 4)).text() == "-3/4"
    assert sqrt_adjoin(2).text() == "sqrt(2)"
    assert (-sqrt_adjoin(2)).text() == "-sqrt(2)"
    assert (2 * sqrt_adjoin(2)).text() == "2*sqrt(2)"
    a = Fraction(1, 2) - Fraction(3, 4) * sqrt_adjoin(2)
    assert a.text() == "1/2 - 3/4*sqrt(2)"


def test_text_roundtrip_random():
    rng = random.Random(11)
    tower = get_tower((2, 3, 7))
    for _ in range(50):
        coords = [Fraction(rng.randrange(-20, 21), rng.randrange(1, 9)) for _ in range(8)]
        a = FieldElement(tower, coords)
        assert parse_scalar(a.text()) == a


def test_parse_sqrt_with_square_part():
    assert parse_scalar("sqrt(8)") == 2 * sqrt_adjoin(2)
    assert parse_scalar("sqrt(4)") == 2
    assert parse_scalar("3 + sqrt(18)") == 3 + 3 * sqrt_adjoin(2)


def test_parse_rejects_garbage():
    for bad in ["", "1 +", "sqrt(-2)", "sqrt(2", "two", "1..5"]:
        with pytest.raises(ParseError):
            parse_scalar(bad)


# --- float backend -------------------------------------------------------

def test_float_scalar_tolerant_eq():
    a = FloatScalar(1.0)
    assert a == FloatScalar(1.0 + 5e-10)
    assert not (a == FloatScalar(1.0 + 5e-9))
    assert a == 1
    assert FloatScalar(math.sqrt(2)) == sqrt_adjoin(2)


def test_float_scalar_arithmetic():
    a = FloatScalar(3.0)
    b = FloatScalar(2.0)
    assert (a / b).value == 1.5
    assert (a - b).sign() == 1
    assert (b - a).sign() == -1
    assert (a * b + 1).value == 7.0
    with pytest.raises(DivisionByZero):
        a / FloatScalar(0.0)


def test_float_scalar_text_roundtrip():
    for v in [0.1, -1 / 3, math.pi, 1e-300, 123456789.123456789]:
        s = FloatScalar(v)
        assert parse_scalar(s.text(), backend="float").value == v


def test_mixed_backend_promotes_to_float():
    a = sqrt_adjoin(2)
    b = FloatScalar(1.0)
    c = b + a
    assert isinstance(c, FloatScalar)
    assert c == 1 + math.sqrt(2)
