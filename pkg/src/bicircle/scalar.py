"""Exact arithmetic in square-root towers over the rationals, plus a float twin.

An exact scalar is an element of Q(sqrt(d1), ..., sqrt(dk)) where the d_i are
distinct square-free integers >= 2 that are multiplicatively independent modulo
squares, and k <= 4.  Elements are stored as 2^k rational coordinates over the
basis of square roots of subset products, so equality is structural and every
field operation is closed.  Sign queries are decided exactly by refining
rational interval enclosures of the radicals; conversion to float goes through
a 128-bit enclosure and is correct to one ulp.

``FloatScalar`` is the approximate twin used when a computation leaves every
representable tower: plain binary64 with a comparison tolerance of 1e-9 (and a
tighter structural-zero threshold used when normalizing polynomials).  Every
scalar reports which backend produced it via ``.backend``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import (
    DependentRadicands,
    DivisionByZero,
    IncompatibleTowers,
    NegativeRadicand,
    NoExactSquareRoot,
    ParseError,
    TowerDepthExceeded,
)

MAX_TOWER_DEPTH = 4
FLOAT_TOL = 1e-9     # comparison tolerance of the approximate backend
FLOAT_DROP = 1e-12   # structural zero threshold when normalizing coefficients

_F0 = Fraction(0)
_F1 = Fraction(1)


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return (s, m) with n = s * m*m and s square-free.  Requires n >= 1."""
    if n < 1:
        raise ValueError("need a positive integer")
    s, m = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            m *= d ** (e // 2)
            if e % 2:
                s *= d
        d += 1 if d == 2 else 2
    if n > 1:
        r = math.isqrt(n)
        if r * r == n:
            m *= r
        else:
            s *= n
    return s, m


def _bit_indices(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


class FieldTower:
    """An ordered set of radicands defining Q(sqrt(d1), ..., sqrt(dk))."""

    __slots__ = ("radicands", "size", "_products", "_sf_map", "_intervals")

    def __init__(self, radicands: tuple[int, ...] = ()):
        rads = tuple(radicands)
        if len(rads) > MAX_TOWER_DEPTH:
            raise TowerDepthExceeded(f"tower depth {len(rads)} exceeds {MAX_TOWER_DEPTH}")
        if tuple(sorted(set(rads))) != rads:
            raise DependentRadicands("radicands must be sorted and distinct")
        for d in rads:
            if not isinstance(d, int) or d < 2:
                raise DependentRadicands(f"radicand {d!r} is not an integer >= 2")
            if squarefree_decompose(d)[0] != d:
                raise DependentRadicands(f"radicand {d} is not square-free")
        self.radicands = rads
        self.size = 1 << len(rads)
        products = []
        for mask in range(self.size):
            p = 1
            for i in _bit_indices(mask):
                p *= rads[i]
            products.append(p)
        # multiplicative independence: no nonempty subset product is a square
        sf_map: dict[int, tuple[int, int]] = {}
        for mask in range(1, self.size):
            s, m = squarefree_decompose(products[mask])
            if s == 1:
                raise DependentRadicands(
                    f"radicands {rads} are dependent: subset product {products[mask]} is a square")
            if s in sf_map:
                raise DependentRadicands(f"radicands {rads} are dependent")
            sf_map[s] = (mask, m)
        self._products = products
        self._sf_map = sf_map
        self._intervals: dict[int, list[tuple[Fraction, Fraction]]] = {}

    @property
    def depth(self) -> int:
        return len(self.radicands)

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldTower) and self.radicands == other.radicands

    def __hash__(self) -> int:
        return hash(self.radicands)

    def __repr__(self) -> str:
        return f"FieldTower({self.radicands})"

    def spans(self, other: "FieldTower") -> bool:
        """True when every value of ``other`` is expressible over this tower."""
        return all(r in self._sf_map for r in other.radicands)

    def sqrt_coords(self, squarefree: int) -> tuple[int, Fraction] | None:
        """If sqrt(squarefree) lies in this tower, return (basis mask, coefficient)."""
        hit = self._sf_map.get(squarefree)
        if hit is None:
            return None
        mask, m = hit
        return mask, Fraction(1, m)

    def intervals(self, prec: int) -> list[tuple[Fraction, Fraction]]:
        """Rational enclosures [lo, hi] of each basis radical at 2^-prec width."""
        cached = self._intervals.get(prec)
        if cached is None:
            cached = []
            one = 1 << prec
            for p in self._products:
                s = math.isqrt(p * one * one)
                cached.append((Fraction(s, one), Fraction(s + 1, one)))
            self._intervals[prec] = cached
        return cached


EMPTY_TOWER = FieldTower(())

_TOWER_CACHE: dict[tuple[int, ...], FieldTower] = {(): EMPTY_TOWER}


def get_tower(radicands: tuple[int, ...]) -> FieldTower:
    t = _TOWER_CACHE.get(radicands)
    if t is None:
        t = FieldTower(radicands)
        _TOWER_CACHE[radicands] = t
    return t


def _minimal_radicands(sf_values) -> tuple[int, ...]:
    """Greedy minimal generating set for the given square-free integers > 1.

    Processes values in increasing order and keeps those not already generated
    (modulo squares) by the ones kept so far, so the result is canonical for
    the multiplicative group the values span.
    """
    gens: list[int] = []
    span = {1}
    for s in sorted(set(sf_values)):
        if s in span:
            continue
        gens.append(s)
        span |= {squarefree_decompose(s * t)[0] for t in tuple(span)}
    return tuple(gens)


def merge_towers(a: FieldTower, b: FieldTower) -> FieldTower:
    """Smallest tower spanning both, or IncompatibleTowers past depth 4."""
    if a.spans(b):
        return a
    if b.spans(a):
        return b
    rads = _minimal_radicands(set(a.radicands) | set(b.radicands))
    if len(rads) > MAX_TOWER_DEPTH:
        raise IncompatibleTowers(
            f"towers {a.radicands} and {b.radicands} have no common tower of depth "
            f"<= {MAX_TOWER_DEPTH}")
    return get_tower(rads)


class FieldElement:
    """An exact element of a square-root tower.

    Construction canonicalizes: radicands whose coordinates all vanish are
    dropped, so equal values always compare (and hash) equal regardless of the
    tower they were computed in.
    """

    __slots__ = ("tower", "coords")
    backend = "exact"

    def __init__(self, tower: FieldTower, coords):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != tower.size:
            raise ValueError("coordinate count does not match tower size")
        # canonical form: the smallest tower generated by the radicals the
        # value actually uses.  The square-free support of a value is
        # intrinsic (independent of the ambient tower), so equal values get
        # identical towers and coordinates, making __eq__/__hash__ structural.
        used_sf = {squarefree_decompose(tower._products[mask])[0]
                   for mask, c in enumerate(coords) if c and mask}
        rads = _minimal_radicands(used_sf)
        if rads != tower.radicands:
            new_tower = get_tower(rads)
            out = [_F0] * new_tower.size
            for mask, c in enumerate(coords):
                if not c:
                    continue
                if mask == 0:
                    out[0] = c
                    continue
                s, m = squarefree_decompose(tower._products[mask])
                tmask, tc = new_tower.sqrt_coords(s)
                out[tmask] = c * m * tc
            tower, coords = new_tower, tuple(out)
        self.tower = tower
        self.coords = coords

    # --- constructors ---------------------------------------------------

    @classmethod
    def rational(cls, value) -> "FieldElement":
        # already canonical: a rational lives in the empty tower
        out = object.__new__(cls)
        out.tower = EMPTY_TOWER
        out.coords = (value if type(value) is Fraction else Fraction(value),)
        return out

    @classmethod
    def zero(cls) -> "FieldElement":
        return _ZERO

    @classmethod
    def one(cls) -> "FieldElement":
        return _ONE

    # --- basic structure ------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return self.tower.depth == 0

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    @property
    def rational_part(self) -> Fraction:
        return self.coords[0]

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement.rational(other)
        return None

    def _common(self, other: "FieldElement"):
        if self.tower == other.tower:
            return self.tower, self.coords, other.coords
        t = merge_towers(self.tower, other.tower)
        return t, _embed(self, t), _embed(other, t)

    # --- ring operations ------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.tower is EMPTY_TOWER and o.tower is EMPTY_TOWER:
            return FieldElement.rational(self.coords[0] + o.coords[0])
        tower, a, b = self._common(o)
        return FieldElement(tower, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        # negation never zeroes a coordinate, so canonical form is kept
        out = object.__new__(FieldElement)
        out.tower = self.tower
        out.coords = tuple(-c for c in self.coords)
        return out

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.tower is EMPTY_TOWER and o.tower is EMPTY_TOWER:
            return FieldElement.rational(self.coords[0] - o.coords[0])
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.tower is EMPTY_TOWER and o.tower is EMPTY_TOWER:
            return FieldElement.rational(self.coords[0] * o.coords[0])
        tower, a, b = self._common(o)
        out = [_F0] * tower.size
        products = tower._products
        nz_a = [(m, c) for m, c in enumerate(a) if c]
        nz_b = [(m, c) for m, c in enumerate(b) if c]
        for m1, c1 in nz_a:
            for m2, c2 in nz_b:
                out[m1 ^ m2] += c1 * c2 * products[m1 & m2]
        return FieldElement(tower, out)

    __rmul__ = __mul__

    def inv(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.tower.depth == 0:
            return FieldElement(EMPTY_TOWER, (1 / self.coords[0],))
        x, y = self._split()
        d = self.tower.radicands[-1]
        n = x * x - y * y * d
        ninv = n.inv()
        return _join(x * ninv, -(y * ninv), self.tower)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # --- comparisons ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.tower == other.tower and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.tower.depth == 0 and self.coords[0] == other
        if isinstance(other, FloatScalar):
            return abs(self.to_float() - other.value) <= FLOAT_TOL
        return NotImplemented

    def __hash__(self):
        if self.tower.depth == 0:
            return hash(self.coords[0])
        return hash((self.tower.radicands, self.coords))

    def sign(self) -> int:
        """Exact sign: -1, 0 or +1."""
        if self.is_zero():
            return 0
        if self.tower.depth == 0:
            c = self.coords[0]
            return 1 if c > 0 else -1
        prec = 32
        while True:
            lo, hi = self._enclosure(prec)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            prec *= 2
            if prec > (1 << 20):  # unreachable for valid towers; guards a bug
                raise RuntimeError("sign refinement did not converge")

    def _enclosure(self, prec: int) -> tuple[Fraction, Fraction]:
        lo = hi = _F0
        intervals = self.tower.intervals(prec)
        for mask, c in enumerate(self.coords):
            if not c:
                continue
            a, b = intervals[mask]
            if c >= 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return lo, hi

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    # --- conversions ----------------------------------------------------

    def to_float(self) -> float:
        if self.tower.depth == 0:
            return float(self.coords[0])
        lo, hi = self._enclosure(128)
        return float((lo + hi) / 2)

    def text(self) -> str:
        """Canonical text form, e.g. ``"1/2 - 3/4*sqrt(2)"``."""
        terms: list[tuple[int, Fraction]] = []
        if self.coords[0]:
            terms.append((1, self.coords[0]))
        items = []
        for mask in range(1, self.tower.size):
            c = self.coords[mask]
            if not c:
                continue
            s, m = squarefree_decompose(self.tower._products[mask])
            items.append((s, c * m))
        for s, c in sorted(items):
            terms.append((s, c))
        if not terms:
            return "0"
        parts = []
        for idx, (s, c) in enumerate(terms):
            mag = abs(c)
            if s == 1:
                body = _frac_text(mag)
            elif mag == 1:
                body = f"sqrt({s})"
            else:
                body = f"{_frac_text(mag)}*sqrt({s})"
            if idx == 0:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append((" + " if c > 0 else " - ") + body)
        return "".join(parts)

    # --- internals ------------------------------------------------------

    def _split(self) -> tuple["FieldElement", "FieldElement"]:
        """Write self = x + y*sqrt(d_last) with x, y in the prefix tower."""
        k = self.tower.depth
        prefix = get_tower(self.tower.radicands[:-1])
        half = 1 << (k - 1)
        x = FieldElement(prefix, self.coords[:half])
        y = FieldElement(prefix, self.coords[half:])
        return x, y

    def __repr__(self):
        return f"FieldElement({self.text()!r})"

    def __str__(self):
        return self.text()


def _frac_text(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _embed(elem: FieldElement, target: FieldTower):
    """Coordinates of ``elem`` over ``target``, which must span its tower."""
    if elem.tower == target:
        return elem.coords
    out = [_F0] * target.size
    for mask, c in enumerate(elem.coords):
        if not c:
            continue
        if mask == 0:
            out[0] = c
            continue
        s, m = squarefree_decompose(elem.tower._products[mask])
        hit = target.sqrt_coords(s)
        if hit is None:
            raise IncompatibleTowers(
                f"cannot express sqrt({s}) over tower {target.radicands}")
        tmask, tc = hit
        out[tmask] = c * m * tc
    return tuple(out)


def _split_in(a: FieldElement, tower: FieldTower):
    """Write a = x + y*sqrt(d_last) relative to ``tower`` (a must embed in it)."""
    coords = _embed(a, tower) if a.tower != tower else a.coords
    prefix = get_tower(tower.radicands[:-1])
    half = tower.size >> 1
    return FieldElement(prefix, coords[:half]), FieldElement(prefix, coords[half:])


def _join(x: FieldElement, y: FieldElement, tower: FieldTower) -> FieldElement:
    """Assemble x + y*sqrt(d_last) in the given tower."""
    prefix = get_tower(tower.radicands[:-1])
    cx = _embed(x, prefix) if x.tower != prefix else x.coords
    cy = _embed(y, prefix) if y.tower != prefix else y.coords
    return FieldElement(tower, cx + cy)


_ZERO = FieldElement(EMPTY_TOWER, (_F0,))
_ONE = FieldElement(EMPTY_TOWER, (_F1,))


class FloatScalar:
    """binary64 scalar of the approximate backend (tolerance 1e-9)."""

    __slots__ = ("value",)
    backend = "float"

    def __init__(self, value: float):
        self.value = float(value)

    @staticmethod
    def _val(other):
        if isinstance(other, FloatScalar):
            return other.value
        if isinstance(other, FieldElement):
            return other.to_float()
        if isinstance(other, (int, float)):
            return float(other)
        if isinstance(other, Fraction):
            return float(other)
        return None

    def __add__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return FloatScalar(self.value + v)

    __radd__ = __add__

    def __neg__(self):
        return FloatScalar(-self.value)

    def __sub__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return FloatScalar(self.value - v)

    def __rsub__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return FloatScalar(v - self.value)

    def __mul__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return FloatScalar(self.value * v)

    __rmul__ = __mul__

    def inv(self):
        if abs(self.value) <= FLOAT_DROP:
            raise DivisionByZero("inverse of (numerical) zero")
        return FloatScalar(1.0 / self.value)

    def __truediv__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        if abs(v) <= FLOAT_DROP:
            raise DivisionByZero("division by (numerical) zero")
        return FloatScalar(self.value / v)

    def __rtruediv__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return FloatScalar(v) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return FloatScalar(self.value ** n)

    def __eq__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return abs(self.value - v) <= FLOAT_TOL

    __hash__ = None  # tolerance-based equality is not hashable

    def sign(self) -> int:
        if abs(self.value) <= FLOAT_TOL:
            return 0
        return 1 if self.value > 0 else -1

    def is_zero(self) -> bool:
        return abs(self.value) <= FLOAT_DROP

    def is_rational(self) -> bool:
        return True

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def to_float(self) -> float:
        return self.value

    def text(self) -> str:
        return "%.17g" % self.value

    def __repr__(self):
        return f"FloatScalar({self.value!r})"

    def __str__(self):
        return self.text()


Scalar = FieldElement | FloatScalar


def as_scalar(x, backend: str = "exact"):
    """Coerce a Python number (or scalar) to the requested backend."""
    if isinstance(x, (FieldElement, FloatScalar)):
        if backend == "float" and isinstance(x, FieldElement):
            return FloatScalar(x.to_float())
        return x
    if backend == "float":
        return FloatScalar(float(x))
    if isinstance(x, float):
        return FloatScalar(x)
    return FieldElement.rational(x)


# --- square roots --------------------------------------------------------

def _rational_sqrt(f: Fraction) -> Fraction | None:
    if f < 0:
        return None
    if f == 0:
        return _F0
    rn = math.isqrt(f.numerator)
    rd = math.isqrt(f.denominator)
    if rn * rn == f.numerator and rd * rd == f.denominator:
        return Fraction(rn, rd)
    return None


def _sqrt_in(a: FieldElement, tower: FieldTower) -> FieldElement | None:
    """Exact square root of ``a`` inside ``tower`` (a must embed in it), or None.

    Complete: recursing on a = x + y*sqrt(d) over the last radical, any root
    e + f*sqrt(d) forces s = e^2 - d*f^2 to be a prefix square root of
    x^2 - d*y^2 and e a prefix square root of (x +/- s)/2, both found by
    induction; y = 0 admits the extra shape f*sqrt(d).
    """
    if a.is_zero():
        return _ZERO
    if a.sign() < 0:
        return None
    if tower.depth == 0:
        r = _rational_sqrt(a.coords[0])
        return None if r is None else FieldElement.rational(r)
    prefix = get_tower(tower.radicands[:-1])
    d = tower.radicands[-1]
    x, y = _split_in(a, tower)
    if y.is_zero():
        c = _sqrt_in(x, prefix)
        if c is not None:
            return c
        f = _sqrt_in(x / d, prefix)
        if f is not None:
            return _join(FieldElement.zero(), f, tower)
        return None
    n = x * x - y * y * d
    s = _sqrt_in(n, prefix)
    if s is None:
        return None
    for sv in (s, -s):
        e2 = (x + sv) / 2
        if e2.sign() <= 0:
            continue
        e = _sqrt_in(e2, prefix)
        if e is None or e.is_zero():
            continue
        f = y / (e * 2)
        cand = _join(e, f, tower)
        if cand * cand == a:
            return cand if cand.sign() > 0 else -cand
    return None


def _sqrt_candidates(a: FieldElement, tower: FieldTower, out: set) -> None:
    """Collect square-free integers t such that sqrt(a) might lie in the tower
    extended by sqrt(t).  Walks the same recursion as _sqrt_in and records the
    square-free part of every rational that fails to be a perfect square."""
    if a.is_zero() or a.sign() < 0:
        return
    if tower.depth == 0:
        f = a.coords[0]
        s, _ = squarefree_decompose(f.numerator * f.denominator)
        if s != 1:
            out.add(s)
        return
    prefix = get_tower(tower.radicands[:-1])
    d = tower.radicands[-1]
    x, y = _split_in(a, tower)
    if y.is_zero():
        _sqrt_candidates(x, prefix, out)
        _sqrt_candidates(x / d, prefix, out)
        return
    n = x * x - y * y * d
    s = _sqrt_in(n, prefix)
    if s is None:
        _sqrt_candidates(n, prefix, out)
        return
    for sv in (s, -s):
        e2 = (x + sv) / 2
        if e2.sign() > 0:
            _sqrt_candidates(e2, prefix, out)


def sqrt_adjoin(a, context: FieldTower | None = None):
    """Square root of a nonnegative scalar, adjoining at most one new radical.

    For rational inputs returns m*sqrt(s) with s the square-free part, reusing
    the context tower when sqrt(s) already lives there and extending it (up to
    depth 4) otherwise.  For general tower elements the root is searched for
    in the context tower and, failing that, in the tower extended by the
    square-free part of the element's rational coordinate; if no tower of
    depth <= 4 contains it, NoExactSquareRoot is raised.
    """
    if isinstance(a, FloatScalar):
        if a.value < -FLOAT_TOL:
            raise NegativeRadicand(f"sqrt of negative value {a.value}")
        return FloatScalar(math.sqrt(max(a.value, 0.0)))
    if isinstance(a, (int, Fraction)):
        a = FieldElement.rational(a)
    if context is None:
        context = a.tower
    elif not context.spans(a.tower):
        context = merge_towers(context, a.tower)
    sgn = a.sign()
    if sgn < 0:
        raise NegativeRadicand(f"sqrt of negative element {a.text()}")
    if sgn == 0:
        return _ZERO

    if a.is_rational():
        f = a.coords[0]
        s, m = squarefree_decompose(f.numerator * f.denominator)
        coeff = Fraction(m, f.denominator)
        if s == 1:
            return FieldElement.rational(coeff)
        hit = context.sqrt_coords(s)
        if hit is not None:
            mask, c = hit
            coords = [_F0] * context.size
            coords[mask] = c * coeff
            return FieldElement(context, coords)
        if context.depth >= MAX_TOWER_DEPTH:
            raise TowerDepthExceeded(
                f"adjoining sqrt({s}) would exceed depth {MAX_TOWER_DEPTH}")
        new = get_tower(tuple(sorted(context.radicands + (s,))))
        mask, c = new.sqrt_coords(s)
        coords = [_F0] * new.size
        coords[mask] = c * coeff
        return FieldElement(new, coords)

    root = _sqrt_in(a, context)
    if root is not None:
        return root
    if context.depth < MAX_TOWER_DEPTH:
        cands: set[int] = set()
        _sqrt_candidates(a, context, cands)
        for t in sorted(cands):
            if context.sqrt_coords(t) is not None:
                continue
            try:
                wider = get_tower(tuple(sorted(context.radicands + (t,))))
            except DependentRadicands:
                continue
            root = _sqrt_in(a, wider)
            if root is not None:
                return root
    raise NoExactSquareRoot(f"no representable square root for {a.text()}")


# --- parsing -------------------------------------------------------------

_TERM_RE = re.compile(
    r"^\s*(?:(?P<rat>-?\d+(?:/\d+)?)(?:\s*\*\s*sqrt\((?P<rad1>\d+)\))?"
    r"|(?P<sign>-?)\s*sqrt\((?P<rad2>\d+)\))\s*$")


def parse_scalar(text: str, backend: str = "exact"):
    """Parse the canonical scalar text form (inverse of ``.text()``)."""
    if backend == "float":
        try:
            return FloatScalar(float(text))
        except ValueError as exc:
            raise ParseError(f"bad float scalar {text!r}") from exc
    text = text.strip()
    if not text:
        raise ParseError("empty scalar")
    # split into signed terms at top level
    chunks = re.split(r"\s+([+-])\s+", text)
    terms: list[tuple[Fraction, int]] = []  # (coefficient, square-free radicand)
    pending_sign = 1
    for i, chunk in enumerate(chunks):
        if i % 2 == 1:
            pending_sign = -1 if chunk == "-" else 1
            continue
        m = _TERM_RE.match(chunk)
        if not m:
            raise ParseError(f"bad scalar term {chunk!r} in {text!r}")
        if m.group("rat") is not None:
            coeff = Fraction(m.group("rat"))
            rad = int(m.group("rad1")) if m.group("rad1") else 1
        else:
            coeff = Fraction(-1 if m.group("sign") == "-" else 1)
            rad = int(m.group("rad2"))
        terms.append((pending_sign * coeff, rad))
        pending_sign = 1
    # build the minimal tower able to express every radicand
    rads: list[int] = []
    for _, rad in sorted(terms, key=lambda t: t[1]):
        if rad == 1:
            continue
        s = squarefree_decompose(rad)[0]
        if get_tower(tuple(rads)).sqrt_coords(s) is None and s != 1:
            rads = sorted(rads + [s])
            if len(rads) > MAX_TOWER_DEPTH:
                raise ParseError(f"scalar {text!r} needs tower depth > {MAX_TOWER_DEPTH}")
    tower = get_tower(tuple(rads))
    coords = [_F0] * tower.size
    for coeff, rad in terms:
        if rad == 1:
            coords[0] += coeff
            continue
        s, m = squarefree_decompose(rad)
        if s == 1:
            coords[0] += coeff * m
            continue
        mask, c = tower.sqrt_coords(s)
        coords[mask] += coeff * m * c
    return FieldElement(tower, coords)
