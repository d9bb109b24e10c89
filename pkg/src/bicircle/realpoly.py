"""Real-polynomial support: gcds and factorization into degree <= 2 factors.

Everything here operates on QPoly values whose coefficients are real scalars.
The two jobs are the ones the factorization pipeline needs:

- common-divisor extraction across the four components of a quaternion
  polynomial and a real polynomial (bivariate gcd via content/primitive part
  in one variable plus a pseudo-remainder sequence in the other), and
- complete factorization of a univariate real polynomial into monic factors
  of degree 1 or 2, exact over square-root towers when the roots allow it
  (rational roots, quadratic formula, quartic resolvent-cubic splitting) and
  falling back to binary64 root finding otherwise.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import NoExactSquareRoot, TowerDepthExceeded
from .quatpoly import QPoly, Quaternion
from .scalar import FieldElement, FloatScalar, sqrt_adjoin

_ONE = QPoly.one()


def _scalar_coeffs(p: QPoly, var: str):
    """Ascending scalar coefficient list of a real polynomial univariate in var."""
    other = "v" if var == "u" else "u"
    if p.deg(other) > 0:
        raise ValueError(f"{p.text()} is not univariate in {var}")
    n = int(p.deg(var)) if not p.is_zero() else -1
    out = []
    for e in range(n + 1):
        q = p.coefficient(e, 0) if var == "u" else p.coefficient(0, e)
        out.append(q.w)
    return out


def _poly_from_coeffs(coeffs, var: str) -> QPoly:
    d = {}
    for e, c in enumerate(coeffs):
        ij = (e, 0) if var == "u" else (0, e)
        d[ij] = Quaternion(c)
    return QPoly(d)


def is_float_backed(p: QPoly) -> bool:
    return p.backend == "float"


def glex_lead(p: QPoly) -> tuple[tuple[int, int], object]:
    """Leading (exponent, scalar) in graded lex order with u > v; real p != 0."""
    ij = max(p.coeffs, key=lambda e: (e[0] + e[1], e[0]))
    return ij, p.coeffs[ij].w


def monic(p: QPoly) -> tuple[QPoly, object]:
    """(p / lead, lead) with lead the glex leading scalar; (0, 1) for zero."""
    if p.is_zero():
        return p, FieldElement.one()
    _, lead = glex_lead(p)
    if lead == 1:
        return p, lead
    inv = lead.inv()
    return QPoly({ij: q.scale(inv) for ij, q in p.coeffs.items()}), lead


def try_divide(a: QPoly, b: QPoly) -> QPoly | None:
    """Exact quotient a / b for real polynomials, or None.

    Single-divisor multivariate division in graded lex order decides
    divisibility: if at any step the divisor's leading monomial does not
    divide the current leading monomial, no quotient exists.
    """
    if b.is_zero():
        return None
    if a.is_zero():
        return QPoly.zero()
    (bi, bj), blead = glex_lead(b)
    binv = blead.inv()
    quo: dict[tuple[int, int], Quaternion] = {}
    rem = a
    while not rem.is_zero():
        (ri, rj), rlead = glex_lead(rem)
        if ri < bi or rj < bj:
            return None
        ij = (ri - bi, rj - bj)
        c = rlead * binv
        quo[ij] = Quaternion(c)
        rem = rem - QPoly.monomial(Quaternion(c), *ij) * b
    return QPoly(quo)


def divides(b: QPoly, a: QPoly) -> bool:
    """True when the real polynomial b divides a exactly."""
    return try_divide(a, b) is not None


# --- gcd ----------------------------------------------------------------

def _univariate_gcd_coeffs(a, b):
    """Euclidean gcd on ascending scalar coefficient lists; monic result."""
    def norm(c):
        while c and c[-1].is_zero():
            c.pop()
        return c

    a, b = norm(list(a)), norm(list(b))
    while b:
        # a mod b
        inv = b[-1].inv()
        while len(a) >= len(b):
            f = a[-1] * inv
            off = len(a) - len(b)
            for t in range(len(b)):
                a[off + t] = a[off + t] - f * b[t]
            a.pop()
            norm(a)
            if not a:
                break
        a, b = b, a
    if not a:
        return []
    inv = a[-1].inv()
    return [c * inv for c in a]


def univariate_gcd(p: QPoly, q: QPoly, var: str) -> QPoly:
    """Monic gcd of two real polynomials univariate in var (float inputs are
    treated as coprime: binary64 remainders cannot witness exact divisors)."""
    if p.is_zero():
        return monic(q)[0]
    if q.is_zero():
        return monic(p)[0]
    if is_float_backed(p) or is_float_backed(q):
        return _ONE
    g = _univariate_gcd_coeffs(_scalar_coeffs(p, var), _scalar_coeffs(q, var))
    return _poly_from_coeffs(g, var)


def _content_u(p: QPoly) -> QPoly:
    """gcd (in v) of the u-coefficients of a real bivariate polynomial."""
    g = QPoly.zero()
    for e in range(int(p.degu) + 1):
        g = univariate_gcd(g, p.u_coefficient(e), "v")
        if g == _ONE:
            break
    return g


def bivariate_gcd(p: QPoly, q: QPoly) -> QPoly:
    """Monic gcd of two real polynomials in u, v.

    Content/primitive-part decomposition in u over R[v]: the gcd is
    gcd(contents) times the gcd of primitive parts, the latter found by a
    primitive pseudo-remainder sequence in u.
    """
    if p.is_zero():
        return monic(q)[0]
    if q.is_zero():
        return monic(p)[0]
    if is_float_backed(p) or is_float_backed(q):
        return _ONE
    if p.degv == 0 and q.degv == 0:
        return univariate_gcd(p, q, "u")
    if p.degu == 0 and q.degu == 0:
        return univariate_gcd(p, q, "v")

    def pp_u(f):
        c = _content_u(f)
        out = try_divide(f, c)
        assert out is not None
        return out, c

    g, cg = pp_u(p)
    h, ch = pp_u(q)
    if g.degu < h.degu:
        g, h = h, g
    # primitive pseudo-remainder sequence in u over R[v]
    while True:
        if h.degu == 0:
            pp_gcd = _ONE  # primitive parts coprime in u
            break
        r = g
        hl = h.u_coefficient(int(h.degu))  # leading coefficient, in R[v]
        while not r.is_zero() and r.degu >= h.degu:
            delta = int(r.degu) - int(h.degu)
            rl = r.u_coefficient(int(r.degu))
            r = hl * r - QPoly.monomial(Quaternion(1), delta, 0) * rl * h
        if r.is_zero():
            pp_gcd = h  # h divides g up to content
            break
        g, h = h, pp_u(r)[0]
    result = monic(pp_gcd * univariate_gcd(cg, ch, "v"))[0]
    assert divides(result, p) and divides(result, q)
    return result


def gcd_with_components(q: QPoly, r: QPoly) -> QPoly:
    """Monic real gcd of the four components of q together with r."""
    g = monic(r)[0]
    for comp in q.components():
        if g == _ONE:
            return g
        g = bivariate_gcd(g, comp)
    return g


# --- factorization -------------------------------------------------------

class RealFactorization:
    """Monic degree <= 2 factors, a scale, and the backend that produced them.

    scale * product(factor^multiplicity) reconstructs the input — exactly for
    the exact backend, coefficientwise within 1e-9 for the float backend.
    """

    def __init__(self, factors, scale, backend: str, var: str):
        self.factors = factors  # list of (QPoly, multiplicity)
        self.scale = scale
        self.backend = backend
        self.var = var

    def product(self) -> QPoly:
        out = QPoly.constant(Quaternion(self.scale))
        for f, mult in self.factors:
            out = out * f ** mult
        return out

    def all_factors(self):
        """Factors repeated per multiplicity."""
        out = []
        for f, mult in self.factors:
            out.extend([f] * mult)
        return out

    def __repr__(self):
        body = " * ".join(f"({f.text()})^{m}" if m > 1 else f"({f.text()})"
                          for f, m in self.factors)
        return f"RealFactorization({self.scale.text()} * {body or '1'})"


def _rational_root_candidates(coeffs):
    """Candidate rational roots p/q of a rational-coefficient polynomial."""
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // _gcd_int(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    while ints and ints[0] == 0:
        ints = ints[1:]  # zero roots are peeled off before this is called
    if not ints:
        return
    a0, ad = abs(ints[0]), abs(ints[-1])
    seen = set()
    for p in _divisors(a0):
        for q in _divisors(ad):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand not in seen:
                    seen.add(cand)
                    yield cand


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _divisors(n: int):
    if n == 0:
        return []
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _int_roots_monic_cubic(A: int, B: int, C: int):
    """All integer roots of w^3 + A*w^2 + B*w + C, by exact bisection.

    The derivative's roots (-A +- sqrt(A^2 - 3B)) / 3 cut the line into
    monotone pieces; their floors are computable with isqrt, and on each
    piece a sign straddle plus integer bisection finds the unique root.
    This stays fast for the huge coefficients that cleared-denominator
    resolvent cubics produce, where divisor enumeration would not.
    """
    def ev(w):
        return ((w + A) * w + B) * w + C

    bound = 1 + max(abs(A), abs(B), abs(C))
    seps = []
    disc = A * A - 3 * B
    if disc > 0:
        t = math.isqrt(disc)
        shift = 0 if t * t == disc else 1
        seps = sorted({(-A - t - shift) // 3, (-A + t) // 3})
    ranges = []
    lo = -bound
    for s in seps:
        if s >= lo:
            ranges.append((lo, min(s, bound)))
            lo = s + 1
    if lo <= bound:
        ranges.append((lo, bound))

    roots = set()
    for lo, hi in ranges:
        flo, fhi = ev(lo), ev(hi)
        if flo == 0:
            roots.add(lo)
        if fhi == 0:
            roots.add(hi)
        if flo * fhi < 0:
            while hi - lo > 1:
                mid = (lo + hi) // 2
                fm = ev(mid)
                if fm == 0:
                    roots.add(mid)
                    break
                if (fm < 0) == (flo < 0):
                    lo, flo = mid, fm
                else:
                    hi, fhi = mid, fm
    return sorted(roots)


def _rational_roots_cubic(fracs):
    """All rational roots of c3*z^3 + c2*z^2 + c1*z + c0 (ascending Fractions,
    c3 != 0): substitute w = c3*z after clearing denominators, so any rational
    root becomes an integer root of a monic integer cubic."""
    lcm = 1
    for c in fracs:
        lcm = lcm * c.denominator // _gcd_int(lcm, c.denominator)
    ints = [int(c * lcm) for c in fracs]
    g = 0
    for c in ints:
        g = _gcd_int(g, abs(c))
    ints = [c // g for c in ints]
    a3 = ints[3]
    roots = _int_roots_monic_cubic(ints[2], ints[1] * a3, ints[0] * a3 * a3)
    return sorted(Fraction(w, a3) for w in roots)


def _eval_coeffs(coeffs, x):
    acc = coeffs[-1] * 1
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def _deflate(coeffs, root):
    """Divide by (X - root); exact synthetic division (remainder must vanish)."""
    out = [coeffs[-1]]
    for c in reversed(coeffs[1:-1]):
        out.append(c + out[-1] * root)
    rem = coeffs[0] + out[-1] * root
    assert rem == 0
    out.reverse()
    return out


def _all_rational(coeffs) -> bool:
    return all(isinstance(c, FieldElement) and c.is_rational() for c in coeffs)


def _factor_monic_exact(coeffs, var: str):
    """Factor a monic exact-scalar coefficient list into monic factors of
    degree <= 2, or return None when no tower-exact factorization exists."""
    deg = len(coeffs) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [_poly_from_coeffs(coeffs, var)]
    if deg == 2:
        b, c = coeffs[1], coeffs[0]
        disc = b * b - 4 * c
        if disc.sign() < 0:
            return [_poly_from_coeffs(coeffs, var)]
        try:
            s = sqrt_adjoin(disc)
        except (NoExactSquareRoot, TowerDepthExceeded):
            # real-reducible but the roots leave every depth <= 4 tower:
            # degree 2 is still within contract, so keep the factor exact
            return [_poly_from_coeffs(coeffs, var)]
        r1 = (-b + s) / 2
        r2 = (-b - s) / 2
        return [_poly_from_coeffs([-r1, FieldElement.one()], var),
                _poly_from_coeffs([-r2, FieldElement.one()], var)]

    if _all_rational(coeffs):
        fracs = [c.rational_value() for c in coeffs]
        if deg == 3:
            roots = _rational_roots_cubic(fracs)
        else:
            roots = [cand for cand in _rational_root_candidates(fracs)
                     if _eval_coeffs(fracs, cand) == 0]
        for cand in roots[:1]:
            rest = _factor_monic_exact(
                [FieldElement.rational(c) for c in _deflate(fracs, cand)], var)
            if rest is None:
                return None
            return [_poly_from_coeffs([FieldElement.rational(-cand),
                                       FieldElement.one()], var)] + rest
        if deg == 4:
            return _factor_quartic_resolvent(fracs, var)
    return None


def _factor_quartic_resolvent(fracs, var: str):
    """Split a monic rational quartic with no rational roots into two monic
    quadratics over a square-root tower, via a rational root of the resolvent
    cubic; None when the resolvent has no usable rational root (then no
    tower-exact factorization into quadratics exists)."""
    c3, c2, c1, c0 = fracs[3], fracs[2], fracs[1], fracs[0]
    # depress: X = Y - c3/4
    sh = c3 / 4
    p = c2 - 6 * sh * sh
    q = c1 - 2 * c2 * sh + 8 * sh ** 3
    r = c0 - c1 * sh + c2 * sh * sh - 3 * sh ** 4
    # Y^4 + pY^2 + qY + r = (Y^2 + kY + l)(Y^2 - kY + m), z = k^2 solving
    # z^3 + 2p z^2 + (p^2 - 4r) z - q^2 = 0
    res = [-q * q, p * p - 4 * r, 2 * p, Fraction(1)]
    candidates = []
    if q == 0:
        candidates.append(Fraction(0))
    candidates.extend(z for z in _rational_roots_cubic(res) if z > 0)
    one = FieldElement.one()
    for z in candidates:
        if z == 0:
            # biquadratic split: Y^4 + pY^2 + r = (Y^2 + l)(Y^2 + m)
            disc = FieldElement.rational(p * p - 4 * r)
            if disc.sign() < 0:
                continue
            try:
                s = sqrt_adjoin(disc)
            except (NoExactSquareRoot, TowerDepthExceeded):
                continue
            l = (FieldElement.rational(p) + s) / 2
            m = (FieldElement.rational(p) - s) / 2
            k = FieldElement.zero()
        else:
            try:
                k = sqrt_adjoin(FieldElement.rational(z))
            except (NoExactSquareRoot, TowerDepthExceeded):
                continue
            pz = FieldElement.rational(p + z)
            qk = FieldElement.rational(q) / k
            l = (pz - qk) / 2
            m = (pz + qk) / 2
        # un-depress: Y = X + sh
        shv = FieldElement.rational(sh)
        quads = []
        for kk, cc in ((k, l), (-k, m)):
            # (Y^2 + kk*Y + cc) with Y = X + sh
            b1 = kk + 2 * shv
            b0 = shv * shv + kk * shv + cc
            quads.append([b0, b1, one])
        prod = _poly_from_coeffs(quads[0], var) * _poly_from_coeffs(quads[1], var)
        if prod == _poly_from_coeffs([FieldElement.rational(c) for c in fracs], var):
            out = []
            for quad in quads:
                sub = _factor_monic_exact(quad, var)
                if sub is None:  # a later candidate may still pair cleanly
                    out = None
                    break
                out.extend(sub)
            if out is not None:
                return out
    return None


def _float_factors(coeffs, var: str):
    """Monic float factors of a monic coefficient list, via numpy roots.

    Real roots become linear factors; conjugate pairs (numpy returns them
    symmetrically for real input) combine into real quadratics.
    """
    vals = [c.to_float() for c in coeffs]
    roots = np.roots(list(reversed(vals)))
    factors = []
    for z in sorted(roots, key=lambda w: (w.real, abs(w.imag), w.imag)):
        if abs(z.imag) <= 1e-9 * max(1.0, abs(z)):
            factors.append(_poly_from_coeffs([FloatScalar(-z.real), FloatScalar(1.0)], var))
        elif z.imag > 0:
            factors.append(_poly_from_coeffs(
                [FloatScalar(z.real * z.real + z.imag * z.imag),
                 FloatScalar(-2.0 * z.real), FloatScalar(1.0)], var))
    return factors


def _group(factors):
    grouped: list[tuple[QPoly, int]] = []
    for f in factors:
        for idx, (g, m) in enumerate(grouped):
            if g == f:
                grouped[idx] = (g, m + 1)
                break
        else:
            grouped.append((f, 1))
    return grouped


def factor_real_univariate(p: QPoly, var: str | None = None) -> RealFactorization:
    """Factor a nonzero real univariate polynomial into monic factors of
    degree <= 2 times a scale.  Exact over square-root towers whenever the
    needed roots exist in depth <= 4; float backend otherwise."""
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if var is None:
        var = "u" if p.degu > 0 or p.degv <= 0 else "v"
    coeffs = _scalar_coeffs(p, var)
    if len(coeffs) == 1:
        return RealFactorization([], coeffs[0], p.backend, var)

    # peel zero roots
    nzero = 0
    while coeffs[nzero].is_zero():
        nzero += 1
    coeffs = coeffs[nzero:]
    lead = coeffs[-1]
    float_mode = is_float_backed(p)

    zero_factors = [(_poly_from_coeffs([0, 1] if not float_mode
                                       else [FloatScalar(0.0), FloatScalar(1.0)], var),
                     nzero)] if nzero else []
    if len(coeffs) == 1:
        return RealFactorization(zero_factors, lead, p.backend, var)

    inv = lead.inv()
    monic_coeffs = [c * inv for c in coeffs]

    if not float_mode:
        found = _factor_monic_exact(monic_coeffs, var)
        if found is not None:
            fact = RealFactorization(zero_factors + _group(found), lead, "exact", var)
            assert fact.product() == p
            return fact

    fact = RealFactorization(zero_factors + _group(_float_factors(monic_coeffs, var)),
                             FloatScalar(lead.to_float()), "float", var)
    prod = fact.product()
    bound = 1e-9 * max(1.0, *(abs(c.w.to_float()) for c in p.coeffs.values()))
    for ij in set(prod.coeffs) | set(p.coeffs):
        delta = prod.coefficient(*ij).w.to_float() - p.coefficient(*ij).w.to_float()
        assert abs(delta) <= bound, f"float factorization residual {delta} exceeds {bound}"
    return fact
