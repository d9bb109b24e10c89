"""Constructive factorization of norm triples and Pythagorean 6-tuples.

A *norm triple* (P, Q, R) is a quaternion polynomial Q together with real
polynomials P, R satisfying Q*conj(Q) = P*R.  A *Pythagorean tuple* is six
real polynomials with X1^2 + ... + X5^2 = X6^2; the two notions correspond
by a linear change of coordinates (tuple_to_triple / triple_to_tuple).

The solvers factor Q into A*B*C*D with matching norm products:

    (P, Q, R) = (|A*C|^2 * D,  A*B*C*D,  |B|^2 * D)

possibly with the P and R slots exchanged, and possibly after a short
preparatory sequence of elementary triple operations (constant shifts of Q
by multiples of R, exchanging P and R, dividing out common real factors).
The preparatory sequence plus the factors form a SolveCertificate that can
be replayed and checked independently of how it was found.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import (
    ConstraintViolated,
    DegreeOutOfRange,
    ExactnessUnavailable,
    HypothesisViolated,
    InvariantViolated,
    NoSplit,
    ParseError,
)
from .quatpoly import Q_I, Q_J, Q_K, Q_ONE, QPoly, Quaternion
from .realpoly import (
    bivariate_gcd,
    divides,
    factor_real_univariate,
    gcd_with_components,
    is_float_backed,
    monic,
    try_divide,
)

FLOAT_TOL = 1e-9

_ONE = QPoly.one()
_ZERO = QPoly.zero()
_IP = QPoly.constant(Q_I)
_JP = QPoly.constant(Q_J)
_KP = QPoly.constant(Q_K)


# --- small helpers -------------------------------------------------------

def _as_qpoly(x) -> QPoly:
    if isinstance(x, QPoly):
        return x
    if isinstance(x, Quaternion):
        return QPoly.constant(x)
    return QPoly.constant(Quaternion(x))


def _any_float(*polys) -> bool:
    return any(is_float_backed(p) for p in polys)


def _magnitude(p: QPoly) -> float:
    out = 1.0
    for q in p.coeffs.values():
        for x in q.to_floats():
            out = max(out, abs(x))
    return out


def _close(a: QPoly, b: QPoly, tol: float = FLOAT_TOL) -> bool:
    bound = tol * max(_magnitude(a), _magnitude(b))
    diff = a - b
    return all(abs(x) <= bound
               for q in diff.coeffs.values() for x in q.to_floats())


def _peq(a: QPoly, b: QPoly) -> bool:
    """Polynomial equality: structural for exact scalars, 1e-9-relative
    coefficientwise for float-backed ones."""
    if _any_float(a, b):
        return _close(a, b)
    return a == b


def _from_components(c0: QPoly, c1: QPoly, c2: QPoly, c3: QPoly) -> QPoly:
    return c0 + c1 * _IP + c2 * _JP + c3 * _KP


def _divide_real(p: QPoly, d: QPoly) -> QPoly:
    quo = try_divide(p, d)
    if quo is None:
        raise HypothesisViolated(
            f"{d.text()} does not divide {p.text()} exactly")
    return quo


def _divide_quat(q: QPoly, d: QPoly) -> QPoly:
    """Componentwise exact division of q by a real polynomial d."""
    return _from_components(*(_divide_real(c, d) for c in q.components()))


def _const_inverse(d: QPoly) -> QPoly:
    c = d.constant_coefficient()
    if not d.is_constant() or c.is_zero():
        raise HypothesisViolated(f"{d.text()} is not an invertible constant")
    return QPoly.constant(c.inv())


# --- triples and tuples --------------------------------------------------

class Triple:
    """Real P, R and quaternionic Q with Q*conj(Q) = P*R.

    The identity is checked on construction: structurally for exact
    coefficients, to 1e-9 for float-backed ones.
    """

    __slots__ = ("p", "q", "r")

    def __init__(self, p, q, r):
        p, q, r = _as_qpoly(p), _as_qpoly(q), _as_qpoly(r)
        if not p.is_real():
            raise InvariantViolated(f"P = {p.text()} is not real")
        if not r.is_real():
            raise InvariantViolated(f"R = {r.text()} is not real")
        if not _peq(q.norm_poly(), p * r):
            raise InvariantViolated(
                "norm identity Q*conj(Q) = P*R fails for "
                f"P={p.text()}, Q={q.text()}, R={r.text()}")
        self.p = p
        self.q = q
        self.r = r

    @classmethod
    def _make(cls, p: QPoly, q: QPoly, r: QPoly) -> "Triple":
        # for operations that preserve the norm identity; skips the check
        out = object.__new__(cls)
        out.p, out.q, out.r = p, q, r
        return out

    def backend(self) -> str:
        return "float" if _any_float(self.p, self.q, self.r) else "exact"

    def swap_pr(self) -> "Triple":
        return Triple._make(self.r, self.q, self.p)

    def swap_vars(self) -> "Triple":
        return Triple._make(self.p.swap_vars(), self.q.swap_vars(),
                            self.r.swap_vars())

    def __eq__(self, other):
        if not isinstance(other, Triple):
            return NotImplemented
        return self.p == other.p and self.q == other.q and self.r == other.r

    __hash__ = None  # float components compare with tolerance

    def text(self) -> str:
        return f"({self.p.text()}, {self.q.text()}, {self.r.text()})"

    def __repr__(self):
        return f"Triple{self.text()}"


def transform(t: Triple, shift) -> Triple:
    """Shift Q by a multiple of R, keeping R and correcting P:

    (P, Q, R) -> (P - T*conj(Q) - Q*conj(T) + T*R*conj(T), Q - T*R, R).

    Preserves the norm identity for any quaternion polynomial T; applying
    the shift -T afterwards restores the input.
    """
    tt = _as_qpoly(shift)
    p = t.p - tt * t.q.conj() - t.q * tt.conj() + tt * t.r * tt.conj()
    return Triple._make(p, t.q - tt * t.r, t.r)


class PythTuple:
    """Six real polynomials with X1^2 + X2^2 + X3^2 + X4^2 + X5^2 = X6^2."""

    __slots__ = ("xs",)

    def __init__(self, xs):
        xs = tuple(_as_qpoly(x) for x in xs)
        if len(xs) != 6:
            raise InvariantViolated(f"expected 6 polynomials, got {len(xs)}")
        for x in xs:
            if not x.is_real():
                raise InvariantViolated(f"component {x.text()} is not real")
        lhs = _ZERO
        for x in xs[:5]:
            lhs = lhs + x * x
        if not _peq(lhs, xs[5] * xs[5]):
            raise InvariantViolated(
                "sum of squares of the first five components does not "
                "equal the square of the sixth")
        self.xs = xs

    def backend(self) -> str:
        return "float" if _any_float(*self.xs) else "exact"

    def __eq__(self, other):
        if not isinstance(other, PythTuple):
            return NotImplemented
        return self.xs == other.xs

    __hash__ = None

    def __repr__(self):
        return "PythTuple(" + ", ".join(x.text() for x in self.xs) + ")"

    def to_json_dict(self) -> dict:
        return {"tuple": [x.to_json_dict() for x in self.xs]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json_dict(cls, data: dict) -> "PythTuple":
        try:
            entries = data["tuple"]
        except (TypeError, KeyError) as exc:
            raise ParseError("missing 'tuple' entry") from exc
        return cls([QPoly.from_json_dict(e) for e in entries])

    @classmethod
    def from_json(cls, text: str) -> "PythTuple":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        return cls.from_json_dict(data)


def tuple_to_triple(x: PythTuple) -> Triple:
    """(X1..X6) -> (P, Q, R) = (X6 - X5, X1 + X2 i + X3 j + X4 k, X6 + X5)."""
    q = _from_components(x.xs[0], x.xs[1], x.xs[2], x.xs[3])
    return Triple._make(x.xs[5] - x.xs[4], q, x.xs[5] + x.xs[4])


def triple_to_tuple(t: Triple) -> PythTuple:
    """Inverse of tuple_to_triple (halves the P/R combinations)."""
    if t.backend() == "float":
        half = QPoly.constant(Quaternion(0.5))
    else:
        half = QPoly.constant(Quaternion(Fraction(1, 2)))
    x5 = (t.r - t.p) * half
    x6 = (t.r + t.p) * half
    return PythTuple((*t.q.components(), x5, x6))


# --- certificate steps ---------------------------------------------------

class ShiftByT:
    """Certificate step: Q loses T*R, P is corrected to keep the identity."""

    __slots__ = ("t",)
    op = "shift"

    def __init__(self, t):
        self.t = _as_qpoly(t)

    def apply(self, triple: Triple) -> Triple:
        return transform(triple, self.t)

    def to_json_dict(self) -> dict:
        return {"op": self.op, "t": self.t.to_json_dict()}

    def __eq__(self, other):
        return isinstance(other, ShiftByT) and self.t == other.t

    __hash__ = None

    def __repr__(self):
        return f"ShiftByT({self.t.text()})"


class SwapPR:
    """Certificate step: exchange the P and R slots (Q is unchanged)."""

    __slots__ = ()
    op = "swap_pr"

    def apply(self, triple: Triple) -> Triple:
        return triple.swap_pr()

    def to_json_dict(self) -> dict:
        return {"op": self.op}

    def __eq__(self, other):
        return isinstance(other, SwapPR)

    __hash__ = None

    def __repr__(self):
        return "SwapPR()"


class DivideCommon:
    """Certificate step: divide out a common real factor d.

    mode "all" divides P, Q, R by d; mode "qr2" divides Q by d and R by
    d^2, leaving P untouched.  Both preserve the norm identity.
    """

    __slots__ = ("d", "mode")
    op = "divide"

    def __init__(self, d, mode: str = "all"):
        d = _as_qpoly(d)
        if not d.is_real():
            raise InvariantViolated(f"divisor {d.text()} is not real")
        if mode not in ("all", "qr2"):
            raise InvariantViolated(f"unknown division mode {mode!r}")
        self.d = d
        self.mode = mode

    def apply(self, triple: Triple) -> Triple:
        if self.mode == "all":
            return Triple._make(_divide_real(triple.p, self.d),
                          _divide_quat(triple.q, self.d),
                          _divide_real(triple.r, self.d))
        return Triple._make(triple.p,
                      _divide_quat(triple.q, self.d),
                      _divide_real(triple.r, self.d * self.d))

    def to_json_dict(self) -> dict:
        return {"op": self.op, "d": self.d.to_json_dict(), "mode": self.mode}

    def __eq__(self, other):
        return (isinstance(other, DivideCommon) and self.d == other.d
                and self.mode == other.mode)

    __hash__ = None

    def __repr__(self):
        return f"DivideCommon({self.d.text()}, {self.mode!r})"


class Relabel:
    """Certificate step: exchange the roles of the two variables."""

    __slots__ = ()
    op = "relabel"

    def apply(self, triple: Triple) -> Triple:
        return triple.swap_vars()

    def to_json_dict(self) -> dict:
        return {"op": self.op}

    def __eq__(self, other):
        return isinstance(other, Relabel)

    __hash__ = None

    def __repr__(self):
        return "Relabel()"


def step_from_json_dict(data: dict):
    try:
        op = data["op"]
    except (TypeError, KeyError) as exc:
        raise ParseError("certificate step without 'op'") from exc
    if op == ShiftByT.op:
        return ShiftByT(QPoly.from_json_dict(data["t"]))
    if op == SwapPR.op:
        return SwapPR()
    if op == DivideCommon.op:
        return DivideCommon(QPoly.from_json_dict(data["d"]),
                            data.get("mode", "all"))
    if op == Relabel.op:
        return Relabel()
    raise ParseError(f"unknown certificate step {op!r}")


class SolveCertificate:
    """Factors (A, B, C, D) plus the preparatory steps they certify.

    Replaying ``transforms`` in order on the input triple must produce
    (|A*C|^2 D, A*B*C*D, |B|^2 D) when orientation is "PQR", and the same
    three products with the P and R slots exchanged when it is "RQP".
    """

    __slots__ = ("a", "b", "c", "d", "transforms", "orientation")

    def __init__(self, a, b, c, d, transforms=(), orientation="PQR"):
        d = _as_qpoly(d)
        if not d.is_real():
            raise InvariantViolated(f"D = {d.text()} is not real")
        if orientation not in ("PQR", "RQP"):
            raise InvariantViolated(f"unknown orientation {orientation!r}")
        self.a = _as_qpoly(a)
        self.b = _as_qpoly(b)
        self.c = _as_qpoly(c)
        self.d = d
        self.transforms = tuple(transforms)
        self.orientation = orientation

    def products(self) -> tuple[QPoly, QPoly, QPoly]:
        """(|A*C|^2 D, A*B*C*D, |B|^2 D) in P-slot-first order."""
        pa = (self.a * self.c).norm_poly() * self.d
        qq = self.a * self.b * self.c * self.d
        rr = self.b.norm_poly() * self.d
        if self.orientation == "RQP":
            pa, rr = rr, pa
        return pa, qq, rr

    def replay(self, t: Triple) -> Triple:
        for step in self.transforms:
            t = step.apply(t)
        return t

    def verify(self, t: Triple) -> bool:
        final = self.replay(t)
        pa, qq, rr = self.products()
        return (_peq(final.p, pa) and _peq(final.q, qq)
                and _peq(final.r, rr))

    def __eq__(self, other):
        if not isinstance(other, SolveCertificate):
            return NotImplemented
        return (self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d
                and self.transforms == other.transforms
                and self.orientation == other.orientation)

    __hash__ = None

    def __repr__(self):
        return (f"SolveCertificate(A={self.a.text()}, B={self.b.text()}, "
                f"C={self.c.text()}, D={self.d.text()}, "
                f"transforms={list(self.transforms)!r}, "
                f"orientation={self.orientation!r})")

    def to_json_dict(self) -> dict:
        return {
            "a": self.a.to_json_dict(),
            "b": self.b.to_json_dict(),
            "c": self.c.to_json_dict(),
            "d": self.d.to_json_dict(),
            "orientation": self.orientation,
            "transforms": [s.to_json_dict() for s in self.transforms],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json_dict(cls, data: dict) -> "SolveCertificate":
        try:
            return cls(QPoly.from_json_dict(data["a"]),
                       QPoly.from_json_dict(data["b"]),
                       QPoly.from_json_dict(data["c"]),
                       QPoly.from_json_dict(data["d"]),
                       [step_from_json_dict(s) for s in data["transforms"]],
                       data["orientation"])
        except (TypeError, KeyError) as exc:
            raise ParseError(f"malformed certificate: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "SolveCertificate":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        return cls.from_json_dict(data)


def tuple_from_ABCD(a, b, c, d, require_r22: bool = False) -> PythTuple:
    """Assemble the tuple with X1..X4 the components of 2*A*B*C*D,
    X5 = (|B|^2 - |A*C|^2) D and X6 = (|B|^2 + |A*C|^2) D."""
    a, b, c, d = (_as_qpoly(x) for x in (a, b, c, d))
    if not d.is_real():
        raise ConstraintViolated(f"D = {d.text()} must be real")
    q = a * b * c * d
    nb = b.norm_poly() * d
    nac = (a * c).norm_poly() * d
    xs = (*(q + q).components(), nb - nac, nb + nac)
    if require_r22:
        for x in xs:
            if not x.in_hmn(2, 2):
                raise ConstraintViolated(
                    f"component {x.text()} exceeds degree (2, 2)")
    return PythTuple(xs)


# --- one-variable solver -------------------------------------------------

def _single_var(t: Triple) -> str:
    if all(p.degv <= 0 for p in (t.p, t.q, t.r)):
        return "u"
    if all(p.degu <= 0 for p in (t.p, t.q, t.r)):
        return "v"
    raise DegreeOutOfRange(f"triple {t.text()} is not univariate")


def _solve_univariate(t: Triple, var: str):
    if t.q.is_zero():
        if t.r.is_zero():
            return _ONE, _ZERO, t.p
        if t.p.is_zero():
            return _ZERO, _ONE, t.r
        raise HypothesisViolated("Q = 0 but neither P nor R vanishes")
    if t.r.deg(var) <= t.q.deg(var):
        quo, _ = t.q.divmod_by_real(t.r, var)
        a1, b, d = _solve_univariate(transform(t, quo), var)
        return a1 + quo * b.conj(), b, d
    # deg P <= deg Q < deg R: solve the conjugate-reflected triple, whose
    # R slot is small, and swap the factor roles back at the end.
    tc = Triple._make(t.r, t.q.conj(), t.p)
    quo, _ = tc.q.divmod_by_real(tc.r, var)
    a1, b, d = _solve_univariate(transform(tc, quo), var)
    a2 = a1 + quo * b.conj()
    return b.conj(), a2.conj(), d


def solve_univariate(t: Triple) -> tuple[QPoly, QPoly, QPoly]:
    """Factor a one-variable triple as (|A|^2 D, A*B*D, |B|^2 D).

    Peels quotients of Q by whichever of P, R has degree at most deg Q
    (preferring R) until Q vanishes, then reassembles the factors.
    """
    var = _single_var(t)
    a, b, d = _solve_univariate(t, var)
    if not (_peq(a.norm_poly() * d, t.p) and _peq(a * b * d, t.q)
            and _peq(b.norm_poly() * d, t.r)):
        raise HypothesisViolated(
            "one-variable factors do not reproduce the triple")
    return a, b, d


# --- bilinear splitting --------------------------------------------------

def _linear_u(lead: Quaternion, const: Quaternion) -> QPoly:
    return QPoly({(1, 0): lead, (0, 0): const})


def _linear_v(lead: Quaternion, const: Quaternion) -> QPoly:
    return QPoly({(0, 1): lead, (0, 0): const})


def _bilinear_candidates(q: QPoly):
    """Candidate splittings of a (<=1, <=1)-degree q into a v-factor and a
    u-factor: (vfactor, ufactor, order) with order "left" when
    q = vfactor * ufactor and "right" when q = ufactor * vfactor.

    Searches a monic right u-factor, then a monic right v-factor, then the
    two monic left factors, then the one-variable degenerate shapes; every
    candidate's product is verified before it is yielded.
    """
    q11 = q.coefficient(1, 1)
    q10 = q.coefficient(1, 0)
    q01 = q.coefficient(0, 1)
    q00 = q.coefficient(0, 0)

    def checked(av, bu, order):
        prod = av * bu if order == "left" else bu * av
        if prod == q:
            return av, bu, order
        return None

    out = []
    # right factor u + beta: q = (q11 v + q10)(u + beta)
    if not (q11.is_zero() and q10.is_zero()):
        if not q11.is_zero():
            beta, ok = q11.inv() * q01, True
        else:
            beta, ok = q10.inv() * q00, q01.is_zero()
        if ok:
            out.append(checked(_linear_v(q11, q10), _linear_u(Q_ONE, beta),
                               "left"))
    # right factor v + gamma: q = (q11 u + q01)(v + gamma)
    if not (q11.is_zero() and q01.is_zero()):
        if not q11.is_zero():
            gamma, ok = q11.inv() * q10, True
        else:
            gamma, ok = q01.inv() * q00, q10.is_zero()
        if ok:
            out.append(checked(_linear_v(Q_ONE, gamma), _linear_u(q11, q01),
                               "right"))
    # left factor u + beta: q = (u + beta)(q11 v + q10)
    if not (q11.is_zero() and q10.is_zero()):
        if not q11.is_zero():
            beta, ok = q01 * q11.inv(), True
        else:
            beta, ok = q00 * q10.inv(), q01.is_zero()
        if ok:
            out.append(checked(_linear_v(q11, q10), _linear_u(Q_ONE, beta),
                               "right"))
    # left factor v + gamma: q = (v + gamma)(q11 u + q01)
    if not (q11.is_zero() and q01.is_zero()):
        if not q11.is_zero():
            gamma, ok = q10 * q11.inv(), True
        else:
            gamma, ok = q00 * q01.inv(), q10.is_zero()
        if ok:
            out.append(checked(_linear_v(Q_ONE, gamma), _linear_u(q11, q01),
                               "left"))
    # one-variable degenerate shapes
    if q.degu <= 0:
        out.append((q, _ONE, "left"))
    elif q.degv <= 0:
        out.append((_ONE, q, "left"))
    return [c for c in out if c is not None]


def split_bilinear(q: QPoly, p: QPoly, r: QPoly):
    """Split q (degree <= 1 in each variable) as a v-factor times a
    u-factor consistent with the norm products: q*conj(q) = p*r with p
    real in v and r real in u, both of degree <= 2.

    Returns (vfactor, ufactor, order, scale): q = vfactor * ufactor when
    order is "left", q = ufactor * vfactor when it is "right", and scale
    is the nonzero real constant r / |ufactor|^2 = |vfactor|^2 / p.
    """
    if q.is_zero():
        raise NoSplit("cannot split the zero polynomial")
    if q.degu > 1 or q.degv > 1:
        raise DegreeOutOfRange(
            f"{q.text()} has degree above 1 in some variable")
    if not p.is_real() or p.degu > 0 or p.deg("v") > 2:
        raise DegreeOutOfRange(f"{p.text()} is not real of degree <= 2 in v")
    if not r.is_real() or r.degv > 0 or r.deg("u") > 2:
        raise DegreeOutOfRange(f"{r.text()} is not real of degree <= 2 in u")
    for av, bu, order in _bilinear_candidates(q):
        scale = try_divide(r, bu.norm_poly())
        if scale is None or not scale.is_constant() or scale.is_zero():
            continue
        if not _peq(av.norm_poly(), p * scale):
            continue
        return av, bu, order, scale
    raise NoSplit(f"{q.text()} admits no compatible bilinear splitting")


# --- Q linear in v -------------------------------------------------------

def _two_factor_split(t: Triple):
    """Factor Q = F*G*D for a triple with R real in u of degree <= 2 and Q
    of degree <= 1 in v.  Returns (F, G, D, side) with side "P" when
    |F|^2 D = P (and |G|^2 D = R), side "R" for the exchanged matching.
    """
    if t.r.is_zero():
        if not t.q.is_zero():
            raise HypothesisViolated("R = 0 forces Q = 0")
        return _ONE, _ZERO, t.p, "P"
    quo, _ = t.q.divmod_by_real(t.r, "u")
    t2 = transform(t, quo)
    if t2.q.is_zero():
        return quo, _ONE, t.r, "P"
    av, bu, order, scale = split_bilinear(t2.q, t2.p, t.r)
    if order == "left":
        f = av * _const_inverse(scale) + quo * bu.conj()
        out = (f, bu, scale, "P")
    else:
        g = av * _const_inverse(scale) + bu.conj() * quo
        out = (bu, g, scale, "R")
    f, g, d, side = out
    pn, rn = (f, g) if side == "P" else (g, f)
    if not (_peq(f * g * d, t.q) and _peq(pn.norm_poly() * d, t.p)
            and _peq(rn.norm_poly() * d, t.r)):
        raise HypothesisViolated("two-factor products do not match")
    return out


def _factor_linear_v(t: Triple, exact: bool):
    """Factor Q = A*B*C*D with A, C in H[u] and P = |B|^2 D,
    R = |A*C|^2 D, for a triple with R real in u (no real roots, no
    nonconstant common factor with Q) and P genuinely involving v."""
    deg_r = t.r.deg("u")
    if deg_r <= 2:
        f, g, d, side = _two_factor_split(t)
        if side == "P":
            return _ONE, f, g, d
        return f, g, _ONE, d
    fact = factor_real_univariate(t.r, "u")
    if fact.backend == "float" and exact:
        raise ExactnessUnavailable(
            f"cannot factor {t.r.text()} exactly; rerun in approx mode")
    factors = fact.all_factors()
    head = factors[0]
    if head.deg("u") != 2:
        raise HypothesisViolated(
            f"R has the real root factor {head.text()}; common factors "
            "were not fully cancelled")
    rest = QPoly.constant(Quaternion(fact.scale))
    for f in factors[1:]:
        rest = rest * f
    f, g, d24, side = _two_factor_split(Triple._make(t.p * rest, t.q, head))
    if not d24.is_constant() or d24.is_zero():
        raise HypothesisViolated(
            "nonconstant scale while splitting off a factor of R")
    if side == "R":
        # f is the u-only left factor with |f|^2 d24 = head
        a, b, c, d = _factor_linear_v(Triple._make(t.p, g * d24, rest * d24),
                                      exact)
        return f * a, b, c, d
    # g is the u-only right factor with |g|^2 d24 = head
    a, b, c, d = _factor_linear_v(Triple._make(t.p, f * d24, rest * d24), exact)
    return a, b, c * g, d


def _pick_common_factor(g: QPoly, exact: bool) -> QPoly:
    """An irreducible (or at worst whole) real factor of a nonconstant
    monic gcd, for the common-divisor cancellation loop."""
    var = None
    if g.degv <= 0:
        var = "u"
    elif g.degu <= 0:
        var = "v"
    if var is not None:
        fact = factor_real_univariate(g, var)
        if fact.backend == "float":
            if exact:
                raise ExactnessUnavailable(
                    f"cannot factor common divisor {g.text()} exactly")
            return g
        return fact.all_factors()[0]
    return g


def _cancel_common(work: Triple, exact: bool):
    """Divide out common real factors of Q and R; returns the reduced
    triple and the (factor, mode) list in application order."""
    applied = []
    while True:
        g = gcd_with_components(work.q, work.r)
        if g.is_constant():
            return work, applied
        d = _pick_common_factor(g, exact)
        if divides(d, work.p):
            work = Triple._make(_divide_real(work.p, d), _divide_quat(work.q, d),
                          _divide_real(work.r, d))
            applied.append((d, "all"))
        elif divides(d * d, work.r):
            work = Triple._make(work.p, _divide_quat(work.q, d),
                          _divide_real(work.r, d * d))
            applied.append((d, "qr2"))
        else:
            raise HypothesisViolated(
                f"common factor {d.text()} divides neither P nor R twice")


def _degenerate_zero_q(t: Triple, steps):
    if t.r.is_zero():
        return SolveCertificate(_ONE, _ZERO, _ONE, t.p, steps, "PQR")
    if t.p.is_zero():
        return SolveCertificate(_ONE, _ZERO, _ONE, t.r, steps, "RQP")
    raise HypothesisViolated("Q = 0 but neither P nor R vanishes")


def solve_linear_in_v(t: Triple, exact: bool = True) -> SolveCertificate:
    """Solve a triple whose Q has degree at most 1 in v.

    Alternates cancelling common real factors of Q and R (recorded as
    DivideCommon steps) with orienting the triple so that R is free of v
    (recording SwapPR); a swap exposes the old P to the cancellation, so
    another round may follow it.  The reduced triple is then factored as
    Q = A*B*C*D with A, C free of v, and the certificate replays the
    recorded steps with the orientation of the final matching.
    """
    if t.q.degv > 1:
        raise DegreeOutOfRange(
            f"Q = {t.q.text()} has degree above 1 in v")
    if exact and t.backend() == "float":
        raise ExactnessUnavailable(
            "float-backed input; rerun in approx mode")
    steps: list = []
    if t.q.is_zero():
        cert = _degenerate_zero_q(t, steps)
    else:
        work = t
        while True:
            work, applied = _cancel_common(work, exact)
            steps.extend(DivideCommon(d, mode) for d, mode in applied)
            if work.q.degv <= 0 or work.r.degv <= 0:
                break
            if work.p.degv > 0:
                raise HypothesisViolated(
                    "neither P nor R is free of v after cancellation")
            work = work.swap_pr()
            steps.append(SwapPR())
        if work.q.degv <= 0:
            a, b, d = solve_univariate(work)
            cert = SolveCertificate(a, b, _ONE, d, steps, "PQR")
        else:
            a, b, c, d = _factor_linear_v(work, exact)
            cert = SolveCertificate(a, b, c, d, steps, "RQP")
    if not cert.verify(t):
        raise HypothesisViolated(
            "certificate replay does not reproduce the products")
    return cert


def _solve_linear_v_absorbed(t: Triple, exact: bool):
    """Like solve_linear_in_v but with every preparatory step folded into
    the factors: returns (A, B, C, D, orientation) certifying t directly,
    with no transform steps."""
    pending: list = []  # (divisor, mode, slots-swapped-when-cancelled)
    swapped = False
    work = t
    while True:
        work, applied = _cancel_common(work, exact)
        pending.extend((d, mode, swapped) for d, mode in applied)
        if work.q.degv <= 0 or work.r.degv <= 0:
            break
        if work.p.degv > 0:
            raise HypothesisViolated(
                "neither P nor R is free of v after cancellation")
        work = work.swap_pr()
        swapped = True
    if work.q.degv <= 0:
        a, b, d = solve_univariate(work)
        c = _ONE
        univariate = True
    else:
        a, b, c, d = _factor_linear_v(work, exact)
        univariate = False
    # Re-attach cancelled factors.  A mode-"all" factor goes to D; a
    # squared factor re-enters on the side whose norm rebuilds the slot
    # that was R when it was cancelled.
    for dd, mode, s in reversed(pending):
        if mode == "all":
            d = d * dd
            continue
        r_side = s == swapped
        if (r_side and univariate) or not (r_side or univariate):
            b = b * dd
        else:
            if dd.degv > 0:
                raise HypothesisViolated(
                    "cancelled factor carries v but must rejoin a factor "
                    "that is free of v")
            a = a * dd
    # Orientation of the products relative to the input slots: the final
    # work.p equals |A|^2 D after the univariate solve and |B|^2 D after
    # the bivariate one, and a swap exchanges what P and R refer to.
    p_matches_ac = univariate != swapped
    return a, b, c, d, ("PQR" if p_matches_ac else "RQP")


def _verify_or_raise(cert: SolveCertificate, t: Triple) -> SolveCertificate:
    if not cert.verify(t):
        raise HypothesisViolated(
            "certificate replay does not reproduce the products")
    return cert


def _finalize_22(cert: SolveCertificate, t: Triple) -> SolveCertificate:
    _verify_or_raise(cert, t)
    for name, poly in (("A", cert.a), ("B", cert.b), ("C", cert.c)):
        if not poly.in_hmn(1, 1):
            raise HypothesisViolated(
                f"factor {name} = {poly.text()} leaves degree (1, 1)")
    if not cert.d.in_hmn(2, 2):
        raise HypothesisViolated(
            f"factor D = {cert.d.text()} leaves degree (2, 2)")
    return cert


def solve_22(x: PythTuple, exact: bool = True) -> SolveCertificate:
    """Solve a Pythagorean tuple with all components of degree <= 2 in
    each variable.

    Converts to a triple, cancels common real factors, kills the leading
    coefficient of the v^2 part of Q with a constant shift, orients so the
    v^2 part of R has degree <= 1 in u, removes the v^2 part entirely with
    an unrecorded polynomial shift, factors the remainder (degree <= 1 in
    v), and absorbs the polynomial shift back into the factors, leaving a
    final constant shift.  The recorded steps are constant shifts, P/R
    exchanges, and common-factor divisions only.
    """
    for comp in x.xs:
        if not comp.in_hmn(2, 2):
            raise DegreeOutOfRange(
                f"component {comp.text()} exceeds degree (2, 2)")
    if exact and x.backend() == "float":
        raise ExactnessUnavailable(
            "float-backed input; rerun in approx mode")
    t = tuple_to_triple(x)
    steps: list = []
    if t.q.is_zero():
        return _finalize_22(_degenerate_zero_q(t, steps), t)
    work = t
    while True:
        g = gcd_with_components(work.q, bivariate_gcd(work.p, work.r))
        if g.is_constant():
            break
        step = DivideCommon(g, "all")
        steps.append(step)
        work = step.apply(work)
    if work.q.degv <= 1:
        sub = solve_linear_in_v(work, exact)
        cert = SolveCertificate(sub.a, sub.b, sub.c, sub.d,
                                (*steps, *sub.transforms), sub.orientation)
        return _finalize_22(cert, t)
    if work.q.degu <= 1:
        # mirror the two-variable roles, solve, and mirror everything back
        sub = solve_linear_in_v(work.swap_vars(), exact)
        back = []
        for step in sub.transforms:
            if isinstance(step, ShiftByT):
                back.append(ShiftByT(step.t.swap_vars()))
            elif isinstance(step, DivideCommon):
                back.append(DivideCommon(step.d.swap_vars(), step.mode))
            else:
                back.append(step)
        cert = SolveCertificate(sub.a.swap_vars(), sub.b.swap_vars(),
                                sub.c.swap_vars(), sub.d.swap_vars(),
                                (*steps, *back), sub.orientation)
        return _finalize_22(cert, t)

    # main path: Q has degree 2 in v
    q2 = work.q.v_coefficient(2)
    r2 = work.r.v_coefficient(2)
    if q2.degu >= 2:
        lead = r2.coefficient(2, 0)
        if lead.is_zero():
            raise HypothesisViolated(
                "v^2 part of R lacks the u^2 term needed to kill the "
                "leading coefficient of the v^2 part of Q")
        shift = q2.coefficient(2, 0) * lead.inv()
        step = ShiftByT(shift)
        work = step.apply(work)
        steps.append(step)
        q2 = work.q.v_coefficient(2)
    if work.r.v_coefficient(2).degu > 1:
        if work.p.v_coefficient(2).degu > 1:
            raise HypothesisViolated(
                "v^2 parts of both P and R keep degree 2 after the shift")
        work = work.swap_pr()
        steps.append(SwapPR())
    r2 = work.r.v_coefficient(2)
    if r2.is_zero():
        if not q2.is_zero():
            raise HypothesisViolated(
                "v^2 part of R vanishes but the v^2 part of Q does not")
        t1 = _ZERO
    else:
        t1, rem = q2.divmod_by_real(r2, "u")
        if not rem.is_zero():
            raise HypothesisViolated(
                "v^2 part of R does not divide the v^2 part of Q")
    inner = transform(work, t1)
    if inner.q.is_zero():
        # Q is exactly T1 * R
        cert = SolveCertificate(t1, _ONE, _ONE, work.r, steps, "PQR")
        return _finalize_22(cert, t)
    a, b, cp, d, orientation = _solve_linear_v_absorbed(inner, exact)
    if orientation != "PQR":
        # the v^2 part of R survives into inner.r, so its norm product
        # cannot land on the v-free side
        raise HypothesisViolated(
            "R ended up matched against a v-free norm product")
    if not d.is_constant():
        raise HypothesisViolated(
            "nonconstant D despite cancelled common factors")
    if a.deg("u") <= 1:
        s, t_final = t1.left_divmod(a, "u")
        cp = cp + b.conj() * s
    elif cp.deg("u") <= 1:
        s, t_final = t1.right_divmod(cp, "u")
        a = a + s * b.conj()
    else:
        raise HypothesisViolated(
            "neither outer factor is linear enough to absorb the shift")
    steps.append(ShiftByT(t_final))
    return _finalize_22(SolveCertificate(a, b, cp, d, steps, "PQR"), t)


# --- reducibility of Q with deg_v <= 1 -----------------------------------

class Reducible:
    """Witnessed factorization into two nonconstant factors."""

    __slots__ = ("factors",)
    kind = "reducible"

    def __init__(self, factors):
        self.factors = tuple(factors)

    def __repr__(self):
        return ("Reducible(" +
                " * ".join(f"({f.text()})" for f in self.factors) + ")")


class RealTimesConstant:
    """Q is a real polynomial times a constant quaternion."""

    __slots__ = ("real", "const")
    kind = "real_times_constant"

    def __init__(self, real: QPoly, const: Quaternion):
        self.real = real
        self.const = const

    def __repr__(self):
        return (f"RealTimesConstant({self.real.text()}, "
                f"{self.const.text()})")


class Irreducible:
    """No factorization into two nonconstant factors exists."""

    __slots__ = ()
    kind = "irreducible"

    def __repr__(self):
        return "Irreducible()"


def _real_content(q: QPoly) -> QPoly:
    out = _ZERO
    for comp in q.components():
        if comp.is_zero():
            continue
        out = comp if out.is_zero() else bivariate_gcd(out, comp)
        if out.is_constant():
            break
    return out


def _try_onesided_factor(q: QPoly, e: QPoly):
    """A factorization q = S*e or q = e*S by exact division with the
    conjugate, or None."""
    ne = e.norm_poly()
    if ne.is_zero():
        return None
    comps = [try_divide(c, ne) for c in (q * e.conj()).components()]
    if all(c is not None for c in comps):
        s = _from_components(*comps)
        if s * e == q and not s.is_constant():
            return (s, e)
    comps = [try_divide(c, ne) for c in (e.conj() * q).components()]
    if all(c is not None for c in comps):
        s = _from_components(*comps)
        if e * s == q and not s.is_constant():
            return (e, s)
    return None


def is_reducible_linear_v(q: QPoly):
    """Classify a nonzero Q of degree <= 1 in v as Reducible (with a
    witnessed two-factor splitting), RealTimesConstant, or Irreducible."""
    if q.is_zero():
        raise DegreeOutOfRange("the zero polynomial is not classified")
    if q.degv > 1:
        raise DegreeOutOfRange(
            f"Q = {q.text()} has degree above 1 in v")
    # real polynomial times a constant quaternion takes precedence
    comps = q.components()
    base = next(c for c in comps if not c.is_zero())
    gm, _ = monic(base)
    scalars = []
    for comp in comps:
        if comp.is_zero():
            scalars.append(0)
            continue
        quo = try_divide(comp, gm)
        if quo is None or not quo.is_constant():
            scalars = None
            break
        scalars.append(quo.constant_coefficient().w)
    if scalars is not None:
        const = Quaternion(*scalars)
        return RealTimesConstant(gm, const)
    # nonconstant real content is already a witness
    content = _real_content(q)
    if not content.is_constant():
        return Reducible((content, _divide_quat(q, content)))
    if q.degv <= 0:
        if q.deg("u") <= 1:
            return Irreducible()
        # degree >= 2 in u alone: peel a right factor through a quadratic
        # factor of the norm
        fact = factor_real_univariate(q.norm_poly(), "u")
        head = fact.all_factors()[0]
        quo, rem = q.divmod_by_real(head, "u")
        scale = try_divide(rem.norm_poly(), head)
        if (fact.backend == "float" or scale is None
                or not scale.is_constant() or scale.is_zero()):
            raise ExactnessUnavailable(
                f"cannot exhibit exact factors of {q.text()}")
        s = quo * rem.conj() * _const_inverse(scale) + _ONE
        if not s * rem == q:
            raise HypothesisViolated("peeled factors do not multiply back")
        return Reducible((s, rem))
    if q.degu <= 1:
        # exhaustive linear splitting search in both orders
        for av, bu, order in _bilinear_candidates(q):
            factors = (av, bu) if order == "left" else (bu, av)
            if any(f.is_constant() for f in factors):
                continue
            return Reducible(factors)
        return Irreducible()
    # deg_u >= 2 with v present: a one-sided u-only factor must have its
    # norm dividing every v-coefficient of |Q|^2
    norm = q.norm_poly()
    shared = _ZERO
    for j in range(3):
        coeff = norm.v_coefficient(j)
        if coeff.is_zero():
            continue
        shared = coeff if shared.is_zero() else bivariate_gcd(shared, coeff)
        if shared.is_constant():
            break
    if shared.is_constant():
        return Irreducible()
    fact = factor_real_univariate(shared, "u")
    if fact.backend == "float":
        raise ExactnessUnavailable(
            f"cannot factor {shared.text()} exactly")
    seen = []
    for head in fact.all_factors():
        if head in seen:
            continue
        seen.append(head)
        _, rem = q.divmod_by_real(head, "u")
        if rem.is_zero():
            continue
        for witness in (rem, rem.conj()):
            for av, bu, _ in _bilinear_candidates(witness):
                if bu.is_constant():
                    continue
                found = _try_onesided_factor(q, bu)
                if found is not None:
                    return Reducible(found)
    return Irreducible()
