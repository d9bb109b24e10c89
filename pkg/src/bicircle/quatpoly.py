"""Quaternions over exact scalars and bivariate quaternion polynomials.

Polynomials live in H[u, v]: quaternion coefficients, with the variables
commuting with each other and with the coefficients.  Coefficient maps are
sparse and zero-pruned, so equality is structural.  The degree bookkeeping
(degu/degv, with -inf for the zero polynomial) tracks membership in the
bidegree-bounded subspaces the factorization pipeline works in.

Division helpers:

- divmod_by_real: componentwise classical division by a nonzero real
  polynomial univariate in the chosen variable,
- left_divmod / right_divmod: one-sided division q = f*g + rem or
  q = g*f + rem by a divisor whose leading coefficient in the chosen
  variable is an invertible constant quaternion.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import (
    DivisorZero,
    LeadingCoefficientNotInvertible,
    NonRealNorm,
    NotDivisible,
    ParseError,
)
from .scalar import (EMPTY_TOWER, FLOAT_DROP, FieldElement, FloatScalar,
                     parse_scalar)

NEG_INF = float("-inf")


def _coerce_scalar(x):
    if isinstance(x, (FieldElement, FloatScalar)):
        return x
    if isinstance(x, (int, Fraction)):
        return FieldElement.rational(x)
    if isinstance(x, float):
        return FloatScalar(x)
    raise TypeError(f"cannot use {type(x).__name__} as a scalar")


class Quaternion:
    """A quaternion w + x*i + y*j + z*k over exact or float scalars."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w=0, x=0, y=0, z=0):
        comps = [_coerce_scalar(c) for c in (w, x, y, z)]
        if any(isinstance(c, FloatScalar) for c in comps):
            comps = [c if isinstance(c, FloatScalar) else FloatScalar(c.to_float())
                     for c in comps]
        self.w, self.x, self.y, self.z = comps

    # --- structure -------------------------------------------------------

    @property
    def backend(self) -> str:
        return self.w.backend

    def components(self):
        return (self.w, self.x, self.y, self.z)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components())

    def is_real(self) -> bool:
        return self.x.is_zero() and self.y.is_zero() and self.z.is_zero()

    def __eq__(self, other):
        if isinstance(other, Quaternion):
            return all(a == b for a, b in zip(self.components(), other.components()))
        if isinstance(other, (int, Fraction, float, FieldElement, FloatScalar)):
            return self.is_real() and self.w == _coerce_scalar(other)
        return NotImplemented

    __hash__ = None  # float components compare with tolerance

    # --- algebra ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    @staticmethod
    def _coerce(other):
        if isinstance(other, Quaternion):
            return other
        if isinstance(other, (int, Fraction, float, FieldElement, FloatScalar)):
            return Quaternion(other)
        return None

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.components()
        e, f, g, h = o.components()
        if all(type(s) is FieldElement and s.tower is EMPTY_TOWER
               for s in (a, b, c, d, e, f, g, h)):
            # all-rational fast path: plain Fraction arithmetic
            ar, br, cr, dr = (a.coords[0], b.coords[0], c.coords[0],
                              d.coords[0])
            er, fr, gr, hr = (e.coords[0], f.coords[0], g.coords[0],
                              h.coords[0])
            out = object.__new__(Quaternion)
            out.w = FieldElement.rational(ar * er - br * fr - cr * gr
                                          - dr * hr)
            out.x = FieldElement.rational(ar * fr + br * er + cr * hr
                                          - dr * gr)
            out.y = FieldElement.rational(ar * gr - br * hr + cr * er
                                          + dr * fr)
            out.z = FieldElement.rational(ar * hr + br * gr - cr * fr
                                          + dr * er)
            return out
        return Quaternion(
            a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g - b * h + c * e + d * f,
            a * h + b * g - c * f + d * e,
        )

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self):
        """The scalar |q|^2 = w^2 + x^2 + y^2 + z^2."""
        a, b, c, d = self.components()
        return a * a + b * b + c * c + d * d

    def inv(self) -> "Quaternion":
        n = self.norm()
        ninv = n.inv()  # raises DivisionByZero at q = 0
        c = self.conj()
        return Quaternion(c.w * ninv, c.x * ninv, c.y * ninv, c.z * ninv)

    def scale(self, s) -> "Quaternion":
        s = _coerce_scalar(s)
        return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)

    # --- conversion ------------------------------------------------------

    def to_floats(self) -> tuple[float, float, float, float]:
        return tuple(c.to_float() for c in self.components())

    def texts(self) -> list[str]:
        return [c.text() for c in self.components()]

    def text(self) -> str:
        parts = []
        for c, unit in zip(self.components(), ("", "i", "j", "k")):
            if c.is_zero():
                continue
            t = c.text()
            neg = t.startswith("-")
            if neg:
                t = t[1:]
            if " " in t:
                body = f"({t})" + (f"*{unit}" if unit else "")
            elif unit:
                body = f"{t}*{unit}" if t != "1" else unit
            else:
                body = t
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts) if parts else "0"

    def __repr__(self):
        return f"Quaternion({self.text()!r})"


Q_ZERO = Quaternion()
Q_ONE = Quaternion(1)
Q_I = Quaternion(0, 1)
Q_J = Quaternion(0, 0, 1)
Q_K = Quaternion(0, 0, 0, 1)


class QPoly:
    """Sparse bivariate polynomial with quaternion coefficients.

    ``coeffs`` maps (i, j) -> Quaternion for the monomial u^i v^j; zero
    coefficients are dropped on construction.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean: dict[tuple[int, int], Quaternion] = {}
        if coeffs:
            for (i, j), q in coeffs.items():
                if not isinstance(q, Quaternion):
                    q = Quaternion(q)
                if not q.is_zero():
                    clean[(int(i), int(j))] = q
        if clean and any(q.backend == "float" for q in clean.values()):
            # cancellation residue scales with the data, so flush components
            # relative to the largest one rather than by the absolute
            # threshold
            mag = max(abs(c.to_float())
                      for q in clean.values() for c in q.components())
            cut = mag * FLOAT_DROP
            flushed: dict[tuple[int, int], Quaternion] = {}
            for ij, q in clean.items():
                comps = [0.0 if abs(c.to_float()) <= cut else c.to_float()
                         for c in q.components()]
                if any(comps):
                    flushed[ij] = Quaternion(*(FloatScalar(c)
                                               for c in comps))
            clean = flushed
        self.coeffs = clean

    # --- constructors ----------------------------------------------------

    @classmethod
    def constant(cls, q) -> "QPoly":
        if not isinstance(q, Quaternion):
            q = Quaternion(q)
        return cls({(0, 0): q})

    @classmethod
    def zero(cls) -> "QPoly":
        return cls()

    @classmethod
    def one(cls) -> "QPoly":
        return cls.constant(1)

    @classmethod
    def var_u(cls) -> "QPoly":
        return cls({(1, 0): Q_ONE})

    @classmethod
    def var_v(cls) -> "QPoly":
        return cls({(0, 1): Q_ONE})

    @classmethod
    def monomial(cls, q, i: int, j: int) -> "QPoly":
        if not isinstance(q, Quaternion):
            q = Quaternion(q)
        return cls({(i, j): q})

    # --- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_real(self) -> bool:
        return all(q.is_real() for q in self.coeffs.values())

    def is_constant(self) -> bool:
        return all(ij == (0, 0) for ij in self.coeffs)

    @property
    def degu(self):
        return max((i for i, _ in self.coeffs), default=NEG_INF)

    @property
    def degv(self):
        return max((j for _, j in self.coeffs), default=NEG_INF)

    def deg(self, var: str):
        return self.degu if var == "u" else self.degv

    def in_hmn(self, m: int, n: int) -> bool:
        return self.degu <= m and self.degv <= n

    @property
    def backend(self) -> str:
        return ("float" if any(q.backend == "float" for q in self.coeffs.values())
                else "exact")

    def coefficient(self, i: int, j: int) -> Quaternion:
        return self.coeffs.get((i, j), Q_ZERO)

    def constant_coefficient(self) -> Quaternion:
        return self.coefficient(0, 0)

    def v_coefficient(self, j: int) -> "QPoly":
        """The coefficient of v^j as a polynomial in u."""
        return QPoly({(i, 0): q for (i, jj), q in self.coeffs.items() if jj == j})

    def u_coefficient(self, i: int) -> "QPoly":
        """The coefficient of u^i as a polynomial in v."""
        return QPoly({(0, j): q for (ii, j), q in self.coeffs.items() if ii == i})

    def leading_coefficient(self, var: str) -> "QPoly":
        """Coefficient of the top power of ``var``, a polynomial in the other."""
        if self.is_zero():
            return QPoly.zero()
        if var == "u":
            return self.u_coefficient(self.degu)
        return self.v_coefficient(self.degv)

    def swap_vars(self) -> "QPoly":
        return QPoly({(j, i): q for (i, j), q in self.coeffs.items()})

    def real_scalar_coeffs(self) -> dict[tuple[int, int], object]:
        """Scalar coefficient map; raises NonRealNorm if any term is not real."""
        out = {}
        for ij, q in self.coeffs.items():
            if not q.is_real():
                raise NonRealNorm(f"coefficient of u^{ij[0]} v^{ij[1]} is {q.text()}")
            out[ij] = q.w
        return out

    def components(self) -> tuple["QPoly", "QPoly", "QPoly", "QPoly"]:
        """Split into four real polynomials: q = c0 + c1*i + c2*j + c3*k."""
        outs = [dict(), dict(), dict(), dict()]
        for ij, q in self.coeffs.items():
            for slot, c in enumerate(q.components()):
                if not c.is_zero():
                    outs[slot][ij] = Quaternion(c)
        return tuple(QPoly(o) for o in outs)

    def __eq__(self, other):
        if isinstance(other, QPoly):
            if set(self.coeffs) != set(other.coeffs):
                return False
            return all(q == other.coeffs[ij] for ij, q in self.coeffs.items())
        if isinstance(other, (int, Fraction, float, FieldElement, FloatScalar, Quaternion)):
            return self == QPoly.constant(other)
        return NotImplemented

    __hash__ = None

    # --- ring operations -------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, QPoly):
            return other
        if isinstance(other, (Quaternion, int, Fraction, float, FieldElement, FloatScalar)):
            return QPoly.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.coeffs)
        for ij, q in o.coeffs.items():
            out[ij] = out[ij] + q if ij in out else q
        return QPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return QPoly({ij: -q for ij, q in self.coeffs.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
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
        out: dict[tuple[int, int], Quaternion] = {}
        for (i1, j1), q1 in self.coeffs.items():
            for (i2, j2), q2 in o.coeffs.items():
                ij = (i1 + i2, j1 + j2)
                p = q1 * q2
                out[ij] = out[ij] + p if ij in out else p
        return QPoly(out)

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = QPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "QPoly":
        return QPoly({ij: q.conj() for ij, q in self.coeffs.items()})

    def norm_poly(self) -> "QPoly":
        """q * conj(q), asserted real (cross terms cancel symmetrically)."""
        n = self * self.conj()
        for ij, q in n.coeffs.items():
            if not q.is_real():
                raise NonRealNorm(
                    f"norm has non-real coefficient {q.text()} at u^{ij[0]} v^{ij[1]}")
        return n

    # --- evaluation ------------------------------------------------------

    def eval(self, u0, v0) -> Quaternion:
        u0 = _coerce_scalar(u0)
        v0 = _coerce_scalar(v0)
        total = Q_ZERO
        upow: dict[int, object] = {}
        vpow: dict[int, object] = {}

        def power(cache, base, n):
            if n not in cache:
                cache[n] = base ** n
            return cache[n]

        for (i, j), q in self.coeffs.items():
            s = power(upow, u0, i) * power(vpow, v0, j)
            total = total + q.scale(s)
        return total

    # --- division --------------------------------------------------------

    def divmod_by_real(self, r: "QPoly", var: str) -> tuple["QPoly", "QPoly"]:
        """Componentwise division q = T*r + rem by a real divisor univariate
        in ``var``, with deg_var rem < deg_var r."""
        if r.is_zero():
            raise DivisorZero("division by zero polynomial")
        if not r.is_real():
            raise DivisorZero(f"divisor {r.text()} is not real")
        other = "v" if var == "u" else "u"
        if r.deg(other) > 0:
            raise DivisorZero(f"divisor {r.text()} is not univariate in {var}")
        d = int(r.deg(var))
        lead = r.coefficient(d, 0) if var == "u" else r.coefficient(0, d)
        lead_inv = lead.w.inv()
        quo = QPoly.zero()
        rem = self
        while not rem.is_zero() and rem.deg(var) >= d:
            e = int(rem.deg(var))
            top = rem.leading_coefficient(var)  # poly in the other variable
            shift = ((e - d, 0) if var == "u" else (0, e - d))
            chunk = QPoly({(i + shift[0], j + shift[1]): q.scale(lead_inv)
                           for (i, j), q in top.coeffs.items()})
            quo = quo + chunk
            rem = rem - chunk * r
            assert rem.deg(var) < e or rem.is_zero()
        return quo, rem

    def _onesided_lead(self, f: "QPoly", var: str) -> tuple[int, Quaternion]:
        if f.is_zero():
            raise DivisorZero("one-sided division by zero polynomial")
        d = int(f.deg(var))
        lead = f.leading_coefficient(var)
        if not lead.is_constant():
            raise LeadingCoefficientNotInvertible(
                f"leading {var}-coefficient {lead.text()} is not constant")
        lc = lead.constant_coefficient()
        if lc.norm().is_zero():
            raise LeadingCoefficientNotInvertible("leading coefficient is zero")
        return d, lc

    def left_divmod(self, f: "QPoly", var: str = "u") -> tuple["QPoly", "QPoly"]:
        """(g, rem) with self = f*g + rem and deg_var rem < deg_var f."""
        d, lc = self._onesided_lead(f, var)
        lc_inv = lc.inv()
        quo = QPoly.zero()
        rem = self
        while not rem.is_zero() and rem.deg(var) >= d:
            e = int(rem.deg(var))
            top = rem.leading_coefficient(var)
            shift = ((e - d, 0) if var == "u" else (0, e - d))
            chunk = QPoly({(i + shift[0], j + shift[1]): lc_inv * q
                           for (i, j), q in top.coeffs.items()})
            quo = quo + chunk
            rem = rem - f * chunk
            if not rem.is_zero() and rem.deg(var) >= e:
                raise LeadingCoefficientNotInvertible(
                    f"degree did not drop dividing by {f.text()}")
        return quo, rem

    def right_divmod(self, f: "QPoly", var: str = "u") -> tuple["QPoly", "QPoly"]:
        """(g, rem) with self = g*f + rem and deg_var rem < deg_var f."""
        d, lc = self._onesided_lead(f, var)
        lc_inv = lc.inv()
        quo = QPoly.zero()
        rem = self
        while not rem.is_zero() and rem.deg(var) >= d:
            e = int(rem.deg(var))
            top = rem.leading_coefficient(var)
            shift = ((e - d, 0) if var == "u" else (0, e - d))
            chunk = QPoly({(i + shift[0], j + shift[1]): q * lc_inv
                           for (i, j), q in top.coeffs.items()})
            quo = quo + chunk
            rem = rem - chunk * f
            if not rem.is_zero() and rem.deg(var) >= e:
                raise LeadingCoefficientNotInvertible(
                    f"degree did not drop dividing by {f.text()}")
        return quo, rem

    def left_divide(self, f: "QPoly", var: str = "u") -> "QPoly":
        """g with self = f*g, or NotDivisible."""
        g, rem = self.left_divmod(f, var)
        if not rem.is_zero():
            raise NotDivisible(f"remainder {rem.text()} in left division")
        return g

    def right_divide(self, f: "QPoly", var: str = "u") -> "QPoly":
        """g with self = g*f, or NotDivisible."""
        g, rem = self.right_divmod(f, var)
        if not rem.is_zero():
            raise NotDivisible(f"remainder {rem.text()} in right division")
        return g

    # --- text and JSON ---------------------------------------------------

    def text(self) -> str:
        if self.is_zero():
            return "0"
        keys = sorted(self.coeffs, key=lambda ij: (ij[0] + ij[1], ij[0]), reverse=True)
        parts = []
        for i, j in keys:
            q = self.coeffs[(i, j)]
            mono = "*".join(s for s in (
                f"u^{i}" if i > 1 else ("u" if i == 1 else ""),
                f"v^{j}" if j > 1 else ("v" if j == 1 else "")) if s)
            qt = q.text()
            if not mono:
                body = f"({qt})" if (" " in qt) else qt
            elif qt == "1":
                body = mono
            elif qt == "-1":
                body = "-" + mono
            elif " " in qt or qt.lstrip("-").count("*"):
                body = f"({qt})*{mono}"
            else:
                body = f"{qt}*{mono}"
            if not parts:
                parts.append(body)
            elif body.startswith("-"):
                parts.append(" - " + body[1:])
            else:
                parts.append(" + " + body)
        return "".join(parts)

    def __repr__(self):
        return f"QPoly({self.text()!r})"

    def to_json_dict(self) -> dict:
        entries = [{"i": i, "j": j, "q": self.coeffs[(i, j)].texts()}
                   for (i, j) in sorted(self.coeffs)]
        out = {
            "degu": None if self.is_zero() else int(self.degu),
            "degv": None if self.is_zero() else int(self.degv),
            "coeffs": entries,
        }
        if self.backend == "float":
            out["backend"] = "float"
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict) -> "QPoly":
        if not isinstance(data, dict) or "coeffs" not in data:
            raise ParseError("polynomial JSON must be an object with 'coeffs'")
        backend = data.get("backend", "exact")
        if backend not in ("exact", "float"):
            raise ParseError(f"unknown backend {backend!r}")
        coeffs = {}
        for entry in data["coeffs"]:
            try:
                i, j = int(entry["i"]), int(entry["j"])
                w, x, y, z = (parse_scalar(t, backend=backend) for t in entry["q"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad coefficient entry {entry!r}") from exc
            if i < 0 or j < 0:
                raise ParseError(f"negative exponent in {entry!r}")
            coeffs[(i, j)] = Quaternion(w, x, y, z)
        poly = cls(coeffs)
        for key in ("degu", "degv"):
            want = data.get(key)
            have = poly.degu if key == "degu" else poly.degv
            if want is None:
                if not poly.is_zero():
                    raise ParseError(f"{key} null but polynomial is nonzero")
            elif int(want) != have:
                raise ParseError(f"{key}={want} does not match coefficients ({have})")
        return poly

    @classmethod
    def from_json(cls, text: str) -> "QPoly":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON: {exc}") from exc
        return cls.from_json_dict(data)


U = QPoly.var_u()
V = QPoly.var_v()


def real_poly(coeffs: dict) -> QPoly:
    """Build a real polynomial from (i, j) -> scalar."""
    return QPoly({ij: Quaternion(c) for ij, c in coeffs.items()})


def univariate(coeff_list, var: str = "u") -> QPoly:
    """Real univariate polynomial from [c0, c1, ...] (ascending powers)."""
    out = {}
    for n, c in enumerate(coeff_list):
        ij = (n, 0) if var == "u" else (0, n)
        out[ij] = Quaternion(c)
    return QPoly(out)
