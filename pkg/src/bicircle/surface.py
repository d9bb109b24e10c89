"""Point samplers and numerical checkers for the surface families.

Everything in this module is binary64 geometry; exactness lives in the
scalar/quatpoly/solver modules.  Three kinds of surfaces are sampled:

- family "E": pointwise sums {p + q} of two circles in R^3,
- family "C": 2 (p x q) / |p + q|^2 for p, q running over two circles on
  the unit sphere (the spherical analogue of the sum construction),
- family "D": the zero set of Q(x, y, z, x^2 + y^2 + z^2) for a real
  polynomial Q of total degree at most 2, extracted from a box by
  sign-change bisection along grid edges.

The quaternionic side is connected to the geometry by stereo_project_tuple
(evaluate a six-tuple parametrization and project) and phi_eval (evaluate
conj(A)^-1 * B * conj(C)^-1), which agree on tuples built from factor data.

check_iso_circles is the numerical judge used by tests and the CLI: it
fits a plane and a circle to every iso-parameter curve of a sample and
reports max residuals, pairwise transversality angles at shared grid
points, and cosphericity flags for curve pairs.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .errors import (
    AntipodalDegeneracy,
    CenterSingularity,
    ConstraintViolated,
    DegenerateCurve,
    DegreeOutOfRange,
    EmptyIntersection,
    PoleSingularity,
)

UNIT_TOL = 1e-12
ANTIPODAL_TOL = 1e-8
FAMILIES = ("E", "C", "D", "Phi")


def _vec3(x, name: str) -> np.ndarray:
    a = np.array(x, dtype=float)
    if a.shape != (3,):
        raise ConstraintViolated(f"{name} must be a 3-vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ConstraintViolated(f"{name} has non-finite entries")
    return a


def _plane_basis(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic orthonormal basis of the plane orthogonal to normal."""
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(normal)))] = 1.0
    e1 = np.cross(normal, axis)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    return e1, e2


class Circle3D:
    """A circle in R^3: center, positive radius, unit plane normal."""

    __slots__ = ("center", "radius", "unit_normal")

    def __init__(self, center, radius, unit_normal):
        self.center = _vec3(center, "center")
        self.radius = float(radius)
        self.unit_normal = _vec3(unit_normal, "unit_normal")
        if not self.radius > 0:
            raise ConstraintViolated("radius must be positive")
        if abs(np.linalg.norm(self.unit_normal) - 1.0) > UNIT_TOL:
            raise ConstraintViolated("unit_normal must have length 1 within 1e-12")
        self.center.setflags(write=False)
        self.unit_normal.setflags(write=False)

    def basis(self) -> tuple[np.ndarray, np.ndarray]:
        return _plane_basis(self.unit_normal)

    def points(self, angles) -> np.ndarray:
        """Points center + radius (cos(t) e1 + sin(t) e2), one per angle."""
        e1, e2 = self.basis()
        t = np.asarray(angles, dtype=float)
        return self.center + self.radius * (
            np.outer(np.cos(t), e1) + np.outer(np.sin(t), e2))

    def __repr__(self):
        return (f"Circle3D(center={self.center.tolist()}, radius={self.radius}, "
                f"unit_normal={self.unit_normal.tolist()})")


class CircleS2:
    """A circle on the unit sphere: unit axis and angular radius in (0, pi)."""

    __slots__ = ("axis", "angular_radius")

    def __init__(self, axis, angular_radius):
        self.axis = _vec3(axis, "axis")
        if abs(np.linalg.norm(self.axis) - 1.0) > UNIT_TOL:
            raise ConstraintViolated("axis must be a unit vector within 1e-12")
        rho = float(angular_radius)
        if not 0.0 < rho < math.pi:
            raise ConstraintViolated(
                "angular_radius must lie strictly between 0 and pi")
        self.angular_radius = rho
        self.axis.setflags(write=False)

    def basis(self) -> tuple[np.ndarray, np.ndarray]:
        return _plane_basis(self.axis)

    def points(self, angles) -> np.ndarray:
        """Unit vectors at spherical distance angular_radius from the axis."""
        e1, e2 = self.basis()
        t = np.asarray(angles, dtype=float)
        rim = np.outer(np.cos(t), e1) + np.outer(np.sin(t), e2)
        return math.cos(self.angular_radius) * self.axis \
            + math.sin(self.angular_radius) * rim

    def __repr__(self):
        return (f"CircleS2(axis={self.axis.tolist()}, "
                f"angular_radius={self.angular_radius})")


class DarbouxCyclide:
    """Zero set of Q(x, y, z, x^2 + y^2 + z^2) for real Q of degree 2 or 1.

    Coefficients are keyed by exponent tuples (i, j, k, l) for the
    monomial x^i y^j z^k t^l, where t is the placeholder later evaluated
    at x^2 + y^2 + z^2.
    """

    __slots__ = ("qcoeffs", "degree")

    def __init__(self, qcoeffs):
        clean = {}
        for key, value in dict(qcoeffs).items():
            exps = tuple(int(n) for n in key)
            if len(exps) != 4 or any(n < 0 for n in exps):
                raise ConstraintViolated(f"bad exponent tuple {key!r}")
            coeff = float(value)
            if not math.isfinite(coeff):
                raise ConstraintViolated("coefficients must be finite")
            if coeff != 0.0:
                clean[exps] = coeff
        if any(sum(e) > 2 for e in clean):
            raise DegreeOutOfRange(
                "defining polynomial must have total degree at most 2")
        degree = max((sum(e) for e in clean), default=-1)
        if degree < 1:
            raise ConstraintViolated(
                "defining polynomial must have degree 1 or 2")
        self.qcoeffs = dict(sorted(clean.items()))
        self.degree = degree

    @classmethod
    def sphere(cls, radius: float = 1.0) -> "DarbouxCyclide":
        """x^2 + y^2 + z^2 = radius^2, written as t - radius^2."""
        if not radius > 0:
            raise ConstraintViolated("radius must be positive")
        return cls({(0, 0, 0, 1): 1.0, (0, 0, 0, 0): -(radius * radius)})

    @classmethod
    def torus(cls, major: float, minor: float) -> "DarbouxCyclide":
        """Torus around the z axis: (t + R^2 - r^2)^2 = 4 R^2 (x^2 + y^2)."""
        if not major > minor > 0:
            raise ConstraintViolated("need major > minor > 0")
        shift = major * major - minor * minor
        return cls({
            (0, 0, 0, 2): 1.0,
            (0, 0, 0, 1): 2.0 * shift,
            (0, 0, 0, 0): shift * shift,
            (2, 0, 0, 0): -4.0 * major * major,
            (0, 2, 0, 0): -4.0 * major * major,
        })

    def coefficient_scale(self) -> float:
        return max(abs(c) for c in self.qcoeffs.values())

    def __repr__(self):
        return f"DarbouxCyclide({self.qcoeffs!r})"


class SurfaceSample:
    """A sampled surface patch: points, parameters, iso-curve indexing.

    points[m] is the 3-vector sampled at parameter pair params[m].
    curves_u[i] lists point indices along the i-th fixed-u iso-curve
    (ordered by v) and curves_v[j] along the j-th fixed-v curve (ordered
    by u).  shape records the sampling grid dimensions; dropped lists
    grid positions that produced no point (only the spherical generator
    drops samples).
    """

    __slots__ = ("points", "params", "family", "curves_u", "curves_v",
                 "shape", "dropped")

    def __init__(self, points, params, family, curves_u, curves_v, shape,
                 dropped=()):
        pts = np.array(points, dtype=float)
        prm = np.array(params, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ConstraintViolated("points must be an (N, 3) array")
        if prm.shape != (pts.shape[0], 2):
            raise ConstraintViolated("params must be an (N, 2) array "
                                     "matching points")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(prm))):
            raise ConstraintViolated("sample coordinates must be finite")
        if family not in FAMILIES:
            raise ConstraintViolated(f"unknown family tag {family!r}")
        nu, nv = int(shape[0]), int(shape[1])
        if nu < 2 or nv < 2:
            raise ConstraintViolated("sampling grid must be at least 2x2")
        n = pts.shape[0]
        cu = tuple(tuple(int(m) for m in curve) for curve in curves_u)
        cv = tuple(tuple(int(m) for m in curve) for curve in curves_v)
        for curve in cu + cv:
            for m in curve:
                if not 0 <= m < n:
                    raise ConstraintViolated("curve index out of range")
        pts.setflags(write=False)
        prm.setflags(write=False)
        self.points = pts
        self.params = prm
        self.family = family
        self.curves_u = cu
        self.curves_v = cv
        self.shape = (nu, nv)
        self.dropped = tuple((int(a), int(b)) for a, b in dropped)

    def grid_index(self) -> dict | None:
        """Map (iu, iv) -> point row for row-major grid samples.

        Returns None when the sample is not a full grid minus drops
        (family "D" point clouds).
        """
        nu, nv = self.shape
        drop = set(self.dropped)
        if nu * nv - len(drop) != self.points.shape[0]:
            return None
        out = {}
        m = 0
        for iu in range(nu):
            for iv in range(nv):
                if (iu, iv) in drop:
                    continue
                out[(iu, iv)] = m
                m += 1
        return out

    def __repr__(self):
        return (f"SurfaceSample(family={self.family!r}, "
                f"points={self.points.shape[0]}, shape={self.shape}, "
                f"curves={len(self.curves_u)}+{len(self.curves_v)}, "
                f"dropped={len(self.dropped)})")


# --- generators ----------------------------------------------------------

def _angle_grid(n: int) -> np.ndarray:
    return 2.0 * math.pi * np.arange(n) / n


def gen_euclidean(alpha: Circle3D, beta, nu: int, nv: int) -> SurfaceSample:
    """Sample the translational surface {p + q : p on alpha, q on beta}.

    beta may be a Circle3D or a single 3-vector (a circle degenerated to
    a point).  In the point case every fixed-u curve would be one
    repeated point, so only fixed-v curves (translated copies of alpha)
    are emitted.
    """
    if nu < 2 or nv < 2:
        raise ConstraintViolated("need at least a 2x2 grid")
    us = _angle_grid(nu)
    vs = _angle_grid(nv)
    p = alpha.points(us)
    beta_is_point = not isinstance(beta, Circle3D)
    if beta_is_point:
        q = np.broadcast_to(_vec3(beta, "beta"), (nv, 3))
    else:
        q = beta.points(vs)
    pts = (p[:, None, :] + q[None, :, :]).reshape(nu * nv, 3)
    prm = np.stack(np.meshgrid(us, vs, indexing="ij"), axis=-1).reshape(nu * nv, 2)
    if beta_is_point:
        curves_u = ()
    else:
        curves_u = tuple(tuple(range(iu * nv, iu * nv + nv))
                         for iu in range(nu))
    curves_v = tuple(tuple(range(iv, nu * nv, nv)) for iv in range(nv))
    return SurfaceSample(pts, prm, "E", curves_u, curves_v, (nu, nv))


def gen_clifford(alpha: CircleS2, beta: CircleS2, nu: int, nv: int) -> SurfaceSample:
    """Sample 2 (p x q) / |p + q|^2 for p on alpha and q on beta.

    Near-antipodal pairs with |p + q| < 1e-8 are skipped and their grid
    positions recorded.  If that empties a whole iso-curve the sampling
    is degenerate and AntipodalDegeneracy is raised.
    """
    if nu < 2 or nv < 2:
        raise ConstraintViolated("need at least a 2x2 grid")
    us = _angle_grid(nu)
    vs = _angle_grid(nv)
    p = alpha.points(us)
    q = beta.points(vs)
    s = p[:, None, :] + q[None, :, :]
    n2 = np.einsum("ijk,ijk->ij", s, s)
    keep = n2 >= ANTIPODAL_TOL * ANTIPODAL_TOL
    for iu in range(nu):
        if not keep[iu].any():
            raise AntipodalDegeneracy(
                f"fixed-u curve {iu} lost every sample to the p + q = 0 cutoff")
    for iv in range(nv):
        if not keep[:, iv].any():
            raise AntipodalDegeneracy(
                f"fixed-v curve {iv} lost every sample to the p + q = 0 cutoff")
    cross = np.cross(p[:, None, :], np.broadcast_to(q[None, :, :], s.shape))
    vals = 2.0 * cross / np.where(keep, n2, 1.0)[:, :, None]
    index = {}
    pts = []
    prm = []
    dropped = []
    for iu in range(nu):
        for iv in range(nv):
            if keep[iu, iv]:
                index[(iu, iv)] = len(pts)
                pts.append(vals[iu, iv])
                prm.append((us[iu], vs[iv]))
            else:
                dropped.append((iu, iv))
    curves_u = tuple(tuple(index[(iu, iv)] for iv in range(nv) if keep[iu, iv])
                     for iu in range(nu))
    curves_v = tuple(tuple(index[(iu, iv)] for iu in range(nu) if keep[iu, iv])
                     for iv in range(nv))
    return SurfaceSample(np.array(pts), np.array(prm), "C",
                         curves_u, curves_v, (nu, nv), dropped)


# --- implicit surfaces ---------------------------------------------------

def eval_cyclide(c: DarbouxCyclide, point):
    """Evaluate Q(x, y, z, x^2 + y^2 + z^2) at a point or (..., 3) array."""
    pts = np.asarray(point, dtype=float)
    if pts.shape[-1:] != (3,):
        raise ConstraintViolated("point must have 3 coordinates")
    single = pts.ndim == 1
    flat = pts.reshape(-1, 3)
    x, y, z = flat[:, 0], flat[:, 1], flat[:, 2]
    t = x * x + y * y + z * z
    total = np.zeros(flat.shape[0])
    for (i, j, k, l), coeff in c.qcoeffs.items():
        total += coeff * x**i * y**j * z**k * t**l
    return float(total[0]) if single else total.reshape(pts.shape[:-1])


def sample_cyclide(c: DarbouxCyclide, bbox, resolution) -> SurfaceSample:
    """Extract points of the zero set inside a box by edge bisection.

    bbox is a pair (lo, hi) of 3-vectors; resolution is the vertex count
    per axis (an int, or a triple).  Every axis-parallel grid edge whose
    endpoint values differ in sign is bisected to the root.  The points
    are grouped into fixed-z slices (the sample's u curves) and fixed-y
    slices (the v curves); params stores (z, y) per point.  Only slices
    with at least 5 points are emitted as curves.
    """
    lo = _vec3(bbox[0], "bbox lo")
    hi = _vec3(bbox[1], "bbox hi")
    if not np.all(hi > lo):
        raise ConstraintViolated("bbox must have positive extent on each axis")
    if isinstance(resolution, int):
        res = (resolution,) * 3
    else:
        res = tuple(int(r) for r in resolution)
    if len(res) != 3 or any(r < 2 for r in res):
        raise ConstraintViolated("resolution must be at least 2 per axis")
    axes = [np.linspace(lo[d], hi[d], res[d]) for d in range(3)]
    mesh = np.meshgrid(*axes, indexing="ij")
    grid = np.stack(mesh, axis=-1)
    vals = eval_cyclide(c, grid)

    pts = []
    u_slice = {}  # z index -> point ids
    v_slice = {}  # y index -> point ids
    seen = {}

    def add(point, zi, yi):
        key = tuple(round(float(coord), 9) for coord in point)
        m = seen.get(key)
        if m is None:
            m = len(pts)
            seen[key] = m
            pts.append(np.asarray(point, dtype=float))
        if zi is not None and m not in u_slice.setdefault(zi, []):
            u_slice[zi].append(m)
        if yi is not None and m not in v_slice.setdefault(yi, []):
            v_slice[yi].append(m)

    for i, j, k in np.argwhere(vals == 0.0):
        add(grid[i, j, k], int(k), int(j))

    def bisect_all(a, b, fa):
        # fa and f(b) have opposite signs; 60 halvings reach the binary64 floor
        a = a.copy()
        b = b.copy()
        fa = fa.copy()
        for _ in range(60):
            mid = 0.5 * (a + b)
            fm = eval_cyclide(c, mid)
            left = (fm > 0) == (fa > 0)
            a = np.where(left[:, None], mid, a)
            fa = np.where(left, fm, fa)
            b = np.where(left[:, None], b, mid)
        return 0.5 * (a + b)

    for axis in range(3):
        head = tuple(slice(None, -1) if d == axis else slice(None)
                     for d in range(3))
        tail = tuple(slice(1, None) if d == axis else slice(None)
                     for d in range(3))
        v0, v1 = vals[head], vals[tail]
        mask = v0 * v1 < 0.0
        if not mask.any():
            continue
        roots = bisect_all(grid[head][mask], grid[tail][mask], v0[mask])
        for (i, j, k), root in zip(np.argwhere(mask), roots):
            if axis == 0:
                add(root, int(k), int(j))
            elif axis == 1:
                add(root, int(k), None)
            else:
                add(root, None, int(j))

    if not pts:
        raise EmptyIntersection("no sign change of Q inside the box")

    points = np.array(pts)

    def ordered_curves(slices, plane_axis):
        # sort each slice angularly around its centroid, in the slice plane
        in_plane = [d for d in range(3) if d != plane_axis]
        out = []
        for key in sorted(slices):
            ids = slices[key]
            if len(ids) < 5:
                continue
            sub = points[ids]
            centroid = sub.mean(axis=0)
            theta = np.arctan2(sub[:, in_plane[1]] - centroid[in_plane[1]],
                               sub[:, in_plane[0]] - centroid[in_plane[0]])
            out.append(tuple(ids[m] for m in np.argsort(theta, kind="stable")))
        return tuple(out)

    curves_u = ordered_curves(u_slice, 2)
    curves_v = ordered_curves(v_slice, 1)
    params = np.stack([points[:, 2], points[:, 1]], axis=1)
    return SurfaceSample(points, params, "D", curves_u, curves_v,
                         (res[2], res[1]))


# --- quaternion evaluation maps ------------------------------------------

def _qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    w = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    x = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2]
    y = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1]
    z = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]
    return np.array([w, x, y, z])


def stereo_project_tuple(x, u0, v0) -> np.ndarray:
    """Evaluate (X1 + i X2 + j X3 + k X4) / (X6 - X5) at (u0, v0).

    x is a six-tuple of real polynomials (a PythTuple); the result is a
    4-vector.  Raises PoleSingularity where X6 - X5 vanishes.
    """
    vals = [component.eval(u0, v0).to_floats()[0] for component in x.xs]
    den = vals[5] - vals[4]
    if den == 0.0:
        raise PoleSingularity("X6 - X5 vanishes at the requested parameters")
    return np.array(vals[:4]) / den


def phi_eval(a_poly, b_poly, c_poly, u0, v0) -> np.ndarray:
    """Evaluate conj(A)^-1 * B * conj(C)^-1 at (u0, v0) as a 4-vector.

    A, B, C are quaternionic polynomials.  conj(A)^-1 = A / |A|^2, so the
    product is A(u0,v0) B(u0,v0) C(u0,v0) divided by |A|^2 |C|^2; raises
    PoleSingularity where A or C vanishes.
    """
    a = np.array(a_poly.eval(u0, v0).to_floats())
    b = np.array(b_poly.eval(u0, v0).to_floats())
    c = np.array(c_poly.eval(u0, v0).to_floats())
    na = float(a @ a)
    nc = float(c @ c)
    if na == 0.0 or nc == 0.0:
        raise PoleSingularity(
            "conj(A) or conj(C) is not invertible at the requested parameters")
    return _qmul(_qmul(a, b), c) / (na * nc)


def invert(point, center, radius) -> np.ndarray:
    """Sphere inversion: center + radius^2 (point - center) / |point - center|^2.

    Accepts a single 3-vector or an (..., 3) array of points.  Raises
    CenterSingularity when any point coincides with the center.
    """
    pts = np.asarray(point, dtype=float)
    if pts.shape[-1:] != (3,):
        raise ConstraintViolated("point must have 3 coordinates")
    cen = _vec3(center, "center")
    r = float(radius)
    if not r > 0:
        raise ConstraintViolated("radius must be positive")
    diff = pts - cen
    n2 = np.sum(diff * diff, axis=-1)
    if np.any(n2 == 0.0):
        raise CenterSingularity("cannot invert the center of the sphere")
    return cen + (r * r) * diff / n2[..., None]


# --- circle fitting and sample verification ------------------------------

def fit_circle(points) -> dict:
    """Fit a plane and then a circle to an (n, 3) point set, n >= 3.

    The plane is the centroid plus the two leading principal directions
    of the scatter (the smallest principal direction is the normal, i.e.
    the least-squares plane).  The circle is an algebraic least-squares
    fit in plane coordinates refined by one Gauss-Newton step on
    (center, radius).  Returns center, radius, normal and the maximum
    3D point-to-circle distance.  Raises DegenerateCurve for repeated or
    collinear points.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 3:
        raise ConstraintViolated("need an (n, 3) array with n >= 3")
    n = pts.shape[0]
    centroid = pts.mean(axis=0)
    rel = pts - centroid
    scatter = float(np.sqrt((rel * rel).sum(axis=1).mean()))
    gaps = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    gaps[np.diag_indices(n)] = np.inf
    if gaps.min() <= 1e-12 * (1.0 + scatter):
        raise DegenerateCurve("repeated points")
    _, sing, vt = np.linalg.svd(rel, full_matrices=False)
    if sing[1] <= 1e-10 * sing[0]:
        raise DegenerateCurve("collinear points")
    normal = vt[2]
    plane = rel @ vt[:2].T          # in-plane coordinates
    height = rel @ normal           # out-of-plane offsets
    design = np.column_stack([2.0 * plane, np.ones(n)])
    rhs = (plane * plane).sum(axis=1)
    sol, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    center2 = sol[:2]
    r2 = sol[2] + center2 @ center2
    if not r2 > 0:
        raise DegenerateCurve("no real circle fits the points")
    radius = math.sqrt(r2)
    spokes = plane - center2
    dist = np.linalg.norm(spokes, axis=1)
    if np.any(dist == 0.0):
        raise DegenerateCurve("a point coincides with the fitted center")
    jac = np.column_stack([-spokes / dist[:, None], -np.ones(n)])
    step, *_ = np.linalg.lstsq(jac, -(dist - radius), rcond=None)
    center2 = center2 + step[:2]
    radius = radius + step[2]
    if not radius > 0:
        raise DegenerateCurve("no real circle fits the points")
    dist = np.linalg.norm(plane - center2, axis=1)
    residual = np.sqrt((dist - radius) ** 2 + height ** 2)
    center3 = centroid + center2[0] * vt[0] + center2[1] * vt[1]
    return {
        "center": center3,
        "radius": float(radius),
        "normal": normal,
        "max_residual": float(residual.max()),
    }


def sphere_determinant(points5) -> float:
    """Normalized five-point cosphericity determinant.

    Rows are (|p|^2, x, y, z, 1) after translating the centroid to the
    origin and dividing by the RMS radius, so the value is zero (up to
    rounding) exactly when the five points lie on a common sphere or
    plane, at any scale or position.
    """
    pts = np.asarray(points5, dtype=float)
    if pts.shape != (5, 3):
        raise ConstraintViolated("need exactly 5 points")
    centered = pts - pts.mean(axis=0)
    rms = float(np.sqrt((centered * centered).sum(axis=1).mean()))
    if rms == 0.0:
        return 0.0
    w = centered / rms
    rows = np.column_stack([(w * w).sum(axis=1), w, np.ones(5)])
    return float(np.linalg.det(rows))


def _tangent(points: np.ndarray, curve, pos: int) -> np.ndarray:
    if pos == 0:
        a, b = curve[0], curve[1]
    elif pos == len(curve) - 1:
        a, b = curve[-2], curve[-1]
    else:
        a, b = curve[pos - 1], curve[pos + 1]
    return points[b] - points[a]


def _spread_five(pts_a: np.ndarray, pts_b: np.ndarray,
                 pos_a: int, pos_b: int) -> np.ndarray:
    # Offset the picks away from the curves' shared point: a pick that both
    # curves pass through makes four of the five points cocircular and the
    # determinant vanish no matter what the two circles do.
    na, nb = len(pts_a), len(pts_b)
    picks_a = [(pos_a + off) % na for off in (na // 4, na // 2, (3 * na) // 4)]
    picks_b = [(pos_b + off) % nb for off in (nb // 3, (2 * nb) // 3)]
    return np.vstack([pts_a[picks_a], pts_b[picks_b]])


def check_iso_circles(sample: SurfaceSample, tol: float) -> dict:
    """Fit circles to every iso-curve and measure pairwise interactions.

    Every curve must have at least 5 points.  The report contains, per
    curve, the fitted circle and a cocircular flag (max residual <= tol);
    per (u-curve, v-curve) pair, the transversality angle in radians at a
    shared grid point (None when the pair shares no point) and a
    cospheric flag from the normalized five-point sphere determinant.
    """
    curves = []
    for label, family in (("u", sample.curves_u), ("v", sample.curves_v)):
        for idx, curve in enumerate(family):
            if len(curve) < 5:
                raise ConstraintViolated(
                    f"iso-curve {label}{idx} has fewer than 5 points")
            fit = fit_circle(sample.points[list(curve)])
            curves.append({
                "curve": f"{label}{idx}",
                "count": len(curve),
                "center": [float(x) for x in fit["center"]],
                "radius": fit["radius"],
                "normal": [float(x) for x in fit["normal"]],
                "max_residual": fit["max_residual"],
                "cocircular": bool(fit["max_residual"] <= tol),
            })
    pairs = []
    for iu, cu in enumerate(sample.curves_u):
        shared_pool = set(cu)
        pts_u = sample.points[list(cu)]
        for iv, cv in enumerate(sample.curves_v):
            shared = shared_pool.intersection(cv)
            angle = None
            pos_a = pos_b = 0
            if shared:
                m = min(shared)
                pos_a, pos_b = cu.index(m), cv.index(m)
                t1 = _tangent(sample.points, cu, pos_a)
                t2 = _tangent(sample.points, cv, pos_b)
                norms = np.linalg.norm(t1) * np.linalg.norm(t2)
                if norms > 0:
                    cosang = min(1.0, abs(float(t1 @ t2)) / norms)
                    angle = math.acos(cosang)
            det = sphere_determinant(
                _spread_five(pts_u, sample.points[list(cv)], pos_a, pos_b))
            pairs.append({
                "u": iu,
                "v": iv,
                "angle": angle,
                "sphere_det": det,
                "cospheric": bool(abs(det) <= tol),
            })
    return {
        "family": sample.family,
        "tol": float(tol),
        "points": int(sample.points.shape[0]),
        "dropped": len(sample.dropped),
        "curves": curves,
        "pairs": pairs,
        "all_cocircular": all(c["cocircular"] for c in curves),
    }


# --- export --------------------------------------------------------------

def export_obj(sample: SurfaceSample, path) -> None:
    """Write an OBJ file: vertices plus grid quads, or curve polylines.

    Full-grid samples (families E, C, Phi) get one quad per grid cell,
    skipping cells that touch a dropped position; non-grid samples
    (family D) get their iso-curves as OBJ polylines.
    """
    lines = [f"# surface sample, family {sample.family}"]
    for p in sample.points:
        lines.append("v %.17g %.17g %.17g" % tuple(p))
    grid = sample.grid_index()
    if grid is not None:
        nu, nv = sample.shape
        for iu in range(nu - 1):
            for iv in range(nv - 1):
                cell = [(iu, iv), (iu + 1, iv), (iu + 1, iv + 1), (iu, iv + 1)]
                if all(c in grid for c in cell):
                    lines.append("f %d %d %d %d"
                                 % tuple(grid[c] + 1 for c in cell))
    else:
        for curve in sample.curves_u + sample.curves_v:
            if len(curve) >= 2:
                lines.append("l " + " ".join(str(m + 1) for m in curve))
    Path(path).write_text("\n".join(lines) + "\n")


def export_csv(sample: SurfaceSample, path) -> None:
    """Write one u, v, x, y, z row per sample point (17 significant digits)."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["u", "v", "x", "y", "z"])
        for (u, v), p in zip(sample.params, sample.points):
            writer.writerow(["%.17g" % value for value in (u, v, p[0], p[1], p[2])])
