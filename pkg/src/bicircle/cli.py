"""Command-line front end wiring files to the algebra and geometry modules.

Subcommands:

- verify TUPLE        exit 0 iff the six polynomials satisfy the
                      sum-of-squares identity (exactly, or within --tol
                      for the approx backend); otherwise prints the
                      residual polynomial and exits 1.
- solve TUPLE --out F solve the bidegree-(2,2) tuple, re-verify the
                      certificate by replay, and write it as JSON.
- make ABCD --out F   build a tuple file from factor data A, B, C, D.
- replay CERT TUPLE   re-run a certificate against a tuple file.
- surface SPEC --out BASE
                      sample a surface family, always run the iso-curve
                      circle checker, and write BASE.obj, BASE.csv,
                      BASE.report.json plus rendered figures BASE.png and
                      BASE.metrics.png.
- selftest            seeded end-to-end smoke of the pipeline.

Exit codes: 0 success, 1 verification failure, 2 parse error, 3 operation
hypotheses not met, 4 degree out of range, 5 I/O error.

All files the CLI writes re-read bit-exactly: JSON is emitted with sorted
keys and floats at 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import (
    AntipodalDegeneracy,
    BicircleError,
    CenterSingularity,
    ConstraintViolated,
    DegenerateCurve,
    DegreeOutOfRange,
    EmptyIntersection,
    ExactnessUnavailable,
    HypothesisViolated,
    InvariantViolated,
    ParseError,
    PoleSingularity,
)
from .quatpoly import QPoly
from .solver import (
    PythTuple,
    SolveCertificate,
    solve_22,
    tuple_from_ABCD,
    tuple_to_triple,
)
from .surface import (
    Circle3D,
    CircleS2,
    DarbouxCyclide,
    check_iso_circles,
    eval_cyclide,
    export_csv,
    export_obj,
    gen_clifford,
    gen_euclidean,
    invert,
    sample_cyclide,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3
EXIT_DEGREE = 4
EXIT_IO = 5


class Config:
    """Validated run configuration shared by all subcommands."""

    __slots__ = ("backend", "tol", "res", "seed", "out")

    def __init__(self, backend="exact", tol=1e-9, res=(16, 16), seed=0,
                 out=None):
        if backend not in ("exact", "approx"):
            raise ParseError(f"unknown backend {backend!r}")
        self.backend = backend
        self.tol = float(tol)
        if not self.tol > 0:
            raise ParseError("tolerance must be positive")
        self.res = (int(res[0]), int(res[1]))
        if self.res[0] < 2 or self.res[1] < 2:
            raise ParseError("resolutions must be at least 2")
        self.seed = int(seed)
        self.out = out


def parse_res(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ParseError(f"--res expects NUxNV, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ParseError(f"--res expects NUxNV, got {text!r}") from exc


# --- deterministic JSON --------------------------------------------------

def canonical_json(obj) -> str:
    """Serialize to JSON with sorted keys and 17-significant-digit floats.

    The format round-trips bit-exactly: parsing and re-serializing yields
    the identical byte string.
    """
    pieces = []
    _write_json(obj, pieces, 0)
    return "".join(pieces) + "\n"


def _write_json(obj, out: list, depth: int) -> None:
    pad = "  " * depth
    inner = "  " * (depth + 1)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for pos, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise ParseError("JSON object keys must be strings")
            out.append(inner + json.dumps(key) + ": ")
            _write_json(obj[key], out, depth + 1)
            out.append(",\n" if pos < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for pos, item in enumerate(obj):
            out.append(inner)
            _write_json(item, out, depth + 1)
            out.append(",\n" if pos < len(obj) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise ParseError("cannot serialize non-finite float")
        text = "%.17g" % obj
        if not any(mark in text for mark in ".eE"):
            text += ".0"  # keep the value float-typed when parsed back
        out.append(text)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif obj is None:
        out.append("null")
    else:
        raise ParseError(f"cannot serialize {type(obj).__name__}")


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError:
        raise
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc


# --- subcommands ---------------------------------------------------------

def cmd_verify(args, cfg: Config) -> int:
    data = load_json(args.tuple_file)
    try:
        entries = data["tuple"]
    except (TypeError, KeyError) as exc:
        raise ParseError(f"{args.tuple_file}: missing 'tuple' entry") from exc
    if len(entries) != 6:
        raise ParseError(f"{args.tuple_file}: expected 6 polynomials")
    xs = [QPoly.from_json_dict(e) for e in entries]
    for pos, x in enumerate(xs):
        if not x.is_real():
            print(f"component {pos + 1} is not a real polynomial")
            return EXIT_VERIFY
    residual = -(xs[5] * xs[5])
    for x in xs[:5]:
        residual = residual + x * x
    if residual.is_zero():
        print("ok: identity holds exactly")
        return EXIT_OK
    if cfg.backend == "approx":
        worst = max((abs(s.to_float())
                     for s in residual.real_scalar_coeffs().values()),
                    default=0.0)
        if worst <= cfg.tol:
            print(f"ok: residual below {cfg.tol:g}")
            return EXIT_OK
    print(f"residual: {residual.text()}")
    return EXIT_VERIFY


def _load_tuple(path) -> PythTuple:
    data = load_json(path)
    return PythTuple.from_json_dict(data)


def cmd_solve(args, cfg: Config) -> int:
    tup = _load_tuple(args.tuple_file)
    cert = solve_22(tup, exact=cfg.backend == "exact")
    if not cert.verify(tuple_to_triple(tup)):
        print("certificate failed re-verification; nothing written")
        return EXIT_VERIFY
    out = Path(args.out)
    out.write_text(cert.to_json() + "\n")
    print(f"wrote certificate {out}")
    return EXIT_OK


def cmd_make(args, cfg: Config) -> int:
    data = load_json(args.abcd_file)
    polys = {}
    for key in ("A", "B", "C", "D"):
        try:
            polys[key] = QPoly.from_json_dict(data[key])
        except (TypeError, KeyError) as exc:
            raise ParseError(f"{args.abcd_file}: missing entry {key!r}") from exc
    tup = tuple_from_ABCD(polys["A"], polys["B"], polys["C"], polys["D"])
    out = Path(args.out)
    out.write_text(tup.to_json() + "\n")
    print(f"wrote tuple {out}")
    return EXIT_OK


def cmd_replay(args, cfg: Config) -> int:
    cert = SolveCertificate.from_json(Path(args.cert_file).read_text())
    tup = _load_tuple(args.tuple_file)
    if cert.verify(tuple_to_triple(tup)):
        print("ok: certificate replays to its products")
        return EXIT_OK
    print("replay mismatch: certificate does not solve this tuple")
    return EXIT_VERIFY


def _circle3d_from_json(data, label: str) -> Circle3D:
    try:
        return Circle3D(data["center"], data["radius"], data["unit_normal"])
    except (TypeError, KeyError) as exc:
        raise ParseError(f"bad circle {label!r}: {exc}") from exc


def _circle_s2_from_json(data, label: str) -> CircleS2:
    try:
        return CircleS2(data["axis"], data["angular_radius"])
    except (TypeError, KeyError) as exc:
        raise ParseError(f"bad spherical circle {label!r}: {exc}") from exc


def _build_sample(spec: dict, cfg: Config):
    try:
        family = spec["family"]
    except (TypeError, KeyError) as exc:
        raise ParseError("surface spec is missing 'family'") from exc
    nu, nv = cfg.res
    if family == "E":
        alpha = _circle3d_from_json(spec.get("alpha"), "alpha")
        beta_spec = spec.get("beta")
        if isinstance(beta_spec, dict) and "point" in beta_spec:
            beta = np.asarray(beta_spec["point"], dtype=float)
        else:
            beta = _circle3d_from_json(beta_spec, "beta")
        return gen_euclidean(alpha, beta, nu, nv)
    if family == "C":
        alpha = _circle_s2_from_json(spec.get("alpha"), "alpha")
        beta = _circle_s2_from_json(spec.get("beta"), "beta")
        return gen_clifford(alpha, beta, nu, nv)
    if family == "D":
        try:
            raw = spec["cyclide"]["qcoeffs"]
            bbox = spec["bbox"]
        except (TypeError, KeyError) as exc:
            raise ParseError("surface spec D needs 'cyclide' and 'bbox'") from exc
        try:
            coeffs = {tuple(int(p) for p in key.split(",")): value
                      for key, value in raw.items()}
        except ValueError as exc:
            raise ParseError("qcoeffs keys must look like 'i,j,k,l'") from exc
        cyclide = DarbouxCyclide(coeffs)
        # x and y at nu vertices, z at nv: slices give nv u-curves
        return sample_cyclide(cyclide, (bbox[0], bbox[1]), (nu, nu, nv))
    raise ParseError(f"unknown surface family {family!r}")


def cmd_surface(args, cfg: Config) -> int:
    from . import plotting

    spec = load_json(args.spec_file)
    sample = _build_sample(spec, cfg)
    report = check_iso_circles(sample, cfg.tol)
    base = Path(args.out)

    def artifact(ext: str) -> Path:
        return base.parent / (base.name + ext)

    export_obj(sample, artifact(".obj"))
    export_csv(sample, artifact(".csv"))
    artifact(".report.json").write_text(canonical_json(report))
    plotting.plot_sample(sample, artifact(".png"))
    plotting.plot_report(report, artifact(".metrics.png"))
    print(f"family {report['family']}: {report['points']} points, "
          f"{len(report['curves'])} iso-curves, "
          f"all_cocircular={report['all_cocircular']}")
    print(f"wrote {artifact('.obj')}, {artifact('.csv')}, "
          f"{artifact('.report.json')} and figures")
    if sample.family in ("E", "C") and not report["all_cocircular"]:
        return EXIT_VERIFY
    return EXIT_OK


def _selftest_checks(cfg: Config):
    from .quatpoly import Quaternion, U, V
    from .scalar import sqrt_adjoin

    rng = np.random.default_rng(cfg.seed)

    def random_quat(du: int, dv: int) -> QPoly:
        total = QPoly.zero()
        for i in range(du + 1):
            for j in range(dv + 1):
                coords = [int(c) for c in rng.integers(-3, 4, size=4)]
                total = total + QPoly.monomial(Quaternion(*coords), i, j)
        return total

    def check_norm_fixture():
        s2 = sqrt_adjoin(2)
        q = (U * U * V * V - 1) \
            + (U * U - V * V) * QPoly.constant(Quaternion(0, 1)) \
            + 2 * U * V * QPoly.constant(Quaternion(0, 0, 1))
        p = (U * U - s2 * U + 1) * (V * V - s2 * V + 1)
        r = (U * U + s2 * U + 1) * (V * V + s2 * V + 1)
        assert q.norm_poly() == p * r

    def check_solver_roundtrip():
        solved = 0
        while solved < 5:
            a = random_quat(1, 0)
            b = random_quat(1, 1)
            c = random_quat(0, 1)
            try:
                tup = tuple_from_ABCD(a, b, c, QPoly.one(), require_r22=True)
            except (ConstraintViolated, DegreeOutOfRange):
                continue
            cert = solve_22(tup)
            assert cert.verify(tuple_to_triple(tup))
            solved += 1

    def check_clifford_identity():
        for _ in range(200):
            coords = []
            for _ in range(2):
                a = Fraction(int(rng.integers(-512, 513)), 128)
                b = Fraction(int(rng.integers(-512, 513)), 128)
                den = a * a + b * b + 1
                coords.append((2 * a / den, 2 * b / den,
                               (a * a + b * b - 1) / den))
            p, q = coords
            s2 = sum((pi + qi) ** 2 for pi, qi in zip(p, q))
            if s2 < Fraction(1, 10**8):
                continue
            cross = (p[1] * q[2] - p[2] * q[1],
                     p[2] * q[0] - p[0] * q[2],
                     p[0] * q[1] - p[1] * q[0])
            re = -(p[0] * q[0] + p[1] * q[1] + p[2] * q[2])
            assert all(2 * c / s2 == c / (1 - re) for c in cross)

    def check_euclidean_circles():
        normal = rng.normal(size=3)
        normal /= np.linalg.norm(normal)
        alpha = Circle3D(rng.normal(size=3), 2.0, normal)
        beta = Circle3D(rng.normal(size=3), 1.0, [0.0, 0.0, 1.0])
        report = check_iso_circles(gen_euclidean(alpha, beta, 12, 12), 1e-9)
        assert report["all_cocircular"]

    def check_inversion_involution():
        pts = rng.normal(size=(200, 3)) * 3.0
        center = np.array([0.25, -0.5, 1.0])
        assert np.abs(invert(invert(pts, center, 2.0), center, 2.0)
                      - pts).max() <= 1e-12

    def check_torus_sample():
        torus = DarbouxCyclide.torus(2.0, 1.0)
        sample = sample_cyclide(torus, ([-3.2, -3.2, -1.2], [3.2, 3.2, 1.2]),
                                16)
        vals = eval_cyclide(torus, sample.points)
        assert np.abs(vals).max() <= 1e-6 * (1 + torus.coefficient_scale())

    return [
        ("norm identity fixture", check_norm_fixture),
        ("solver round-trip x5", check_solver_roundtrip),
        ("spherical product identity x200", check_clifford_identity),
        ("translational iso-circles", check_euclidean_circles),
        ("inversion involution", check_inversion_involution),
        ("torus sampling", check_torus_sample),
    ]


def cmd_selftest(args, cfg: Config) -> int:
    failures = 0
    for name, check in _selftest_checks(cfg):
        try:
            check()
        except Exception as exc:  # report every failure, keep going
            failures += 1
            print(f"FAIL: {name}: {exc}")
        else:
            print(f"ok: {name}")
    if failures:
        print(f"{failures} selftest check(s) failed")
        return EXIT_VERIFY
    print("selftest passed")
    return EXIT_OK


# --- argument parsing and dispatch ---------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bicircle",
        description="Quaternionic factorization of sum-of-squares "
                    "polynomial identities and doubly-circled surface "
                    "sampling.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=("exact", "approx"),
                        default="exact",
                        help="exact scalar arithmetic or float with "
                             "tolerances (default: exact)")
    common.add_argument("--tol", type=float, default=1e-9,
                        help="numerical tolerance (default: 1e-9)")
    common.add_argument("--res", type=str, default="16x16", metavar="NUxNV",
                        help="sampling grid resolution (default: 16x16)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized subcommands (default: 0)")
    common.add_argument("--out", type=str, default=None,
                        help="output path (file, or basename for surface)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common],
                       help="check the six-polynomial identity of a tuple file")
    p.add_argument("tuple_file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", parents=[common],
                       help="factor a bidegree-(2,2) tuple into a certificate")
    p.add_argument("tuple_file")
    p.set_defaults(func=cmd_solve, needs_out=True)

    p = sub.add_parser("make", parents=[common],
                       help="build a tuple file from factor data A, B, C, D")
    p.add_argument("abcd_file")
    p.set_defaults(func=cmd_make, needs_out=True)

    p = sub.add_parser("replay", parents=[common],
                       help="re-run a certificate against a tuple file")
    p.add_argument("cert_file")
    p.add_argument("tuple_file")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("surface", parents=[common],
                       help="sample a surface family and write mesh, report "
                            "and figures")
    p.add_argument("spec_file")
    p.set_defaults(func=cmd_surface, needs_out=True)

    p = sub.add_parser("selftest", parents=[common],
                       help="run the seeded end-to-end smoke checks")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config(backend=args.backend, tol=args.tol,
                     res=parse_res(args.res), seed=args.seed, out=args.out)
        if getattr(args, "needs_out", False) and not args.out:
            raise ParseError(f"{args.command} requires --out")
        return args.func(args, cfg)
    except (ParseError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvariantViolated, DegenerateCurve) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except DegreeOutOfRange as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGREE
    except (HypothesisViolated, ConstraintViolated, ExactnessUnavailable,
            AntipodalDegeneracy, EmptyIntersection, PoleSingularity,
            CenterSingularity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except BicircleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS


if __name__ == "__main__":
    raise SystemExit(main())
