"""Command-line front end and machine-readable reporting.

Subcommands map one-to-one onto the library surface:

    gamma           complex distance and point classification
    potential       newtonian / holomorphic / regularized potentials
    source-action   <delta~, f> with the n = 3 part decomposition
    moments         monopole Q and dipole P
    descent-check   both sides of the descent identity
    wave            Cauchy solution samples on a lattice (CSV)
    wave-verify     FD wave-equation residual (JSON)
    clifford        bp-check | ebp-check | maxwell-demo (JSON)
    verify          acceptance suite, one pass/fail line per criterion

Complex numbers serialize as {"re": ..., "im": ...}; vectors are
comma-separated flags checked against --n.  Exit codes: 0 success,
1 validation error, 2 numerical failure in verify.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import clifford as cf
from . import source as src
from . import wave as wv
from .acceptance import CRITERIA, run_acceptance
from .config import Config, config_from_env, load_config
from .errors import CxptError
from .fields import parse_field_spec
from .geometry import ComplexPoint, classify_point, complex_distance
from .potential import holomorphic_potential, newtonian, regularized_potential

__all__ = ["main", "run", "OPERATION_COVERAGE"]

#: Spec operation -> owning subcommand (numerics kernels are exercised by verify).
OPERATION_COVERAGE = {
    "integrate_interval": "verify",
    "mean_on_sphere": "verify",
    "derivative": "verify",
    "complex_distance": "gamma",
    "classify_point": "gamma",
    "to_oblate": "gamma",
    "from_oblate": "gamma",
    "jacobian_volume": "gamma",
    "grad_pq": "gamma",
    "newtonian": "potential",
    "holomorphic_potential": "potential",
    "regularized_potential": "potential",
    "lambda_coeff": "source-action",
    "regularized_action": "source-action",
    "singular_action_r3": "source-action",
    "singular_action_r4": "source-action",
    "singular_action_even": "source-action",
    "singular_action_odd": "source-action",
    "moments": "moments",
    "centroid": "moments",
    "descent_check": "descent-check",
    "solve_cauchy": "wave",
    "extend": "wave",
    "wave_residual": "wave-verify",
    "mv_mul": "clifford",
    "dirac_apply": "clifford",
    "cauchy_kernel": "clifford",
    "regular_point": "clifford",
    "borel_pompeiu": "clifford",
    "extended_borel_pompeiu": "clifford",
    "maxwell_extend": "clifford",
    "run": "verify",
    "load_config": "verify",
}


def _cnum(value: complex) -> dict:
    return {"re": float(np.real(value)), "im": float(np.imag(value))}


def _vector(text: str, n: int | None = None) -> np.ndarray:
    vals = np.asarray([float(t) for t in text.split(",")], dtype=float)
    if n is not None and vals.size != n:
        raise CxptError(f"vector {text!r} has {vals.size} entries, expected {n}")
    return vals


def _axis(text: str | None, n: int, cfg: Config) -> np.ndarray:
    """Parse --y; when omitted, use the configured default axis a e_n."""
    if text is None:
        y = np.zeros(n)
        y[-1] = cfg.default_a
        return y
    return _vector(text, n)


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload) + "\n")


def _source_options(cfg: Config) -> src.SourceOptions:
    return src.SourceOptions(
        q_order=cfg.interval_order,
        panel_order=cfg.panel_order,
        sphere_orders=cfg.sphere_orders(),
    )


def _wave_options(cfg: Config) -> wv.WaveOptions:
    return wv.WaveOptions(sphere_orders=cfg.sphere_orders())


def _cmd_gamma(args, cfg: Config) -> int:
    x = _vector(args.x, args.n)
    y = _axis(args.y, args.n, cfg)
    side = -1 if args.side == "back" else 1
    dist = complex_distance(ComplexPoint(x, y), side=side)
    cls = classify_point(x, y, side=side)
    _emit({"p": dist.p, "q": dist.q, "class": cls.value})
    return 0


def _cmd_potential(args, cfg: Config) -> int:
    x = _vector(args.x, args.n)
    if args.kind == "newtonian":
        value = complex(newtonian(x, args.n))
    else:
        y = _axis(args.y, args.n, cfg)
        z = ComplexPoint(x, y)
        side = -1 if args.side == "back" else 1
        if args.kind == "regularized":
            value = regularized_potential(z, args.n, args.eps, side=side)
        else:
            value = holomorphic_potential(z, args.n, side=side)
    _emit({"kind": args.kind, "value": _cnum(value)})
    return 0


def _cmd_source_action(args, cfg: Config) -> int:
    y = _axis(args.y, args.n, cfg)
    f = parse_field_spec(args.field).to_field(args.n)
    options = _source_options(cfg)
    if args.eps is not None:
        value = src.regularized_action(f, y, args.n, args.eps, options)
        _emit({"value_re": value.real, "value_im": value.imag,
               "parts": None, "err_estimate": None, "eps": args.eps})
        return 0
    if args.n == 3:
        act = src.singular_action_r3(f, y, options)
        parts = {k: _cnum(v) for k, v in act.parts.items()}
        _emit({"value_re": act.value.real, "value_im": act.value.imag,
               "parts": parts, "err_estimate": act.err_estimate})
        return 0
    value = src.singular_action(f, y, args.n, options)
    _emit({"value_re": value.real, "value_im": value.imag,
           "parts": None, "err_estimate": None})
    return 0


def _cmd_moments(args, cfg: Config) -> int:
    y = _axis(args.y, args.n, cfg)
    q_val, p_vec = src.moments(args.n, y, _source_options(cfg))
    _emit({"Q": _cnum(q_val), "P": [_cnum(v) for v in p_vec]})
    return 0


def _cmd_descent(args, cfg: Config) -> int:
    y = _axis(args.y, 3, cfg)
    f = parse_field_spec(args.field).to_field(3)
    lhs, rhs = src.descent_check(f, y, window=args.window,
                                 options=_source_options(cfg))
    _emit({"lhs": _cnum(lhs), "rhs": _cnum(rhs), "abs_diff": abs(lhs - rhs)})
    return 0


def _cmd_wave(args, cfg: Config) -> int:
    n = args.n
    v = parse_field_spec(args.v).to_field(n)
    w = parse_field_spec(args.w).to_field(n)
    data = wv.CauchyData(v, w, n)
    options = _wave_options(cfg)
    x0 = _vector(args.x, n)
    cols = [f"x{k + 1}" for k in range(n)] + ["t", "re_u", "im_u"]
    sys.stdout.write(",".join(cols) + "\n")
    m = args.lattice_half
    offsets = range(-m, m + 1)
    for axis_off in np.ndindex(*((2 * m + 1,) * n)):
        dx = np.asarray([offsets[i] for i in axis_off], dtype=float) * args.step
        for jt in offsets:
            t = args.t + jt * args.step
            u = wv.solve_cauchy(data, x0 + dx, t, options)
            row = [f"{c:.17g}" for c in (x0 + dx)] + [
                f"{t:.17g}", f"{np.real(u):.17g}", f"{np.imag(u):.17g}"]
            sys.stdout.write(",".join(row) + "\n")
    return 0


def _cmd_wave_verify(args, cfg: Config) -> int:
    n = args.n
    v = parse_field_spec(args.v).to_field(n)
    w = parse_field_spec(args.w).to_field(n)
    data = wv.CauchyData(v, w, n)
    res = wv.wave_residual(data, _vector(args.x, n), args.t, h=args.step,
                           half_points=args.half, options=_wave_options(cfg))
    _emit({"residual": res, "step": args.step, "half_points": args.half})
    return 0


def _clifford_test_field(alg) -> cf.MultivectorField:
    return cf.poly_field(alg, 3, {
        (1,): {(1, 0, 0): 1.0, (0, 2, 0): 0.5},
        (2,): {(0, 0, 1): 1.0},
        (): {(0, 0, 0): 0.3, (0, 1, 0): -0.2},
    })


def _cmd_clifford(args, cfg: Config) -> int:
    alg = cf.Cl(3)
    ball = cf.Ball(np.zeros(3), args.radius)
    if args.mode == "bp-check":
        f = _clifford_test_field(alg)
        x_in = _vector(args.x, 3)
        interior = (cf.borel_pompeiu(f, ball, x_in) - f.value(x_in)).norm()
        exterior = cf.borel_pompeiu(f, ball, _vector(args.exterior, 3)).norm()
        _emit({"interior_error": interior, "exterior_leakage": exterior})
        return 0
    if args.mode == "ebp-check":
        f = _clifford_test_field(alg)
        z = ComplexPoint(_vector(args.x, 3), _vector(args.y, 3))
        value = cf.extended_borel_pompeiu(f, ball, z)
        oracle = np.zeros(alg.dim, dtype=complex)
        from .fields import TestField

        for mask, table in f.poly.items():
            def ev(pts, table=table):
                sh = pts + z.x[None, :]
                out = np.zeros(pts.shape[0], dtype=complex)
                for alpha, c in table.items():
                    term = np.full(pts.shape[0], complex(c))
                    for kk, e in enumerate(alpha):
                        if e:
                            term = term * sh[:, kk] ** e
                    out += term
                return out

            oracle[mask] = src.singular_action_r3(TestField(ev), -z.y).value
        diff = (value - cf.Multivector(alg, oracle)).norm()
        _emit({"value": [_cnum(c) for c in value.coeffs],
               "oracle": [_cnum(c) for c in oracle],
               "abs_diff": diff})
        return 0
    # maxwell-demo
    st = cf.spacetime_algebra(3)
    mask01 = st.mask_of((0, 1))

    def ev(pts):
        out = np.zeros((pts.shape[0], st.dim), dtype=complex)
        out[:, mask01] = np.cos(pts[:, 1])
        return out

    fst = cf.SpacetimeMultivectorField(
        st, 3, ev,
        s_derivative=lambda pts: np.zeros((pts.shape[0], st.dim), dtype=complex),
    )
    ft, jt, resid = cf.maxwell_extend(fst, _vector(args.x, 3), 0.0, args.t)
    _emit({
        "f_extension": [_cnum(c) for c in ft.coeffs],
        "current": [_cnum(c) for c in jt.coeffs],
        "continuity_residual": resid,
    })
    return 0


def _cmd_verify(args, cfg: Config) -> int:
    if args.suite == "all":
        ids = None
    elif args.suite == "fast":
        ids = [1, 2, 3, 7, 9, 10, 12]
    else:
        try:
            ids = [int(t) for t in args.suite.split(",")]
        except ValueError as exc:
            raise CxptError(f"bad suite spec {args.suite!r}") from exc
        unknown = [i for i in ids if i not in CRITERIA]
        if unknown:
            raise CxptError(f"unknown criteria {unknown}")
    results = run_acceptance(ids)
    for res in results:
        payload = {"criterion": res.cid, "title": res.title,
                   "passed": res.passed, "elapsed_s": round(res.elapsed, 3)}
        payload["details"] = {
            k: (v if isinstance(v, (int, float, bool, str)) else str(v))
            for k, v in res.details.items()
        }
        _emit(payload)
        sys.stderr.write(res.line() + "\n")
    failed = [r.cid for r in results if not r.passed]
    if failed:
        sys.stderr.write(f"FAILED criteria: {failed}\n")
        return 2
    sys.stderr.write(f"all {len(results)} criteria passed\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cxpt",
        description="complex-distance potential theory: evaluation and verification",
    )
    parser.add_argument("--config", help="config file path (else $CXPT_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", help="complex distance and classification")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", default=None, help="defaults to default.a times e_n")
    p.add_argument("--side", choices=["front", "back"], default="front")
    p.set_defaults(func=_cmd_gamma)

    p = sub.add_parser("potential", help="potential values")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", default=None)
    p.add_argument("--kind", choices=["newtonian", "holomorphic", "regularized"],
                   default="holomorphic")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--side", choices=["front", "back"], default="front")
    p.set_defaults(func=_cmd_potential)

    p = sub.add_parser("source-action", help="extended source acting on a field")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y", default=None, help="defaults to default.a times e_n")
    p.add_argument("--field", required=True)
    p.add_argument("--eps", type=float, default=None,
                   help="evaluate the regularized action I_eps instead")
    p.set_defaults(func=_cmd_source_action)

    p = sub.add_parser("moments", help="monopole and dipole moments")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y", default=None, help="defaults to default.a times e_n")
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("descent-check", help="descent identity n=3 <-> n=4")
    p.add_argument("--y", default=None, help="defaults to default.a times e_3")
    p.add_argument("--field", required=True)
    p.add_argument("--window", type=float, default=None)
    p.set_defaults(func=_cmd_descent)

    p = sub.add_parser("wave", help="Cauchy solution on a lattice (CSV)")
    p.add_argument("--n", type=int, default=3, choices=[2, 3, 5])
    p.add_argument("--v", required=True, help="initial value field spec")
    p.add_argument("--w", required=True, help="initial derivative field spec")
    p.add_argument("--x", required=True, help="lattice center")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--lattice-half", type=int, default=1)
    p.add_argument("--step", type=float, default=0.1)
    p.set_defaults(func=_cmd_wave)

    p = sub.add_parser("wave-verify", help="FD wave-equation residual")
    p.add_argument("--n", type=int, default=3, choices=[2, 3, 5])
    p.add_argument("--v", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--half", type=int, default=2)
    p.set_defaults(func=_cmd_wave_verify)

    p = sub.add_parser("clifford", help="Clifford-layer checks")
    p.add_argument("mode", choices=["bp-check", "ebp-check", "maxwell-demo"])
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--x", default="0.3,-0.2,0.1")
    p.add_argument("--y", default="0,0,0.05")
    p.add_argument("--exterior", default="1.6,0.4,0.0")
    p.add_argument("--t", type=float, default=0.6)
    p.set_defaults(func=_cmd_clifford)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--suite", default="all",
                   help="'all', 'fast', or a comma list of criterion numbers")
    p.set_defaults(func=_cmd_verify)

    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse argv, execute the subcommand, return the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        cfg = load_config(args.config) if args.config else config_from_env()
        return args.func(args, cfg)
    except (CxptError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
