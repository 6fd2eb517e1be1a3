"""Spherical-means solver of the wave-equation Cauchy problem.

For odd space dimension n = 2k+1, the unique classical solution of

    u_tt = Lap u,   u(x, 0) = v(x),   u_t(x, 0) = w(x),

is, in terms of means vbar(x, r), wbar(x, r) of the data over spheres of
radius r about x (unit-mass measure),

    u(x, t) = c_n [ d/dt (1/t d/dt)^{k-1} (t^{2k-1} vbar(x, t))
                  +      (1/t d/dt)^{k-1} (t^{2k-1} wbar(x, t)) ],
    c_n = 1 / (n-2)!!,

so u = d/dt(t vbar) + t wbar for n = 3 (Kirchhoff) and the k = 2 form for
n = 5.  Even n = 2 is obtained by Hadamard descent: lift the data to R^3
constant in the suppressed coordinate and evaluate the n = 3 formula.
No sign of t is assumed; t < 0 solves the final-value problem.

The same machinery evaluates the extension f~(x, s+it) of a field f(x, s)
on Euclidean spacetime: solve the Cauchy problem with v = f(., s) and
w = i f_s(., s).  Then f~ -> f as t -> 0, f~ obeys the wave equation in
(x, t), and (d_s + i d_t) f~ = 0 at t = 0; when f is harmonic in (x, s)
the extension coincides with the analytic continuation in s + it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import InsufficientSmoothnessError, UnsupportedDimensionError
from .fields import TestField
from .numerics import DEFAULT_SPHERE_ORDERS, FDScheme, derivative, sphere_rule

__all__ = [
    "WaveOptions",
    "CauchyData",
    "SpacetimeField",
    "from_cauchy_data",
    "harmonic_mode",
    "solve_cauchy",
    "extend",
    "wave_residual",
    "wave_residual_at",
]


@dataclass(frozen=True)
class WaveOptions:
    """Quadrature orders and FD steps of the propagator."""

    radial_fd: FDScheme = FDScheme(h=1e-2, order=4, richardson=True)
    time_fd: FDScheme = FDScheme(h=5e-3, order=4, richardson=True)
    s_fd: FDScheme = FDScheme(h=1e-3, order=4, richardson=True)
    xi_rel_step: float = 0.02    # FD step in xi = t^2, relative scale
    xi_min: float = 0.05         # below this xi, use the expanded radial form
    sphere_orders: Mapping[int, tuple[int, ...]] | None = None

    def orders_for(self, dim: int) -> tuple[int, ...]:
        if self.sphere_orders and dim in self.sphere_orders:
            return tuple(self.sphere_orders[dim])
        return DEFAULT_SPHERE_ORDERS[dim]


_DEFAULT = WaveOptions()


@dataclass(frozen=True)
class CauchyData:
    """Initial value v and initial time-derivative w on R^n."""

    v: TestField
    w: TestField
    n: int


@dataclass(frozen=True)
class SpacetimeField:
    """Field f(x, s) on Euclidean spacetime R^{n+1} (last column is s)."""

    evaluator: Callable[[np.ndarray], np.ndarray]
    s_derivative: Callable[[np.ndarray], np.ndarray] | None = None
    smoothness: float = math.inf
    name: str = ""

    def evaluate(self, points: np.ndarray):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            return complex(np.asarray(self.evaluator(pts[None, :]))[0])
        return np.asarray(self.evaluator(pts))


def from_cauchy_data(v: TestField, w: TestField) -> SpacetimeField:
    """Adapter f(x, s) = v(x) - i s w(x), so that (f, i f_s)|_{s=0} = (v, w)."""

    def ev(pts: np.ndarray) -> np.ndarray:
        return v.evaluate(pts[:, :-1]) - 1j * pts[:, -1] * w.evaluate(pts[:, :-1])

    return SpacetimeField(
        evaluator=ev,
        s_derivative=lambda pts: -1j * w.evaluate(pts[:, :-1]),
        smoothness=min(v.smoothness, w.smoothness),
        name="cauchy-adapter",
    )


def harmonic_mode(k: Sequence[float]) -> SpacetimeField:
    """exp(i k.x + |k| s): harmonic in (x, s), analytic in s."""
    kv = np.asarray(k, dtype=float)
    mag = float(np.linalg.norm(kv))

    def ev(pts: np.ndarray) -> np.ndarray:
        return np.exp(1j * (pts[:, :-1] @ kv) + mag * pts[:, -1])

    return SpacetimeField(
        evaluator=ev,
        s_derivative=lambda pts: mag * ev(pts),
        name=f"harmonic_mode(k={kv.tolist()})",
    )


def _mean_fn(field: TestField, x: np.ndarray, rule) -> Callable[[float], complex]:
    """r -> mean of field over the sphere of radius |r| about x (even in r)."""

    def mean(r: float):
        pts = x[None, :] + abs(r) * rule.nodes
        return np.dot(rule.weights, field.evaluate(pts))

    return mean


def _kirchhoff3(mv, mw, t: float, options: WaveOptions):
    """n = 3: u = d/dr(r vbar)|_{r=t} + t wbar(|t|)."""
    upart = derivative(lambda r: r * mv(r), t, options.radial_fd, 1)
    return upart + t * mw(abs(t))


def _poisson5(mv, mw, t: float, options: WaveOptions):
    """n = 5 (k = 2) radial operators, nested FD in xi = t^2.

    For xi below ``xi_min`` (stencil would cross xi = 0) the algebraically
    identical expanded form in radial derivatives is used instead.
    """
    xi = t * t
    sgn = 1.0 if t >= 0 else -1.0
    if xi > options.xi_min:
        def av(u: float):
            return u**1.5 * mv(math.sqrt(u))

        def bw(u: float):
            return u**1.5 * mw(math.sqrt(u))

        def xi_scheme(u: float) -> FDScheme:
            return FDScheme(h=min(options.xi_rel_step * max(u, 1.0), u / 4.0),
                            order=4, richardson=False)

        def inner(tt: float):
            u = tt * tt
            return 2.0 * sgn * derivative(av, u, xi_scheme(u), 1)

        upart = derivative(inner, t, options.time_fd, 1) / 3.0
        wpart = sgn * (2.0 / 3.0) * derivative(bw, xi, xi_scheme(xi), 1)
        return upart + wpart
    # expanded: u = m + (5/3) t m' + (1/3) t^2 m'' + t w + (1/3) t^2 w'
    fd = options.radial_fd
    m0 = mv(t)
    m1 = derivative(mv, t, fd, 1)
    m2 = derivative(mv, t, fd, 2)
    w0 = mw(t)
    w1 = derivative(mw, t, fd, 1)
    return m0 + (5.0 / 3.0) * t * m1 + (t * t / 3.0) * m2 + t * w0 + (t * t / 3.0) * w1


def _check_smoothness(data: CauchyData, k: int) -> None:
    if data.v.smoothness < k + 2:
        raise InsufficientSmoothnessError(
            f"initial value must be C^{k + 2}, declared {data.v.smoothness}"
        )
    if data.w.smoothness < k + 1:
        raise InsufficientSmoothnessError(
            f"initial derivative must be C^{k + 1}, declared {data.w.smoothness}"
        )


def solve_cauchy(data: CauchyData, x: Sequence[float] | np.ndarray, t: float,
                 options: WaveOptions = _DEFAULT):
    """Wave-equation solution u(x, t) from Cauchy data at t = 0 (n in {2, 3, 5})."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != data.n:
        raise ValueError(f"point has dimension {x.shape[0]}, data has n={data.n}")
    if data.n == 2:
        lifted = CauchyData(_lift_planar(data.v), _lift_planar(data.w), 3)
        return solve_cauchy(lifted, np.append(x, 0.0), t, options)
    if data.n not in (3, 5):
        raise UnsupportedDimensionError(f"solver supports n in {{2, 3, 5}}, got {data.n}")
    k = (data.n - 1) // 2
    _check_smoothness(data, k)
    if t == 0.0:
        return data.v.evaluate(x)
    rule = sphere_rule(data.n - 1, options.orders_for(data.n - 1))
    mv = _mean_fn(data.v, x, rule)
    mw = _mean_fn(data.w, x, rule)
    if data.n == 3:
        return _kirchhoff3(mv, mw, t, options)
    return _poisson5(mv, mw, t, options)


def _lift_planar(field: TestField) -> TestField:
    """Extend a field on R^2 to R^3, constant in the third coordinate."""
    return TestField(
        evaluator=lambda pts: field.evaluate(pts[:, :2]),
        smoothness=field.smoothness,
        support_radius=None,
        name=f"lift2to3[{field.name}]",
    )


def extend(f: SpacetimeField, x: Sequence[float] | np.ndarray, s: float, t: float,
           n: int = 3, options: WaveOptions = _DEFAULT):
    """Extension f~(x, s + it) of a Euclidean-spacetime field (n = 3).

    Solves the Cauchy problem with v = f(., s) and w = i f_s(., s); the
    s-derivative uses the exact evaluator when the field carries one.
    """
    if n != 3:
        raise UnsupportedDimensionError("extend is implemented for n = 3")
    x = np.asarray(x, dtype=float)
    if t == 0.0:
        return f.evaluate(np.append(x, s))

    def v_eval(pts: np.ndarray) -> np.ndarray:
        return f.evaluate(np.column_stack([pts, np.full(pts.shape[0], s)]))

    if f.s_derivative is not None:
        def w_eval(pts: np.ndarray) -> np.ndarray:
            cols = np.column_stack([pts, np.full(pts.shape[0], s)])
            return 1j * np.asarray(f.s_derivative(cols))
    else:
        def w_eval(pts: np.ndarray) -> np.ndarray:
            def slice_at(ss: float) -> np.ndarray:
                return f.evaluate(np.column_stack([pts, np.full(pts.shape[0], ss)]))

            return 1j * derivative(slice_at, s, options.s_fd, 1)

    data = CauchyData(
        TestField(v_eval, smoothness=f.smoothness, name="extend-v"),
        TestField(w_eval, smoothness=f.smoothness, name="extend-w"),
        3,
    )
    return solve_cauchy(data, x, t, options)


def wave_residual_at(data: CauchyData, x: Sequence[float] | np.ndarray, t: float,
                     h: float = 0.05, options: WaveOptions = _DEFAULT) -> complex:
    """u_tt - Lap u at one spacetime point, by 2nd-order FD on solver samples."""
    x = np.asarray(x, dtype=float)

    def u(dx: np.ndarray, dt: float):
        return solve_cauchy(data, x + dx, t + dt, options)

    zero = np.zeros_like(x)
    center = u(zero, 0.0)
    u_tt = (u(zero, h) - 2.0 * center + u(zero, -h)) / h**2
    lap = 0.0
    for axis in range(x.shape[0]):
        step = np.zeros_like(x)
        step[axis] = h
        lap = lap + (u(step, 0.0) - 2.0 * center + u(-step, 0.0)) / h**2
    return u_tt - lap


def wave_residual(data: CauchyData, x_center: Sequence[float] | np.ndarray,
                  t_center: float, h: float = 0.05, half_points: int = 2,
                  options: WaveOptions = _DEFAULT) -> float:
    """Max |u_tt - Lap u| over the interior of a (2m+1)^{n+1} lattice.

    The lattice is centered at (x_center, t_center) with spacing ``h``;
    solver samples are cached and shared between neighboring stencils.
    """
    x_center = np.asarray(x_center, dtype=float)
    n = data.n
    m = half_points
    cache: dict[tuple[int, ...], complex] = {}

    def uval(offs: tuple[int, ...]):
        if offs not in cache:
            dx = np.asarray(offs[:n], dtype=float) * h
            cache[offs] = solve_cauchy(data, x_center + dx, t_center + offs[n] * h,
                                       options)
        return cache[offs]

    def bump_axis(offs: tuple[int, ...], axis: int, step: int) -> tuple[int, ...]:
        lst = list(offs)
        lst[axis] += step
        return tuple(lst)

    worst = 0.0
    interior = range(-(m - 1), m)
    for idx in np.ndindex(*((2 * m - 1,) * (n + 1))):
        offs = tuple(interior[i] for i in idx)
        center = uval(offs)
        u_tt = (uval(bump_axis(offs, n, 1)) - 2.0 * center
                + uval(bump_axis(offs, n, -1))) / h**2
        lap = 0.0
        for axis in range(n):
            lap = lap + (uval(bump_axis(offs, axis, 1)) - 2.0 * center
                         + uval(bump_axis(offs, axis, -1))) / h**2
        worst = max(worst, abs(u_tt - lap))
    return worst
