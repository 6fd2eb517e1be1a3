"""Deterministic quadrature and numerical-differentiation kernels.

Conventions used throughout the library:

* Interval rules are Gauss-Legendre; the stored reference rule lives on
  [-1, 1] (weights sum to the interval length 2) and is mapped affinely.
* Sphere rules carry the *normalized* measure: weights sum to 1 on every
  S^m.  The area factor omega_n = 2 pi^{n/2} / Gamma(n/2) is applied
  explicitly by callers where a formula demands it, never implicitly.
* S^1 means use the trapezoid rule (spectrally accurate for periodic
  integrands); S^2 uses Gauss-Legendre in the polar cosine times uniform
  azimuth; S^m for m >= 3 is built recursively with Gauss-Jacobi polar
  nodes for the weight (1-xi^2)^{(m-2)/2}.
* Summation order within a rule is fixed (ascending node index), so a
  given invocation is bitwise reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.special import roots_jacobi

from .errors import (
    InvalidRadiusError,
    NonFiniteIntegrandError,
    StencilOutOfDomainError,
)

__all__ = [
    "QuadratureRule",
    "FDScheme",
    "IntervalIntegral",
    "gauss_legendre",
    "circle_rule",
    "sphere_rule",
    "integrate_interval",
    "mean_on_sphere",
    "derivative",
    "partial_derivative",
    "fd_gradient",
    "fd_laplacian",
    "orthonormal_complement_frame",
    "sphere_area",
    "DEFAULT_SPHERE_ORDERS",
]

#: Default per-level node counts for product rules on S^dim.
DEFAULT_SPHERE_ORDERS: dict[int, tuple[int, ...]] = {
    1: (64,),
    2: (24, 48),
    3: (14, 14, 28),
    4: (10, 10, 10, 20),
}


def sphere_area(n: int) -> float:
    """Area omega_n of the unit sphere S^{n-1} in R^n."""
    if n < 1:
        raise ValueError(f"sphere_area needs n >= 1, got {n}")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a fixed quadrature rule.

    ``kind`` is one of ``"gauss-legendre"`` (interval [-1, 1], weights sum
    to 2), ``"circle-trapezoid"`` (S^1, weights sum to 1) or
    ``"sphere-product"`` (S^m, weights sum to 1).  ``nodes`` has shape
    (m,) for intervals and (m, d) with unit rows for spheres.
    """

    kind: str
    order: int
    nodes: np.ndarray
    weights: np.ndarray


class IntervalIntegral(NamedTuple):
    value: complex
    error: float


@dataclass(frozen=True)
class FDScheme:
    """Central finite-difference configuration.

    ``h`` is the base step, ``order`` the stencil accuracy (2 or 4) and
    ``richardson`` enables one extrapolation level (h and h/2).
    """

    h: float = 1e-4
    order: int = 4
    richardson: bool = True

    def __post_init__(self) -> None:
        if self.h <= 0:
            raise ValueError("FD step h must be positive")
        if self.order not in (2, 4):
            raise ValueError("FD accuracy order must be 2 or 4")

    def with_h(self, h: float) -> "FDScheme":
        return FDScheme(h=h, order=self.order, richardson=self.richardson)


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> QuadratureRule:
    """Gauss-Legendre rule of the given node count on [-1, 1]."""
    if order < 1:
        raise ValueError("Gauss-Legendre order must be >= 1")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule("gauss-legendre", order, nodes, weights)


@lru_cache(maxsize=None)
def circle_rule(order: int) -> QuadratureRule:
    """Uniform (trapezoid) rule on S^1 with normalized weights."""
    if order < 3:
        raise ValueError("circle rule needs at least 3 nodes")
    theta = 2.0 * np.pi * np.arange(order) / order
    nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    weights = np.full(order, 1.0 / order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule("circle-trapezoid", order, nodes, weights)


@lru_cache(maxsize=None)
def sphere_rule(dim: int, orders: tuple[int, ...] | None = None) -> QuadratureRule:
    """Product rule on the unit sphere S^dim with normalized measure.

    ``orders`` gives the per-level node counts, outermost polar level
    first (the last entry is the base circle).  Defaults come from
    ``DEFAULT_SPHERE_ORDERS``.
    """
    if dim < 1:
        raise ValueError("sphere_rule needs dim >= 1")
    if orders is None:
        orders = DEFAULT_SPHERE_ORDERS.get(dim)
        if orders is None:
            raise ValueError(f"no default orders for S^{dim}; pass orders")
    if len(orders) != dim:
        raise ValueError(f"S^{dim} needs {dim} order entries, got {orders}")
    if dim == 1:
        return circle_rule(orders[0])
    # Polar measure on S^dim is (1 - xi^2)^{(dim-2)/2} dxi: Gauss-Jacobi nodes.
    alpha = (dim - 2) / 2.0
    xi, wxi = roots_jacobi(orders[0], alpha, alpha)
    wxi = wxi / wxi.sum()
    sub = sphere_rule(dim - 1, tuple(orders[1:]))
    sin_pol = np.sqrt(np.clip(1.0 - xi**2, 0.0, None))
    nodes = np.concatenate(
        [
            np.column_stack([s * sub.nodes, np.full(sub.nodes.shape[0], x)])
            for x, s in zip(xi, sin_pol)
        ]
    )
    weights = np.concatenate([w * sub.weights for w in wxi])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule("sphere-product", int(np.prod(orders)), nodes, weights)


def _as_batch_eval(f) -> Callable[[np.ndarray], np.ndarray]:
    """Adapt a TestField-like object or callable to batch point evaluation."""
    fn = f.evaluate if hasattr(f, "evaluate") else f
    return fn


def _eval_batch(fn: Callable, pts: np.ndarray) -> np.ndarray:
    """Evaluate fn on an (m, n) point array, tolerating scalar-only callables."""
    try:
        vals = np.asarray(fn(pts))
        if vals.shape[:1] == (pts.shape[0],):
            return vals
    except Exception:
        pass
    return np.asarray([fn(p) for p in pts])


def _eval_scalar_function(g: Callable, x: np.ndarray) -> np.ndarray:
    """Evaluate a real->complex function on a 1-D node array."""
    try:
        vals = np.asarray(g(x))
        if vals.shape == x.shape:
            return vals
    except Exception:
        pass
    return np.asarray([g(float(t)) for t in x])


def integrate_interval(
    g: Callable[[float], complex],
    lo: float,
    hi: float,
    order: int = 16,
    rule: QuadratureRule | None = None,
) -> IntervalIntegral:
    """Gauss-Legendre integral of ``g`` over [lo, hi] with an error estimate.

    The error estimate is the difference against the rule with doubled
    node count; the returned value is the refined one.
    """
    if not lo < hi:
        raise ValueError(f"integrate_interval needs lo < hi, got [{lo}, {hi}]")
    base = rule if rule is not None else gauss_legendre(order)
    fine = gauss_legendre(2 * base.order)

    def apply(r: QuadratureRule) -> complex:
        x = 0.5 * (hi - lo) * r.nodes + 0.5 * (hi + lo)
        vals = _eval_scalar_function(g, x)
        if not np.all(np.isfinite(vals)):
            raise NonFiniteIntegrandError(
                f"integrand returned a non-finite value on [{lo}, {hi}]"
            )
        return complex(0.5 * (hi - lo) * np.dot(r.weights, vals))

    coarse = apply(base)
    refined = apply(fine)
    return IntervalIntegral(refined, abs(refined - coarse))


def mean_on_sphere(
    f,
    center: Sequence[float] | np.ndarray,
    radius: float,
    sphere_dim: int | None = None,
    axis: Sequence[float] | np.ndarray | None = None,
    rule: QuadratureRule | None = None,
    orders: tuple[int, ...] | None = None,
) -> complex:
    """Mean of ``f`` over a sphere, with respect to the unit-mass measure.

    ``sphere_dim`` defaults to the full sphere S^{n-1} about ``center``.
    For ``sphere_dim == n-2`` an ``axis`` vector must be supplied; the
    sphere then lies in the hyperplane through ``center`` orthogonal to
    it.  A zero radius returns ``f(center)``.
    """
    center = np.asarray(center, dtype=float)
    n = center.shape[0]
    if sphere_dim is None:
        sphere_dim = n - 1
    if radius < 0:
        raise InvalidRadiusError(f"sphere radius must be >= 0, got {radius}")
    if not 1 <= sphere_dim <= n - 1:
        raise ValueError(f"sphere_dim must be in [1, {n - 1}], got {sphere_dim}")
    if rule is None:
        rule = sphere_rule(sphere_dim, orders)
    fn = _as_batch_eval(f)
    if sphere_dim == n - 1:
        pts = center[None, :] + radius * rule.nodes
    elif sphere_dim == n - 2:
        if axis is None:
            raise ValueError("sphere_dim = n-2 requires an axis vector")
        frame = orthonormal_complement_frame(np.asarray(axis, dtype=float))
        pts = center[None, :] + radius * (rule.nodes @ frame.T)
    else:
        raise ValueError("only full (n-1) and axis-orthogonal (n-2) spheres are supported")
    vals = _eval_batch(fn, pts)
    return complex(np.dot(rule.weights, vals))


# Central stencils: (derivative order, accuracy) -> (offsets, coefficients).
_STENCILS: dict[tuple[int, int], tuple[tuple[int, ...], tuple[float, ...]]] = {
    (1, 2): ((-1, 1), (-0.5, 0.5)),
    (1, 4): ((-2, -1, 1, 2), (1 / 12, -2 / 3, 2 / 3, -1 / 12)),
    (2, 2): ((-1, 0, 1), (1.0, -2.0, 1.0)),
    (2, 4): ((-2, -1, 0, 1, 2), (-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12)),
    (3, 2): ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
    (3, 4): ((-3, -2, -1, 1, 2, 3), (1 / 8, -1.0, 13 / 8, -13 / 8, 1.0, -1 / 8)),
    (4, 2): ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0)),
    (4, 4): ((-3, -2, -1, 0, 1, 2, 3), (-1 / 6, 2.0, -13 / 2, 28 / 3, -13 / 2, 2.0, -1 / 6)),
}


def _stencil_value(g, at, h, offsets, coeffs, power):
    acc = None
    for k, c in zip(offsets, coeffs):
        term = c * g(at + k * h)
        acc = term if acc is None else acc + term
    return acc / h**power


def derivative(
    g: Callable[[float], complex],
    at: float,
    scheme: FDScheme | None = None,
    order_of_derivative: int = 1,
    domain: tuple[float, float] | None = None,
):
    """Central finite-difference derivative of a scalar-argument function.

    Supports derivative orders 1-4 at accuracy 2 or 4, with one optional
    Richardson level (``scheme.richardson``).  ``g`` may return complex
    scalars or numpy arrays; linearity of the stencil does the rest.
    ``domain`` bounds, when given, are enforced for every stencil point.
    """
    if scheme is None:
        scheme = FDScheme()
    if not 1 <= order_of_derivative <= 4:
        raise ValueError("order_of_derivative must be in 1..4")
    offsets, coeffs = _STENCILS[(order_of_derivative, scheme.order)]
    steps = [scheme.h, scheme.h / 2.0] if scheme.richardson else [scheme.h]
    if domain is not None:
        lo, hi = domain
        reach = max(abs(k) for k in offsets)
        for h in steps:
            if at - reach * h < lo or at + reach * h > hi:
                raise StencilOutOfDomainError(
                    f"stencil around {at} (reach {reach * h}) leaves [{lo}, {hi}]"
                )
    d_full = _stencil_value(g, at, steps[0], offsets, coeffs, order_of_derivative)
    if not scheme.richardson:
        return d_full
    d_half = _stencil_value(g, at, steps[1], offsets, coeffs, order_of_derivative)
    gain = 2.0**scheme.order
    return (gain * d_half - d_full) / (gain - 1.0)


def partial_derivative(
    func,
    point: Sequence[float] | np.ndarray,
    axis: int,
    scheme: FDScheme | None = None,
    order_of_derivative: int = 1,
):
    """Partial derivative along a coordinate axis of a field on R^n.

    ``func`` is either a TestField-like object (has ``evaluate``) or a
    plain callable accepting a single (n,) point.
    """
    point = np.asarray(point, dtype=float)
    fn = _as_batch_eval(func)

    def g(t: float):
        p = point.copy()
        p[axis] = t
        return fn(p)

    return derivative(g, float(point[axis]), scheme, order_of_derivative)


def fd_gradient(func, point, scheme: FDScheme | None = None) -> np.ndarray:
    """Finite-difference gradient of a scalar field at one point."""
    point = np.asarray(point, dtype=float)
    return np.asarray(
        [partial_derivative(func, point, k, scheme, 1) for k in range(point.size)]
    )


def fd_laplacian(func, point, scheme: FDScheme | None = None):
    """Finite-difference Laplacian (sum of second partials) at one point."""
    point = np.asarray(point, dtype=float)
    total = None
    for k in range(point.size):
        term = partial_derivative(func, point, k, scheme, 2)
        total = term if total is None else total + term
    return total


def orthonormal_complement_frame(axis: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the hyperplane orthogonal to ``axis``.

    Gram-Schmidt over the standard basis, pivoting on the largest
    |component| of the unit axis first (ties broken by index).  Returns
    an (n, n-1) matrix whose columns span axis-perp.
    """
    axis = np.asarray(axis, dtype=float)
    nrm = np.linalg.norm(axis)
    if nrm == 0.0:
        raise ValueError("axis vector must be nonzero")
    n = axis.size
    yhat = axis / nrm
    order = np.argsort(-np.abs(yhat), kind="stable")
    cols: list[np.ndarray] = []
    for idx in order:
        v = np.zeros(n)
        v[idx] = 1.0
        v -= (v @ yhat) * yhat
        for b in cols:
            v -= (v @ b) * b
        norm_v = np.linalg.norm(v)
        if norm_v > 1e-12:
            cols.append(v / norm_v)
        if len(cols) == n - 1:
            break
    return np.column_stack(cols)
