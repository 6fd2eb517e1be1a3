"""Complex Clifford algebra, Dirac operators, and Borel-Pompeiu quadrature.

Cl_n is generated by e_1..e_n with e_k e_l + e_l e_k = 2 delta_kl (all
squares +1); the spacetime algebra adds e_0.  Basis blades e_K are
indexed by bitmasks over the ordered generator labels; the geometric
product contracts repeated generators with metric +1 and picks up the
parity of the transpositions needed to interleave the factors.

The vector z = sum z_k e_k satisfies z^2 = z.z = gamma(z)^2, which ties
the algebra to the complex distance.  The Dirac operator D = sum e_k d_k
is an elliptic square root of the Laplacian (D^2 = Lap); its fundamental
solution is the Cauchy kernel

    C(x) = x / (omega_n r^n),   complexified to   C(z) = z / (omega_n gamma^n).

A field f on a bounded domain M with piecewise smooth boundary obeys the
Borel-Pompeiu identity

    Int_{dM} C(x'-x) n(x') f(x') dS - Int_M C(x'-x) D f(x') dx'
        = f(x) inside, 0 outside,

and its extension with kernel C(x'-z) evaluates the complexified field
f~_M(z) at regular points z (those with z - x' outside the singular set
for every boundary x').  The hyperbolic operator D~ = D - i e_0 d_t
squares to the wave operator; extending f componentwise in time and
setting j~ = D~ f~ yields D~ j~ = 0 with f~, j~ matching f, Df at t = 0
(the time-dependent Maxwell system for n = 3, bivector f).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (
    AmbiguousBranchError,
    DimensionMismatchError,
    NotRegularError,
    OnBoundaryError,
    SingularPointError,
    UnsupportedDimensionError,
)
from .geometry import ComplexPoint, PointClass, classify_point, complex_distance
from .numerics import (
    DEFAULT_SPHERE_ORDERS,
    FDScheme,
    derivative,
    gauss_legendre,
    orthonormal_complement_frame,
    sphere_area,
    sphere_rule,
)

__all__ = [
    "CliffordAlgebra",
    "Multivector",
    "MultivectorField",
    "SpacetimeMultivectorField",
    "CliffordOptions",
    "Domain",
    "Ball",
    "Box",
    "Cl",
    "spacetime_algebra",
    "mv_mul",
    "dirac_apply",
    "dirac_field",
    "cauchy_kernel",
    "cauchy_kernel_field",
    "regular_point",
    "borel_pompeiu",
    "extended_borel_pompeiu",
    "dirac_tilde_apply",
    "maxwell_extend",
    "poly_field",
]


@lru_cache(maxsize=None)
def _sign_table(ngen: int) -> np.ndarray:
    """Geometric-product signs for blades of an algebra with ngen generators.

    sign[A, B] is the parity picked up reordering e_A e_B into e_{A xor B}
    with repeated generators contracted (square +1).
    """
    dim = 1 << ngen
    masks = np.arange(dim, dtype=np.uint64)
    swaps = np.zeros((dim, dim), dtype=np.int64)
    a = masks[:, None] >> np.uint64(1)
    b = masks[None, :]
    while a.any():
        swaps += np.bitwise_count(a & b).astype(np.int64)
        a = a >> np.uint64(1)
    return np.where(swaps % 2 == 0, 1, -1).astype(np.int8)


class CliffordAlgebra:
    """Complex Clifford algebra over an ordered tuple of generator labels."""

    _instances: dict[tuple[int, ...], "CliffordAlgebra"] = {}

    def __init__(self, labels: tuple[int, ...]):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels) or list(self.labels) != sorted(self.labels):
            raise ValueError("generator labels must be strictly increasing")
        self.ngen = len(self.labels)
        self.dim = 1 << self.ngen
        self._pos = {lab: i for i, lab in enumerate(self.labels)}

    @classmethod
    def get(cls, labels: Sequence[int]) -> "CliffordAlgebra":
        key = tuple(labels)
        if key not in cls._instances:
            cls._instances[key] = cls(key)
        return cls._instances[key]

    @property
    def signs(self) -> np.ndarray:
        return _sign_table(self.ngen)

    def mask_of(self, subset: Sequence[int]) -> int:
        mask = 0
        for lab in subset:
            mask |= 1 << self._pos[lab]
        return mask

    def labels_of(self, mask: int) -> tuple[int, ...]:
        return tuple(lab for i, lab in enumerate(self.labels) if mask >> i & 1)

    def zero(self) -> "Multivector":
        return Multivector(self, np.zeros(self.dim, dtype=complex))

    def scalar(self, c: complex) -> "Multivector":
        coeffs = np.zeros(self.dim, dtype=complex)
        coeffs[0] = c
        return Multivector(self, coeffs)

    def blade(self, subset: Sequence[int], c: complex = 1.0) -> "Multivector":
        coeffs = np.zeros(self.dim, dtype=complex)
        coeffs[self.mask_of(subset)] = c
        return Multivector(self, coeffs)

    def basis(self, label: int) -> "Multivector":
        return self.blade((label,))

    def vector(self, components: Sequence[complex],
               labels: Sequence[int] | None = None) -> "Multivector":
        labels = self.labels if labels is None else tuple(labels)
        coeffs = np.zeros(self.dim, dtype=complex)
        for lab, c in zip(labels, components):
            coeffs[self.mask_of((lab,))] = c
        return Multivector(self, coeffs)

    def __repr__(self) -> str:
        return f"Cl{self.labels}"


def Cl(n: int) -> CliffordAlgebra:
    """Cl_n with spatial generators e_1..e_n."""
    return CliffordAlgebra.get(tuple(range(1, n + 1)))


def spacetime_algebra(n: int) -> CliffordAlgebra:
    """Cl_{n+1} with generators e_0 (time slot) and e_1..e_n."""
    return CliffordAlgebra.get(tuple(range(0, n + 1)))


@dataclass(frozen=True)
class Multivector:
    """Element of a complex Clifford algebra as dense blade coefficients."""

    algebra: CliffordAlgebra
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.algebra.dim,):
            raise DimensionMismatchError(
                f"coefficient vector of length {c.shape} for dim {self.algebra.dim}"
            )
        object.__setattr__(self, "coeffs", c)

    def _check(self, other: "Multivector") -> None:
        if other.algebra is not self.algebra and other.algebra.labels != self.algebra.labels:
            raise DimensionMismatchError(
                f"mixed algebras {self.algebra} and {other.algebra}"
            )

    def __add__(self, other):
        if np.isscalar(other):
            return self + self.algebra.scalar(other)
        self._check(other)
        return Multivector(self.algebra, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        if np.isscalar(other):
            return self - self.algebra.scalar(other)
        self._check(other)
        return Multivector(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self):
        return Multivector(self.algebra, -self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return Multivector(self.algebra, self.coeffs * other)
        self._check(other)
        return mv_mul(self, other)

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.algebra, other * self.coeffs)
        return NotImplemented

    @property
    def scalar_part(self) -> complex:
        return complex(self.coeffs[0])

    def coeff(self, subset: Sequence[int]) -> complex:
        return complex(self.coeffs[self.algebra.mask_of(subset)])

    def grade(self, k: int) -> "Multivector":
        out = np.zeros_like(self.coeffs)
        for mask in range(self.algebra.dim):
            if bin(mask).count("1") == k:
                out[mask] = self.coeffs[mask]
        return Multivector(self.algebra, out)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def vector_components(self, labels: Sequence[int] | None = None) -> np.ndarray:
        labels = self.algebra.labels if labels is None else tuple(labels)
        return np.asarray([self.coeffs[self.algebra.mask_of((lab,))] for lab in labels])

    def __repr__(self) -> str:
        terms = []
        for mask in range(self.algebra.dim):
            c = self.coeffs[mask]
            if abs(c) > 1e-14:
                labs = "".join(str(l) for l in self.algebra.labels_of(mask))
                terms.append(f"({c:.6g})" + (f" e{labs}" if labs else ""))
        return " + ".join(terms) if terms else "0"


def mv_mul(u: Multivector, v: Multivector) -> Multivector:
    """Geometric product of two multivectors of the same algebra."""
    u._check(v)
    out = _batch_mul(u.algebra, u.coeffs[None, :], v.coeffs[None, :])[0]
    return Multivector(u.algebra, out)


def _batch_mul(alg: CliffordAlgebra, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Row-wise geometric product of coefficient batches (m, dim)."""
    signs = alg.signs
    dim = alg.dim
    out = np.zeros(np.broadcast_shapes(U.shape, V.shape), dtype=complex)
    masks = np.arange(dim)
    for a in range(dim):
        col = U[..., a]
        if not np.any(col):
            continue
        out[..., masks ^ a] += col[..., None] * V * signs[a, :]
    return out


def _blade_mul_batch(alg: CliffordAlgebra, mask: int, V: np.ndarray,
                     from_left: bool = True) -> np.ndarray:
    """Product of a single basis blade with a coefficient batch (m, dim)."""
    masks = np.arange(alg.dim)
    out = np.zeros_like(V)
    signs = alg.signs[mask, :] if from_left else alg.signs[:, mask]
    out[..., masks ^ mask] = V * signs
    return out


# ----------------------------------------------------------------------
# Polynomial tables: {exponent tuple -> coefficient}
# ----------------------------------------------------------------------

Poly = Mapping[tuple[int, ...], complex]


def _poly_eval(poly: Poly, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(pts.shape[0], dtype=complex)
    for alpha, c in poly.items():
        term = np.full(pts.shape[0], complex(c))
        for k, e in enumerate(alpha):
            if e:
                term = term * pts[:, k] ** e
        out += term
    return out


def _poly_diff(poly: Poly, axis: int) -> dict[tuple[int, ...], complex]:
    out: dict[tuple[int, ...], complex] = {}
    for alpha, c in poly.items():
        e = alpha[axis]
        if not e:
            continue
        beta = tuple(a - 1 if k == axis else a for k, a in enumerate(alpha))
        out[beta] = out.get(beta, 0.0) + c * e
    return out


@dataclass(frozen=True)
class MultivectorField:
    """Multivector-valued field on R^n.

    Carries a pointwise evaluator and, optionally, an exact polynomial
    table per blade mask enabling exact differentiation.  ``labels``
    maps coordinate axes to the vector generators used by the Dirac
    operator (defaults to the algebra's first n labels).
    """

    algebra: CliffordAlgebra
    n: int
    evaluator: Callable[[np.ndarray], np.ndarray] | None = None
    poly: Mapping[int, Poly] | None = None
    labels: tuple[int, ...] | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if self.evaluator is None and self.poly is None:
            raise ValueError("field needs an evaluator or a polynomial table")
        if self.labels is None:
            object.__setattr__(self, "labels", self.algebra.labels[: self.n])

    def batch(self, pts: np.ndarray) -> np.ndarray:
        """Blade coefficients at an (m, n) point array, shape (m, dim)."""
        pts = np.asarray(pts, dtype=float)
        if self.poly is not None:
            out = np.zeros((pts.shape[0], self.algebra.dim), dtype=complex)
            for mask, table in self.poly.items():
                out[:, mask] = _poly_eval(table, pts)
            return out
        return np.asarray(self.evaluator(pts))

    def value(self, x: np.ndarray) -> Multivector:
        x = np.asarray(x, dtype=float)
        return Multivector(self.algebra, self.batch(x[None, :])[0])


def poly_field(algebra: CliffordAlgebra, n: int,
               tables: Mapping[Sequence[int], Poly],
               labels: Sequence[int] | None = None) -> MultivectorField:
    """Polynomial multivector field from {blade labels: exponent table}."""
    by_mask = {algebra.mask_of(tuple(subset)): dict(tab) for subset, tab in tables.items()}
    return MultivectorField(algebra, n, poly=by_mask,
                            labels=None if labels is None else tuple(labels))


def dirac_field(f: MultivectorField, side: str = "left") -> MultivectorField:
    """Exact Dirac derivative of a polynomial field, again a polynomial field."""
    if f.poly is None:
        raise ValueError("dirac_field needs the exact polynomial representation")
    alg = f.algebra
    out: dict[int, dict[tuple[int, ...], complex]] = {}
    for axis, lab in enumerate(f.labels):
        emask = alg.mask_of((lab,))
        for mask, table in f.poly.items():
            dtab = _poly_diff(table, axis)
            if not dtab:
                continue
            sign = alg.signs[emask, mask] if side == "left" else alg.signs[mask, emask]
            target = emask ^ mask
            store = out.setdefault(target, {})
            for alpha, c in dtab.items():
                store[alpha] = store.get(alpha, 0.0) + sign * c
    return MultivectorField(alg, f.n, poly=out, labels=f.labels,
                            name=f"D[{f.name}]" if side == "left" else f"[{f.name}]D")


def dirac_apply(f: MultivectorField, x: Sequence[float] | np.ndarray,
                side: str = "left", mode: str = "exact_poly",
                scheme: FDScheme | None = None) -> Multivector:
    """Left- or right-acting Dirac operator at a point.

    ``exact_poly`` differentiates the polynomial table; ``fd`` uses
    central differences on the evaluator.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    x = np.asarray(x, dtype=float)
    if mode == "exact_poly":
        if f.poly is None:
            raise ValueError("field has no polynomial representation; use mode='fd'")
        return dirac_field(f, side).value(x)
    if mode != "fd":
        raise ValueError("mode must be 'exact_poly' or 'fd'")
    return Multivector(f.algebra, _dirac_batch(f, x[None, :], side, scheme)[0])


def _dirac_batch(f: MultivectorField, pts: np.ndarray, side: str = "left",
                 scheme: FDScheme | None = None) -> np.ndarray:
    """Dirac derivative coefficients at a batch of points."""
    alg = f.algebra
    if f.poly is not None:
        return dirac_field(f, side).batch(pts)
    scheme = scheme or FDScheme(h=1e-5, order=4, richardson=True)
    out = np.zeros((pts.shape[0], alg.dim), dtype=complex)
    for axis, lab in enumerate(f.labels):
        ek = np.zeros(f.n)
        ek[axis] = 1.0
        part = derivative(lambda d: f.batch(pts + d * ek), 0.0, scheme, 1)
        out += _blade_mul_batch(alg, alg.mask_of((lab,)), part, from_left=(side == "left"))
    return out


# ----------------------------------------------------------------------
# Cauchy kernel
# ----------------------------------------------------------------------

def cauchy_kernel(z: ComplexPoint | Sequence[float] | np.ndarray, n: int | None = None,
                  side: int | None = None) -> Multivector:
    """Vector-valued kernel C(z) = z / (omega_n gamma^n); C(x) = x / (omega_n r^n).

    Valid for all n >= 2 (for n = 2 with the logarithmic potential).
    Raises on the singular set: gamma = 0, or the branch disk for odd n
    without an approach side.
    """
    if isinstance(z, ComplexPoint):
        if n is None:
            n = z.n
        cls = classify_point(z.x, z.y)
        if cls is PointClass.ON_RIM:
            raise SingularPointError("Cauchy kernel is singular on the rim")
        if n % 2 == 1 and cls in (PointClass.ON_DISK_FRONT, PointClass.ON_DISK_BACK):
            if side is None:
                raise AmbiguousBranchError("disk point: pass side=+1 or -1")
        gamma = complex_distance(z, side=side if side is not None else 1).gamma
        if gamma == 0:
            raise SingularPointError("gamma = 0")
        comps = (z.x + 1j * z.y) / (sphere_area(n) * gamma**n)
    else:
        x = np.asarray(z, dtype=float)
        if n is None:
            n = x.shape[0]
        r = float(np.linalg.norm(x))
        if r == 0.0:
            raise SingularPointError("Cauchy kernel is singular at the origin")
        comps = x.astype(complex) / (sphere_area(n) * r**n)
    return Cl(n).vector(comps, labels=tuple(range(1, n + 1)))


def cauchy_kernel_field(x0: Sequence[float] | np.ndarray, n: int) -> MultivectorField:
    """Field x -> C(x - x0): left- and right-monogenic away from x0."""
    x0 = np.asarray(x0, dtype=float)
    alg = Cl(n)

    def ev(pts: np.ndarray) -> np.ndarray:
        return _kernel_batch_real(pts - x0, alg, n)

    return MultivectorField(alg, n, evaluator=ev, name=f"C(x - {x0.tolist()})")


def _kernel_batch_real(diffs: np.ndarray, alg: CliffordAlgebra, n: int) -> np.ndarray:
    r = np.linalg.norm(diffs, axis=1)
    out = np.zeros((diffs.shape[0], alg.dim), dtype=complex)
    scale = 1.0 / (sphere_area(n) * r**n)
    for k in range(n):
        out[:, alg.mask_of((k + 1,))] = diffs[:, k] * scale
    return out


def _kernel_batch_complex(diffs: np.ndarray, y: np.ndarray, alg: CliffordAlgebra,
                          n: int, gamma: np.ndarray | None = None) -> np.ndarray:
    """C((x' - x) - i y) for a batch of real offsets x' - x."""
    w = diffs.astype(complex) - 1j * y[None, :]
    if gamma is None:
        gamma = np.sqrt(np.sum(w * w, axis=1))  # principal root: Re >= 0
    out = np.zeros((diffs.shape[0], alg.dim), dtype=complex)
    scale = 1.0 / (sphere_area(n) * gamma**n)
    for k in range(n):
        out[:, alg.mask_of((k + 1,))] = w[:, k] * scale
    return out


# ----------------------------------------------------------------------
# Domains
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CliffordOptions:
    """Quadrature orders and FD steps for the integral formulas."""

    boundary_orders: tuple[int, ...] | None = None   # sphere rule on dM (ball)
    dirs_orders: tuple[int, ...] | None = None       # directions for interior volume
    radial_order: int = 16
    spheroid_q_order: int = 24
    phi_order: int = 48
    duffy_order: int = 16
    dirac_fd: FDScheme = FDScheme(h=1e-2, order=4, richardson=False)
    continuity_fd: FDScheme = FDScheme(h=3e-2, order=4, richardson=False)
    boundary_tol: float = 1e-9


_DEFAULT = CliffordOptions()


class Domain:
    """Bounded integration domain with piecewise smooth boundary."""

    n: int

    def boundary_quadrature(self):
        raise NotImplementedError

    def volume_quadrature(self):
        raise NotImplementedError

    def contains(self, x: np.ndarray, margin: float = 0.0) -> bool:
        raise NotImplementedError

    def signed_boundary_distance(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def ray_exit(self, origin: np.ndarray, dirs: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Ball(Domain):
    """Ball of given center and radius with analytic normals."""

    center: np.ndarray
    radius: float
    boundary_orders: tuple[int, ...] | None = None
    radial_order: int = 16

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")

    @property
    def n(self) -> int:
        return self.center.shape[0]

    def _sphere(self):
        return sphere_rule(self.n - 1, self.boundary_orders or DEFAULT_SPHERE_ORDERS[self.n - 1])

    def boundary_quadrature(self):
        rule = self._sphere()
        pts = self.center[None, :] + self.radius * rule.nodes
        area = sphere_area(self.n) * self.radius ** (self.n - 1)
        return pts, rule.nodes.copy(), rule.weights * area

    def volume_quadrature(self):
        rule = self._sphere()
        leg = gauss_legendre(self.radial_order)
        radii = 0.5 * self.radius * (leg.nodes + 1.0)
        wr = 0.5 * self.radius * leg.weights
        pts = (self.center[None, None, :]
               + radii[:, None, None] * rule.nodes[None, :, :]).reshape(-1, self.n)
        wts = (wr * radii ** (self.n - 1))[:, None] * rule.weights[None, :] * sphere_area(self.n)
        return pts, wts.reshape(-1)

    def contains(self, x: np.ndarray, margin: float = 0.0) -> bool:
        return float(np.linalg.norm(np.asarray(x) - self.center)) <= self.radius - margin

    def signed_boundary_distance(self, x: np.ndarray) -> float:
        return self.radius - float(np.linalg.norm(np.asarray(x) - self.center))

    def ray_exit(self, origin: np.ndarray, dirs: np.ndarray) -> np.ndarray:
        rel = np.asarray(origin, dtype=float) - self.center
        b = dirs @ rel
        c = float(rel @ rel) - self.radius**2
        disc = np.sqrt(np.clip(b**2 - c, 0.0, None))
        return -b + disc


@dataclass(frozen=True)
class Box(Domain):
    """Axis-aligned box [lo, hi] with face-product quadrature."""

    lo: np.ndarray
    hi: np.ndarray
    face_order: int = 16

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", np.asarray(self.lo, dtype=float))
        object.__setattr__(self, "hi", np.asarray(self.hi, dtype=float))
        if not np.all(self.hi > self.lo):
            raise ValueError("box needs hi > lo componentwise")

    @property
    def n(self) -> int:
        return self.lo.shape[0]

    def _axis_rule(self, axis: int):
        leg = gauss_legendre(self.face_order)
        mid = 0.5 * (self.lo[axis] + self.hi[axis])
        half = 0.5 * (self.hi[axis] - self.lo[axis])
        return mid + half * leg.nodes, half * leg.weights

    def boundary_quadrature(self):
        pts_all, nrm_all, wts_all = [], [], []
        n = self.n
        for axis in range(n):
            others = [k for k in range(n) if k != axis]
            grids = [self._axis_rule(k) for k in others]
            mesh = np.meshgrid(*[g[0] for g in grids], indexing="ij")
            wmesh = np.meshgrid(*[g[1] for g in grids], indexing="ij")
            coords = np.stack([m.ravel() for m in mesh], axis=1)
            wface = np.ones(coords.shape[0])
            for wm in wmesh:
                wface = wface * wm.ravel()
            for sign, val in ((-1.0, self.lo[axis]), (1.0, self.hi[axis])):
                pts = np.zeros((coords.shape[0], n))
                pts[:, others] = coords
                pts[:, axis] = val
                nrm = np.zeros_like(pts)
                nrm[:, axis] = sign
                pts_all.append(pts)
                nrm_all.append(nrm)
                wts_all.append(wface)
        return np.concatenate(pts_all), np.concatenate(nrm_all), np.concatenate(wts_all)

    def volume_quadrature(self):
        grids = [self._axis_rule(k) for k in range(self.n)]
        mesh = np.meshgrid(*[g[0] for g in grids], indexing="ij")
        wmesh = np.meshgrid(*[g[1] for g in grids], indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        wts = np.ones(pts.shape[0])
        for wm in wmesh:
            wts = wts * wm.ravel()
        return pts, wts

    def contains(self, x: np.ndarray, margin: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lo + margin) and np.all(x <= self.hi - margin))

    def signed_boundary_distance(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        if self.contains(x):
            return float(min(np.min(x - self.lo), np.min(self.hi - x)))
        gap = np.maximum(np.maximum(self.lo - x, 0.0), np.maximum(x - self.hi, 0.0))
        return -float(np.linalg.norm(gap))

    def ray_exit(self, origin: np.ndarray, dirs: np.ndarray) -> np.ndarray:
        origin = np.asarray(origin, dtype=float)
        with np.errstate(divide="ignore"):
            t_hi = np.where(dirs > 0, (self.hi[None, :] - origin) / dirs, np.inf)
            t_lo = np.where(dirs < 0, (self.lo[None, :] - origin) / dirs, np.inf)
        return np.min(np.minimum(t_hi, t_lo), axis=1)


# ----------------------------------------------------------------------
# Regularity and the Borel-Pompeiu formulas
# ----------------------------------------------------------------------

def regular_point(z: ComplexPoint, M: Domain, n: int | None = None,
                  tol: float = 1e-8) -> bool:
    """True iff z - x' stays off the singular set S_n for every boundary x'.

    The membership measure minimized over boundary quadrature nodes is
    p(z - x') for odd n (distance to the branch disk in the p
    coordinate) and |gamma(z - x')| for even n (distance to the null
    cone).  Because the minimum runs over discrete nodes, the effective
    tolerance is floored at the boundary mesh spacing (a point cannot be
    certified regular below the resolution of the rule), making the test
    conservative near the boundary.
    """
    if n is None:
        n = z.n
    pts, _, wts = M.boundary_quadrature()
    spacing = float(np.max(wts)) ** (1.0 / (n - 1))
    eff_tol = max(tol, spacing)
    # z - x' has real part x - x' and imaginary part y
    w = (z.x[None, :] - pts).astype(complex) + 1j * z.y[None, :]
    gam = np.sqrt(np.sum(w * w, axis=1))
    measure = gam.real if n % 2 == 1 else np.abs(gam)
    return bool(np.min(measure) > eff_tol)


def _triple_weighted_sum(alg: CliffordAlgebra, wts: np.ndarray, A: np.ndarray,
                         B: np.ndarray, C: np.ndarray | None = None) -> np.ndarray:
    prod = _batch_mul(alg, A, B)
    if C is not None:
        prod = _batch_mul(alg, prod, C)
    return (wts[:, None] * prod).sum(axis=0)


def _normals_batch(alg: CliffordAlgebra, normals: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((normals.shape[0], alg.dim), dtype=complex)
    for k in range(n):
        out[:, alg.mask_of((k + 1,))] = normals[:, k]
    return out


def borel_pompeiu(f: MultivectorField, M: Domain, x: Sequence[float] | np.ndarray,
                  options: CliffordOptions = _DEFAULT) -> Multivector:
    """Boundary-minus-volume representation of f at a real point x.

    Reproduces f(x) for x inside M and 0 outside.  The interior volume
    integral uses spherical coordinates about x, whose r^{n-1} measure
    cancels the r^{1-n} kernel growth exactly.
    """
    x = np.asarray(x, dtype=float)
    n = M.n
    alg = f.algebra
    sd = M.signed_boundary_distance(x)
    if abs(sd) <= options.boundary_tol:
        raise OnBoundaryError("x lies on the boundary (trace limits out of scope)")

    pts, normals, wts = M.boundary_quadrature()
    ck = _kernel_batch_real(pts - x[None, :], alg, n)
    nv = _normals_batch(alg, normals, n)
    fv = f.batch(pts)
    term_b = _triple_weighted_sum(alg, wts, ck, nv, fv)

    if sd > 0:
        dirs_rule = sphere_rule(n - 1, options.dirs_orders or DEFAULT_SPHERE_ORDERS[n - 1])
        dirs = dirs_rule.nodes
        t_exit = M.ray_exit(x, dirs)
        leg = gauss_legendre(options.radial_order)
        # radial nodes per direction on [0, t_exit]; kernel * r^{n-1} * omega_n = dir
        radii = 0.5 * t_exit[:, None] * (leg.nodes[None, :] + 1.0)
        wrad = 0.5 * t_exit[:, None] * leg.weights[None, :]
        p_all = (x[None, None, :] + radii[:, :, None] * dirs[:, None, :]).reshape(-1, n)
        dv = _dirac_batch(f, p_all, "left", options.dirac_fd)
        dir_mv = _normals_batch(alg, np.repeat(dirs, leg.nodes.size, axis=0), n)
        w_all = (dirs_rule.weights[:, None] * wrad).reshape(-1)
        term_v = _triple_weighted_sum(alg, w_all, dir_mv, dv)
    else:
        vpts, vwts = M.volume_quadrature()
        ckv = _kernel_batch_real(vpts - x[None, :], alg, n)
        dv = _dirac_batch(f, vpts, "left", options.dirac_fd)
        term_v = _triple_weighted_sum(alg, vwts, ckv, dv)

    return Multivector(alg, term_b - term_v)


def _disk_position(M: Domain, x: np.ndarray, y: np.ndarray) -> str:
    """Locate the branch disk x + E0(y) relative to M: 'inside'/'outside'."""
    a = float(np.linalg.norm(y))
    frame = orthonormal_complement_frame(y)
    angles = 2.0 * np.pi * np.arange(16) / 16
    ring = np.cos(angles)[:, None] * frame[:, 0][None, :] + \
        np.sin(angles)[:, None] * frame[:, 1][None, :]
    samples = [x]
    for rad in (0.5 * a, a):
        samples.extend(x + rad * ring)
    margin = 1e-12
    ins = [M.contains(s, margin) for s in samples]
    if all(ins):
        return "inside"
    if not any(M.contains(s, -margin) for s in samples):
        return "outside"
    raise NotRegularError("the branch disk straddles the boundary of M")


def extended_borel_pompeiu(f: MultivectorField, M: Domain, z: ComplexPoint,
                           options: CliffordOptions = _DEFAULT) -> Multivector:
    """Extension f~_M(z) by boundary-minus-volume quadrature with kernel C(x'-z).

    Real z reduces to the usual Borel-Pompeiu formula.  For complex z
    (n = 3) with the source disk inside M, the identity f~_M(z) =
    f~_{E_P}(z) over an inscribed spheroid E_P is used: its boundary
    integral is smooth, and its volume integral is evaluated in the
    oblate coordinates adapted to (x, -y), where gamma = p + iq exactly
    and a Duffy substitution removes the 1/|gamma| corner.
    """
    n = M.n
    if np.linalg.norm(z.y) == 0.0:
        return borel_pompeiu(f, M, z.x, options)
    if n != 3:
        raise UnsupportedDimensionError("complex-argument formula implemented for n = 3")
    if not regular_point(z, M, n):
        raise NotRegularError("z is not regular with respect to the boundary of M")
    alg = f.algebra
    x, y = z.x, z.y
    where = _disk_position(M, x, y)

    if where == "outside":
        # all integrands are smooth on M-bar: plain product quadrature
        pts, normals, wts = M.boundary_quadrature()
        ck = _kernel_batch_complex(pts - x[None, :], y, alg, n)
        nv = _normals_batch(alg, normals, n)
        term_b = _triple_weighted_sum(alg, wts, ck, nv, f.batch(pts))
        vpts, vwts = M.volume_quadrature()
        ckv = _kernel_batch_complex(vpts - x[None, :], y, alg, n)
        dv = _dirac_batch(f, vpts, "left", options.dirac_fd)
        term_v = _triple_weighted_sum(alg, vwts, ckv, dv)
        return Multivector(alg, term_b - term_v)

    # disk inside M: shrink the domain to an inscribed oblate spheroid E_P
    a = float(np.linalg.norm(y))
    s_max = M.signed_boundary_distance(x)
    semi = 0.8 * s_max
    if semi**2 <= (1.05 * a) ** 2:
        raise NotRegularError(
            "insufficient clearance between the branch disk and the boundary"
        )
    big_p = math.sqrt(semi**2 - a**2)
    yloc = -y
    yhat = yloc / a
    frame = orthonormal_complement_frame(yloc)
    phis = 2.0 * np.pi * np.arange(options.phi_order) / options.phi_order
    sig = (np.cos(phis)[:, None] * frame[:, 0][None, :]
           + np.sin(phis)[:, None] * frame[:, 1][None, :])
    wphi = 1.0 / options.phi_order

    def batch_terms(p_arr: np.ndarray, q_arr: np.ndarray, w_arr: np.ndarray,
                    boundary: bool) -> np.ndarray:
        """Assemble either surface or volume contributions over (p, q) nodes x phi."""
        total = np.zeros(alg.dim, dtype=complex)
        for p, q, w in zip(p_arr, q_arr, w_arr):
            rho = math.sqrt(max((a**2 + p**2) * (a**2 - q**2), 0.0)) / a
            zeta = p * q / a
            u = rho * sig + zeta * yhat[None, :]          # (phi, 3)
            pts = x[None, :] + u
            gamma = complex(p, q)
            wv = u.astype(complex) + 1j * yloc[None, :]   # (x' - x) - i y
            ck = np.zeros((pts.shape[0], alg.dim), dtype=complex)
            scale = 1.0 / (sphere_area(n) * gamma**n)
            for k_ax in range(n):
                ck[:, alg.mask_of((k_ax + 1,))] = wv[:, k_ax] * scale
            if boundary:
                normal = (p * u - q * y[None, :]) / math.sqrt(
                    (a**2 + p**2) * (p**2 + q**2)
                )
                nv = _normals_batch(alg, normal, n)
                fv = f.batch(pts)
                contrib = _batch_mul(alg, _batch_mul(alg, ck, nv), fv)
            else:
                dv = _dirac_batch(f, pts, "left", options.dirac_fd)
                contrib = _batch_mul(alg, ck, dv)
            total += w * wphi * contrib.sum(axis=0)
        return total

    # boundary of E_P: parametrized by (q, phi), area element
    # (sqrt(a^2+P^2)/a) sqrt(P^2+q^2) dq dphi_normalized * 2 pi
    leg = gauss_legendre(options.spheroid_q_order)
    q_nodes = a * leg.nodes
    q_wts = a * leg.weights
    area_fact = (2.0 * np.pi * math.sqrt(a**2 + big_p**2) / a
                 * np.sqrt(big_p**2 + q_nodes**2))
    term_b = batch_terms(np.full_like(q_nodes, big_p), q_nodes,
                         q_wts * area_fact, boundary=True)

    # volume of E_P in oblate coordinates, Duffy-transformed about (p, q) = 0
    duffy = gauss_legendre(options.duffy_order)
    t_nodes = 0.5 * (duffy.nodes + 1.0)
    t_wts = 0.5 * duffy.weights
    ps, qs, ws = [], [], []
    for sq in (1.0, -1.0):
        for tri in (1, 2):
            for uu, wu in zip(t_nodes, t_wts):
                for vv, wv_ in zip(t_nodes, t_wts):
                    if tri == 1:
                        p_val, q_val = big_p * uu, sq * a * uu * vv
                    else:
                        p_val, q_val = big_p * uu * vv, sq * a * uu
                    ps.append(p_val)
                    qs.append(q_val)
                    ws.append(wu * wv_ * big_p * a * uu)
    ps = np.asarray(ps)
    qs = np.asarray(qs)
    ws = np.asarray(ws)
    # volume measure (omega_2 / a)(p^2 + q^2) dp dq dsigma (n = 3)
    vol_fact = sphere_area(2) / a * (ps**2 + qs**2)
    term_v = batch_terms(ps, qs, ws * vol_fact, boundary=False)

    # Branch-cut layer of the kernel: the potential jumps across the disk
    # ([phi] = i / (2 pi sqrt(a^2 - rho'^2)) for n = 3), so the distributional
    # derivative C = D phi carries a single layer there and the volume pairing
    # gains i Int_0^a mean_phi[ yloc (Df) ](rho' = sqrt(a^2 - q0^2)) dq0.
    leg_d = gauss_legendre(options.spheroid_q_order)
    q0 = 0.5 * a * (leg_d.nodes + 1.0)
    wq0 = 0.5 * a * leg_d.weights
    yloc_mv = np.zeros((1, alg.dim), dtype=complex)
    for k_ax in range(n):
        yloc_mv[0, alg.mask_of((k_ax + 1,))] = yhat[k_ax]
    term_d = np.zeros(alg.dim, dtype=complex)
    for q0_i, w_i in zip(q0, wq0):
        rho_d = math.sqrt(max(a**2 - q0_i**2, 0.0))
        pts = x[None, :] + rho_d * sig
        dv = _dirac_batch(f, pts, "left", options.dirac_fd)
        prod = _batch_mul(alg, np.broadcast_to(yloc_mv, dv.shape), dv)
        term_d += 1j * w_i * wphi * prod.sum(axis=0)

    return Multivector(alg, term_b - term_v - term_d)


# ----------------------------------------------------------------------
# Hyperbolic Dirac / Maxwell extension
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SpacetimeMultivectorField:
    """Cl_{n+1}-valued field on Euclidean spacetime (columns x_1..x_n, s)."""

    algebra: CliffordAlgebra
    n: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    s_derivative: Callable[[np.ndarray], np.ndarray] | None = None
    smoothness: float = math.inf
    name: str = ""

    def batch(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(pts, dtype=float)))

    def value(self, x: np.ndarray, s: float) -> Multivector:
        pt = np.append(np.asarray(x, dtype=float), s)
        return Multivector(self.algebra, self.batch(pt[None, :])[0])


def _extend_mv_coeffs(f: SpacetimeMultivectorField, x: np.ndarray, s: float,
                      t: float, wave_options) -> np.ndarray:
    """Componentwise wave extension of all blade coefficients at (x, s + it)."""
    from .wave import WaveOptions

    wopt = wave_options or WaveOptions()
    if t == 0.0:
        return f.batch(np.append(x, s)[None, :])[0]
    rule = sphere_rule(f.n - 1, wopt.orders_for(f.n - 1))

    def mean_v(r: float) -> np.ndarray:
        pts = x[None, :] + abs(r) * rule.nodes
        cols = np.column_stack([pts, np.full(pts.shape[0], s)])
        return rule.weights @ f.batch(cols)

    if f.s_derivative is not None:
        def mean_w(r: float) -> np.ndarray:
            pts = x[None, :] + abs(r) * rule.nodes
            cols = np.column_stack([pts, np.full(pts.shape[0], s)])
            return 1j * (rule.weights @ np.asarray(f.s_derivative(cols)))
    else:
        def mean_w(r: float) -> np.ndarray:
            pts = x[None, :] + abs(r) * rule.nodes

            def slice_at(ss: float) -> np.ndarray:
                cols = np.column_stack([pts, np.full(pts.shape[0], ss)])
                return rule.weights @ f.batch(cols)

            return 1j * derivative(slice_at, s, wopt.s_fd, 1)

    upart = derivative(lambda r: r * mean_v(r), t, wopt.radial_fd, 1)
    return upart + t * mean_w(abs(t))


def dirac_tilde_apply(g: Callable[[np.ndarray, float], np.ndarray],
                      algebra: CliffordAlgebra, x: np.ndarray, t: float,
                      scheme: FDScheme, n: int = 3) -> np.ndarray:
    """Hyperbolic Dirac D~ = D - i e0 d_t applied by FD to coefficient-valued g(x, t)."""
    out = np.zeros(algebra.dim, dtype=complex)
    for axis in range(n):
        ek = np.zeros(n)
        ek[axis] = 1.0
        part = derivative(lambda d: g(x + d * ek, t), 0.0, scheme, 1)
        out += _blade_mul_batch(algebra, algebra.mask_of((axis + 1,)), part[None, :])[0]
    dt_part = derivative(lambda d: g(x, t + d), 0.0, scheme, 1)
    out += -1j * _blade_mul_batch(algebra, algebra.mask_of((0,)), dt_part[None, :])[0]
    return out


def maxwell_extend(f: SpacetimeMultivectorField, x: Sequence[float] | np.ndarray,
                   s: float, t: float, options: CliffordOptions = _DEFAULT,
                   wave_options=None) -> tuple[Multivector, Multivector, float]:
    """Extension f~, current j~ = D~ f~, and the continuity residual |scalar D~ j~|.

    n = 3 (the physical Maxwell case: f a bivector field, j a
    four-vector).  At t = 0 the pair (f~, j~) reduces to (f, Df + e0 f_s).
    """
    x = np.asarray(x, dtype=float)
    if f.n != 3:
        raise UnsupportedDimensionError("Maxwell extension is fixed at n = 3")
    alg = f.algebra

    def ftilde(xx: np.ndarray, tt: float) -> np.ndarray:
        return _extend_mv_coeffs(f, xx, s, tt, wave_options)

    f_val = ftilde(x, t)

    def jtilde(xx: np.ndarray, tt: float) -> np.ndarray:
        return dirac_tilde_apply(ftilde, alg, xx, tt, options.dirac_fd)

    j_val = jtilde(x, t)
    dj = dirac_tilde_apply(jtilde, alg, x, t, options.continuity_fd)
    residual = abs(dj[0])
    return Multivector(alg, f_val), Multivector(alg, j_val), float(residual)
