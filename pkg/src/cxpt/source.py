"""Extended point-source distributions as numerically evaluated functionals.

The holomorphic potential phi(z) has source delta~(z) = Lap phi(z), a
generalized function of x for each fixed axis y.  With a = |y| and the
sphere means

    fbar(rho, zeta) = mean of f over the (n-2)-sphere of radius rho
                      centered at zeta y_hat in the hyperplane y-perp,

its action takes closed quadrature-ready forms:

* n = 3 (rim + single layer + double layer):
      <delta~, f> = L0 + L1 + i L2,
      L0 = fbar(a, 0),
      L1 = -a Int_0^a (fbar(rho(q), 0) - fbar(a, 0)) / q^2 dq,
      L2 = -Int_0^a fbar_zeta(rho(q), 0) dq,        rho(q) = sqrt(a^2 - q^2).
* even n = 2k+2 in {4, 6}:
      <delta~, f> = (a sqrt(pi) / Gamma(k+1/2)) D_rho^k F(rho) |_{rho=a},
      D_rho = d/d(rho^2),
      F(rho) = rho^{2k-1} [fbar(rho,0) + i (a^2-rho^2)/(2ka) fbar_zeta(rho,0)].
* odd n = 2k+3 in {3, 5} (Taylor-subtracted principal-value form):
      <delta~, f> = V_n(f) + (2 (-1)^k / A_n) Sum_{l=0}^k a^{2l-2k} T_{2l} / (2k-2l+1),
      V_n(f) = (2 i^{1-n} a / A_n) Int_0^a (F(iq) - Sum_m T_m q^m) / q^{n-1} dq,
      T_{2m} = ((-1)^m / m!) D_rho^m F(rho) |_{rho=a},   A_n = omega_n / omega_{n-1}.
* regularized (support on the spheroid p = eps):
      I_eps = ((a^2+eps^2)^{nu+1} / (a^{n-2} A_n))
              Int_{-a}^{a} F#(eps+iq) / (eps+iq)^{n-1} dq,    nu = (n-3)/2,
      F#(gamma) = (a^2-q^2)^nu [f#bar(gamma) + gamma f#bar_p(gamma)/(n-2)].

The monopole is Q = 1, the dipole P = -iy, and the centroid of a source
at z_S is z_S itself; as a -> 0 every action contracts to f(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    InsufficientSmoothnessError,
    InvalidIndexError,
    UnsupportedDimensionError,
    WindowTooSmallError,
)
from .fields import TestField, constant, polynomial
from .numerics import (
    DEFAULT_SPHERE_ORDERS,
    FDScheme,
    derivative,
    gauss_legendre,
    integrate_interval,
    orthonormal_complement_frame,
    sphere_area,
    sphere_rule,
)

__all__ = [
    "SourceOptions",
    "SourceAction",
    "lambda_coeff",
    "regularized_action",
    "singular_action_r3",
    "singular_action_r4",
    "singular_action_even",
    "singular_action_odd",
    "singular_action",
    "moments",
    "centroid",
    "descent_check",
]


@dataclass(frozen=True)
class SourceOptions:
    """Quadrature orders and FD steps used by the source functionals."""

    q_order: int = 32            # Gauss-Legendre order of the q-integrals
    panel_order: int = 16        # per-panel order for the regularized action
    zeta_step: float = 1e-3      # FD step for fbar_zeta / fbar_rho, relative to a
    u_step: float = 0.04         # FD step in u = rho^2, relative to a^2
    p_step: float = 1e-2         # FD step in p (regularized action), relative to a
    series_cut: float = 1e-3     # q below cut*a switches to the series integrand
    sphere_orders: Mapping[int, tuple[int, ...]] | None = None

    def orders_for(self, dim: int) -> tuple[int, ...]:
        if self.sphere_orders and dim in self.sphere_orders:
            return tuple(self.sphere_orders[dim])
        return DEFAULT_SPHERE_ORDERS[dim]


_DEFAULT = SourceOptions()


@dataclass(frozen=True)
class SourceAction:
    """Value of <delta~, f> with the n=3 rim/layer decomposition when available."""

    value: complex
    parts: dict[str, complex] | None
    err_estimate: float


def _omega_ratio(n: int) -> float:
    """A_n = omega_n / omega_{n-1}."""
    return sphere_area(n) / sphere_area(n - 1)


def lambda_coeff(k: int, m: int, a: float) -> float:
    """Limit lambda^m_k(0) of the regularization coefficients = lambda_{k-m}.

    lambda_1 = pi, lambda_{2l} = 2 (-1)^{l+1} / ((2l-1) a^{2l-1}), and
    lambda_{2l+1} = 0 for l >= 1.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if m < 0 or k < 1 or m >= k:
        raise InvalidIndexError(f"need 0 <= m < k with k >= 1, got k={k}, m={m}")
    j = k - m
    if j == 1:
        return math.pi
    if j % 2 == 0:
        l = j // 2
        return 2.0 * (-1.0) ** (l + 1) / ((2 * l - 1) * a ** (2 * l - 1))
    return 0.0


def _require_smoothness(f: TestField, needed: float, op: str) -> None:
    if getattr(f, "smoothness", math.inf) < needed:
        raise InsufficientSmoothnessError(
            f"{op} needs a C^{needed} field, got smoothness {f.smoothness}"
        )


class _AxialField:
    """Sphere means of a test field relative to a fixed axis y != 0.

    Provides fbar(rho, zeta) over the (n-2)-sphere in y-perp, its FD
    derivatives, and the functions F(rho) / F#(gamma) entering the
    source formulas.
    """

    def __init__(self, f: TestField, y: np.ndarray, n: int,
                 options: SourceOptions = _DEFAULT) -> None:
        self.f = f
        self.y = np.asarray(y, dtype=float)
        self.n = n
        self.a = float(np.linalg.norm(self.y))
        if self.a == 0.0:
            raise ValueError("axis vector y must be nonzero here")
        self.options = options
        self.yhat = self.y / self.a
        frame = orthonormal_complement_frame(self.y)
        rule = sphere_rule(n - 2, options.orders_for(n - 2))
        self._dirs = rule.nodes @ frame.T      # (m, n) unit vectors in y-perp
        self._weights = rule.weights
        self._zeta_scheme = FDScheme(h=options.zeta_step * self.a, order=4, richardson=True)
        self._u_scheme = FDScheme(h=options.u_step * self.a**2, order=4, richardson=True)

    # -- means in cylindrical coordinates ---------------------------------
    def mean(self, rho: float, zeta: float) -> complex:
        pts = zeta * self.yhat[None, :] + rho * self._dirs
        return complex(np.dot(self._weights, self.f.evaluate(pts)))

    def mean_dzeta(self, rho: float, zeta: float = 0.0) -> complex:
        return derivative(lambda z: self.mean(rho, z), zeta, self._zeta_scheme, 1)

    def mean_drho(self, rho: float, zeta: float = 0.0) -> complex:
        # means are even in rho, so a central stencil may cross rho = 0
        return derivative(lambda r: self.mean(r, zeta), rho, self._zeta_scheme, 1)

    # -- means in oblate coordinates ---------------------------------------
    def rho_zeta(self, p: float, q: float) -> tuple[float, float]:
        a = self.a
        rho = math.sqrt(max((a**2 + p**2) * (a**2 - q**2), 0.0)) / a
        return rho, p * q / a

    def mean_pq(self, p: float, q: float) -> complex:
        return self.mean(*self.rho_zeta(p, q))

    def mean_pq_dp(self, p: float, q: float) -> complex:
        """d/dp of the mean at fixed q; needs p > 0 (central stencil stays p > 0)."""
        if p <= 0:
            raise ValueError("mean_pq_dp needs p > 0; use the cylindrical identity at p = 0")
        h = min(self.options.p_step * self.a, p / 4.0)
        scheme = FDScheme(h=h, order=4, richardson=False)
        return derivative(lambda pp: self.mean_pq(pp, q), p, scheme, 1)

    # -- the cylindrical F and helpers -------------------------------------
    def Ghat(self, u: float) -> complex:
        """fbar(sqrt(u), 0) as a function of u = rho^2."""
        return self.mean(math.sqrt(u), 0.0)

    def Fhat(self, u: float) -> complex:
        """F(rho)|_{rho = sqrt(u)} = rho^{n-3} [fbar + i (a^2-u)/((n-2) a) fbar_zeta]."""
        a, n = self.a, self.n
        rho = math.sqrt(u)
        rho_pow = u ** ((n - 3) / 2.0) if n != 3 else 1.0
        val = self.mean(rho, 0.0) + 1j * (a**2 - u) / ((n - 2) * a) * self.mean_dzeta(rho, 0.0)
        return rho_pow * val

    def u_derivative(self, fun, order_of_derivative: int) -> complex:
        return derivative(fun, self.a**2, self._u_scheme, order_of_derivative)


def singular_action_r3(f: TestField, y: Sequence[float] | np.ndarray,
                       options: SourceOptions = _DEFAULT) -> SourceAction:
    """Action of the extended source in R^3: rim + single layer + i double layer."""
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(y) == 0.0:
        v = f.evaluate(np.zeros(3))
        return SourceAction(v, {"rim": v, "single_layer": 0j, "double_layer": 0j}, 0.0)
    _require_smoothness(f, 1, "singular_action_r3")
    af = _AxialField(f, y, 3, options)
    a = af.a
    l0 = af.mean(a, 0.0)

    # single layer: -a Int_0^a (fbar(rho(q),0) - fbar(a,0)) / q^2 dq, even integrand
    cut = options.series_cut * a
    series = None

    def l1_integrand(q: float) -> complex:
        nonlocal series
        if q < cut:
            if series is None:
                d1 = af.u_derivative(af.Ghat, 1)
                d2 = af.u_derivative(af.Ghat, 2)
                d3 = af.u_derivative(af.Ghat, 3)
                series = (-d1, d2 / 2.0, -d3 / 6.0)
            c0, c1, c2 = series
            return c0 + c1 * q**2 + c2 * q**4
        return (af.Ghat(a**2 - q**2) - l0) / q**2

    int1 = integrate_interval(l1_integrand, 0.0, a, order=options.q_order)
    l1 = -a * int1.value

    # double layer: -Int_0^a fbar_zeta(rho(q), 0) dq, smooth
    int2 = integrate_interval(
        lambda q: af.mean_dzeta(math.sqrt(max(a**2 - q**2, 0.0)), 0.0),
        0.0, a, order=options.q_order,
    )
    l2 = -int2.value

    err = a * int1.error + int2.error + 1e-15 * (abs(l0) + abs(l1) + abs(l2))
    value = l0 + l1 + 1j * l2
    return SourceAction(value, {"rim": l0, "single_layer": l1, "double_layer": 1j * l2}, err)


def singular_action_r4(f: TestField, y: Sequence[float] | np.ndarray,
                       options: SourceOptions = _DEFAULT) -> complex:
    """Action in R^4: fbar(a,0) + a fbar_rho(a,0) - i a fbar_zeta(a,0)."""
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(y) == 0.0:
        return f.evaluate(np.zeros(4))
    _require_smoothness(f, 1, "singular_action_r4")
    af = _AxialField(f, y, 4, options)
    a = af.a
    return af.mean(a, 0.0) + a * af.mean_drho(a, 0.0) - 1j * a * af.mean_dzeta(a, 0.0)


def singular_action_even(f: TestField, y: Sequence[float] | np.ndarray, n: int,
                         options: SourceOptions = _DEFAULT) -> complex:
    """Action for even n = 2k+2 in {4, 6}: (a sqrt(pi)/Gamma(k+1/2)) D_rho^k F |_{rho=a}."""
    if n % 2 != 0 or not 4 <= n <= 6:
        raise UnsupportedDimensionError(f"even-n action supports n in {{4, 6}}, got {n}")
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(y) == 0.0:
        return f.evaluate(np.zeros(n))
    k = (n - 2) // 2
    _require_smoothness(f, k, "singular_action_even")
    af = _AxialField(f, y, n, options)
    dk = af.u_derivative(af.Fhat, k)
    return af.a * math.sqrt(math.pi) / math.gamma(k + 0.5) * dk


def singular_action_odd(f: TestField, y: Sequence[float] | np.ndarray, n: int,
                        options: SourceOptions = _DEFAULT) -> complex:
    """Action for odd n = 2k+3 in {3, 5}: V_n plus the rim Taylor block."""
    if n % 2 != 1 or not 3 <= n <= 5:
        raise UnsupportedDimensionError(f"odd-n action supports n in {{3, 5}}, got {n}")
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(y) == 0.0:
        return f.evaluate(np.zeros(n))
    _require_smoothness(f, n - 2, "singular_action_odd")
    k = (n - 3) // 2
    af = _AxialField(f, y, n, options)
    a = af.a
    ratio = _omega_ratio(n)

    # T_{2m} = ((-1)^m / m!) d^m/du^m Fhat at u = a^2
    t2 = [af.Fhat(a**2) if m == 0 else
          (-1.0) ** m / math.factorial(m) * af.u_derivative(af.Fhat, m)
          for m in range(k + 1)]

    cut = options.series_cut * a
    series = None

    def v_integrand(q: float) -> complex:
        nonlocal series
        if q < cut:
            if series is None:
                cs = []
                for j in (1, 2):
                    m = k + j
                    cs.append((-1.0) ** m / math.factorial(m) * af.u_derivative(af.Fhat, m))
                series = tuple(cs)
            return series[0] + series[1] * q**2
        taylor = sum(t2[m] * q ** (2 * m) for m in range(k + 1))
        return (af.Fhat(a**2 - q**2) - taylor) / q ** (n - 1)

    integral = integrate_interval(v_integrand, 0.0, a, order=options.q_order)
    i_power = (1j) ** ((1 - n) % 4)
    v_n = 2.0 * i_power * a / ratio * integral.value

    tail = 2.0 * (-1.0) ** k / ratio * sum(
        a ** (2 * l - 2 * k) * t2[l] / (2 * k - 2 * l + 1) for l in range(k + 1)
    )
    return v_n + tail


def singular_action(f: TestField, y: Sequence[float] | np.ndarray, n: int | None = None,
                    options: SourceOptions = _DEFAULT) -> complex:
    """Dispatch <delta~, f> to the dimension-specific evaluator (n in 3..6)."""
    y = np.asarray(y, dtype=float)
    if n is None:
        n = y.shape[0]
    if y.shape[0] != n:
        raise ValueError(f"axis vector has dimension {y.shape[0]}, expected {n}")
    if np.linalg.norm(y) == 0.0:
        return f.evaluate(np.zeros(n))
    if n == 3:
        return singular_action_r3(f, y, options).value
    if n == 4:
        return singular_action_r4(f, y, options)
    if n == 5:
        return singular_action_odd(f, y, 5, options)
    if n == 6:
        return singular_action_even(f, y, 6, options)
    raise UnsupportedDimensionError(f"singular action supports n in 3..6, got {n}")


def regularized_action(f: TestField, y: Sequence[float] | np.ndarray, n: int,
                       eps: float, options: SourceOptions = _DEFAULT) -> complex:
    """Action I_eps of the regularized source supported on the spheroid p = eps.

    The q-integral is evaluated with q = a sin(theta) (absorbing the
    (a^2-q^2)^nu endpoint weight) on dyadically refined panels toward
    theta = 0, where the kernel (eps + iq)^{1-n} peaks.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not 3 <= n <= 6:
        raise UnsupportedDimensionError(f"regularized action supports n in 3..6, got {n}")
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(y) == 0.0:
        raise ValueError("regularized action needs y != 0")
    _require_smoothness(f, n - 2, "regularized_action")
    af = _AxialField(f, y, n, options)
    a = af.a
    nu = (n - 3) / 2.0

    def integrand(theta: float) -> complex:
        q = a * math.sin(theta)
        gamma = complex(eps, q)
        fs = af.mean_pq(eps, q)
        fsp = af.mean_pq_dp(eps, q)
        return (a * math.cos(theta)) ** (n - 2) * (fs + gamma * fsp / (n - 2)) / gamma ** (n - 1)

    half = math.pi / 2.0
    first = min(max(eps / a, 1e-6), half)
    breaks = [0.0, first]
    while breaks[-1] < half:
        breaks.append(min(half, 2.0 * breaks[-1]))
    total = 0.0 + 0.0j
    rule = gauss_legendre(options.panel_order)
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        for sign in (1.0, -1.0):
            seg_lo, seg_hi = (lo, hi) if sign > 0 else (-hi, -lo)
            total += integrate_interval(integrand, seg_lo, seg_hi, rule=rule).value
    prefactor = (a**2 + eps**2) ** (nu + 1.0) / (a ** (n - 2) * _omega_ratio(n))
    return prefactor * total


def moments(n: int, y: Sequence[float] | np.ndarray,
            options: SourceOptions = _DEFAULT) -> tuple[complex, np.ndarray]:
    """Monopole Q and dipole vector P of the source with axis y."""
    y = np.asarray(y, dtype=float)
    q_val = singular_action(constant(1.0), y, n, options)
    p_vec = np.asarray(
        [singular_action(_coordinate_field(n, j), y, n, options) for j in range(n)]
    )
    return q_val, p_vec


def _coordinate_field(n: int, j: int) -> TestField:
    alpha = tuple(1 if i == j else 0 for i in range(n))
    return polynomial(n, {alpha: 1.0})


def centroid(z_s, options: SourceOptions = _DEFAULT) -> np.ndarray:
    """Centroid of a source placed at complex position z_S in C^3; equals z_S.

    Evaluated by translating the coordinate test fields: the component j
    is the action of u -> u_j + x_S,j on the source with axis -y_S.
    """
    x_s = np.asarray(z_s.x, dtype=float)
    y_s = np.asarray(z_s.y, dtype=float)
    if x_s.shape[0] != 3:
        raise UnsupportedDimensionError("centroid is computed for n = 3")
    out = np.zeros(3, dtype=complex)
    zero = (0, 0, 0)
    for j in range(3):
        alpha = tuple(1 if i == j else 0 for i in range(3))
        table = {alpha: 1.0}
        if x_s[j] != 0.0:
            table[zero] = complex(x_s[j])
        out[j] = singular_action(polynomial(3, table), -y_s, 3, options)
    return out


def descent_check(f: TestField, y: Sequence[float] | np.ndarray,
                  n: int = 3, window: float | None = None,
                  options: SourceOptions = _DEFAULT) -> tuple[complex, complex]:
    """Both sides of the descent identity <delta~_n, f> = <delta~_{n+1}, f x 1>.

    The right side lifts f to R^{n+1} as f(x) on the slab |s| <= window
    (the 4-D source support lives in |s| <= a, so any window covering it
    with finite-difference margin is exact).
    """
    if n != 3:
        raise UnsupportedDimensionError("descent check is implemented for n = 3")
    y = np.asarray(y, dtype=float)
    a = float(np.linalg.norm(y))
    if a == 0.0:
        raise ValueError("descent check needs y != 0")
    w = 2.0 * a if window is None else float(window)
    margin = 1.05 * a
    if w < margin:
        raise WindowTooSmallError(
            f"window {w} does not cover the source support |s| <= {a} with FD margin"
        )

    def lifted_eval(pts: np.ndarray) -> np.ndarray:
        vals = f.evaluate(pts[:, :3])
        return np.where(np.abs(pts[:, 3]) <= w, vals, 0.0)

    lifted = TestField(evaluator=lifted_eval, smoothness=f.smoothness,
                       name=f"lift[{f.name}]")
    lhs = singular_action_r3(f, y, options).value
    rhs = singular_action_r4(lifted, np.append(y, 0.0), options)
    return lhs, rhs
