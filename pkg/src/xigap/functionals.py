"""Mollified-moment functionals h_1 and their ingredients.

Closed forms (main terms only, o(1) dropped):

* divisor / Moebius mollifier of level theta = 1/2::

      h1 = alpha + (2/pi) * N / D
      N  = int_0^1 int_0^x sin(alpha eta pi/2)/eta (1-x)^(r^2-1) K(eta) f(x) f(x-eta) deta dx
      D  = int_0^1 (1-x)^(r^2-1) f(x)^2 dx

  with K(eta) = exp(r eta) - r - 1 (divisor) or exp(-r eta) + r - 1 (Moebius).

* twisted prime mollifier::

      h1(alpha, c) = alpha + (4 U c + V c^2) / (pi (2 + U c^2))

The empirical h_k evaluates the defining ratio directly from a list of xi'
zeros and the Dirichlet polynomial M.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .arith import a_r_const, get_tables, primes_upto
from .errors import CapacityError, DegenerateError, DomainError
from .quadrature import gk_interval, gk_square, gk_triangle
from .zerofinder import ZeroList

MAX_DEGREE = 8
PRIME_SUM_CAP = 10**7
EMPIRICAL_Y_CAP = 10**5


@dataclass(frozen=True)
class PolyF:
    """f(x) = sum c_i x^i on [0, 1]."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if not c or len(c) - 1 > MAX_DEGREE:
            raise DomainError(f"polynomial degree must lie in [0, {MAX_DEGREE}]")
        if not any(c):
            raise DomainError("f must not vanish identically")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    def at_n(self, n, y: float):
        """f[n] = f(log(y/n) / log y)."""
        n = np.asarray(n, dtype=float)
        return self(np.log(y / n) / math.log(y))


def as_poly(f) -> PolyF:
    return f if isinstance(f, PolyF) else PolyF(tuple(f))


@dataclass(frozen=True)
class MollifierSpec:
    """Which Dirichlet polynomial M to use.

    ``kind`` is ``divisor`` or ``moebius`` (coefficients d_r or mu_r smoothed
    by ``f``) or ``prime_twisted`` (M1(s) + M1(1-s) with M1 supported on 1
    and the primes, f[p] = -c (1 - 2 log p/L) sin(pi alpha_f log p/L)).
    ``alpha_f`` fixes the alpha inside f[p]; None means "use the evaluation
    alpha".
    """

    kind: str
    theta: float = 0.5
    r: int | None = None
    f: PolyF | None = None
    c: float | None = None
    alpha_f: float | None = None

    def __post_init__(self):
        if self.kind not in ("divisor", "moebius", "prime_twisted"):
            raise DomainError(f"unknown mollifier kind {self.kind!r}")
        if not 0 < self.theta <= 0.5:
            raise DomainError("theta must lie in (0, 1/2]")
        if self.kind in ("divisor", "moebius"):
            if self.r is None or int(self.r) != self.r or self.r < 1:
                raise DomainError("divisor/moebius mollifiers need an integer r >= 1")
            if self.f is None:
                raise DomainError("divisor/moebius mollifiers need a polynomial f")
            object.__setattr__(self, "f", as_poly(self.f))
        elif self.c is None:
            raise DomainError("prime_twisted mollifier needs c")

    def y(self, T: float) -> float:
        return (T / (2 * math.pi)) ** self.theta

    def echo(self) -> dict:
        d = asdict(self)
        if self.f is not None:
            d["f"] = list(self.f.coeffs)
        return d


@dataclass
class FunctionalResult:
    alpha: float
    value: float
    terms: dict
    quad_error: float
    spec: dict = field(default_factory=dict)
    label: str = "main term"

    def to_json(self, path=None) -> str:
        text = json.dumps(asdict(self), indent=2)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


# -- closed form for divisor / Moebius mollifiers ----------------------------------


def _sin_over(alpha: float, eta):
    # sin(alpha eta pi/2)/eta with the eta -> 0 limit alpha pi/2
    return (alpha * math.pi / 2) * np.sinc(alpha * np.asarray(eta) / 2)


def _kernel(kind: str, r: int, eta):
    if kind == "divisor":
        return np.expm1(r * eta) - r
    if kind == "moebius":
        return np.expm1(-r * eta) + r
    raise DomainError(f"kind must be 'divisor' or 'moebius', got {kind!r}")


def _check_theorem1(alpha, r, kind, tol):
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if r not in (1, 2, 3):
        raise DomainError("r must be 1, 2 or 3")
    if kind not in ("divisor", "moebius"):
        raise DomainError(f"kind must be 'divisor' or 'moebius', got {kind!r}")
    if tol > 1e-8:
        raise DomainError("tol must be <= 1e-8")


def h1_theorem1(alpha: float, r: int, f, kind: str, tol: float = 1e-10) -> FunctionalResult:
    """Main term of h_1(alpha, M) for M built from d_r or mu_r and the polynomial f."""
    _check_theorem1(alpha, r, kind, tol)
    f = as_poly(f)
    p = r * r - 1
    den = gk_interval(lambda x: (1 - x) ** p * f(x) ** 2, 0.0, 1.0, tol * 1e-2)
    if den.value <= 0:
        raise DomainError("denominator vanishes (f identically zero)")
    num_tol = tol * den.value * math.pi / 4

    def integrand(x, eta):
        return _sin_over(alpha, eta) * (1 - x) ** p * _kernel(kind, r, eta) * f(x) * f(x - eta)

    num = gk_triangle(integrand, num_tol)
    ratio = num.value / den.value
    err = (2 / math.pi) * (num.error / den.value + abs(num.value) * den.error / den.value**2)
    correction = (2 / math.pi) * ratio
    return FunctionalResult(
        alpha=float(alpha),
        value=float(alpha + correction),
        terms={"numerator": float(num.value), "denominator": float(den.value), "correction": float(correction)},
        quad_error=float(err),
        spec={"kind": kind, "r": r, "f": list(f.coeffs), "theta": 0.5},
    )


class RayleighForm(NamedTuple):
    """h1(c) = alpha + (2/pi) c^T A c / c^T B c for coefficient vectors c."""

    alpha: float
    A: np.ndarray
    B: np.ndarray
    error: float

    def h1(self, c) -> float:
        c = np.asarray(c, dtype=float)
        return self.alpha + (2 / math.pi) * float(c @ self.A @ c) / float(c @ self.B @ c)


def h1_theorem1_form(alpha: float, r: int, degree: int, kind: str, tol: float = 1e-11) -> RayleighForm:
    """Numerator and denominator of h1_theorem1 as quadratic forms in the coefficients."""
    _check_theorem1(alpha, r, kind, 1e-8)
    if not 0 <= degree <= MAX_DEGREE:
        raise DomainError(f"degree must lie in [0, {MAX_DEGREE}]")
    p = r * r - 1
    powers = np.arange(degree + 1)

    def num_integrand(x, eta):
        base = _sin_over(alpha, eta) * (1 - x) ** p * _kernel(kind, r, eta)
        xi = np.asarray(x)[..., None] ** powers
        xe = np.asarray(x - eta)[..., None] ** powers
        return base[..., None, None] * xi[..., :, None] * xe[..., None, :]

    num = gk_triangle(num_integrand, tol)
    i = powers[:, None] + powers[None, :]
    # exact Beta integrals: int_0^1 (1-x)^p x^k dx = k! p! / (k+p+1)!
    B = np.vectorize(lambda k: math.factorial(k) * math.factorial(p) / math.factorial(k + p + 1))(i).astype(float)
    A = 0.5 * (num.value + num.value.T)
    return RayleighForm(float(alpha), A, B, float(num.error))


# -- twisted prime mollifier -------------------------------------------------------


class UVResult(NamedTuple):
    U: float
    V: float
    error: float


def _U_integrand(alpha):
    a = math.pi * alpha / 2
    return lambda u: (1 - u) ** 2 * np.sin(a * u) * _sin_over(alpha, u)


def _V_integrand(alpha):
    a = math.pi * alpha / 2
    return lambda u, v: (1 - u) * (1 - v) * np.sin(a * u) * np.sin(a * v) * np.sin(a * (u + v))


def UV(alpha: float, tol: float = 1e-12, swap: bool = False) -> UVResult:
    """The kernel integrals U(alpha) and V(alpha)."""
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    u = gk_interval(_U_integrand(alpha), 0.0, 1.0, tol)
    v = gk_square(_V_integrand(alpha), tol, swap=swap)
    return UVResult(float(u.value), float(v.value), max(u.error, v.error))


def stationary_points(U: float, V: float) -> tuple[float, float]:
    """Roots of U^2 c^2 - V c - 2U = 0, the critical points of (4Uc + Vc^2)/(2 + Uc^2)."""
    if U <= 0:
        raise DegenerateError("U must be positive (alpha = 0 gives U = 0)")
    root = math.sqrt(V * V + 8 * U**3)
    return (V - root) / (2 * U * U), (V + root) / (2 * U * U)


def c_opt(alpha: float, tol: float = 1e-12) -> tuple[float, float]:
    """(c_minus, c_plus) for the given alpha."""
    uv = UV(alpha, tol)
    return stationary_points(uv.U, uv.V)


def theorem2_correction(U: float, V: float, c: float) -> tuple[float, float]:
    """The two correction terms (4Uc, Vc^2) / (pi (2 + U c^2))."""
    den = math.pi * (2 + U * c * c)
    return 4 * U * c / den, V * c * c / den


def h1_theorem2(alpha: float, c: float, tol: float = 1e-12) -> FunctionalResult:
    """Main term of h_1(alpha, c) for the twisted prime mollifier."""
    uv = UV(alpha, tol)
    g1, g2 = theorem2_correction(uv.U, uv.V, c)
    # first-order propagation of the U, V quadrature errors
    q = 2 + uv.U * c * c
    dU = (4 * c * q - (4 * uv.U * c + uv.V * c * c) * c * c) / (math.pi * q * q)
    dV = c * c / (math.pi * q)
    err = uv.error * (abs(dU) + abs(dV))
    return FunctionalResult(
        alpha=float(alpha),
        value=float(alpha + g1 + g2),
        terms={"U": uv.U, "V": uv.V, "c": float(c), "g1": g1, "g2": g2},
        quad_error=float(err),
        spec={"kind": "prime_twisted", "c": float(c), "theta": 0.5},
    )


def prime_f(p, alpha: float, c: float, L: float):
    """f[p] = -c (1 - 2 log p / L) sin(pi alpha log p / L)."""
    lp = np.log(np.asarray(p, dtype=float))
    return -c * (1 - 2 * lp / L) * np.sin(math.pi * alpha * lp / L)


def g_sums(alpha: float, c: float, y: float) -> tuple[float, float]:
    """Finite prime sums g1, g2 with L = 2 log y (theta = 1/2)."""
    if y > PRIME_SUM_CAP:
        raise CapacityError(f"y = {y} exceeds the prime-sum cap {PRIME_SUM_CAP}")
    if y < 2:
        raise DomainError("y must be >= 2")
    p = primes_upto(int(y)).astype(float)
    L = 2 * math.log(y)
    lp = np.log(p)
    fp = prime_f(p, alpha, c, L)
    den = 2 + math.fsum((fp * fp / p).tolist())
    s = np.sin(math.pi * alpha * lp / L)
    g1 = -(4 / math.pi) * math.fsum(((1 - 2 * lp / L) * s * fp / p).tolist()) / den
    # sin(a + b) = sin a cos b + cos a sin b separates the double sum over (p, q)
    w = lp * fp / (L * p)
    cs = np.cos(math.pi * alpha * lp / L)
    S = math.fsum((w * s).tolist())
    C = math.fsum((w * cs).tolist())
    g2 = (4 / math.pi) * (2 * S * C) / den
    return g1, g2


# -- moments -----------------------------------------------------------------------


def moment2(spec: MollifierSpec, T: float, alpha: float | None = None) -> float:
    """Asymptotic main term of int_T^{2T} |M(1/2 + it)|^2 dt."""
    if T < 100:
        raise DomainError("T must be >= 100")
    y = spec.y(T)
    if spec.kind == "divisor":
        r2 = spec.r * spec.r
        f = spec.f
        integral = gk_interval(lambda x: (1 - x) ** (r2 - 1) * f(x) ** 2, 0.0, 1.0, 1e-13).value
        return a_r_const(spec.r).value * T * math.log(y) ** r2 / math.gamma(r2) * integral
    if spec.kind == "prime_twisted":
        L = math.log(T / (2 * math.pi))
        p = primes_upto(int(y)).astype(float)
        a = _f_alpha(spec, alpha)
        fp = prime_f(p, a, spec.c, L)
        return T * (4 + 2 * math.fsum((fp * fp / p).tolist()))
    raise DomainError("no second-moment main term is available for the moebius mollifier")


def moment2_diagonal(spec: MollifierSpec, T: float) -> float:
    """Diagonal sum T * sum_{n <= y} a(n)^2 f[n]^2 / n (mean-value-theorem form)."""
    n, b = mollifier_coefficients(spec, T)
    return T * math.fsum((b * b / n).tolist())


def _f_alpha(spec: MollifierSpec, alpha):
    a = spec.alpha_f if spec.alpha_f is not None else alpha
    if a is None and spec.c != 0:
        raise DomainError("prime_twisted f[p] needs alpha (spec.alpha_f or the alpha argument)")
    return 0.0 if a is None else a


def mollifier_coefficients(spec: MollifierSpec, T: float, alpha: float | None = None):
    """(n, b_n) with M1(s) = sum b_n n^-s; for prime_twisted M = M1(s) + M1(1-s)."""
    y = spec.y(T)
    if spec.kind in ("divisor", "moebius"):
        ny = int(math.floor(y))
        if ny < 1:
            raise DomainError("y < 1 gives an empty mollifier")
        tables = get_tables(max(ny, 2))
        n = np.arange(1, ny + 1, dtype=float)
        a = tables.coeff_array(spec.r, spec.kind, ny)[1:]
        return n, a * spec.f.at_n(n, y)
    L = math.log(T / (2 * math.pi))
    p = primes_upto(int(y)).astype(float)
    fp = prime_f(p, _f_alpha(spec, alpha), spec.c, L)
    return np.concatenate([[1.0], p]), np.concatenate([[1.0], fp])


def mollifier_values(spec: MollifierSpec, T: float, t, alpha: float | None = None) -> np.ndarray:
    """M(1/2 + it) for an array of t."""
    n, b = mollifier_coefficients(spec, T, alpha)
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    w = b / np.sqrt(n)
    logn = np.log(n)
    out = np.empty(flat.shape, dtype=complex)
    step = max(1, 2_000_000 // len(n))
    for lo in range(0, flat.size, step):
        out[lo : lo + step] = np.exp(-1j * np.outer(flat[lo : lo + step], logn)) @ w
    if spec.kind == "prime_twisted":
        # b real: M1(1/2 - it) = conj(M1(1/2 + it))
        out = 2 * out.real + 0j
    return out.reshape(t.shape)


def _simpson(values: np.ndarray, h: float) -> float:
    n = len(values) - 1
    if n % 2:
        raise DomainError("Simpson rule needs an even number of intervals")
    return h / 3 * (values[0] + values[-1] + 4 * values[1:-1:2].sum() + 2 * values[2:-1:2].sum())


def empirical_moment(spec: MollifierSpec, T: float, k: int = 1, alpha: float | None = None,
                     step: float = 0.01) -> float:
    """int_T^{2T} |M(1/2 + it)|^{2k} dt by Simpson's rule on a grid of the given step."""
    n = int(math.ceil(T / step))
    n += n % 2
    t = np.linspace(T, 2 * T, n + 1)
    vals = np.abs(mollifier_values(spec, T, t, alpha)) ** (2 * k)
    return float(_simpson(vals, T / n))


GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def empirical_h(zeros: ZeroList, spec: MollifierSpec, alpha: float, k: int, T: float,
                step: float = 0.01) -> float:
    """The defining ratio of h_k(alpha, M) evaluated at finite T.

    Numerator: a 64-point Gauss-Legendre panel over |t| <= pi alpha / L at each
    xi' zero in (T, 2T].  Denominator: Simpson's rule with the given step.
    """
    if zeros.kind != "xi_prime":
        raise DomainError("empirical_h needs xi' zeros")
    if k not in (1, 2):
        raise DomainError("k must be 1 or 2")
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if 2 * T > 5000:
        raise CapacityError("2T must be <= 5000")
    t0, t1 = zeros.window
    if t0 > T or t1 < 2 * T:
        raise DomainError(f"zero window {zeros.window} does not cover ({T}, {2 * T}]")
    if spec.y(T) > EMPIRICAL_Y_CAP:
        raise CapacityError(f"y = {spec.y(T):.3g} exceeds {EMPIRICAL_Y_CAP} for direct summation")
    if alpha == 0:
        return 0.0
    L = math.log(T / (2 * math.pi))
    half = math.pi * alpha / L
    g = np.asarray(zeros.ordinates)
    g = g[(g > T) & (g <= 2 * T)]
    pts = g[:, None] + half * GL_NODES[None, :]
    m = np.abs(mollifier_values(spec, T, pts, alpha)) ** (2 * k)
    per_zero = half * (m @ GL_WEIGHTS)
    num = float(np.sum(per_zero))
    den = empirical_moment(spec, T, k, alpha, step)
    return num / den


# -- positive-proportion plumbing ---------------------------------------------------


def large_gap_bound(h1: float, moment2_value: float, sum_delta_sq: float, moment4_value: float,
                    L: float) -> float:
    """Right side of the large-gap count inequality (needs h1 < 1)."""
    if h1 >= 1:
        raise DomainError("the large-gap bound needs h1 < 1")
    return (1 - h1) ** 4 * moment2_value**4 / (4 * math.pi**2 * sum_delta_sq * moment4_value**2) * L**2


def small_gap_bound(h1: float, h2: float, moment2_value: float, moment4_value: float, mu: float,
                    L: float) -> float:
    """Right side of the small-gap count inequality (needs h1 > 1)."""
    if h1 <= 1:
        raise DomainError("the small-gap bound needs h1 > 1")
    return (h1 - 1) ** 2 * moment2_value**2 / (2 * math.pi * mu * h2 * moment4_value) * L
