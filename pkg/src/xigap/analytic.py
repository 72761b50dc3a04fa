"""Special functions on and near the critical line.

zeta and its first two derivatives come from one Euler-Maclaurin pass; the
completed function is handled in log form and rescaled by exp(pi t / 4) so
that it stays within double range up to the height cap.

On the critical line Xi(t) = xi(1/2 + it) is real and

    Xi'(t) = Xi(t) * g(t),    g(t) = -Im[(L + zeta'/zeta)(1/2 + it)],

so zeros of Xi' between consecutive zeros of Xi are the sign changes of g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .arith import ArithTables, get_tables
from .errors import CapacityError, ConditioningError, DomainError, PoleProximityError, PrecisionError

HEIGHT_CAP = 5000.0
POLE_RADIUS = 1e-6
LOG_PI = math.log(math.pi)

_KMAX = 40
_B = special.bernoulli(2 * _KMAX)
# B_{2k} / (2k)!, k = 1.._KMAX
_BF = np.array([_B[2 * k] / math.factorial(2 * k) for k in range(1, _KMAX + 1)])
_CHUNK = 2_000_000


def _as_complex(s):
    arr = np.asarray(s, dtype=complex)
    return arr, arr.ndim == 0


def _em_cutoff(abs_s: np.ndarray) -> np.ndarray:
    # ratio of consecutive correction terms ~ |s + 2k|^2 / (2 pi N)^2 <= 1/4
    n = np.ceil((abs_s + 2 * _KMAX) / math.pi).astype(np.int64)
    return ((n + 31) // 32) * 32


def _zeta_group(s: np.ndarray, N: int, max_order: int, tol: float) -> list[np.ndarray]:
    logn = np.log(np.arange(1, N, dtype=float))
    out = [np.zeros(s.shape, dtype=complex) for _ in range(max_order + 1)]
    step = max(1, _CHUNK // max(N, 1))
    for lo in range(0, s.size, step):
        ss = s[lo : lo + step]
        e = np.exp(-np.outer(ss, logn))
        for j in range(max_order + 1):
            out[j][lo : lo + step] = e @ ((-logn) ** j)

    l = math.log(N)
    eN = np.exp(-s * l)
    sm1 = s - 1.0
    for j in range(max_order + 1):
        # d^j/ds^j of N^{1-s}/(s-1) and of N^{-s}/2
        integ = sum(
            math.comb(j, i) * (-l) ** (j - i) * (-1) ** i * math.factorial(i) / sm1 ** (i + 1)
            for i in range(j + 1)
        )
        out[j] += N * eN * integ + 0.5 * eN * (-l) ** j

    # Q = P_k(s) N^{1-2k} and its s-derivatives, P_k = prod_{i=0}^{2k-2} (s + i)
    Q = [s / N, np.ones_like(s) / N, np.zeros_like(s)]
    converged = np.zeros(s.shape, dtype=bool)
    quiet = 0
    for k in range(1, _KMAX + 1):
        biggest = 0.0
        for j in range(max_order + 1):
            comb_q = sum(math.comb(j, i) * Q[i] * (-l) ** (j - i) for i in range(j + 1))
            term = _BF[k - 1] * eN * comb_q
            out[j] += term
            scale = np.maximum(1.0, np.abs(out[j]))
            biggest = max(biggest, float(np.max(np.abs(term) / scale)))
        if biggest < tol:
            quiet += 1
            if quiet >= 2:
                converged[:] = True
                break
        else:
            quiet = 0
        for a in (2 * k - 1, 2 * k):
            Q = [Q[0] * (s + a), Q[1] * (s + a) + Q[0], Q[2] * (s + a) + 2 * Q[1]]
        Q = [q / (N * N) for q in Q]
    if not converged.all():
        raise PrecisionError(f"Euler-Maclaurin did not reach tol={tol} with N={N}")
    return out


def roundoff_floor(s) -> float:
    """Attainable relative accuracy: phase error of n^-s grows like |t| log N."""
    a = np.abs(np.asarray(s, dtype=complex))
    t = float(np.max(np.abs(np.asarray(s, dtype=complex).imag), initial=0.0))
    n = float(np.max(_em_cutoff(a), initial=32))
    return 1e-16 * max(t, 1.0) * math.log(n)


def zeta_derivs(s, max_order: int = 0, tol: float | None = None) -> list:
    """[zeta(s), zeta'(s), ...] up to ``max_order`` (<= 2), vectorized over s.

    ``tol`` bounds the truncation error relative to max(1, |value|); the
    default is the roundoff floor at the requested height (never below 1e-13).
    """
    if max_order not in (0, 1, 2):
        raise DomainError("order must be 0, 1 or 2")
    arr, scalar = _as_complex(s)
    flat = arr.ravel()
    if np.any(flat == 1.0):
        raise DomainError("zeta has a pole at s = 1")
    if np.any(np.abs(flat.imag) > HEIGHT_CAP):
        raise CapacityError(f"|Im s| above the height cap {HEIGHT_CAP}")
    floor = roundoff_floor(flat) if flat.size else 1e-16
    if tol is None:
        tol = max(1e-13, floor)
    elif tol < 1e-14 or tol < floor:
        raise PrecisionError(f"tol={tol:.1e} is below the double-precision floor {floor:.1e} at this height")
    out = [np.empty(flat.shape, dtype=complex) for _ in range(max_order + 1)]
    cut = _em_cutoff(np.abs(flat))
    for N in np.unique(cut):
        idx = np.flatnonzero(cut == N)
        vals = _zeta_group(flat[idx], int(N), max_order, tol)
        for j in range(max_order + 1):
            out[j][idx] = vals[j]
    res = [o.reshape(arr.shape) for o in out]
    return [complex(r) for r in res] if scalar else res


def zeta_em(s, order: int = 0, tol: float | None = None):
    """zeta(s), zeta'(s) or zeta''(s) by Euler-Maclaurin summation."""
    return zeta_derivs(s, order, tol)[order]


# -- gamma-function pieces ----------------------------------------------------------


def loggamma(z):
    """Principal-branch log Gamma for complex arguments (scipy, reflection built in)."""
    return special.loggamma(np.asarray(z, dtype=complex))


def digamma(z):
    return special.psi(np.asarray(z, dtype=complex))


def trigamma(z):
    """psi'(z) for complex z: upward recurrence to |z| >= 15, then Stirling tail."""
    z = np.array(z, dtype=complex)
    acc = np.zeros_like(z)
    for _ in range(64):
        small = np.abs(z) < 15
        if not small.any():
            break
        acc = np.where(small, acc + 1.0 / (z * z), acc)
        z = np.where(small, z + 1.0, z)
    inv = 1.0 / z
    inv2 = inv * inv
    tail = np.zeros_like(z)
    for k in range(10, 0, -1):
        tail = tail * inv2 + _B[2 * k]
    series = inv + 0.5 * inv2 + inv * inv2 * tail
    return acc + series


def _check_L_domain(s: np.ndarray) -> None:
    flat = s.ravel()
    bad = (flat == 0) | (flat == 1)
    real_axis = flat.imag == 0
    half = flat.real / 2
    bad |= real_axis & (half <= 0) & (half == np.round(half))
    if bad.any():
        raise DomainError("L(s) has poles at s = 1 and s = 0, -2, -4, ...")


def L_func(s, order: int = 0):
    """L(s) = 1/s + 1/(s-1) - log(pi)/2 + psi(s/2)/2, or its derivative."""
    arr, scalar = _as_complex(s)
    _check_L_domain(arr)
    if order == 0:
        out = 1 / arr + 1 / (arr - 1) - LOG_PI / 2 + 0.5 * digamma(arr / 2)
    elif order == 1:
        out = -1 / arr**2 - 1 / (arr - 1) ** 2 + 0.25 * trigamma(arr / 2)
    else:
        raise DomainError("order must be 0 or 1")
    return complex(out) if scalar else out


def log_xi(s):
    """log xi(s) assembled from its four factors (principal logs)."""
    arr, scalar = _as_complex(s)
    out = np.log(arr * (arr - 1) / 2) - arr / 2 * LOG_PI + loggamma(arr / 2) + np.log(zeta_em(arr))
    return complex(out) if scalar else out


# -- critical line ------------------------------------------------------------------


@dataclass(frozen=True)
class XiValue:
    t: float
    scaled_value: float
    log_magnitude: float
    sign: int
    residual: float


def _xi_prefactor(t: np.ndarray) -> np.ndarray:
    # s(s-1)/2 pi^{-s/2} Gamma(s/2) exp(pi t/4) at s = 1/2 + it
    s = 0.5 + 1j * t
    logpre = np.log((t * t + 0.25) / 2) + 1j * math.pi - s / 2 * LOG_PI + loggamma(s / 2) + math.pi * t / 4
    return np.exp(logpre)


def xi_scaled_values(t) -> tuple[np.ndarray, np.ndarray]:
    """Scaled Xi(t) exp(pi t/4) and the realness residual, vectorized.

    The residual is |Im| measured in units of the prefactor times max(|zeta|, 1):
    an absolute error near zeros, a relative one elsewhere.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > HEIGHT_CAP):
        raise CapacityError(f"t must lie in [0, {HEIGHT_CAP}]")
    pre = _xi_prefactor(t)
    z = zeta_em(0.5 + 1j * t)
    v = pre * z
    resid = np.abs(v.imag) / (np.abs(pre) * np.maximum(np.abs(z), 1.0))
    return v.real, resid


def xi_scaled(t: float) -> XiValue:
    val, resid = xi_scaled_values(np.array([t]))
    v, r = float(val[0]), float(resid[0])
    if r > 1e-6:
        raise PrecisionError(f"Xi realness residual {r:.2e} at t={t}")
    logmag = math.log(abs(v)) if v != 0 else -math.inf
    return XiValue(float(t), v, logmag, int(np.sign(v)), r)


def g_values(t) -> tuple[np.ndarray, np.ndarray]:
    """g(t) and the Newton distance |zeta/zeta'| to the nearest zeta zero."""
    t = np.asarray(t, dtype=float)
    s = 0.5 + 1j * t
    z0, z1 = zeta_derivs(s, 1)
    g = -(L_func(s) + z1 / z0).imag
    with np.errstate(divide="ignore"):
        dist = np.abs(z0 / z1)
    return g, dist


def g_detector(t: float, eps: float = POLE_RADIUS) -> float:
    """Sign-change detector for zeros of Xi' (a real number)."""
    g, dist = g_values(np.array([t]))
    if dist[0] < eps:
        raise PoleProximityError(f"t={t} is within {eps} of a zeta zero")
    return float(g[0])


def xi_log_derivs(s):
    """(xi'/xi)(s) and its derivative."""
    arr, scalar = _as_complex(s)
    z0, z1, z2 = zeta_derivs(arr, 2)
    ld = L_func(arr) + z1 / z0
    ldd = L_func(arr, 1) + (z2 * z0 - z1 * z1) / (z0 * z0)
    if scalar:
        return complex(ld), complex(ldd)
    return ld, ldd


def xi2_over_xi1(s):
    """xi''/xi' = xi'/xi + (xi'/xi)' / (xi'/xi)."""
    arr, scalar = _as_complex(s)
    ld, ldd = xi_log_derivs(arr)
    ld, ldd = np.asarray(ld), np.asarray(ldd)
    if np.any(np.abs(ld) < 1e-6 * np.maximum(1.0, np.abs(ldd))):
        raise ConditioningError("s is within 1e-6 of a zero of xi'")
    out = ld + ldd / ld
    return complex(out) if scalar else out


def aK_rhs(s: complex, N: int = 10**4, K: int = 10, T: float | None = None,
           tables: ArithTables | None = None) -> complex:
    """L/2 + sum_{n <= N} a_K(n, s) / n^s, with a_K(n, s) = sum_k alpha_k(n) / L(s)^k.

    ``T`` fixes L = log(T / 2 pi); it defaults to |Im s|.
    """
    s = complex(s)
    if K < 0 or K > 30:
        raise DomainError("K must lie in [0, 30]")
    if s.real <= 0.5:
        raise DomainError("aK_rhs needs Re s > 1/2")
    T = abs(s.imag) if T is None else float(T)
    L = math.log(T / (2 * math.pi))
    tables = tables or get_tables(N)
    Ls = L_func(s)
    n = np.arange(1, N + 1)
    coef = np.zeros(N, dtype=complex)
    for k in range(K + 1):
        coef += tables.alpha_array(k, N)[1:] / Ls**k
    return L / 2 + complex(np.sum(coef * np.exp(-s * np.log(n))))
