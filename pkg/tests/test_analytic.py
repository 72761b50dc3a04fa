import math

import mpmath
import numpy as np
import pytest

from xigap import analytic
from xigap.analytic import (L_func, aK_rhs, g_detector, g_values, log_xi, xi2_over_xi1, xi_log_derivs, xi_scaled,
                            zeta_derivs, zeta_em)
from xigap.errors import CapacityError, DomainError, PoleProximityError, PrecisionError

mpmath.mp.dps = 30
FIRST_ZERO = 14.134725141734693
SECOND_ZERO = 21.022039638771555


def mp_zeta(s, order=0):
    return complex(mpmath.zeta(mpmath.mpc(s.real, s.imag), 1, order))


def test_zeta_examples():
    assert zeta_em(2) == pytest.approx(math.pi**2 / 6, abs=1e-14)
    # direct series with an integral tail as an independent oracle
    n = np.arange(1, 10**5 + 1, dtype=float)
    direct = math.fsum((1 / n**2).tolist()) + 1 / 10**5 - 0.5 / 10**10
    assert zeta_em(2) == pytest.approx(direct, abs=1e-13)
    assert zeta_em(0) == pytest.approx(-0.5, abs=1e-14)
    assert abs(zeta_em(0.5 + 14.134725j)) < 1e-5


@pytest.mark.parametrize("order", [0, 1, 2])
def test_zeta_against_mpmath(order):
    rng = np.random.default_rng(7)
    pts = [complex(rng.uniform(-1, 3), rng.uniform(0, 1000)) for _ in range(25)]
    pts += [complex(0.5, t) for t in (14.0, 100.0, 999.5)]
    for s in pts:
        ref = mp_zeta(s, order)
        got = zeta_em(s, order)
        assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref)), s


def test_zeta_vectorized_matches_scalar():
    s = 0.5 + 1j * np.linspace(10, 400, 37)
    vec = zeta_derivs(s, 2)
    for j in (0, 1, 17, 36):
        sc = zeta_derivs(complex(s[j]), 2)
        for a, b in zip(vec, sc):
            assert a[j] == pytest.approx(b, rel=1e-13, abs=1e-13)


def test_zeta_doubling_truncation_point():
    for t in (50.0, 500.0, 2000.0):
        s = np.array([0.5 + 1j * t])
        N = int(analytic._em_cutoff(np.abs(s))[0])
        tol = analytic.roundoff_floor(s) * 10
        a = analytic._zeta_group(s, N, 0, tol)[0][0]
        b = analytic._zeta_group(s, 2 * N, 0, tol)[0][0]
        assert abs(a - b) < max(tol, 1e-13) * max(1, abs(a)) * 10


def test_zeta_errors():
    with pytest.raises(DomainError):
        zeta_em(1.0)
    with pytest.raises(CapacityError):
        zeta_em(0.5 + 5001j)
    with pytest.raises(PrecisionError):
        zeta_em(0.5 + 100j, tol=1e-15)
    with pytest.raises(PrecisionError):
        # roundoff alone exceeds 1e-13 at this height
        zeta_em(0.5 + 4900j, tol=1e-13)


def test_trigamma_against_mpmath():
    for z in (0.25, 0.3 + 7j, 2 + 60j, 0.5 + 1000j, -0.7 + 0.2j):
        assert analytic.trigamma(z) == pytest.approx(complex(mpmath.psi(1, z)), rel=1e-13)


def test_L_examples():
    psi_quarter = -0.5772156649015329 - math.pi / 2 - 3 * math.log(2)
    expected = -math.log(math.pi) / 2 + 0.5 * psi_quarter
    assert L_func(0.5).real == pytest.approx(expected, abs=1e-13)
    assert L_func(0.5).real == pytest.approx(-2.6860917, abs=1e-7)
    T = 1000.0
    Lc = math.log(T / (2 * math.pi))
    s = complex(1 + 1 / Lc, T)
    err = abs(L_func(s) - 0.5 * np.log(s / (2 * math.pi)))
    assert err < 10 / (abs(s) + 2)


def test_L_prime_decays():
    rng = np.random.default_rng(3)
    for _ in range(20):
        T = rng.uniform(100, 2000)
        s = complex(1 + 1 / math.log(T / (2 * math.pi)), T)
        assert abs(L_func(s, 1)) * (abs(s) + 2) < 2


def test_L_prime_matches_finite_difference():
    for s in (1.3 + 40j, 0.5 + 200j, 2.0 + 3j):
        h = 1e-5
        fd = (L_func(s + h) - L_func(s - h)) / (2 * h)
        assert L_func(s, 1) == pytest.approx(fd, abs=1e-8)


def test_L_asymptotic_bounded():
    worst = 0.0
    for T in np.linspace(100, 2000, 40):
        Lc = math.log(T / (2 * math.pi))
        s = complex(1 + 1 / Lc, T)
        worst = max(worst, abs(L_func(s) - 0.5 * np.log(s / (2 * math.pi))) * (abs(s) + 2))
    assert worst < 5


def test_L_poles():
    for s in (0, 1, -2, -4):
        with pytest.raises(DomainError):
            L_func(s)


def test_xi_scaled_signs():
    # xi(1/2) = -(1/8) pi^{-1/4} Gamma(1/4) zeta(1/2) > 0
    direct = -(1 / 8) * math.pi**-0.25 * math.gamma(0.25) * float(mpmath.zeta(0.5))
    v = xi_scaled(0.0)
    assert v.sign == 1
    assert v.scaled_value == pytest.approx(direct, rel=1e-13)
    assert xi_scaled(14.0).sign != xi_scaled(14.2).sign


def test_xi_scaled_against_mpmath():
    for t in (30.0, 123.4, 777.7):
        s = mpmath.mpc(0.5, t)
        ref = s * (s - 1) / 2 * mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s) * mpmath.exp(mpmath.pi * t / 4)
        v = xi_scaled(t)
        assert v.scaled_value == pytest.approx(float(ref.real), rel=1e-9, abs=1e-12)
        assert v.sign == int(np.sign(v.scaled_value))
        assert v.log_magnitude == pytest.approx(math.log(abs(v.scaled_value)))


def test_xi_realness_residual():
    rng = np.random.default_rng(11)
    for t in rng.uniform(10, 1000, 50):
        assert xi_scaled(t).residual < 1e-8


def test_xi_scaled_range():
    assert math.isfinite(xi_scaled(5000.0).scaled_value)
    with pytest.raises(CapacityError):
        xi_scaled(5000.5)


def test_functional_equation_residual():
    rng = np.random.default_rng(5)
    for _ in range(50):
        s = complex(rng.uniform(0.05, 0.95), rng.uniform(10, 500))
        d = log_xi(s) - log_xi(1 - s)
        # equal up to a multiple of 2 pi i in the log
        resid = abs(complex(math.cos(d.imag), math.sin(d.imag)) * math.exp(d.real) - 1)
        assert resid < 1e-8


def test_g_single_sign_change_between_first_zeros():
    t = np.linspace(FIRST_ZERO + 1e-4, SECOND_ZERO - 1e-4, 4001)
    g, _ = g_values(t)
    assert np.count_nonzero(np.diff(np.sign(g)) != 0) == 1


def test_g_flips_across_zeta_zero():
    assert np.sign(g_detector(FIRST_ZERO - 1e-3)) != np.sign(g_detector(FIRST_ZERO + 1e-3))
    with pytest.raises(PoleProximityError):
        g_detector(FIRST_ZERO)


def test_g_agrees_with_finite_difference_of_xi():
    rng = np.random.default_rng(13)
    checked = 0
    for t in rng.uniform(20, 500, 80):
        g, dist = g_values(np.array([t]))
        if dist[0] < 1e-3:
            continue
        h = 1e-5
        plus, minus, mid = (xi_scaled(x).scaled_value for x in (t + h, t - h, t))
        # d/dt of Xi e^{pi t/4} = (Xi' + pi/4 Xi) e^{pi t/4}
        xi_prime_scaled = (plus - minus) / (2 * h) - math.pi / 4 * mid
        analytic_val = mid * g[0]
        if abs(analytic_val) < 1e-6 * abs(mid) * 10:
            continue
        assert np.sign(xi_prime_scaled) == np.sign(analytic_val), t
        checked += 1
        if checked == 50:
            break
    assert checked == 50


def test_xi2_over_xi1_near_L_over_2():
    t = 150.0
    Lc = math.log(t / (2 * math.pi))
    v = xi2_over_xi1(complex(1 + 1 / Lc, t))
    assert math.isfinite(abs(v))
    assert abs(v - Lc / 2) <= 5 * Lc


def test_xi2_over_xi1_antisymmetry():
    rng = np.random.default_rng(17)
    for _ in range(20):
        s = complex(rng.uniform(0.6, 1.6), rng.uniform(20, 500))
        a = xi2_over_xi1(s)
        b = xi2_over_xi1(1 - s.conjugate())
        assert abs(b + a.conjugate()) < 1e-8 * max(1, abs(a))


def test_log_derivative_matches_finite_difference():
    rng = np.random.default_rng(19)
    for _ in range(10):
        s = complex(rng.uniform(0.7, 2.0), rng.uniform(20, 300))
        h = 1e-5
        fd = (xi_log_derivs(s + h)[0] - xi_log_derivs(s - h)[0]) / (2 * h)
        assert abs(xi_log_derivs(s)[1] - fd) < 1e-6


def test_aK_rhs_structure(tables):
    s = complex(1.3, 150.0)
    Lc = math.log(150.0 / (2 * math.pi))
    # n = 1 contributes nothing for any K
    for K in (0, 3, 10):
        assert aK_rhs(s, N=1, K=K, tables=tables) == pytest.approx(Lc / 2, abs=1e-15)
    lam = tables.von_mangoldt(500)[1:]
    n = np.arange(1, 501)
    direct = Lc / 2 - np.sum(lam * np.exp(-s * np.log(n)))
    assert aK_rhs(s, N=500, K=0, tables=tables) == pytest.approx(complex(direct), abs=1e-12)
    with pytest.raises(DomainError):
        aK_rhs(complex(0.4, 150.0), tables=tables)
    with pytest.raises(DomainError):
        aK_rhs(s, K=31, tables=tables)


def test_lemma4_residual_bounded(tables):
    T = 100.0
    Lc = math.log(T / (2 * math.pi))
    for t in (120.0, 150.0, 180.0):
        s = complex(1 + 1 / Lc, t)
        assert abs(xi2_over_xi1(s) - aK_rhs(s, N=10**4, K=10, T=T, tables=tables)) <= 5
