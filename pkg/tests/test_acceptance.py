"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are also
collected into the "acceptance criteria" section of the terminal summary.
"""

import math
import sys
import time

import numpy as np

from xigap import analytic, arith
from xigap.functionals import (MollifierSpec, PolyF, UV, c_opt, empirical_h, g_sums, h1_theorem1, h1_theorem2,
                               theorem2_correction)
from xigap.optimize import optimize_theorem1, optimize_theorem2
from xigap.zerofinder import ZeroList, count_main_term, distribution, interlacing_violations, normalized_gaps, scan_zeros


def record(log, number, title, checks):
    """checks: list of (label, ok, detail).  Logs one line, then asserts."""
    ok = all(c[1] for c in checks)
    failed = [f"{c[0]} ({c[2]})" for c in checks if not c[1]]
    detail = "; ".join(f"{c[0]}: {c[2]}" for c in checks) if ok else "failed: " + "; ".join(failed)
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} [{title}] {detail}"
    log.append(line)
    print(line)
    assert ok, line


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def test_criterion_1_reference_values(acceptance_log):
    checks = []
    res, dt = timed(h1_theorem1, 1.5, 2, PolyF((1, 7, -1.5)), "divisor")
    checks.append(("divisor h1(1.5)", abs(res.value - 0.9998) <= 5e-5 and dt < 5, f"{res.value:.7f} in {dt:.2f}s"))
    res, dt = timed(h1_theorem1, 0.7203, 2, PolyF((1, 4.4, 2.3)), "moebius")
    checks.append(("moebius h1(0.7203)", abs(res.value - 1.000002) <= 1.5e-6 and dt < 5, f"{res.value:.7f} in {dt:.2f}s"))

    def prime(alpha, branch):
        return h1_theorem2(alpha, c_opt(alpha)[branch])

    res, dt = timed(prime, 1.18, 0)
    checks.append(("prime h1(1.18, c-)", abs(res.value - 0.9995) <= 1e-4 and dt < 5, f"{res.value:.7f} in {dt:.2f}s"))
    res, dt = timed(prime, 0.796, 1)
    checks.append(("prime h1(0.796, c+)", abs(res.value - 1.00006) <= 2e-5 and dt < 5, f"{res.value:.7f} in {dt:.2f}s"))
    record(acceptance_log, 1, "reference values", checks)


def test_criterion_2_theorem_bounds(acceptance_log):
    t0 = time.perf_counter()
    large1 = optimize_theorem1("large_gap", 2, 2, restarts=20, seed=0)
    small1 = optimize_theorem1("small_gap", 2, 2, restarts=20, seed=0)
    large2 = optimize_theorem2("large_gap")
    small2 = optimize_theorem2("small_gap")
    total = time.perf_counter() - t0

    def cert(rep, kind):
        if kind == "prime":
            again = h1_theorem2(rep.best_alpha, rep.parameters, 1e-13)
        else:
            again = h1_theorem1(rep.best_alpha, 2, PolyF(tuple(rep.parameters)), kind, 1e-11)
        side = again.value < 1 if rep.direction == "large_gap" else again.value > 1
        return side and abs(again.value - 1) >= 5 * again.quad_error

    checks = [
        ("thm1 large", large1.best_alpha >= 1.5 and large1.h1_at_best < 1 and cert(large1, "divisor"),
         f"alpha {large1.best_alpha:.6f}, h1 {large1.h1_at_best:.8f}"),
        ("thm1 small", small1.best_alpha <= 0.7203 and small1.h1_at_best > 1 and cert(small1, "moebius"),
         f"alpha {small1.best_alpha:.6f}, h1 {small1.h1_at_best:.8f}"),
        ("thm2 large", large2.best_alpha >= 1.18 and large2.h1_at_best < 1 and cert(large2, "prime"),
         f"alpha {large2.best_alpha:.6f}, h1 {large2.h1_at_best:.8f}"),
        ("thm2 small", small2.best_alpha <= 0.796 and small2.h1_at_best > 1 and cert(small2, "prime"),
         f"alpha {small2.best_alpha:.6f}, h1 {small2.h1_at_best:.8f}"),
        ("time", total < 600, f"{total:.1f}s"),
    ]
    record(acceptance_log, 2, "theorem-level bounds", checks)


def test_criterion_3_algebraic_identities(acceptance_log):
    worst_vieta = 0.0
    worst_grad = 0.0
    for alpha in (0.3, 0.796, 1.0, 1.18, 2.0):
        uv = UV(alpha)
        cm, cp = c_opt(alpha)
        worst_vieta = max(worst_vieta, abs(cm * cp + 2 / uv.U))
        obj = lambda c: (4 * uv.U * c + uv.V * c * c) / (2 + uv.U * c * c)
        h = 1e-5
        for c in (cm, cp):
            worst_grad = max(worst_grad, abs((obj(c + h) - obj(c - h)) / (2 * h)))
    checks = [
        ("c+ c- = -2/U", worst_vieta < 1e-10, f"max error {worst_vieta:.1e}"),
        ("stationarity", worst_grad < 1e-6, f"max |d/dc| {worst_grad:.1e}"),
    ]
    record(acceptance_log, 3, "algebraic identities", checks)


def test_criterion_4_zero_machinery(acceptance_log):
    zeta = scan_zeros("zeta", 10, 100, 1e-9)
    xi1, dt = timed(scan_zeros, "xi_prime", 10, 1000, 1e-9)
    t = np.asarray(xi1.ordinates)
    counts = {T: abs(np.count_nonzero(t <= T) - count_main_term(T)) / T for T in (200, 500, 1000)}
    sel = (t > 500) & (t < 1000)
    window = ZeroList("xi_prime", (500.0, 1000.0), t[sel], np.asarray(xi1.bracket_lo)[sel],
                      np.asarray(xi1.bracket_hi)[sel], 1e-9, 0.05)
    stats = normalized_gaps(window)
    viol = interlacing_violations(xi1)
    checks = [
        ("zeta zeros below 100", len(zeta) == 29, f"{len(zeta)}"),
        ("interlacing", not viol and not xi1.violations, f"{len(viol)} violations"),
        ("count residual/T", max(counts.values()) <= 1, ", ".join(f"T={T}: {v:.3f}" for T, v in counts.items())),
        ("mean delta (500,1000)", 0.95 <= stats.mean_delta <= 1.05,
         f"{stats.mean_delta:.4f} (local-density normalization gives {stats.mean_delta_local:.4f})"),
        ("scan time", dt < 300, f"{dt:.1f}s"),
    ]
    record(acceptance_log, 4, "zero machinery", checks)


def test_criterion_5_lemma_oracles(acceptance_log):
    tables = arith.get_tables(2 * 10**6)
    x, r = 10**6, 2
    ratio6 = arith.lemma6_sum(x, 0, r, tables) / (-r * math.log(x))
    ys = [10**3, 10**4.5, 10**6]
    gaps1 = [abs(arith.lemma1_sum(y, r, tables) / arith.lemma1_main(y, r) - 1) for y in ys]
    norm7 = [arith.lemma7_sum(v, k, r, m, tables) / math.log(v) ** (k + 1)
             for v in (10**4, 10**5, 10**6) for k in range(4) for m in (1, 2)]
    spread7 = max(max(norm7[i::8]) - min(norm7[i::8]) for i in range(8))
    T = 100.0
    L = math.log(T / (2 * math.pi))
    resid = []
    for t in (120.0, 150.0, 180.0):
        s = complex(1 + 1 / L, t)
        resid.append(abs(analytic.xi2_over_xi1(s) - analytic.aK_rhs(s, N=10**4, K=10, T=T, tables=tables)))
    checks = [
        ("lemma6 k=0 ratio", 0.9 <= ratio6 <= 1.1, f"{ratio6:.4f}"),
        ("lemma1 trend", gaps1[0] > gaps1[1] > gaps1[2], " > ".join(f"{g:.3f}" for g in gaps1)),
        ("lemma7 bounded", max(abs(v) for v in norm7) < 3 and spread7 < 0.15,
         f"max {max(abs(v) for v in norm7):.3f}, drift {spread7:.3f}"),
        ("lemma4 residual", max(resid) <= 5, ", ".join(f"{v:.3f}" for v in resid)),
    ]
    record(acceptance_log, 5, "lemma oracles", checks)


def test_criterion_6_empirical_coherence(acceptance_log, xi_prime_1000_2000, xi_prime_1000):
    T = 1000.0
    flat = MollifierSpec("prime_twisted", c=0.0)
    alphas = (0.5, 1.0, 1.5)
    ones = [empirical_h(xi_prime_1000_2000, flat, a, 1, T) for a in alphas]
    rel = max(abs(v / a - 1) for v, a in zip(ones, alphas))
    divisor = MollifierSpec("divisor", r=2, f=PolyF((1, 7, -1.5)))
    mono = [empirical_h(xi_prime_1000_2000, divisor, a, 1, T) for a in alphas]
    t = np.asarray(xi_prime_1000.ordinates)
    sel = (t > 500) & (t < 1000)
    window = ZeroList("xi_prime", (500.0, 1000.0), t[sel], np.asarray(xi_prime_1000.bracket_lo)[sel],
                      np.asarray(xi_prime_1000.bracket_hi)[sel], 1e-9, 0.05)
    frac = distribution(window, [1.0]).frac_delta0_lt[0]
    checks = [
        ("M = 1 within 10% of alpha", rel <= 0.10, f"max relative deviation {rel:.4f}"),
        ("strictly increasing", ones[0] < ones[1] < ones[2] and mono[0] < mono[1] < mono[2],
         ", ".join(f"{v:.4f}" for v in mono)),
        ("frac delta0 < 1", frac > 0.035, f"{frac:.4f}"),
    ]
    record(acceptance_log, 6, "empirical coherence", checks)


def test_criterion_7_prime_sums(acceptance_log):
    checks = []
    for alpha, branch, name in ((1.18, 0, "c-"), (0.796, 1, "c+")):
        uv = UV(alpha)
        c = c_opt(alpha)[branch]
        g1, g2 = g_sums(alpha, c, 10**7)
        t1, t2 = theorem2_correction(uv.U, uv.V, c)
        err = max(abs(g1 - t1), abs(g2 - t2))
        checks.append((f"alpha={alpha}, {name}", err < 0.05, f"|g1 diff| {abs(g1 - t1):.4f}, |g2 diff| {abs(g2 - t2):.4f}"))
    record(acceptance_log, 7, "prime sums vs U/V forms", checks)


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main([__file__, "-v"]))
