"""Parameter search pushing h_1 across 1.

large_gap: find the largest alpha with h_1 < 1 (so gaps exceed alpha infinitely often).
small_gap: find the smallest alpha with h_1 > 1.

For the divisor/Moebius family h_1 is a Rayleigh quotient in the polynomial
coefficients, so the quadratic forms are built once per alpha and the
simplex search only does cheap matrix products.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, SearchFailure
from .functionals import MAX_DEGREE, PolyF, c_opt, h1_theorem1, h1_theorem1_form, h1_theorem2

ALPHA_RANGE = (0.1, 3.0)
SCAN_STEP = 0.1
COEFF_BOX = 20.0
REFERENCE = {
    ("theorem1", "large_gap"): 1.5,
    ("theorem1", "small_gap"): 0.7203,
    ("theorem2", "large_gap"): 1.18,
    ("theorem2", "small_gap"): 0.796,
}
DEFAULT_KIND = {"large_gap": "divisor", "small_gap": "moebius"}


@dataclass
class OptReport:
    direction: str
    best_alpha: float
    parameters: list | float
    h1_at_best: float
    trace: list
    seed: int
    quad_error: float = 0.0
    label: str = "main term"
    bracket: tuple[float, float] = (0.0, 0.0)
    alpha_trace: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def to_json(self, path=None) -> str:
        text = json.dumps(asdict(self), indent=2)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _check_direction(direction):
    if direction not in ("large_gap", "small_gap"):
        raise DomainError(f"direction must be 'large_gap' or 'small_gap', got {direction!r}")


def _success(direction, h):
    return h < 1 if direction == "large_gap" else h > 1


def _bracket(direction, f_alpha, alpha_trace, tol, lo=ALPHA_RANGE[0], hi=ALPHA_RANGE[1], step=SCAN_STEP,
             stop=None):
    """Coarse scan then bisection for the h_1 = 1 crossing.

    Returns (good, bad) with |good - bad| <= tol, where ``good`` is on the
    successful side and ``bad`` is not.  For large_gap good < bad.
    """
    grid = np.round(np.arange(lo, hi + step / 2, step), 12)
    prev = None
    bracket = None
    for a in grid:
        h = f_alpha(float(a))
        alpha_trace.append([float(a), float(h)])
        ok = _success(direction, h)
        if prev is not None:
            if direction == "large_gap" and prev[1] and not ok:
                bracket = (prev[0], float(a))
                break
            if direction == "small_gap" and not prev[1] and ok:
                bracket = (float(a), prev[0])
                break
        prev = (float(a), ok)
    if bracket is None:
        raise SearchFailure(f"no h1 = 1 crossing for alpha in [{lo}, {hi}]", trace=alpha_trace)
    good, bad = bracket
    done = (lambda g, b: abs(b - g) <= tol) if stop is None else (lambda g, b: stop(g))
    while not done(good, bad):
        mid = 0.5 * (good + bad)
        if mid in (good, bad):
            break
        h = f_alpha(mid)
        alpha_trace.append([mid, float(h)])
        if _success(direction, h):
            good = mid
        else:
            bad = mid
    return good, bad


class _InnerSearch:
    """Best polynomial (c_0 = 1) at fixed alpha by seeded Nelder-Mead restarts."""

    def __init__(self, direction, r, degree, kind, restarts, seed, workers, quad_tol):
        self.direction = direction
        self.r, self.degree, self.kind = r, degree, kind
        self.restarts, self.seed, self.workers = restarts, seed, workers
        self.quad_tol = quad_tol
        self.sign = 1.0 if direction == "large_gap" else -1.0
        self.warm = np.zeros(degree)
        self.cache = {}

    def run(self, alpha):
        if alpha in self.cache:
            return self.cache[alpha]
        form = h1_theorem1_form(alpha, self.r, self.degree, self.kind, self.quad_tol)
        if self.degree == 0:
            out = (form.h1([1.0]), np.array([1.0]), [[{"restart": 0, "coeffs": [1.0]}, self.sign * form.h1([1.0])]])
            self.cache[alpha] = out
            return out

        def objective(x):
            return self.sign * form.h1(np.concatenate([[1.0], x]))

        bounds = [(-COEFF_BOX, COEFF_BOX)] * self.degree

        def one(i):
            if i == 0:
                x0 = self.warm
            else:
                rng = np.random.default_rng([self.seed, i])
                x0 = rng.uniform(-COEFF_BOX, COEFF_BOX, self.degree)
            res = minimize(objective, x0, method="Nelder-Mead", bounds=bounds,
                           options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": 4000 * self.degree})
            return float(res.fun), res.x

        idx = range(max(1, self.restarts))
        if self.workers > 1:
            with ThreadPoolExecutor(self.workers) as ex:
                results = list(ex.map(one, idx))
        else:
            results = [one(i) for i in idx]
        trace = []
        best = None
        for i, (val, x) in enumerate(results):
            # ties resolved by the lowest restart index
            if best is None or val < best[0]:
                best = (val, i, x)
            trace.append([{"restart": i, "coeffs": [1.0] + [float(v) for v in x]}, best[0]])
        val, _, x = best
        self.warm = x
        coeffs = np.concatenate([[1.0], x])
        out = (self.sign * val, coeffs, trace)
        self.cache[alpha] = out
        return out


def best_h1_at(alpha: float, direction: str, r: int = 2, degree: int = 2, restarts: int = 20, seed: int = 0,
               kind: str | None = None, tol: float = 1e-11):
    """Most extreme h1_theorem1 at a fixed alpha: (h1, coeffs, trace)."""
    _check_direction(direction)
    inner = _InnerSearch(direction, r, degree, kind or DEFAULT_KIND[direction], restarts, seed, 1, tol)
    return inner.run(float(alpha))


def optimize_theorem1(direction: str, r: int = 2, degree: int = 2, restarts: int = 20, seed: int = 0,
                      kind: str | None = None, alpha_tol: float = 1e-6, tol: float = 1e-10,
                      fixed=None, workers: int = 1) -> OptReport:
    """Optimize h1_theorem1 over polynomials f (c_0 = 1), then bisect on alpha.

    ``fixed`` pins f to the given coefficients and only runs the alpha search.
    """
    _check_direction(direction)
    if r not in (1, 2, 3):
        raise DomainError("r must be 1, 2 or 3")
    if not 0 <= degree <= MAX_DEGREE:
        raise DomainError(f"degree must lie in [0, {MAX_DEGREE}]")
    if restarts < 1:
        raise DomainError("restarts must be >= 1")
    kind = kind or DEFAULT_KIND[direction]
    alpha_trace: list = []
    config = {"r": r, "degree": degree, "restarts": restarts, "kind": kind, "alpha_tol": alpha_tol,
              "tol": tol, "coeff_box": COEFF_BOX, "alpha_range": list(ALPHA_RANGE), "scan_step": SCAN_STEP,
              "method": "Nelder-Mead", "normalization": "c0 = 1"}

    if fixed is not None:
        f = PolyF(tuple(fixed))
        config["fixed"] = list(f.coeffs)

        def f_alpha(a):
            return h1_theorem1(a, r, f, kind, tol).value

        good, bad = _bracket(direction, f_alpha, alpha_trace, alpha_tol)
        coeffs = np.array(f.coeffs)
        trace = _bisection_trace(direction, alpha_trace)
    else:
        inner = _InnerSearch(direction, r, degree, kind, restarts, seed, workers, tol / 10)

        def f_alpha(a):
            return inner.run(a)[0]

        good, bad = _bracket(direction, f_alpha, alpha_trace, alpha_tol)
        _, coeffs, trace = inner.run(good)

    cert = h1_theorem1(good, r, PolyF(tuple(coeffs)), kind, tol / 10)
    _certify(direction, cert.value, cert.quad_error, alpha_trace)
    ref = REFERENCE[("theorem1", direction)]
    return OptReport(
        direction=direction,
        best_alpha=float(good),
        parameters=[float(c) for c in coeffs],
        h1_at_best=float(cert.value),
        trace=trace,
        seed=int(seed),
        quad_error=float(cert.quad_error),
        label=_label(direction, good, ref),
        bracket=(float(min(good, bad)), float(max(good, bad))),
        alpha_trace=alpha_trace,
        config=config,
    )


def _certify(direction, h, err, trace):
    if not _success(direction, h) or abs(h - 1) < 5 * err:
        raise SearchFailure(f"certificate failed: h1 = {h!r} with quad_error {err:.2e}", trace=trace)


def _bisection_trace(direction, alpha_trace):
    """Running best |h1 - 1| over the successful alpha evaluations."""
    trace = []
    running = math.inf
    for a, h in alpha_trace:
        if _success(direction, h):
            running = min(running, abs(h - 1))
            trace.append([{"alpha": a}, running])
    return trace


def _label(direction, alpha, ref):
    beyond = alpha > ref if direction == "large_gap" else alpha < ref
    return "extension" if beyond else "main term"


def optimize_theorem2(direction: str, h_tol: float = 1e-6, tol: float = 1e-12) -> OptReport:
    """Bisect on alpha with c = c_minus (large_gap) or c_plus (small_gap)."""
    _check_direction(direction)
    pick = 0 if direction == "large_gap" else 1
    alpha_trace: list = []
    params = {}

    def f_alpha(a):
        c = c_opt(a, tol)[pick]
        res = h1_theorem2(a, c, tol)
        params[a] = (c, res)
        return res.value

    def close(a):
        return abs(params[a][1].value - 1) < h_tol

    good, bad = _bracket(direction, f_alpha, alpha_trace, 0.0, stop=close)
    c, res = params[good]
    _certify(direction, res.value, res.quad_error, alpha_trace)
    trace = _bisection_trace(direction, alpha_trace)
    return OptReport(
        direction=direction,
        best_alpha=float(good),
        parameters=float(c),
        h1_at_best=float(res.value),
        trace=trace,
        seed=0,
        quad_error=float(res.quad_error),
        label=_label(direction, good, REFERENCE[("theorem2", direction)]),
        bracket=(float(min(good, bad)), float(max(good, bad))),
        alpha_trace=alpha_trace,
        config={"h_tol": h_tol, "tol": tol, "c_branch": "c_minus" if pick == 0 else "c_plus",
                "alpha_range": list(ALPHA_RANGE), "scan_step": SCAN_STEP},
    )
