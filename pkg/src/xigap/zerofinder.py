"""Critical-line zeros of zeta and of xi', and their normalized gaps.

Zeros of zeta are sign changes of the scaled Xi(t).  Zeros of xi' are found
between consecutive zeta zeros: there g(t) runs from +inf to -inf, so the
interval shrunk by the pole radius is already a certified bracket.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import analytic
from .errors import CapacityError, DomainError, PrecisionError

FIRST_ZETA_ZERO = 14.134725141734693
DEFAULT_GRID_STEP = 0.05
KINDS = ("zeta", "xi_prime")


@dataclass
class ZeroList:
    kind: str
    window: tuple[float, float]
    ordinates: np.ndarray
    bracket_lo: np.ndarray
    bracket_hi: np.ndarray
    bracket_width: float
    grid_step: float = DEFAULT_GRID_STEP
    zeta_ordinates: np.ndarray | None = None
    notes: list[str] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.ordinates)

    def detector(self, t):
        """The function whose sign changes define this list."""
        if self.kind == "zeta":
            v, resid = analytic.xi_scaled_values(t)
            return v
        return analytic.g_values(t)[0]

    def certificates_valid(self) -> bool:
        if not len(self):
            return True
        lo = self.detector(self.bracket_lo)
        hi = self.detector(self.bracket_hi)
        return bool(np.all(np.sign(lo) * np.sign(hi) < 0))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "kind", "ordinate", "bracket_lo", "bracket_hi"])
            for i, (t, a, b) in enumerate(zip(self.ordinates, self.bracket_lo, self.bracket_hi)):
                w.writerow([i, self.kind, repr(float(t)), repr(float(a)), repr(float(b))])

    @classmethod
    def from_csv(cls, path, window: tuple[float, float] | None = None) -> "ZeroList":
        rows = list(csv.DictReader(open(path, newline="")))
        kind = rows[0]["kind"] if rows else "zeta"
        t = np.array([float(r["ordinate"]) for r in rows])
        lo = np.array([float(r["bracket_lo"]) for r in rows])
        hi = np.array([float(r["bracket_hi"]) for r in rows])
        if window is None:
            window = (float(lo.min()), float(hi.max())) if len(t) else (0.0, 0.0)
        width = float(np.max(hi - lo)) if len(t) else 0.0
        return cls(kind, window, t, lo, hi, width)


def bisect_sign_change(fn, lo, hi, tol: float, f_lo=None, max_iter: int = 200):
    """Vectorized bisection; ``fn`` maps an array of points to values.

    Returns the final (lo, hi) arrays, with the sign of ``fn`` at lo preserved.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    if not lo.size:
        return lo, hi
    s_lo = np.sign(fn(lo) if f_lo is None else f_lo)
    for _ in range(max_iter):
        wide = (hi - lo) > tol
        if not wide.any():
            break
        mid = 0.5 * (lo[wide] + hi[wide])
        sm = np.sign(fn(mid))
        same = sm == s_lo[wide]
        lo_w, hi_w = lo[wide], hi[wide]
        lo_w[same] = mid[same]
        hi_w[~same] = mid[~same]
        lo[wide], hi[wide] = lo_w, hi_w
    return lo, hi


def _grid(a: float, b: float, step: float) -> np.ndarray:
    n = max(1, int(math.ceil((b - a) / step)))
    return np.linspace(a, b, n + 1)


def _map(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _xi_values_checked(t):
    v, resid = analytic.xi_scaled_values(t)
    bad = resid > 1e-6
    if bad.any():
        raise PrecisionError(f"Xi realness residual {resid.max():.2e} at t={t[bad][0]}")
    return v


def _xi_sign_changes(grid: np.ndarray, tol: float):
    v = _xi_values_checked(grid)
    i = np.flatnonzero(v[:-1] * v[1:] < 0)
    lo, hi = bisect_sign_change(_xi_values_checked, grid[i], grid[i + 1], tol, f_lo=v[i])
    # a grid point landing exactly on a zero is its own certificate-free bracket
    exact = np.flatnonzero(v == 0)
    return np.concatenate([lo, grid[exact]]), np.concatenate([hi, grid[exact]])


def _scan_xi(a: float, b: float, tol: float, step: float, workers: int = 1, notes=None):
    grid = _grid(a, b, step)
    blocks = np.array_split(np.arange(len(grid)), max(1, workers))
    # neighbouring blocks share their boundary point so no cell is lost
    pieces = [grid[blk[0] : blk[-1] + 2] for blk in blocks if len(blk)]
    found = _map(lambda g: _xi_sign_changes(g, tol), pieces, workers)
    lo = np.concatenate([f[0] for f in found])
    hi = np.concatenate([f[1] for f in found])
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    keep = np.ones(len(lo), dtype=bool)
    keep[1:] = np.abs(np.diff(lo)) > tol
    lo, hi = lo[keep], hi[keep]

    mids = 0.5 * (lo + hi)
    close = np.flatnonzero(np.diff(mids) < 2 * step)
    if close.size and step > 1e-4:
        for i in close:
            msg = f"zeros at {mids[i]:.6f} and {mids[i + 1]:.6f} closer than twice the grid step; refining"
            warnings.warn(msg, RuntimeWarning, stacklevel=3)
            if notes is not None:
                notes.append(msg)
        lo, hi = _refine(lo, hi, [(mids[i] - step, mids[i + 1] + step) for i in close], a, b, tol, step / 10)
    return lo, hi


def _refine(lo, hi, regions, a, b, tol, fine_step):
    """Rescan ``regions`` at a finer step and merge the zeros found there."""
    for ra, rb in regions:
        ra, rb = max(ra, a), min(rb, b)
        inside = (lo >= ra) & (hi <= rb)
        nlo, nhi = _xi_sign_changes(_grid(ra, rb, fine_step), tol)
        lo = np.concatenate([lo[~inside], nlo])
        hi = np.concatenate([hi[~inside], nhi])
        order = np.argsort(lo)
        lo, hi = lo[order], hi[order]
    return lo, hi


def _xi_prime_in_intervals(zeros: np.ndarray, tol: float, step: float, eps: float):
    """Sign changes of g inside every open interval between consecutive zeros.

    Returns per-interval lists of (lo, hi) brackets and the per-interval counts.
    """
    a = zeros[:-1] + eps
    b = zeros[1:] - eps
    grids = [_grid(x, y, min(step, (y - x) / 8)) for x, y in zip(a, b)]
    sizes = np.array([len(g) for g in grids])
    flat = np.concatenate(grids)
    gvals = analytic.g_values(flat)[0]
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    br_lo, br_hi, f_lo, owner, counts = [], [], [], [], []
    for j, (st, sz) in enumerate(zip(starts, sizes)):
        v = gvals[st : st + sz]
        t = flat[st : st + sz]
        i = np.flatnonzero(v[:-1] * v[1:] < 0)
        counts.append(len(i))
        br_lo.append(t[i])
        br_hi.append(t[i + 1])
        f_lo.append(v[i])
        owner.append(np.full(len(i), j))
    lo = np.concatenate(br_lo) if br_lo else np.zeros(0)
    hi = np.concatenate(br_hi) if br_hi else np.zeros(0)
    fl = np.concatenate(f_lo) if f_lo else np.zeros(0)
    own = np.concatenate(owner) if owner else np.zeros(0, dtype=int)
    g_only = lambda x: analytic.g_values(x)[0]
    lo, hi = bisect_sign_change(g_only, lo, hi, tol, f_lo=fl)
    return lo, hi, own, np.array(counts)


def scan_zeros(kind: str, t_min: float, t_max: float, tol: float = 1e-9,
               grid_step: float = DEFAULT_GRID_STEP, workers: int = 1) -> ZeroList:
    """All critical-line zeros of zeta or xi' with ordinates in [t_min, t_max]."""
    if kind not in KINDS:
        raise DomainError(f"kind must be one of {KINDS}")
    if not (10 <= t_min < t_max <= analytic.HEIGHT_CAP):
        raise CapacityError(f"need 10 <= t_min < t_max <= {analytic.HEIGHT_CAP}")
    if tol < 1e-9:
        raise DomainError("tol must be >= 1e-9")
    if grid_step > DEFAULT_GRID_STEP:
        raise DomainError(f"grid_step must be <= {DEFAULT_GRID_STEP}")
    notes: list[str] = []

    if kind == "zeta":
        lo, hi = _scan_xi(t_min, t_max, tol, grid_step, workers, notes)
        return ZeroList("zeta", (t_min, t_max), 0.5 * (lo + hi), lo, hi, tol, grid_step, notes=notes)

    eps = analytic.POLE_RADIUS
    pad = 8.0
    a = max(1.0, t_min - pad)
    b = min(analytic.HEIGHT_CAP, t_max + pad)
    zlo, zhi = _scan_xi(a, b, tol, grid_step, workers, notes)
    violations = []
    for _ in range(4):
        zeros = 0.5 * (zlo + zhi)
        lo, hi, own, counts = _xi_prime_in_intervals(zeros, tol, grid_step, eps)
        multi = np.flatnonzero(counts != 1)
        if not multi.size:
            break
        # an interval with several sign changes of g usually hides a missed zeta zero pair
        before = len(zlo)
        zlo, zhi = _refine(zlo, zhi, [(zeros[j], zeros[j + 1]) for j in multi], a, b, tol, grid_step / 20)
        if len(zlo) == before:
            break
    zeros = 0.5 * (zlo + zhi)
    for j in np.flatnonzero(counts != 1):
        if zeros[j + 1] >= t_min and zeros[j] <= t_max:
            violations.append({"interval": (float(zeros[j]), float(zeros[j + 1])), "sign_changes": int(counts[j])})
            notes.append(f"interval ({zeros[j]:.6f}, {zeros[j + 1]:.6f}) has {counts[j]} sign changes of g")
    mids = 0.5 * (lo + hi)
    inside = (mids >= t_min) & (mids <= t_max)
    return ZeroList("xi_prime", (t_min, t_max), mids[inside], lo[inside], hi[inside], tol, grid_step,
                    zeta_ordinates=zeros, notes=notes, violations=violations)


def interlacing_violations(xi_zeros: ZeroList) -> list[tuple[float, float, int]]:
    """Consecutive zeta zeros inside the window that do not enclose exactly one xi' zero."""
    if xi_zeros.kind != "xi_prime" or xi_zeros.zeta_ordinates is None:
        raise DomainError("need an xi_prime ZeroList that carries its zeta ordinates")
    z = xi_zeros.zeta_ordinates
    t0, t1 = xi_zeros.window
    z = z[(z >= t0) & (z <= t1)]
    counts = np.histogram(xi_zeros.ordinates, bins=z)[0] if len(z) > 1 else np.zeros(0, dtype=int)
    return [(float(z[i]), float(z[i + 1]), int(c)) for i, c in enumerate(counts) if c != 1]


def count_main_term(T: float) -> float:
    """(1/2 pi) T log T, the leading term in the count of xi' zeros up to T."""
    return T * math.log(T) / (2 * math.pi)


# -- gap statistics -----------------------------------------------------------------


@dataclass
class GapStats:
    """Normalized gaps of one xi' zero list.

    ``deltas`` use log(gamma_1)/2pi per zero; the one-sided gaps use the fixed
    L = log(T/2pi) with T the window start.  ``deltas_local`` rescale by the
    local density log(gamma_1/2pi)/2pi and are reported for comparison only.
    """

    T: float
    L: float
    deltas: list[float]
    delta_plus: list[float]
    delta_minus: list[float]
    delta_zero: list[float]
    delta_one: list[float]
    mean_delta: float
    sum_delta_sq: float
    count: int
    deltas_local: list[float] = field(default_factory=list)
    mean_delta_local: float = float("nan")
    normalization: dict = field(default_factory=lambda: {
        "deltas": "log(gamma_1)/(2 pi)",
        "delta_plus_minus": "L/(2 pi), L = log(T/(2 pi)), T = window start",
        "deltas_local": "log(gamma_1/(2 pi))/(2 pi)",
    })
    excluded_boundary: int = 0

    def to_json(self, path=None) -> str:
        text = json.dumps(asdict(self), indent=2)
        if path is not None:
            Path(path).write_text(text)
        return text


def normalized_gaps(zeros: ZeroList) -> GapStats:
    t = np.asarray(zeros.ordinates, dtype=float)
    if len(t) < 3:
        raise DomainError("normalized gaps need at least 3 ordinates")
    gaps = np.diff(t)
    T = float(zeros.window[0])
    L = math.log(T / (2 * math.pi))
    deltas = gaps * np.log(t[:-1]) / (2 * math.pi)
    local = gaps * np.log(t[:-1] / (2 * math.pi)) / (2 * math.pi)
    dplus = gaps * L / (2 * math.pi)
    # interior zeros: delta^+ from the gap after, delta^- from the gap before
    inner_plus = dplus[1:]
    inner_minus = dplus[:-1]
    return GapStats(
        T=T,
        L=L,
        deltas=deltas.tolist(),
        delta_plus=dplus.tolist(),
        delta_minus=dplus.tolist(),
        delta_zero=np.minimum(inner_plus, inner_minus).tolist(),
        delta_one=np.maximum(inner_plus, inner_minus).tolist(),
        mean_delta=float(np.mean(deltas)),
        sum_delta_sq=math.fsum((deltas**2).tolist()),
        count=len(deltas),
        deltas_local=local.tolist(),
        mean_delta_local=float(np.mean(local)),
        excluded_boundary=2,
    )


@dataclass
class DistributionTable:
    alphas: list[float]
    D: list[float]
    frac_delta1_gt: list[float]
    frac_delta0_lt: list[float]
    normalizer: float
    normalizer_kind: str
    count: int
    interior_count: int
    sum_delta_sq: float
    count_residual: float
    window: tuple[float, float]

    def to_json(self, path=None) -> str:
        text = json.dumps(asdict(self), indent=2)
        if path is not None:
            Path(path).write_text(text)
        return text


def distribution(zeros: ZeroList, alphas) -> DistributionTable:
    """Empirical D(alpha, T) plus the one-sided fractions used for large/small gaps.

    For a window starting below the first zeta zero the normalizer is the full
    (1/2pi) T log T; otherwise it is the same main term taken over the window.
    """
    if not len(zeros):
        raise DomainError("empty zero list")
    stats = normalized_gaps(zeros)
    t0, t1 = zeros.window
    if t0 < FIRST_ZETA_ZERO:
        norm, kind = count_main_term(t1), "origin"
    else:
        norm, kind = count_main_term(t1) - count_main_term(t0), "window"
    d = np.asarray(stats.deltas)
    d0 = np.asarray(stats.delta_zero)
    d1 = np.asarray(stats.delta_one)
    alphas = [float(a) for a in alphas]
    return DistributionTable(
        alphas=alphas,
        D=[float(np.count_nonzero(d <= a)) / norm for a in alphas],
        frac_delta1_gt=[float(np.count_nonzero(d1 > a)) / len(d1) for a in alphas],
        frac_delta0_lt=[float(np.count_nonzero(d0 < a)) / len(d0) for a in alphas],
        normalizer=norm,
        normalizer_kind=kind,
        count=stats.count,
        interior_count=len(d0),
        sum_delta_sq=stats.sum_delta_sq,
        count_residual=len(zeros) - norm,
        window=(t0, t1),
    )
