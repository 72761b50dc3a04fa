"""Multiplicative and convolution arithmetic functions on a sieve.

All bulk arrays are built from a smallest-prime-factor table.  A multiplicative
function is filled block by block over ranges ``[2**k, 2**(k+1))``: every entry
only depends on entries at indices at most half its own, so each block is a
single vectorized step.

Index convention: ``arr[n]`` is the value at ``n``; ``arr[0]`` is unused (0).
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.special import comb, exp1, gammaln

from .errors import CapacityError, DomainError, PrecisionError

DEFAULT_LIMIT = 10**7

KINDS = ("divisor", "moebius")


def spf_sieve(limit: int) -> np.ndarray:
    """Smallest prime factor of every n <= limit (spf[0] = 0, spf[1] = 1)."""
    if limit < 1:
        raise DomainError("sieve limit must be >= 1")
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    spf[0] = 0
    spf[1] = 1
    return spf


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as int64 (plain Eratosthenes, no factor table)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def _local_coeff(p_exp: np.ndarray, r: int, kind: str) -> np.ndarray:
    a = np.asarray(p_exp, dtype=np.int64)
    if kind == "divisor":
        return comb(a + r - 1, r - 1, exact=False)
    if kind == "moebius":
        return np.where(a % 2 == 0, 1.0, -1.0) * comb(r, a, exact=False)
    raise DomainError(f"unknown coefficient kind {kind!r}")


def _local_A(p, lam, r: int, s: float, tol: float, max_terms: int = 200_000):
    """Local factor of A_r(n, s) at p**lam, vectorized over (p, lam).

    Both series are summed until a geometric tail bound falls below
    ``tol * partial``.  Successive-term ratios are nonincreasing in j, so the
    current ratio bounds the rest of the tail.
    """
    if not s > 0:
        raise DomainError("A_r(n, s) needs s > 0 for the local series to converge")
    p = np.asarray(p, dtype=float)
    lam = np.asarray(lam, dtype=np.int64)
    x = p ** (-s)
    num = np.zeros_like(x)
    den = np.zeros_like(x)
    xj = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for j in range(max_terms):
        dj = comb(j + r - 1, r - 1, exact=False)
        dj1 = comb(j + r, r - 1, exact=False)
        djl = comb(j + lam + r - 1, r - 1, exact=False)
        djl1 = comb(j + lam + r, r - 1, exact=False)
        tn = dj * djl * xj
        td = dj * dj * xj
        num = np.where(active, num + tn, num)
        den = np.where(active, den + td, den)
        rho_n = x * (dj1 / dj) * (djl1 / djl)
        rho_d = x * (dj1 / dj) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            tail_n = np.where(rho_n < 1, tn * rho_n / (1 - rho_n), np.inf)
            tail_d = np.where(rho_d < 1, td * rho_d / (1 - rho_d), np.inf)
        done = (tail_n <= tol * num) & (tail_d <= tol * den)
        active &= ~done
        if not active.any():
            return num / den
        xj = xj * x
    raise PrecisionError(f"A_r local series did not converge in {max_terms} terms (s={s})")


class ArithTables:
    """Sieve tables and cached arithmetic arrays up to ``limit``.

    Arrays handed out are read-only views; the tables are immutable once
    built, so concurrent readers are safe.
    """

    def __init__(self, limit: int = DEFAULT_LIMIT):
        self.limit = int(limit)
        spf = spf_sieve(self.limit)
        expo = np.zeros(self.limit + 1, dtype=np.int8)
        ppow = np.zeros(self.limit + 1, dtype=np.int32)
        ppow[1] = 1
        lo = 2
        while lo <= self.limit:
            hi = min(2 * lo, self.limit + 1)
            n = np.arange(lo, hi, dtype=np.int64)
            p = spf[lo:hi]
            m = n // p
            same = spf[m] == p
            expo[lo:hi] = np.where(same, expo[m] + 1, 1)
            ppow[lo:hi] = np.where(same, ppow[m] * p, p)
            lo = hi
        self.smallest_prime_factor = spf
        self.exponent = expo
        self.prime_power = ppow
        for arr in (spf, expo, ppow):
            arr.flags.writeable = False
        self._cache: dict = {}

    # -- factor-table helpers -------------------------------------------------

    def check(self, n: int) -> None:
        if n < 1:
            raise DomainError(f"n must be a positive integer, got {n}")
        if n > self.limit:
            raise CapacityError(f"n = {n} exceeds sieve limit {self.limit}")

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization of n as [(p, a), ...] in increasing p."""
        self.check(n)
        out = []
        while n > 1:
            p = int(self.smallest_prime_factor[n])
            q = int(self.prime_power[n])
            out.append((p, int(self.exponent[n])))
            n //= q
        return out

    @property
    def primes(self) -> np.ndarray:
        key = ("primes",)
        if key not in self._cache:
            n = np.arange(self.limit + 1)
            self._cache[key] = np.flatnonzero((self.smallest_prime_factor == n) & (n >= 2))
        return self._cache[key]

    @property
    def prime_powers(self) -> np.ndarray:
        key = ("prime_powers",)
        if key not in self._cache:
            n = np.arange(self.limit + 1)
            self._cache[key] = np.flatnonzero((self.prime_power == n) & (n >= 2))
        return self._cache[key]

    def _n_bound(self, nmax):
        nmax = self.limit if nmax is None else int(nmax)
        if nmax > self.limit:
            raise CapacityError(f"bound {nmax} exceeds sieve limit {self.limit}")
        return nmax

    def multiplicative(self, local_values: np.ndarray, nmax: int | None = None) -> np.ndarray:
        """Assemble a multiplicative function from its values at prime powers.

        ``local_values`` is aligned with :attr:`prime_powers` restricted to
        ``<= nmax``.
        """
        nmax = self._n_bound(nmax)
        q = self.prime_powers
        q = q[q <= nmax]
        loc = np.zeros(nmax + 1)
        loc[q] = local_values
        g = np.zeros(nmax + 1)
        g[1] = 1.0
        ppow = self.prime_power
        lo = 2
        while lo <= nmax:
            hi = min(2 * lo, nmax + 1)
            n = np.arange(lo, hi, dtype=np.int64)
            qq = ppow[lo:hi]
            g[lo:hi] = loc[qq] * g[n // qq]
            lo = hi
        g.flags.writeable = False
        return g

    def _cached(self, key, nmax, build):
        nmax = self._n_bound(nmax)
        hit = self._cache.get(key)
        if hit is None or len(hit) <= nmax:
            hit = build(nmax)
            hit.flags.writeable = False
            self._cache[key] = hit
        return hit[: nmax + 1]

    # -- coefficient arrays ---------------------------------------------------

    def coeff_array(self, r: int, kind: str, nmax: int | None = None) -> np.ndarray:
        """d_r(n) (kind='divisor') or mu_r(n) (kind='moebius') for n <= nmax."""
        if r < 1:
            raise DomainError("r must be >= 1")
        if kind not in KINDS:
            raise DomainError(f"unknown coefficient kind {kind!r}")

        def build(nm):
            q = self.prime_powers
            q = q[q <= nm]
            return self.multiplicative(_local_coeff(self.exponent[q], r, kind), nm)

        return self._cached(("coeff", kind, r), nmax, build)

    def von_mangoldt(self, nmax: int | None = None) -> np.ndarray:
        def build(nm):
            out = np.zeros(nm + 1)
            q = self.prime_powers
            q = q[q <= nm]
            out[q] = np.log(self.smallest_prime_factor[q].astype(float))
            return out

        return self._cached(("Lambda",), nmax, build)

    def _sparse_convolve(self, sparse: np.ndarray, dense: np.ndarray, nmax: int) -> np.ndarray:
        # sparse is supported on prime powers; dense is any array of length nmax+1
        out = np.zeros(nmax + 1)
        q = self.prime_powers
        q = q[q <= nmax]
        for qi, v in zip(q.tolist(), sparse[q].tolist()):
            m = nmax // qi
            out[qi : qi * m + 1 : qi] += v * dense[1 : m + 1]
        return out

    def lambda_j(self, j: int, nmax: int | None = None) -> np.ndarray:
        """j-fold Dirichlet convolution of von Mangoldt; Lambda_0 is the identity."""
        if j < 0:
            raise DomainError("j must be >= 0")

        def build(nm):
            if j == 0:
                out = np.zeros(nm + 1)
                out[1] = 1.0
                return out
            if j == 1:
                return np.array(self.von_mangoldt(nm))
            return self._sparse_convolve(self.von_mangoldt(nm), self.lambda_j(j - 1, nm), nm)

        return self._cached(("Lambda_j", j), nmax, build)

    def alpha_array(self, k: int, nmax: int | None = None) -> np.ndarray:
        """alpha_0 = -Lambda; alpha_k = Lambda_{k-1} * (Lambda log) for k >= 1."""
        if k < 0:
            raise DomainError("k must be >= 0")

        def build(nm):
            lam = self.von_mangoldt(nm)
            if k == 0:
                return -np.array(lam)
            lamlog = lam * np.log(np.maximum(np.arange(nm + 1), 1))
            if k == 1:
                return lamlog
            return self._sparse_convolve(lamlog, self.lambda_j(k - 1, nm), nm)

        return self._cached(("alpha", k), nmax, build)

    def A_array(self, r: int, s: float = 1.0, tol: float = 1e-14, nmax: int | None = None):
        """A_r(n, s) for all n <= nmax."""

        def build(nm):
            q = self.prime_powers
            q = q[q <= nm]
            loc = _local_A(self.smallest_prime_factor[q], self.exponent[q], r, s, tol)
            return self.multiplicative(loc, nm)

        return self._cached(("A", r, float(s), float(tol)), nmax, build)


_SHARED: ArithTables | None = None


def get_tables(limit: int | None = None) -> ArithTables:
    """Process-wide tables, rebuilt larger on demand (capped at DEFAULT_LIMIT)."""
    global _SHARED
    need = 10**6 if limit is None else int(limit)
    if need > DEFAULT_LIMIT:
        raise CapacityError(f"requested bound {need} exceeds default sieve limit {DEFAULT_LIMIT}")
    if _SHARED is None or _SHARED.limit < need:
        size = need if _SHARED is None else max(need, min(2 * _SHARED.limit, DEFAULT_LIMIT))
        _SHARED = ArithTables(size)
    return _SHARED


# -- scalar operations ----------------------------------------------------------


def coeff(n: int, r: int, kind: str, tables: ArithTables | None = None) -> int:
    """d_r(n) or mu_r(n) from the prime factorization of n."""
    if n == 0:
        raise DomainError("coefficients are defined for n >= 1")
    if r < 1:
        raise DomainError("r must be >= 1")
    tables = tables or get_tables(max(n, 2))
    tables.check(n)
    out = 1
    for _, a in tables.factorize(n):
        if kind == "divisor":
            out *= math.comb(a + r - 1, r - 1)
        elif kind == "moebius":
            out *= (-1) ** a * math.comb(r, a)
        else:
            raise DomainError(f"unknown coefficient kind {kind!r}")
    return out


def alpha_k(k: int, n: int, tables: ArithTables | None = None) -> float:
    tables = tables or get_tables(max(n, 2))
    tables.check(n)
    return float(tables.alpha_array(k, n)[n])


def A_r(n: int, r: int, s: float = 1.0, tol: float = 1e-14, tables: ArithTables | None = None) -> float:
    """A_r(n, s): product over p^lam || n of the twisted local series ratio."""
    if not s > 0:
        raise DomainError("A_r(n, s) needs s > 0")
    if tol <= 0:
        raise DomainError("tol must be positive")
    tables = tables or get_tables(max(n, 2))
    fac = tables.factorize(n)
    if not fac:
        return 1.0
    p = np.array([f[0] for f in fac])
    lam = np.array([f[1] for f in fac])
    return float(np.prod(_local_A(p, lam, r, s, tol)))


def F_tau(n: int, tau: float, A: float = 1.0, tables: ArithTables | None = None) -> float:
    """prod_{p | n} (1 + A p^-tau), with the implied constant made explicit."""
    tables = tables or get_tables(max(n, 2))
    return math.prod(1.0 + A * p ** (-tau) for p, _ in tables.factorize(n))


class ConstantEstimate(NamedTuple):
    value: float
    error: float


def _local_square_sum_minus_one(p: np.ndarray, r: int) -> np.ndarray:
    # sum_{n>=1} d_r(p^n)^2 p^-n, summed until terms stop mattering
    x = 1.0 / p.astype(float)
    total = np.zeros_like(x)
    xn = x.copy()
    for n in range(1, 400):
        term = comb(n + r - 1, r - 1, exact=False) ** 2 * xn
        total += term
        if np.all(term <= 1e-18 * (1.0 + total)):
            break
        xn = xn * x
    return total


def a_r_const(r: int, prime_cutoff: int = 10**6) -> ConstantEstimate:
    """Euler-product constant a_r with a prime-number-theorem tail correction.

    The log of the local factor is c2/p^2 + O(p^-3); the tail over p > P is
    approximated by c2 * E1(log P).
    """
    if r < 1:
        raise DomainError("r must be >= 1")
    if prime_cutoff < 100:
        raise DomainError("prime_cutoff must be >= 100")
    if r == 1:
        return ConstantEstimate(1.0, 0.0)
    p = primes_upto(prime_cutoff)
    logs = r * r * np.log1p(-1.0 / p) + np.log1p(_local_square_sum_minus_one(p, r))
    c2 = r * r * (r + 1) ** 2 / 4 - r * r / 2 - r**4 / 2
    lp = math.log(prime_cutoff)
    tail = c2 * float(exp1(lp))
    log_total = math.fsum(logs.tolist()) + tail
    err = abs(tail) * 3.0 / lp + 10.0 * r**6 / (2.0 * prime_cutoff**2 * lp)
    value = math.exp(log_total)
    return ConstantEstimate(value, value * err)


# -- brute-force lemma oracles ----------------------------------------------------


def _fsum(arr: np.ndarray) -> float:
    return math.fsum(np.asarray(arr, dtype=float).tolist())


def lemma1_sum(y: float, r: int, tables: ArithTables | None = None) -> float:
    """sum_{n <= y} d_r(n)^2 / n."""
    n = int(math.floor(y))
    tables = tables or get_tables(n)
    d = tables.coeff_array(r, "divisor", n)[1:]
    return _fsum(d * d / np.arange(1, n + 1))


def lemma2_sum(x: float, n: int, r: int, tables: ArithTables | None = None) -> float:
    """sum_{m <= x} d_r(m) d_r(mn) / m."""
    mx = int(math.floor(x))
    tables = tables or get_tables(mx * n)
    d = tables.coeff_array(r, "divisor", mx * n)
    m = np.arange(1, mx + 1)
    return _fsum(d[m] * d[m * n] / m)


def lemma6_sum(x: float, k: int, r: int, tables: ArithTables | None = None) -> float:
    """T_k(x) = sum_{n <= x} alpha_k(n) A_r(n) / n."""
    n = int(math.floor(x))
    tables = tables or get_tables(n)
    a = tables.alpha_array(k, n)[1:]
    A = tables.A_array(r, nmax=n)[1:]
    return _fsum(a * A / np.arange(1, n + 1))


def lemma7_sum(x: float, k: int, r: int, m: int, tables: ArithTables | None = None) -> float:
    """sum_{n <= x} alpha_k(mn) d_r(n) / n."""
    nx = int(math.floor(x))
    tables = tables or get_tables(nx * m)
    a = tables.alpha_array(k, nx * m)
    d = tables.coeff_array(r, "divisor", nx)
    n = np.arange(1, nx + 1)
    return _fsum(a[m * n] * d[n] / n)


def lemma1_main(y: float, r: int) -> float:
    return a_r_const(r).value * math.log(y) ** (r * r) / math.gamma(r * r + 1)


def lemma2_main(x: float, n: int, r: int) -> float:
    return A_r(n, r) * lemma1_main(x, r)


def lemma6_main(x: float, k: int, r: int) -> float:
    lx = math.log(x)
    if k == 0:
        return -r * lx
    return math.exp(k * math.log(r) + (k + 1) * math.log(lx) - gammaln(k + 2))


_ORACLES = {
    "lemma1": (lemma1_sum, ("y", "r")),
    "lemma2": (lemma2_sum, ("x", "n", "r")),
    "lemma6": (lemma6_sum, ("x", "k", "r")),
    "lemma7": (lemma7_sum, ("x", "k", "r", "m")),
}


def oracle_sum(name: str, params: dict, tables: ArithTables | None = None) -> float:
    """Exact brute-force sum for one of the lemma oracles.

    ``params`` carries the bound (``y`` or ``x``) and ``r``, plus ``n``, ``k``
    or ``m`` as the sum needs them.
    """
    try:
        fn, keys = _ORACLES[name]
    except KeyError:
        raise DomainError(f"unknown oracle {name!r}; expected one of {sorted(_ORACLES)}") from None
    missing = [k for k in keys if k not in params]
    if missing:
        raise DomainError(f"{name} needs parameters {missing}")
    return fn(*(params[k] for k in keys), tables=tables)
