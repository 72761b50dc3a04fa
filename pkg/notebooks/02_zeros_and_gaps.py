# %% [markdown]
# # Zeros of zeta and xi' on the critical line
#
# Zeta zeros come from sign changes of the scaled Xi(t). Between two
# consecutive zeta zeros there is exactly one zero of xi' (Rolle), located by a
# sign change of g(t) = -Im(L'/L + zeta'/zeta).

# %%
import math

import numpy as np

from xigap import distribution, normalized_gaps, scan_zeros
from xigap.zerofinder import ZeroList, count_main_term, interlacing_violations

# %%
zeta = scan_zeros("zeta", 10, 100, 1e-9)
print(len(zeta), zeta.ordinates[:5])

# %%
xi1 = scan_zeros("xi_prime", 10, 1000, 1e-9)
print(len(xi1), "xi' zeros below 1000; interlacing violations:", interlacing_violations(xi1))

# %% [markdown]
# The count tracks (1/2pi) T log T up to O(T).

# %%
t = np.asarray(xi1.ordinates)
for T in (200, 500, 1000):
    n = np.count_nonzero(t <= T)
    print(T, n, round(count_main_term(T), 1), round((n - count_main_term(T)) / T, 3))

# %% [markdown]
# Normalized gaps on (500, 1000). With the log(gamma_1) normalization the mean
# sits well above 1 at this height: the O(T) term in the count is still large.
# The local-density normalization recovers a mean close to 1.

# %%
sel = (t > 500) & (t < 1000)
window = ZeroList("xi_prime", (500.0, 1000.0), t[sel], np.asarray(xi1.bracket_lo)[sel],
                  np.asarray(xi1.bracket_hi)[sel], 1e-9, 0.05)
stats = normalized_gaps(window)
print("mean delta", stats.mean_delta, "local", stats.mean_delta_local)

# %%
table = distribution(window, [0.25, 0.5, 1.0, 1.5, 2.0])
for a, d, f in zip(table.alphas, table.D, table.frac_delta0_lt):
    print(f"alpha={a:4.2f}  D={d:.4f}  frac(delta0 < alpha)={f:.4f}")
