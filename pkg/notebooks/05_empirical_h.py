# %% [markdown]
# # Empirical h_1 from actual zeros
#
# The mollified moment is integrated numerically over windows of width
# 2 pi alpha / L around each xi' zero in (T, 2T] and divided by the plain
# integral. With M = 1 the ratio is close to alpha.

# %%
import numpy as np

from xigap import MollifierSpec, PolyF, empirical_h, h1_theorem1, scan_zeros

T = 1000.0
zeros = scan_zeros("xi_prime", 1000, 2000, 1e-9)

# %%
flat = MollifierSpec("prime_twisted", c=0.0)
for alpha in (0.25, 0.5, 1.0, 1.5):
    print(alpha, empirical_h(zeros, flat, alpha, 1, T))

# %% [markdown]
# A divisor mollifier next to its asymptotic formula. At T = 1000 the two are
# not expected to agree quantitatively; both increase with alpha.

# %%
spec = MollifierSpec("divisor", r=2, f=PolyF((1, 7, -1.5)))
for alpha in np.linspace(0.5, 1.5, 5):
    emp = empirical_h(zeros, spec, alpha, 1, T)
    formula = h1_theorem1(alpha, 2, spec.f, "divisor").value
    print(f"{alpha:4.2f}  empirical {emp:.4f}  formula {formula:.4f}")
