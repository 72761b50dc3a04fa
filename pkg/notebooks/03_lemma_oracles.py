# %% [markdown]
# # Arithmetic sums against their main terms
#
# Brute-force sums over divisor and Mobius-type coefficients, compared with
# the asymptotic main terms they are meant to follow.

# %%
import math

from xigap import analytic, arith

tables = arith.get_tables(2 * 10**6)

# %% [markdown]
# Sum of mu_r(n)/n log-type weights: ratio to -r log x.

# %%
for x in (10**4, 10**5, 10**6):
    print(x, arith.lemma6_sum(x, 0, 2, tables) / (-2 * math.log(x)))

# %% [markdown]
# Twisted divisor sum: the ratio to its main term drifts towards 1 slowly.

# %%
for y in (10**3, 10**4.5, 10**6):
    print(y, arith.lemma1_sum(y, 2, tables) / arith.lemma1_main(y, 2))

# %% [markdown]
# xi''/xi' against its truncated Dirichlet expansion, just right of the line.

# %%
T = 100.0
L = math.log(T / (2 * math.pi))
for t in (120.0, 150.0, 180.0):
    s = complex(1 + 1 / L, t)
    lhs = analytic.xi2_over_xi1(s)
    rhs = analytic.aK_rhs(s, N=10**4, K=10, T=T, tables=tables)
    print(t, lhs, rhs, abs(lhs - rhs))
