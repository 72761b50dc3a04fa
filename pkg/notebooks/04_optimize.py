# %% [markdown]
# # Searching for the extremal alpha
#
# For each alpha the coefficients of f are optimized (Nelder-Mead with seeded
# restarts); an outer scan plus bisection finds the last alpha on the right
# side of 1.

# %%
from xigap import optimize_theorem1, optimize_theorem2

# %%
large = optimize_theorem1("large_gap", r=2, degree=2, restarts=20, seed=0)
print(large.best_alpha, large.h1_at_best, large.parameters, large.label)

# %%
small = optimize_theorem1("small_gap", r=2, degree=2, restarts=20, seed=0)
print(small.best_alpha, small.h1_at_best, small.parameters, small.label)

# %% [markdown]
# The prime-twisted family has a single parameter c, set to its stationary point.

# %%
for direction in ("large_gap", "small_gap"):
    rep = optimize_theorem2(direction)
    print(direction, rep.best_alpha, rep.h1_at_best, rep.parameters)

# %% [markdown]
# Restart trace at the best alpha: each entry is a restart and the running best h_1.

# %%
for step in large.trace[-5:]:
    print(step)
