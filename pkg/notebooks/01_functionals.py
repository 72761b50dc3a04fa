# %% [markdown]
# # Closed-form h_1
#
# h_1(alpha) compares a mollified second moment summed near zeros of xi' with
# the plain moment. h_1 < 1 forces gaps wider than alpha, h_1 > 1 narrower ones.

# %%
import numpy as np

from xigap import PolyF, UV, c_opt, h1_theorem1, h1_theorem2

# %% [markdown]
# Divisor-twisted mollifier with f(x) = 1 + 7x - 1.5x^2 and r = 2.

# %%
res = h1_theorem1(1.5, 2, PolyF((1, 7, -1.5)), "divisor")
print(res.value, res.terms, res.quad_error)

# %% [markdown]
# Mobius-twisted counterpart on the small-gap side.

# %%
print(h1_theorem1(0.7203, 2, PolyF((1, 4.4, 2.3)), "moebius").value)

# %% [markdown]
# Prime-twisted mollifier: the c-dependence is a ratio of quadratics in c,
# so its two stationary points c_minus, c_plus have closed forms in U, V.

# %%
for alpha in (0.5, 0.796, 1.0, 1.18, 1.5):
    uv = UV(alpha)
    cm, cp = c_opt(alpha)
    print(f"alpha={alpha:5.3f}  U={uv.U:.6f}  V={uv.V:+.6f}  c-={cm:+.4f}  c+={cp:+.4f}  "
          f"h1(c-)={h1_theorem2(alpha, cm).value:.6f}  h1(c+)={h1_theorem2(alpha, cp).value:.6f}")

# %% [markdown]
# The curve h_1(alpha) for a fixed f crosses 1 once.

# %%
alphas = np.linspace(0.5, 2.0, 16)
curve = [h1_theorem1(a, 2, PolyF((1, 7, -1.5)), "divisor").value for a in alphas]
for a, h in zip(alphas, curve):
    print(f"{a:4.2f} {h:.6f}")
