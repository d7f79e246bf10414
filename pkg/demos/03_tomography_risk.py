# %% [markdown]
# # Monte-Carlo check of the estimation risk
#
# With S shots and linear reconstruction through the canonical dual frame,
# the expected squared Hilbert-Schmidt error of the estimated part is
# T / S, with T = (1/n) Tr F^- - Tr(rho_*^2) averaged over Haar rotations
# of the state. Here we measure it, and compare against a valid but
# non-symmetric POVM for the same task.

# %%
import numpy as np

from condsic import Scheme, build_from_difference_set, canonical_dual, planar_set
from condsic.csic import comparison_povm, dual_cost
from condsic.tomo import SimConfig, run

n = 3
scheme = Scheme.diagonal(n)
P = build_from_difference_set(planar_set(n))
R = canonical_dual(P, scheme)

# %%
res = run(SimConfig(n, scheme, P, "haar-pure", shots=10_000, trials=10_000, seed=42), R)
print(res.summary())
print("z-score:", (res.mean_sq_error - res.theoretical_mean) / res.std_error)

# %% [markdown]
# Error scales as 1/S.

# %%
for S in (100, 400, 1600):
    r = run(SimConfig(n, scheme, P, shots=S, trials=5000, seed=1), R)
    print(f"S={S:5d}  S*mse={S * r.mean_sq_error:.4f}  T={S * r.theoretical_mean:.4f}")

# %% [markdown]
# A comparison POVM: orbit of a perturbed fiducial projector, still
# orthogonal to the diagonal and summing to I, but with uneven overlaps.
# It has a larger Tr F^- and a larger measured error.

# %%
Q = comparison_povm(planar_set(n), 0.3, np.random.default_rng(17))
RQ = canonical_dual(Q, scheme)
print("Tr F^-  csic:", dual_cost(P, R), " comparison:", dual_cost(Q, RQ))
for name, povm, dual in [("csic", P, R), ("comparison", Q, RQ)]:
    r = run(SimConfig(n, scheme, povm, shots=1000, trials=5000, seed=3), dual)
    print(f"{name:>10}: mse={r.mean_sq_error:.3e} +- {r.std_error:.1e}   theory={r.theoretical_mean:.3e}")
