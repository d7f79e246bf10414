# %% [markdown]
# # Numerical search for conditional SIC-POVMs
#
# Gradient descent on N unit vectors, minimizing the distance of the frame
# superoperator from A + (n-1)/(N-1) C plus a penalty for overlap with the
# known part. For n - 1 a prime power the algebraic construction exists and
# the optimizer finds an exact solution. For n = 7 (order 6, no planar
# difference set) it is an open question; the runs below only record where
# the descent stalls.

# %%
from condsic import Scheme
from condsic.optim import OptimConfig, search

# %%
rep = search(OptimConfig(2, Scheme.full(2), restarts=4, seed=1))
print("qubit SIC:", rep.best_objective, rep.certificate.overlap_deviation)

# %%
for n in (3, 4, 5, 6):
    rep = search(OptimConfig(n, Scheme.diagonal(n), restarts=2, max_iters=3000, seed=7))
    print(f"n={n}: objective {rep.best_objective:.2e}, converged={rep.converged}, "
          f"certificate passed={rep.certificate is not None and rep.certificate.passed}")

# %% [markdown]
# Exploratory: n = 7 with a small budget (takes ~15 s).

# %%
rep = search(OptimConfig(7, Scheme.diagonal(7), restarts=2, max_iters=3000, seed=7))
print(f"n=7: best objective {rep.best_objective:.4f} per restart {rep.objectives}")
