# %% [markdown]
# # Conditional SIC-POVMs when the diagonal is known
#
# If the diagonal of an n-level density matrix is known, N = n^2 - n + 1
# measurement outcomes suffice. The orbit of the uniform superposition phi
# under U = Diag(q^a : a in D), q = exp(2 pi i/N), D a planar difference set,
# gives rank-one elements with equal overlaps (n-1)/n^2.

# %%
import numpy as np

from condsic import (
    Scheme,
    build_basis,
    build_from_difference_set,
    canonical_dual,
    certify_csic,
    diagonal_povm,
    frame_superoperator,
    planar_set,
    superop_eigen,
    tetrahedral_sic,
)
from condsic.csic import dual_cost

np.set_printoptions(precision=4, suppress=True)

# %%
n = 3
D = planar_set(n)
P = build_from_difference_set(D)
scheme = Scheme.diagonal(n)
print("difference set:", D.residues, "N =", P.N)
print(certify_csic(P, scheme).table())

# %% [markdown]
# Every normalized element has constant diagonal 1/n, so the outcome
# statistics carry no information about the (already known) diagonal.

# %%
print(np.einsum("kjj->kj", P.normalized).real)

# %% [markdown]
# The frame superoperator in Gell-Mann coordinates has eigenvalue 1 on the
# identity, (n-1)/(N-1) = 1/n on the off-diagonal part and 0 on the known
# diagonal part.

# %%
w, _ = superop_eigen(frame_superoperator(P))
print(w)

# %% [markdown]
# Canonical dual frame and its cost sum_i Tr(F_i) <R_i, R_i> = Tr F^-,
# which equals 1 + (N-1)^2/(n-1) at the optimum.

# %%
R = canonical_dual(P, scheme)
print(dual_cost(P, R), 1 + (P.N - 1) ** 2 / (n - 1))

# %% [markdown]
# The same certificate covers the two classical special cases: the qubit
# SIC-POVM (nothing known) and the diagonal matrix units (off-diagonal known).

# %%
print(certify_csic(tetrahedral_sic(), Scheme.full(2)).table())
print()
print(certify_csic(diagonal_povm(4), Scheme.offdiagonal(4)).table())

# %% [markdown]
# The construction for every n with n - 1 a prime power up to 10.

# %%
for n in (2, 3, 4, 5, 6, 8, 10):
    cert = certify_csic(build_from_difference_set(planar_set(n)), Scheme.diagonal(n), build_basis(n))
    print(f"n={n:2d}  N={cert.N:3d}  passed={cert.passed}  worst={max(cert.deviations.values()):.1e}")
