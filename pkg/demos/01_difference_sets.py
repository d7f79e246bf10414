# %% [markdown]
# # Planar difference sets
#
# A set D of n residues mod N = n^2 - n + 1 is *planar* when every nonzero
# residue is a difference a - b of exactly one ordered pair from D. These sets
# drive the construction of conditional SIC-POVMs in the next demo.

# %%
from condsic.diffset import LISTED_SETS, DifferenceSet, canonical, certify, equivalent, search, singer

# %% [markdown]
# Certify the commonly listed small sets and print one difference table.

# %%
for n, (N, D) in LISTED_SETS.items():
    print(f"n={n}  N={N}  D={D}  planar: {certify(D, N).passed}")

print(certify([0, 1, 3], 7).table())

# %% [markdown]
# Failing example: {0, 1, 2} hits difference 1 twice and 3 never.

# %%
print(certify([0, 1, 2], 7).counts)

# %% [markdown]
# Exhaustive search. The search fixes {0, 1} in the set (always possible after
# a translation) and returns the lexicographically smallest completion.
# Order 6 (N = 43) has no planar set: the search returns None.

# %%
for N, n in [(7, 3), (13, 4), (21, 5), (31, 6), (43, 7)]:
    print(N, n, search(N, n))

# %% [markdown]
# Singer's construction works for every prime-power order s, through the
# trace-zero hyperplane of GF(s^3). Searching and Singer agree up to
# translation and multiplication by units mod N.

# %%
for s in [2, 3, 4, 5, 7, 8, 9]:
    D = singer(s)
    found = search(D.N, D.n)
    print(f"s={s}: {D.residues}  equivalent to search result: {equivalent(D, found)}")
    print(f"      canonical form {canonical(D.residues, D.N)}")
