# %% [markdown]
# # Searching for optimal codebooks
#
# Average case: minimize the mean Hamming distance to the nearest codeword.
# Worst case: minimize the largest hull distance.  Small cases are proven
# optimal by exhaustive search or branch and bound; larger worst-case cells
# use seeded local search.

# %%
from racforge import Budget, search_avg_optimal, search_worst_achievable

res = search_avg_optimal(6, 3, "bnb")
print(res.success_probability, res.optimality, res.S.strings())

# %% [markdown]
# A cold search (no closed-form root bound, no warm start) still proves the
# same value, only with more nodes.

# %%
cold = search_avg_optimal(6, 3, "bnb", root_bound=False, warm_start=False)
print(cold.success_probability, cold.optimality, cold.nodes_explored, "nodes")

# %% [markdown]
# Budgets cap the search.  When they run out the incumbent is returned with an
# achievable-only label.

# %%
r = search_avg_optimal(8, 3, "bnb", Budget(time_limit=5))
print(r.success_probability, r.optimality)

# %%
w = search_worst_achievable(6, 4, "local", seed=1, starts=16)
print(w.success_probability, w.optimality, "certified exact:", w.certified_exact)
print(w.to_json(timing=False))
