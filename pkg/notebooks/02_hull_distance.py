# %% [markdown]
# # Chebyshev distance to a convex hull
#
# The worst-case success of a classical code is governed by how far each
# input string sits from the convex hull of the codebook, measured in the
# max-norm.  The LP is solved by the built-in simplex, either in floating
# point or with exact rationals.

# %%
from racforge import Codebook, cheb_dist_to_hull

S = Codebook.even_parity(3)
print("codebook:", S.strings())
for b in ["100", "111"]:
    res = cheb_dist_to_hull(b, S, exact=True)
    print(b, "distance", res.distance, "weights", [str(w) for w in res.weights])

# %% [markdown]
# The weights are a probability vector over codewords and reproduce the
# closest hull point.

# %%
import numpy as np

res = cheb_dist_to_hull("100", S)
pts = np.array([s.bits for s in S], dtype=float)
print(np.asarray(res.weights) @ pts, "vs", (1, 0, 0))

# %% [markdown]
# A general LP can also be handed to the solver directly.

# %%
from racforge.lp import LinearProgram, solve_lp

lp = LinearProgram(c=[1, 1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6], maximize=True)
print(solve_lp(lp, exact=True))
