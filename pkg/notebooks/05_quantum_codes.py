# %% [markdown]
# # Quantum random access codes
#
# States are built from Pauli strings; each bit is read out by a two-outcome
# projective measurement.  All codes are validated (Hermitian, unit trace,
# positive semidefinite states; POVMs summing to the identity).

# %%
import math

import numpy as np
from racforge import liabotro_qrac, llm1_qrac, qrac_success, tensor_compose
from racforge.quantum import qrac_success_table

for L in range(2, 8):
    avg, worst = qrac_success(llm1_qrac(L))
    print(L, round(avg, 6), round(worst, 6), round(0.5 + 0.5 * math.sqrt((L - 1) / L), 6))

# %% [markdown]
# The (L, L-1) code succeeds with the same probability on every bit of every
# input.

# %%
table = np.asarray(qrac_success_table(llm1_qrac(4)))
print(table.min(), table.max())

# %% [markdown]
# Small codes compose by tensor product: two (2,1) codes give a (4,2) code.

# %%
q = tensor_compose([(liabotro_qrac(2, 1), 2), (liabotro_qrac(2, 1), 2)])
print(q.L, q.k, qrac_success(q))
