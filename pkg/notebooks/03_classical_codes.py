# %% [markdown]
# # Classical codes from codebooks
#
# A codebook S of 2^k strings determines two codes: nearest-codeword
# encoding for the average case, and hull-weight encoding for the worst
# case.  Both share the decoder that outputs the received codeword.

# %%
from racforge import Codebook, avg_success, build_avg_code, build_worst_code, worst_success
from racforge import optimal_L1_code, optimal_LLm1_code

S = Codebook(["0000", "0111", "1011", "1100"])
print("avg code:", avg_success(build_avg_code(S, 2)))
print("worst code:", worst_success(build_worst_code(S, 2)))

# %% [markdown]
# Two families come with closed forms.  Repetition-style (L,1) codes and
# parity-based (L,L-1) codes:

# %%
for L in range(2, 7):
    c1, c2 = optimal_L1_code(L), optimal_LLm1_code(L)
    print(L, avg_success(c1), worst_success(c1), "|", avg_success(c2), worst_success(c2))

# %%
# codes round-trip through JSON
from racforge.codes import ClassicalCode

code = optimal_LLm1_code(4)
again = ClassicalCode.from_json(code.to_json())
print(avg_success(again), worst_success(again))
