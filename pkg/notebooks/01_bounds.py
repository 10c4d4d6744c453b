# %% [markdown]
# # Upper bounds at a glance
#
# Every bound in the package is a closed form in (L, k).  The report labels
# which ones are proved and which rest on a conjecture.

# %%
from racforge import bound_report, closed_form_avg_rac_bound

rep = bound_report(7, 2)
for row in rep.to_rows():
    print(f"{row['label']:32s} {row['value']:>22s}  {row['kind']}")

# %% [markdown]
# The layer-counting bound on the classical average case is exact except at
# a couple of cells.  Here is its whole k-row for L = 8.

# %%
print([str(closed_form_avg_rac_bound(8, k)) for k in range(1, 8)])

# %%
# CSV for downstream tools
print(bound_report(5, 3).to_csv())
