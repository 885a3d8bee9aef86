# %% [markdown]
# # The X-shaped closed form
#
# When every pair state is X shaped, the smallest partial-transpose eigenvalue has a
# closed form. The gap between the collective value and the pairwise mean is the
# gap in a square-root inequality.

# %%
import numpy as np

from entdist import PairData, Partition, extract_pair_data, generalized_singlet
from entdist.collective import prop2_check

# %% [markdown]
# Generalized singlet: constant h_xx across pairs, so the inequality is tight.

# %%
r = prop2_check(extract_pair_data(generalized_singlet(3), Partition.halves(3)))
r.epsilon, r.conditions, r.delta, r.equality_holds

# %% [markdown]
# Hand-built pair data with uneven transverse correlations and a z polarization.

# %%
h = np.zeros((2, 2, 3, 3))
h[..., 0, 0] = h[..., 1, 1] = [[-0.1, -0.3], [-0.2, -0.35]]
h[..., 2, 2] = -0.5
pd = PairData(np.tile([0, 0, 0.2], (2, 1)), np.tile([0, 0, 0.1], (2, 1)), h).validate()
r = prop2_check(pd)
print(r.red1_lhs, "<", r.red1_rhs)
print("E_ab", r.e_ab, "mean", r.e_bar)

# %% [markdown]
# Without any z polarization and with h_xx of one sign the square roots collapse to
# absolute values, so the gap closes even though h_xx varies.

# %%
pd0 = PairData(np.zeros((2, 3)), np.zeros((2, 3)), h).validate()
prop2_check(pd0).delta
