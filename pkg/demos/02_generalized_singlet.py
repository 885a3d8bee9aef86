# %% [markdown]
# # The generalized singlet
#
# Two samples of n spins each, coupled to total spin zero. Correlations are isotropic.

# %%
import numpy as np

from entdist import Partition, collective_moments_from_state, e_ab, generalized_singlet
from entdist.oracle import average_pair_entanglement

# %%
for n in range(1, 6):
    cm = collective_moments_from_state(generalized_singlet(n), Partition.halves(n))
    print(n, np.round(np.diag(cm.t), 12), -(n + 2) / (3 * n), round(e_ab(cm), 12))

# %% [markdown]
# The collective value decays like 1/(2n), while the number of pairs grows like n^2.
# Their product, the total pairwise entanglement, grows linearly.

# %%
for n in range(1, 6):
    cm = collective_moments_from_state(generalized_singlet(n), Partition.halves(n))
    print(n, cm.n_a * cm.n_b * e_ab(cm))

# %% [markdown]
# Every individual pair carries the same negativity, so nothing is lost by averaging.

# %%
rep = average_pair_entanglement(generalized_singlet(4), Partition.halves(4))
sorted(set(np.round(list(rep.per_pair.values()), 12))), rep.e_ab
