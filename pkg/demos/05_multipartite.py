# %% [markdown]
# # More than two samples
#
# With M samples the virtual state lives on M qubits. Its two-qubit marginals are
# the pairwise virtual states.

# %%
import numpy as np

from entdist import Partition, collective_moments_from_state, dicke, virtual_state
from entdist.collective import cut_negativities, virtual_state_multi
from entdist.matcore import partial_trace

# %%
w = dicke(3, 1)
rho = virtual_state_multi(w, [(0,), (1,), (2,)])
marg = partial_trace(rho, [2, 2, 2], [0, 2])
ref = virtual_state(collective_moments_from_state(w, Partition((0,), (2,))))
np.max(np.abs(marg - ref))

# %% [markdown]
# Negativity across every bipartition of the three virtual qubits.

# %%
cut_negativities(rho)

# %% [markdown]
# Four samples of a six-qubit Dicke state, one or two sites each.

# %%
rho4 = virtual_state_multi(dicke(6, 3), [(0,), (1, 2), (3,), (4, 5)])
{k: round(v, 6) for k, v in cut_negativities(rho4).items()}
