# %% [markdown]
# # Dicke states
#
# A Dicke state spreads k excitations symmetrically over N qubits. Split it into two
# samples of n sites each and compute the entanglement of the virtual pair state built
# from collective moments alone.

# %%
import numpy as np

from entdist import Partition, collective_moments_from_state, dicke, e_ab
from entdist.oracle import average_pair_entanglement

# %% [markdown]
# Half filling gives the same value for every sample size n, namely 1/(2(N-1)).

# %%
for N in (4, 6, 8):
    vals = [e_ab(collective_moments_from_state(dicke(N, N // 2), Partition.halves(n))) for n in range(1, N // 2 + 1)]
    print(N, np.round(vals, 12), 1 / (2 * (N - 1)))

# %% [markdown]
# Scan the excitation number. The maximum sits at k = N/2 and both ends are product states.

# %%
N = 8
part = Partition.halves(4)
for k in range(N + 1):
    print(k, round(e_ab(collective_moments_from_state(dicke(N, k), part)), 6))

# %% [markdown]
# Because the state is permutation symmetric every pair looks the same, so the mean
# pairwise negativity equals the collective value.

# %%
rep = average_pair_entanglement(dicke(6, 2), Partition.halves(3))
rep.e_ab, rep.e_bar, rep.margin
