# %% [markdown]
# # Singlet mixed with dephased noise
#
# Weight p on the generalized singlet, 1 - p on a product of dephased pairs.
# Above a critical sample size the collective moments see no entanglement at all.

# %%
from entdist import Partition, collective_moments_from_state, e_ab, singlet_noise_mixture
from entdist.cli import sweep_rows
from entdist.collective import critical_sample_size
from entdist.oracle import average_pair_entanglement

# %%
p = 0.6
print("n_c =", critical_sample_size(p))
for n in range(1, 6):
    cm = collective_moments_from_state(singlet_noise_mixture(n, p), Partition.halves(n))
    print(n, round(e_ab(cm), 12), max(0, (1 + p - n * (1 - p)) / (4 * n)))

# %% [markdown]
# The same formula in terms of the continuous parameter s = n/2, as printed by `entdist sweep`.

# %%
rows = list(sweep_rows(s_max=3, p_steps=11))
for s, p, e in rows[10::11]:
    print(s, p, e)

# %% [markdown]
# Below the threshold p < n/(n+2) the pairs that are not partnered still carry a
# positive partial-transpose eigenvalue. The average over pairs then exceeds the
# collective value.

# %%
for p in (0.3, 0.9):
    rep = average_pair_entanglement(singlet_noise_mixture(2, p), Partition.halves(2))
    print(p, rep.e_ab, rep.e_bar)
