"""Lower bounds on pairwise entanglement between two spin-1/2 samples from
collective spin observables, with a brute-force pair-by-pair oracle."""

from .collective import (
    CollectiveMoments,
    Prop2Report,
    PropositionViolation,
    collective_moments,
    collective_moments_from_state,
    cut_negativities,
    e_ab,
    mu_pair,
    nu_virtual,
    prop2_check,
    prop2_epsilon,
    singlet_mixture_moments,
    virtual_state,
    virtual_state_multi,
)
from .oracle import BoundReport, Verdict, average_pair_entanglement, verify_pairdata, verify_propositions
from .pairdata import PairData, read_pairdata, write_pairdata
from .pairmeasures import PauliCoefficients, concurrence, from_pauli, is_physical, negativity, to_pauli
from .states import (
    EnsembleState,
    Partition,
    PureState,
    dicke,
    extract_pair_data,
    generalized_singlet,
    pair_reduced_state,
    read_statevec,
    singlet_noise_mixture,
    write_statevec,
)

__version__ = "0.1.0"
