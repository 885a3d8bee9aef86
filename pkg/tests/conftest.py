import itertools
from functools import reduce

import numpy as np
import pytest

from entdist.matcore import PAULIS, SIGMA_I


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def proj(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


PSI_PLUS = (ket("01") + ket("10")) / np.sqrt(2)
PSI_MINUS = (ket("01") - ket("10")) / np.sqrt(2)
PHI_PLUS = (ket("00") + ket("11")) / np.sqrt(2)


def werner(w: float) -> np.ndarray:
    return (1 - w) * np.eye(4) / 4 + w * proj(PSI_MINUS)


def random_density(rng, dim=4, rank=None) -> np.ndarray:
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_unitary(rng, dim=2) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def naive_partial_trace(rho, n_qubits, keep):
    """Loop over basis strings; no reshapes."""
    keep = list(keep)
    drop = [q for q in range(n_qubits) if q not in keep]
    dk = 2 ** len(keep)
    out = np.zeros((dk, dk), dtype=complex)

    def index(kbits, dbits):
        bits = [0] * n_qubits
        for q, b in zip(keep, kbits):
            bits[q] = b
        for q, b in zip(drop, dbits):
            bits[q] = b
        return int("".join(map(str, bits)), 2)

    kstrings = list(itertools.product((0, 1), repeat=len(keep)))
    for r, kr in enumerate(kstrings):
        for c, kc in enumerate(kstrings):
            for d in itertools.product((0, 1), repeat=len(drop)):
                out[r, c] += rho[index(kr, d), index(kc, d)]
    return out


def site_operator(op, site, n_qubits) -> np.ndarray:
    """Dense ``1 (x) ... op ... (x) 1`` built by explicit Kronecker products."""
    return reduce(np.kron, [op if q == site else SIGMA_I for q in range(n_qubits)])


def collective_dense(sites, n_qubits):
    """Dense sum of Pauli operators over ``sites``, one per direction."""
    return [sum(site_operator(s, q, n_qubits) for q in sites) for s in PAULIS]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
