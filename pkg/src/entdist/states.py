"""Example many-qubit states and their reduction to microscopic pair data.

Mixed states are kept as ensembles of pure states; every quantity used
downstream is linear in the density matrix, so weighted averages over the
components are exact and a 2^N x 2^N matrix is never formed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Iterator, Sequence, Union

import numpy as np

from .pairdata import PairData
from .pairmeasures import to_pauli

MAX_QUBITS = 14
MAX_COMPONENTS = 4096
NORM_TOL = 1e-12


class StateFileError(ValueError):
    """Parse error in a state-vector file."""


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size < 2 or 1 << n != amps.size:
            raise ValueError(f"amplitude vector length {amps.size} is not a power of two >= 2")
        if n > MAX_QUBITS:
            raise ValueError(f"{n} qubits exceeds the cap of {MAX_QUBITS}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def components(self) -> Iterator[tuple[float, np.ndarray]]:
        yield 1.0, self.amplitudes


@dataclass(frozen=True)
class EnsembleState:
    weights: tuple
    states: tuple

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        states = tuple(self.states)
        if not states or len(weights) != len(states):
            raise ValueError("need one weight per component and at least one component")
        if len(states) > MAX_COMPONENTS:
            raise ValueError(f"{len(states)} components exceeds the cap of {MAX_COMPONENTS}")
        if any(w <= 0 for w in weights):
            raise ValueError("ensemble weights must be positive")
        if abs(sum(weights) - 1) > NORM_TOL:
            raise ValueError(f"ensemble weights sum to {sum(weights)!r}, not 1")
        if len({s.num_qubits for s in states}) != 1:
            raise ValueError("ensemble components differ in qubit number")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "states", states)

    @property
    def num_qubits(self) -> int:
        return self.states[0].num_qubits

    def components(self) -> Iterator[tuple[float, np.ndarray]]:
        for w, s in zip(self.weights, self.states):
            yield w, s.amplitudes


State = Union[PureState, EnsembleState]


@dataclass(frozen=True)
class Partition:
    """Two disjoint, non-empty, ordered site lists."""

    a_sites: tuple
    b_sites: tuple

    def __post_init__(self):
        a = tuple(int(x) for x in self.a_sites)
        b = tuple(int(x) for x in self.b_sites)
        if not a or not b:
            raise ValueError("both samples must be non-empty")
        if len(set(a)) != len(a) or len(set(b)) != len(b) or set(a) & set(b):
            raise ValueError(f"samples must be disjoint without repeats: {a} | {b}")
        if min(a + b) < 0:
            raise ValueError("site indices must be non-negative")
        object.__setattr__(self, "a_sites", a)
        object.__setattr__(self, "b_sites", b)

    @classmethod
    def halves(cls, n: int, offset: int = 0) -> "Partition":
        """Sites ``offset .. offset+n-1`` against the next ``n`` sites."""
        return cls(range(offset, offset + n), range(offset + n, offset + 2 * n))

    def check(self, num_qubits: int) -> None:
        if max(self.a_sites + self.b_sites) >= num_qubits:
            raise ValueError(f"partition {self} references sites beyond {num_qubits} qubits")


def dicke(N: int, k: int) -> PureState:
    """Equal superposition of all ``N``-qubit basis states with ``k`` ones."""
    if N < 1 or N > MAX_QUBITS:
        raise ValueError(f"N={N} outside 1..{MAX_QUBITS}")
    if not 0 <= k <= N:
        raise ValueError(f"k={k} outside 0..{N}")
    idx = np.arange(1 << N)
    weight = np.zeros(1 << N, dtype=int)
    for bit in range(N):
        weight += (idx >> bit) & 1
    amps = np.where(weight == k, 1.0 / np.sqrt(comb(N, k)), 0.0)
    return PureState(amps)


def generalized_singlet(n: int) -> PureState:
    """Total-spin-zero state of two spin-``n/2`` blocks on sites ``0..n-1`` and ``n..2n-1``.

    The block with ``j`` excitations is the Dicke state ``dicke(n, j)``;
    the amplitude of ``dicke(n, j) (x) dicke(n, n-j)`` is ``(-1)^(n-j)/sqrt(n+1)``.
    """
    if not 1 <= n <= MAX_QUBITS // 2:
        raise ValueError(f"n={n} outside 1..{MAX_QUBITS // 2}")
    psi = np.zeros(1 << (2 * n), dtype=complex)
    for j in range(n + 1):
        # j = s + m excitations in A, s - m = n - j in B, sign (-1)^(s-m)
        psi += (-1) ** (n - j) * np.kron(dicke(n, j).amplitudes, dicke(n, n - j).amplitudes)
    psi /= np.sqrt(n + 1)
    return PureState(psi)


def basis_state(bits: Sequence[int]) -> PureState:
    N = len(bits)
    amps = np.zeros(1 << N, dtype=complex)
    amps[int("".join(str(int(b)) for b in bits), 2)] = 1.0
    return PureState(amps)


def singlet_noise_mixture(n: int, p: float) -> EnsembleState:
    """``p`` of the generalized singlet plus ``1-p`` of n classically anticorrelated pairs.

    Pair ``i`` joins A-site ``i`` with B-site ``n+i``; the noise part is
    ``(x)_i (|01><01| + |10><10|)/2`` written as 2^n equally weighted
    product states.
    """
    if not 1 <= n <= MAX_QUBITS // 2:
        raise ValueError(f"n={n} outside 1..{MAX_QUBITS // 2}")
    if not 0 <= p <= 1:
        raise ValueError(f"p={p} outside [0, 1]")
    weights, states = [], []
    if p > 0:
        weights.append(p)
        states.append(generalized_singlet(n))
    if p < 1:
        w = (1 - p) / 2**n
        for choice in itertools.product((0, 1), repeat=n):
            bits = list(choice) + [1 - c for c in choice]
            weights.append(w)
            states.append(basis_state(bits))
    return EnsembleState(tuple(weights), tuple(states))


def apply_local_unitaries(state: State, unitaries: Sequence[np.ndarray]) -> State:
    """Apply one 2x2 unitary per site."""
    N = state.num_qubits
    if len(unitaries) != N:
        raise ValueError(f"need {N} single-qubit unitaries, got {len(unitaries)}")

    def rotate(vec):
        t = vec.reshape((2,) * N)
        for site, u in enumerate(unitaries):
            t = np.moveaxis(np.tensordot(u, t, axes=([1], [site])), 0, site)
        return PureState(t.reshape(-1) / np.linalg.norm(t))

    if isinstance(state, PureState):
        return rotate(state.amplitudes)
    return EnsembleState(state.weights, tuple(rotate(s.amplitudes) for s in state.states))


def _pair_block(vec: np.ndarray, N: int, alpha: int, beta: int) -> np.ndarray:
    t = np.moveaxis(vec.reshape((2,) * N), (alpha, beta), (0, 1))
    return t.reshape(4, -1)


def pair_reduced_state(state: State, alpha: int, beta: int) -> np.ndarray:
    """4x4 reduced density matrix of sites ``alpha`` (first factor) and ``beta``."""
    N = state.num_qubits
    if alpha == beta:
        raise ValueError("pair sites must differ")
    if not (0 <= alpha < N and 0 <= beta < N):
        raise ValueError(f"sites ({alpha}, {beta}) outside 0..{N - 1}")
    rho = np.zeros((4, 4), dtype=complex)
    for w, vec in state.components():
        m = _pair_block(vec, N, alpha, beta)
        rho += w * (m @ m.conj().T)
    return rho


def extract_pair_data(state: State, partition: Partition) -> PairData:
    """Read off every ``g(alpha)``, ``g(beta)`` and ``h(alpha, beta)`` from pair reductions."""
    partition.check(state.num_qubits)
    A, B = partition.a_sites, partition.b_sites
    g_a = np.zeros((len(A), 3))
    g_b = np.zeros((len(B), 3))
    h = np.zeros((len(A), len(B), 3, 3))
    for i, alpha in enumerate(A):
        for j, beta in enumerate(B):
            c = to_pauli(pair_reduced_state(state, alpha, beta))
            h[i, j] = c.h
            if j == 0:
                g_a[i] = c.g_a
            if i == 0:
                g_b[j] = c.g_b
    return PairData(g_a, g_b, h, A, B)


def write_statevec(path, state: PureState) -> None:
    """Write ``qubits=<N>`` then ``index,re,im`` for every nonzero amplitude."""
    lines = [f"qubits={state.num_qubits}"]
    for i in np.flatnonzero(state.amplitudes):
        a = state.amplitudes[i]
        lines.append(f"{i},{float(a.real)!r},{float(a.imag)!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_statevec(path) -> PureState:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].strip().startswith("qubits="):
        raise StateFileError(f"{path}: line 1: expected header 'qubits=<N>'")
    try:
        N = int(lines[0].strip().split("=", 1)[1])
    except ValueError:
        raise StateFileError(f"{path}: line 1: bad qubit count {lines[0]!r}") from None
    if not 1 <= N <= MAX_QUBITS:
        raise StateFileError(f"{path}: line 1: qubit count {N} outside 1..{MAX_QUBITS}")
    amps = np.zeros(1 << N, dtype=complex)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        try:
            if len(parts) != 3:
                raise ValueError("expected 'index,re,im'")
            idx = int(parts[0])
            val = complex(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise StateFileError(f"{path}: line {lineno}: {exc}") from None
        if not 0 <= idx < 1 << N:
            raise StateFileError(f"{path}: line {lineno}: index {idx} out of range for {N} qubits")
        amps[idx] = val
    try:
        return PureState(amps)
    except ValueError as exc:
        raise StateFileError(f"{path}: {exc}") from None
