"""Two-qubit states in Pauli-coefficient form and their entanglement measures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matcore import PAULIS, SIGMA_I, SIGMA_Y, hermitian_eigenvalues, partial_transpose, trace_norm

PHYSICAL_TOL = 1e-9
COEFF_SLACK = 1e-12

# sigma_k (x) 1, 1 (x) sigma_l and sigma_k (x) sigma_l, indexed by k, l in 0..2
_A_OPS = np.array([np.kron(s, SIGMA_I) for s in PAULIS])
_B_OPS = np.array([np.kron(SIGMA_I, s) for s in PAULIS])
_AB_OPS = np.array([[np.kron(sk, sl) for sl in PAULIS] for sk in PAULIS])
_YY = np.kron(SIGMA_Y, SIGMA_Y)
_RANK_CUTOFF = 1e-13


class UnphysicalStateError(ValueError):
    """Raised when a density matrix has a negative eigenvalue beyond tolerance."""


@dataclass(frozen=True)
class PauliCoefficients:
    """Bloch vectors ``g_a``, ``g_b`` and correlation tensor ``h`` of a qubit pair."""

    g_a: np.ndarray
    g_b: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        g_a = np.asarray(self.g_a, dtype=float).reshape(3)
        g_b = np.asarray(self.g_b, dtype=float).reshape(3)
        h = np.asarray(self.h, dtype=float).reshape(3, 3)
        for name, arr in (("g_a", g_a), ("g_b", g_b), ("h", h)):
            if np.any(np.abs(arr) > 1 + COEFF_SLACK):
                raise ValueError(f"{name} has entries outside [-1, 1]: {arr.tolist()}")
        object.__setattr__(self, "g_a", g_a)
        object.__setattr__(self, "g_b", g_b)
        object.__setattr__(self, "h", h)


def from_pauli(c: PauliCoefficients) -> np.ndarray:
    """Build ``1/4 [1 + g_a.sigma (x) 1 + 1 (x) g_b.sigma + sum h_kl sigma_k (x) sigma_l]``."""
    rho = np.eye(4, dtype=complex)
    rho += np.tensordot(c.g_a, _A_OPS, axes=1)
    rho += np.tensordot(c.g_b, _B_OPS, axes=1)
    rho += np.tensordot(c.h, _AB_OPS, axes=2)
    return rho / 4


def to_pauli(rho) -> PauliCoefficients:
    rho = np.asarray(rho, dtype=complex)
    g_a = np.real(np.einsum("kij,ji->k", _A_OPS, rho))
    g_b = np.real(np.einsum("kij,ji->k", _B_OPS, rho))
    h = np.real(np.einsum("klij,ji->kl", _AB_OPS, rho))
    return PauliCoefficients(g_a, g_b, h)


def is_physical(rho, tol: float = PHYSICAL_TOL) -> tuple[bool, float]:
    """Return ``(min_eig >= -tol, min_eig)``."""
    lo = float(hermitian_eigenvalues(rho)[0])
    return lo >= -tol, lo


def _require_physical(rho, tol: float) -> None:
    ok, lo = is_physical(rho, tol)
    if not ok:
        raise UnphysicalStateError(f"state has eigenvalue {lo:.3g} < -{tol:g}")


def negativity(rho, tol: float = PHYSICAL_TOL) -> float:
    """Modulus of the sum of negative eigenvalues of the partial transpose."""
    _require_physical(rho, tol)
    ev = hermitian_eigenvalues(partial_transpose(rho, [2, 2], 1))
    return float(np.sum(np.abs(ev[ev < 0])))


def negativity_trace_norm(rho) -> float:
    """``(||rho^pT||_1 - 1) / 2``; kept as an independent route for checks."""
    return (trace_norm(partial_transpose(rho, [2, 2], 1)) - 1.0) / 2.0


def negativity_across(rho, dims: Sequence[int], subsystems: Sequence[int]) -> float:
    """Negativity of a multipartite state across the cut ``subsystems | rest``."""
    ev = hermitian_eigenvalues(partial_transpose(rho, dims, subsystems))
    return float(np.sum(np.abs(ev[ev < 0])))


def concurrence(rho, tol: float = PHYSICAL_TOL) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the square roots of the eigenvalues of
    ``rho (sy x sy) rho* (sy x sy)``. Writing ``rho = A A^dagger`` they are
    the singular values of ``A^T (sy x sy) A``, which an SVD resolves to
    absolute precision even when ``rho`` is rank deficient.
    """
    rho = np.asarray(rho, dtype=complex)
    _require_physical(rho, tol)
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    # eigenvalue noise around zero would otherwise enter as its square root
    w = np.where(w > _RANK_CUTOFF * max(w[-1], 0.0), w, 0.0)
    a = v * np.sqrt(w)
    lam = np.linalg.svd(a.T @ _YY @ a, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_direct(rho) -> float:
    """Concurrence from the non-Hermitian product, straight from the definition."""
    rho = np.asarray(rho, dtype=complex)
    r = rho @ _YY @ rho.conj() @ _YY
    lam = np.sort(np.sqrt(np.abs(np.linalg.eigvals(r))))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


MEASURES = {"negativity": negativity, "concurrence": concurrence}


def get_measure(name: str):
    try:
        return MEASURES[name]
    except KeyError:
        raise ValueError(f"unknown measure {name!r}; choose from {sorted(MEASURES)}") from None
