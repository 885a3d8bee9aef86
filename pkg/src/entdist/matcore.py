"""Dense complex matrix primitives.

Qubit ordering: bit ``m`` of a basis index (``m = 0`` is the most
significant bit) addresses site ``m``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-10

SIGMA_I = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
PAULIS_WITH_ID = (SIGMA_I, SIGMA_X, SIGMA_Y, SIGMA_Z)


class DimensionError(ValueError):
    """Raised when a matrix does not match the declared subsystem dimensions."""


class NotHermitianError(ValueError):
    """Raised when a Hermitian-only routine receives a non-Hermitian matrix."""


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``."""
    return np.kron(_square(a), _square(b))


def kron_all(factors: Sequence) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def _check_dims(rho: np.ndarray, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != rho.shape[0]:
        raise DimensionError(
            f"subsystem dims {dims} do not multiply to matrix dim {rho.shape[0]}"
        )
    return dims


def partial_trace(rho, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Kept subsystems appear in the result in the order they are listed in
    ``keep``.
    """
    rho = _square(rho)
    dims = _check_dims(rho, dims)
    n = len(dims)
    keep = [int(k) for k in keep]
    if len(set(keep)) != len(keep) or any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"invalid subsystem selection {keep} for {n} subsystems")
    drop = [k for k in range(n) if k not in keep]

    t = rho.reshape(dims + dims)
    # bra axes of subsystem k live at n + k
    perm = keep + drop + [n + k for k in keep] + [n + k for k in drop]
    t = t.transpose(perm)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    dd = int(np.prod([dims[k] for k in drop])) if drop else 1
    t = t.reshape(dk, dd, dk, dd)
    return np.einsum("ajbj->ab", t)


def partial_transpose(rho, dims: Sequence[int], subsystems: int | Sequence[int] = 1) -> np.ndarray:
    """Transpose the listed tensor factors of ``rho``.

    ``subsystems`` is a factor index or a collection of them; for the usual
    bipartite case ``dims=[dA, dB]`` pass ``0`` for A or ``1`` for B.
    The operation only permutes entries, so it is exact and an involution.
    """
    rho = _square(rho)
    dims = _check_dims(rho, dims)
    n = len(dims)
    if np.isscalar(subsystems):
        subsystems = [subsystems]
    subsystems = {int(s) for s in subsystems}
    if any(s < 0 or s >= n for s in subsystems):
        raise DimensionError(f"invalid subsystem {sorted(subsystems)} for {n} subsystems")
    perm = list(range(2 * n))
    for s in subsystems:
        perm[s], perm[n + s] = n + s, s
    return rho.reshape(dims + dims).transpose(perm).reshape(rho.shape)


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = _square(m)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def hermitian_eigenvalues(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    m = _square(m)
    if not is_hermitian(m, tol):
        raise NotHermitianError(
            f"matrix is not Hermitian within {tol:g} "
            f"(max deviation {np.max(np.abs(m - m.conj().T)):.3g})"
        )
    # symmetrize so LAPACK sees the exact Hermitian part
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def trace_norm(m, tol: float = HERMITIAN_TOL) -> float:
    """Sum of singular values; for Hermitian input the sum of |eigenvalues|."""
    return float(np.sum(np.abs(hermitian_eigenvalues(m, tol))))
