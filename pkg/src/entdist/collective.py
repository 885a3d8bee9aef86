"""Collective spin moments, the virtual qubit state built from them, and the
closed forms for the negative partial-transpose eigenvalue.

Two routes lead to :class:`CollectiveMoments`: :func:`collective_moments`
sums microscopic :class:`PairData`, while :func:`collective_moments_from_state`
evaluates collective operators directly on a state vector and never looks at
a pair reduction. Units: hbar = 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .matcore import PAULIS, PAULIS_WITH_ID, kron_all
from .pairdata import PairData
from .pairmeasures import (
    PHYSICAL_TOL,
    PauliCoefficients,
    UnphysicalStateError,
    from_pauli,
    get_measure,
    is_physical,
    negativity_across,
)
from .states import Partition, State

ZERO_TOL = 1e-10
MU_TOL = 1e-12
EQUALITY_TOL = 1e-9


class PropositionViolation(AssertionError):
    """A numerically checked statement about the bound failed."""


@dataclass(frozen=True)
class CollectiveMoments:
    """Collective expectations ``S_a``, ``S_b`` and correlations ``T`` (hbar = 1)."""

    S_a: np.ndarray
    S_b: np.ndarray
    T: np.ndarray
    n_a: int
    n_b: int

    def __post_init__(self):
        for name, shape in (("S_a", (3,)), ("S_b", (3,)), ("T", (3, 3))):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).reshape(shape))
        if self.n_a < 1 or self.n_b < 1:
            raise ValueError("sample sizes must be positive")

    @property
    def s_a(self) -> np.ndarray:
        return 2 * self.S_a / self.n_a

    @property
    def s_b(self) -> np.ndarray:
        return 2 * self.S_b / self.n_b

    @property
    def t(self) -> np.ndarray:
        return 4 * self.T / (self.n_a * self.n_b)

    @classmethod
    def from_normalized(cls, s_a, s_b, t, n_a: int, n_b: int) -> "CollectiveMoments":
        return cls(
            np.asarray(s_a, float) * n_a / 2,
            np.asarray(s_b, float) * n_b / 2,
            np.asarray(t, float) * n_a * n_b / 4,
            n_a,
            n_b,
        )

    def to_json(self) -> dict:
        return {
            "n_a": self.n_a,
            "n_b": self.n_b,
            "S_a": self.S_a.tolist(),
            "S_b": self.S_b.tolist(),
            "T": self.T.tolist(),
            "s_a": self.s_a.tolist(),
            "s_b": self.s_b.tolist(),
            "t": self.t.tolist(),
        }


def _check_sizes(n_a: int, n_b: int, strict_paper: bool) -> None:
    if strict_paper and n_a != n_b:
        raise ValueError(f"strict mode requires equal sample sizes, got {n_a} and {n_b}")


def collective_moments(pd: PairData, strict_paper: bool = False) -> CollectiveMoments:
    """``S_i = 1/2 sum g_i``, ``T_ij = 1/4 sum h_ij`` over the samples."""
    _check_sizes(pd.n_a, pd.n_b, strict_paper)
    return CollectiveMoments(
        0.5 * pd.g_a.sum(axis=0),
        0.5 * pd.g_b.sum(axis=0),
        0.25 * pd.h.sum(axis=(0, 1)),
        pd.n_a,
        pd.n_b,
    )


def _apply_collective(vec: np.ndarray, N: int, sites: Sequence[int], op: np.ndarray) -> np.ndarray:
    """``(sum_{m in sites} op^(m)) |vec>``."""
    t = vec.reshape((2,) * N)
    out = np.zeros_like(t)
    for m in sites:
        out += np.moveaxis(np.tensordot(op, t, axes=([1], [m])), 0, m)
    return out.reshape(-1)


def collective_moments_from_state(
    state: State, partition: Partition, strict_paper: bool = False
) -> CollectiveMoments:
    """Expectation values of the collective operators, evaluated on the full state."""
    N = state.num_qubits
    partition.check(N)
    A, B = partition.a_sites, partition.b_sites
    _check_sizes(len(A), len(B), strict_paper)
    S_a = np.zeros(3)
    S_b = np.zeros(3)
    T = np.zeros((3, 3))
    for w, vec in state.components():
        a_vecs = [_apply_collective(vec, N, A, s) for s in PAULIS]
        b_vecs = [_apply_collective(vec, N, B, s) for s in PAULIS]
        for i in range(3):
            S_a[i] += w * 0.5 * np.vdot(vec, a_vecs[i]).real
            S_b[i] += w * 0.5 * np.vdot(vec, b_vecs[i]).real
            for j in range(3):
                # S^A_i and S^B_j commute and are Hermitian
                T[i, j] += w * 0.25 * np.vdot(a_vecs[i], b_vecs[j]).real
    return CollectiveMoments(S_a, S_b, T, len(A), len(B))


def virtual_state(cm: CollectiveMoments, tol: float = PHYSICAL_TOL) -> np.ndarray:
    """Two-qubit density matrix whose Pauli coefficients are the normalized moments.

    Raises
    ------
    UnphysicalStateError
        If the matrix has an eigenvalue below ``-tol``, which means the moments
        cannot come from any global state.
    """
    try:
        rho = from_pauli(PauliCoefficients(cm.s_a, cm.s_b, cm.t))
    except ValueError as exc:
        raise UnphysicalStateError(f"inconsistent collective moments: {exc}") from None
    ok, lo = is_physical(rho, tol)
    if not ok:
        raise UnphysicalStateError(
            f"virtual state has eigenvalue {lo:.3g}; collective moments are inconsistent"
        )
    return rho


def e_ab(cm: CollectiveMoments, measure: str = "negativity") -> float:
    """Pairwise collective entanglement: the measure evaluated on :func:`virtual_state`."""
    return get_measure(measure)(virtual_state(cm))


def singlet_mixture_moments(n: int, p: float) -> CollectiveMoments:
    """Closed-form moments of the singlet/anticorrelated-noise mixture.

    ``t_xx = t_yy = -p (n+2) / (3n)``, ``t_zz = -p (n-1)/(3n) - 1/n``; all
    other moments vanish. Valid for any ``n >= 1``.
    """
    t_perp = -p * (n + 2) / (3 * n)
    t_zz = -p * (n - 1) / (3 * n) - 1 / n
    return CollectiveMoments.from_normalized(
        np.zeros(3), np.zeros(3), np.diag([t_perp, t_perp, t_zz]), n, n
    )


def critical_sample_size(p) -> Optional[int]:
    """Smallest ``n`` at which the mixture stops showing collective entanglement.

    ``ceil((1 + p) / (1 - p))``, evaluated in exact rational arithmetic on
    the decimal form of ``p``; ``None`` for ``p = 1`` (never).
    """
    q = Fraction(str(p)) if isinstance(p, float) else Fraction(p)
    if q == 1:
        return None
    return math.ceil((1 + q) / (1 - q))


# --- closed forms for the X-shaped states --------------------------------


def prop2_epsilon(pd: PairData, tol: float = ZERO_TOL) -> Optional[int]:
    """Sign ``eps`` with ``h_xx = eps h_yy`` and ``eps h_zz <= 0`` on every pair.

    ``h_zz = 0`` is accepted for either sign, so when all ``h_xx = h_yy = 0``
    the sign of ``h_zz`` decides. ``None`` if no sign fits, or if both do
    (every ``h_xx``, ``h_yy``, ``h_zz`` vanishes).
    """
    hxx, hyy, hzz = pd.h[..., 0, 0], pd.h[..., 1, 1], pd.h[..., 2, 2]
    fits = [
        eps
        for eps in (1, -1)
        if np.all(np.abs(hxx - eps * hyy) <= tol) and np.all(eps * hzz <= tol)
    ]
    return fits[0] if len(fits) == 1 else None


def prop2_conditions(pd: PairData, tol: float = ZERO_TOL) -> dict:
    """Evaluate the four structural conditions separately."""
    g_z_a, g_z_b = pd.g_a[:, 2], pd.g_b[:, 2]
    cond_i = bool(np.ptp(g_z_a) <= tol and np.ptp(g_z_b) <= tol)
    eps = prop2_epsilon(pd, tol)
    offdiag = pd.h[..., ~np.eye(3, dtype=bool)]
    cond_iv = bool(
        np.all(np.abs(pd.g_a[:, :2]) <= tol)
        and np.all(np.abs(pd.g_b[:, :2]) <= tol)
        and np.all(np.abs(offdiag) <= tol)
    )
    hxx, hyy, hzz = pd.h[..., 0, 0], pd.h[..., 1, 1], pd.h[..., 2, 2]
    if eps is None:
        cond_ii = any(np.all(np.abs(hxx - e * hyy) <= tol) for e in (1, -1))
        cond_iii = False
    else:
        cond_ii = True
        cond_iii = bool(np.all(eps * hzz <= tol))
    return {"i": cond_i, "ii": bool(cond_ii), "iii": cond_iii, "iv": cond_iv, "epsilon": eps}


def mu_pair(g_z_a: float, g_z_b: float, h_xx: float, h_zz: float, eps: int) -> float:
    """Only eigenvalue of a single X-shaped pair's partial transpose that can be negative."""
    return 0.25 * (1 - np.sqrt((g_z_a + eps * g_z_b) ** 2 + 4 * h_xx**2) + eps * h_zz)


def nu_virtual(cm: CollectiveMoments, eps: int) -> float:
    """Same eigenvalue for the virtual state, from the normalized moments."""
    s_a, s_b, t = cm.s_a, cm.s_b, cm.t
    return 0.25 * (1 - np.sqrt((s_a[2] + eps * s_b[2]) ** 2 + 4 * t[0, 0] ** 2) + eps * t[2, 2])


@dataclass(frozen=True)
class Prop2Report:
    """Outcome of the structural check and closed-form comparison.

    ``delta = nu - mean(mu)`` equals the gap between the two sides of the
    square-root averaging inequality (``red1_rhs - red1_lhs``, divided by 4).
    """

    epsilon: Optional[int]
    conditions: dict
    mu: Optional[np.ndarray]
    nu: Optional[float]
    delta: Optional[float]
    red1_lhs: Optional[float]
    red1_rhs: Optional[float]
    h_xx_constant: bool
    e_ab: Optional[float]
    e_bar: Optional[float]
    equality_holds: bool

    @property
    def in_form(self) -> bool:
        return all(self.conditions[k] for k in ("i", "ii", "iii", "iv"))

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "conditions": {k: self.conditions[k] for k in ("i", "ii", "iii", "iv")},
            "mu": None if self.mu is None else self.mu.tolist(),
            "nu": self.nu,
            "delta": self.delta,
            "red1": None if self.red1_lhs is None else [self.red1_lhs, self.red1_rhs],
            "h_xx_constant": self.h_xx_constant,
            "e_ab": self.e_ab,
            "e_bar": self.e_bar,
            "equality_holds": self.equality_holds,
        }


def prop2_check(pd: PairData, tol: float = ZERO_TOL, equality_tol: float = EQUALITY_TOL) -> Prop2Report:
    """Check the X-shape conditions and compare per-pair and collective closed forms.

    When the conditions hold, ``e_ab = |min(0, nu)|`` and
    ``e_bar = mean |min(0, mu)|``. Equality is claimed iff every ``mu <= 0``
    and ``h_xx`` is the same on every pair; the claim is then checked.

    Raises
    ------
    PropositionViolation
        If equality is claimed but ``|e_ab - e_bar| > equality_tol``, or if
        ``delta < -equality_tol``.
    """
    cond = prop2_conditions(pd, tol)
    eps = cond["epsilon"]
    hxx = pd.h[..., 0, 0]
    h_const = bool(np.ptp(hxx) <= tol)
    if not all(cond[k] for k in ("i", "ii", "iii", "iv")):
        return Prop2Report(eps, cond, None, None, None, None, None, h_const, None, None, False)

    g_z_a, g_z_b = pd.g_a[:, 2], pd.g_b[:, 2]
    mu = mu_pair(g_z_a[:, None], g_z_b[None, :], hxx, pd.h[..., 2, 2], eps)
    nu = float(nu_virtual(collective_moments(pd), eps))
    delta = nu - float(mu.mean())
    c = g_z_a.mean() + eps * g_z_b.mean()
    t_xx = hxx.mean()
    red1_lhs = float(np.sqrt(c**2 + 4 * t_xx**2))
    red1_rhs = float(np.mean(np.sqrt(c**2 + 4 * hxx**2)))
    e_virtual = abs(min(0.0, nu))
    e_bar = float(np.mean(np.abs(np.minimum(0.0, mu))))
    equality = bool(np.all(mu <= MU_TOL) and h_const)
    if delta < -equality_tol:
        raise PropositionViolation(f"delta = {delta:.3g} is negative")
    if equality and abs(e_virtual - e_bar) > equality_tol:
        raise PropositionViolation(
            f"equality claimed but e_ab = {e_virtual:.12g}, e_bar = {e_bar:.12g}"
        )
    return Prop2Report(
        eps, cond, mu, nu, delta, red1_lhs, red1_rhs, h_const, e_virtual, e_bar, equality
    )


# --- more than two samples -------------------------------------------------


def virtual_state_multi(state: State, samples: Sequence[Sequence[int]]) -> np.ndarray:
    """Density matrix of M virtual qubits, one per sample.

    The coefficient of ``sigma_{i_1} (x) ... (x) sigma_{i_M}`` is the
    expectation of the product of normalized collective operators
    ``(1/n_m) sum sigma_{i_m}`` over the samples with ``i_m != 0``;
    identity slots contribute 1.
    """
    samples = [tuple(int(x) for x in s) for s in samples]
    M = len(samples)
    if not 2 <= M <= 4:
        raise ValueError(f"need 2..4 samples, got {M}")
    flat = [x for s in samples for x in s]
    if any(len(s) == 0 for s in samples) or len(set(flat)) != len(flat):
        raise ValueError("samples must be non-empty and disjoint")
    N = state.num_qubits
    if max(flat) >= N or min(flat) < 0:
        raise ValueError(f"sample sites outside 0..{N - 1}")

    coeffs = np.zeros((4,) * M)
    for w, vec in state.components():
        # depth-first over the operator slots, reusing partial products
        def descend(m, v, idx):
            if m == M:
                coeffs[idx] += w * np.vdot(vec, v).real
                return
            for i, op in enumerate(PAULIS_WITH_ID):
                if i == 0:
                    descend(m + 1, v, idx + (0,))
                else:
                    u = _apply_collective(v, N, samples[m], op) / len(samples[m])
                    descend(m + 1, u, idx + (i,))

        descend(0, vec, ())

    rho = np.zeros((2**M, 2**M), dtype=complex)
    for idx in itertools.product(range(4), repeat=M):
        if coeffs[idx] != 0:
            rho += coeffs[idx] * kron_all([PAULIS_WITH_ID[i] for i in idx])
    return rho / 2**M


def cut_negativities(rho: np.ndarray) -> dict:
    """Negativity across every bipartition of an M-qubit state.

    Keys are tuples of the qubits on the side containing qubit 0.
    """
    M = int(np.log2(rho.shape[0]))
    out = {}
    rest = range(1, M)
    for r in range(0, M - 1):
        for extra in itertools.combinations(rest, r):
            side = (0,) + extra
            out[side] = negativity_across(rho, [2] * M, side)
    return out
