"""Microscopic single-site and pair data, plus the JSON file format for it.

File layout::

    {"n_a": 2, "n_b": 2,
     "g_a": [[gx, gy, gz], ...],          # n_a rows
     "g_b": [[gx, gy, gz], ...],          # n_b rows
     "h": [{"a": 0, "b": 1, "m": [[...], [...], [...]]}, ...]}   # all n_a*n_b pairs

``a`` and ``b`` index the sites within their sample (0-based).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .pairmeasures import PHYSICAL_TOL, PauliCoefficients, from_pauli, is_physical


class PairDataError(ValueError):
    """Malformed or unphysical pair data."""


@dataclass(frozen=True)
class PairData:
    """Per-site Bloch vectors of samples A and B and all A-B correlation tensors.

    Attributes
    ----------
    g_a : (n_a, 3) array
    g_b : (n_b, 3) array
    h : (n_a, n_b, 3, 3) array
        ``h[i, j, k, l] = <sigma_k^(a_i) sigma_l^(b_j)>``.
    a_sites, b_sites : tuple of int
        Labels of the sites in the originating state, if any.
    """

    g_a: np.ndarray
    g_b: np.ndarray
    h: np.ndarray
    a_sites: tuple = field(default=())
    b_sites: tuple = field(default=())

    def __post_init__(self):
        g_a = np.asarray(self.g_a, dtype=float)
        g_b = np.asarray(self.g_b, dtype=float)
        h = np.asarray(self.h, dtype=float)
        if g_a.ndim != 2 or g_a.shape[1] != 3 or g_b.ndim != 2 or g_b.shape[1] != 3:
            raise PairDataError("g_a and g_b must have shape (n, 3)")
        if h.shape != (len(g_a), len(g_b), 3, 3):
            raise PairDataError(
                f"h must have shape ({len(g_a)}, {len(g_b)}, 3, 3), got {h.shape}"
            )
        if len(g_a) == 0 or len(g_b) == 0:
            raise PairDataError("both samples must be non-empty")
        object.__setattr__(self, "g_a", g_a)
        object.__setattr__(self, "g_b", g_b)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "a_sites", tuple(self.a_sites) or tuple(range(len(g_a))))
        object.__setattr__(self, "b_sites", tuple(self.b_sites) or tuple(range(len(g_b))))

    @property
    def n_a(self) -> int:
        return len(self.g_a)

    @property
    def n_b(self) -> int:
        return len(self.g_b)

    def pair_coefficients(self, i: int, j: int) -> PauliCoefficients:
        return PauliCoefficients(self.g_a[i], self.g_b[j], self.h[i, j])

    def pair_state(self, i: int, j: int) -> np.ndarray:
        return from_pauli(self.pair_coefficients(i, j))

    def validate(self, tol: float = PHYSICAL_TOL) -> "PairData":
        """Check that every implied pair density matrix is physical.

        Raises
        ------
        PairDataError
            Naming the first offending pair.
        """
        for i in range(self.n_a):
            for j in range(self.n_b):
                try:
                    ok, lo = is_physical(self.pair_state(i, j), tol)
                except ValueError as exc:
                    raise PairDataError(f"pair (a={i}, b={j}): {exc}") from None
                if not ok:
                    raise PairDataError(
                        f"pair (a={i}, b={j}) is unphysical: min eigenvalue {lo:.3g}"
                    )
        return self

    def to_json(self) -> dict:
        return {
            "n_a": self.n_a,
            "n_b": self.n_b,
            "g_a": self.g_a.tolist(),
            "g_b": self.g_b.tolist(),
            "h": [
                {"a": i, "b": j, "m": self.h[i, j].tolist()}
                for i in range(self.n_a)
                for j in range(self.n_b)
            ],
        }


def pairdata_from_json(obj: dict, validate: bool = True) -> PairData:
    try:
        n_a, n_b = int(obj["n_a"]), int(obj["n_b"])
        g_a = np.asarray(obj["g_a"], dtype=float)
        g_b = np.asarray(obj["g_b"], dtype=float)
        entries = obj["h"]
    except (KeyError, TypeError, ValueError) as exc:
        raise PairDataError(f"malformed pair data: {exc}") from None
    if g_a.shape != (n_a, 3) or g_b.shape != (n_b, 3):
        raise PairDataError(f"g_a/g_b shapes {g_a.shape}/{g_b.shape} do not match n_a={n_a}, n_b={n_b}")
    h = np.full((n_a, n_b, 3, 3), np.nan)
    for k, e in enumerate(entries):
        try:
            i, j = int(e["a"]), int(e["b"])
            m = np.asarray(e["m"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise PairDataError(f"h entry {k}: {exc}") from None
        if not (0 <= i < n_a and 0 <= j < n_b) or m.shape != (3, 3):
            raise PairDataError(f"h entry {k}: bad indices ({i}, {j}) or matrix shape {m.shape}")
        if not np.all(np.isnan(h[i, j])):
            raise PairDataError(f"h entry {k}: duplicate pair ({i}, {j})")
        h[i, j] = m
    missing = [(i, j) for i in range(n_a) for j in range(n_b) if np.isnan(h[i, j]).any()]
    if missing:
        raise PairDataError(f"missing h for pairs {missing[:5]}{'...' if len(missing) > 5 else ''}")
    try:
        pd = PairData(g_a, g_b, h)
    except ValueError as exc:
        raise PairDataError(str(exc)) from None
    return pd.validate() if validate else pd


def read_pairdata(path, validate: bool = True) -> PairData:
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PairDataError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return pairdata_from_json(obj, validate=validate)


def write_pairdata(path, pd: PairData) -> None:
    Path(path).write_text(json.dumps(pd.to_json(), indent=1) + "\n", encoding="utf-8")
