"""Brute-force average pair entanglement and checks of the bound against it.

The oracle reduces the state to every A-B pair and averages a measure over
the pairs. It never touches :class:`~entdist.collective.CollectiveMoments`;
the collective value it reports for comparison comes from
:func:`~entdist.collective.collective_moments_from_state`, which never
touches a pair reduction.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import unitary_group

from .collective import (
    EQUALITY_TOL,
    Prop2Report,
    PropositionViolation,
    collective_moments_from_state,
    e_ab as collective_e_ab,
    prop2_check,
)
from .pairdata import PairData
from .pairmeasures import PHYSICAL_TOL, get_measure, is_physical
from .states import (
    Partition,
    State,
    apply_local_unitaries,
    dicke,
    extract_pair_data,
    generalized_singlet,
    pair_reduced_state,
    singlet_noise_mixture,
)

SUFFICIENCY_TOL = 1e-9


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ENTDIST_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    items = list(items)
    workers = min(_threads(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


@dataclass(frozen=True)
class BoundReport:
    e_ab: float
    e_bar: float
    per_pair: dict
    measure: str
    seed: Optional[int] = None

    @property
    def margin(self) -> float:
        return self.e_bar - self.e_ab

    def to_json(self) -> dict:
        return {
            "measure": self.measure,
            "e_ab": self.e_ab,
            "e_bar": self.e_bar,
            "margin": self.margin,
            "pairs": [{"a": a, "b": b, "e": e} for (a, b), e in self.per_pair.items()],
            "seed": self.seed,
        }


def _pair_values(pair_states: dict, measure: str) -> dict:
    fn = get_measure(measure)
    keys = list(pair_states)
    vals = _map(lambda k: fn(pair_states[k]), keys)
    return dict(zip(keys, vals))


def average_pair_entanglement(
    state: State, partition: Partition, measure: str = "negativity", seed: Optional[int] = None
) -> BoundReport:
    """Average ``measure`` over all A-B pair reductions, alongside the collective value."""
    partition.check(state.num_qubits)
    pairs = [(a, b) for a in partition.a_sites for b in partition.b_sites]
    reduced = dict(zip(pairs, _map(lambda ab: pair_reduced_state(state, *ab), pairs)))
    per_pair = _pair_values(reduced, measure)
    e_bar = float(np.mean(list(per_pair.values())))
    e_virtual = collective_e_ab(collective_moments_from_state(state, partition), measure)
    return BoundReport(e_virtual, e_bar, per_pair, measure, seed)


def average_pair_entanglement_pairdata(pd: PairData, measure: str = "negativity") -> BoundReport:
    """Same comparison when only microscopic pair data are available."""
    from .collective import collective_moments

    states = {
        (pd.a_sites[i], pd.b_sites[j]): pd.pair_state(i, j)
        for i in range(pd.n_a)
        for j in range(pd.n_b)
    }
    per_pair = _pair_values(states, measure)
    e_bar = float(np.mean(list(per_pair.values())))
    return BoundReport(collective_e_ab(collective_moments(pd), measure), e_bar, per_pair, measure)


@dataclass
class Verdict:
    """Result of checking both statements on one input."""

    report: BoundReport
    prop2: Prop2Report
    prop1: bool
    prop2_equality: Optional[bool]
    sufficiency: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        out = {
            "e_ab": self.report.e_ab,
            "e_bar": self.report.e_bar,
            "margin": self.report.margin,
            "prop1": self.prop1,
            "prop2_equality": self.prop2_equality,
            "sufficiency": self.sufficiency,
            "pairs": self.report.to_json()["pairs"],
            "measure": self.report.measure,
            "seed": self.report.seed,
            "prop2": self.prop2.to_json(),
            "failures": self.failures,
        }
        return out


def _verdict(report: BoundReport, pd: PairData, tol: float) -> Verdict:
    failures = []
    prop1 = report.margin >= -tol
    if not prop1:
        worst = min(report.per_pair, key=report.per_pair.get)
        failures.append(
            f"convexity bound: margin {report.margin:.3g} < -{tol:g} (smallest pair {worst})"
        )
    try:
        p2 = prop2_check(pd, equality_tol=tol)
    except PropositionViolation as exc:
        failures.append(f"X-form check: {exc}")
        p2 = prop2_check(pd, equality_tol=np.inf)

    prop2_equality = None
    if p2.in_form:
        prop2_equality = p2.equality_holds
        if p2.equality_holds and abs(report.margin) > tol:
            failures.append(
                f"X-form check: equality predicted but e_bar - e_ab = {report.margin:.3g}"
            )
        if report.measure == "negativity":
            if abs(p2.e_ab - report.e_ab) > tol:
                failures.append(
                    f"closed form e_ab {p2.e_ab:.12g} != eigen-solver {report.e_ab:.12g}"
                )
            if abs(p2.e_bar - report.e_bar) > tol:
                failures.append(
                    f"closed form e_bar {p2.e_bar:.12g} != eigen-solver {report.e_bar:.12g}"
                )
            if p2.equality_holds is False and p2.delta is not None and p2.delta < -tol:
                failures.append(f"delta {p2.delta:.3g} negative")

    sufficiency = True
    if report.e_ab > SUFFICIENCY_TOL:
        sufficiency = any(v > SUFFICIENCY_TOL for v in report.per_pair.values())
        if not sufficiency:
            failures.append("e_ab > 0 but no pair is entangled")
    return Verdict(report, p2, prop1, prop2_equality, sufficiency, failures)


def verify_propositions(
    state: State,
    partition: Partition,
    measure: str = "negativity",
    tol: float = EQUALITY_TOL,
    seed: Optional[int] = None,
) -> Verdict:
    """Check the lower bound, the equality conditions and sufficiency on ``state``.

    Failures are collected in ``Verdict.failures``, each naming the statement
    that broke; ``Verdict.ok`` is false if there are any.
    """
    report = average_pair_entanglement(state, partition, measure, seed)
    return _verdict(report, extract_pair_data(state, partition), tol)


def verify_pairdata(pd: PairData, measure: str = "negativity", tol: float = EQUALITY_TOL) -> Verdict:
    return _verdict(average_pair_entanglement_pairdata(pd, measure), pd, tol)


# --- randomized inputs ----------------------------------------------------


def random_local_unitaries(num_qubits: int, rng: np.random.Generator) -> list:
    return [unitary_group.rvs(2, random_state=rng) for _ in range(num_qubits)]


def random_partition(num_qubits: int, rng: np.random.Generator) -> Partition:
    """Two random disjoint non-empty site sets, possibly leaving sites out."""
    perm = rng.permutation(num_qubits)
    n_a = int(rng.integers(1, num_qubits))
    n_b = int(rng.integers(1, num_qubits - n_a + 1))
    return Partition(sorted(perm[:n_a].tolist()), sorted(perm[n_a : n_a + n_b].tolist()))


def random_example_state(rng: np.random.Generator, max_qubits: int = 10) -> tuple:
    """An example-family state scrambled by Haar-random single-qubit unitaries.

    Returns ``(state, description)``.
    """
    family = rng.choice(["dicke", "singlet", "mixture"])
    if family == "dicke":
        N = int(rng.integers(2, max_qubits + 1))
        k = int(rng.integers(0, N + 1))
        base, desc = dicke(N, k), f"dicke({N},{k})"
    elif family == "singlet":
        n = int(rng.integers(1, max_qubits // 2 + 1))
        base, desc = generalized_singlet(n), f"generalized_singlet({n})"
    else:
        n = int(rng.integers(1, max_qubits // 2 + 1))
        p = float(rng.uniform())
        base, desc = singlet_noise_mixture(n, p), f"singlet_noise_mixture({n},{p:.6f})"
    return apply_local_unitaries(base, random_local_unitaries(base.num_qubits, rng)), desc


def check_bound_on_random_states(
    count: int, seed: int, measures=("negativity", "concurrence"), max_qubits: int = 10,
    tol: float = EQUALITY_TOL,
) -> list:
    """Run the lower-bound check on ``count`` seeded random inputs.

    Returns one dict per input with the minimum virtual-state eigenvalue and
    the margin for each measure.
    """
    from .collective import virtual_state

    rng = np.random.default_rng(seed)
    rows = []
    for idx in range(count):
        state, desc = random_example_state(rng, max_qubits)
        part = random_partition(state.num_qubits, rng)
        cm = collective_moments_from_state(state, part)
        rho = virtual_state(cm, tol=np.inf)
        _, min_eig = is_physical(rho, PHYSICAL_TOL)
        row = {"index": idx, "state": desc, "a": part.a_sites, "b": part.b_sites,
               "min_eig": min_eig, "seed": seed}
        for m in measures:
            rep = average_pair_entanglement(state, part, m)
            row[m] = {"e_ab": rep.e_ab, "e_bar": rep.e_bar, "margin": rep.margin}
        row["ok"] = min_eig >= -PHYSICAL_TOL and all(row[m]["margin"] >= -tol for m in measures)
        rows.append(row)
    return rows
