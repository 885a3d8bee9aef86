"""``entdist`` command line: build example states, run the collective and
brute-force pipelines, and write reports (JSON) or the (s, p) sweep (CSV).

Exit status is 0 when every requested check passes, 1 when a check fails
(a JSON object with ``"ok": false`` and ``"failures"`` is printed), and 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .collective import (
    EQUALITY_TOL,
    collective_moments,
    collective_moments_from_state,
    critical_sample_size,
    e_ab,
    prop2_check,
    singlet_mixture_moments,
    virtual_state,
)
from .oracle import check_bound_on_random_states, verify_pairdata, verify_propositions
from .pairdata import PairDataError, read_pairdata
from .pairmeasures import concurrence, is_physical, negativity
from .states import (
    MAX_QUBITS,
    Partition,
    StateFileError,
    dicke,
    extract_pair_data,
    generalized_singlet,
    read_statevec,
    singlet_noise_mixture,
)

DEFAULT_SEED = 20061
SWEEP_ORACLE_MAX_N = 7


class UsageError(Exception):
    pass


def _sites(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated site indices, got {text!r}")


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--measure", choices=["negativity", "concurrence"], default="negativity")
    common.add_argument("--oracle", action="store_true", help="also run the pair-by-pair brute force")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--out", type=Path, help="write output here instead of stdout")
    common.add_argument("--tolerance", type=_positive, default=EQUALITY_TOL)
    common.add_argument("--strict-paper", action="store_true", help="require equal sample sizes")

    parser = argparse.ArgumentParser(prog="entdist", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dicke", parents=[common], help="Dicke state |N;k>")
    p.add_argument("--total", type=int, required=True)
    p.add_argument("--excitations", type=int, required=True)
    p.add_argument("--sample-size", type=int, required=True)

    p = sub.add_parser("singlet", parents=[common], help="generalized singlet of two spin-n/2 blocks")
    p.add_argument("--sample-size", type=int, required=True)

    p = sub.add_parser("mixture", parents=[common], help="singlet with anticorrelated z-noise")
    p.add_argument("--sample-size", type=int, required=True)
    p.add_argument("--p", type=float, required=True)

    p = sub.add_parser("sweep", parents=[common], help="e_ab over spin length s and mixing p (CSV)")
    p.add_argument("--s-max", type=float, default=25.0)
    p.add_argument("--p-steps", type=int, default=101)

    p = sub.add_parser("analyze", parents=[common], help="state-vector or pair-data file")
    p.add_argument("input", type=Path)
    p.add_argument("--format", choices=["auto", "statevec", "pairdata"], default="auto")
    p.add_argument("--a-sites", type=_sites)
    p.add_argument("--b-sites", type=_sites)

    p = sub.add_parser("verify", parents=[common], help="lower bound on seeded random states")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-qubits", type=int, default=10)
    return parser


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _mat(m: np.ndarray) -> list:
    m = np.asarray(m)
    if np.iscomplexobj(m) and np.all(np.abs(m.imag) < 1e-15):
        m = m.real
    if np.iscomplexobj(m):
        return [[[float(z.real), float(z.imag)] for z in row] for row in m]
    return m.tolist()


def _collective_report(cm, measure: str) -> dict:
    rho = virtual_state(cm)
    out = {
        "moments": cm.to_json(),
        "virtual_state": _mat(rho),
        "e_ab": e_ab(cm, measure),
        "measure": measure,
        "negativity": negativity(rho),
        "concurrence": concurrence(rho),
        "min_eigenvalue": is_physical(rho)[1],
    }
    return out


def _state_report(args, state, partition: Partition, label: dict) -> tuple[dict, list]:
    failures: list[str] = []
    cm = collective_moments_from_state(state, partition, strict_paper=args.strict_paper)
    report = {**label, "a_sites": list(partition.a_sites), "b_sites": list(partition.b_sites),
              **_collective_report(cm, args.measure), "seed": args.seed}
    if args.measure == "concurrence":
        bound = 2 / min(partition_sizes(partition))
        report["concurrence_bound"] = bound
        if report["e_ab"] > bound + args.tolerance:
            failures.append(f"concurrence {report['e_ab']:.12g} exceeds 2/n = {bound:.12g}")
    if args.oracle:
        verdict = verify_propositions(state, partition, args.measure, args.tolerance, args.seed)
        report["oracle"] = verdict.to_json()
        failures.extend(verdict.failures)
    return report, failures


def partition_sizes(partition: Partition) -> tuple[int, int]:
    return len(partition.a_sites), len(partition.b_sites)


def cmd_dicke(args):
    N, k, n = args.total, args.excitations, args.sample_size
    if not 2 <= N <= MAX_QUBITS:
        raise UsageError(f"--total must be in 2..{MAX_QUBITS}")
    if not 0 <= k <= N:
        raise UsageError("--excitations must be in 0..total")
    if not 1 <= n <= N // 2:
        raise UsageError("--sample-size must be in 1..total/2")
    return _state_report(args, dicke(N, k), Partition.halves(n),
                         {"state": "dicke", "total": N, "excitations": k, "sample_size": n})


def cmd_singlet(args):
    n = args.sample_size
    if not 1 <= n <= MAX_QUBITS // 2:
        raise UsageError(f"--sample-size must be in 1..{MAX_QUBITS // 2}")
    return _state_report(args, generalized_singlet(n), Partition.halves(n),
                         {"state": "generalized_singlet", "sample_size": n})


def cmd_mixture(args):
    n, p = args.sample_size, args.p
    if not 1 <= n <= MAX_QUBITS // 2:
        raise UsageError(f"--sample-size must be in 1..{MAX_QUBITS // 2}")
    if not 0 <= p <= 1:
        raise UsageError("--p must be in [0, 1]")
    report, failures = _state_report(args, singlet_noise_mixture(n, p), Partition.halves(n),
                                     {"state": "singlet_noise_mixture", "sample_size": n, "p": p})
    report["n_c"] = critical_sample_size(p)
    if args.oracle:
        report["prop2_equality"] = report["oracle"]["prop2_equality"]
    return report, failures


def sweep_rows(s_max: float, p_steps: int, oracle: bool = False):
    """Yield ``(s, p, e_ab[, e_bar])`` over ``s = 0.5, 1, ..., s_max``."""
    n_max = int(round(2 * s_max))
    for n in range(1, n_max + 1):
        for j in range(p_steps):
            p = j / (p_steps - 1)
            value = e_ab(singlet_mixture_moments(n, p))
            row = [n / 2, p, value]
            if oracle:
                if n <= SWEEP_ORACLE_MAX_N:
                    from .oracle import average_pair_entanglement

                    rep = average_pair_entanglement(singlet_noise_mixture(n, p), Partition.halves(n))
                    row.append(rep.e_bar)
                else:
                    row.append(None)
            yield row


def cmd_sweep(args):
    if args.p_steps < 2:
        raise UsageError("--p-steps must be at least 2")
    if not 0.5 <= args.s_max <= 1e4 or abs(2 * args.s_max - round(2 * args.s_max)) > 1e-12:
        raise UsageError("--s-max must be a half-integer in [0.5, 10000]")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "p", "e_ab"] + (["e_bar"] if args.oracle else []))
    for row in sweep_rows(args.s_max, args.p_steps, args.oracle):
        w.writerow(["" if v is None else format(v, ".12g") for v in row])
    _emit(args, buf.getvalue())
    return None, []


def cmd_analyze(args):
    fmt = args.format
    if fmt == "auto":
        head = args.input.read_text(encoding="utf-8").lstrip()[:1]
        fmt = "pairdata" if head == "{" else "statevec"
    failures: list[str] = []
    if fmt == "pairdata":
        pd = read_pairdata(args.input)
        cm = collective_moments(pd, strict_paper=args.strict_paper)
        report = {"input": str(args.input), "format": fmt, **_collective_report(cm, args.measure),
                  "prop2": prop2_check(pd, equality_tol=args.tolerance).to_json()}
        if args.oracle:
            verdict = verify_pairdata(pd, args.measure, args.tolerance)
            report["oracle"] = verdict.to_json()
            failures.extend(verdict.failures)
        return report, failures

    state = read_statevec(args.input)
    if args.a_sites is None or args.b_sites is None:
        raise UsageError("state-vector input needs --a-sites and --b-sites")
    try:
        partition = Partition(args.a_sites, args.b_sites)
        partition.check(state.num_qubits)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report, failures = _state_report(args, state, partition, {"input": str(args.input), "format": fmt})
    report["prop2"] = prop2_check(extract_pair_data(state, partition),
                                  equality_tol=np.inf).to_json()
    return report, failures


def cmd_verify(args):
    if args.count < 1:
        raise UsageError("--count must be positive")
    if not 2 <= args.max_qubits <= MAX_QUBITS:
        raise UsageError(f"--max-qubits must be in 2..{MAX_QUBITS}")
    rows = check_bound_on_random_states(args.count, args.seed, max_qubits=args.max_qubits,
                                        tol=args.tolerance)
    bad = [r for r in rows if not r["ok"]]
    failures = [f"input {r['index']} ({r['state']}, A={r['a']}, B={r['b']})" for r in bad]
    report = {
        "count": len(rows),
        "seed": args.seed,
        "min_virtual_eigenvalue": min(r["min_eig"] for r in rows),
        "min_margin": {m: min(r[m]["margin"] for r in rows) for m in ("negativity", "concurrence")},
        "failed": len(bad),
    }
    return report, failures


COMMANDS = {
    "dicke": cmd_dicke,
    "singlet": cmd_singlet,
    "mixture": cmd_mixture,
    "sweep": cmd_sweep,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, failures = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"entdist {args.command}: {exc}", file=sys.stderr)
        return 2
    except (StateFileError, PairDataError, ValueError, OSError) as exc:
        sys.stdout.write(json.dumps({"ok": False, "error": str(exc)}) + "\n")
        return 2
    if report is not None:
        report["ok"] = not failures
        if failures:
            report["failures"] = failures
        _emit(args, report)
    elif failures:
        sys.stdout.write(json.dumps({"ok": False, "failures": failures}) + "\n")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
