"""Command-line front end: experiment presets with CSV/JSON emission.

Commands
========
simulate   run shots of one circuit and report the success-rate record
analytic   closed-form values (success probabilities, runtimes) only
sweep      sampled vs analytic success probability per kappa
resources  gate/qubit/measurement counts per circuit family
bliss      l1 norm and block-encoding success probability before/after BLISS

Exit codes: 0 ok, 1 usage error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import oracle
from .bliss import jordan_wigner, load_fermionic, optimize_bliss
from .circuits import build_w_hk, build_w_tilde, build_w_unary
from .errors import LcusimError
from .hamiltonian import HamiltonianLCU, build_ising, l1_norm, load_hamiltonian
from .resources import count
from .sampler import CostModel, estimate, mean_cost_per_shot, run_shots


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 for usage problems, not argparse's 2
        raise UsageError(message)


def _add_hamiltonian_args(p: _Parser) -> None:
    p.add_argument("--hamiltonian", help="Hamiltonian JSON file")
    p.add_argument("--model", choices=["ising"], help="built-in model preset")
    p.add_argument("--n", type=int, default=4, help="ising sites")
    p.add_argument("--J", type=float, default=1.0)
    p.add_argument("--h", type=float, default=0.5)


def _add_circuit_args(p: _Parser) -> None:
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--kappa", type=int, help="Taylor register width (K = 2^kappa - 1)")
    p.add_argument("--K", type=int, dest="K", help="truncation order")
    p.add_argument("--circuit", choices=["wtilde", "wunary"], default="wtilde")
    p.add_argument("--state", help="file of 2^n system amplitudes, two reals per line")


def _add_cost_args(p: _Parser) -> None:
    p.add_argument("--d", type=float, default=1.0, help="cost per uncontrolled select")
    p.add_argument("--d-ctrl", type=float, default=1.0, help="cost per controlled select")
    p.add_argument("--m", type=float, default=0.0, help="cost per measurement")


def _add_output_args(p: _Parser) -> None:
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> _Parser:
    parser = _Parser(prog="lcusim")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", parents=[], help="run shots of one circuit")
    _add_hamiltonian_args(p_sim)
    _add_circuit_args(p_sim)
    _add_cost_args(p_sim)
    _add_output_args(p_sim)
    p_sim.add_argument("--shots", type=int, default=10_000)
    p_sim.add_argument("--seed", type=int, default=0)

    p_an = sub.add_parser("analytic", help="closed-form oracle values")
    _add_hamiltonian_args(p_an)
    _add_circuit_args(p_an)
    _add_cost_args(p_an)
    _add_output_args(p_an)

    p_sw = sub.add_parser("sweep", help="sampled vs analytic success per kappa")
    _add_hamiltonian_args(p_sw)
    _add_circuit_args(p_sw)
    _add_cost_args(p_sw)
    _add_output_args(p_sw)
    p_sw.add_argument("--kappa-max", type=int, default=3)
    p_sw.add_argument("--shots", type=int, default=10_000)
    p_sw.add_argument("--seed", type=int, default=0)

    p_res = sub.add_parser("resources", help="gate and qubit counts")
    _add_hamiltonian_args(p_res)
    _add_circuit_args(p_res)
    _add_output_args(p_res)
    p_res.add_argument("--K-max", type=int, default=7)

    p_bl = sub.add_parser("bliss", help="l1-norm optimization of a fermionic operator")
    p_bl.add_argument("--fermion-file", required=True, help="FCIDUMP-like text file")
    p_bl.add_argument("--nelec", type=int, help="electron count (default: file header)")
    p_bl.add_argument("--diagonal-only", action="store_true", help="restrict xi to its diagonal")
    _add_output_args(p_bl)
    return parser


def _resolve_hamiltonian(args) -> HamiltonianLCU:
    if args.hamiltonian and args.model:
        raise UsageError("give either --hamiltonian or --model, not both")
    if args.hamiltonian:
        return load_hamiltonian(args.hamiltonian)
    if args.model == "ising":
        return build_ising(args.n, args.J, args.h)
    raise UsageError("a Hamiltonian source is required (--hamiltonian or --model ising)")


def _resolve_kappa(args) -> int:
    if args.kappa is not None and args.K is not None:
        raise UsageError("give either --kappa or --K, not both")
    if args.kappa is not None:
        if args.kappa < 1:
            raise UsageError("--kappa must be at least 1")
        return args.kappa
    if args.K is not None:
        if args.K < 1:
            raise UsageError("--K must be at least 1")
        return max(1, math.ceil(math.log2(args.K + 1)))
    return 2


def _resolve_state(args, n: int) -> np.ndarray:
    if args.state:
        rows = np.loadtxt(args.state, ndmin=2)
        psi = rows[:, 0] + 1j * rows[:, 1]
    else:
        psi = np.zeros(1 << n, dtype=complex)
        psi[0] = 1.0
    return psi


def _build_plan(args, H: HamiltonianLCU):
    kappa = _resolve_kappa(args)
    if args.circuit == "wunary":
        K = args.K if args.K is not None else (1 << kappa) - 1
        return build_w_unary(H, args.tau, K)
    return build_w_tilde(H, args.tau, kappa)


def _stats_row(stats) -> dict:
    p_hat, stderr = estimate(stats)
    hist = ";".join(f"{k}:{v}" for k, v in sorted(stats.abort_histogram.items()))
    return {
        "shots": stats.shots,
        "successes": stats.successes,
        "p_hat": p_hat,
        "stderr": stderr,
        "abort_histogram": hist,
        "mean_cost": mean_cost_per_shot(stats),
    }


def cmd_simulate(args) -> list[dict]:
    H = _resolve_hamiltonian(args)
    plan = _build_plan(args, H)
    psi = _resolve_state(args, H.n)
    cost = CostModel(d=args.d, d_ctrl=args.d_ctrl, m=args.m)
    stats = run_shots(plan, psi, args.shots, args.seed, cost)
    row = {"circuit": args.circuit, "K": plan.select_count, "tau": args.tau}
    row.update(_stats_row(stats))
    return [row]


def cmd_analytic(args) -> list[dict]:
    H = _resolve_hamiltonian(args)
    kappa = _resolve_kappa(args)
    K = args.K if args.K is not None else (1 << kappa) - 1
    psi = _resolve_state(args, H.n)
    p_w = oracle.success_prob_wtilde(H, psi, args.tau, K)
    p_chain = oracle.chain_probabilities(H, psi, K)
    return [
        {
            "K": K,
            "kappa": kappa,
            "tau": args.tau,
            "l1_norm": l1_norm(H),
            "p_wtilde": p_w,
            "p_hk": oracle.success_prob_hk(H, psi, K),
            "expected_runtime_hk": oracle.expected_runtime_midmeasure(p_chain, args.d),
            "total_runtime_hk": oracle.total_runtime_success(p_chain, args.d),
            "runtime_upper_bound": oracle.runtime_upper_bound(H, psi, args.tau, K, args.d_ctrl),
        }
    ]


def cmd_sweep(args) -> list[dict]:
    H = _resolve_hamiltonian(args)
    psi = _resolve_state(args, H.n)
    cost = CostModel(d=args.d, d_ctrl=args.d_ctrl, m=args.m)
    rows = []
    for kappa in range(1, args.kappa_max + 1):
        K = (1 << kappa) - 1
        plan = build_w_tilde(H, args.tau, kappa)
        stats = run_shots(plan, psi, args.shots, args.seed, cost)
        row = {"K": K, "kappa": kappa}
        row.update(_stats_row(stats))
        row["p_analytic"] = oracle.success_prob_wtilde(H, psi, args.tau, K)
        rows.append(row)
    return rows


def cmd_resources(args) -> list[dict]:
    H = _resolve_hamiltonian(args)
    rows = []
    for K in range(1, args.K_max + 1):
        kappa = max(1, math.ceil(math.log2(K + 1)))
        for family, plan in (
            ("wtilde", build_w_tilde(H, args.tau, kappa)),
            ("wunary", build_w_unary(H, args.tau, K)),
        ):
            c = count(plan)
            rows.append(
                {
                    "family": family,
                    "K": K,
                    "kappa": kappa,
                    "qubits": c.qubits,
                    "two_qubit": c.two_qubit,
                    "measurements": c.measurements,
                }
            )
    return rows


def cmd_bliss(args) -> list[dict]:
    F, ne_file = load_fermionic(args.fermion_file)
    ne = args.nelec if args.nelec is not None else ne_file
    before = jordan_wigner(F)
    result = optimize_bliss(F, ne, include_offdiag=not args.diagonal_only)
    after = result.hamiltonian

    def block_success(H):
        # <psi| Htilde^dag Htilde |psi> on the JW particle-number state
        # occupying the lowest ne orbitals
        psi = np.zeros(1 << H.n, dtype=complex)
        psi[(1 << ne) - 1] = 1.0
        return oracle.success_prob_hk(H, psi, 1)

    return [
        {
            "n_orb": F.n_orb,
            "n_electrons": ne,
            "l1_before": l1_norm(before),
            "l1_after": l1_norm(after),
            "L_before": before.num_terms,
            "L_after": after.num_terms,
            "p_before": block_success(before),
            "p_after": block_success(after),
            "xi0": result.params.xi0,
            "converged": result.converged,
        }
    ]


def emit(rows: list[dict], fmt: str, path: str | None) -> None:
    """Write homogeneous records as RFC-4180 CSV or a JSON array; byte-stable."""
    if fmt == "json":
        text = json.dumps(rows, sort_keys=True, indent=1) + "\n"
    else:
        import io

        buf = io.StringIO()
        fieldnames = list(rows[0].keys()) if rows else []
        writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        text = buf.getvalue()
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_COMMANDS = {
    "simulate": cmd_simulate,
    "analytic": cmd_analytic,
    "sweep": cmd_sweep,
    "resources": cmd_resources,
    "bliss": cmd_bliss,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        rows = _COMMANDS[args.command](args)
        emit(rows, args.format, args.out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (LcusimError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
