"""Shorter-width truncated-Taylor LCU time evolution.

Statevector simulation of the binary-encoded mid-circuit-measurement
circuit and its unary-encoded reference, closed-form success-probability
and runtime oracles, gate-level resource estimation, and BLISS l1-norm
optimization of Jordan-Wigner-encoded fermionic Hamiltonians.
"""

from .bliss import (
    BlissParams,
    BlissResult,
    FermionicOperator,
    apply_bliss,
    build_hubbard_chain,
    jordan_wigner,
    load_fermionic,
    optimize_bliss,
    sector_spectrum,
)
from .circuits import (
    CircuitPlan,
    TaylorCoefficients,
    build_w_hk,
    build_w_tilde,
    build_w_unary,
    choose_K,
    power_schedule,
    taylor_prepare_amplitudes,
)
from .hamiltonian import (
    HamiltonianLCU,
    PauliTerm,
    build_ising,
    canonicalize,
    l1_norm,
    load_hamiltonian,
    save_hamiltonian,
    to_matrix,
)
from .oracle import (
    expected_runtime_midmeasure,
    fidelity,
    runtime_upper_bound,
    spectral_lower_bound,
    success_prob_hk,
    success_prob_wtilde,
    total_runtime_success,
    truncated_taylor_matrix,
)
from .resources import GateCounts, compile_plan, count
from .sampler import (
    CostModel,
    RunStats,
    estimate,
    mean_cost_per_shot,
    run_shots,
    trace_plan,
)
from .statevector import (
    RegisterLayout,
    StateVector,
    apply_prepare,
    apply_select,
    init_state,
    measure_register,
)

__all__ = [
    "BlissParams",
    "BlissResult",
    "CircuitPlan",
    "CostModel",
    "FermionicOperator",
    "GateCounts",
    "HamiltonianLCU",
    "PauliTerm",
    "RegisterLayout",
    "RunStats",
    "StateVector",
    "TaylorCoefficients",
    "apply_bliss",
    "apply_prepare",
    "apply_select",
    "build_hubbard_chain",
    "build_ising",
    "build_w_hk",
    "build_w_tilde",
    "build_w_unary",
    "canonicalize",
    "choose_K",
    "compile_plan",
    "count",
    "estimate",
    "expected_runtime_midmeasure",
    "fidelity",
    "init_state",
    "jordan_wigner",
    "l1_norm",
    "load_fermionic",
    "load_hamiltonian",
    "mean_cost_per_shot",
    "measure_register",
    "optimize_bliss",
    "power_schedule",
    "run_shots",
    "runtime_upper_bound",
    "save_hamiltonian",
    "sector_spectrum",
    "spectral_lower_bound",
    "success_prob_hk",
    "success_prob_wtilde",
    "taylor_prepare_amplitudes",
    "to_matrix",
    "total_runtime_success",
    "trace_plan",
    "truncated_taylor_matrix",
]

__version__ = "0.1.0"
