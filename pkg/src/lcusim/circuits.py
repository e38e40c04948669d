"""Circuit plans for the truncated-Taylor LCU time-evolution families.

Three builders are provided:

* ``build_w_hk``   -- k post-selected LCU blocks implementing the k-th power
  of the rescaled Hamiltonian.
* ``build_w_tilde`` -- the shorter-width circuit: binary-encoded Taylor
  register of width kappa, K = 2^kappa - 1 singly-controlled LCU blocks,
  each followed by a mid-circuit measurement of the l-register.
* ``build_w_unary`` -- the unary-encoded reference circuit with K separate
  l-registers and a single terminal post-selection.

Only the Select instruction of each block carries the control: on the
control-|0> branch Prepare followed by AdjointPrepare is the identity and
the l-measurement succeeds with certainty, so post-selected results match a
fully controlled block at lower cost.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidModelError
from .hamiltonian import HamiltonianLCU, l1_norm, prepare_amplitudes
from .statevector import Register, RegisterLayout


@dataclass(frozen=True)
class TaylorCoefficients:
    """Truncated-Taylor weights (tau * l1)^k / k! for k = 0..K, K = 2^kappa - 1."""

    tau: float
    alpha_norm: float
    kappa: int

    def __post_init__(self):
        if self.alpha_norm <= 0:
            raise InvalidModelError("alpha_norm must be positive")
        if self.kappa < 1:
            raise InvalidModelError("kappa must be at least 1")
        if self.tau < 0:
            raise InvalidModelError("tau must be nonnegative")

    @property
    def K(self) -> int:
        return (1 << self.kappa) - 1

    @property
    def beta(self) -> np.ndarray:
        x = self.tau * self.alpha_norm
        out = np.empty(self.K + 1)
        out[0] = 1.0
        for k in range(1, self.K + 1):
            out[k] = out[k - 1] * x / k
        return out

    @property
    def beta_norm(self) -> float:
        return float(self.beta.sum())


def taylor_prepare_amplitudes(tau: float, alpha_norm: float, kappa: int) -> np.ndarray:
    """Length-2^kappa amplitude vector sqrt(beta_k / ||beta||_1)."""
    coeffs = TaylorCoefficients(tau, alpha_norm, kappa)
    beta = coeffs.beta
    amps = np.zeros(1 << kappa)
    amps[: beta.shape[0]] = np.sqrt(beta / beta.sum())
    return amps


def power_schedule(kappa: int) -> tuple[int, ...]:
    """Select-block sizes (2^0, ..., 2^{kappa-1}); block i is controlled by k-qubit i."""
    if kappa < 1:
        raise InvalidModelError("kappa must be at least 1")
    return tuple(1 << i for i in range(kappa))


def choose_K(T: float, epsilon: float) -> int:
    """Advisory truncation order ceil(log(T/eps) / log log(T/eps)), minimum 1."""
    if T <= 0 or not 0 < epsilon < 1:
        raise DomainError("need T > 0 and epsilon in (0,1)")
    x = math.log(T / epsilon)
    if x <= 1.0:
        raise DomainError("T/epsilon must exceed e")
    return max(1, math.ceil(x / math.log(x)))


@dataclass(frozen=True, eq=False)
class Prepare:
    register: str
    amps: np.ndarray = field(repr=False)
    style: str = "dense"  # "dense" or "unary" (staircase compilation)


@dataclass(frozen=True, eq=False)
class AdjointPrepare:
    register: str
    amps: np.ndarray = field(repr=False)
    style: str = "dense"


@dataclass(frozen=True)
class Select:
    l_register: str = "l"
    control: int | None = None  # global qubit index


@dataclass(frozen=True)
class MeasureExpectZero:
    register: str


@dataclass(frozen=True)
class FinalMeasure:
    register: str


Instruction = Prepare | AdjointPrepare | Select | MeasureExpectZero | FinalMeasure


@dataclass(frozen=True, eq=False)
class CircuitPlan:
    layout: RegisterLayout
    hamiltonian: HamiltonianLCU
    instructions: tuple[Instruction, ...]
    family: str  # "w_hk", "wtilde", or "wunary"

    @property
    def select_count(self) -> int:
        return sum(1 for ins in self.instructions if isinstance(ins, Select))

    @property
    def mid_measure_count(self) -> int:
        return sum(1 for ins in self.instructions if isinstance(ins, MeasureExpectZero))

    @property
    def measure_count(self) -> int:
        return sum(
            1 for ins in self.instructions if isinstance(ins, (MeasureExpectZero, FinalMeasure))
        )

    def describe(self) -> str:
        """Human-readable instruction listing for golden-file checks."""
        lines = [
            f"family={self.family} qubits={self.layout.total} "
            f"selects={self.select_count} mid_measures={self.mid_measure_count}"
        ]
        for reg in self.layout.registers:
            lines.append(f"register {reg.name}: width={reg.width} offset={reg.offset}")
        for i, ins in enumerate(self.instructions):
            if isinstance(ins, Prepare):
                lines.append(f"{i:3d} prepare {ins.register} ({ins.style})")
            elif isinstance(ins, AdjointPrepare):
                lines.append(f"{i:3d} adjoint-prepare {ins.register} ({ins.style})")
            elif isinstance(ins, Select):
                ctrl = "none" if ins.control is None else f"q{ins.control}"
                lines.append(f"{i:3d} select via {ins.l_register} control={ctrl}")
            elif isinstance(ins, MeasureExpectZero):
                lines.append(f"{i:3d} measure-expect-zero {ins.register}")
            else:
                lines.append(f"{i:3d} final-measure {ins.register}")
        return "\n".join(lines)


def build_w_hk(H: HamiltonianLCU, k: int) -> CircuitPlan:
    """k repetitions of [Prepare, Select, AdjointPrepare, MeasureExpectZero]."""
    if k < 1:
        raise InvalidModelError("k must be at least 1")
    lw = H.l_width
    layout = RegisterLayout((Register("system", H.n, 0), Register("l", lw, H.n)))
    amps = prepare_amplitudes(H, lw)
    block = (
        Prepare("l", amps),
        Select("l", None),
        AdjointPrepare("l", amps),
        MeasureExpectZero("l"),
    )
    return CircuitPlan(layout, H, block * k, family="w_hk")


def build_w_tilde(H: HamiltonianLCU, tau: float, kappa: int) -> CircuitPlan:
    """Shorter-width plan: kappa + ceil(log2 L) + n qubits, K = 2^kappa - 1 selects."""
    lw = H.l_width
    layout = RegisterLayout.standard(kappa, lw, H.n)
    k_amps = taylor_prepare_amplitudes(tau, l1_norm(H), kappa)
    l_amps = prepare_amplitudes(H, lw)
    instructions: list[Instruction] = [Prepare("k", k_amps)]
    for i, size in enumerate(power_schedule(kappa)):
        control = layout.register("k").offset + i
        for _ in range(size):
            instructions += [
                Prepare("l", l_amps),
                Select("l", control),
                AdjointPrepare("l", l_amps),
                MeasureExpectZero("l"),
            ]
    instructions += [AdjointPrepare("k", k_amps), FinalMeasure("k")]
    return CircuitPlan(layout, H, tuple(instructions), family="wtilde")


def build_w_unary(H: HamiltonianLCU, tau: float, K: int) -> CircuitPlan:
    """Unary-encoded reference plan with deferred (terminal) measurements.

    Registers: system, then K l-registers, then a K-qubit unary Taylor
    register holding sqrt(beta_k/||beta||_1) on the one-hot-prefix states
    |1^k 0^{K-k}>.
    """
    if K < 1:
        raise InvalidModelError("K must be at least 1")
    lw = H.l_width
    regs = [Register("system", H.n, 0)]
    for j in range(K):
        regs.append(Register(f"l{j}", lw, H.n + j * lw))
    unary_offset = H.n + K * lw
    regs.append(Register("unary", K, unary_offset))
    layout = RegisterLayout(tuple(regs))

    kappa = max(1, math.ceil(math.log2(K + 1)))
    beta = TaylorCoefficients(tau, l1_norm(H), kappa).beta[: K + 1]
    unary_amps = np.zeros(1 << K)
    norm = beta.sum()
    for k in range(K + 1):
        unary_amps[(1 << k) - 1] = math.sqrt(beta[k] / norm)
    l_amps = prepare_amplitudes(H, lw)

    instructions: list[Instruction] = [Prepare("unary", unary_amps, style="unary")]
    for j in range(K):
        instructions.append(Prepare(f"l{j}", l_amps))
    for j in range(K):
        instructions.append(Select(f"l{j}", control=unary_offset + j))
    for j in range(K):
        instructions.append(AdjointPrepare(f"l{j}", l_amps))
    instructions.append(AdjointPrepare("unary", unary_amps, style="unary"))
    for j in range(K):
        instructions.append(MeasureExpectZero(f"l{j}"))
    instructions.append(FinalMeasure("unary"))
    return CircuitPlan(layout, H, tuple(instructions), family="wunary")
