"""Exact complex-amplitude simulation over named qubit registers.

The global state is a flat array of 2^total amplitudes. Registers occupy
contiguous qubit ranges; qubit ``offset + i`` of a register is bit ``i`` of
that register's value, and qubit 0 is the least-significant bit of the
global basis index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    LayoutError,
    MeasurementDegenerateError,
    NormalizationError,
    ResourceLimitError,
)
from .hamiltonian import HamiltonianLCU

TOTAL_QUBIT_CAP = 24
_NORM_TOL = 1e-10


@dataclass(frozen=True)
class Register:
    name: str
    width: int
    offset: int  # global index of the register's least-significant qubit


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered, contiguous registers covering qubits 0..total-1."""

    registers: tuple[Register, ...]

    def __post_init__(self):
        expected = 0
        for reg in self.registers:
            if reg.offset != expected or reg.width < 1:
                raise LayoutError("registers must be contiguous from qubit 0")
            expected += reg.width
        names = [r.name for r in self.registers]
        if len(set(names)) != len(names):
            raise LayoutError("register names must be unique")

    @classmethod
    def standard(cls, kappa: int, l_width: int, n: int) -> "RegisterLayout":
        """System, l-register, k-register layout used by the binary-encoded circuit."""
        regs = [Register("system", n, 0), Register("l", l_width, n)]
        if kappa > 0:
            regs.append(Register("k", kappa, n + l_width))
        return cls(tuple(regs))

    @property
    def total(self) -> int:
        return sum(r.width for r in self.registers)

    def register(self, name: str) -> Register:
        for r in self.registers:
            if r.name == name:
                return r
        raise LayoutError(f"no register named {name!r}")

    @property
    def n(self) -> int:
        return self.register("system").width

    @property
    def l_width(self) -> int:
        return self.register("l").width

    @property
    def kappa(self) -> int:
        try:
            return self.register("k").width
        except LayoutError:
            return 0


@dataclass
class StateVector:
    layout: RegisterLayout
    amplitudes: np.ndarray = field(repr=False)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.layout, self.amplitudes.copy())

    def system_state(self) -> np.ndarray:
        """System-register amplitudes, assuming all ancillas are in |0..0>."""
        n = self.layout.n
        sys_part = self.amplitudes[: 1 << n].copy()
        rest = np.linalg.norm(self.amplitudes[1 << n :])
        if rest > 1e-9:
            raise LayoutError("ancilla registers are not in the all-zero state")
        return sys_part


def init_state(layout: RegisterLayout, psi: np.ndarray) -> StateVector:
    """All-zero ancillas with the system register carrying psi."""
    if layout.total > TOTAL_QUBIT_CAP:
        raise ResourceLimitError(
            f"{layout.total} qubits exceeds simulation cap {TOTAL_QUBIT_CAP}"
        )
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    n = layout.n
    if psi.shape[0] != (1 << n):
        raise LayoutError(f"system state needs {1 << n} amplitudes")
    if abs(np.linalg.norm(psi) - 1.0) > _NORM_TOL:
        raise NormalizationError("system state is not normalized")
    amps = np.zeros(1 << layout.total, dtype=complex)
    amps[: 1 << n] = psi
    return StateVector(layout, amps)


def completion_unitary(amps: np.ndarray) -> np.ndarray:
    """Deterministic unitary whose first column is ``amps``.

    Householder construction: with v = a + e^{i theta} e0 (theta = arg a0),
    H = I - 2 v v^dag / |v|^2 maps a to -e^{i theta} e0, so H * diag(-e^{i
    theta}, 1, ..) sends e0 to a.
    """
    a = np.asarray(amps, dtype=complex).reshape(-1)
    dim = a.shape[0]
    if abs(np.linalg.norm(a) - 1.0) > _NORM_TOL:
        raise NormalizationError("prepare amplitudes are not normalized")
    theta = math.atan2(a[0].imag, a[0].real)
    v = a.copy()
    v[0] += np.exp(1j * theta)
    v /= np.linalg.norm(v)
    house = np.eye(dim, dtype=complex) - 2.0 * np.outer(v, v.conj())
    diag = np.ones(dim, dtype=complex)
    diag[0] = -np.exp(1j * theta)
    return house * diag[np.newaxis, :]


def apply_register_unitary(state: StateVector, register: str, U: np.ndarray) -> StateVector:
    """Apply a 2^w x 2^w unitary to one register, in place."""
    reg = state.layout.register(register)
    dim = 1 << reg.width
    if U.shape != (dim, dim):
        raise LayoutError("unitary dimension does not match register width")
    block = state.amplitudes.reshape(-1, dim, 1 << reg.offset)
    state.amplitudes = np.einsum("ab,ibj->iaj", U, block).reshape(-1)
    return state


def apply_prepare(
    state: StateVector, register: str, amps: np.ndarray, adjoint: bool = False
) -> StateVector:
    """Apply the PREPARE completion unitary (or its inverse) to a register."""
    U = completion_unitary(np.asarray(amps))
    if adjoint:
        U = U.conj().T
    return apply_register_unitary(state, register, U)


def _pauli_masks(letters: str) -> tuple[int, int, complex]:
    """(x_mask, z_mask, i^{#Y}) for a Pauli string; letter j maps to bit j."""
    x = z = 0
    phase = 1 + 0j
    for j, c in enumerate(letters):
        if c in "XY":
            x |= 1 << j
        if c in "ZY":
            z |= 1 << j
        if c == "Y":
            phase *= 1j
    return x, z, phase


def apply_select(
    state: StateVector,
    H: HamiltonianLCU,
    l_register: str = "l",
    control: int | None = None,
) -> StateVector:
    """Multiplexed (-i) * exp(i phase_l) * Pauli_l on the system register.

    For l-register values >= L the map is the identity. If ``control`` is a
    global qubit index, the whole map acts only on that qubit's |1> branch.
    """
    layout = state.layout
    n = layout.n
    reg = layout.register(l_register)
    if reg.width < H.l_width:
        raise LayoutError("l-register too narrow for the Hamiltonian")
    if control is not None and control < n:
        raise LayoutError("control qubit must lie outside the system register")
    dim_sys = 1 << n
    view = state.amplitudes.reshape(-1, dim_sys)
    rows = np.arange(view.shape[0])
    l_shift = reg.offset - n
    l_mask = (1 << reg.width) - 1
    row_l = (rows >> l_shift) & l_mask
    if control is not None:
        ctrl_on = ((rows >> (control - n)) & 1) == 1
    cols = np.arange(dim_sys)
    for li, term in enumerate(H.terms):
        sel = row_l == li
        if control is not None:
            sel &= ctrl_on
        if not sel.any():
            continue
        xm, zm, yphase = _pauli_masks(term.letters)
        src = cols ^ xm
        signs = 1 - 2 * (np.bitwise_count(src & zm) & 1).astype(np.int64)
        factor = (-1j) * np.exp(1j * term.phase) * yphase
        view[sel] = view[np.ix_(np.flatnonzero(sel), src)] * (factor * signs)[np.newaxis, :]
    return state


def register_probabilities(state: StateVector, register: str) -> np.ndarray:
    """Marginal Born probabilities over one register's basis values."""
    reg = state.layout.register(register)
    block = state.amplitudes.reshape(-1, 1 << reg.width, 1 << reg.offset)
    return (np.abs(block) ** 2).sum(axis=(0, 2))


def _project(state: StateVector, register: str, outcome: int, prob: float) -> None:
    reg = state.layout.register(register)
    block = state.amplitudes.reshape(-1, 1 << reg.width, 1 << reg.offset)
    keep = block[:, outcome, :].copy()
    block[:] = 0
    block[:, outcome, :] = keep
    state.amplitudes /= math.sqrt(prob)


def measure_register(state: StateVector, register: str, rng) -> tuple[int, StateVector]:
    """Sample one register's outcome by the Born rule, project, renormalize."""
    probs = register_probabilities(state, register)
    total = probs.sum()
    if total < 1e-14:
        raise MeasurementDegenerateError("all branches have vanishing probability")
    cum = np.cumsum(probs / total)
    outcome = int(np.searchsorted(cum, rng.random(), side="right"))
    outcome = min(outcome, probs.shape[0] - 1)
    _project(state, register, outcome, probs[outcome])
    return outcome, state


def project_zero(state: StateVector, register: str) -> float:
    """Project a register onto all-zero, renormalize, return the branch probability.

    A vanishing branch leaves the state untouched and returns 0.0.
    """
    probs = register_probabilities(state, register)
    p0 = float(probs[0])
    if p0 < 1e-14:
        return 0.0
    _project(state, register, 0, p0)
    return p0


def apply_1q(state: StateVector, qubit: int, U: np.ndarray) -> StateVector:
    """Apply a single-qubit unitary to one global qubit, in place."""
    block = state.amplitudes.reshape(-1, 2, 1 << qubit)
    state.amplitudes = np.einsum("ab,ibj->iaj", U, block).reshape(-1)
    return state


def apply_cx(state: StateVector, control: int, target: int) -> StateVector:
    """Apply a CNOT between two global qubits, in place."""
    idx = np.arange(state.amplitudes.shape[0])
    src = idx.copy()
    on = ((idx >> control) & 1) == 1
    src[on] ^= 1 << target
    state.amplitudes = state.amplitudes[src]
    return state
