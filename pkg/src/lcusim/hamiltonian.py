"""Hamiltonians as weighted, phased Pauli strings.

A Hamiltonian is stored as a list of terms ``weight * exp(i*phase) * P``
where ``weight >= 0`` and ``P`` is a tensor product of single-qubit Paulis.
Signs and complex factors of raw coefficients always live in the phase, so
the weights can feed directly into a PREPARE amplitude vector.

Qubit convention: letter ``j`` of a term acts on qubit ``j``, and qubit 0 is
the least-significant bit of computational-basis indices.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidHamiltonianError, InvalidModelError, ResourceLimitError

DENSE_QUBIT_CAP = 12

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (phase, letter) for the product left * right of single-qubit Paulis.
_PAULI_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


def pauli_mul(left: str, right: str) -> tuple[complex, str]:
    """Product of two Pauli strings: returns (phase, letters)."""
    if len(left) != len(right):
        raise ValueError("Pauli strings must have equal length")
    phase = 1 + 0j
    out = []
    for a, b in zip(left, right):
        p, c = _PAULI_MUL[(a, b)]
        phase *= p
        out.append(c)
    return phase, "".join(out)


@dataclass(frozen=True)
class PauliTerm:
    """One weighted, phased Pauli string."""

    weight: float
    phase: float
    letters: str

    def __post_init__(self):
        if self.weight < 0:
            raise InvalidHamiltonianError("term weight must be nonnegative")
        if any(c not in "IXYZ" for c in self.letters):
            raise InvalidHamiltonianError(f"bad Pauli letters {self.letters!r}")

    @property
    def coefficient(self) -> complex:
        return self.weight * cmath.exp(1j * self.phase)


@dataclass(frozen=True)
class HamiltonianLCU:
    """Linear combination of phased Pauli strings on ``n`` qubits."""

    n: int
    terms: tuple[PauliTerm, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidHamiltonianError("need at least one qubit")
        if len(self.terms) < 1:
            raise InvalidHamiltonianError("need at least one term")
        seen = set()
        for t in self.terms:
            if len(t.letters) != self.n:
                raise InvalidHamiltonianError("term length does not match qubit count")
            if t.letters in seen:
                raise InvalidHamiltonianError(f"duplicate term {t.letters}")
            seen.add(t.letters)
        if l1_norm(self) <= 0:
            raise InvalidHamiltonianError("l1 norm must be strictly positive")

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    @property
    def l_width(self) -> int:
        """Qubits needed to index the terms (minimum 1)."""
        return max(1, math.ceil(math.log2(self.num_terms)))


def l1_norm(H: HamiltonianLCU) -> float:
    """Sum of term weights."""
    return float(sum(t.weight for t in H.terms))


def canonicalize(
    n: int,
    raw_terms: Iterable[tuple[complex, str]],
    *,
    atol: float = 1e-12,
) -> HamiltonianLCU:
    """Merge duplicate letter sequences and fold coefficient signs into phases.

    ``raw_terms`` is an iterable of ``(coefficient, letters)`` with real or
    complex coefficients. Terms whose merged coefficient magnitude falls
    below ``atol`` are dropped.
    """
    merged: dict[str, complex] = {}
    for coeff, letters in raw_terms:
        letters = str(letters)
        if len(letters) != n:
            raise InvalidHamiltonianError(f"term {letters!r} does not act on {n} qubits")
        merged[letters] = merged.get(letters, 0j) + complex(coeff)
    terms = []
    for letters, coeff in merged.items():
        if abs(coeff) <= atol:
            continue
        terms.append(PauliTerm(weight=abs(coeff), phase=float(cmath.phase(coeff)), letters=letters))
    if not terms:
        raise InvalidHamiltonianError("all coefficients vanish")
    return HamiltonianLCU(n=n, terms=tuple(terms))


def build_ising(n_sites: int, J: float, h: float) -> HamiltonianLCU:
    """Open-chain 1D Ising model: J * sum Z_i Z_{i+1} + h * sum X_i.

    Term order is couplings by site index, then fields by site index.
    """
    if n_sites < 2:
        raise InvalidModelError("Ising chain needs at least 2 sites")
    raw: list[tuple[complex, str]] = []
    for i in range(n_sites - 1):
        letters = "".join("Z" if j in (i, i + 1) else "I" for j in range(n_sites))
        raw.append((J, letters))
    for i in range(n_sites):
        letters = "".join("X" if j == i else "I" for j in range(n_sites))
        raw.append((h, letters))
    return canonicalize(n_sites, raw)


def pauli_string_matrix(letters: str) -> np.ndarray:
    """Dense matrix of a Pauli string; letter 0 acts on the least-significant qubit."""
    mat = np.array([[1]], dtype=complex)
    for c in letters:  # qubit 0 is LSB, so it goes rightmost in the kron chain
        mat = np.kron(PAULI_MATRICES[c], mat)
    return mat


def to_matrix(H: HamiltonianLCU, *, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the Hamiltonian."""
    if H.n > cap:
        raise ResourceLimitError(f"{H.n} qubits exceeds dense cap {cap}")
    dim = 1 << H.n
    mat = np.zeros((dim, dim), dtype=complex)
    for t in H.terms:
        mat += t.coefficient * pauli_string_matrix(t.letters)
    return mat


def load_hamiltonian(path) -> HamiltonianLCU:
    """Read a Hamiltonian from the JSON text format.

    Format: ``{"n": int, "terms": [{"coeff": real, "phase": real (optional),
    "paulis": "IXYZ..."}]}``. The reader canonicalizes, so signed
    coefficients and duplicates are fine.
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    n = int(data["n"])
    raw = []
    for entry in data["terms"]:
        coeff = float(entry["coeff"]) * cmath.exp(1j * float(entry.get("phase", 0.0)))
        raw.append((coeff, entry["paulis"]))
    return canonicalize(n, raw)


def save_hamiltonian(H: HamiltonianLCU, path) -> None:
    """Write a Hamiltonian in the JSON text format read by load_hamiltonian."""
    data = {
        "n": H.n,
        "terms": [
            {"coeff": t.weight, "phase": t.phase, "paulis": t.letters} for t in H.terms
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def prepare_amplitudes(H: HamiltonianLCU, width: int | None = None) -> np.ndarray:
    """sqrt(weight / l1) amplitude vector for PREPARE, zero-padded to 2^width."""
    if width is None:
        width = H.l_width
    if (1 << width) < H.num_terms:
        raise InvalidHamiltonianError("register too narrow for the term count")
    amps = np.zeros(1 << width)
    norm = l1_norm(H)
    for i, t in enumerate(H.terms):
        amps[i] = math.sqrt(t.weight / norm)
    return amps
