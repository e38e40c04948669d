"""Dense-matrix reference values: truncated propagator, success probabilities,
expected runtimes and bounds.

Everything here is double-precision linear algebra behind the dense qubit
cap; these are correctness references, not performance paths.
"""
from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from .circuits import TaylorCoefficients
from .errors import DomainError, NormalizationError
from .hamiltonian import DENSE_QUBIT_CAP, HamiltonianLCU, l1_norm, to_matrix

_NORM_TOL = 1e-10


def rescaled_matrix(H: HamiltonianLCU, *, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """(-i / l1) times the dense Hamiltonian matrix."""
    return (-1j / l1_norm(H)) * to_matrix(H, cap=cap)


def truncated_taylor_matrix(
    H: HamiltonianLCU, tau: float, K: int, *, cap: int = DENSE_QUBIT_CAP
) -> np.ndarray:
    """sum_{k<=K} beta_k * Htilde^k; converges to exp(-i H tau) as K grows."""
    ht = rescaled_matrix(H, cap=cap)
    x = tau * l1_norm(H)
    out = np.eye(ht.shape[0], dtype=complex)
    power = np.eye(ht.shape[0], dtype=complex)
    coeff = 1.0
    for k in range(1, K + 1):
        power = power @ ht
        coeff *= x / k
        out += coeff * power
    return out


def _check_normalized(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(psi) - 1.0) > _NORM_TOL:
        raise NormalizationError("state is not normalized")
    return psi


def success_prob_hk(H: HamiltonianLCU, psi: np.ndarray, k: int) -> float:
    """<psi| (Htilde^k)^dag Htilde^k |psi>."""
    psi = _check_normalized(psi)
    ht = rescaled_matrix(H)
    v = psi
    for _ in range(k):
        v = ht @ v
    return float(np.vdot(v, v).real)


def chain_probabilities(H: HamiltonianLCU, psi: np.ndarray, k: int) -> list[float]:
    """Conditional block success probabilities p_1..p_k of the sequential protocol.

    p_i = <psi_{i-1}| Htilde^dag Htilde |psi_{i-1}> with psi_i the normalized
    post-block state. A dead branch yields zeros for the remaining steps.
    """
    psi = _check_normalized(psi)
    ht = rescaled_matrix(H)
    probs = []
    v = psi
    for _ in range(k):
        v = ht @ v
        p = float(np.vdot(v, v).real)
        probs.append(p)
        if p < 1e-300:
            probs += [0.0] * (k - len(probs))
            break
        v = v / math.sqrt(p)
    return probs


def success_prob_wtilde(H: HamiltonianLCU, psi: np.ndarray, tau: float, K: int) -> float:
    """<psi| U^dag U |psi> / ||beta||_1^2 for the truncated propagator U."""
    psi = _check_normalized(psi)
    U = truncated_taylor_matrix(H, tau, K)
    kappa = max(1, math.ceil(math.log2(K + 1)))
    beta = TaylorCoefficients(tau, l1_norm(H), kappa).beta[: K + 1]
    v = U @ psi
    return float(np.vdot(v, v).real) / float(beta.sum()) ** 2


def expected_runtime_midmeasure(p_chain: Sequence[float], d: float) -> float:
    """Average per-shot cost of the abort-and-restart protocol.

    sum_j (1-p_j) (prod_{i<j} p_i) j d  +  (prod_{i<k} p_i) k d.
    """
    p = list(p_chain)
    k = len(p)
    if k == 0:
        return 0.0
    total = 0.0
    running = 1.0  # prod_{i<j} p_i
    for j in range(1, k):
        total += (1.0 - p[j - 1]) * running * j * d
        running *= p[j - 1]
    total += running * k * d
    return total


def total_runtime_success(p_chain: Sequence[float], d: float) -> float:
    """d (1 + p1 + p1 p2 + ... + p1..p_{k-1}) / (p1..p_k); inf on a zero branch."""
    p = list(p_chain)
    if any(pi == 0.0 for pi in p):
        return math.inf
    numerator = 0.0
    running = 1.0
    for pi in p:
        numerator += running
        running *= pi
    return d * numerator / running


def runtime_upper_bound(
    H: HamiltonianLCU, psi: np.ndarray, tau: float, K: int, d_ctrl: float
) -> float:
    """First-order upper bound on the average successful-run cost of the
    shorter-width circuit: (K d / p) [1 - (tau l1 / ||beta||_1) (1 - p1)]."""
    psi = _check_normalized(psi)
    p_w = success_prob_wtilde(H, psi, tau, K)
    kappa = max(1, math.ceil(math.log2(K + 1)))
    beta_norm = float(TaylorCoefficients(tau, l1_norm(H), kappa).beta[: K + 1].sum())
    ht = rescaled_matrix(H)
    v = ht @ psi
    p1 = float(np.vdot(v, v).real)
    correction = (tau * l1_norm(H) / beta_norm) * (1.0 - p1)
    return (K * d_ctrl / p_w) * (1.0 - correction)


def spectral_lower_bound(H: HamiltonianLCU, k: int) -> float:
    """(lambda0 / l1)^{2k} with lambda0 the smallest-magnitude eigenvalue of H."""
    mat = to_matrix(H)
    if np.linalg.norm(mat - mat.conj().T) > 1e-10:
        raise DomainError("spectral bound requires a Hermitian Hamiltonian")
    eigs = np.linalg.eigvalsh(mat)
    # magnitude ordering, ties broken toward the nonnegative eigenvalue
    lam0 = float(min(eigs, key=lambda e: (abs(e), e < 0)))
    return (abs(lam0) / l1_norm(H)) ** (2 * k)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for normalized states."""
    a = _check_normalized(a)
    b = _check_normalized(b)
    return float(abs(np.vdot(a, b)) ** 2)
