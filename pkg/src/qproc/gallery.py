"""Concrete processors and operator families, with their closed-form fidelities.

Data basis states are 0-based; the one-parameter phase family puts its phase
on data state ``|0>``.
"""

from __future__ import annotations

import numpy as np

from qproc.linalg import check_unitary, matrix_exp_skew
from qproc.processor import Processor, from_global_unitary

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# sigma_plus |0> = |1>
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.conj().T


def controlled_u_processor(ops) -> Processor:
    """Blocks ``A_jk = delta_jk U_k``: program ``|k>`` applies ``U_k``."""
    ops = [check_unitary(u, name=f"operator {k}") for k, u in enumerate(ops)]
    if not ops:
        raise ValueError("need at least one operator")
    d = ops[0].shape[0]
    if any(u.shape != (d, d) for u in ops):
        raise ValueError("operators must share one dimension")
    n = len(ops)
    blocks = np.zeros((n, n, d, d), dtype=complex)
    for k, u in enumerate(ops):
        blocks[k, k] = u
    return Processor(blocks)


def identity_processor(data_dim: int, program_dim: int = 1) -> Processor:
    return controlled_u_processor([np.eye(data_dim)] * program_dim)


def cnot_processor() -> Processor:
    return controlled_u_processor([PAULI_I, PAULI_X])


def shift_ops(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic shifts ``E+|k> = |k+1>`` and ``E-|k> = |k-1>`` (mod n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    e_plus = np.roll(np.eye(n, dtype=complex), 1, axis=0)
    return e_plus, e_plus.T.copy()


def theta_program(n: int, theta: float) -> np.ndarray:
    """``|theta> = sum_k exp(-i k theta) |k> / sqrt(n)``."""
    k = np.arange(n)
    return np.exp(-1j * k * theta) / np.sqrt(n)


def theta_grid(n: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n) / n


def theta_basis(n: int) -> np.ndarray:
    """Unitary whose columns are the ``|theta_m>`` states."""
    return np.stack([theta_program(n, t) for t in theta_grid(n)], axis=1)


def u_theta(theta: float) -> np.ndarray:
    """``exp[i pi/2 (e^{-i theta} s+ + e^{i theta} s-)]``.

    The generator squares to the identity, so the exponential is ``i`` times it.
    """
    return 1j * np.array([[0, np.exp(1j * theta)], [np.exp(-1j * theta), 0]])


def rotation_processor(n: int) -> Processor:
    """Qubit processor ``G = exp[i pi/2 (s+ (x) E- + s- (x) E+)]``.

    Program ``|theta_m>`` implements ``u_theta(theta_m)`` exactly.
    """
    e_plus, e_minus = shift_ops(n)
    gen = np.kron(SIGMA_PLUS, e_minus) + np.kron(SIGMA_MINUS, e_plus)
    g = matrix_exp_skew(1j * (np.pi / 2) * gen)
    return from_global_unitary(g, 2, n)


def rotation_fidelity_closed_form(n: int, theta: float) -> float:
    """Fidelity of ``rotation_processor(n)`` run with ``|theta>`` against
    ``u_theta(theta)``."""
    delta = theta_grid(n) - theta
    half = np.sin(delta / 2)
    wrapped = np.abs(np.angle(np.exp(1j * delta)))
    singular = wrapped < 1e-9
    ratio = np.empty(n)
    ratio[singular] = n**2
    ratio[~singular] = np.sin(n * delta[~singular] / 2) ** 2 / half[~singular] ** 2
    return float(np.sum(np.cos(delta) ** 2 * ratio) / n**2)


def phase_shift_unitary(d: int, theta: float) -> np.ndarray:
    """``diag(e^{i theta}, 1, ..., 1)``."""
    if d < 2:
        raise ValueError("data dimension must be >= 2")
    diag = np.ones(d, dtype=complex)
    diag[0] = np.exp(1j * theta)
    return np.diag(diag)


def vidal_cirac_processor(d: int, n: int) -> Processor:
    """Probabilistic phase processor.

    ``A_jk = delta_jk X + delta_{k, j+1 mod n} |0><0|`` with
    ``X = I - |0><0|``: the program register is cycled when the data is in
    ``|0>``.
    """
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    p0 = np.zeros((d, d), dtype=complex)
    p0[0, 0] = 1
    x = np.eye(d) - p0
    blocks = np.zeros((n, n, d, d), dtype=complex)
    for j in range(n):
        blocks[j, j] += x
        blocks[j, (j + 1) % n] += p0
    return Processor(blocks)


def vc_program(n: int, theta: float) -> np.ndarray:
    """``sum_k e^{i k theta} |k> / sqrt(n)``."""
    return np.exp(1j * np.arange(n) * theta) / np.sqrt(n)


def vc_fidelity_closed_form(d: int, n: int, theta: float) -> float:
    return float(1 - 2 * (d - 1) / (n * d**2) * (1 - np.cos(n * theta)))


def vc_success_probability(n: int) -> float:
    return (n - 1) / n


def segment_centers(n: int) -> np.ndarray:
    """``(2j + 1) pi / n`` for ``j = 0 .. n-1``."""
    return (2 * np.arange(n) + 1) * np.pi / n


def segment_index(n: int, theta: float) -> int:
    """Segment ``j`` with ``2j pi/n <= theta < 2(j+1) pi/n`` (theta taken mod 2 pi)."""
    t = np.mod(theta, 2 * np.pi)
    return int(min(np.floor(t * n / (2 * np.pi)), n - 1))


def segmented_processor(d: int, n: int) -> Processor:
    return controlled_u_processor([phase_shift_unitary(d, t) for t in segment_centers(n)])


def segmented_fidelity_closed_form(d: int, n: int, theta: float) -> float:
    """Fidelity of the segmented processor with program ``|segment_index>``."""
    delta = theta - segment_centers(n)[segment_index(n, theta)]
    return float(1 - 2 * (d - 1) / d**2 * (1 - np.cos(delta)))


def segmented_infidelity_bound(d: int, n: int) -> float:
    return float(2 * (d - 1) / d**2 * (1 - np.cos(np.pi / n)))


def swap_processor(d: int) -> Processor:
    """SWAP on ``data (x) program`` with both registers of dimension ``d``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    g = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            g[b * d + a, a * d + b] = 1
    return from_global_unitary(g, d, d)


def pauli_set() -> list[tuple[str, np.ndarray]]:
    return [("I", PAULI_I), ("X", PAULI_X), ("Y", PAULI_Y), ("Z", PAULI_Z)]
