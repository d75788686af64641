"""Process fidelity, the program-space fidelity kernel, and optimal programs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qproc.linalg import (
    TOL_HERM,
    DimensionError,
    as_square,
    check_unitary,
    hermitian_eig,
    uhlmann_fidelity,
)
from qproc.processor import Channel, Processor, choi_state, mixed_program_channel, program_kraus


def process_fidelity(c1: Channel, c2: Channel) -> float:
    """Uhlmann fidelity of the two Choi states."""
    if c1.data_dim != c2.data_dim:
        raise DimensionError(f"channels act on dimensions {c1.data_dim} and {c2.data_dim}")
    return uhlmann_fidelity(choi_state(c1), choi_state(c2))


def process_fidelity_unitary(u, c: Channel) -> float:
    """Fidelity of ``c`` with the unitary channel of ``u``:
    ``sum_j |Tr(U^+ K_j)|^2 / D^2``."""
    u = check_unitary(u, name="target")
    d = c.data_dim
    if u.shape[0] != d:
        raise DimensionError(f"target has dimension {u.shape[0]}, channel acts on {d}")
    traces = np.einsum("ab,kab->k", u.conj(), c.kraus)
    return float(np.sum(np.abs(traces) ** 2) / d**2)


@dataclass(frozen=True)
class MMatrix:
    """Hermitian kernel with ``F(U, T_Xi) = <Xi| M |Xi>``."""

    entries: np.ndarray
    target: np.ndarray = field(repr=False)

    def fidelity(self, xi) -> float:
        xi = np.asarray(xi, dtype=complex).reshape(-1)
        if xi.shape[0] != self.entries.shape[0]:
            raise DimensionError("program dimension does not match M")
        return float(np.real(np.vdot(xi, self.entries @ xi)))

    def fidelity_mixed(self, xi) -> float:
        """``Tr(M xi)`` for a program density matrix."""
        return float(np.real(np.trace(self.entries @ as_square(xi))))

    @property
    def spectrum(self) -> np.ndarray:
        return hermitian_eig(self.entries)[0]


def m_matrix(p: Processor, u) -> MMatrix:
    u = check_unitary(u, name="target")
    d = p.data_dim
    if u.shape[0] != d:
        raise DimensionError(f"target has dimension {u.shape[0]}, processor data dimension is {d}")
    # c[j, k] = Tr(U^+ A_jk)
    c = np.einsum("ab,jkab->jk", u.conj(), p.blocks)
    m = c.conj().T @ c / d**2
    m = (m + m.conj().T) / 2
    return MMatrix(m, u)


@dataclass(frozen=True)
class OptimalProgramResult:
    program: np.ndarray
    fidelity: float
    eigenvalues: np.ndarray


def optimal_program(p: Processor, u) -> OptimalProgramResult:
    """Best pure program for target ``u``: the top eigenvector of M.

    The kernel is built so that ``F = Xi^+ M Xi`` in terms of the program
    amplitudes themselves, so no conjugation is needed.  When the top
    eigenvalue is degenerate every unit vector in that eigenspace is optimal;
    the phase-fixed eigenvector is returned.
    """
    m = m_matrix(p, u)
    w, v = hermitian_eig(m.entries, TOL_HERM)
    return OptimalProgramResult(v[:, 0].copy(), float(np.clip(w[0], 0.0, 1.0)), w)


def best_basis_program(u_ops, u) -> tuple[int, float]:
    """Index of the member with the largest ``|Tr(U^+ U_k)|^2 / D^2``; ties go
    to the lowest index."""
    u_ops = list(u_ops)
    if not u_ops:
        raise ValueError("no candidate operators")
    u = check_unitary(u, name="target")
    d = u.shape[0]
    scores = []
    for k, op in enumerate(u_ops):
        op = check_unitary(op, name=f"operator {k}")
        if op.shape != u.shape:
            raise DimensionError(f"operator {k} has shape {op.shape}, target has {u.shape}")
        scores.append(abs(np.vdot(u, op)) ** 2 / d**2)
    best = int(np.argmax(scores))
    return best, float(scores[best])


def epsilon_g(p: Processor, targets, program_candidates=None) -> float:
    """Worst-case over ``targets`` of the best achievable infidelity.

    Without candidates the inner maximum runs over all programs, mixed ones
    included; since the fidelity to a unitary is linear in the program density
    matrix it is attained by a pure program and equals the top eigenvalue of
    M.  With ``program_candidates`` (vectors or density matrices) the maximum
    runs over that finite list.
    """
    targets = list(targets)
    if not targets:
        raise ValueError("no targets")
    worst = np.inf
    for u in targets:
        if program_candidates is None:
            best = optimal_program(p, u).fidelity
        else:
            best = max(_candidate_fidelity(p, u, xi) for xi in program_candidates)
        worst = min(worst, best)
    return float(1.0 - worst)


def _candidate_fidelity(p: Processor, u, xi) -> float:
    xi = np.asarray(xi, dtype=complex)
    if xi.ndim == 2 and xi.shape[0] == xi.shape[1] and xi.shape[0] > 1:
        return process_fidelity_unitary(u, mixed_program_channel(p, xi))
    return process_fidelity_unitary(u, program_kraus(p, xi))
