"""Processors, the channels they induce, and channel utilities.

The global space is ``data (x) program`` with the program index varying
fastest: basis index ``i = d * N + p``.  A processor is stored as its block
grid ``blocks[j, k] = A_jk`` so that ``G = sum_jk A_jk (x) |j><k|``.
Program basis states are labelled ``0 .. N-1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qproc.linalg import (
    TOL_PSD,
    TOL_UNIT,
    DimensionError,
    ValidationError,
    as_square,
    check_density,
    check_unitary,
    hermitian_eig,
    hs_inner,
)


@dataclass(frozen=True)
class Processor:
    blocks: np.ndarray  # (N, N, D, D)

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=complex)
        if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2] != b.shape[3]:
            raise DimensionError(f"blocks must have shape (N, N, D, D), got {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "blocks", b)

    @property
    def data_dim(self) -> int:
        return self.blocks.shape[2]

    @property
    def program_dim(self) -> int:
        return self.blocks.shape[0]

    @property
    def global_unitary(self) -> np.ndarray:
        n, d = self.program_dim, self.data_dim
        return self.blocks.transpose(2, 0, 3, 1).reshape(d * n, d * n).copy()

    def block(self, j: int, k: int) -> np.ndarray:
        return self.blocks[j, k]


@dataclass(frozen=True)
class Channel:
    """Channel on the data register given by its Kraus operators."""

    kraus: np.ndarray  # (K, D, D)

    def __post_init__(self):
        k = np.asarray(self.kraus, dtype=complex)
        if k.ndim == 2:
            k = k[None]
        if k.ndim != 3 or k.shape[1] != k.shape[2]:
            raise DimensionError(f"Kraus operators must be square, got {k.shape}")
        k.setflags(write=False)
        object.__setattr__(self, "kraus", k)

    @property
    def data_dim(self) -> int:
        return self.kraus.shape[1]

    def normalization_deviation(self) -> float:
        s = np.einsum("kba,kbc->ac", self.kraus.conj(), self.kraus)
        return float(np.linalg.norm(s - np.eye(self.data_dim)))

    @classmethod
    def unitary(cls, u) -> "Channel":
        return cls(check_unitary(u)[None])


@dataclass(frozen=True)
class ValidationReport:
    """Largest HS-norm violation of each block relation.

    ``column`` is ``sum_j A_jk1^+ A_jk2 = delta I`` (from ``G^+G = I``), ``row``
    is ``sum_k A_j1k A_j2k^+ = delta I`` (from ``GG^+ = I``) and
    ``row_printed`` is the variant ``sum_k A_j1k^+ A_j2k = delta I``, which
    holds for controlled-unitary processors but not for a general unitary G.
    ``row_printed`` is informational and does not enter :attr:`passed`.
    """

    column: float
    row: float
    row_printed: float
    unitarity: float
    tol: float = TOL_UNIT

    @property
    def passed(self) -> bool:
        return max(self.column, self.row, self.unitarity) <= self.tol

    def as_dict(self) -> dict:
        return {
            "column": self.column,
            "row": self.row,
            "row_printed": self.row_printed,
            "unitarity": self.unitarity,
            "tolerance": self.tol,
            "passed": self.passed,
        }


def from_global_unitary(g, data_dim: int, program_dim: int, tol: float = TOL_UNIT) -> Processor:
    g = as_square(g)
    if g.shape[0] != data_dim * program_dim:
        raise DimensionError(
            f"G is {g.shape[0]}x{g.shape[0]}, expected {data_dim * program_dim} = {data_dim}*{program_dim}"
        )
    check_unitary(g, tol, "G")
    d, n = data_dim, program_dim
    return Processor(g.reshape(d, n, d, n).transpose(1, 3, 0, 2))


def _max_block_deviation(s: np.ndarray) -> float:
    n, d = s.shape[0], s.shape[2]
    target = np.einsum("jk,ab->jkab", np.eye(n), np.eye(d))
    return float(np.max(np.linalg.norm(s - target, axis=(2, 3))))


def validate(p: Processor, tol: float = TOL_UNIT) -> ValidationReport:
    a = p.blocks
    column = np.einsum("jkba,jlbc->klac", a.conj(), a)
    row = np.einsum("ikab,jkcb->ijac", a, a.conj())
    row_printed = np.einsum("ikba,jkbc->ijac", a.conj(), a)
    g = p.global_unitary
    unitarity = float(np.linalg.norm(g.conj().T @ g - np.eye(g.shape[0])))
    return ValidationReport(
        column=_max_block_deviation(column),
        row=_max_block_deviation(row),
        row_printed=_max_block_deviation(row_printed),
        unitarity=unitarity,
        tol=tol,
    )


def as_program(xi, program_dim: int, tol: float = TOL_UNIT) -> np.ndarray:
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if xi.shape[0] != program_dim:
        raise DimensionError(f"program has dimension {xi.shape[0]}, processor expects {program_dim}")
    norm = np.linalg.norm(xi)
    if abs(norm - 1) > tol:
        raise ValidationError(f"program state has norm {norm:.12g}")
    return xi


def program_kraus(p: Processor, xi) -> Channel:
    """Kraus operators ``A_j(Xi) = sum_k A_jk <k|Xi>``."""
    xi = as_program(xi, p.program_dim)
    return Channel(np.einsum("jkab,k->jab", p.blocks, xi))


def mixed_program_channel(p: Processor, xi, tol: float = TOL_PSD) -> Channel:
    """Channel induced by a mixed program ``xi`` (an N x N density matrix)."""
    xi = as_square(xi)
    if xi.shape[0] != p.program_dim:
        raise DimensionError(f"program has dimension {xi.shape[0]}, processor expects {p.program_dim}")
    xi = check_density(xi, tol)
    w, v = hermitian_eig(xi, tol)
    keep = w > tol
    ops = [np.sqrt(wi) * np.einsum("jkab,k->jab", p.blocks, v[:, i]) for i, wi in zip(np.flatnonzero(keep), w[keep])]
    return Channel(np.concatenate(ops, axis=0))


def processor_output(p: Processor, rho, xi) -> np.ndarray:
    """``Tr_p[G (rho (x) xi) G^+]`` evaluated on the full space.

    ``xi`` may be a program vector or a program density matrix.
    """
    rho = as_square(rho)
    xi = np.asarray(xi, dtype=complex)
    if xi.ndim == 1:
        xi = np.outer(xi, xi.conj())
    d, n = p.data_dim, p.program_dim
    if rho.shape[0] != d or xi.shape[0] != n:
        raise DimensionError("state dimensions do not match the processor")
    g = p.global_unitary
    out = g @ np.kron(rho, xi) @ g.conj().T
    return np.einsum("apbp->ab", out.reshape(d, n, d, n))


def apply_channel(c: Channel, rho) -> np.ndarray:
    rho = as_square(rho)
    if rho.shape[0] != c.data_dim:
        raise DimensionError(f"state has dimension {rho.shape[0]}, channel acts on {c.data_dim}")
    return np.einsum("kab,bc,kdc->ad", c.kraus, rho, c.kraus.conj())


def choi_state(c: Channel) -> np.ndarray:
    """``(I (x) T)(|Phi><Phi|)`` with ``|Phi> = sum_j |jj> / sqrt(D)``."""
    d = c.data_dim
    # (I (x) K)|Phi> has entry [a*D + b] = K[b, a] / sqrt(D)
    vecs = c.kraus.transpose(0, 2, 1).reshape(-1, d * d) / np.sqrt(d)
    return vecs.T @ vecs.conj()


def outcome_probabilities(c: Channel, psi) -> np.ndarray:
    """Probability of each Kraus outcome on the pure input ``psi``."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape[0] != c.data_dim:
        raise DimensionError(f"state has dimension {psi.shape[0]}, channel acts on {c.data_dim}")
    out = c.kraus @ psi
    return np.sum(np.abs(out) ** 2, axis=1)


def success_probability(c: Channel, u, tol_prop: float = 1e-8) -> float:
    """Total weight of the Kraus operators that are multiples of ``u``.

    ``K`` counts as proportional to ``U`` when the Schwarz inequality
    ``|(U|K)|^2 <= D (K|K)`` is saturated to within ``tol_prop``; its weight
    is ``|(U|K)|^2 / D^2``.
    """
    u = check_unitary(u, name="target")
    d = c.data_dim
    if u.shape[0] != d:
        raise DimensionError(f"target has dimension {u.shape[0]}, channel acts on {d}")
    total = 0.0
    for k in c.kraus:
        nk = hs_inner(k, k).real
        if np.sqrt(nk) < 1e-12:
            continue
        ov = abs(hs_inner(u, k)) ** 2
        if abs(ov - d * nk) <= tol_prop:
            total += ov / d**2
    return total


def change_program_basis(p: Processor, v) -> Processor:
    """Blocks of ``(I (x) V^+) G (I (x) V)``: the processor seen in the
    program basis given by the columns of ``v``."""
    v = check_unitary(v, name="basis change")
    if v.shape[0] != p.program_dim:
        raise DimensionError("basis change has the wrong dimension")
    return Processor(np.einsum("aj,abxy,bk->jkxy", v.conj(), p.blocks, v))


def diagonal_operators(p: Processor, tol: float = TOL_UNIT) -> list[np.ndarray] | None:
    """Return ``[U_k]`` if ``A_jk = delta_jk U_k`` within ``tol``, else None."""
    n = p.program_dim
    off = p.blocks.copy()
    off[np.arange(n), np.arange(n)] = 0
    if np.max(np.abs(off), initial=0.0) > tol:
        return None
    return [p.blocks[k, k].copy() for k in range(n)]
