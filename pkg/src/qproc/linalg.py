"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` complex arrays.  Validation thresholds are
absolute Hilbert-Schmidt norms scaled by the matrix dimension.
"""

from __future__ import annotations

import numpy as np

TOL_HERM = 1e-10
TOL_UNIT = 1e-10
TOL_PSD = 1e-10
TOL_FID = 1e-8
TOL_PHASE = 1e-8


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class ValidationError(ValueError):
    """An operand violates a structural precondition (Hermitian, unitary, ...)."""


class NotPSDError(ValidationError):
    pass


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    return m


def as_square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitian_deviation(m: np.ndarray) -> float:
    return float(np.linalg.norm(m - m.conj().T))


def unitary_deviation(u: np.ndarray) -> float:
    u = as_square(u)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


def is_unitary(u, tol: float = TOL_UNIT) -> bool:
    u = as_square(u)
    return unitary_deviation(u) <= tol * u.shape[0]


def check_unitary(u, tol: float = TOL_UNIT, name: str = "matrix") -> np.ndarray:
    u = as_square(u)
    dev = unitary_deviation(u)
    if dev > tol * u.shape[0]:
        raise ValidationError(f"{name} is not unitary (|U^+U - I| = {dev:.3g})")
    return u


def check_hermitian(m, tol: float = TOL_HERM) -> np.ndarray:
    m = as_square(m)
    dev = hermitian_deviation(m)
    if dev > tol * m.shape[0]:
        raise ValidationError(f"matrix is not Hermitian (|M - M^+| = {dev:.3g})")
    return m


def check_density(rho, tol: float = TOL_PSD) -> np.ndarray:
    """Return ``rho`` as an array after checking it is a density matrix."""
    rho = check_hermitian(rho, tol)
    tr = np.trace(rho)
    if abs(tr - 1) > tol * rho.shape[0]:
        raise ValidationError(f"density matrix has trace {tr:.6g}")
    lam_min = np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0]
    if lam_min < -tol:
        raise NotPSDError(f"density matrix has eigenvalue {lam_min:.3g}")
    return rho


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt product ``Tr(A^+ B)``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def hs_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=complex)))


def operator_norm(a) -> float:
    """Largest singular value."""
    a = as_matrix(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    vecs = vecs.copy()
    for i in range(vecs.shape[1]):
        col = vecs[:, i]
        big = np.flatnonzero(np.abs(col) > TOL_PHASE)
        if big.size:
            c = col[big[0]]
            vecs[:, i] = col * (abs(c) / c)
    return vecs


def hermitian_eig(m, tol: float = TOL_HERM) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Eigenvalues are returned in descending order.  Each eigenvector column is
    rotated so that its first entry of modulus above ``TOL_PHASE`` is real and
    positive, which makes the output reproducible.  Within a degenerate
    eigenspace the basis is still arbitrary.
    """
    m = check_hermitian(m, tol)
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w[::-1].copy(), _fix_phases(v[:, ::-1])


def psd_sqrt(rho, tol: float = TOL_PSD) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything more negative
    raises :class:`NotPSDError`.  Eigenvalues at roundoff level relative to
    the largest one are also dropped so that numerically pure states give an
    exactly rank-one root.
    """
    rho = check_hermitian(rho, tol)
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    if w.size and w[0] < -tol:
        raise NotPSDError(f"matrix has eigenvalue {w[0]:.3g} < -{tol:g}")
    cutoff = rho.shape[0] * np.finfo(float).eps * max(w[-1], 0.0) if w.size else 0.0
    w = np.where(w > cutoff, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def matrix_exp_skew(h, tol: float = TOL_HERM) -> np.ndarray:
    """``exp(H)`` for skew-Hermitian ``H``, through the spectrum of ``iH``."""
    h = as_square(h)
    dev = float(np.linalg.norm(h + h.conj().T))
    if dev > tol * h.shape[0]:
        raise ValidationError(f"generator is not skew-Hermitian (|H + H^+| = {dev:.3g})")
    a = 1j * h
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    # H = -i A, so exp(H) = V exp(-i w) V^+
    return (v * np.exp(-1j * w)) @ v.conj().T


def uhlmann_fidelity(rho1, rho2, tol: float = TOL_PSD) -> float:
    """``[Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2``.

    Evaluated as the squared trace norm of ``sqrt(rho1) sqrt(rho2)``; this keeps
    roundoff eigenvalues from being square-rooted into the result.
    """
    rho1 = as_square(rho1)
    rho2 = as_square(rho2)
    if rho1.shape != rho2.shape:
        raise DimensionError(f"dimension mismatch {rho1.shape} vs {rho2.shape}")
    s1 = psd_sqrt(rho1, tol)
    s2 = psd_sqrt(rho2, tol)
    sv = np.linalg.svd(s1 @ s2, compute_uv=False)
    return float(np.clip(np.sum(sv) ** 2, 0.0, 1.0))
