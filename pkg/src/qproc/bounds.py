"""Lower bounds on the program dimension needed to approximate a set of unitaries.

Two programs that reach fidelity ``1 - eps`` on targets ``U1`` and ``U2``
overlap by at most ``(F/D)|(U1|U2)| + 2 sqrt(eps) + eps`` where
``F = min(1, (eps D + 2 sqrt(eps D)) / eta)`` and ``eta`` measures how well
``U1`` and ``U2`` can be told apart on a single pure state.  Families of unit
vectors whose pairwise overlaps stay below ``1/(K-1)`` are linearly
independent, which turns the overlap ceiling into a dimension count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

from qproc.linalg import DimensionError, check_unitary, hs_inner

TOL_ETA = 1e-12
TOL_RANK = 1e-10


@dataclass(frozen=True)
class UnitarySet:
    members: list
    labels: list = field(default_factory=list)

    def __post_init__(self):
        members = [check_unitary(u, name=f"member {k}") for k, u in enumerate(self.members)]
        if not members:
            raise ValueError("empty unitary set")
        d = members[0].shape[0]
        if any(u.shape != (d, d) for u in members):
            raise DimensionError("all members must share one dimension")
        labels = list(self.labels) or [str(k) for k in range(len(members))]
        if len(labels) != len(members):
            raise ValueError("one label per member")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.members[0].shape[0]

    def __len__(self) -> int:
        return len(self.members)


def _relative_unitary(u1, u2) -> np.ndarray:
    u1 = check_unitary(u1, name="U1")
    u2 = check_unitary(u2, name="U2")
    if u1.shape != u2.shape:
        raise DimensionError(f"shape mismatch {u1.shape} vs {u2.shape}")
    return u1.conj().T @ u2


def eta(u1, u2) -> float:
    """``max_psi 1 - |<psi|U1^+ U2|psi>|^2``.

    ``W = U1^+ U2`` is normal, so its numerical range is the convex hull of
    its eigenvalues on the unit circle.  If the eigenphases fit inside an arc
    of length ``L < pi`` the hull misses the origin by ``cos(L/2)``; otherwise
    it contains the origin and ``eta = 1``.
    """
    w = _relative_unitary(u1, u2)
    phases = np.sort(np.angle(np.linalg.eigvals(w)))
    gaps = np.diff(np.concatenate([phases, [phases[0] + 2 * np.pi]]))
    arc = 2 * np.pi - np.max(gaps)
    if arc >= np.pi:
        return 1.0
    return float(np.clip(np.sin(arc / 2) ** 2, 0.0, 1.0))


def eta_by_sampling(u1, u2, samples: int = 10_000, refine: int = 5, seed=None) -> float:
    """Brute-force estimate of :func:`eta` from random states plus local
    minimisation of ``|<psi|W|psi>|^2`` started from the best samples."""
    w = _relative_unitary(u1, u2)
    d = w.shape[0]
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal((samples, d)) + 1j * rng.standard_normal((samples, d))
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    vals = np.abs(np.einsum("si,ij,sj->s", psi.conj(), w, psi)) ** 2
    best = float(vals.min())

    def objective(x):
        v = x[:d] + 1j * x[d:]
        n = np.vdot(v, v).real
        return abs(np.vdot(v, w @ v)) ** 2 / n**2

    for idx in np.argsort(vals)[:refine]:
        x0 = np.concatenate([psi[idx].real, psi[idx].imag])
        res = minimize(objective, x0, method="BFGS", options={"gtol": 1e-12})
        best = min(best, float(res.fun))
    return float(np.clip(1.0 - best, 0.0, 1.0))


def pair_factor(u1, u2, epsilon: float, d: int | None = None) -> float:
    """``F = min(1, (eps D + 2 sqrt(eps D)) / eta)``; 1 when eta vanishes."""
    d = np.asarray(u1).shape[0] if d is None else d
    e = eta(u1, u2)
    if e <= TOL_ETA:
        return 1.0
    return min(1.0, (epsilon * d + 2 * math.sqrt(epsilon * d)) / e)


def _check_epsilon(epsilon: float) -> None:
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")


def overlap_bound(u1, u2, epsilon: float, d: int | None = None) -> float:
    """Ceiling on ``|<Xi1|Xi2>|`` for programs reaching fidelity ``1 - epsilon``
    on ``u1`` and ``u2``.  Values above 1 mean no constraint."""
    _check_epsilon(epsilon)
    d = np.asarray(u1).shape[0] if d is None else d
    f = pair_factor(u1, u2, epsilon, d)
    return f / d * abs(hs_inner(u1, u2)) + 2 * math.sqrt(epsilon) + epsilon


def q_value(y_max: float, epsilon: float, variant: str = "general") -> float:
    """``q = Y_max + 2 sqrt(eps) + eps``.

    ``variant="printed"`` uses ``2 sqrt(2 eps)`` instead, the form quoted with
    the Pauli example; it does not reproduce that example's thresholds.
    """
    if y_max < 0 or epsilon < 0:
        raise ValueError("y_max and epsilon must be non-negative")
    if variant == "general":
        return y_max + 2 * math.sqrt(epsilon) + epsilon
    if variant == "printed":
        return y_max + 2 * math.sqrt(2 * epsilon) + epsilon
    raise ValueError(f"unknown variant {variant!r}")


def k_q(q: float) -> int | None:
    """Largest integer strictly below ``1/q + 1``.

    Returns None for ``q <= 0``: then any number of program vectors must be
    linearly independent.
    """
    if q <= 0:
        return None
    # exact rational arithmetic on the float keeps the strict boundary honest
    return math.ceil(1 / Fraction(q))


@dataclass(frozen=True)
class BoundReport:
    labels: list
    Y: np.ndarray
    eta: np.ndarray
    y_max: float
    q_max: float
    K_q: int | None
    min_dimension: int
    epsilon: float
    variant: str = "general"

    def as_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "Y": self.Y.tolist(),
            "eta": self.eta.tolist(),
            "y_max": self.y_max,
            "q": self.q_max,
            "K_q": self.K_q,
            "min_dimension": self.min_dimension,
            "epsilon": self.epsilon,
            "q_variant": self.variant,
        }


def dimension_bound(uset: UnitarySet, epsilon: float, variant: str = "general") -> BoundReport:
    """Minimum program dimension for reaching fidelity ``1 - epsilon`` on every
    member of ``uset`` (whole-set report, no subset search)."""
    _check_epsilon(epsilon)
    m, d = len(uset), uset.dim
    y = np.zeros((m, m))
    et = np.zeros((m, m))
    for j in range(m):
        for k in range(j, m):
            uj, uk = uset.members[j], uset.members[k]
            et[j, k] = et[k, j] = eta(uj, uk)
            y[j, k] = y[k, j] = pair_factor(uj, uk, epsilon, d) / d * abs(hs_inner(uj, uk))
    off = y[~np.eye(m, dtype=bool)]
    y_max = float(off.max()) if off.size else 0.0
    q = q_value(y_max, epsilon, variant)
    kq = k_q(q)
    min_dim = m if kq is None or m <= kq else kq
    return BoundReport(list(uset.labels), y, et, y_max, q, kq, min_dim, epsilon, variant)


def overlap_hypothesis(vectors, tol: float = TOL_RANK) -> bool:
    """True if every pairwise overlap of the unit vectors is below ``1/(K-1)``.

    The threshold is shrunk to ``(1 - tol)/(K-1)`` so that, by Gershgorin,
    the Gram matrix keeps every eigenvalue above ``tol``; without the margin
    two parallel vectors can pass on roundoff alone.
    """
    v = np.asarray(vectors, dtype=complex)
    k = v.shape[0]
    if k < 2:
        return True
    g = np.abs(v.conj() @ v.T)
    off = g[~np.eye(k, dtype=bool)]
    return bool(np.all(off < (1 - tol) / (k - 1)))


def linear_independence_oracle(vectors, tol: float = TOL_RANK) -> bool:
    """Gram-matrix rank test; ``vectors`` holds one vector per row."""
    v = np.asarray(vectors, dtype=complex)
    if v.ndim != 2:
        raise DimensionError("expected a 2-d array of row vectors")
    gram = v.conj() @ v.T
    lam = np.linalg.eigvalsh((gram + gram.conj().T) / 2)
    return bool(np.sum(lam > tol) == v.shape[0])
