"""Operational construction of a minimal mode set from measured variance matrices.

Starting from the classical envelope ``f1``, each round measures the variance
matrix over the accepted modes plus an orthonormal complement, drops the
accepted quadratures, and takes the leading eigenvector of what is left as the
next mode. Every round re-measures on a freshly orthogonalized complement; the
transformed statistics of the previous round are never reused.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ExhaustedBasis, MeasurementInvalid
from .gaussian import project
from .homodyne import simulate_tomography
from .modes import ModeBasis, ModeFunction, gram_schmidt

__all__ = [
    "SelectionResult",
    "select_modes",
    "polynomial_candidates",
    "temporary_set",
    "exact_measurement",
    "homodyne_measurement",
    "DEFAULT_EPSILON",
    "sampled_epsilon",
]

DEFAULT_EPSILON = 1e-3


@dataclass(frozen=True, eq=False)
class SelectionResult:
    basis: ModeBasis
    variances: list  # leading eigenvalue recorded when each mode k >= 2 was built
    n_modes: int
    rounds: int
    stopping_variance: float | None = None
    history: list = field(default_factory=list, repr=False)

    def to_dict(self):
        return {
            "n_modes": self.n_modes,
            "variances": list(self.variances),
            "rounds": self.rounds,
            "stopping_variance": self.stopping_variance,
        }


def polynomial_candidates(f1, count):
    """``f1, omega f1, omega^2 f1, ...`` (omega centred and scaled on the grid)."""
    grid = f1.grid
    w = grid.omega
    weight = np.abs(f1.values) ** 2
    centre = np.sum(w * weight) / np.sum(weight)
    width = np.sqrt(np.sum((w - centre) ** 2 * weight) / np.sum(weight))
    u = (w - centre) / width
    return [ModeFunction(grid, f1.values * u**k) for k in range(count)]


def temporary_set(f1, size, candidates=None):
    """Orthonormal set of ``size`` functions whose first element is ``f1``."""
    if candidates is None:
        candidates = polynomial_candidates(f1, size)
    else:
        candidates = [f1] + [c for c in candidates]
    basis = gram_schmidt(candidates[:size])
    if basis.size < size:
        raise ValueError(f"only {basis.size} candidates for a temporary set of {size}")
    return basis


def _complement_unitary(c):
    """Unitary with first row ``c``; remaining rows span its complement."""
    n = c.size
    A = np.eye(n, dtype=complex)
    A[:, 0] = c.conj()
    Q, R = np.linalg.qr(A)
    U = Q.conj().T
    U[0] = c
    return U


def _validate(v, size):
    v = np.asarray(v, dtype=float)
    if v.shape != (2 * size, 2 * size):
        raise MeasurementInvalid(f"expected a {2 * size}x{2 * size} matrix, got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise MeasurementInvalid("measured matrix contains non-finite entries")
    scale = max(1.0, float(np.max(np.abs(v))))
    if np.max(np.abs(v - v.T)) > 1e-9 * scale:
        raise MeasurementInvalid("measured matrix is not symmetric")
    if np.linalg.eigvalsh(0.5 * (v + v.T))[0] <= 0:
        raise MeasurementInvalid("measured matrix is not positive definite")
    return 0.5 * (v + v.T)


def _leading(v):
    w, U = np.linalg.eigh(v)
    u = U[:, -1]
    nz = np.flatnonzero(np.abs(u) > 1e-12)
    if nz.size and u[nz[0]] < 0:
        u = -u
    return float(w[-1]), u


def select_modes(measure, f1, temp_size, epsilon=DEFAULT_EPSILON, candidates=None):
    """Build modes ``f1, f2, ...`` in order of decreasing maximal variance.

    ``measure(basis)`` must return the ``2M x 2M`` variance matrix of the
    quadratures of ``basis`` (ordered ``[X..., P...]``). Selection stops when
    the leading variance of the remaining space is within ``epsilon`` of
    1/2; the modes accepted so far describe the pulse. Raises ExhaustedBasis
    (with the partial :class:`SelectionResult`) when the temporary set runs
    out first.
    """
    if temp_size < 2:
        raise ValueError("temporary set needs at least two functions")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not f1.is_normalized(1e-8):
        raise ValueError("f1 must be normalized")
    temp = temporary_set(f1, temp_size, candidates)
    grid = f1.grid
    accepted = [temp.matrix[0]]
    complement = temp.matrix[1:]
    variances = []
    history = []
    rounds = 0
    while True:
        if complement.shape[0] == 0:
            partial = SelectionResult(
                ModeBasis.from_matrix(grid, np.array(accepted)), variances, len(accepted), rounds,
                None, history,
            )
            raise ExhaustedBasis(
                f"temporary set of {temp_size} exhausted with variance still above 1/2 + epsilon",
                partial=partial,
            )
        rounds += 1
        current = ModeBasis.from_matrix(grid, np.vstack([np.array(accepted), complement]))
        M = current.size
        v = _validate(measure(current), M)
        r = len(accepted)
        m = M - r
        keep = np.r_[r:M, M + r : 2 * M]
        reduced = v[np.ix_(keep, keep)]
        lam, w = _leading(reduced)
        history.append({"round": rounds, "reduced_size": m, "leading_variance": lam})
        if lam <= 0.5 + epsilon:
            basis = ModeBasis.from_matrix(grid, np.array(accepted))
            return SelectionResult(basis, variances, len(accepted), rounds, lam, history)
        c = w[:m] + 1j * w[m:]
        new_mode = c @ complement
        U = _complement_unitary(c)
        complement = U[1:] @ complement
        accepted.append(new_mode)
        variances.append(lam)


def exact_measurement(state, basis):
    """Noiseless backend: project a state given on ``basis`` onto any set."""

    def measure(target):
        return project(state, basis, target).variance

    return measure


def homodyne_measurement(state, basis, shots, seed=None):
    """Sampled backend: full tomography of each requested set.

    Every call draws from its own child of ``seed``.
    """
    seeds = np.random.SeedSequence(seed)

    def measure(target):
        projected = project(state, basis, target)
        _, result = simulate_tomography(projected, shots, seeds.spawn(1)[0])
        return result.variance

    return measure


def sampled_epsilon(shots, temp_size, factor=3.0):
    """Vacuum threshold for sampled backends.

    ``factor`` standard errors of a single variance estimate, widened by
    ``sqrt(2 temp_size)`` because the leading eigenvalue of a noisy
    ``2M x 2M`` matrix sits that far above its noiseless value.
    """
    se = 0.5 * np.sqrt(2.0 / (shots - 1))
    return float(factor * se * np.sqrt(2 * temp_size))
