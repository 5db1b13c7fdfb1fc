"""Recovering the X-quadrature variance matrix from spectral photon correlations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ApproximationDomainError, DimensionMismatch, InsufficientData
from .modes import ModeBasis
from .photon_stats import CorrelationData

__all__ = [
    "Reconstruction",
    "Diagonalization",
    "MonteCarloSummary",
    "fill_masked",
    "reconstruct_vxx",
    "reconstruction_error",
    "diagonalize_vxx",
    "squeezing_db",
    "monte_carlo_uncertainty",
    "MAX_MASKED_FRACTION",
]

MAX_MASKED_FRACTION = 0.3
VACUUM_VARIANCE = 0.5


@dataclass(frozen=True, eq=False)
class Reconstruction:
    v_xx: np.ndarray
    fill_fraction: float
    filled_by_symmetry: int
    filled_by_zero: int


@dataclass(frozen=True, eq=False)
class Diagonalization:
    eigenvalues: np.ndarray
    rotation: np.ndarray  # columns are eigenvectors
    squeezing_db: float
    modes: ModeBasis | None = None

    def to_dict(self):
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "rotation": self.rotation.tolist(),
            "squeezing_db": self.squeezing_db,
        }


@dataclass(frozen=True)
class MonteCarloSummary:
    trials: int
    point_estimate_db: float
    min_db: float
    max_db: float
    median_db: float
    mode_db: float
    mean_db: float
    q25_db: float
    q75_db: float

    @property
    def iqr_db(self):
        return self.q75_db - self.q25_db

    def to_dict(self):
        d = dict(self.__dict__)
        d["iqr_db"] = self.iqr_db
        return d


def squeezing_db(variance):
    """Quadrature variance in dB relative to the vacuum value 1/2."""
    return float(10.0 * np.log10(variance / VACUUM_VARIANCE))


def _kernel(corr):
    if isinstance(corr, CorrelationData):
        return corr.c_normalized, corr.mask
    c = np.array(corr, dtype=float)
    return c, ~np.isfinite(c)


def fill_masked(c, mask):
    """Complete missing entries from their mirror, else with zero.

    Returns ``(filled, n_symmetric, n_zero)``.
    """
    c = np.array(c, dtype=float)
    mask = np.asarray(mask, bool)
    mirror_ok = mask & ~mask.T
    c[mirror_ok] = c.T[mirror_ok]
    both = mask & mask.T
    c[both] = 0.0
    return c, int(mirror_ok.sum()), int(both.sum())


def _check_basis(basis):
    if not basis.is_real():
        raise ApproximationDomainError("reconstruction needs real mode functions", condition="iii")
    return basis.matrix.real


def reconstruct_vxx(corr, basis, max_masked=MAX_MASKED_FRACTION, details=False):
    """``V_XX = I/2 + 1/2 sum_jj' C(omega_j, omega_j') f_k(omega_j) f_k'(omega_j') dw^2``.

    ``corr`` is a :class:`CorrelationData` (or square array, NaN = missing)
    holding the continuous correlation on the grid of ``basis``.
    """
    F = _check_basis(basis)
    c, mask = _kernel(corr)
    J = basis.grid.num_bins
    if c.shape != (J, J):
        raise DimensionMismatch(f"correlation is {c.shape}, grid has {J} bins")
    frac = float(mask.mean())
    if frac > max_masked:
        raise InsufficientData(
            f"{frac:.1%} of correlation entries are masked (limit {max_masked:.0%})"
        )
    c, n_sym, n_zero = fill_masked(c, mask)
    dw = basis.grid.delta_omega
    v = 0.5 * np.eye(basis.size) + 0.5 * F @ c @ F.T * dw**2
    v = 0.5 * (v + v.T)
    if details:
        return Reconstruction(v, frac, n_sym, n_zero)
    return v


def reconstruction_error(sigma_c, basis):
    """Standard deviations of the reconstructed ``V_XX`` entries.

    Assumes independent errors ``sigma_c`` on the sampled correlation
    entries ``C(omega_j, omega_j')``. Each entry enters with weight
    ``f_k f_k' dw^2 / 2``, so ``<dV_kk'^2> = 1/4 sum sigma^2 f_k^2 f_k'^2 dw^4``
    (the continuum double integral with error density ``sigma dw``).
    """
    F = _check_basis(basis)
    sigma = np.asarray(sigma_c, dtype=float)
    if np.any(sigma < 0) or not np.all(np.isfinite(sigma)):
        raise ValueError("sigma_c must be finite and nonnegative")
    s2 = sigma**2
    if s2.ndim == 0:
        s2 = np.full((basis.grid.num_bins,) * 2, float(s2))
    dw = basis.grid.delta_omega
    F2 = F**2
    return np.sqrt(0.25 * F2 @ s2 @ F2.T * dw**4)


def _fix_signs(vectors):
    vectors = vectors.copy()
    for i in range(vectors.shape[1]):
        col = vectors[:, i]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            vectors[:, i] = -col
    return vectors


def diagonalize_vxx(v_xx, basis=None):
    """Eigen-decomposition with ascending eigenvalues.

    Each eigenvector has its first nonzero component positive. With ``basis``
    the rotated mode functions ``g_i = sum_k W[k, i] f_k`` are returned too.
    """
    v = np.asarray(v_xx, dtype=float)
    w, U = np.linalg.eigh(0.5 * (v + v.T))
    U = _fix_signs(U)
    modes = None
    if basis is not None:
        modes = basis.transformed(U.T, label=f"{basis.label}-diagonal".strip("-"))
    return Diagonalization(w, U, squeezing_db(w[0]), modes)


def _mode_of(values, bins=50):
    hist, edges = np.histogram(values, bins=bins)
    i = int(np.argmax(hist))
    return float(0.5 * (edges[i] + edges[i + 1]))


def monte_carlo_uncertainty(corr, sigma_c, basis, trials=1000, seed=None,
                            max_masked=MAX_MASKED_FRACTION):
    """Spread of the best squeezing under noisy correlation data.

    Every unmasked entry receives independent Gaussian noise of standard
    deviation ``sigma_c``; the noisy matrix is symmetrized by averaging with
    its transpose, reconstructed and diagonalized.
    """
    if trials < 100:
        raise ValueError("at least 100 trials required")
    F = _check_basis(basis)
    c, mask = _kernel(corr)
    base = reconstruct_vxx(CorrelationData(basis.grid, c, mask=mask), basis, max_masked)
    point = squeezing_db(np.linalg.eigvalsh(base)[0])
    filled, _, _ = fill_masked(c, mask)
    sigma = np.broadcast_to(np.asarray(sigma_c, dtype=float), c.shape)
    rng = np.random.default_rng(seed)
    dw = basis.grid.delta_omega
    N = basis.size
    out = np.empty(trials)
    for t in range(trials):
        noise = rng.standard_normal(c.shape) * sigma
        noise[mask] = 0.0
        noisy = filled + noise
        noisy[mask] = np.nan
        noisy, _, _ = fill_masked(noisy, mask)
        noisy = 0.5 * (noisy + noisy.T)
        v = 0.5 * np.eye(N) + 0.5 * F @ noisy @ F.T * dw**2
        out[t] = np.linalg.eigvalsh(0.5 * (v + v.T))[0]
    if np.any(out <= 0):
        raise InsufficientData("noise drives the variance matrix non-positive")
    db = 10.0 * np.log10(out / VACUUM_VARIANCE)
    q25, med, q75 = np.percentile(db, [25, 50, 75])
    return MonteCarloSummary(
        trials=trials,
        point_estimate_db=point,
        min_db=float(db.min()),
        max_db=float(db.max()),
        median_db=float(med),
        mode_db=_mode_of(db),
        mean_db=float(db.mean()),
        q25_db=float(q25),
        q75_db=float(q75),
    )
