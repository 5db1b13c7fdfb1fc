"""Photon-number squeezing: Mandel Q, optimal local-oscillator shaping and
spectral filtering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ApproximationDomainError, DimensionMismatch, GridMismatch, InvalidFilter, UndefinedQ
from .gaussian import GaussianState, mean_photon_total
from .modes import FrequencyGrid
from .photon_stats import STRONG_FIELD_RATIO, photon_covariance_matrix

__all__ = [
    "FilterFunction",
    "FilteredQ",
    "mandel_q",
    "optimal_lo",
    "apply_filter",
    "filter_matrix",
    "filtered_q",
    "strong_field_holds",
]


@dataclass(frozen=True, eq=False)
class FilterFunction:
    """Amplitude transmission ``c(omega)`` per bin, ``0 <= c <= 1``."""

    grid: FrequencyGrid
    c: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=float).reshape(-1)
        if c.size != self.grid.num_bins:
            raise InvalidFilter(f"filter has {c.size} values, grid has {self.grid.num_bins} bins")
        if np.any(~np.isfinite(c)) or np.any(c < 0) or np.any(c > 1):
            raise InvalidFilter("transmission amplitudes must lie in [0, 1]")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_intensity(cls, grid, transmission):
        t = np.asarray(transmission, dtype=float)
        if np.any(t < 0) or np.any(t > 1):
            raise InvalidFilter("intensity transmission must lie in [0, 1]")
        return cls(grid, np.sqrt(t))


def strong_field_holds(state, ratio=STRONG_FIELD_RATIO):
    excess = np.max(np.abs(state.variance - 0.5 * np.eye(2 * state.num_modes)))
    return bool(np.max(np.abs(state.mean)) >= ratio * excess)


def mandel_q(state, path="auto"):
    """Whole-pulse Mandel Q.

    ``path="strong"`` evaluates ``2 u^T V u - 1`` for the unit mean
    direction ``u``; ``path="exact"`` sums the exact Gaussian covariances;
    ``"auto"`` picks the strong-field form only when the coherent amplitude
    dominates the variance excess.
    """
    if path == "auto":
        path = "strong" if strong_field_holds(state) else "exact"
    if path == "strong":
        r = np.linalg.norm(state.mean)
        if r == 0:
            raise UndefinedQ("no coherent amplitude; strong-field Q undefined")
        u = state.mean / r
        return float(2.0 * u @ state.variance @ u - 1.0)
    if path == "exact":
        n = mean_photon_total(state)
        if n <= 0:
            raise UndefinedQ("mean photon number is zero")
        var = float(np.sum(photon_covariance_matrix(state)))
        return (var - n) / n
    raise ValueError(f"unknown path {path!r}")


def optimal_lo(variance):
    """Mean-field direction minimizing Q, and the Q range.

    Returns ``(direction, q_min, q_max)``; ``direction`` is the eigenvector of
    the smallest eigenvalue, first nonzero component positive.
    """
    V = np.asarray(variance, dtype=float)
    w, U = np.linalg.eigh(0.5 * (V + V.T))
    u = U[:, 0]
    nz = np.flatnonzero(np.abs(u) > 1e-12)
    if nz.size and u[nz[0]] < 0:
        u = -u
    return u, float(2.0 * (w[0] - 0.5)), float(2.0 * (w[-1] - 0.5))


def apply_filter(state, filt):
    """Transmit a bin-level state through ``filt``, admixing vacuum."""
    if state.num_modes != filt.grid.num_bins:
        raise GridMismatch(f"state has {state.num_modes} bins, filter {filt.grid.num_bins}")
    c = np.concatenate([filt.c, filt.c])
    V = c[:, None] * state.variance * c[None, :] + np.diag(0.5 * (1.0 - c**2))
    return GaussianState(c * state.mean, V, state.label)


def filter_matrix(basis, filt):
    """``c_nn' = sum c^2 f_n f_n' dw`` for a real basis."""
    if basis.grid != filt.grid:
        raise GridMismatch("filter and basis grids differ")
    if not basis.is_real():
        raise ApproximationDomainError(
            "filtered Q is implemented for real mode functions only", condition="iii"
        )
    F = basis.matrix.real
    m = (F * filt.c**2) @ F.T * basis.grid.delta_omega
    return 0.5 * (m + m.T)


@dataclass(frozen=True, eq=False)
class FilteredQ:
    q: float
    a_squared: float
    c_matrix: np.ndarray
    vector: np.ndarray

    def to_dict(self):
        return {"q_f": self.q, "a_squared": self.a_squared, "c_matrix": self.c_matrix.tolist()}


def filtered_q(basis, mean_x, mean_p, variance, filt):
    """Strong-field Q of the filtered pulse.

    ``Q^f = 2 v^T (V - I/2) v`` where ``v = (c X, c P) / sqrt(X c X + P c P)``
    has squared length ``A^2 <= 1``.
    """
    mean_x = np.asarray(mean_x, dtype=float)
    mean_p = np.zeros_like(mean_x) if mean_p is None else np.asarray(mean_p, dtype=float)
    V = np.asarray(variance, dtype=float)
    N = basis.size
    if mean_x.shape != (N,) or mean_p.shape != (N,) or V.shape != (2 * N, 2 * N):
        raise DimensionMismatch("means and variance must match the basis size")
    cm = filter_matrix(basis, filt)
    norm2 = mean_x @ cm @ mean_x + mean_p @ cm @ mean_p
    if norm2 <= 0:
        raise UndefinedQ("filter blocks the whole coherent field")
    v = np.concatenate([cm @ mean_x, cm @ mean_p]) / np.sqrt(norm2)
    q = float(2.0 * v @ (V - 0.5 * np.eye(2 * N)) @ v)
    return FilteredQ(q, float(v @ v), cm, v)
