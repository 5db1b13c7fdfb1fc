"""Balanced homodyne detection with shaped local oscillators.

A local oscillator ``sum_k c_k f_k`` measures the quadrature
``u . (X, P)`` with ``u = (Re c, Im c) / |c|``; the measured variance is
``u^T V u``. The canonical schedule of ``N(2N+1)`` oscillator shapes makes
the map from the independent entries of ``V`` to measured variances
invertible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLO, DimensionMismatch, SingularSchedule

__all__ = [
    "LocalOscillatorShape",
    "TomographyResult",
    "measured_quadrature_variance",
    "measured_quadrature_samples",
    "tomography_schedule",
    "design_matrix",
    "determine_variance_matrix",
    "simulate_tomography",
]


@dataclass(frozen=True, eq=False)
class LocalOscillatorShape:
    coefficients: np.ndarray
    kind: str = ""  # "X", "P", "XX", "PP" or "XP"
    modes: tuple = ()

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex).reshape(-1)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def size(self):
        return self.coefficients.size

    @property
    def normalized(self):
        return abs(np.linalg.norm(self.coefficients) - 1.0) <= 1e-10

    def quadrature_vector(self):
        c = self.coefficients
        norm = np.linalg.norm(c)
        if norm == 0:
            raise DegenerateLO("local oscillator has zero amplitude")
        c = c / norm
        return np.concatenate([c.real, c.imag])

    def to_dict(self):
        return {
            "kind": self.kind,
            "modes": list(self.modes),
            "coefficients": [[z.real, z.imag] for z in self.coefficients],
        }


def _vector(state, lo):
    if lo.size != state.num_modes:
        raise DimensionMismatch(f"LO has {lo.size} coefficients, state has {state.num_modes} modes")
    return lo.quadrature_vector()


def measured_quadrature_variance(state, lo):
    u = _vector(state, lo)
    return float(u @ state.variance @ u)


def measured_quadrature_samples(state, lo, shots, seed=None, zero_mean=False):
    """Homodyne outcomes for ``shots`` pulses.

    ``zero_mean`` models the amplitude-subtracted analysis pulse, which keeps
    the variance matrix of the bright pulse but carries no mean field.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    u = _vector(state, lo)
    mean = 0.0 if zero_mean else float(u @ state.mean)
    variance = float(u @ state.variance @ u)
    rng = np.random.default_rng(seed)
    return mean + np.sqrt(variance) * rng.standard_normal(int(shots))


def tomography_schedule(num_modes):
    """The ``N(2N+1)`` oscillator shapes.

    ``f_k`` and ``i f_k`` for the diagonal, ``(f_k + f_k')/sqrt2`` and
    ``i (f_k + f_k')/sqrt2`` for ``k < k'``, and ``(f_k + i f_k')/sqrt2`` for
    every ordered pair including ``k = k'``.
    """
    N = int(num_modes)
    if N < 1:
        raise ValueError("need at least one mode")
    eye = np.eye(N)
    r = 1.0 / np.sqrt(2.0)
    shapes = [LocalOscillatorShape(eye[k], "X", (k,)) for k in range(N)]
    shapes += [LocalOscillatorShape(1j * eye[k], "P", (k,)) for k in range(N)]
    pairs = [(k, l) for k in range(N) for l in range(k + 1, N)]
    shapes += [LocalOscillatorShape(r * (eye[k] + eye[l]), "XX", (k, l)) for k, l in pairs]
    shapes += [LocalOscillatorShape(1j * r * (eye[k] + eye[l]), "PP", (k, l)) for k, l in pairs]
    shapes += [
        LocalOscillatorShape(r * (eye[k] + 1j * eye[l]), "XP", (k, l))
        for k in range(N)
        for l in range(N)
    ]
    return shapes


def _upper(num_modes):
    return np.triu_indices(2 * num_modes)


def design_matrix(schedule, num_modes):
    """Rows map the upper-triangular entries of ``V`` to ``u^T V u``."""
    iu = _upper(num_modes)
    rows = []
    for lo in schedule:
        u = lo.quadrature_vector()
        outer = np.outer(u, u)
        outer = outer + outer.T - np.diag(np.diag(outer))
        rows.append(outer[iu])
    return np.array(rows)


@dataclass(frozen=True, eq=False)
class TomographyResult:
    variance: np.ndarray
    residual: float
    condition_number: float
    measured: np.ndarray

    def to_dict(self):
        return {
            "recovered_v": self.variance.tolist(),
            "residual": self.residual,
            "condition_number": self.condition_number,
            "measured": self.measured.tolist(),
        }


def determine_variance_matrix(measurements, num_modes, schedule=None):
    """Solve for the full ``2N x 2N`` variance matrix.

    Exact for noiseless data; a least-squares estimate (with its residual
    norm) when more settings than unknowns are supplied.
    """
    N = int(num_modes)
    schedule = tomography_schedule(N) if schedule is None else list(schedule)
    y = np.asarray(measurements, dtype=float).reshape(-1)
    if y.size != len(schedule):
        raise DimensionMismatch(f"{y.size} measurements for {len(schedule)} settings")
    A = design_matrix(schedule, N)
    n_unknown = N * (2 * N + 1)
    s = np.linalg.svd(A, compute_uv=False)
    rank = int(np.sum(s > s[0] * 1e-12))
    if rank < n_unknown:
        raise SingularSchedule(f"schedule has rank {rank}, need {n_unknown}")
    x, *_ = np.linalg.lstsq(A, y, rcond=None)
    V = np.zeros((2 * N, 2 * N))
    V[_upper(N)] = x
    V = V + V.T - np.diag(np.diag(V))
    residual = float(np.linalg.norm(A @ x - y))
    return TomographyResult(V, residual, float(s[0] / s[-1]), y)


def simulate_tomography(state, shots=None, seed=None, zero_mean=True):
    """Run the whole schedule on ``state``.

    ``shots=None`` gives exact variances; otherwise each setting is estimated
    from ``shots`` simulated outcomes, with an independent stream per setting
    derived from ``seed``.
    """
    schedule = tomography_schedule(state.num_modes)
    if shots is None:
        measured = [measured_quadrature_variance(state, lo) for lo in schedule]
    else:
        root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        streams = root.spawn(len(schedule))
        measured = [
            float(np.var(measured_quadrature_samples(state, lo, shots, ss, zero_mean), ddof=1))
            for lo, ss in zip(schedule, streams)
        ]
    return schedule, determine_variance_matrix(measured, state.num_modes, schedule)
