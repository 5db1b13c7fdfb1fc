"""Frequency grids, mode functions and orthonormal mode bases.

All integrals are midpoint Riemann sums on a uniform grid, which is exactly
the frequency-bin picture: a bin quadrature couples to a mode with weight
``f(omega_j) * sqrt(delta_omega)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .errors import DegenerateBasis, GridMismatch, TruncationError

__all__ = [
    "FrequencyGrid",
    "ModeFunction",
    "ModeBasis",
    "QuadratureTransform",
    "inner_product",
    "gram_schmidt",
    "build_z",
    "haus_lai_basis",
    "soliton_grid",
    "HAUS_LAI_LABEL",
]

HAUS_LAI_LABEL = "haus-lai"

# minimum half-width, in units of omega_o, accepted by haus_lai_basis
_HAUS_LAI_MIN_SPAN = 6.0


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequency bins; bin ``j`` is centred at
    ``omega_start + (j + 1/2) * delta_omega``."""

    omega_start: float
    delta_omega: float
    num_bins: int

    def __post_init__(self):
        if not self.delta_omega > 0:
            raise ValueError(f"delta_omega must be positive, got {self.delta_omega}")
        if int(self.num_bins) != self.num_bins or self.num_bins < 2:
            raise ValueError(f"num_bins must be an integer >= 2, got {self.num_bins}")
        object.__setattr__(self, "num_bins", int(self.num_bins))
        object.__setattr__(self, "omega_start", float(self.omega_start))
        object.__setattr__(self, "delta_omega", float(self.delta_omega))

    @classmethod
    def spanning(cls, omega_min, omega_max, num_bins):
        """Grid whose bin edges run from ``omega_min`` to ``omega_max``."""
        return cls(omega_min, (omega_max - omega_min) / num_bins, num_bins)

    @property
    def omega(self):
        return self.omega_start + (np.arange(self.num_bins) + 0.5) * self.delta_omega

    @property
    def omega_stop(self):
        return self.omega_start + self.num_bins * self.delta_omega

    def refined(self, factor=2):
        """Same span with ``factor`` times as many bins."""
        return FrequencyGrid(self.omega_start, self.delta_omega / factor, self.num_bins * factor)

    def to_dict(self):
        return {
            "omega_start": self.omega_start,
            "delta_omega": self.delta_omega,
            "num_bins": self.num_bins,
        }


def soliton_grid(omega_o, num_bins=1024, half_width=8.0):
    """Default symmetric grid ``[-half_width*omega_o, half_width*omega_o]``."""
    return FrequencyGrid.spanning(-half_width * omega_o, half_width * omega_o, num_bins)


@dataclass(frozen=True, eq=False)
class ModeFunction:
    grid: FrequencyGrid
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != (self.grid.num_bins,):
            raise ValueError(
                f"mode has {values.shape} values, grid has {self.grid.num_bins} bins"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.delta_omega))

    def is_normalized(self, tol=None):
        tol = TOL.normalization if tol is None else tol
        return abs(self.norm**2 - 1.0) <= tol

    def is_real(self, tol=None):
        tol = TOL.phase if tol is None else tol
        return float(np.max(np.abs(self.values.imag))) <= tol

    def is_imaginary(self, tol=None):
        tol = TOL.phase if tol is None else tol
        return float(np.max(np.abs(self.values.real))) <= tol

    def scaled(self, factor):
        return ModeFunction(self.grid, self.values * factor, self.label)

    def normalized(self):
        return self.scaled(1.0 / self.norm)

    @classmethod
    def from_callable(cls, grid, func, label=""):
        return cls(grid, func(grid.omega), label)


@dataclass(frozen=True, eq=False)
class ModeBasis:
    """Ordered orthonormal family of modes on one grid.

    Construction validates orthonormality; pass ``validate=False`` only for
    intermediate sets that are orthonormalized afterwards.
    """

    modes: tuple
    label: str = ""
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        modes = tuple(self.modes)
        if not modes:
            raise ValueError("a basis needs at least one mode")
        grid = modes[0].grid
        for k, mode in enumerate(modes):
            if mode.grid != grid:
                raise GridMismatch(f"mode {k} lives on a different grid")
        object.__setattr__(self, "modes", modes)
        if self.validate:
            defect = self.orthonormality_defect()
            if defect > TOL.orthonormality:
                raise DegenerateBasis(
                    f"basis is not orthonormal: max |G - I| = {defect:.3e}"
                )

    @classmethod
    def from_matrix(cls, grid, matrix, label="", validate=True):
        matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
        return cls(tuple(ModeFunction(grid, row) for row in matrix), label, validate)

    @property
    def grid(self):
        return self.modes[0].grid

    @property
    def size(self):
        return len(self.modes)

    def __len__(self):
        return len(self.modes)

    def __getitem__(self, k):
        return self.modes[k]

    @property
    def matrix(self):
        """Complex ``(N, num_bins)`` array of mode values."""
        return np.array([m.values for m in self.modes])

    def gram(self):
        F = self.matrix
        return F.conj() @ F.T * self.grid.delta_omega

    def orthonormality_defect(self):
        return float(np.max(np.abs(self.gram() - np.eye(self.size))))

    def is_real(self, tol=None):
        return all(m.is_real(tol) for m in self.modes)

    def combine(self, coefficients, label=""):
        """Mode ``sum_k coefficients[k] * f_k``."""
        coefficients = np.asarray(coefficients, dtype=complex)
        if coefficients.shape != (self.size,):
            raise ValueError("one coefficient per basis mode required")
        return ModeFunction(self.grid, coefficients @ self.matrix, label)

    def transformed(self, unitary, label=None):
        """Basis ``g_i = sum_m U[i, m] f_m`` for a unitary ``U``."""
        unitary = np.asarray(unitary, dtype=complex)
        return ModeBasis.from_matrix(
            self.grid, unitary @ self.matrix, self.label if label is None else label
        )

    def subset(self, indices, label=None):
        return ModeBasis(
            tuple(self.modes[i] for i in indices), self.label if label is None else label
        )


@dataclass(frozen=True, eq=False)
class QuadratureTransform:
    """Real matrix ``Z`` mapping bin quadratures to mode quadratures.

    Rows are ``[X_1..X_N, P_1..P_N]``, columns ``[x_1..x_J, p_1..p_J]``.
    """

    matrix: np.ndarray
    num_modes: int
    num_bins: int

    def block(self, row, col):
        """Sub-block such as ``block("X", "p")``."""
        N, J = self.num_modes, self.num_bins
        r = {"X": slice(0, N), "P": slice(N, 2 * N)}[row]
        c = {"x": slice(0, J), "p": slice(J, 2 * J)}[col]
        return self.matrix[r, c]

    def orthonormality_defect(self):
        Z = self.matrix
        return float(np.max(np.abs(Z @ Z.T - np.eye(2 * self.num_modes))))


def inner_product(f, g):
    """``sum_j conj(f_j) g_j delta_omega``."""
    if f.grid != g.grid:
        raise GridMismatch("inner product of modes on different grids")
    return complex(np.vdot(f.values, g.values) * f.grid.delta_omega)


def gram_schmidt(candidates, label=""):
    """Orthonormalize ``candidates`` in order.

    Raises DegenerateBasis naming the first candidate that is (numerically)
    linearly dependent on its predecessors, judged by the smallest singular
    value of the leading Gram submatrix.
    """
    candidates = list(candidates)
    if not candidates:
        raise ValueError("no candidates given")
    grid = candidates[0].grid
    for k, c in enumerate(candidates):
        if c.grid != grid:
            raise GridMismatch(f"candidate {k} lives on a different grid")
    F = np.array([c.values for c in candidates])
    G = F.conj() @ F.T * grid.delta_omega
    for k in range(len(candidates)):
        smin = np.linalg.svd(G[: k + 1, : k + 1], compute_uv=False)[-1]
        if smin <= 1e-10:
            raise DegenerateBasis(
                f"candidate {k} is linearly dependent on its predecessors "
                f"(smallest Gram singular value {smin:.3e})",
                index=k,
            )

    dw = grid.delta_omega
    out = []
    for v in F:
        w = v.copy()
        # two passes keep the result orthonormal to machine precision
        for _ in range(2):
            for q in out:
                w = w - np.vdot(q, w) * dw * q
        w = w / np.sqrt(np.vdot(w, w).real * dw)
        out.append(w)
    return ModeBasis.from_matrix(grid, np.array(out), label)


def build_z(basis):
    F = basis.matrix * np.sqrt(basis.grid.delta_omega)
    re, im = F.real, F.imag
    Z = np.block([[re, im], [-im, re]])
    Z.setflags(write=False)
    return QuadratureTransform(Z, basis.size, basis.grid.num_bins)


def _sech(u):
    # 2 e^{-|u|} / (1 + e^{-2|u|}) avoids cosh overflow far in the tails
    a = np.exp(-np.abs(u))
    return 2.0 * a / (1.0 + a * a)


def haus_lai_analytic(omega, omega_o):
    """The four soliton mode functions evaluated without renormalization.

    Returns a complex ``(4, len(omega))`` array; rows one to three are real,
    row four is purely imaginary.
    """
    u = np.asarray(omega, dtype=float) / omega_o
    s = _sech(u)
    t = np.tanh(u)
    pref = 1.0 / np.sqrt(2.0 * omega_o)
    f1 = pref * s
    f2 = np.sqrt(3.0) * pref * t * s
    f3 = pref * (2.0 * u * t * s - s) / np.sqrt(1.0 / 3.0 + np.pi**2 / 9.0)
    f4 = 1j * np.sqrt(3.0) / np.sqrt(np.pi**2 / 9.0 - 1.0) * pref * (t * s - 2.0 / 3.0 * u * s)
    return np.array([f1, f2, f3, f4], dtype=complex)


def haus_lai_basis(omega_o, grid):
    """Four-mode soliton basis, renormalized on ``grid``.

    The analytic functions are orthonormalized in order on the discrete grid.
    The corrections are tiny and keep the analytic phases (the first three
    modes real, the fourth purely imaginary).
    """
    if not omega_o > 0:
        raise ValueError("omega_o must be positive")
    raw = haus_lai_analytic(grid.omega, omega_o)
    defect = float(np.max(np.abs(np.sum(np.abs(raw) ** 2, axis=1) * grid.delta_omega - 1.0)))
    lo = grid.omega_start / omega_o
    hi = grid.omega_stop / omega_o
    if lo > -_HAUS_LAI_MIN_SPAN or hi < _HAUS_LAI_MIN_SPAN:
        raise TruncationError(
            f"grid [{lo:.3g}, {hi:.3g}] omega_o does not cover "
            f"[-{_HAUS_LAI_MIN_SPAN:g}, {_HAUS_LAI_MIN_SPAN:g}] omega_o; "
            f"norm defect {defect:.3e}",
            norm_defect=defect,
        )
    candidates = [ModeFunction(grid, row, f"f{k + 1}") for k, row in enumerate(raw)]
    basis = gram_schmidt(candidates, label=HAUS_LAI_LABEL)
    # strip round-off from the parts that vanish analytically
    F = basis.matrix
    F[:3] = F[:3].real
    F[3] = 1j * F[3].imag
    return ModeBasis.from_matrix(grid, F, HAUS_LAI_LABEL)
