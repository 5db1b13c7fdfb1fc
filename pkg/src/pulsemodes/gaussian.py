"""Gaussian states in quadrature form.

Conventions: hbar = 1, vacuum variance 1/2, quadratures ordered
``[X_1..X_N, P_1..P_N]``. The mode of a function ``g = sum_k c_k f_k`` has
``X_g = sum_k Re(c_k) X_k + Im(c_k) P_k``, which is the convention encoded in
the transformation matrix ``Z`` (see :func:`pulsemodes.modes.build_z`).
A coherent amplitude ``beta = <b>`` maps to ``X = sqrt(2) Re beta``,
``P = sqrt(2) Im beta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import (
    DimensionMismatch,
    FactorizationError,
    GridMismatch,
    NoCoherentAmplitude,
    UncertaintyViolation,
)
from .modes import build_z

__all__ = [
    "GaussianState",
    "vacuum",
    "coherent",
    "squeezed_vacuum",
    "transform_to_frequency",
    "transform_to_modes",
    "project",
    "passive_symplectic",
    "moments",
    "pair_moment",
    "eliminate_coherent_amplitudes",
    "sample",
    "symplectic_form",
    "is_physical",
    "mean_photon_total",
]

BINS_LABEL = "frequency-bins"


@dataclass(frozen=True, eq=False)
class GaussianState:
    mean: np.ndarray
    variance: np.ndarray
    label: str = ""

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        variance = np.array(self.variance, dtype=float)
        n2 = mean.size
        if n2 % 2 or n2 == 0:
            raise DimensionMismatch(f"mean vector must have even length, got {n2}")
        if variance.shape != (n2, n2):
            raise DimensionMismatch(f"variance shape {variance.shape} does not match mean {n2}")
        asym = float(np.max(np.abs(variance - variance.T)))
        if asym > TOL.symmetry * max(1.0, float(np.max(np.abs(variance)))):
            raise UncertaintyViolation(f"variance matrix not symmetric (max asymmetry {asym:.2e})")
        variance = 0.5 * (variance + variance.T)
        N = n2 // 2
        k = np.arange(N)
        det = variance[k, k] * variance[k + N, k + N] - variance[k, k + N] ** 2
        bad = np.flatnonzero(det < 0.25 - TOL.uncertainty)
        if bad.size:
            raise UncertaintyViolation(
                f"mode {int(bad[0]) + 1} violates V_XX V_PP - V_XP^2 >= 1/4 "
                f"(got {det[bad[0]]:.6g})"
            )
        try:
            np.linalg.cholesky(variance)
        except np.linalg.LinAlgError:
            raise UncertaintyViolation("variance matrix is not positive definite") from None
        mean.setflags(write=False)
        variance.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "variance", variance)

    @property
    def num_modes(self):
        return self.mean.size // 2

    @property
    def mean_x(self):
        return self.mean[: self.num_modes]

    @property
    def mean_p(self):
        return self.mean[self.num_modes :]

    @property
    def v_xx(self):
        N = self.num_modes
        return self.variance[:N, :N]

    @property
    def amplitudes(self):
        """Coherent amplitudes ``beta_k = (X_k + i P_k) / sqrt(2)``."""
        return (self.mean_x + 1j * self.mean_p) / np.sqrt(2.0)

    def index(self, quadrature, k):
        """Position of quadrature ``"X"``/``"P"`` of mode ``k`` (0-based)."""
        if not 0 <= k < self.num_modes:
            raise IndexError(f"mode {k} out of range for {self.num_modes} modes")
        return k if quadrature.upper() == "X" else k + self.num_modes

    def relabel(self, label):
        return GaussianState(self.mean, self.variance, label)

    def to_dict(self):
        return {
            "num_modes": self.num_modes,
            "mean": self.mean.tolist(),
            "variance": self.variance.tolist(),
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, data):
        state = cls(data["mean"], data["variance"], data.get("label", ""))
        if "num_modes" in data and int(data["num_modes"]) != state.num_modes:
            raise DimensionMismatch(
                f"num_modes={data['num_modes']} but mean has {state.num_modes} modes"
            )
        return state


def vacuum(num_modes, label=""):
    return GaussianState(np.zeros(2 * num_modes), 0.5 * np.eye(2 * num_modes), label)


def coherent(amplitudes, label=""):
    beta = np.atleast_1d(np.asarray(amplitudes, dtype=complex))
    mean = np.sqrt(2.0) * np.concatenate([beta.real, beta.imag])
    return GaussianState(mean, 0.5 * np.eye(2 * beta.size), label)


def squeezed_vacuum(v_xx, v_pp=None, label=""):
    """Diagonal state with X variances ``v_xx``.

    ``v_pp`` defaults to the minimum-uncertainty partner ``1 / (4 v_xx)``.
    """
    v_xx = np.atleast_1d(np.asarray(v_xx, dtype=float))
    if np.any(v_xx <= 0):
        raise UncertaintyViolation("variances must be positive")
    v_pp = 0.25 / v_xx if v_pp is None else np.atleast_1d(np.asarray(v_pp, dtype=float))
    if v_pp.shape != v_xx.shape:
        raise DimensionMismatch("v_xx and v_pp differ in length")
    if np.any(v_pp <= 0):
        raise UncertaintyViolation("variances must be positive")
    return GaussianState(np.zeros(2 * v_xx.size), np.diag(np.concatenate([v_xx, v_pp])), label)


def symplectic_form(num_modes):
    """``Omega`` in [X..., P...] ordering, ``[X_k, P_k] = i``."""
    I = np.eye(num_modes)
    O = np.zeros((num_modes, num_modes))
    return np.block([[O, I], [-I, O]])


def is_physical(state, tol=None):
    """Full check ``V + i Omega / 2 >= 0``."""
    tol = TOL.uncertainty if tol is None else tol
    M = state.variance + 0.5j * symplectic_form(state.num_modes)
    return bool(np.linalg.eigvalsh(M)[0] >= -tol)


def passive_symplectic(unitary):
    """Quadrature map of the mode change ``g_i = sum_m U[i, m] f_m``."""
    U = np.asarray(unitary, dtype=complex)
    return np.block([[U.real, U.imag], [-U.imag, U.real]])


def transform_to_frequency(state, basis):
    """Express a state of the ``basis`` modes on the frequency bins.

    Modes outside the basis are vacuum, so ``V' = Z^T (V - I/2) Z + I/2``.
    """
    if state.num_modes != basis.size:
        raise DimensionMismatch(
            f"state has {state.num_modes} modes, basis has {basis.size}"
        )
    Z = build_z(basis).matrix
    J = basis.grid.num_bins
    excess = state.variance - 0.5 * np.eye(2 * state.num_modes)
    V = Z.T @ excess @ Z + 0.5 * np.eye(2 * J)
    return GaussianState(Z.T @ state.mean, V, BINS_LABEL)


def transform_to_modes(state, basis):
    """Project a bin-level state onto ``basis``: ``mu = Z xi``, ``V = Z V' Z^T``."""
    J = basis.grid.num_bins
    if state.num_modes != J:
        raise GridMismatch(f"state has {state.num_modes} bins, grid has {J}")
    Z = build_z(basis).matrix
    return GaussianState(Z @ state.mean, Z @ state.variance @ Z.T, basis.label)


def project(state, basis, target):
    """State of ``target`` modes, given ``state`` on ``basis`` (rest vacuum).

    Equivalent to ``transform_to_modes(transform_to_frequency(state, basis),
    target)`` without building bin-sized matrices.
    """
    if basis.grid != target.grid:
        raise GridMismatch("bases live on different grids")
    if state.num_modes != basis.size:
        raise DimensionMismatch("state and basis sizes differ")
    T = build_z(target).matrix @ build_z(basis).matrix.T
    excess = state.variance - 0.5 * np.eye(2 * basis.size)
    V = T @ excess @ T.T + 0.5 * np.eye(2 * target.size)
    return GaussianState(T @ state.mean, V, target.label)


def moments(state, quadrature, k, order=4):
    """Raw moments ``<q>, <q^2>, ..., <q^order>`` of one quadrature (order <= 4)."""
    if not 1 <= order <= 4:
        raise ValueError("order must be between 1 and 4")
    i = state.index(quadrature, k)
    m = state.mean[i]
    v = state.variance[i, i]
    values = [m, m**2 + v, m**3 + 3 * m * v, m**4 + 6 * m**2 * v + 3 * v**2]
    return [float(x) for x in values[:order]]


def _conjugate(state, i, j):
    return abs(i - j) == state.num_modes


def pair_moment(state, first, second):
    """Symmetrized moments of two quadratures.

    ``first`` and ``second`` are ``(quadrature, mode)`` pairs. Returns
    ``(1/2 <{a, b}>, 1/2 <{a^2, b^2}>)``; the fourth-order term includes the
    ``-1/2`` ordering correction for a conjugate pair.
    """
    i = state.index(*first)
    j = state.index(*second)
    mi, mj = state.mean[i], state.mean[j]
    vii, vjj, vij = state.variance[i, i], state.variance[j, j], state.variance[i, j]
    second_order = mi * mj + vij
    fourth = (
        mi**2 * mj**2
        + mi**2 * vjj
        + mj**2 * vii
        + vii * vjj
        + 4 * mi * mj * vij
        + 2 * vij**2
        - 0.5 * _conjugate(state, i, j)
    )
    return float(second_order), float(fourth)


def mean_photon_total(state):
    return float(0.5 * (state.mean @ state.mean + np.trace(state.variance) - state.num_modes))


def _complete_unitary(first_row):
    """Unitary matrix whose first row is ``first_row`` (unit norm).

    When ``first_row`` is already a unit vector ``e_1`` the identity results.
    """
    n = first_row.size
    A = np.eye(n, dtype=complex)
    A[:, 0] = first_row.conj()
    Q, R = np.linalg.qr(A)
    Q = Q * (np.sign(np.diag(R).real) + (np.diag(R).real == 0))
    # rows of U are conjugated columns of Q; column 0 of Q is first_row* up to phase
    U = Q.conj().T
    U[0] = first_row
    return U


def eliminate_coherent_amplitudes(state, basis):
    """Rotate the mode basis so only the first mode carries a mean field.

    The new first mode is ``g_1 = sum_m beta_m f_m / |beta|``, whose X mean is
    ``sqrt(2) |beta|`` with vanishing P mean. Returns the new state (labelled
    like ``basis``) and the new basis.
    """
    if state.num_modes != basis.size:
        raise DimensionMismatch("state and basis sizes differ")
    beta = state.amplitudes
    norm = float(np.linalg.norm(beta))
    if norm <= 1e-12:
        raise NoCoherentAmplitude("all coherent amplitudes vanish")
    U = _complete_unitary(beta / norm)
    S = passive_symplectic(U)
    mean = S @ state.mean
    new_state = GaussianState(mean, S @ state.variance @ S.T, state.label)
    return new_state, basis.transformed(U)


def sample(state, count, seed=None):
    """Draw ``count`` quadrature vectors from the Wigner density N(mean, V).

    Only ``state.mean`` and ``state.variance`` are used, so any object with
    those attributes can be sampled. Returns an array of shape ``(count, 2N)``.
    """
    try:
        L = np.linalg.cholesky(np.asarray(state.variance, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"variance matrix not positive definite: {exc}") from exc
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((int(count), state.mean.size))
    return np.asarray(state.mean, dtype=float) + z @ L.T

