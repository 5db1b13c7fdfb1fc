"""Soliton perturbation operators as quadratures of the four-mode soliton basis.

With the basis of :func:`pulsemodes.modes.haus_lai_basis`::

    dn        = sqrt(2 n0) X1
    dtheta    = (P1 + sqrt(1/3 + pi^2/9) P3) / sqrt(2 n0)
    dx        = X2 / sqrt(6 n0)                        [units of 2c / omega_o]
    n0 * dp   = sqrt(6 n0) (P2 - sqrt(pi^2/9 - 1) P4)  [units of omega_o / 2c]

so that ``[dn, dtheta] = [dx, n0 dp] = i``. The speed of light never enters:
positions and momenta are reported in the natural soliton units above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisMismatch
from .gaussian import symplectic_form
from .modes import HAUS_LAI_LABEL, haus_lai_basis, soliton_grid
from .photon_stats import in_phase_correlation

__all__ = [
    "SolitonParameters",
    "OPERATORS",
    "operator_vectors",
    "soliton_operator_stats",
    "photon_stat_sufficiency_check",
]

OPERATORS = ("dn", "dtheta", "dx", "n0_dp")

_THETA_P3 = np.sqrt(1.0 / 3.0 + np.pi**2 / 9.0)
_P_P4 = np.sqrt(np.pi**2 / 9.0 - 1.0)


@dataclass(frozen=True)
class SolitonParameters:
    n_o: float
    omega_o: float

    def __post_init__(self):
        if not self.n_o > 0 or not self.omega_o > 0:
            raise ValueError("n_o and omega_o must be positive")


def _check(state):
    if state.label != HAUS_LAI_LABEL:
        raise BasisMismatch(f"state is labelled {state.label!r}, expected {HAUS_LAI_LABEL!r}")
    if state.num_modes < 4:
        raise BasisMismatch(f"need at least 4 modes, state has {state.num_modes}")


def operator_vectors(num_modes, n_o):
    """Coefficient vectors over ``[X..., P...]`` for the four operators."""
    N = num_modes
    vecs = {name: np.zeros(2 * N) for name in OPERATORS}
    vecs["dn"][0] = np.sqrt(2.0 * n_o)
    vecs["dtheta"][N + 0] = 1.0 / np.sqrt(2.0 * n_o)
    vecs["dtheta"][N + 2] = _THETA_P3 / np.sqrt(2.0 * n_o)
    vecs["dx"][1] = 1.0 / np.sqrt(6.0 * n_o)
    vecs["n0_dp"][N + 1] = np.sqrt(6.0 * n_o)
    vecs["n0_dp"][N + 3] = -_P_P4 * np.sqrt(6.0 * n_o)
    return vecs


@dataclass(frozen=True)
class SolitonStats:
    means: dict
    variances: dict
    number_phase_product: float
    position_momentum_product: float
    commutators: dict

    def to_dict(self):
        return {
            "means": self.means,
            "variances": self.variances,
            "dn2_dtheta2": self.number_phase_product,
            "dx2_n0dp2": self.position_momentum_product,
            "commutators": self.commutators,
        }


def soliton_operator_stats(state, params):
    """Means, variances and uncertainty products of the soliton operators.

    ``variances["dp"]`` is ``variances["n0_dp"] / n_o**2``.
    """
    _check(state)
    vecs = operator_vectors(state.num_modes, params.n_o)
    means = {k: float(v @ state.mean) for k, v in vecs.items()}
    variances = {k: float(v @ state.variance @ v) for k, v in vecs.items()}
    means["dp"] = means["n0_dp"] / params.n_o
    variances["dp"] = variances["n0_dp"] / params.n_o**2
    omega = symplectic_form(state.num_modes)
    commutators = {
        "dn,dtheta": float(vecs["dn"] @ omega @ vecs["dtheta"]),
        "dx,n0_dp": float(vecs["dx"] @ omega @ vecs["n0_dp"]),
    }
    return SolitonStats(
        means,
        variances,
        variances["dn"] * variances["dtheta"],
        variances["dx"] * variances["n0_dp"],
        commutators,
    )


def _quadrature_name(a, num_modes):
    return ("X" if a < num_modes else "P") + str(a % num_modes + 1)


def photon_stat_sufficiency_check(state, basis=None, tol=1e-12):
    """Which variance entries move the strong-field photon correlations.

    Each independent entry of ``V`` is perturbed in turn and the change of
    the in-phase strong-field correlation kernel is recorded. ``basis``
    defaults to the soliton basis on the standard grid (the pattern of
    nonzero sensitivities does not depend on ``omega_o``).
    """
    N = state.num_modes
    if basis is None:
        _check(state)
        basis = haus_lai_basis(1.0, soliton_grid(1.0, 256))
    if basis.size != N:
        raise BasisMismatch(f"basis has {basis.size} modes, state has {N}")
    base = in_phase_correlation(basis, state.variance)
    step = 1e-3
    sensitivity = {}
    for a in range(2 * N):
        for b in range(a, 2 * N):
            V = np.array(state.variance)
            V[a, b] += step
            if a != b:
                V[b, a] += step
            change = float(np.max(np.abs(in_phase_correlation(basis, V) - base))) / step
            sensitivity[(a, b)] = change
    scale = max(sensitivity.values()) or 1.0
    entering = sorted({q for (a, b), d in sensitivity.items() if d > tol * scale for q in (a, b)})
    names = [_quadrature_name(a, N) for a in entering]
    # subsets of fewer than four modes still map onto the four operators
    M = max(N, 4)
    vecs = operator_vectors(M, 1.0)
    padded = [a if a < N else a - N + M for a in entering]
    affected = [op for op, v in vecs.items() if any(abs(v[a]) > 0 for a in padded)]
    return {
        "entering_quadratures": names,
        "nonzero_entries": [
            [_quadrature_name(a, N), _quadrature_name(b, N)]
            for (a, b), d in sensitivity.items()
            if d > tol * scale
        ],
        "affected_operators": affected,
        "x_block_only": all(a < N for a in entering),
    }
