"""Photon-number statistics of Gaussian states.

Exact expressions work on any set of modes (including frequency bins);
the strong-field expressions assume one large in-phase coherent amplitude.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .errors import ApproximationDomainError, DimensionMismatch

__all__ = [
    "CorrelationData",
    "Verdict",
    "mean_photon",
    "mean_photons",
    "photon_covariance_exact",
    "photon_covariance_matrix",
    "normally_ordered_covariance",
    "normalized_correlation",
    "correlation_data",
    "strongfield_bin_correlation",
    "spectral_correlation_strongfield",
    "in_phase_kernel",
    "in_phase_correlation",
    "single_mode_sign_theorem_check",
    "STRONG_FIELD_RATIO",
    "NARROW_BIN_LIMIT",
]

# condition (i): max |mean X| must exceed this multiple of max |V - I/2|
STRONG_FIELD_RATIO = 20.0
# narrow-bin regime: warn when a bin holds more photons than this
NARROW_BIN_LIMIT = 0.1


class NarrowBinWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class CorrelationData:
    """Photon correlation matrices on a frequency grid or a mode axis.

    Any of the matrices may be ``None`` when not available (for example an
    ingested C^(n) heatmap). ``mask`` marks entries that are missing; masked
    entries of ``c_normalized`` are stored as NaN and must never be read as
    zero.
    """

    axis: object
    c_normalized: np.ndarray
    mean_n: np.ndarray | None = None
    cov_n: np.ndarray | None = None
    c_normal: np.ndarray | None = None
    mask: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.array(self.c_normalized, dtype=float)
        n = c.shape[0]
        if c.shape != (n, n):
            raise DimensionMismatch("correlation matrix must be square")
        mask = np.zeros((n, n), bool) if self.mask is None else np.array(self.mask, bool)
        mask |= ~np.isfinite(c)
        c[mask] = np.nan
        object.__setattr__(self, "c_normalized", c)
        object.__setattr__(self, "mask", mask)

    @property
    def size(self):
        return self.c_normalized.shape[0]

    @property
    def masked_fraction(self):
        return float(self.mask.mean())


class Verdict(enum.Enum):
    SINGLE_MODE_SUB = "consistent-single-mode-sub"
    SINGLE_MODE_SUPER = "consistent-single-mode-super"
    REQUIRES_MULTIMODE = "requires-multimode"


def mean_photon(state, k):
    """``(<x_k^2> + <p_k^2> - 1) / 2``."""
    N = state.num_modes
    coherent_part = state.mean[k] ** 2 + state.mean[k + N] ** 2
    return float(0.5 * coherent_part + 0.5 * (state.variance[k, k] + state.variance[k + N, k + N] - 1.0))


def mean_photons(state):
    N = state.num_modes
    d = np.diag(state.variance)
    # coherent and fluctuation parts kept apart so dim bins lose no precision
    return 0.5 * (state.mean[:N] ** 2 + state.mean[N:] ** 2) + 0.5 * (d[:N] + d[N:] - 1.0)


def photon_covariance_exact(state, k, l):
    """Gaussian photon-number covariance ``cov(n_k, n_l)``."""
    N = state.num_modes
    V = state.variance
    m = state.mean
    xk, pk, xl, pl = k, k + N, l, l + N
    value = (
        m[xk] * m[xl] * V[xk, xl]
        + m[xk] * m[pl] * V[xk, pl]
        + m[pk] * m[xl] * V[pk, xl]
        + m[pk] * m[pl] * V[pk, pl]
    ) + (
        0.5 * (V[xk, xl] ** 2 + V[pk, xl] ** 2 + V[xk, pl] ** 2 + V[pk, pl] ** 2)
        - 0.25 * (k == l)
    )
    return float(value)


def photon_covariance_matrix(state):
    """All ``cov(n_k, n_l)`` at once (vectorized form of the exact formula)."""
    N = state.num_modes
    V = state.variance
    x, p = state.mean[:N], state.mean[N:]
    Vxx, Vxp, Vpx, Vpp = V[:N, :N], V[:N, N:], V[N:, :N], V[N:, N:]
    fluct = 0.5 * (Vxx**2 + Vpx**2 + Vxp**2 + Vpp**2) - 0.25 * np.eye(N)
    cov = (
        np.outer(x, x) * Vxx
        + np.outer(x, p) * Vxp
        + np.outer(p, x) * Vpx
        + np.outer(p, p) * Vpp
    ) + fluct
    return 0.5 * (cov + cov.T)


def normally_ordered_covariance(state):
    """``C_kl = cov(n_k, n_l) - delta_kl <n_k>``."""
    return photon_covariance_matrix(state) - np.diag(mean_photons(state))


def _normalize(c_normal, variances, floor=1e-300):
    variances = np.asarray(variances, dtype=float)
    valid = variances > floor
    mask = ~np.outer(valid, valid)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = c_normal / np.sqrt(np.outer(variances, variances))
    out[mask] = np.nan
    return out, mask


def normalized_correlation(state):
    """``C_kl / sqrt(dn_k^2 dn_l^2)``; zero-variance rows come back masked (NaN)."""
    cov = photon_covariance_matrix(state)
    c = cov - np.diag(mean_photons(state))
    out, _ = _normalize(c, np.diag(cov))
    return out


def correlation_data(state, axis=None):
    """Exact :class:`CorrelationData` for a state (modes or frequency bins)."""
    cov = photon_covariance_matrix(state)
    n = mean_photons(state)
    c = cov - np.diag(n)
    cn, mask = _normalize(c, np.diag(cov))
    return CorrelationData(axis, cn, mean_n=n, cov_n=cov, c_normal=c, mask=mask)


def strongfield_bin_correlation(state):
    """Strong-field C^(n) on bins, before the narrow-bin step.

    Keeps only the dominant ``x_k x_l V'_kl`` covariance term and
    ``<n_k> = x_k^2 / 2``, giving ``(V'_kl - delta/2) / sqrt(V'_kk V'_ll)``
    times the sign of ``x_k x_l``. Requires vanishing P means.
    """
    N = state.num_modes
    if np.max(np.abs(state.mean[N:])) > 0:
        raise ApproximationDomainError("P means must vanish", condition="ii")
    x = state.mean[:N]
    Vxx = state.variance[:N, :N]
    d = np.diag(Vxx)
    c = np.sign(np.outer(x, x)) * (Vxx - 0.5 * np.eye(N)) / np.sqrt(np.outer(d, d))
    c[np.outer(x, x) == 0] = np.nan
    return c


def in_phase_kernel(basis):
    """Rows of ``Z`` restricted to the x columns, per unit ``sqrt(delta_omega)``.

    Entry ``[a, j]`` is the weight of mode quadrature ``a`` (ordered
    ``[X..., P...]``) in the in-phase bin quadrature ``x_j``: ``Re f`` for X
    rows and ``-Im f`` for P rows.
    """
    F = basis.matrix
    return np.vstack([F.real, -F.imag])


def in_phase_correlation(basis, variance):
    """Strong-field ``C^(n)`` for a general (complex) basis.

    With the mean field in phase with the bin ``x`` quadratures, every mode
    quadrature contributes through its in-phase weight:
    ``2 sum_ab z_a(omega) z_b(omega') (V - I/2)_ab`` with ``z`` from
    :func:`in_phase_kernel`. For real bases this reduces to the X-block
    formula of :func:`spectral_correlation_strongfield`.
    """
    V = np.asarray(variance, dtype=float)
    z = in_phase_kernel(basis)
    if V.shape != (z.shape[0], z.shape[0]):
        raise DimensionMismatch("variance does not match the basis size")
    c = 2.0 * z.T @ (V - 0.5 * np.eye(V.shape[0])) @ z
    return 0.5 * (c + c.T)


def spectral_correlation_strongfield(
    basis, mean_x, v_xx, mean_p=None, ratio=STRONG_FIELD_RATIO, check=True
):
    """Continuous strong-field correlation ``C^(n)(omega, omega')``.

    ``2 sum_mn f_m(omega) f_n(omega') (V_XmXn - delta_mn / 2)`` on the grid of
    ``basis``. Raises ApproximationDomainError naming the violated validity
    condition: (i) a dominant coherent amplitude, (ii) no P means, (iii) real
    mode functions. A :class:`NarrowBinWarning` is issued when some bin holds
    more than :data:`NARROW_BIN_LIMIT` photons.
    """
    mean_x = np.atleast_1d(np.asarray(mean_x, dtype=float))
    v_xx = np.atleast_2d(np.asarray(v_xx, dtype=float))
    N = basis.size
    if mean_x.shape != (N,) or v_xx.shape != (N, N):
        raise DimensionMismatch(f"expected {N} means and a {N}x{N} V_XX block")
    if check:
        if not basis.is_real():
            raise ApproximationDomainError("mode functions must be real", condition="iii")
        if mean_p is not None and np.max(np.abs(mean_p)) > 0:
            raise ApproximationDomainError("P means must vanish", condition="ii")
        excess = float(np.max(np.abs(v_xx - 0.5 * np.eye(N))))
        if float(np.max(np.abs(mean_x))) < ratio * excess:
            raise ApproximationDomainError(
                f"max |X| = {np.max(np.abs(mean_x)):.4g} is below {ratio:g} x "
                f"max |V - I/2| = {ratio * excess:.4g}",
                condition="i",
            )
    F = basis.matrix.real
    grid = basis.grid
    n_bins = 0.5 * (mean_x @ F) ** 2 * grid.delta_omega
    if np.max(n_bins) > NARROW_BIN_LIMIT:
        warnings.warn(
            f"bins hold up to {np.max(n_bins):.3g} photons; the narrow-bin "
            "approximation behind this formula is not accurate",
            NarrowBinWarning,
            stacklevel=2,
        )
    c = 2.0 * F.T @ (v_xx - 0.5 * np.eye(N)) @ F
    c = 0.5 * (c + c.T)
    return CorrelationData(grid, c, mean_n=n_bins, metadata={"kind": "strong-field"})


def single_mode_sign_theorem_check(corr, tol=None):
    """Classify a correlation matrix by the signs of its unmasked entries.

    Returns the set of verdicts compatible with the data: a single
    nonmonochromatic mode forces one common sign, so mixed signs give
    ``{REQUIRES_MULTIMODE}``; an all-zero matrix is compatible with both
    single-mode verdicts.
    """
    tol = TOL.sign if tol is None else tol
    values = corr.c_normalized if isinstance(corr, CorrelationData) else np.asarray(corr)
    values = values[np.isfinite(values)]
    has_pos = bool(np.any(values > tol))
    has_neg = bool(np.any(values < -tol))
    if has_pos and has_neg:
        return {Verdict.REQUIRES_MULTIMODE}
    if has_pos:
        return {Verdict.SINGLE_MODE_SUPER}
    if has_neg:
        return {Verdict.SINGLE_MODE_SUB}
    return {Verdict.SINGLE_MODE_SUB, Verdict.SINGLE_MODE_SUPER}
