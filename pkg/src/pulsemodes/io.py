"""Readers and writers for states, bases, correlation heatmaps, filters and
mode curves.

Floats are written with ``repr`` so every file read back reproduces the
values bit for bit. JSON is written with sorted keys for byte-stable output.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import FormatError
from .gaussian import GaussianState
from .modes import FrequencyGrid, ModeBasis
from .photon_stats import CorrelationData
from .squeezing import FilterFunction

__all__ = [
    "SPEED_OF_LIGHT_NM_PER_FS",
    "dumps_json",
    "state_to_json",
    "state_from_json",
    "basis_to_json",
    "basis_from_json",
    "correlation_to_csv",
    "correlation_from_csv",
    "filter_to_csv",
    "filter_from_csv",
    "mode_curves_to_csv",
    "mode_curves_from_csv",
    "grid_from_centres",
    "wavelength_to_omega",
    "omega_to_wavelength",
]

SPEED_OF_LIGHT_NM_PER_FS = 299.792458
WAVELENGTH_CONVERSION = "omega [rad/fs] = 2 pi c / lambda - carrier_omega, c = 299.792458 nm/fs"


def dumps_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc


def _fmt(x):
    return repr(float(x))


def _parse_float(cell, where):
    try:
        return float(cell)
    except ValueError as exc:
        raise FormatError(f"cannot parse {cell!r} as a number ({where})") from exc


def _read_rows(text):
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows:
        raise FormatError("empty CSV")
    return rows


def _write_rows(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def wavelength_to_omega(wavelength_nm):
    wl = np.asarray(wavelength_nm, dtype=float)
    if np.any(wl <= 0):
        raise FormatError("wavelengths must be positive")
    return 2.0 * np.pi * SPEED_OF_LIGHT_NM_PER_FS / wl


def grid_from_centres(omega, rtol=1e-9):
    """Uniform grid with the given bin centres, or None if they are not uniform."""
    omega = np.asarray(omega, dtype=float)
    if omega.size < 2:
        return None
    step = (omega[-1] - omega[0]) / (omega.size - 1)
    if step <= 0:
        return None
    if np.max(np.abs(np.diff(omega) - step)) > rtol * max(abs(step), np.max(np.abs(omega))):
        return None
    return FrequencyGrid(omega[0] - 0.5 * step, step, omega.size)


# states


def state_to_json(state):
    return dumps_json(state.to_dict())


def state_from_json(text):
    data = _loads(text)
    try:
        return GaussianState.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"state JSON is missing a field: {exc}") from exc


# bases


def basis_to_json(basis):
    modes = [[[v.real, v.imag] for v in mode.values.tolist()] for mode in basis.modes]
    return dumps_json({"grid": basis.grid.to_dict(), "label": basis.label, "modes": modes})


def basis_from_json(text, validate=True):
    data = _loads(text)
    try:
        grid = FrequencyGrid(**data["grid"])
        values = np.array(data["modes"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad basis JSON: {exc}") from exc
    if values.ndim != 3 or values.shape[2] != 2:
        raise FormatError("modes must be a list of [re, im] pairs per bin")
    matrix = values[..., 0] + 1j * values[..., 1]
    return ModeBasis.from_matrix(grid, matrix, data.get("label", ""), validate)


# correlation heatmaps


def omega_to_wavelength(omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise FormatError("absolute frequencies must be positive; set a carrier frequency")
    return 2.0 * np.pi * SPEED_OF_LIGHT_NM_PER_FS / omega


def _axis_values(corr, axis, carrier_omega):
    if axis == "wavelength_nm":
        wl = corr.metadata.get("wavelength_nm")
        if wl is not None:
            return list(wl)
        return list(omega_to_wavelength(_omega_axis(corr) + carrier_omega))
    return list(_omega_axis(corr))


def _omega_axis(corr):
    if isinstance(corr.axis, FrequencyGrid):
        return corr.axis.omega
    if corr.axis is None:
        return np.arange(corr.size, dtype=float)
    return np.asarray(corr.axis, dtype=float)


def correlation_to_csv(corr, axis="omega", carrier_omega=0.0):
    """Heatmap CSV: header row and first column carry the axis, masked cells are empty.

    Grid frequencies are offsets from ``carrier_omega`` (rad/fs); the
    wavelength axis uses the absolute frequency ``carrier_omega + omega``.
    """
    if axis not in ("omega", "wavelength_nm"):
        raise ValueError(f"unknown axis {axis!r}")
    ticks = _axis_values(corr, axis, carrier_omega)
    rows = [[axis] + [_fmt(t) for t in ticks]]
    for t, line, masked in zip(ticks, corr.c_normalized, corr.mask):
        rows.append([_fmt(t)] + ["" if m else _fmt(v) for v, m in zip(line, masked)])
    return _write_rows(rows)


def correlation_from_csv(text, carrier_omega=0.0):
    """Parse a heatmap CSV; empty cells become masked entries.

    A ``wavelength_nm`` header is converted to angular frequency and then to
    an offset from ``carrier_omega``; the wavelengths and the conversion are
    kept in ``metadata``.
    """
    rows = _read_rows(text)
    head = rows[0][0].strip()
    if head not in ("omega", "wavelength_nm"):
        raise FormatError(f"first header cell must be 'omega' or 'wavelength_nm', got {head!r}")
    ticks = np.array([_parse_float(c, "header") for c in rows[0][1:]])
    n = ticks.size
    body = rows[1:]
    if len(body) != n or any(len(r) != n + 1 for r in body):
        raise FormatError(f"expected a {n}x{n} matrix with a leading axis column")
    side = np.array([_parse_float(r[0], "axis column") for r in body])
    if not np.array_equal(side, ticks):
        raise FormatError("row and column axes differ")
    c = np.full((n, n), np.nan)
    mask = np.zeros((n, n), bool)
    for i, r in enumerate(body):
        for j, cell in enumerate(r[1:]):
            if cell.strip() == "":
                mask[i, j] = True
            else:
                c[i, j] = _parse_float(cell, f"cell ({i}, {j})")
    metadata = {"axis_header": head}
    if head == "wavelength_nm":
        omega = wavelength_to_omega(ticks) - carrier_omega
        metadata["wavelength_nm"] = ticks.tolist()
        metadata["conversion"] = WAVELENGTH_CONVERSION
        metadata["carrier_omega"] = float(carrier_omega)
    else:
        omega = ticks
    grid = grid_from_centres(omega)
    return CorrelationData(grid if grid is not None else omega, c, mask=mask, metadata=metadata)


# filters


def filter_to_csv(filt):
    rows = [["omega", "c"]]
    rows += [[_fmt(w), _fmt(c)] for w, c in zip(filt.grid.omega, filt.c)]
    return _write_rows(rows)


def filter_from_csv(text, grid=None):
    """Read ``omega, c`` rows (``c`` is amplitude transmission).

    A second column headed ``T`` is read as intensity transmission instead.
    """
    rows = _read_rows(text)
    head = [h.strip() for h in rows[0]]
    if len(head) != 2 or head[0] != "omega" or head[1] not in ("c", "T"):
        raise FormatError("filter CSV header must be 'omega,c' or 'omega,T'")
    data = np.array([[_parse_float(x, "filter") for x in r] for r in rows[1:]])
    if data.ndim != 2 or data.shape[1] != 2:
        raise FormatError("filter rows need two columns")
    if grid is None:
        grid = grid_from_centres(data[:, 0])
        if grid is None:
            raise FormatError("filter frequencies are not uniformly spaced")
    elif data.shape[0] != grid.num_bins or not np.allclose(data[:, 0], grid.omega):
        raise FormatError("filter frequencies do not match the basis grid")
    if head[1] == "T":
        return FilterFunction.from_intensity(grid, data[:, 1])
    return FilterFunction(grid, data[:, 1])


# mode curves


def mode_curves_to_csv(basis):
    N = basis.size
    header = ["omega"]
    for k in range(1, N + 1):
        header += [f"re_f{k}", f"im_f{k}"]
    F = basis.matrix
    rows = [header]
    for j, w in enumerate(basis.grid.omega):
        row = [_fmt(w)]
        for k in range(N):
            row += [_fmt(F[k, j].real), _fmt(F[k, j].imag)]
        rows.append(row)
    return _write_rows(rows)


def mode_curves_from_csv(text, label="", validate=True):
    rows = _read_rows(text)
    head = rows[0]
    if head[0] != "omega" or (len(head) - 1) % 2:
        raise FormatError("mode-curve header must be omega, re_f1, im_f1, ...")
    data = np.array([[_parse_float(x, "mode curve") for x in r] for r in rows[1:]])
    grid = grid_from_centres(data[:, 0])
    if grid is None:
        raise FormatError("mode-curve frequencies are not uniformly spaced")
    matrix = (data[:, 1::2] + 1j * data[:, 2::2]).T
    return ModeBasis.from_matrix(grid, matrix, label, validate)
