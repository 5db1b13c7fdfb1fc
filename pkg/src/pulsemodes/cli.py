"""Command-line interface.

Every subcommand reads JSON/CSV files, writes its result to stdout (or
``--output``) and reports domain errors as ``{"error": {code, message}}`` on
stderr with exit status 1. Parse errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import io as pio
from .errors import GridMismatch, PulseModesError
from .gaussian import GaussianState, is_physical, symplectic_form, transform_to_frequency
from .haus_lai import SolitonParameters, photon_stat_sufficiency_check, soliton_operator_stats
from .homodyne import simulate_tomography
from .mode_select import (
    DEFAULT_EPSILON,
    exact_measurement,
    homodyne_measurement,
    polynomial_candidates,
    sampled_epsilon,
    select_modes,
)
from .modes import FrequencyGrid, haus_lai_basis, soliton_grid
from .photon_stats import (
    CorrelationData,
    correlation_data,
    single_mode_sign_theorem_check,
    spectral_correlation_strongfield,
)
from .reconstruction import (
    diagonalize_vxx,
    monte_carlo_uncertainty,
    reconstruct_vxx,
    reconstruction_error,
)
from .squeezing import filtered_q, mandel_q, optimal_lo

PLANTS = ("demo3mode", "coherent3mode")
DEMO_VARIANCES = (0.29, 1.39, 2.69)
DEMO_MEAN_X = 100.0


# planted data


def planted(name):
    """``(state, basis)`` for a named demonstration plant on soliton modes f1-f3."""
    basis = haus_lai_basis(1.0, soliton_grid(1.0)).subset(range(3))
    v = np.array(DEMO_VARIANCES) if name == "demo3mode" else np.full(3, 0.5)
    if name not in PLANTS:
        raise ValueError(f"unknown plant {name!r}")
    variance = np.diag(np.concatenate([v, 0.25 / v]))
    mean = np.zeros(6)
    mean[0] = DEMO_MEAN_X
    return GaussianState(mean, variance, basis.label), basis


# helpers


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _state(args):
    return pio.state_from_json(_read(args.state))


def _basis(args):
    return pio.basis_from_json(_read(args.basis))


def _state_and_basis(args):
    if getattr(args, "plant", None):
        return planted(args.plant)
    if not args.state or not args.basis:
        raise ValueError("need --state and --basis (or --plant)")
    state, basis = _state(args), _basis(args)
    if state.num_modes != basis.size:
        raise GridMismatch(f"state has {state.num_modes} modes, basis has {basis.size}")
    return state, basis


def _matrix(a):
    return np.asarray(a, dtype=float).tolist()


def align_correlation(corr, grid):
    """Reorder ``corr`` onto ascending frequency and check it matches ``grid``."""
    if isinstance(corr.axis, FrequencyGrid):
        omega = corr.axis.omega
    elif corr.axis is None:
        raise GridMismatch("correlation data carries no frequency axis")
    else:
        omega = np.asarray(corr.axis, dtype=float)
    order = np.argsort(omega, kind="stable")
    omega = omega[order]
    if omega.size != grid.num_bins or not np.allclose(
        omega, grid.omega, rtol=1e-6, atol=1e-9 * grid.delta_omega
    ):
        raise GridMismatch("correlation axis does not match the basis grid")
    if np.array_equal(order, np.arange(order.size)):
        return corr
    idx = np.ix_(order, order)
    return CorrelationData(grid, corr.c_normalized[idx], mask=corr.mask[idx], metadata=corr.metadata)


def _strong_correlation(state, basis, check=True):
    N = state.num_modes
    return spectral_correlation_strongfield(
        basis, state.mean[:N], state.variance[:N, :N], mean_p=state.mean[N:], check=check
    )


def _verdict(corr):
    return sorted(v.value for v in single_mode_sign_theorem_check(corr))


def _reconstruction_report(corr, basis, args):
    rec = reconstruct_vxx(corr, basis, details=True)
    diag = diagonalize_vxx(rec.v_xx, basis)
    direction, q_min, q_max = optimal_lo(rec.v_xx)
    report = {
        "v_xx": _matrix(rec.v_xx),
        "eigenvalues": diag.eigenvalues.tolist(),
        "rotation": _matrix(diag.rotation),
        "squeezing_db": diag.squeezing_db,
        "fill_fraction": rec.fill_fraction,
        "filled_by_symmetry": rec.filled_by_symmetry,
        "filled_by_zero": rec.filled_by_zero,
        "q_min": q_min,
        "q_max": q_max,
        "lo_vector": direction.tolist(),
        "sign_verdict": _verdict(corr),
    }
    if corr.metadata.get("conversion"):
        report["axis_conversion"] = corr.metadata["conversion"]
    if args.sigma is not None:
        report["errors"] = _matrix(reconstruction_error(args.sigma, basis))
        if args.mc_trials:
            mc = monte_carlo_uncertainty(corr, args.sigma, basis, args.mc_trials, args.seed)
            report["mc_summary"] = mc.to_dict()
    elif args.mc_trials:
        raise ValueError("--mc-trials needs --sigma")
    return report, diag


# subcommands


def cmd_state(args):
    if args.action == "plant":
        state, _ = planted(args.plant or "demo3mode")
        return state.to_dict()
    state = _state(args)
    M = state.variance + 0.5j * symplectic_form(state.num_modes)
    return {
        "valid": bool(is_physical(state)),
        "num_modes": state.num_modes,
        "label": state.label,
        "min_uncertainty_eigenvalue": float(np.linalg.eigvalsh(M)[0]),
        "mean_photons": float(0.5 * (state.mean @ state.mean + np.trace(state.variance) - state.num_modes)),
    }


def cmd_basis(args):
    grid = soliton_grid(args.omega_o, args.bins, args.half_width)
    basis = haus_lai_basis(args.omega_o, grid)
    if args.modes < 4:
        basis = basis.subset(range(args.modes))
    if args.format == "csv":
        return pio.mode_curves_to_csv(basis)
    return json.loads(pio.basis_to_json(basis))


def cmd_correlate(args):
    state, basis = _state_and_basis(args)
    if args.kind == "exact":
        bins = transform_to_frequency(state, basis)
        corr = correlation_data(bins, basis.grid)
    else:
        corr = _strong_correlation(state, basis)
    if args.format == "csv":
        return pio.correlation_to_csv(corr, args.axis, args.carrier_omega)
    return {
        "kind": args.kind,
        "grid": basis.grid.to_dict(),
        "c_normalized": [[None if m else v for v, m in zip(r, mr)] for r, mr in
                         zip(corr.c_normalized.tolist(), corr.mask.tolist())],
        "sign_verdict": _verdict(corr),
    }


def cmd_reconstruct(args):
    basis = _basis(args)
    corr = align_correlation(pio.correlation_from_csv(_read(args.corr), args.carrier_omega), basis.grid)
    report, diag = _reconstruction_report(corr, basis, args)
    if args.modes_out:
        with open(args.modes_out, "w", encoding="utf-8", newline="") as fh:
            fh.write(pio.mode_curves_to_csv(diag.modes))
    return report


def cmd_tomography(args):
    state = _state(args)
    schedule, result = simulate_tomography(state, args.shots, args.seed)
    out = result.to_dict()
    out["schedule"] = [lo.to_dict() for lo in schedule]
    return out


def cmd_optimize_lo(args):
    state = _state(args)
    direction, q_min, q_max = optimal_lo(state.variance)
    out = {"q_min": q_min, "q_max": q_max, "lo_vector": direction.tolist()}
    if np.any(state.mean != 0):
        out["q_current"] = mandel_q(state)
    return out


def cmd_filter(args):
    state, basis = _state_and_basis(args)
    filt = pio.filter_from_csv(_read(args.filter), basis.grid)
    N = state.num_modes
    res = filtered_q(basis, state.mean[:N], state.mean[N:], state.variance, filt)
    _, q_min, _ = optimal_lo(state.variance)
    return {"q_f": res.q, "a_squared": res.a_squared, "q_min": q_min}


def cmd_select_modes(args):
    state, basis = _state_and_basis(args)
    f1 = basis[0]
    temp_size = args.temp_size
    candidates = None
    if args.candidates == "basis":
        # basis modes first, padded with polynomial functions
        extra = polynomial_candidates(f1, temp_size)[1:]
        candidates = (list(basis.modes[1:]) + extra)[: temp_size - 1]
    if args.shots:
        measure = homodyne_measurement(state, basis, args.shots, args.seed)
        epsilon = args.epsilon if args.epsilon is not None else sampled_epsilon(args.shots, temp_size)
    else:
        measure = exact_measurement(state, basis)
        epsilon = args.epsilon if args.epsilon is not None else DEFAULT_EPSILON
    result = select_modes(measure, f1, temp_size, epsilon, candidates)
    out = result.to_dict()
    out["epsilon"] = epsilon
    out["basis"] = json.loads(pio.basis_to_json(result.basis))
    return out


def cmd_haus_lai(args):
    state = _state(args)
    stats = soliton_operator_stats(state, SolitonParameters(args.n0, args.omega_o))
    out = stats.to_dict()
    out["photon_statistics"] = photon_stat_sufficiency_check(state)
    return out


def cmd_pipeline(args):
    if args.corr:
        if not args.basis:
            raise ValueError("--corr needs --basis")
        basis = _basis(args)
        corr = align_correlation(pio.correlation_from_csv(_read(args.corr), args.carrier_omega), basis.grid)
        source = {"corr": args.corr}
    else:
        state, basis = _state_and_basis(args)
        corr = _strong_correlation(state, basis)
        source = {"plant": args.plant} if args.plant else {"state": args.state}
    report, _ = _reconstruction_report(corr, basis, args)
    report["source"] = source
    return report


# parser


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="seed for all randomness")
    p.add_argument("--output", "-o", default=None, help="write result here instead of stdout")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(
        prog="pulsemodes", description="Multimode Gaussian description of optical pulses."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, formats=("json",), **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.add_argument("--format", choices=formats, default=formats[0])
        p.set_defaults(func=func)
        return p

    p = add("state", cmd_state, help="validate or plant a Gaussian state")
    p.add_argument("action", choices=("validate", "plant"))
    p.add_argument("--state")
    p.add_argument("--plant", choices=PLANTS)

    p = add("basis", cmd_basis, ("json", "csv"), help="soliton mode basis (JSON or mode curves)")
    p.add_argument("--kind", choices=("haus-lai",), default="haus-lai")
    p.add_argument("--omega-o", type=float, default=1.0)
    p.add_argument("--bins", type=int, default=1024)
    p.add_argument("--half-width", type=float, default=8.0)
    p.add_argument("--modes", type=int, choices=(1, 2, 3, 4), default=4)

    def source(p):
        p.add_argument("--state")
        p.add_argument("--basis")
        p.add_argument("--plant", choices=PLANTS)

    p = add("correlate", cmd_correlate, ("csv", "json"), help="photon-number correlation heatmap")
    source(p)
    p.add_argument("--kind", choices=("strong", "exact"), default="strong")
    p.add_argument("--axis", choices=("omega", "wavelength_nm"), default="omega")
    p.add_argument("--carrier-omega", type=float, default=0.0,
                   help="carrier frequency in rad/fs added to grid offsets for wavelengths")

    def recon_opts(p):
        p.add_argument("--sigma", type=float, default=None, help="uniform error of C entries")
        p.add_argument("--mc-trials", type=int, default=0)
        p.add_argument("--carrier-omega", type=float, default=0.0,
                       help="carrier frequency in rad/fs for wavelength-axis CSVs")

    p = add("reconstruct", cmd_reconstruct, help="V_XX from a correlation CSV")
    p.add_argument("--corr", required=True)
    p.add_argument("--basis", required=True)
    p.add_argument("--modes-out", default=None, help="CSV file for the rotated mode curves")
    recon_opts(p)

    p = add("tomography", cmd_tomography, help="simulated homodyne tomography")
    p.add_argument("--state", required=True)
    p.add_argument("--shots", type=int, default=None)

    p = add("optimize-lo", cmd_optimize_lo, help="Q range and optimal LO")
    p.add_argument("--state", required=True)

    p = add("filter", cmd_filter, help="Mandel Q after spectral filtering")
    source(p)
    p.add_argument("--filter", required=True)

    p = add("select-modes", cmd_select_modes, help="operational mode construction")
    source(p)
    p.add_argument("--temp-size", type=int, default=8)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--candidates", choices=("polynomial", "basis"), default="polynomial")

    p = add("haus-lai", cmd_haus_lai, help="soliton operator statistics")
    p.add_argument("--state", required=True)
    p.add_argument("--n0", type=float, required=True)
    p.add_argument("--omega-o", type=float, default=1.0)

    p = add("pipeline", cmd_pipeline, help="correlate, reconstruct, diagonalize, optimize LO")
    source(p)
    p.add_argument("--corr")
    recon_opts(p)
    return parser


def _emit(result, fmt, output):
    text = result if isinstance(result, str) else pio.dumps_json(result)
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(code, message):
    sys.stderr.write(json.dumps({"error": {"code": code, "message": message}}, sort_keys=True) + "\n")
    return 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = args.func(args)
        for w in caught:
            sys.stderr.write(f"warning: {w.message}\n")
        _emit(result, args.format, args.output)
    except PulseModesError as exc:
        return _fail(exc.code, str(exc))
    except ValueError as exc:
        return _fail("invalid_value", str(exc))
    except OSError as exc:
        return _fail("io", str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
