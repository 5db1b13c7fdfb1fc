import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_covariance
from pulsemodes import io as pio
from pulsemodes.errors import FormatError
from pulsemodes.gaussian import GaussianState
from pulsemodes.modes import FrequencyGrid, haus_lai_basis, soliton_grid
from pulsemodes.photon_stats import CorrelationData
from pulsemodes.squeezing import FilterFunction


@pytest.fixture(scope="module")
def hl():
    return haus_lai_basis(1.0, soliton_grid(1.0, 64))


def test_state_round_trip(rng):
    s = GaussianState(rng.normal(size=6), random_covariance(rng, 3), "haus-lai")
    text = pio.state_to_json(s)
    back = pio.state_from_json(text)
    assert back.mean.tobytes() == s.mean.tobytes()
    assert back.variance.tobytes() == s.variance.tobytes()
    assert back.label == "haus-lai"
    assert pio.state_to_json(back) == text


@pytest.mark.parametrize("text", ["{", '{"mean": [0, 0]}', "[]"])
def test_state_bad_json(text):
    with pytest.raises(FormatError):
        pio.state_from_json(text)


def test_basis_round_trip(hl):
    back = pio.basis_from_json(pio.basis_to_json(hl))
    assert back.grid == hl.grid and back.label == hl.label
    assert back.matrix.tobytes() == hl.matrix.tobytes()


def test_mode_curves_round_trip(hl):
    back = pio.mode_curves_from_csv(pio.mode_curves_to_csv(hl), hl.label)
    np.testing.assert_array_equal(back.matrix, hl.matrix)
    np.testing.assert_allclose(back.grid.omega, hl.grid.omega, rtol=0, atol=1e-12)


class TestCorrelationCSV:
    def test_round_trip_masked(self, rng):
        grid = FrequencyGrid(-2.0, 0.5, 8)
        c = rng.normal(size=(8, 8))
        c = c + c.T
        mask = np.zeros((8, 8), bool)
        mask[1, 2] = mask[5, 5] = True
        corr = CorrelationData(grid, c, mask=mask)
        text = pio.correlation_to_csv(corr)
        back = pio.correlation_from_csv(text)
        np.testing.assert_array_equal(back.mask, mask)
        np.testing.assert_array_equal(back.c_normalized[~mask], c[~mask])
        assert isinstance(back.axis, FrequencyGrid)
        np.testing.assert_allclose(back.axis.omega, grid.omega, atol=1e-12)
        assert ",," in text
        assert pio.correlation_to_csv(back) == text

    def test_wavelength_axis(self):
        carrier = 2.35  # rad/fs, near 800 nm
        grid = FrequencyGrid(-0.04, 0.01, 8)
        corr = CorrelationData(grid, np.eye(8))
        text = pio.correlation_to_csv(corr, "wavelength_nm", carrier)
        assert text.startswith("wavelength_nm,")
        back = pio.correlation_from_csv(text, carrier)
        assert "conversion" in back.metadata and back.metadata["carrier_omega"] == carrier
        # the wavelength ticks map back onto the uniform frequency grid
        omega = back.axis.omega if isinstance(back.axis, FrequencyGrid) else back.axis
        np.testing.assert_allclose(omega, grid.omega, atol=1e-9)
        assert pio.correlation_to_csv(back, "wavelength_nm", carrier) == text

    def test_wavelength_needs_carrier(self):
        corr = CorrelationData(FrequencyGrid(-1.0, 0.5, 4), np.eye(4))
        with pytest.raises(FormatError):
            pio.correlation_to_csv(corr, "wavelength_nm")

    def test_conversion_values(self):
        assert pio.wavelength_to_omega(800.0) == pytest.approx(2 * np.pi * 299.792458 / 800.0)
        assert pio.omega_to_wavelength(pio.wavelength_to_omega(1550.0)) == pytest.approx(1550.0)

    @pytest.mark.parametrize(
        "text",
        [
            "freq,1,2\n1,0,0\n2,0,0\n",
            "omega,1,2\n1,0,0\n",
            "omega,1,2\n1,0,0\n3,0,0\n",
            "omega,1,2\n1,0,x\n2,0,0\n",
            "",
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(FormatError):
            pio.correlation_from_csv(text)


class TestFilterCSV:
    def test_round_trip(self, rng):
        grid = FrequencyGrid(0.0, 0.25, 6)
        f = FilterFunction(grid, rng.uniform(size=6))
        back = pio.filter_from_csv(pio.filter_to_csv(f), grid)
        assert back.c.tobytes() == f.c.tobytes()

    def test_grid_inferred(self):
        back = pio.filter_from_csv("omega,c\n0.5,1\n1.5,0.5\n2.5,0\n")
        np.testing.assert_allclose(back.grid.omega, [0.5, 1.5, 2.5])

    def test_intensity_column(self):
        back = pio.filter_from_csv("omega,T\n0.5,0.25\n1.5,1\n")
        np.testing.assert_allclose(back.c, [0.5, 1.0])

    def test_grid_mismatch(self):
        with pytest.raises(FormatError):
            pio.filter_from_csv("omega,c\n0.5,1\n1.5,1\n", FrequencyGrid(0.0, 1.0, 3))

    def test_bad_header(self):
        with pytest.raises(FormatError):
            pio.filter_from_csv("w,c\n0.5,1\n1.5,1\n")


@given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=2, max_size=5))
def test_csv_float_round_trip(values):
    grid = FrequencyGrid(0.0, 1.0, len(values))
    corr = CorrelationData(grid, np.diag(values))
    back = pio.correlation_from_csv(pio.correlation_to_csv(corr))
    np.testing.assert_array_equal(back.c_normalized, np.diag(values))


def test_grid_from_centres_nonuniform():
    assert pio.grid_from_centres([0.0, 1.0, 3.0]) is None
    assert pio.grid_from_centres([1.0]) is None
