import dataclasses
import math

import numpy as np
import pytest

from slowlight.errors import InvalidParameters, NoPeak, StepSizeTooCoarse
from slowlight.medium import derived_figures
from slowlight.models import PulseField, PulseSpec
from slowlight.oracle import (
    AtomicStepper,
    default_window,
    dump_field,
    measure_delay,
    propagate,
    pulse_in_window,
    spectral_output,
    transfer_equivalence,
)
from slowlight.tables import load_table
from tests.cells import make_cell

PULSE = PulseSpec(rms_width=2e-6)


@pytest.fixture(scope='module')
def cell():
    return make_cell(10.0)


@pytest.fixture(scope='module')
def paper_field(cell):
    return propagate(cell, PULSE, 512, 8192)


@pytest.fixture(scope='module')
def paper_report(cell):
    return transfer_equivalence(cell, PULSE, 512, 8192)


def test_pulse_envelope():
    times = np.array([PULSE.center_time, PULSE.center_time + 2 * PULSE.rms_width])
    values = PULSE.envelope(times)
    assert values[0] == pytest.approx(1.0)
    assert abs(values[1]) == pytest.approx(math.exp(-1))
    assert PULSE.center_time == pytest.approx(24e-6)
    assert PULSE.bandwidth == pytest.approx(5e5)


def test_pulse_validation():
    with pytest.raises(InvalidParameters):
        PulseSpec(rms_width=0.0)
    with pytest.raises(InvalidParameters):
        PulseSpec(rms_width=1e-6, shape='square')
    with pytest.raises(InvalidParameters):
        PulseSpec(rms_width=1e-6, window=5e-6)


def test_default_window(cell):
    expected = PULSE.center_time + derived_figures(cell).tau_d + 12 * PULSE.rms_width
    assert default_window(cell, PULSE) == pytest.approx(expected)
    assert default_window(cell, dataclasses.replace(PULSE, window=1e-4)) == 1e-4


def test_stepper_is_stable_on_the_paper_grid(cell):
    dt = default_window(cell, PULSE) / 8191
    dz = cell.length / 511
    stepper = AtomicStepper(cell.gamma_ba + dz * cell.collective_coupling / (2 * cell.c_light),
                            cell.omega_c, cell.gamma_bc, dt)
    assert stepper.amplification < 1


def test_stepper_relaxes_to_steady_state(cell):
    stepper = AtomicStepper(cell.gamma_ba, cell.omega_c, cell.gamma_bc, 5e-10)
    drive = np.ones(8192, dtype=complex)
    coherences, error = stepper.solve(drive)
    # Constant drive u: sigma_bc = i Omega_c sigma_ba / gamma_bc and
    # sigma_ba = u gamma_bc / D0 with D0 = gamma_ba gamma_bc + Omega_c^2.
    d0 = cell.gamma_ba * cell.gamma_bc + cell.omega_c ** 2
    assert coherences[0, -1] == pytest.approx(cell.gamma_bc / d0, rel=1e-3)
    assert error < 1e-6


def test_free_propagation_without_coupling():
    params = make_cell(target_vg=None)
    field = propagate(params, PULSE, 64, 256)
    np.testing.assert_array_equal(field.output_envelope, field.input_envelope)
    assert np.all(field.sigma_ba == 0)
    assert measure_delay(field) == pytest.approx(0.0, abs=1e-12 * field.t_grid[-1])

    report = transfer_equivalence(params, PULSE, 64, 256)
    assert report.residual <= 1e-10
    assert report.expected_delay == 0
    assert report.energy_time == pytest.approx(1.0)


def test_stored_slices():
    params = make_cell(target_vg=None)
    field = propagate(params, PULSE, 100, 256, z_stride=10)
    assert field.z_grid[0] == 0
    assert field.z_grid[-1] == pytest.approx(params.length)
    assert len(field.z_grid) == 11
    assert field.envelope.shape == (11, 256)


def test_grid_limits(cell):
    with pytest.raises(InvalidParameters):
        propagate(cell, PULSE, 32, 8192)
    with pytest.raises(InvalidParameters):
        propagate(cell, PULSE, 512, 128)


def test_coarse_grid_is_rejected(cell):
    with pytest.raises(StepSizeTooCoarse):
        propagate(cell, PULSE, 64, 256)


def test_tolerance_is_enforced(cell):
    with pytest.raises(StepSizeTooCoarse):
        propagate(cell, PULSE, 512, 8192, tolerance=1e-20)


def test_oracle_matches_transfer_function(cell, paper_report):
    assert paper_report.in_window
    assert paper_report.residual <= 0.01
    assert paper_report.measured_delay == pytest.approx(derived_figures(cell).tau_d, rel=0.03)
    assert paper_report.energy_time == pytest.approx(paper_report.energy_frequency, rel=0.01)


def test_oracle_converges(cell, paper_report):
    refined = transfer_equivalence(cell, PULSE, 1024, 16384)
    assert refined.residual <= paper_report.residual / 3


def test_energy_is_not_created(paper_field):
    energy_in = np.sum(np.abs(paper_field.input_envelope) ** 2)
    energy_out = np.sum(np.abs(paper_field.output_envelope) ** 2)
    assert energy_out <= energy_in


def test_output_is_causal(paper_field):
    input_magnitude = np.abs(paper_field.input_envelope)
    output_magnitude = np.abs(paper_field.output_envelope)
    leading = (input_magnitude <= 1e-11 * input_magnitude.max()) & (paper_field.t_grid < PULSE.center_time)
    assert np.any(leading)
    assert np.all(output_magnitude[leading] <= 1e-10 * output_magnitude.max())


def test_oracle_is_linear(cell, paper_field):
    scaled = propagate(cell, dataclasses.replace(PULSE, peak_amplitude=2.5), 512, 8192)
    difference = np.abs(scaled.output_envelope - 2.5 * paper_field.output_envelope)
    assert difference.max() <= 1e-12 * np.abs(scaled.output_envelope).max()


def test_detuned_pulse_is_attenuated(cell, paper_report):
    window = derived_figures(cell).delta_omega
    detuned = dataclasses.replace(PULSE, carrier_detuning=window)
    assert not pulse_in_window(cell, detuned)
    report = transfer_equivalence(cell, detuned, 512, 16384)

    ratio_time = math.sqrt(report.energy_time / paper_report.energy_time)
    ratio_frequency = math.sqrt(report.energy_frequency / paper_report.energy_frequency)
    assert ratio_time == pytest.approx(ratio_frequency, rel=0.05)
    assert ratio_time == pytest.approx(math.exp(-1), rel=0.05)


def test_stronger_control_shortens_the_delay(cell, paper_report):
    strong = dataclasses.replace(cell, omega_c=2 * cell.omega_c)
    expected_ratio = derived_figures(cell).tau_d / derived_figures(strong).tau_d
    assert expected_ratio == pytest.approx(4.0, rel=0.01)

    field = propagate(strong, PULSE, 512, 16384)
    assert paper_report.measured_delay / measure_delay(field) == pytest.approx(expected_ratio, rel=0.05)


def test_spectral_output_without_coupling():
    params = make_cell(target_vg=None)
    times = np.linspace(0, 60e-6, 1024)
    envelope = PULSE.envelope(times)
    np.testing.assert_allclose(spectral_output(params, envelope, times), envelope, atol=1e-14)


def test_no_peak():
    times = np.linspace(0, 1e-6, 8)
    envelope = np.zeros((2, 8), dtype=complex)
    envelope[0] = 1.0
    field = PulseField(z_grid=np.array([0.0, 0.1]), t_grid=times, envelope=envelope,
                       sigma_ba=np.zeros((2, 8)), sigma_bc=np.zeros((2, 8)))
    with pytest.raises(NoPeak):
        measure_delay(field)


def test_pulse_field_shapes_are_checked():
    with pytest.raises(InvalidParameters):
        PulseField(z_grid=np.array([0.0, 0.1]), t_grid=np.linspace(0, 1, 4), envelope=np.zeros((2, 3)),
                   sigma_ba=np.zeros((2, 4)), sigma_bc=np.zeros((2, 4)))


def test_dump_field(tmp_path):
    field = propagate(make_cell(target_vg=None), PULSE, 64, 256, z_stride=21)
    path = dump_field(field, tmp_path / 'field' / 'envelope.csv')
    table = load_table(path)
    assert list(table.columns) == ['z', 't', 're', 'im']
    assert len(table) == len(field.z_grid) * len(field.t_grid)
    np.testing.assert_allclose(table['re'].to_numpy()[:256], field.input_envelope.real, rtol=1e-11)
