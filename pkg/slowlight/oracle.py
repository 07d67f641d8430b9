"""
Semiclassical time-domain propagation of a classical probe pulse through the cell.

The Maxwell-Bloch equations are integrated in retarded time tau = t - z/c, so the envelope
obeys dE/dz = (i g N / c) sigma_ba and each z slice carries a linear, fixed-coefficient atomic
problem in tau. The Langevin forces are dropped; only the mean field is propagated.
"""
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy import fft
from scipy.signal import lfilter

from slowlight.errors import InvalidParameters, NoPeak, StepSizeTooCoarse
from slowlight.medium import derived_figures, medium_term
from slowlight.models import MediumParams, PulseField, PulseSpec
from slowlight.tables import write_table

logger = logging.getLogger(__name__)

MIN_Z_POINTS = 64
MIN_T_POINTS = 256

# Stored z slices when no stride is requested.
DEFAULT_STORED_SLICES = 64

# A pulse is considered inside the transparency window when its bandwidth and detuning are
# both below this fraction of delta_omega.
WINDOW_FRACTION = 0.2


def _midpoints(samples: np.ndarray) -> np.ndarray:
    """Cubic interpolation half way between consecutive samples, quadratic at both ends."""
    mid = np.empty(len(samples) - 1, dtype=complex)
    mid[1:-1] = (-samples[:-3] + 9 * samples[1:-2] + 9 * samples[2:-1] - samples[3:]) / 16
    mid[0] = (3 * samples[0] + 6 * samples[1] - samples[2]) / 8
    mid[-1] = (-samples[-3] + 6 * samples[-2] + 3 * samples[-1]) / 8
    return mid


class AtomicStepper:
    """
    Classical RK4 for the driven pair y = (sigma_ba, sigma_bc),

        dy/dtau = A y + (u(tau), 0),    A = [[-damping, i Omega_c], [i Omega_c, -gamma_bc]].

    Because A is constant, one RK4 step is the affine map y -> M y + q0 u_n + qh u_{n+1/2} + q1 u_{n+1}.
    The resulting two-dimensional recurrence is run as a pair of IIR filters with the
    characteristic polynomial of M as common denominator.
    """

    def __init__(self, damping: float, omega_c: float, gamma_bc: float, step: float) -> None:
        self.step = step
        self.matrix = np.array([[-damping, 1j * omega_c], [1j * omega_c, -gamma_bc]], dtype=complex)
        self.fine = self._coefficients(step)
        self.coarse = self._coefficients(2 * step)

    @property
    def amplification(self) -> float:
        """Spectral radius of the one-step map; above one the recurrence diverges."""
        return float(np.max(np.abs(np.linalg.eigvals(self.fine[0]))))

    def _coefficients(self, step: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        identity = np.eye(2, dtype=complex)
        h1 = step * self.matrix
        h2 = h1 @ h1
        h3 = h2 @ h1
        transition = identity + h1 + h2 / 2 + h3 / 6 + h2 @ h2 / 24
        start = step / 6 * (identity + h1 + h2 / 2 + h3 / 4)
        middle = step / 6 * (4 * identity + 2 * h1 + h2 / 2)
        end = step / 6 * identity
        # Only the first component is driven, so the first columns suffice.
        return transition, start[:, 0], middle[:, 0], end[:, 0]

    @staticmethod
    def _run(coefficients, start: np.ndarray, middle: np.ndarray, end: np.ndarray) -> np.ndarray:
        transition, q_start, q_middle, q_end = coefficients
        sources = np.zeros((2, len(start) + 1), dtype=complex)
        sources[:, :-1] = (np.outer(q_start, start) + np.outer(q_middle, middle) + np.outer(q_end, end))

        denominator = [1.0, -np.trace(transition), np.linalg.det(transition)]
        (m11, m12), (m21, m22) = transition
        first = (lfilter([0.0, 1.0, -m22], denominator, sources[0])
                 + lfilter([0.0, 0.0, m12], denominator, sources[1]))
        second = (lfilter([0.0, 0.0, m21], denominator, sources[0])
                  + lfilter([0.0, 1.0, -m11], denominator, sources[1]))
        return np.vstack([first, second])

    def solve(self, drive: np.ndarray) -> Tuple[np.ndarray, float]:
        """
        Integrates from rest under the sampled drive u(tau).

        Returns:
            Tuple[np.ndarray, float]: The (2, nt) solution and the Richardson estimate of its
            local error relative to the peak of the solution.
        """
        fine = self._run(self.fine, drive[:-1], _midpoints(drive), drive[1:])

        steps = (len(drive) - 1) // 2
        coarse = self._run(self.coarse, drive[0:2 * steps:2], drive[1:2 * steps:2], drive[2:2 * steps + 1:2])

        with np.errstate(over='ignore', invalid='ignore'):
            peak = float(np.max(np.abs(fine)))
            if peak == 0:
                return fine, 0.0
            difference = float(np.max(np.abs(fine[:, 0:2 * steps + 1:2] - coarse)))
        return fine, difference / 15 / peak


def default_window(params: MediumParams, pulse: PulseSpec) -> float:
    """Retarded-time span that holds the input pulse and the delayed output with 12 rms widths of margin."""
    if pulse.window is not None:
        return pulse.window
    delay = derived_figures(params).tau_d if params.coupling_g > 0 else 0.0
    return pulse.center_time + delay + 12 * pulse.rms_width


def _time_grid(params: MediumParams, pulse: PulseSpec, nt: int) -> np.ndarray:
    return np.linspace(0.0, default_window(params, pulse), nt)


def propagate(params: MediumParams,
              pulse: PulseSpec,
              nz: int,
              nt: int,
              *,
              tolerance: float = 1e-6,
              z_stride: Optional[int] = None) -> PulseField:
    """
    Integrates the mean-field Maxwell-Bloch equations across the cell.

    The envelope is marched in z with the trapezoidal rule. Its unknown value on the new slice
    is folded into the atomic equations as an extra coherence damping dz g^2 N / (2 c), so every
    slice reduces to one atomic problem driven by known data.

    Args:
        params (MediumParams): The medium, with the atoms initially in |b>.
        pulse (PulseSpec): The input pulse at z = 0.
        nz (int): Number of z points, including both faces of the cell.
        nt (int): Number of retarded-time samples.
        tolerance (float): Largest accepted relative local error of the atomic step.
        z_stride (int): Keep every ``z_stride``-th slice; z = 0 and z = L are always kept.
            Defaults to about 64 stored slices.

    Returns:
        PulseField: Envelope and coherences on the stored slices.

    Raises:
        StepSizeTooCoarse: If the atomic RK4 step is unstable or its error estimate exceeds
            ``tolerance``.
    """
    if nz < MIN_Z_POINTS or nt < MIN_T_POINTS:
        raise InvalidParameters(f"the oracle needs nz >= {MIN_Z_POINTS} and nt >= {MIN_T_POINTS}, got {nz} and {nt}")
    if z_stride is None:
        z_stride = max(1, (nz - 1) // DEFAULT_STORED_SLICES)
    if z_stride < 1:
        raise InvalidParameters(f"z_stride must be positive, got {z_stride}")

    times = _time_grid(params, pulse, nt)
    positions = np.linspace(0.0, params.length, nz)
    dz = positions[1] - positions[0]
    dt = times[1] - times[0]
    logger.info("Propagating over nz=%d, nt=%d (dz=%.3g m, dt=%.3g s)", nz, nt, dz, dt)

    envelope = pulse.envelope(times)
    kept = [i for i in range(nz) if i % z_stride == 0 or i == nz - 1]
    stored_envelope = [envelope]

    g = params.coupling_g
    if g == 0:
        # Without coupling the atoms are never driven and the pulse keeps its shape.
        count = len(kept)
        return PulseField(z_grid=positions[kept],
                          t_grid=times,
                          envelope=np.tile(envelope, (count, 1)),
                          sigma_ba=np.zeros((count, nt), dtype=complex),
                          sigma_bc=np.zeros((count, nt), dtype=complex))

    field_rate = 1j * params.collective_coupling / (g * params.c_light)
    entrance = AtomicStepper(params.gamma_ba, params.omega_c, params.gamma_bc, dt)
    interior = AtomicStepper(params.gamma_ba + dz * params.collective_coupling / (2 * params.c_light),
                             params.omega_c, params.gamma_bc, dt)
    for stepper in (entrance, interior):
        if stepper.amplification > 1:
            raise StepSizeTooCoarse(
                f"RK4 amplification {stepper.amplification:.4g} > 1 with dt={dt:.3g} s; increase nt or nz")

    coherences, error = entrance.solve(1j * g * envelope)
    _check_error(error, tolerance, 0)
    stored_ba, stored_bc = [coherences[0]], [coherences[1]]

    for index in range(1, nz):
        known = envelope + dz / 2 * field_rate * coherences[0]
        coherences, error = interior.solve(1j * g * known)
        _check_error(error, tolerance, index)
        envelope = known + dz / 2 * field_rate * coherences[0]
        if index % z_stride == 0 or index == nz - 1:
            stored_envelope.append(envelope)
            stored_ba.append(coherences[0])
            stored_bc.append(coherences[1])

    return PulseField(z_grid=positions[kept],
                      t_grid=times,
                      envelope=np.array(stored_envelope),
                      sigma_ba=np.array(stored_ba),
                      sigma_bc=np.array(stored_bc))


def _check_error(error: float, tolerance: float, index: int) -> None:
    if not math.isfinite(error) or error > tolerance:
        raise StepSizeTooCoarse(
            f"local error estimate {error:.3g} exceeds {tolerance:g} at z slice {index}; increase nt")


def spectral_output(params: MediumParams, input_envelope: np.ndarray, times: np.ndarray) -> np.ndarray:
    """
    Applies the frequency-domain transfer exp(-Lambda(omega) L) to a sampled envelope, in the same
    retarded frame as the oracle.
    """
    dt = times[1] - times[0]
    # The envelope convention is exp(-i omega t), opposite to the FFT kernel.
    omegas = -2 * np.pi * fft.fftfreq(len(times), d=dt)
    transfer = np.exp(-medium_term(params, omegas) * params.length)
    return fft.ifft(fft.fft(input_envelope) * transfer)


def measure_delay(field: PulseField) -> float:
    """
    Centroid delay of |E|^2 between the last and the first stored slices.

    The time grid is in retarded time, so the vacuum transit L/c is already excluded.

    Raises:
        NoPeak: If the output energy is below 1e-12 of the input energy.
    """
    intensity_in = np.abs(field.input_envelope) ** 2
    intensity_out = np.abs(field.output_envelope) ** 2
    energy_in = float(np.sum(intensity_in))
    energy_out = float(np.sum(intensity_out))
    if energy_in == 0 or energy_out < 1e-12 * energy_in:
        raise NoPeak("the output pulse carries no measurable energy")
    return float(np.average(field.t_grid, weights=intensity_out) - np.average(field.t_grid, weights=intensity_in))


@dataclass(frozen=True)
class TransferReport:
    """
    Comparison of the time-domain oracle with the frequency-domain transfer function.

    Attributes:
        residual (float): Relative L2 distance between the two output envelopes.
        energy_time (float): Output over input energy from the oracle.
        energy_frequency (float): The same ratio from exp(-2 Re Lambda L) on the input spectrum.
        measured_delay (float): Centroid delay from the oracle, in seconds.
        expected_delay (float): tau_d from derived_figures (0 without coupling).
        in_window (bool): Whether the pulse bandwidth and detuning lie well inside delta_omega.
        nz (int): Number of z points used.
        nt (int): Number of time samples used.
    """
    residual: float
    energy_time: float
    energy_frequency: float
    measured_delay: float
    expected_delay: float
    in_window: bool
    nz: int
    nt: int


def pulse_in_window(params: MediumParams, pulse: PulseSpec) -> bool:
    if params.coupling_g == 0:
        return True
    limit = WINDOW_FRACTION * derived_figures(params).delta_omega
    return pulse.bandwidth <= limit and abs(pulse.carrier_detuning) <= limit


def transfer_equivalence(params: MediumParams, pulse: PulseSpec, nz: int = 512, nt: int = 8192,
                         **options) -> TransferReport:
    """
    Propagates ``pulse`` with the oracle and with the transfer function and reports how far apart
    the two output envelopes are.

    Args:
        options: Forwarded to ``propagate`` (``tolerance``, ``z_stride``).
    """
    in_window = pulse_in_window(params, pulse)
    if not in_window:
        logger.warning("Pulse bandwidth or detuning is outside the transparency window; "
                       "the comparison is informative only")

    field = propagate(params, pulse, nz, nt, **options)
    expected = spectral_output(params, field.input_envelope, field.t_grid)
    residual = float(np.linalg.norm(field.output_envelope - expected) / np.linalg.norm(expected))

    energy_in = float(np.sum(np.abs(field.input_envelope) ** 2))
    report = TransferReport(
        residual=residual,
        energy_time=float(np.sum(np.abs(field.output_envelope) ** 2)) / energy_in,
        energy_frequency=float(np.sum(np.abs(expected) ** 2)) / energy_in,
        measured_delay=measure_delay(field),
        expected_delay=derived_figures(params).tau_d if params.coupling_g > 0 else 0.0,
        in_window=in_window,
        nz=nz,
        nt=nt,
    )
    logger.info("Transfer equivalence: residual=%.3g, measured delay=%.4g s", report.residual, report.measured_delay)
    return report


def dump_field(field: PulseField, path: Union[str, Path]) -> Path:
    """
    Writes the envelope as a long-format CSV with columns z, t, re, im.
    """
    z_count, t_count = field.envelope.shape
    frame = pd.DataFrame({
        'z': np.repeat(field.z_grid, t_count),
        't': np.tile(field.t_grid, z_count),
        're': field.envelope.real.ravel(),
        'im': field.envelope.imag.ravel(),
    })
    return write_table(frame, path, timestamp=False)
