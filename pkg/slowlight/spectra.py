"""
Output spectra of quantum probe states after the EIT cell.

All spectra are normalised so that vacuum has value 1 and evaluated on a FrequencyGrid of
sideband frequencies in rad/s.
"""
import logging
import math
from typing import Optional

import numpy as np

from slowlight.errors import GridMismatch, InvalidParameters
from slowlight.langevin import effective_length, noise_floor, noise_source
from slowlight.medium import derived_figures, transfer_exponent
from slowlight.models import FrequencyGrid, MediumParams, SpectrumCurve, SpectrumKind
from slowlight.states import EntangledInput, SqueezedInput

logger = logging.getLogger(__name__)

# Absorption above which the low-absorption entanglement model is flagged.
APPROXIMATION_LIMIT = 0.1

# Largest imaginary part tolerated in the full entanglement spectrum before it is dropped.
IMAGINARY_RESIDUE = 1e-10


def transmission(params: MediumParams, grid: FrequencyGrid) -> SpectrumCurve:
    """
    Intensity transmission exp(-2 Re Lambda(omega) L) of each sideband.
    """
    rate = np.real(transfer_exponent(params, grid.omegas))
    return SpectrumCurve(grid, np.exp(-2 * rate * params.length), SpectrumKind.TRANSMISSION)


def noise_floor_curve(params: MediumParams, grid: FrequencyGrid) -> SpectrumCurve:
    return SpectrumCurve(grid, noise_floor(params, grid.omegas), SpectrumKind.NOISE_FLOOR)


def squeezing_out(params: MediumParams,
                  state: SqueezedInput,
                  grid: FrequencyGrid,
                  theta: Optional[float] = None) -> SpectrumCurve:
    """
    Quadrature spectrum of a squeezed probe after the cell,
    S_out(omega) = S_in(omega) exp(-2 Re Lambda(omega) L) + noise_floor(omega).

    Args:
        params (MediumParams): The medium.
        state (SqueezedInput): The input beam.
        grid (FrequencyGrid): Frequencies to evaluate.
        theta (float): Quadrature angle; defaults to the angle stored in ``state``.

    Returns:
        SpectrumCurve: The output spectrum, kind ``squeezing``.
    """
    omegas = grid.omegas
    s_in = state.spectrum(omegas, theta)
    attenuation = np.exp(-2 * np.real(transfer_exponent(params, omegas)) * params.length)
    return SpectrumCurve(grid, s_in * attenuation + noise_floor(params, omegas), SpectrumKind.SQUEEZING)


def entanglement_out_full(params: MediumParams,
                          state: EntangledInput,
                          theta: float,
                          phi: float,
                          grid: FrequencyGrid,
                          delay: Optional[float] = None) -> SpectrumCurve:
    """
    Normalised variance of the delay-compensated difference X_out^theta(t + delay) - Y_out^phi(t),
    where beam X crosses the cell and beam Y travels the same length in vacuum.

    Every input moment is propagated with its exact phase: the X term is attenuated by
    exp(-2 Re Lambda L), the cross terms pick up exp(-Lambda L - i omega (delay + L/c)) and its
    conjugate, and the Y term is unchanged. The Langevin noise floor of beam X is added.

    Args:
        delay (float): Compensation delay in seconds; defaults to tau_d.

    Raises:
        DegenerateRegime: If the slow-light figures cannot be derived.
    """
    figures = derived_figures(params)
    delay = figures.tau_d if delay is None else delay
    omegas = grid.omegas

    exponent = transfer_exponent(params, omegas) * params.length
    xx, xy, yx, yy = state.moments(omegas, theta, phi)
    cross = np.exp(-exponent - 1j * omegas * (delay + params.length / params.c_light))
    total = 0.5 * (xx * np.exp(-2 * exponent.real) - xy * cross - yx * np.conj(cross) + yy)

    residue = float(np.max(np.abs(total.imag)))
    if residue > IMAGINARY_RESIDUE:
        raise InvalidParameters(f"entanglement spectrum has an imaginary residue of {residue:g}")
    return SpectrumCurve(grid, total.real + noise_floor(params, omegas), SpectrumKind.ENTANGLEMENT)


def entanglement_out_approx(params: MediumParams,
                            state: EntangledInput,
                            theta: float,
                            phi: float,
                            grid: FrequencyGrid) -> SpectrumCurve:
    """
    Low-absorption entanglement spectrum, where the whole input difference variance is damped by
    exp(-K L) and the noise is collected over an absorption K independent of omega.

    The result is returned even when K L exceeds 0.1; the curve notes carry the flag.
    """
    omegas = grid.omegas
    absorption = float(np.real(transfer_exponent(params, 0.0)))
    optical_depth = absorption * params.length

    notes = ()
    if optical_depth > APPROXIMATION_LIMIT:
        message = f"KL = {optical_depth:.3g} exceeds {APPROXIMATION_LIMIT}; low-absorption model is unreliable"
        logger.warning(message)
        notes = (message,)

    a_in = state.difference_variance(omegas, theta, phi)
    added = noise_source(params, omegas) * effective_length(absorption, params.length)
    return SpectrumCurve(grid, a_in * math.exp(-optical_depth) + added, SpectrumKind.ENTANGLEMENT, notes)


def duan_measure(a1: SpectrumCurve, a2: SpectrumCurve) -> SpectrumCurve:
    """
    Duan inseparability measure I = sqrt(A(theta, phi) A(theta + pi/2, phi - pi/2)).
    Values below 1 certify entanglement.

    Raises:
        GridMismatch: If the two curves are not sampled on the same frequencies.
    """
    if not a1.grid.matches(a2.grid):
        raise GridMismatch("both entanglement spectra must share the same frequency grid")
    return SpectrumCurve(a1.grid, np.sqrt(a1.values * a2.values), SpectrumKind.DUAN,
                         tuple(dict.fromkeys(a1.notes + a2.notes)))


def duan_out(params: MediumParams,
             state: EntangledInput,
             grid: FrequencyGrid,
             theta: float = 0.0,
             phi: float = 0.0,
             approximate: bool = False) -> SpectrumCurve:
    """
    Output Duan measure for the quadrature pairs (theta, phi) and (theta + pi/2, phi - pi/2).
    """
    if approximate:
        first = entanglement_out_approx(params, state, theta, phi, grid)
        second = entanglement_out_approx(params, state, theta + math.pi / 2, phi - math.pi / 2, grid)
    else:
        first = entanglement_out_full(params, state, theta, phi, grid)
        second = entanglement_out_full(params, state, theta + math.pi / 2, phi - math.pi / 2, grid)
    return duan_measure(first, second)


def duan_in(state: EntangledInput, grid: FrequencyGrid, theta: float = 0.0, phi: float = 0.0) -> SpectrumCurve:
    """
    Duan measure of the input pair, before any propagation.
    """
    first = SpectrumCurve(grid, state.difference_variance(grid.omegas, theta, phi), SpectrumKind.ENTANGLEMENT)
    second = SpectrumCurve(grid, state.difference_variance(grid.omegas, theta + math.pi / 2, phi - math.pi / 2),
                           SpectrumKind.ENTANGLEMENT)
    return duan_measure(first, second)
