import logging
import math

import numpy as np
from scipy.integrate import simpson

from slowlight.errors import InvalidParameters, UnequalDecayRates
from slowlight.medium import resonance_denominator, transfer_exponent
from slowlight.models import ArrayLike, DiffusionCoefficients, MediumParams, Populations

logger = logging.getLogger(__name__)

# Below this value of |2 x L| the closed form loses digits to cancellation.
SERIES_THRESHOLD = 1e-8


def _require_equal_rates(params: MediumParams) -> None:
    for name in ('gamma_b', 'gamma_c', 'gamma_ac'):
        value = getattr(params, name)
        if not math.isclose(value, params.gamma_ba, rel_tol=1e-12):
            raise UnequalDecayRates(
                f"{name} = {value:g} rad/s differs from gamma_ba = {params.gamma_ba:g} rad/s; "
                "the Langevin correlations assume a single optical decay rate")


def diffusion(params: MediumParams, pops: Populations = Populations()) -> DiffusionCoefficients:
    """
    Evaluates the Langevin diffusion amplitudes for the given atomic state.

    Each amplitude is the population bracket of the corresponding correlation function divided
    by the number of atoms per unit length n A.

    Raises:
        UnequalDecayRates: If gamma_b, gamma_c or gamma_ac differ from gamma_ba.
    """
    _require_equal_rates(params)
    gamma_ba, gamma_bc = params.gamma_ba, params.gamma_bc
    per_length = params.linear_density

    ground = gamma_ba * pops.sigma_aa + gamma_bc * (pops.sigma_cc + pops.sigma_bb)
    return DiffusionCoefficients(
        d_ba_ab=(gamma_ba * pops.sigma_aa + 2 * gamma_ba * pops.sigma_bb
                 - gamma_bc * (pops.sigma_bb - pops.sigma_cc)) / per_length,
        d_ab_bc=gamma_bc * pops.sigma_ac / per_length,
        d_cb_ba=gamma_bc * pops.sigma_ca / per_length,
        d_bc_cb=ground / per_length,
        d_cb_bc=ground / per_length,
    )


def effective_length(rate: ArrayLike, length: float) -> ArrayLike:
    """
    Closed form of the integral of exp(-2 rate (L - s)) over s in [0, L], i.e.
    (1 - exp(-2 rate L)) / (2 rate), continued to L as the rate goes to zero.
    """
    rate = np.asarray(rate, dtype=float)
    exponent = 2 * rate * length
    small = np.abs(exponent) < SERIES_THRESHOLD
    safe = np.where(small, 1.0, rate)
    closed = -np.expm1(-2 * safe * length) / (2 * safe)
    series = length * (1 - rate * length + exponent ** 2 / 6)
    return np.where(small, series, closed)[()]


def noise_source(params: MediumParams, omega: ArrayLike) -> ArrayLike:
    """
    Noise injected per unit length before attenuation towards the exit, in shot-noise units per meter.

    The numerator combines the weak-probe diffusion amplitudes, the F_ba term weighted by
    omega^2 + gamma_bc^2 and the two F_bc terms weighted by Omega_c^2. It reduces to
    (omega^2 + gamma_bc^2)(2 gamma_ba - gamma_bc) + 2 Omega_c^2 gamma_bc.
    """
    omega = np.asarray(omega, dtype=float)
    coefficients = diffusion(params, Populations.weak_probe())
    numerator = params.linear_density * (
            (omega ** 2 + params.gamma_bc ** 2) * coefficients.d_ba_ab
            + params.omega_c ** 2 * (coefficients.d_bc_cb + coefficients.d_cb_bc))
    return params.collective_coupling / params.c_light * numerator / np.abs(resonance_denominator(params, omega)) ** 2


def noise_floor(params: MediumParams, omega: ArrayLike) -> ArrayLike:
    """
    Added noise, in shot-noise units, that the Langevin forces inject into any probe quadrature.
    Each slice of the cell contributes noise_source, attenuated by exp(-2 Re Lambda (L - s)).

    Args:
        params (MediumParams): The medium. Its decay rates must all equal gamma_ba.
        omega (float or np.ndarray): Sideband frequencies in rad/s.

    Returns:
        float or np.ndarray: The noise term with the same shape as ``omega``.
    """
    omega = np.asarray(omega, dtype=float)
    rate = np.real(transfer_exponent(params, omega))
    return (noise_source(params, omega) * effective_length(rate, params.length))[()]


def noise_floor_quadrature_check(params: MediumParams, omega: float, n_panels: int = 4096) -> float:
    """
    Compares the closed-form path integral used by noise_floor with composite Simpson quadrature.

    Returns:
        float: Relative difference between the two evaluations.
    """
    if n_panels < 16:
        raise InvalidParameters(f"n_panels must be at least 16, got {n_panels}")
    if n_panels % 2:
        n_panels += 1

    rate = float(np.real(transfer_exponent(params, omega)))
    closed = float(effective_length(rate, params.length))
    positions = np.linspace(0.0, params.length, n_panels + 1)
    quadrature = simpson(np.exp(-2 * rate * (params.length - positions)), x=positions)

    residual = abs(closed - quadrature) / abs(closed)
    logger.debug("Quadrature check at omega=%g: closed=%r simpson=%r", omega, closed, quadrature)
    return residual
