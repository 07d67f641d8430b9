import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from slowlight.errors import DegenerateRegime, InvalidParameters
from slowlight.models import ArrayLike, MediumParams, Susceptibility

logger = logging.getLogger(__name__)


def resonance_denominator(params: MediumParams, omega: ArrayLike) -> ArrayLike:
    return (params.gamma_ba - 1j * omega) * (params.gamma_bc - 1j * omega) + params.omega_c ** 2


def medium_term(params: MediumParams, omega: ArrayLike) -> ArrayLike:
    """
    Atomic contribution to the transfer exponent,
    N g^2 (gamma_bc - i omega) / (c [(gamma_ba - i omega)(gamma_bc - i omega) + Omega_c^2]).

    Args:
        params (MediumParams): The medium.
        omega (float or np.ndarray): Sideband frequencies in rad/s.

    Returns:
        complex or np.ndarray: The atomic term in 1/m, with the same shape as ``omega``.
    """
    omega = np.asarray(omega, dtype=float)
    numerator = params.collective_coupling / params.c_light * (params.gamma_bc - 1j * omega)
    return numerator / resonance_denominator(params, omega)


def transfer_exponent(params: MediumParams, omega: ArrayLike) -> ArrayLike:
    """
    Exact complex exponent Lambda(omega) such that a probe sideband leaves the cell as
    exp(-Lambda(omega) L) times its input amplitude (plus Langevin noise).

    The free-space term -i omega / c is included, so the phase is measured in the lab frame.
    """
    omega = np.asarray(omega, dtype=float)
    return medium_term(params, omega) - 1j * omega / params.c_light


def derived_figures(params: MediumParams) -> Susceptibility:
    """
    Reads the slow-light figures off the second-order expansion of the transfer exponent,
    Lambda(omega) L = K L - i omega L / v_g + omega^2 / delta_omega^2.

    Raises:
        DegenerateRegime: If the control field does not exceed the ground-state dephasing or the
            quadratic coefficient is not positive.
    """
    gamma_ba, gamma_bc = params.gamma_ba, params.gamma_bc
    omega_c2 = params.omega_c ** 2
    if params.omega_c <= gamma_bc:
        raise DegenerateRegime(
            f"control Rabi frequency {params.omega_c:g} rad/s does not exceed gamma_bc = {gamma_bc:g} rad/s; "
            "the group velocity is not meaningful")
    window_term = omega_c2 * (gamma_ba + 2 * gamma_bc) - gamma_bc ** 3
    if window_term <= 0:
        raise DegenerateRegime("the transparency window expression is not positive")

    collective = params.collective_coupling
    c_light = params.c_light
    d0 = gamma_ba * gamma_bc + omega_c2

    absorption = collective * gamma_bc / (c_light * d0)
    v_g = c_light / (1 + collective * (omega_c2 - gamma_bc ** 2) / d0 ** 2)
    if collective == 0:
        delta_omega = math.inf
    else:
        delta_omega = math.sqrt(c_light * d0 ** 3 / (collective * params.length * window_term))
    tau_d = params.length * (1 / v_g - 1 / c_light)

    logger.debug("K=%g 1/m, v_g=%g m/s, delta_omega=%g rad/s, tau_d=%g s", absorption, v_g, delta_omega, tau_d)
    return Susceptibility(
        lambda_of_omega=lambda omega: transfer_exponent(params, omega),
        K=absorption,
        v_g=v_g,
        delta_omega=delta_omega,
        tau_d=tau_d,
        length=params.length,
    )


@dataclass(frozen=True)
class TaylorReport:
    """
    Relative mismatch between the closed-form figures and central finite differences of the
    exact transfer exponent.

    Attributes:
        absorption (float): |K - Re Lambda(0)| / K.
        group_delay (float): Mismatch of 1/v_g against -Im dLambda/domega at zero.
        dispersion (float): Mismatch of 1/(L delta_omega^2) against half the second derivative.
        step (float): Finite-difference step in rad/s.
    """
    absorption: float
    group_delay: float
    dispersion: float
    step: float

    @property
    def worst(self) -> float:
        return max(self.absorption, self.group_delay, self.dispersion)

    def passed(self, threshold: float = 1e-6) -> bool:
        return self.worst <= threshold


def _relative(value: float, reference: float) -> float:
    if reference == 0:
        return abs(value)
    return abs(value - reference) / abs(reference)


def taylor_check(params: MediumParams, h: Optional[float] = None) -> TaylorReport:
    """
    Validates derived_figures against the exact transfer exponent.

    Args:
        params (MediumParams): The medium, which must have a nonzero coupling for the dispersion
            residual to be meaningful.
        h (float): Finite-difference step. Defaults to delta_omega / 1000.
    """
    figures = derived_figures(params)
    if h is None:
        if math.isinf(figures.delta_omega):
            raise InvalidParameters("a finite-difference step is required when the coupling is zero")
        h = figures.delta_omega / 1000
    if not h > 0:
        raise InvalidParameters(f"finite-difference step must be positive, got {h}")

    at_zero, above, below = transfer_exponent(params, np.array([0.0, h, -h]))

    slope = -((above - below) / (2 * h)).imag
    curvature = ((above + below - 2 * at_zero) / (2 * h ** 2)).real
    dispersion_reference = 0.0
    if not math.isinf(figures.delta_omega):
        dispersion_reference = 1 / (params.length * figures.delta_omega ** 2)

    report = TaylorReport(
        absorption=_relative(at_zero.real, figures.K),
        group_delay=_relative(slope, 1 / figures.v_g),
        dispersion=_relative(curvature, dispersion_reference),
        step=h,
    )
    logger.debug("Taylor residuals: %s", report)
    return report


def calibrate_coupling(params: MediumParams, target_vg: float) -> float:
    """
    Finds the coupling g that gives the requested group velocity, keeping every other parameter.

    N g^2 = (c / v_g - 1) (gamma_ba gamma_bc + Omega_c^2)^2 / (Omega_c^2 - gamma_bc^2)

    Raises:
        InvalidParameters: If the target is not within (0, c].
        DegenerateRegime: If Omega_c^2 <= gamma_bc^2.
    """
    if not 0 < target_vg <= params.c_light:
        raise InvalidParameters(f"target group velocity must lie in (0, c], got {target_vg}")
    omega_c2 = params.omega_c ** 2
    gap = omega_c2 - params.gamma_bc ** 2
    if gap <= 0:
        raise DegenerateRegime("cannot calibrate the coupling when Omega_c <= gamma_bc")

    d0 = params.gamma_ba * params.gamma_bc + omega_c2
    collective = (params.c_light / target_vg - 1) * d0 ** 2 / gap
    coupling = math.sqrt(collective / params.atom_number)
    logger.info("Calibrated coupling g=%g rad/s for v_g=%g m/s", coupling, target_vg)
    return coupling


def with_coupling(params: MediumParams, coupling_g: float) -> MediumParams:
    return dataclasses.replace(params, coupling_g=coupling_g)
