from typing import Callable

import numpy as np
from astropy.modeling import models

from slowlight.errors import InvalidParameters


class SpectralProfile:
    """
    A wrapper class for squeezing-strength profiles.

    A profile maps sideband frequencies (rad/s) to a weight p(omega) in [0, 1] that scales how
    strongly the input state is squeezed at each frequency. p = 1 is the full squeezing of the
    source, p = 0 is vacuum.

    Attributes:
        shape (Callable[[np.ndarray], np.ndarray]): The weighting function.
    """

    def __init__(self, shape: Callable[[np.ndarray], np.ndarray]):
        self.shape = shape

    def __call__(self, omega: np.ndarray) -> np.ndarray:
        """
        Evaluate the profile on the given frequencies.

        Args:
            omega (np.ndarray): Sideband frequencies in rad/s.

        Returns:
            np.ndarray: Weights with the same shape as ``omega``.
        """
        omega = np.asarray(omega, dtype=float)
        weights = np.broadcast_to(np.asarray(self.shape(omega), dtype=float), omega.shape)
        if np.any(weights < 0) or np.any(weights > 1):
            raise InvalidParameters("profile weights must lie in [0, 1]")
        return weights


def make_profile_product(*profiles: SpectralProfile) -> SpectralProfile:
    """
    Combine profiles by multiplying their weights.

    Args:
        *profiles (SpectralProfile): A variable number of profiles.

    Returns:
        SpectralProfile: A profile equal to the pointwise product of the inputs.
    """

    def product(omega: np.ndarray) -> np.ndarray:
        weights = np.ones_like(omega)
        for profile in profiles:
            weights = weights * profile(omega)
        return weights

    return SpectralProfile(product)


# Pre-defined profiles. The peaked shapes come from astropy.modeling so that the widths follow the
# usual astropy parametrisation; all of them are normalised to 1 at the carrier.


def flat_profile() -> SpectralProfile:
    """
    White squeezing: the same strength at every sideband frequency.
    """
    return SpectralProfile(np.ones_like)


def lorentzian_profile(half_width: float) -> SpectralProfile:
    """
    Lorentzian roll-off, as produced by a below-threshold optical parametric oscillator.

    Args:
        half_width (float): Half width at half maximum in rad/s.
    """
    if not half_width > 0:
        raise InvalidParameters(f"half_width must be positive, got {half_width}")
    return SpectralProfile(models.Lorentz1D(amplitude=1.0, x_0=0.0, fwhm=2 * half_width))


def gaussian_profile(rms_width: float) -> SpectralProfile:
    """
    Gaussian roll-off with the given standard deviation in rad/s.
    """
    if not rms_width > 0:
        raise InvalidParameters(f"rms_width must be positive, got {rms_width}")
    return SpectralProfile(models.Gaussian1D(amplitude=1.0, mean=0.0, stddev=rms_width))


PROFILES = {
    'flat': flat_profile,
    'lorentzian': lorentzian_profile,
    'gaussian': gaussian_profile,
}
