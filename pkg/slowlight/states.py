import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from slowlight.errors import InvalidParameters
from slowlight.profiles import SpectralProfile, flat_profile

Moments = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


class InputState:
    """
    Base class for probe input states. An InputState describes the Gaussian second moments of the
    light entering the cell, normalised so that vacuum has spectral value 1.
    """

    profile: Optional[SpectralProfile]

    def weights(self, omega: np.ndarray) -> np.ndarray:
        """
        Squeezing-strength profile on the given frequencies; flat when no profile is set.
        """
        profile = self.profile if self.profile is not None else flat_profile()
        return profile(omega)


@dataclass(frozen=True)
class SqueezedInput(InputState):
    """
    Single squeezed probe beam.

    The quadrature at angle theta has spectrum s_min cos^2(theta) + s_max sin^2(theta), with
    theta = 0 the squeezed quadrature. A profile p(omega) scales the squeezing to s^p(omega).
    """
    s_min: float
    s_max: float
    theta: float = 0.0
    profile: Optional[SpectralProfile] = None

    def __post_init__(self) -> None:
        if not 0 < self.s_min <= 1 <= self.s_max:
            raise InvalidParameters(
                f"squeezed input needs 0 < s_min <= 1 <= s_max, got s_min={self.s_min}, s_max={self.s_max}")
        if self.s_min * self.s_max < 1 - 1e-12:
            raise InvalidParameters(
                f"s_min * s_max = {self.s_min * self.s_max:g} violates the uncertainty relation")

    @classmethod
    def minimum_uncertainty(cls, s_min: float, theta: float = 0.0,
                            profile: Optional[SpectralProfile] = None) -> 'SqueezedInput':
        return cls(s_min=s_min, s_max=1 / s_min, theta=theta, profile=profile)

    def spectrum(self, omega: np.ndarray, theta: Optional[float] = None) -> np.ndarray:
        """
        Input quadrature spectrum S_in(omega) at angle ``theta`` (defaults to the state's own).
        """
        theta = self.theta if theta is None else theta
        p = self.weights(omega)
        return self.s_min ** p * math.cos(theta) ** 2 + self.s_max ** p * math.sin(theta) ** 2


@dataclass(frozen=True)
class EntangledInput(InputState):
    """
    Two-mode squeezed vacuum feeding beams X (through the cell) and Y (free space).

    With r(omega) = r p(omega) the moments are
    <XX> = <YY> = cosh 2r + excess_noise and <XY> = <YX> = sinh 2r cos(theta + phi).
    """
    r: float
    excess_noise: float = 0.0
    profile: Optional[SpectralProfile] = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.r) or self.r < 0:
            raise InvalidParameters(f"squeezing parameter r must be nonnegative, got {self.r}")
        if not math.isfinite(self.excess_noise) or self.excess_noise < 0:
            raise InvalidParameters(f"excess_noise must be nonnegative, got {self.excess_noise}")

    def moments(self, omega: np.ndarray, theta: float, phi: float) -> Moments:
        """
        Input second moments (XX, XY, YX, YY) for quadrature angles theta on X and phi on Y.
        """
        r = self.r * self.weights(omega)
        single = np.cosh(2 * r) + self.excess_noise
        cross = np.sinh(2 * r) * math.cos(theta + phi)
        return single, cross, cross.copy(), single.copy()

    def difference_variance(self, omega: np.ndarray, theta: float, phi: float) -> np.ndarray:
        """
        Normalised variance of X^theta - Y^phi; two independent vacua give 1.
        """
        xx, xy, yx, yy = self.moments(omega, theta, phi)
        return 0.5 * (xx - xy - yx + yy)


def make_epr_input(target_duan: float, profile: Optional[SpectralProfile] = None) -> EntangledInput:
    """
    Builds the pure two-mode squeezed state whose input Duan measure equals ``target_duan``
    wherever the profile is 1.

    Args:
        target_duan (float): Desired inseparability measure, in (0, 1].
        profile (SpectralProfile): Optional squeezing-strength profile.

    Returns:
        EntangledInput: State with r = -ln(target_duan) / 2 and no excess noise.
    """
    if not 0 < target_duan <= 1:
        raise InvalidParameters(f"target Duan measure must lie in (0, 1], got {target_duan}")
    return EntangledInput(r=-math.log(target_duan) / 2, excess_noise=0.0, profile=profile)

