import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, TypedDict, Union

import numpy as np
from astropy import constants

from slowlight.errors import InvalidParameters

C_LIGHT = float(constants.c.si.value)

ArrayLike = Union[float, np.ndarray]


def _readonly(values, dtype) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.flags.writeable = False
    return array


class MediumParamsDict(TypedDict, total=False):
    """
    TypedDict for MediumParams. This matches the columns written to reports, all in SI units
    with rates in rad/s.
    """

    length: float
    atom_number: float
    density: float
    beam_area: float
    gamma_ba: float
    gamma_bc: float
    gamma_b: float
    gamma_c: float
    gamma_ac: float
    omega_c: float
    coupling_g: float
    c_light: float


@dataclass(frozen=True)
class MediumParams:
    """
    Physical description of the vapour cell and of the two optical fields.

    Every rate is an angular frequency in rad/s. ``gamma_b``, ``gamma_c`` and ``gamma_ac``
    default to ``gamma_ba``. The control Rabi frequency and the coupling are real and
    nonnegative.

    Attributes:
        length (float): Cell length L in meters.
        atom_number (float): Atoms N in the interaction volume.
        density (float): Atomic density n in atoms per cubic meter.
        beam_area (float): Beam cross section A in square meters.
        gamma_ba (float): Optical coherence decay rate.
        gamma_bc (float): Ground-state dephasing rate.
        omega_c (float): Control Rabi frequency |Omega_c|.
        coupling_g (float): Atom-field coupling g.
        c_light (float): Vacuum speed of light in m/s.
    """
    length: float
    atom_number: float
    density: float
    beam_area: float
    gamma_ba: float
    gamma_bc: float
    omega_c: float
    coupling_g: float = 0.0
    gamma_b: Optional[float] = None
    gamma_c: Optional[float] = None
    gamma_ac: Optional[float] = None
    c_light: float = C_LIGHT

    def __post_init__(self) -> None:
        for name in ('gamma_b', 'gamma_c', 'gamma_ac'):
            if getattr(self, name) is None:
                object.__setattr__(self, name, self.gamma_ba)

        for name in ('length', 'atom_number', 'density', 'beam_area', 'gamma_ba', 'gamma_b',
                     'gamma_c', 'gamma_ac', 'omega_c', 'c_light'):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise InvalidParameters(f"{name} must be strictly positive, got {value}")
        if not math.isfinite(self.gamma_bc) or self.gamma_bc < 0:
            raise InvalidParameters(f"gamma_bc must be nonnegative, got {self.gamma_bc}")
        if not math.isfinite(self.coupling_g) or self.coupling_g < 0:
            raise InvalidParameters(f"coupling_g must be nonnegative, got {self.coupling_g}")

        expected = self.density * self.beam_area * self.length
        if abs(self.atom_number - expected) / self.atom_number > 1e-9:
            raise InvalidParameters(
                f"atom_number {self.atom_number:g} is inconsistent with density * beam_area * length "
                f"= {expected:g}")

    @classmethod
    def create(cls, *,
               length: float,
               density: float,
               beam_area: float,
               gamma_ba: float,
               gamma_bc: float,
               omega_c: float,
               coupling_g: float = 0.0,
               atom_number: Optional[float] = None,
               **rates: float) -> 'MediumParams':
        """
        Builds MediumParams, deriving the atom number from N = n * A * L when it is not given.

        Args:
            rates: Optional ``gamma_b``, ``gamma_c``, ``gamma_ac`` and ``c_light`` overrides.
        """
        if atom_number is None:
            atom_number = density * beam_area * length
        return cls(length=length, atom_number=atom_number, density=density, beam_area=beam_area,
                   gamma_ba=gamma_ba, gamma_bc=gamma_bc, omega_c=omega_c, coupling_g=coupling_g,
                   **rates)

    @property
    def collective_coupling(self) -> float:
        """N |g|^2 in s^-2."""
        return self.atom_number * self.coupling_g ** 2

    @property
    def linear_density(self) -> float:
        """Atoms per meter of cell, n * A."""
        return self.atom_number / self.length

    @classmethod
    def from_dict(cls, data: MediumParamsDict) -> 'MediumParams':
        return cls(**data)

    def to_dict(self) -> MediumParamsDict:
        return {
            'length': self.length,
            'atom_number': self.atom_number,
            'density': self.density,
            'beam_area': self.beam_area,
            'gamma_ba': self.gamma_ba,
            'gamma_bc': self.gamma_bc,
            'gamma_b': self.gamma_b,
            'gamma_c': self.gamma_c,
            'gamma_ac': self.gamma_ac,
            'omega_c': self.omega_c,
            'coupling_g': self.coupling_g,
            'c_light': self.c_light,
        }


@dataclass(frozen=True)
class Susceptibility:
    """
    Transfer exponent of the medium together with the figures read off its expansion
    around the carrier.

    Attributes:
        lambda_of_omega (Callable): Evaluates the complex exponent Lambda(omega) in 1/m.
        K (float): Zeroth-order absorption coefficient in 1/m.
        v_g (float): Group velocity in m/s.
        delta_omega (float): Transparency window in rad/s (infinite without coupling).
        tau_d (float): Delay relative to vacuum, L (1/v_g - 1/c), in seconds.
        length (float): Cell length the figures refer to.
    """
    lambda_of_omega: Callable[[ArrayLike], ArrayLike]
    K: float
    v_g: float
    delta_omega: float
    tau_d: float
    length: float

    @property
    def optical_depth(self) -> float:
        """Zeroth-order amplitude attenuation exponent K L."""
        return self.K * self.length


@dataclass(frozen=True)
class Populations:
    """
    Atomic expectation values entering the Langevin diffusion coefficients.
    The defaults describe the weak-probe state with every atom in |b>.
    """
    sigma_bb: float = 1.0
    sigma_cc: float = 0.0
    sigma_aa: float = 0.0
    sigma_ac: complex = 0j
    sigma_ca: complex = 0j

    def __post_init__(self) -> None:
        for name in ('sigma_bb', 'sigma_cc', 'sigma_aa'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidParameters(f"{name} must lie in [0, 1], got {value}")
        total = self.sigma_bb + self.sigma_cc + self.sigma_aa
        if abs(total - 1.0) > 1e-12:
            raise InvalidParameters(f"populations must sum to 1, got {total!r}")

    @classmethod
    def weak_probe(cls) -> 'Populations':
        return cls()

    @classmethod
    def uniform(cls) -> 'Populations':
        return cls(sigma_bb=1 / 3, sigma_cc=1 / 3, sigma_aa=1 - 2 / 3)


@dataclass(frozen=True)
class DiffusionCoefficients:
    """
    Amplitudes of the frequency-domain Langevin correlations, i.e. the population brackets
    divided by n A. The delta-function factors are implicit.
    """
    d_ba_ab: float
    d_ab_bc: complex
    d_cb_ba: complex
    d_bc_cb: float
    d_cb_bc: float


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """
    Ordered sideband frequencies in rad/s, relative to the probe carrier.
    """
    omegas: np.ndarray

    def __post_init__(self) -> None:
        omegas = _readonly(self.omegas, float)
        if omegas.ndim != 1 or omegas.size == 0:
            raise InvalidParameters("a frequency grid needs a non-empty 1-D list of frequencies")
        if not np.all(np.isfinite(omegas)):
            raise InvalidParameters("frequency grid values must be finite")
        if np.any(np.diff(omegas) <= 0):
            raise InvalidParameters("frequency grid must be strictly increasing")
        object.__setattr__(self, 'omegas', omegas)

    @classmethod
    def linspace(cls, minimum: float, maximum: float, points: int) -> 'FrequencyGrid':
        if points < 1:
            raise InvalidParameters(f"a frequency grid needs at least one point, got {points}")
        if points == 1:
            return cls(np.array([minimum]))
        return cls(np.linspace(minimum, maximum, points))

    def matches(self, other: 'FrequencyGrid') -> bool:
        return np.array_equal(self.omegas, other.omegas)

    def __len__(self) -> int:
        return len(self.omegas)


class SpectrumKind(enum.Enum):
    SQUEEZING = 'squeezing'
    ENTANGLEMENT = 'entanglement'
    DUAN = 'duan'
    NOISE_FLOOR = 'noise_floor'
    TRANSMISSION = 'transmission'


@dataclass(frozen=True, eq=False)
class SpectrumCurve:
    """
    Real spectrum sampled on a frequency grid.

    Attributes:
        grid (FrequencyGrid): Sideband frequencies.
        values (np.ndarray): One value per grid point, shot noise normalized to 1.
        kind (SpectrumKind): What the values represent.
        notes (tuple): Free-form flags raised while computing the curve.
    """
    grid: FrequencyGrid
    values: np.ndarray
    kind: SpectrumKind
    notes: tuple = field(default=())

    def __post_init__(self) -> None:
        values = _readonly(np.broadcast_to(self.values, (len(self.grid),)), float)
        if not np.all(np.isfinite(values)):
            raise InvalidParameters(f"{self.kind.value} spectrum contains non-finite values")
        if np.any(values < -1e-12 * max(1.0, float(np.max(np.abs(values))))):
            raise InvalidParameters(f"{self.kind.value} spectrum must be nonnegative")
        object.__setattr__(self, 'values', values)


@dataclass(frozen=True)
class PulseSpec:
    """
    Classical probe pulse fed to the time-domain oracle.

    The envelope is E(0, t) = peak_amplitude * exp(-(t - center_time)^2 / (4 rms_width^2))
    * exp(-i carrier_detuning t), so ``rms_width`` is the rms duration of |E|^2.
    ``center_time`` defaults to 12 rms widths, and ``window`` (the retarded-time span of the
    grid) is chosen by the oracle when left unset.
    """
    rms_width: float
    center_time: Optional[float] = None
    peak_amplitude: float = 1.0
    carrier_detuning: float = 0.0
    shape: str = 'gaussian'
    window: Optional[float] = None

    def __post_init__(self) -> None:
        if self.shape != 'gaussian':
            raise InvalidParameters(f"unsupported pulse shape: {self.shape}")
        if not self.rms_width > 0:
            raise InvalidParameters(f"rms_width must be positive, got {self.rms_width}")
        if self.center_time is None:
            object.__setattr__(self, 'center_time', 12.0 * self.rms_width)
        if self.window is not None and self.window <= self.center_time:
            raise InvalidParameters("window must extend past the pulse center")

    @property
    def bandwidth(self) -> float:
        """Nominal bandwidth 1 / rms_width in rad/s."""
        return 1.0 / self.rms_width

    def envelope(self, times: np.ndarray) -> np.ndarray:
        shifted = times - self.center_time
        return (self.peak_amplitude
                * np.exp(-shifted ** 2 / (4.0 * self.rms_width ** 2))
                * np.exp(-1j * self.carrier_detuning * times))


@dataclass(frozen=True, eq=False)
class PulseField:
    """
    Space-time samples of the probe envelope and of the two atomic coherences.

    ``t_grid`` is the retarded time t - z/c, so free propagation leaves a column unchanged.
    Matrices are indexed [z, t].
    """
    z_grid: np.ndarray
    t_grid: np.ndarray
    envelope: np.ndarray
    sigma_ba: np.ndarray
    sigma_bc: np.ndarray

    def __post_init__(self) -> None:
        for name, dtype in (('z_grid', float), ('t_grid', float), ('envelope', complex),
                            ('sigma_ba', complex), ('sigma_bc', complex)):
            object.__setattr__(self, name, _readonly(getattr(self, name), dtype))
        for name in ('z_grid', 't_grid'):
            if np.any(np.diff(getattr(self, name)) <= 0):
                raise InvalidParameters(f"{name} must be strictly increasing")
        shape = (len(self.z_grid), len(self.t_grid))
        for name in ('envelope', 'sigma_ba', 'sigma_bc'):
            if getattr(self, name).shape != shape:
                raise InvalidParameters(f"{name} has shape {getattr(self, name).shape}, expected {shape}")

    @property
    def input_envelope(self) -> np.ndarray:
        return self.envelope[0]

    @property
    def output_envelope(self) -> np.ndarray:
        return self.envelope[-1]
