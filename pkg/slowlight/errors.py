class SlowLightError(Exception):
    """
    Base class for every error raised by the slowlight package.
    """


class InvalidParameters(SlowLightError, ValueError):
    """
    Raised when a physical parameter or an input state violates its invariants.
    """


class DegenerateRegime(SlowLightError, ValueError):
    """
    Raised when the control field is too weak for the slow-light figures to be meaningful,
    i.e. |Omega_c| <= gamma_bc or the transparency window expression is not positive.
    """


class UnequalDecayRates(SlowLightError, ValueError):
    """
    Raised by the Langevin module when gamma_b, gamma_c and gamma_ac differ from gamma_ba.
    """


class GridMismatch(SlowLightError, ValueError):
    """
    Raised when two spectrum curves that must share a frequency grid do not.
    """


class ScenarioError(SlowLightError, ValueError):
    """
    Raised when a scenario file cannot be parsed or fails validation.

    Attributes:
        field (str): Dotted path of the offending field, e.g. ``medium.gamma_bc``.
    """

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class StepSizeTooCoarse(SlowLightError, RuntimeError):
    """
    Raised by the time-domain oracle when its local error estimate exceeds the tolerance
    or when the atomic step is not stable on the requested grid.
    """


class NoPeak(SlowLightError, RuntimeError):
    """
    Raised when the output pulse carries (almost) no energy and no delay can be measured.
    """
