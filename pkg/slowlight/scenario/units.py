import math
import re
from typing import Any

from astropy import units as u

from slowlight.errors import ScenarioError

FREQUENCY_CONVENTIONS = ('angular', 'cyclic')

_QUANTITY = re.compile(
    r'^\s*(?P<number>[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?)?\s*(?P<pi>pi)?\s+(?P<unit>\S.*?)\s*$')

_ANGULAR_RATE = u.rad / u.s


def parse_quantity(value: Any, field: str) -> u.Quantity:
    """
    Parses "<number>[pi] <unit>" into an astropy Quantity, e.g. "3.5 cm", "6pi MHz" or "3100 m / s".

    Raises:
        ScenarioError: If the value is a bare number, is malformed or names an unknown unit.
    """
    if isinstance(value, bool) or isinstance(value, (int, float)):
        raise ScenarioError(field, f"bare number {value!r} needs an explicit unit")
    if not isinstance(value, str):
        raise ScenarioError(field, f"expected a quantity string, got {type(value).__name__}")

    match = _QUANTITY.match(value)
    if match is None or (match.group('number') is None and match.group('pi') is None):
        raise ScenarioError(field, f"cannot parse {value!r}; expected '<number>[pi] <unit>'")

    number = float(match.group('number')) if match.group('number') is not None else 1.0
    if match.group('pi'):
        number *= math.pi
    try:
        unit = u.Unit(match.group('unit'))
    except ValueError as e:
        raise ScenarioError(field, f"unknown unit {match.group('unit')!r}: {e}")
    return number * unit


def to_si(value: Any, field: str, target: u.UnitBase) -> float:
    """
    Converts a quantity string to a float in ``target`` units.
    """
    quantity = parse_quantity(value, field)
    try:
        return float(quantity.to_value(target))
    except u.UnitConversionError:
        raise ScenarioError(field, f"{value!r} is not convertible to {target}")


def to_rate(value: Any, field: str, convention: str = 'angular') -> float:
    """
    Converts a rate or frequency to rad/s.

    Values in rad/s are taken as they are. Values in Hz (and multiples) are read as angular
    rates under the "angular" convention and multiplied by 2 pi under the "cyclic" one.
    """
    if convention not in FREQUENCY_CONVENTIONS:
        raise ScenarioError('frequency_convention', f"must be one of {FREQUENCY_CONVENTIONS}, got {convention!r}")
    quantity = parse_quantity(value, field)
    if quantity.unit.is_equivalent(_ANGULAR_RATE):
        return float(quantity.to_value(_ANGULAR_RATE))
    if quantity.unit.is_equivalent(u.Hz):
        scale = 2 * math.pi if convention == 'cyclic' else 1.0
        return scale * float(quantity.to_value(u.Hz))
    raise ScenarioError(field, f"{value!r} is not a rate")


def to_angle(value: Any, field: str) -> float:
    """
    Quadrature angles: plain numbers are radians, strings may carry "rad" or "deg".
    """
    if isinstance(value, bool):
        raise ScenarioError(field, "expected an angle")
    if isinstance(value, (int, float)):
        return float(value)
    return to_si(value, field, u.rad)


def to_number(value: Any, field: str) -> float:
    """
    Dimensionless values must be plain JSON numbers.
    """
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(field, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(field, "must be finite")
    return float(value)


def to_count(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(field, f"expected an integer, got {value!r}")
    return value
