import copy
import json
import logging
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from astropy import units as u

from slowlight.errors import InvalidParameters, ScenarioError
from slowlight.medium import calibrate_coupling, with_coupling
from slowlight.models import FrequencyGrid, MediumParams, PulseSpec
from slowlight.profiles import PROFILES, SpectralProfile, make_profile_product
from slowlight.scenario.units import to_angle, to_count, to_number, to_rate, to_si
from slowlight.states import EntangledInput, SqueezedInput, make_epr_input

logger = logging.getLogger(__name__)

BUNDLED_DIR = Path(__file__).resolve().parent.parent / 'scenarios'

InputSpec = Union[SqueezedInput, EntangledInput, PulseSpec]

_LENGTH_FIELDS = {'length': u.m, 'density': u.m ** -3, 'beam_area': u.m ** 2}
_RATE_FIELDS = ('gamma_ba', 'gamma_bc', 'gamma_b', 'gamma_c', 'gamma_ac', 'omega_c', 'coupling_g')
MEDIUM_FIELDS = frozenset((*_LENGTH_FIELDS, *_RATE_FIELDS, 'atom_number', 'calibrate_vg'))
INPUT_FIELDS = {
    'squeezed': frozenset(('s_min', 's_max', 'theta', 'profile')),
    'entangled': frozenset(('target_duan', 'r', 'excess_noise', 'profile')),
    'pulse': frozenset(('rms_width', 'center_time', 'peak_amplitude', 'carrier_detuning', 'shape', 'window')),
}
ANALYSIS_FIELDS = frozenset(('omega', 'omegas', 'min', 'max', 'points', 'theta', 'phi', 'model', 'nz', 'nt',
                             'tolerance'))
MODELS = ('full', 'approx')


@dataclass(frozen=True)
class AnalysisSpec:
    """
    What to evaluate: the sideband grid and quadrature angles for the spectra, the entanglement model,
    and the oracle grid.
    """
    grid: FrequencyGrid
    theta: float = 0.0
    phi: float = 0.0
    model: str = 'full'
    nz: int = 512
    nt: int = 8192
    tolerance: float = 1e-6


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    values: Tuple[Any, ...]


@dataclass(frozen=True)
class Scenario:
    """
    A validated scenario file.

    Attributes:
        name (str): Scenario name, the file stem unless given.
        medium (MediumParams): The cell, with the coupling already calibrated if requested.
        input (InputSpec): A squeezed beam, an entangled pair or a classical pulse.
        analysis (AnalysisSpec): Evaluation settings.
        sweep (SweepAxis): Optional parameter axis.
        frequency_convention (str): How Hz-valued rates were converted.
        raw (dict): The parsed JSON document, used to rebuild sweep points.
    """
    name: str
    medium: MediumParams
    input: InputSpec
    analysis: AnalysisSpec
    sweep: Optional[SweepAxis] = None
    frequency_convention: str = 'angular'
    raw: Dict[str, Any] = field(default_factory=dict, repr=False, compare=False)

    def points(self) -> List[Tuple[Any, 'Scenario']]:
        """
        One scenario per sweep value, in sweep order; the scenario itself when there is no sweep.
        """
        if self.sweep is None:
            return [(None, self)]
        return [(value, _sweep_point(self.raw, self.sweep.parameter, value, self.name))
                for value in self.sweep.values]

    def with_grid_points(self, points: int) -> 'Scenario':
        """
        Returns a copy whose analysis range is resampled on ``points`` frequencies.
        """
        analysis = self.raw.get('analysis', {})
        if 'min' not in analysis or 'max' not in analysis:
            raise ScenarioError('analysis.points', "--grid-points needs an analysis range with min and max")
        raw = copy.deepcopy(self.raw)
        raw['analysis']['points'] = points
        return parse_scenario(raw, self.name)


def resolve_scenario(name_or_path: Union[str, Path]) -> Path:
    """
    Finds a scenario file, either at the given path or bundled with the package under that name.
    """
    path = Path(name_or_path)
    if path.is_file():
        return path
    bundled = BUNDLED_DIR / f"{path.stem}.json"
    if path.suffix in ('', '.json') and bundled.is_file():
        return bundled
    raise ScenarioError('scenario', f"no scenario file or bundled scenario named {str(name_or_path)!r}")


def bundled_scenarios() -> List[str]:
    return sorted(p.stem for p in BUNDLED_DIR.glob('*.json'))


def load_scenario(filename: Union[str, Path]) -> Scenario:
    """
    Load a scenario based on its file extension.

    Args:
        filename (str): Path to the file, or the name of a bundled scenario.

    Returns:
        Scenario: The validated scenario.

    Raises:
        ScenarioError: If the file format is unsupported or its content is invalid.
    """
    path = resolve_scenario(filename)
    _, ext = os.path.splitext(path)
    ext = ext.lower()

    if ext == '.json':
        return load_json(path)
    else:
        raise ScenarioError('scenario', f"Unsupported file format: {ext}")


def load_json(filename: Union[str, Path]) -> Scenario:
    with open(filename) as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as e:
            raise ScenarioError('scenario', f"invalid JSON: {e}")
    return parse_scenario(document, Path(filename).stem)


def parse_scenario(document: Any, default_name: str = 'scenario') -> Scenario:
    """
    Validates a scenario document and converts every quantity to SI units with rates in rad/s.
    """
    if not isinstance(document, dict):
        raise ScenarioError('scenario', "the document must be a JSON object")
    _reject_unknown(document, {'name', 'frequency_convention', 'medium', 'input', 'analysis', 'sweep'}, '')

    convention = document.get('frequency_convention', 'angular')
    name = document.get('name', default_name)
    medium = _parse_medium(_section(document, 'medium'), convention)
    state = _parse_input(_section(document, 'input'), convention)
    analysis = _parse_analysis(document.get('analysis', {}), convention)
    sweep = _parse_sweep(document['sweep']) if 'sweep' in document else None

    scenario = Scenario(name=name, medium=medium, input=state, analysis=analysis, sweep=sweep,
                        frequency_convention=convention, raw=copy.deepcopy(document))
    if sweep is not None:
        _check_sweep_target(scenario)
        # Every point is built once up front so that a bad value fails before anything runs.
        scenario.points()
    logger.debug("Loaded scenario %s", name)
    return scenario


def _section(document: Dict[str, Any], name: str) -> Dict[str, Any]:
    if name not in document:
        raise ScenarioError(name, "missing section")
    section = document[name]
    if not isinstance(section, dict):
        raise ScenarioError(name, "must be an object")
    return section


def _reject_unknown(section: Dict[str, Any], allowed, prefix: str) -> None:
    for key in section:
        if key not in allowed:
            raise ScenarioError(f"{prefix}{key}", "unknown field")


def _parse_medium(section: Dict[str, Any], convention: str) -> MediumParams:
    _reject_unknown(section, MEDIUM_FIELDS, 'medium.')
    for required in ('length', 'density', 'beam_area', 'gamma_ba', 'gamma_bc', 'omega_c'):
        if required not in section:
            raise ScenarioError(f"medium.{required}", "missing field")
    if 'coupling_g' in section and 'calibrate_vg' in section:
        raise ScenarioError('medium.calibrate_vg', "give either coupling_g or calibrate_vg, not both")

    values = {name: to_si(section[name], f"medium.{name}", unit)
              for name, unit in _LENGTH_FIELDS.items()}
    values.update({name: to_rate(section[name], f"medium.{name}", convention)
                   for name in _RATE_FIELDS if name in section})
    if 'atom_number' in section:
        values['atom_number'] = to_number(section['atom_number'], 'medium.atom_number')

    try:
        params = MediumParams.create(**values)
    except InvalidParameters as e:
        raise ScenarioError('medium', str(e))

    if 'calibrate_vg' in section:
        target = to_si(section['calibrate_vg'], 'medium.calibrate_vg', u.m / u.s)
        try:
            params = with_coupling(params, calibrate_coupling(params, target))
        except InvalidParameters as e:
            raise ScenarioError('medium.calibrate_vg', str(e))
    return params


def _parse_profile(spec: Any, convention: str, field_name: str) -> Optional[SpectralProfile]:
    if spec is None:
        return None
    if isinstance(spec, list):
        return make_profile_product(*(_parse_profile(item, convention, f"{field_name}[{i}]")
                                      for i, item in enumerate(spec)))
    if not isinstance(spec, dict) or spec.get('kind') not in PROFILES:
        raise ScenarioError(field_name, f"profile kind must be one of {sorted(PROFILES)}")
    kind = spec['kind']
    arguments = {key: to_rate(value, f"{field_name}.{key}", convention)
                 for key, value in spec.items() if key != 'kind'}
    try:
        return PROFILES[kind](**arguments)
    except TypeError as e:
        raise ScenarioError(field_name, f"bad arguments for {kind} profile: {e}")
    except InvalidParameters as e:
        raise ScenarioError(field_name, str(e))


def _parse_input(section: Dict[str, Any], convention: str) -> InputSpec:
    kind = section.get('kind')
    if kind not in INPUT_FIELDS:
        raise ScenarioError('input.kind', f"must be one of {sorted(INPUT_FIELDS)}, got {kind!r}")
    _reject_unknown(section, INPUT_FIELDS[kind] | {'kind'}, 'input.')
    profile = _parse_profile(section.get('profile'), convention, 'input.profile')

    try:
        if kind == 'squeezed':
            if 's_min' not in section:
                raise ScenarioError('input.s_min', "missing field")
            s_min = to_number(section['s_min'], 'input.s_min')
            s_max = to_number(section['s_max'], 'input.s_max') if 's_max' in section else 1 / s_min
            theta = to_angle(section.get('theta', 0.0), 'input.theta')
            return SqueezedInput(s_min=s_min, s_max=s_max, theta=theta, profile=profile)

        if kind == 'entangled':
            if ('target_duan' in section) == ('r' in section):
                raise ScenarioError('input.target_duan', "give exactly one of target_duan or r")
            if 'target_duan' in section:
                state = make_epr_input(to_number(section['target_duan'], 'input.target_duan'), profile)
            else:
                state = EntangledInput(r=to_number(section['r'], 'input.r'), profile=profile)
            if 'excess_noise' in section:
                state = replace(state, excess_noise=to_number(section['excess_noise'], 'input.excess_noise'))
            return state

        if 'rms_width' not in section:
            raise ScenarioError('input.rms_width', "missing field")
        times = {name: to_si(section[name], f"input.{name}", u.s)
                 for name in ('rms_width', 'center_time', 'window') if name in section}
        return PulseSpec(
            peak_amplitude=to_number(section.get('peak_amplitude', 1.0), 'input.peak_amplitude'),
            carrier_detuning=(to_rate(section['carrier_detuning'], 'input.carrier_detuning', convention)
                              if 'carrier_detuning' in section else 0.0),
            shape=section.get('shape', 'gaussian'),
            **times,
        )
    except InvalidParameters as e:
        raise ScenarioError('input', str(e))


def _parse_analysis(section: Any, convention: str) -> AnalysisSpec:
    if not isinstance(section, dict):
        raise ScenarioError('analysis', "must be an object")
    _reject_unknown(section, ANALYSIS_FIELDS, 'analysis.')

    ranged = 'min' in section or 'max' in section
    choices = [key for key, present in (('omega', 'omega' in section), ('omegas', 'omegas' in section),
                                        ('min', ranged)) if present]
    if len(choices) > 1:
        raise ScenarioError('analysis', "give only one of omega, omegas or min/max")

    try:
        if 'omega' in section:
            grid = FrequencyGrid(np.array([to_rate(section['omega'], 'analysis.omega', convention)]))
        elif 'omegas' in section:
            values = section['omegas']
            if not isinstance(values, list) or not values:
                raise ScenarioError('analysis.omegas', "must be a non-empty list")
            grid = FrequencyGrid(np.array([to_rate(v, f"analysis.omegas[{i}]", convention)
                                           for i, v in enumerate(values)]))
        elif ranged:
            for key in ('min', 'max', 'points'):
                if key not in section:
                    raise ScenarioError(f"analysis.{key}", "missing field")
            grid = FrequencyGrid.linspace(to_rate(section['min'], 'analysis.min', convention),
                                          to_rate(section['max'], 'analysis.max', convention),
                                          to_count(section['points'], 'analysis.points'))
        else:
            grid = FrequencyGrid(np.array([0.0]))
    except InvalidParameters as e:
        raise ScenarioError('analysis', str(e))

    model = section.get('model', 'full')
    if model not in MODELS:
        raise ScenarioError('analysis.model', f"must be one of {MODELS}, got {model!r}")
    return AnalysisSpec(
        grid=grid,
        theta=to_angle(section.get('theta', 0.0), 'analysis.theta'),
        phi=to_angle(section.get('phi', 0.0), 'analysis.phi'),
        model=model,
        nz=to_count(section.get('nz', 512), 'analysis.nz'),
        nt=to_count(section.get('nt', 8192), 'analysis.nt'),
        tolerance=to_number(section.get('tolerance', 1e-6), 'analysis.tolerance'),
    )


def _parse_sweep(section: Any) -> SweepAxis:
    if not isinstance(section, dict):
        raise ScenarioError('sweep', "must be an object")
    _reject_unknown(section, {'parameter', 'values'}, 'sweep.')
    parameter = section.get('parameter')
    if not isinstance(parameter, str):
        raise ScenarioError('sweep.parameter', "must name a field such as 'medium.gamma_bc'")
    values = section.get('values')
    if not isinstance(values, list) or not values:
        raise ScenarioError('sweep.values', "must be a non-empty list")
    return SweepAxis(parameter=parameter, values=tuple(values))


def _check_sweep_target(scenario: Scenario) -> None:
    section, _, name = scenario.sweep.parameter.partition('.')
    if section == 'medium' and name in MEDIUM_FIELDS:
        return
    if section == 'input' and name in INPUT_FIELDS[scenario.raw['input']['kind']] - {'profile'}:
        return
    raise ScenarioError('sweep.parameter', f"{scenario.sweep.parameter!r} is not a medium or input field")


def _sweep_point(raw: Dict[str, Any], parameter: str, value: Any, name: str) -> Scenario:
    section, _, key = parameter.partition('.')
    document = copy.deepcopy(raw)
    document.pop('sweep', None)
    target = document[section]
    if section == 'medium' and key in ('coupling_g', 'calibrate_vg'):
        target.pop('coupling_g', None)
        target.pop('calibrate_vg', None)
    if section == 'input' and key in ('target_duan', 'r'):
        target.pop('target_duan', None)
        target.pop('r', None)
    target[key] = value
    return parse_scenario(document, name)
