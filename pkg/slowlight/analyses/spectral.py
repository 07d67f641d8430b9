import math
import typing

import numpy as np
import pandas as pd

from slowlight.analyses.base import BaseAnalysis
from slowlight.langevin import noise_floor
from slowlight.medium import derived_figures, taylor_check
from slowlight.scenario.load import Scenario
from slowlight.spectra import (
    duan_in,
    duan_measure,
    entanglement_out_approx,
    entanglement_out_full,
    squeezing_out,
    transmission,
)
from slowlight.states import EntangledInput, SqueezedInput


def _frequency_columns(omegas: np.ndarray) -> typing.Dict[str, np.ndarray]:
    return {'omega_rad_s': omegas, 'omega_over_2pi_hz': omegas / (2 * np.pi)}


class FiguresAnalysis(BaseAnalysis):
    """
    Slow-light figures of the medium: absorption, group velocity, window, delay and optical depth.
    """

    def _prepare(self, scenario: Scenario) -> typing.Any:
        return scenario.medium

    def _evaluate(self, params) -> pd.DataFrame:
        figures = derived_figures(params)
        taylor = taylor_check(params) if math.isfinite(figures.delta_omega) else None
        return pd.DataFrame([{
            'K_per_m': figures.K,
            'v_g_m_s': figures.v_g,
            'delta_omega_rad_s': figures.delta_omega,
            'delta_omega_over_2pi_hz': figures.delta_omega / (2 * np.pi),
            'tau_d_s': figures.tau_d,
            'KL': figures.optical_depth,
            'coupling_g_rad_s': params.coupling_g,
            'taylor_residual': taylor.worst if taylor is not None else 0.0,
        }])


class SqueezingAnalysis(BaseAnalysis):
    """
    Output squeezing spectrum of a single beam, at the scenario angle and at the conjugate angle.
    """
    input_types = (SqueezedInput,)

    def _prepare(self, scenario: Scenario) -> typing.Any:
        return scenario.medium, scenario.input, scenario.analysis.grid

    def _evaluate(self, prepared) -> pd.DataFrame:
        params, state, grid = prepared
        omegas = grid.omegas
        theta = state.theta
        return pd.DataFrame({
            **_frequency_columns(omegas),
            'theta_rad': theta,
            's_in': state.spectrum(omegas, theta),
            'transmission': transmission(params, grid).values,
            'noise_floor': noise_floor(params, omegas),
            's_out': squeezing_out(params, state, grid, theta).values,
            's_out_conjugate': squeezing_out(params, state, grid, theta + math.pi / 2).values,
        })


class EntanglementAnalysis(BaseAnalysis):
    """
    Duan measure of an entangled pair before and after beam X crosses the cell.
    """
    input_types = (EntangledInput,)

    def _prepare(self, scenario: Scenario) -> typing.Any:
        return scenario.medium, scenario.input, scenario.analysis

    def _evaluate(self, prepared) -> pd.DataFrame:
        params, state, analysis = prepared
        grid, theta, phi = analysis.grid, analysis.theta, analysis.phi
        spectrum = entanglement_out_approx if analysis.model == 'approx' else entanglement_out_full

        first = spectrum(params, state, theta, phi, grid)
        second = spectrum(params, state, theta + math.pi / 2, phi - math.pi / 2, grid)
        duan = duan_measure(first, second)
        return pd.DataFrame({
            **_frequency_columns(grid.omegas),
            'theta_rad': theta,
            'phi_rad': phi,
            'model': analysis.model,
            'duan_in': duan_in(state, grid, theta, phi).values,
            'a_out': first.values,
            'a_out_conjugate': second.values,
            'duan_out': duan.values,
            'notes': '; '.join(duan.notes),
        })
