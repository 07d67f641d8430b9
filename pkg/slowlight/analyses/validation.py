import typing

import pandas as pd

from slowlight.analyses.base import BaseAnalysis
from slowlight.models import PulseSpec
from slowlight.oracle import transfer_equivalence
from slowlight.scenario.load import Scenario


class OracleAnalysis(BaseAnalysis):
    """
    Runs the time-domain oracle on the scenario pulse and compares it with the transfer function.
    """
    input_types = (PulseSpec,)

    def _prepare(self, scenario: Scenario) -> typing.Any:
        return scenario.medium, scenario.input, scenario.analysis

    def _evaluate(self, prepared) -> pd.DataFrame:
        params, pulse, analysis = prepared
        report = transfer_equivalence(params, pulse, analysis.nz, analysis.nt, tolerance=analysis.tolerance)
        return pd.DataFrame([{
            'nz': report.nz,
            'nt': report.nt,
            'residual': report.residual,
            'energy_time': report.energy_time,
            'energy_frequency': report.energy_frequency,
            'measured_delay_s': report.measured_delay,
            'tau_d_s': report.expected_delay,
            'in_window': report.in_window,
        }])
