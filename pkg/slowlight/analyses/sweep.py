import logging
import typing

import pandas as pd
from joblib import Parallel, delayed

from slowlight.analyses.base import BaseAnalysis
from slowlight.errors import ScenarioError
from slowlight.scenario.load import Scenario

logger = logging.getLogger(__name__)


def _run_point(analysis_type: typing.Type[BaseAnalysis], scenario: Scenario) -> pd.DataFrame:
    return analysis_type(scenario).run()


class SweepAnalysis(BaseAnalysis):
    """
    Repeats another analysis over the scenario sweep axis. Rows keep the sweep order whatever the
    order in which the workers finish.
    """

    def __init__(self, scenario: Scenario, analysis_type: typing.Type[BaseAnalysis], jobs: int = 1) -> None:
        super().__init__(scenario)
        self.analysis_type = analysis_type
        self.jobs = jobs

    def _prepare(self, scenario: Scenario) -> typing.Any:
        if scenario.sweep is None:
            raise ScenarioError('sweep', "the scenario has no sweep section")
        return scenario.sweep.parameter, scenario.points()

    def _evaluate(self, prepared) -> pd.DataFrame:
        parameter, points = prepared
        logger.info("Sweeping %s over %d values with %d job(s)", parameter, len(points), self.jobs)
        frames = Parallel(n_jobs=self.jobs)(
            delayed(_run_point)(self.analysis_type, point) for _, point in points)

        rows = []
        for index, ((value, _), frame) in enumerate(zip(points, frames)):
            frame.insert(0, 'sweep_index', index)
            frame.insert(1, 'sweep_parameter', parameter)
            frame.insert(2, 'sweep_value', str(value))
            rows.append(frame)
        return pd.concat(rows, ignore_index=True)
