import typing
from abc import ABC, abstractmethod

import pandas as pd

from slowlight.errors import ScenarioError
from slowlight.scenario.load import Scenario


class BaseAnalysis(ABC):
    """
    Base class for all analyses. An analysis turns a Scenario into a report table.
    """

    # Input kinds the analysis accepts; None means the input is not used.
    input_types: typing.Optional[typing.Tuple[type, ...]] = None

    def __init__(self, scenario: Scenario) -> None:
        self._scenario = scenario

    def run(self) -> pd.DataFrame:
        """
        Runs the analysis on the scenario.

        :return: A DataFrame with a fixed column order, one row per frequency or one summary row.
        """
        if self.input_types is not None and not isinstance(self._scenario.input, self.input_types):
            expected = ' or '.join(t.__name__ for t in self.input_types)
            raise ScenarioError('input.kind', f"this analysis needs a {expected} input, "
                                              f"got {type(self._scenario.input).__name__}")
        prepared = self._prepare(self._scenario)
        return self._evaluate(prepared)

    @abstractmethod
    def _prepare(self, scenario: Scenario) -> typing.Any:
        """
        Abstract method to extract from the scenario whatever the evaluation needs.
        Each analysis must implement this method.

        :param scenario: A validated scenario.
        :return: The inputs of the evaluation. Their type varies with the concrete implementation.
        """
        pass

    @abstractmethod
    def _evaluate(self, prepared: typing.Any) -> pd.DataFrame:
        """
        Abstract method that computes the report from the prepared inputs.
        Each analysis must implement this method.

        :param prepared: The values returned by _prepare.
        :return: The report table.
        """
        pass
