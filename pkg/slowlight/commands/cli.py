import logging
import sys
import time
from pathlib import Path

import click

from slowlight.analyses.spectral import EntanglementAnalysis, FiguresAnalysis, SqueezingAnalysis
from slowlight.analyses.sweep import SweepAnalysis
from slowlight.analyses.validation import OracleAnalysis
from slowlight.errors import (
    DegenerateRegime,
    GridMismatch,
    InvalidParameters,
    NoPeak,
    ScenarioError,
    StepSizeTooCoarse,
    UnequalDecayRates,
)
from slowlight.scenario.load import load_scenario
from slowlight.tables import write_table

SUPPORTED_ANALYSES = {
    'figures': FiguresAnalysis,
    'squeezing': SqueezingAnalysis,
    'entanglement': EntanglementAnalysis,
    'oracle': OracleAnalysis,
}

EXIT_INVALID = 1
EXIT_DEGENERATE = 2
EXIT_NOT_CONVERGED = 3


COMMON_OPTIONS = (
    click.option('--scenario', required=True,
                 help='Scenario JSON file, or the name of a bundled scenario such as paper_cell.'),
    click.option('--out', '-o', default=None, type=click.Path(),
                 help='Output path for the report. Defaults to report_<command>_<time>.csv.'),
    click.option('--no-timestamp', is_flag=True, default=False,
                 help='Do not write the "# generated" header line.'),
    click.option('--grid-points', type=click.IntRange(min=1), default=None,
                 help='Resample the analysis frequency range on this many points.'),
    click.option('--print-report', is_flag=True, default=False, help='Print the report.'),
)


def _common_options(command):
    for option in reversed(COMMON_OPTIONS):
        command = option(command)
    return command


def _run(name, make_analysis, scenario, out, no_timestamp, grid_points, print_report) -> None:
    try:
        click.echo(f'Loading scenario from {scenario}')
        loaded = load_scenario(scenario)
        if grid_points is not None:
            loaded = loaded.with_grid_points(grid_points)
        report = make_analysis(loaded).run()
    except (ScenarioError, InvalidParameters, GridMismatch, UnequalDecayRates) as e:
        click.echo(f'Invalid input: {e}', err=True)
        sys.exit(EXIT_INVALID)
    except DegenerateRegime as e:
        click.echo(f'Degenerate regime: {e}', err=True)
        sys.exit(EXIT_DEGENERATE)
    except (StepSizeTooCoarse, NoPeak) as e:
        click.echo(f'Numerical failure: {e}', err=True)
        sys.exit(EXIT_NOT_CONVERGED)

    if out is None:
        report_path = Path(".") / Path(f'report_{name}_{time.strftime("%Y%m%d%H%M%S")}.csv')
    else:
        report_path = Path(out)

    click.echo(f"Writing report to {report_path}")
    try:
        write_table(report, report_path, timestamp=not no_timestamp)
    except (RuntimeError, OSError) as e:
        click.echo(f"Cannot write report: {e}", err=True)
        sys.exit(EXIT_INVALID)

    if name == 'figures':
        row = report.iloc[0]
        click.echo(f"delta_omega = {row['delta_omega_rad_s']:.6g} rad/s "
                   f"(delta_omega / 2pi = {row['delta_omega_over_2pi_hz']:.6g} Hz)")
    if print_report:
        click.echo(f'{name.capitalize()} report')
        click.echo(report.to_markdown())


@click.group()
@click.option('--verbose', '-v', count=True, help='Log library messages; repeat for debug output.')
def cli(verbose: int) -> None:
    """Squeezing and entanglement of slow light in an EIT medium."""
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')


def _make_command(name: str, analysis_type):
    @_common_options
    def command(scenario, out, no_timestamp, grid_points, print_report):
        _run(name, analysis_type, scenario, out, no_timestamp, grid_points, print_report)

    command.__doc__ = analysis_type.__doc__
    return cli.command(name=name)(command)


for _name, _analysis in SUPPORTED_ANALYSES.items():
    _make_command(_name, _analysis)


@cli.command()
@_common_options
@click.option('--analysis', 'analysis_name', type=click.Choice(SUPPORTED_ANALYSES.keys(), case_sensitive=False),
              default='figures', help='Analysis repeated at every sweep value.')
@click.option('--jobs', '-j', type=int, default=1, help='Number of parallel workers.')
def sweep(scenario, out, no_timestamp, grid_points, print_report, analysis_name, jobs):
    """Repeat an analysis over the scenario sweep axis, one block of rows per value."""
    analysis_type = SUPPORTED_ANALYSES[analysis_name.lower()]
    _run('sweep', lambda loaded: SweepAnalysis(loaded, analysis_type, jobs=jobs),
         scenario, out, no_timestamp, grid_points, print_report)


if __name__ == '__main__':
    cli()
