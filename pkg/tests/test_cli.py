import json

import pytest
from click.testing import CliRunner

from slowlight.commands.cli import EXIT_DEGENERATE, EXIT_INVALID, EXIT_NOT_CONVERGED, cli
from slowlight.scenario.load import BUNDLED_DIR
from slowlight.tables import TIMESTAMP_PREFIX, load_table


@pytest.fixture
def runner():
    return CliRunner()


def _scenario(tmp_path, name, edit):
    with open(BUNDLED_DIR / f'{name}.json') as handle:
        document = json.load(handle)
    edit(document)
    path = tmp_path / f'edited_{name}.json'
    path.write_text(json.dumps(document))
    return str(path)


def test_figures(runner, tmp_path):
    out = tmp_path / 'figures.csv'
    result = runner.invoke(cli, ['figures', '--scenario', 'paper_cell', '-o', str(out), '--print-report'])
    assert result.exit_code == 0, result.output
    assert 'delta_omega =' in result.output
    assert 'rad/s' in result.output

    table = load_table(out)
    assert len(table) == 1
    row = table.iloc[0]
    assert row['v_g_m_s'] == pytest.approx(3100, rel=1e-9)
    assert row['tau_d_s'] == pytest.approx(11.29e-6, rel=1e-3)
    assert row['delta_omega_rad_s'] == pytest.approx(6.46e6, rel=1e-2)
    assert row['taylor_residual'] <= 1e-6


def test_squeezing_sweep(runner, tmp_path):
    out = tmp_path / 'sweep.csv'
    result = runner.invoke(cli, ['sweep', '--scenario', 'paper_cell', '--analysis', 'squeezing', '-o', str(out)])
    assert result.exit_code == 0, result.output

    table = load_table(out)
    assert list(table.columns[:3]) == ['sweep_index', 'sweep_parameter', 'sweep_value']
    assert list(table['sweep_value']) == ['10 Hz', '5 kHz']
    assert list(table['s_out']) == pytest.approx([0.428, 0.489], abs=0.01)


def test_entanglement_sweep(runner, tmp_path):
    out = tmp_path / 'sweep.csv'
    result = runner.invoke(cli, ['sweep', '--scenario', 'paper_cell_entanglement', '--analysis', 'entanglement',
                                 '-o', str(out)])
    assert result.exit_code == 0, result.output

    table = load_table(out)
    assert list(table['duan_in']) == pytest.approx([0.4, 0.4])
    assert list(table['duan_out']) == pytest.approx([0.438, 0.522], abs=0.02)


def test_approximate_entanglement(runner, tmp_path):
    scenario = _scenario(tmp_path, 'paper_cell_entanglement', lambda d: d['analysis'].update(model='approx'))
    out = tmp_path / 'entanglement.csv'
    result = runner.invoke(cli, ['entanglement', '--scenario', scenario, '-o', str(out)])
    assert result.exit_code == 0, result.output

    row = load_table(out).iloc[0]
    assert row['model'] == 'approx'
    assert row['duan_out'] == pytest.approx(0.448, abs=0.01)


def test_parallel_sweep_matches_serial(runner, tmp_path):
    serial, parallel = tmp_path / 'serial.csv', tmp_path / 'parallel.csv'
    for path, jobs in ((serial, '1'), (parallel, '2')):
        result = runner.invoke(cli, ['sweep', '--scenario', 'paper_cell', '--analysis', 'figures', '--jobs', jobs,
                                     '--no-timestamp', '-o', str(path)])
        assert result.exit_code == 0, result.output
    assert serial.read_bytes() == parallel.read_bytes()


def test_reports_are_reproducible(runner, tmp_path):
    first, second, stamped = tmp_path / 'first.csv', tmp_path / 'second.csv', tmp_path / 'stamped.csv'
    arguments = ['squeezing', '--scenario', 'paper_cell_spectrum']
    for path in (first, second):
        result = runner.invoke(cli, [*arguments, '--no-timestamp', '-o', str(path)])
        assert result.exit_code == 0, result.output
    assert first.read_bytes() == second.read_bytes()

    result = runner.invoke(cli, [*arguments, '-o', str(stamped)])
    assert result.exit_code == 0, result.output
    assert stamped.read_text().startswith(TIMESTAMP_PREFIX)
    assert load_table(stamped).equals(load_table(first))


def test_grid_points(runner, tmp_path):
    out = tmp_path / 'squeezing.csv'
    result = runner.invoke(cli, ['squeezing', '--scenario', 'paper_cell_spectrum', '--grid-points', '5',
                                 '-o', str(out)])
    assert result.exit_code == 0, result.output
    table = load_table(out)
    assert list(table['omega_rad_s']) == pytest.approx([-1e7, -5e6, 0.0, 5e6, 1e7])
    assert list(table.columns) == ['omega_rad_s', 'omega_over_2pi_hz', 'theta_rad', 's_in', 'transmission',
                                   'noise_floor', 's_out', 's_out_conjugate']


def test_oracle(runner, tmp_path):
    out = tmp_path / 'oracle.csv'
    result = runner.invoke(cli, ['-v', 'oracle', '--scenario', 'paper_cell_pulse', '-o', str(out)])
    assert result.exit_code == 0, result.output
    row = load_table(out).iloc[0]
    assert row['residual'] <= 0.01
    assert row['measured_delay_s'] == pytest.approx(row['tau_d_s'], rel=0.03)
    assert bool(row['in_window'])


@pytest.mark.parametrize('command, name, edit', [
    ('sweep', 'paper_cell', lambda d: d['sweep'].update(values=[])),
    ('figures', 'paper_cell', lambda d: d['medium'].update(length=3.5)),
    ('squeezing', 'paper_cell_pulse', lambda d: None),
    ('entanglement', 'paper_cell', lambda d: None),
])
def test_invalid_input_exit_code(runner, tmp_path, command, name, edit):
    scenario = _scenario(tmp_path, name, edit)
    result = runner.invoke(cli, [command, '--scenario', scenario, '-o', str(tmp_path / 'out.csv')])
    assert result.exit_code == EXIT_INVALID
    assert 'Invalid input' in result.output
    assert not (tmp_path / 'out.csv').exists()


def test_unknown_scenario_exit_code(runner, tmp_path):
    result = runner.invoke(cli, ['figures', '--scenario', 'no_such_scenario', '-o', str(tmp_path / 'out.csv')])
    assert result.exit_code == EXIT_INVALID


def test_degenerate_exit_code(runner, tmp_path):
    def edit(document):
        document['medium'].pop('calibrate_vg')
        document['medium'].update(coupling_g='1 rad / s', gamma_bc='200pi MHz')
        document.pop('sweep')

    scenario = _scenario(tmp_path, 'paper_cell', edit)
    result = runner.invoke(cli, ['figures', '--scenario', scenario, '-o', str(tmp_path / 'out.csv')])
    assert result.exit_code == EXIT_DEGENERATE
    assert 'Degenerate regime' in result.output


def test_not_converged_exit_code(runner, tmp_path):
    scenario = _scenario(tmp_path, 'paper_cell_pulse', lambda d: d['analysis'].update(nz=64, nt=256))
    result = runner.invoke(cli, ['oracle', '--scenario', scenario, '-o', str(tmp_path / 'out.csv')])
    assert result.exit_code == EXIT_NOT_CONVERGED
    assert 'Numerical failure' in result.output


def test_unwritable_output_exit_code(runner, tmp_path):
    blocker = tmp_path / 'blocker'
    blocker.write_text('not a directory')
    result = runner.invoke(cli, ['figures', '--scenario', 'paper_cell', '-o', str(blocker / 'out.csv')])
    assert result.exit_code == EXIT_INVALID
    assert 'Cannot write report' in result.output
