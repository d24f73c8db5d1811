import json
import math

import pytest

from smlab.main.console import main
from smlab.main.experiment import Report


DIAGONAL = json.dumps({'n': 2, 'space_p': 2, 'structure': 'Diagonal',
                       'entries': [1, 0, 0, 2]})
RATIONAL = json.dumps({'kind': 'Rational',
                       'params': {'num': [0, 1], 'den': [1, 2, 1]}})
PEAK = json.dumps({'kind': 'WindowedSmooth',
                   'params': {'center': 0.0, 'radius': math.log(2),
                              'coefficients': [[1.0, 0.0]]}})


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_norm_command(capsys):
    code, out, _ = run(capsys, 'norm', '--func', PEAK, '--alpha', '1',
                       '--p', '2', '--grid', '0.0078125,2')
    assert code == 0
    output = json.loads(out)
    assert output['norm'] > 0
    assert set(output) == {'norm', 'index', 'shift'}


def test_norm_command_rejects_grid(capsys):
    code, _, err = run(capsys, 'norm', '--func', PEAK, '--alpha', '1',
                       '--p', '2', '--grid', '0.1')
    assert code == 2
    assert err.startswith('ParameterError')


def test_calc_command(capsys):
    code, out, _ = run(capsys, 'calc', '--op', DIAGONAL, '--func', RATIONAL,
                       '--engine', 'cauchy')
    assert code == 0
    output = json.loads(out)
    assert output['engine'] == 'cauchy'
    entries = [complex(*entry) for entry in output['entries']]
    assert entries[0] == pytest.approx(0.25, abs=1e-8)
    assert entries[3] == pytest.approx(2/9, abs=1e-8)
    assert abs(entries[1]) < 1e-12


def test_calc_command_rejects_sigma(capsys):
    code, _, err = run(capsys, 'calc', '--op', DIAGONAL, '--func', PEAK,
                       '--engine', 'wave', '--sigma', '0.5')
    assert code == 2
    assert '--sigma' in err


def test_calc_command_reports_preconditions(capsys):
    code, _, err = run(capsys, 'calc', '--op', DIAGONAL, '--func', RATIONAL,
                       '--engine', 'wave')
    assert code == 2
    assert err.startswith('PreconditionError')


def test_rbound_command(capsys):
    family = json.dumps([
        {'param': a, 'operator': {'n': 2, 'space_p': 1.5,
                                  'structure': 'General',
                                  'entries': [a, 0, 0, a]}}
        for a in (1, 2)])
    code, out, _ = run(capsys, 'rbound', '--family', family, '--seed', '3',
                       '--tuples', '1,2')
    assert code == 0
    output = json.loads(out)
    assert output['lower'] == pytest.approx(2.0)
    assert output['search']['tuples'] == [1, 2]
    assert output['search']['seed'] == 3


def test_experiment_command(capsys, tmp_path):
    config = tmp_path/'e4.ini'
    config.write_text('seed = 7\n'
                      'models = diagonal\n'
                      'spectrum = 1, 2\n'
                      'corpus_size = 3\n', encoding='utf-8')
    out = tmp_path/'e4.csv'
    code, stdout, _ = run(capsys, 'experiment', 'e4', '--config',
                          str(config), '--out', str(out))
    assert code in (0, 1)
    assert '[E4:7]' in stdout
    report = Report.read(str(out))
    assert report.experiment == 'E4'
    assert report.seed == 7
    assert report.rows


def test_experiment_command_rejects_unknown_id(capsys, tmp_path):
    config = tmp_path/'e9.ini'
    config.write_text('seed = 1\n', encoding='utf-8')
    code, _, err = run(capsys, 'experiment', 'E9', '--config', str(config),
                       '--out', str(tmp_path/'e9.csv'))
    assert code == 2
    assert err.startswith('ConfigurationError')
