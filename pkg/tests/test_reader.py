import json

import numpy as np
import pytest

from smlab.reader import reader
from smlab.main.case import DIAGONAL, JORDAN, RATIONAL
from smlab.main.errors import ParameterError, ConfigurationError
from smlab.main.operators import jordan_model

from conftest import bump_function


def test_read_json_from_text_and_file(tmp_path):
    assert reader.read_json('{"a": 1}') == {'a': 1}
    assert reader.read_json([1, 2]) == [1, 2]
    path = tmp_path/'value.json'
    path.write_text('[1, 2, 3]', encoding='utf-8')
    assert reader.read_json(str(path)) == [1, 2, 3]
    with pytest.raises(ParameterError):
        reader.read_json('not json')


def test_read_operator():
    A = reader.read_operator({'n': 2, 'space_p': 1.5, 'structure': 'Diagonal',
                              'entries': [[1, 0], 0, 0, [3, 0]]})
    assert A.structure == DIAGONAL
    assert A.space_p == 1.5
    assert np.allclose(A.spectrum, [1, 3])


def test_read_operator_round_trip():
    A = jordan_model(2, 4.0)
    B = reader.read_operator(json.dumps(A.to_json()))
    assert B.structure == JORDAN
    assert np.allclose(B.matrix, A.matrix)


@pytest.mark.parametrize('descriptor', [
    {'n': 2, 'structure': 'General', 'entries': [1, 2, 3]},
    {'n': 2, 'structure': 'General'},
    {'n': 1, 'structure': 'General', 'entries': ['x']},
])
def test_read_operator_rejects(descriptor):
    with pytest.raises(ParameterError):
        reader.read_operator(descriptor)


def test_read_family():
    family = reader.read_family([
        {'param': [0.5, 1], 'operator': {'n': 1, 'space_p': 3,
                                         'entries': [2]}},
        {'param': [0.5, 2], 'operator': {'n': 1, 'space_p': 3,
                                         'entries': [4]}},
    ], label='T')
    assert len(family) == 2
    assert family.params == [(0.5, 1), (0.5, 2)]
    assert family.space_p == 3.0


def test_read_family_rejects():
    with pytest.raises(ParameterError):
        reader.read_family([])
    with pytest.raises(ParameterError):
        reader.read_family([{'param': 0}])
    with pytest.raises(ParameterError):
        reader.read_family([
            {'param': 0, 'operator': {'n': 1, 'space_p': 2, 'entries': [1]}},
            {'param': 1, 'operator': {'n': 1, 'space_p': 3, 'entries': [1]}},
        ])


def test_read_multiplier():
    f = reader.read_multiplier('{"kind": "Rational", '
                               '"params": {"num": [0, 1], "den": [1, 2, 1]}}')
    assert f.kind == RATIONAL
    assert f(1.0) == pytest.approx(0.25)
    with pytest.raises(ParameterError):
        reader.read_multiplier('{"params": {}}')


def test_read_grid_function(tmp_path):
    g = bump_function()
    path = str(tmp_path/'bump.csv')
    g.dump(path)
    copy = reader.read_grid_function(path)
    assert np.allclose(copy.samples, g.samples)
    with pytest.raises(ParameterError):
        reader.read_grid_function(str(tmp_path/'missing.csv'))


def test_read_experiment_config_from_file(tmp_path):
    path = tmp_path/'e6.ini'
    path.write_text('experiment = e6\nseed = 2\nmodels = laplacian16\n',
                    encoding='utf-8')
    configuration = reader.read_experiment_config(str(path))
    assert configuration['experiment'] == 'E6'
    assert configuration['seed'] == 2
    assert configuration['models'] == 'laplacian16'


def test_read_experiment_config_rejects_bool_seed():
    with pytest.raises(ConfigurationError):
        reader.read_experiment_config('experiment = E1\nseed = true\n')
