"""Contains SMLAB report fields descriptors."""

import dataclasses as dc
import json

from ..utils import utils


@dc.dataclass
class Field:
    """Represents some column of experiment reports."""

    field_name: str
    data_type: type

    def format(self, value):
        """Render the value as a CSV cell."""
        if value is None:
            return ''
        elif self.data_type is float:
            return repr(float(value))
        elif self.data_type is dict:
            return json.dumps(utils.to_json(value), sort_keys=True)
        return str(value)

    def parse(self, cell):
        """Read the value back from a CSV cell."""
        if cell == '':
            return None
        elif self.data_type is float:
            return float(cell)
        elif self.data_type is dict:
            return json.loads(cell)
        return cell

    @property
    def column_name(self):
        return self.field_name


EXPERIMENT = Field('experiment', str)
CHECK = Field('check', str)
INVARIANT = Field('invariant', str)
PARAMETERS = Field('parameters', dict)
MEASURED = Field('measured', float)
EXPECTED = Field('expected', float)
TOLERANCE = Field('tolerance', float)
STATUS = Field('status', str)

COLUMNS = (EXPERIMENT, CHECK, INVARIANT, PARAMETERS, MEASURED, EXPECTED,
           TOLERANCE, STATUS)
