"""
Report row schema: the fixed CSV column order and per-column types.
"""
from marshmallow import Schema, fields, validate

REPORT_COLUMNS = [
    'mode', 'row_type', 'n_points', 'n_classifiers', 'epsilon', 'iteration',
    'r_hat', 'alpha', 'c_hat', 'phase_bits', 'query_count', 'total_queries',
    'observed_rate', 'bound', 'trials', 'seed', 'status',
]
INTEGER_COLUMNS = [
    'n_points', 'n_classifiers', 'iteration', 'phase_bits', 'query_count',
    'total_queries', 'trials', 'seed',
]
ROW_TYPES = ['iteration', 'summary', 'cell', 'error']


class ReportRowSchema(Schema):
    """Schema for one report row; query counts are integers."""
    mode = fields.Str(required=True)
    row_type = fields.Str(required=True, validate=validate.OneOf(ROW_TYPES))
    n_points = fields.Int(allow_none=True, strict=True)
    n_classifiers = fields.Int(allow_none=True, strict=True)
    epsilon = fields.Float(allow_none=True)
    iteration = fields.Int(allow_none=True, strict=True)
    r_hat = fields.Float(allow_none=True)
    alpha = fields.Float(allow_none=True)
    c_hat = fields.Float(allow_none=True)
    phase_bits = fields.Int(allow_none=True, strict=True)
    query_count = fields.Int(allow_none=True, strict=True, validate=validate.Range(min=0))
    total_queries = fields.Int(allow_none=True, strict=True, validate=validate.Range(min=0))
    observed_rate = fields.Float(allow_none=True)
    bound = fields.Float(allow_none=True)
    trials = fields.Int(allow_none=True, strict=True)
    seed = fields.Int(allow_none=True, strict=True)
    status = fields.Str(load_default='ok')


report_row_schema = ReportRowSchema()
