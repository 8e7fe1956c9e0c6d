"""
Experiment config validation schemas using Marshmallow.

Config files are flat `key = value` text; every value arrives as a string
and is converted and range-checked here. Unknown keys are rejected.
"""
from marshmallow import RAISE, Schema, ValidationError, fields, post_load, validate, validates, validates_schema

from src.app import load_settings
from src.domain.models import ExperimentConfig
from src.ml.training import MIN_HOEFFDING_TRIALS

VALID_MODES = ['classical', 'quantum', 'compare', 'hoeffding', 'povm-demo']
VALID_DATASETS = ['blobs', 'noisy-stump']
VALID_ESTIMATIONS = ['exact', 'sampled']
AUTO = 'auto'


class CommaSeparatedList(fields.Field):
    """Comma-separated scalars deserialized through an inner field."""

    def __init__(self, inner: fields.Field, allow_auto: bool = False, **kwargs):
        super().__init__(**kwargs)
        self.inner = inner
        self.allow_auto = allow_auto

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, (list, tuple)):
            items = list(value)
        else:
            items = [item.strip() for item in str(value).split(',') if item.strip()]
        if not items:
            raise ValidationError('At least one value is required')
        if self.allow_auto and items == [AUTO]:
            return [AUTO]
        return [self.inner.deserialize(item) for item in items]

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return ','.join(str(item) for item in value)


class ExperimentConfigSchema(Schema):
    """Schema for an experiment config file."""

    class Meta:
        unknown = RAISE

    mode = fields.Str(required=True, validate=validate.OneOf(VALID_MODES))
    n_points = CommaSeparatedList(
        fields.Int(validate=validate.Range(min=1)), allow_auto=True, required=True
    )
    n_classifiers = fields.Int(required=True, validate=validate.Range(min=1))
    epsilon = CommaSeparatedList(fields.Float(), required=True)
    failure_prob = fields.Float(
        load_default=0.05, validate=validate.Range(min=0.0, max=1.0, min_inclusive=False, max_inclusive=False)
    )
    seed = fields.Int(load_default=lambda: load_settings().DEFAULT_SEED, validate=validate.Range(min=0))
    dataset = fields.Str(load_default='blobs', validate=validate.OneOf(VALID_DATASETS))
    separation = fields.Float(load_default=3.0, validate=validate.Range(min=0.0, min_inclusive=False))
    flip_noise = fields.Float(load_default=0.0, validate=validate.Range(min=0.0, max=1.0))
    c_hat_target = fields.Float(load_default=1.0, validate=validate.Range(min=0.0, min_inclusive=False))
    memory_cap = fields.Int(load_default=lambda: load_settings().MEMORY_CAP_AMPLITUDES, validate=validate.Range(min=1))
    output = fields.Str(load_default='reports', validate=validate.Length(min=1))
    trials = fields.Int(load_default=MIN_HOEFFDING_TRIALS, validate=validate.Range(min=MIN_HOEFFDING_TRIALS))
    hoeffding_iteration = fields.Int(load_default=1, validate=validate.Range(min=1))
    guard_bits = fields.Int(load_default=lambda: load_settings().PHASE_GUARD_BITS, validate=validate.Range(min=0, max=16))
    estimation = fields.Str(load_default='exact', validate=validate.OneOf(VALID_ESTIMATIONS))
    workers = fields.Int(load_default=lambda: load_settings().MAX_WORKERS, validate=validate.Range(min=1))
    clamp_width = fields.Float(
        load_default=lambda: load_settings().CLAMP_WIDTH,
        validate=validate.Range(min=0.0, max=0.5, min_inclusive=False, max_inclusive=False),
    )
    enumeration_cap = fields.Int(load_default=lambda: load_settings().BRANCH_ENUMERATION_CAP, validate=validate.Range(min=1))
    povm_dimension = fields.Int(load_default=2, validate=validate.Range(min=2, max=64))

    @validates('epsilon')
    def validate_epsilon(self, value, **kwargs):
        """Every precision must be strictly positive; the bound is vacuous at zero."""
        bad = [eps for eps in value if not eps > 0.0]
        if bad:
            raise ValidationError(f'epsilon values must be positive, got {bad}')

    @validates_schema
    def validate_iteration(self, data, **kwargs):
        """The Hoeffding iteration must name one of the T classifiers."""
        t = data.get('hoeffding_iteration', 1)
        if 'n_classifiers' in data and t > data['n_classifiers']:
            raise ValidationError(
                f'hoeffding_iteration {t} exceeds n_classifiers {data["n_classifiers"]}',
                'hoeffding_iteration',
            )

    @post_load
    def make_config(self, data, **kwargs):
        return ExperimentConfig(**data)


experiment_config_schema = ExperimentConfigSchema()
