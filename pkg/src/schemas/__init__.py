# Marshmallow schemas for config files and report rows
from .config_schema import (
    CommaSeparatedList,
    ExperimentConfigSchema,
    experiment_config_schema
)
from .report_schema import (
    REPORT_COLUMNS,
    ReportRowSchema,
    report_row_schema
)
