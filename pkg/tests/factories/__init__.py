from .point_factory import LabeledPointFactory, LabeledSampleFactory, sample_from_labels
from .classifier_factory import (
    ConstantErrorClassifierFactory,
    DecisionStumpFactory,
    NoisyClassifierFactory,
    lookup_classifier,
)
