import os

import pytest
from dotenv import load_dotenv

load_dotenv()
os.environ.setdefault("BOOST_CONFIG", "testing")

from tests.factories import lookup_classifier, sample_from_labels


@pytest.fixture
def four_point_sample():
    """Four points with labels +1, -1, +1, -1."""
    return sample_from_labels([1, -1, 1, -1])


@pytest.fixture
def dyadic_classifiers(four_point_sample):
    """H1 correct everywhere, H2 wrong on the first two points."""
    return [
        lookup_classifier(four_point_sample, [0.0, 0.0, 0.0, 0.0]),
        lookup_classifier(four_point_sample, [1.0, 1.0, 0.0, 0.0]),
    ]


@pytest.fixture
def write_config(tmp_path):
    """Write a flat key = value config file and return its path."""
    def _write(name="experiment.cfg", **values):
        path = tmp_path / name
        path.write_text("".join(f"{key} = {value}\n" for key, value in values.items()))
        return str(path)
    return _write
