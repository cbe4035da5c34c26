import json

import pytest

from bicorn.suite import data_text


@pytest.fixture
def pair_raw():
    def load(name):
        return json.loads(data_text("pairs", name))

    return load


@pytest.fixture
def track_raw():
    def load(name):
        return json.loads(data_text("tracks", name))

    return load
