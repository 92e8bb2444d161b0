import warnings

import pytest

from srsqueeze.errors import RegimeWarning


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        yield
