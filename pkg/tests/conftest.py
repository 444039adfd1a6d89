import pytest

from mlstokes import PrecisionContext


@pytest.fixture
def ctx30():
    return PrecisionContext(30)


@pytest.fixture
def ctx60():
    return PrecisionContext(60)
