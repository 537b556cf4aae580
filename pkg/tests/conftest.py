import pytest
from hypothesis import HealthCheck, settings

from lmoment import PrecisionContext

# mpmath work makes individual examples slow by hypothesis standards; the
# deadline is noise here, not a signal.
settings.register_profile(
    "mpmath",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("mpmath")


@pytest.fixture(scope="session")
def ctx96():
    return PrecisionContext(prec_bits=96)


@pytest.fixture(scope="session")
def ctx128():
    return PrecisionContext(prec_bits=128)


@pytest.fixture(scope="session")
def ctx192():
    return PrecisionContext(prec_bits=192)
