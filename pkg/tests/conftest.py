import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def cs():
    from raqr.atomic import load_species

    return load_species("Cs133")


@pytest.fixture(scope="session")
def rb():
    from raqr.atomic import load_species

    return load_species("Rb87")


@pytest.fixture(scope="session")
def hydrogen(cs):
    return cs.without_defects()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
