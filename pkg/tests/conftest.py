import pytest

from isoedf import ArrayNoiseConfig, ensemble_spectrum


@pytest.fixture(scope="session")
def cfg51():
    return ArrayNoiseConfig(n=51, zeta=0.5)


@pytest.fixture(scope="session")
def spectrum51(cfg51):
    return ensemble_spectrum(cfg51)
