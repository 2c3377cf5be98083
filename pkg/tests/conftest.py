import pytest

from hypothesis import HealthCheck, settings

from source.synth.blocks import KappaCache


settings.register_profile('default', deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('ci', deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile('default')


@pytest.fixture(scope='session')
def kappa_cache():
    return KappaCache()
