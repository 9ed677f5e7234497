import numpy as np
import pytest

from mgflow import RiskInstance


@pytest.fixture(scope="session")
def small_instance():
    """50 x 20 Gaussian instance shared by estimator and risk tests."""
    return RiskInstance.gaussian(50, 20, seed=3)


@pytest.fixture(scope="session")
def small_response(small_instance):
    rng = np.random.default_rng(30)
    X = small_instance.dec.reconstruct()
    return X @ small_instance.beta0 + rng.standard_normal(50)


@pytest.fixture(scope="session")
def reference_scale_instance():
    """The reference experiment scale: n=1000, p=500, sigma2=r2=1, delta=1e-3."""
    return RiskInstance.gaussian(1000, 500, seed=0)
