import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from kmsatake import build_root_datum, load_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def datum(name, **kw):
    return build_root_datum(load_config(CONFIGS / f"{name}.json"), **kw)


@pytest.fixture(scope="session")
def a1():
    return datum("a1")


@pytest.fixture(scope="session")
def a1_unequal():
    cfg = load_config(CONFIGS / "a1.json")
    cfg["parameters"] = "auto"
    return build_root_datum(cfg)


@pytest.fixture(scope="session")
def a2():
    return datum("a2")


@pytest.fixture(scope="session")
def b2():
    return datum("b2")


@pytest.fixture(scope="session")
def b2_auto():
    return datum("b2_auto")


@pytest.fixture(scope="session")
def g2():
    return datum("g2")


@pytest.fixture(scope="session")
def affine():
    return datum("affine_a1")


@pytest.fixture(scope="session")
def hyperbolic():
    return datum("hyperbolic")
