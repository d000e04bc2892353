"""Shared fixtures."""

import pytest

from app.config import get_settings
from app.families import ClassicalFamily, ThreePointFamily, TorusFamily
from app.finite_lie import make_gl, make_sl


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Isolate tests from a developer .env and reset the cached settings."""
    for name in ("KNALG_MAX_WORKERS", "KNALG_SAMPLE_BUDGET", "KNALG_PRODUCT_CACHE"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def classical():
    return ClassicalFamily()


@pytest.fixture
def threepoint():
    return ThreePointFamily()


@pytest.fixture
def torus():
    return TorusFamily()


@pytest.fixture(params=["classical", "threepoint", "torus"])
def family(request):
    return {
        "classical": ClassicalFamily,
        "threepoint": ThreePointFamily,
        "torus": TorusFamily,
    }[request.param]()


@pytest.fixture
def sl2():
    return make_sl(2)


@pytest.fixture
def gl2():
    return make_gl(2)
