import pytest

from fracplap.config import FracParams, QuadConfig


@pytest.fixture
def cfg():
    return QuadConfig()


@pytest.fixture
def fast_cfg():
    """Looser tolerances for the nested quadratures (seminorms, sweeps)."""
    return QuadConfig(rel_tol=1e-6, abs_tol=1e-9)


@pytest.fixture
def half_laplacian():
    return FracParams(n=1, s=0.5, p=2.0)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for variable in (
        "FRACPLAP_REL_TOL",
        "FRACPLAP_ABS_TOL",
        "FRACPLAP_HERMITE_NODES",
        "FRACPLAP_MAX_SUBDIVISIONS",
        "FRACPLAP_TAIL_RADIUS",
        "FRACPLAP_OUTPUT",
        "FRACPLAP_WORKERS",
    ):
        monkeypatch.delenv(variable, raising=False)
