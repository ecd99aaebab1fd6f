import pytest
from pydantic import ValidationError

from fracplap.config import FracParams, QuadConfig, RunConfig


def test_params_regime_flags():
    params = FracParams(n=1, s=0.5, p=1.2)
    assert params.sp == pytest.approx(0.6)
    # 2 / (2 - 0.5) = 4/3
    assert params.small_p_regime
    assert not FracParams(n=1, s=0.5, p=1.5).small_p_regime
    assert FracParams(n=1, s=0.8, p=3.0).sp_ge_2
    assert not FracParams(n=1, s=0.5, p=3.0).sp_ge_2


@pytest.mark.parametrize("values", [{"s": 0.0, "p": 2.0}, {"s": 1.0, "p": 2.0}, {"s": 0.5, "p": 1.0}, {"n": 0, "s": 0.5, "p": 2.0}])
def test_params_out_of_range(values):
    with pytest.raises(ValidationError):
        FracParams(**values)


def test_params_replace_keeps_other_fields():
    params = FracParams(n=2, s=0.3, p=2.5).replace(n=1)
    assert (params.n, params.s, params.p) == (1, 0.3, 2.5)
    assert params.small_p_regime == (2.5 < 2.0 / 1.7)


def test_params_are_hashable():
    assert hash(FracParams(n=1, s=0.5, p=2.0)) == hash(FracParams(n=1, s=0.5, p=2.0))


def test_quad_config_validation():
    assert QuadConfig(hermite_nodes=63, legendre_nodes=25).hermite_nodes == 63
    with pytest.raises(ValidationError):
        QuadConfig(hermite_nodes=4)
    with pytest.raises(ValidationError):
        QuadConfig(y_ratio=1.5)


def test_quad_config_tolerance():
    cfg = QuadConfig(rel_tol=1e-6, abs_tol=1e-9)
    assert cfg.tolerance(0.0) == 1e-9
    assert cfg.tolerance(-10.0) == pytest.approx(1e-5)


def test_from_env_with_overrides(monkeypatch):
    monkeypatch.setenv("FRACPLAP_REL_TOL", "1e-5")
    monkeypatch.setenv("FRACPLAP_HERMITE_NODES", "32")
    cfg = QuadConfig.from_env(hermite_nodes=None, max_subdivisions=50)
    assert cfg.rel_tol == 1e-5
    assert cfg.hermite_nodes == 32
    assert cfg.max_subdivisions == 50

    cfg = QuadConfig.from_env(rel_tol=1e-7)
    assert cfg.rel_tol == 1e-7


def test_run_config_validation():
    config = RunConfig(command="compare", s=0.25, p=3.0, points=[0.0, 1.0])
    assert config.params == FracParams(n=1, s=0.25, p=3.0)
    with pytest.raises(ValidationError):
        RunConfig(command="compare", s=1.5)
    with pytest.raises(ValidationError):
        RunConfig(command="seminorm", s_list=[0.5, 1.0])
    with pytest.raises(ValidationError):
        RunConfig(command="discrete", h_list=[0.1, -0.1])
    with pytest.raises(ValidationError):
        RunConfig(command="plot")


def test_run_config_json_round_trip():
    config = RunConfig(
        command="discrete", s=0.3, p=2.5, h_list=[0.2, 0.1], kappa=2.0, quad=QuadConfig(rel_tol=1e-6)
    )
    assert RunConfig.model_validate_json(config.model_dump_json()) == config
