import pytest

from fracplap.config import FracParams
from fracplap.errors import UnsupportedFunctionError
from fracplap.funcs import catalog
from fracplap.quad import Estimate
from fracplap.reps.oracles import plancherel_seminorm
from fracplap.seminorm import (
    SeminormReport,
    outer_rule_error,
    seminorm_balakrishnan,
    seminorm_direct,
    seminorm_power,
    seminorm_report,
    seminorm_semigroup,
)


def test_zero_function_has_zero_seminorm():
    u = catalog("gaussian", amplitude=0.0)
    params = FracParams(n=1, s=0.5, p=3.0)
    assert seminorm_direct(u, params) == (0.0, 0.0)
    report = seminorm_report(u, params)
    assert report.max_gap == 0.0


@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
def test_gaussian_matches_plancherel(fast_cfg, s):
    u = catalog("gaussian")
    result = seminorm_direct(u, FracParams(n=1, s=s, p=2.0), fast_cfg)
    assert result.value == pytest.approx(plancherel_seminorm(u, s), rel=1e-3)


def test_plancherel_scaling():
    u = catalog("gaussian")
    wide = catalog("gaussian", amplitude=3.0, dilation=0.5)
    # [A u(k.)]_{s,2} = A k^{s - 1/2} [u]_{s,2}
    assert plancherel_seminorm(wide, 0.3) == pytest.approx(3.0 * 0.5 ** (0.3 - 0.5) * plancherel_seminorm(u, 0.3))


def test_homogeneity(fast_cfg):
    params = FracParams(n=1, s=0.4, p=3.0)
    u = catalog("gaussian")
    doubled = catalog("gaussian", amplitude=2.0)
    base = seminorm_direct(u, params, fast_cfg).value
    assert seminorm_direct(doubled, params, fast_cfg).value == pytest.approx(2.0 * base, rel=1e-5)


def test_translation_invariance(fast_cfg):
    params = FracParams(n=1, s=0.5, p=2.5)
    centered = seminorm_direct(catalog("gaussian"), params, fast_cfg).value
    shifted = seminorm_direct(catalog("shifted_gaussian"), params, fast_cfg).value
    assert shifted == pytest.approx(centered, rel=1e-5)


def test_outer_rule_error_is_small(fast_cfg):
    params = FracParams(n=1, s=0.5, p=2.0)
    u = catalog("gaussian")
    power = seminorm_power(u, params, "direct", fast_cfg)
    assert outer_rule_error(u, params, fast_cfg) < 1e-2 * power.value
    assert power.error >= outer_rule_error(u, params, fast_cfg)


def test_unsupported_inputs():
    params = FracParams(n=1, s=0.5, p=2.0)
    with pytest.raises(UnsupportedFunctionError):
        seminorm_direct(catalog("cosine"), params)
    with pytest.raises(UnsupportedFunctionError):
        seminorm_direct(catalog("gaussian", n=2), FracParams(n=2, s=0.5, p=2.0))
    with pytest.raises(ValueError):
        seminorm_power(catalog("gaussian"), params, form="fourier")


def test_report_gaps():
    report = SeminormReport(Estimate(1.0, 1e-8), Estimate(1.001, 1e-8), Estimate(0.999, 1e-8))
    assert report.gaps["direct_vs_semigroup"] == pytest.approx(0.001 / 1.001)
    assert report.max_gap == pytest.approx(0.002 / 1.001)
    row = report.as_row()
    assert row["balakrishnan_value"] == 0.999
    assert set(row) == {
        "direct_value", "direct_error", "semigroup_value", "semigroup_error",
        "balakrishnan_value", "balakrishnan_error",
        "gap_direct_vs_semigroup", "gap_direct_vs_balakrishnan", "gap_semigroup_vs_balakrishnan",
    }


@pytest.mark.slow
@pytest.mark.parametrize("name", ["gaussian", "rational_bump"])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
def test_three_forms_agree(fast_cfg, s, p, name):
    report = seminorm_report(catalog(name), FracParams(n=1, s=s, p=p), fast_cfg)
    estimates = report.values().values()
    scale = max(abs(estimate.value) for estimate in estimates)
    assert scale > 0.0
    budget = 10.0 * sum(estimate.error for estimate in estimates) / scale
    assert report.max_gap < 1e-3 + budget, (s, p, name, report)


@pytest.mark.slow
def test_each_form_matches_plancherel(fast_cfg):
    params = FracParams(n=1, s=0.5, p=2.0)
    u = catalog("gaussian")
    expected = plancherel_seminorm(u, 0.5)
    for compute in (seminorm_semigroup, seminorm_balakrishnan):
        assert compute(u, params, fast_cfg).value == pytest.approx(expected, rel=1e-3)
