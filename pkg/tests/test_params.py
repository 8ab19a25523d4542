import dataclasses
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dressedcavity import (
    DegenerateDressing,
    DomainError,
    NegativeRate,
    NonPositiveKappa,
    RegimeReport,
    SystemParams,
    UsageError,
    build_params,
    dress,
    load_config,
    regime_check,
    validate,
)


def test_defaults_pass_validation(default_params):
    assert validate(default_params) is default_params


def test_validate_rejects_nonpositive_kappa():
    with pytest.raises(NonPositiveKappa):
        validate(SystemParams(kappa=0.0))
    with pytest.raises(NonPositiveKappa):
        validate(SystemParams(kappa=-0.3))


def test_validate_rejects_negative_rates():
    for field in ("gamma0", "gamma_plus", "gamma_minus", "gamma_d"):
        with pytest.raises(NegativeRate):
            validate(dataclasses.replace(SystemParams(), **{field: -1e-9}))


def test_validate_allows_zero_rates():
    validate(SystemParams(gamma_plus=0.0, gamma_minus=0.0, gamma_d=0.0))


def test_validate_rejects_negative_amplitudes():
    for field in ("omega_rabi", "epsilon", "g"):
        with pytest.raises(DomainError):
            validate(dataclasses.replace(SystemParams(), **{field: -0.5}))


def test_validate_rejects_degenerate_dressing():
    with pytest.raises(DegenerateDressing):
        validate(SystemParams(omega_rabi=0.0, delta_a=0.0))
    # either one alone is enough to fix the dressed basis
    validate(SystemParams(omega_rabi=0.0, delta_a=2.0))
    validate(SystemParams(omega_rabi=2.0, delta_a=0.0))


def test_validate_rejects_nonfinite():
    with pytest.raises(DomainError):
        validate(SystemParams(epsilon=math.nan))
    with pytest.raises(DomainError):
        validate(SystemParams(delta_a=math.inf))


def test_negative_detunings_and_phase_are_fine():
    validate(SystemParams(delta_a=-3.0, delta_c=-1.0, phi=-2.5))


def test_regime_check_well_separated():
    p = SystemParams(omega_rabi=50.0, delta_a=0.0, g=2.0, epsilon=1.0)
    report = regime_check(p, dress(p))
    assert report.ok
    assert report.worst_ratio == pytest.approx(25.0)


def test_regime_check_fails_when_coupling_competes():
    p = SystemParams(omega_rabi=5.0, delta_a=0.0, g=2.0, epsilon=0.1)
    report = regime_check(p, dress(p))
    assert not report.ok
    assert report.worst_ratio < 10.0


def test_regime_check_default_point_fails(default_params, default_frame):
    # the default point is a figure setting, not a secular-safe one
    report = regime_check(default_params, default_frame)
    assert not report.ok
    assert report.worst_ratio == pytest.approx(1.8027756377319946 / 2.0)


def test_regime_check_custom_factor():
    p = SystemParams(omega_rabi=50.0, delta_a=0.0, g=2.0, epsilon=1.0)
    assert regime_check(p, dress(p), factor=25.0).ok
    assert not regime_check(p, dress(p), factor=25.0 + 1e-9).ok
    with pytest.raises(DomainError):
        regime_check(p, dress(p), factor=0.0)


def test_regime_check_no_competitor_is_infinitely_safe():
    p = SystemParams(
        omega_rabi=1.0,
        delta_a=0.0,
        delta_c=0.0,
        g=0.0,
        epsilon=0.0,
        gamma0=0.0,
        gamma_plus=0.0,
        gamma_minus=0.0,
        gamma_d=0.0,
    )
    report = regime_check(p, dress(p))
    assert report == RegimeReport(ok=True, worst_ratio=math.inf)


@given(st.floats(min_value=10.0, max_value=1e4), st.floats(min_value=10.0, max_value=1e4))
def test_regime_ratio_monotone_in_rabi_for_dominated_rates(om1, om2):
    # with g dominating every rate, the worst competitor stays g, so the
    # ratio must grow with the splitting
    lo, hi = sorted((om1, om2))
    kwargs = dict(delta_a=0.0, g=2.0, epsilon=0.5, gamma0=0.1, gamma_d=0.01)
    p_lo = SystemParams(omega_rabi=lo, gamma_plus=0.1, gamma_minus=0.1, **kwargs)
    p_hi = SystemParams(omega_rabi=hi, gamma_plus=0.1, gamma_minus=0.1, **kwargs)
    r_lo = regime_check(p_lo, dress(p_lo)).worst_ratio
    r_hi = regime_check(p_hi, dress(p_hi)).worst_ratio
    assert r_hi >= r_lo


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "point.json"
    path.write_text(json.dumps({"epsilon": 0.25, "delta_a": -1.5}))
    assert load_config(str(path)) == {"epsilon": 0.25, "delta_a": -1.5}


def test_load_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"epsilonn": 0.25}))
    with pytest.raises(UsageError):
        load_config(str(path))


def test_load_config_rejects_non_numbers(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"epsilon": "0.25"}))
    with pytest.raises(UsageError):
        load_config(str(path))
    path.write_text(json.dumps({"epsilon": True}))
    with pytest.raises(UsageError):
        load_config(str(path))


def test_load_config_rejects_non_object(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[1, 2]")
    with pytest.raises(UsageError):
        load_config(str(path))
    path.write_text("{not json")
    with pytest.raises(UsageError):
        load_config(str(path))


def test_build_params_layering():
    p = build_params({"epsilon": 0.25, "kappa": 0.2}, {"epsilon": 0.75})
    assert p.epsilon == 0.75
    assert p.kappa == 0.2
    assert p.delta_a == 3.0


def test_build_params_unknown_key():
    with pytest.raises(UsageError):
        build_params({"epsilon": 0.25}, {"omega": 1.0})


def test_build_params_validates():
    with pytest.raises(NonPositiveKappa):
        build_params({"kappa": -1.0})


def test_as_dict_round_trips():
    p = SystemParams(epsilon=0.123)
    assert SystemParams(**p.as_dict()) == p
