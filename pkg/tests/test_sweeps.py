import dataclasses
import json
import math

import pytest

from dressedcavity import (
    AxisSpec,
    SweepSpec,
    SystemParams,
    TruncationTooLarge,
    UsageError,
    closure_csv,
    closure_report,
    decomposition,
    dress,
    figure_presets,
    find_minimum,
    oracle_check,
    oracle_check_params,
    run_sweep,
    secular_scan_csv,
    secular_scan_report,
    steady_state,
)


def _data_rows(csv_text):
    lines = [l for l in csv_text.splitlines() if not l.startswith("#")]
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


def test_preset_catalogue():
    presets = figure_presets()
    assert set(presets) == {
        "fig2", "fig3_solid", "fig3_longdash", "fig3_shortdash", "fig3_dotted",
    }
    fig2 = presets["fig2"]
    assert fig2.spec.base == SystemParams()
    assert fig2.spec.axis1 == AxisSpec("epsilon", 0.0, 2.0, 101)
    assert fig2.spec.axis2 == AxisSpec("delta_c", -3.0, 3.0, 121)
    assert fig2.spec.solver == "moments"
    assert fig2.gamma_star is None


def test_preset_drive_sweep_family():
    presets = figure_presets()
    solid = presets["fig3_solid"]
    assert solid.spec.base.delta_a == 1.0
    assert solid.spec.base.omega_rabi == 1.0
    assert (solid.spec.base.gamma_plus, solid.spec.base.gamma_minus) == (1.0, 1.0)
    longdash = presets["fig3_longdash"]
    assert (longdash.spec.base.gamma_plus, longdash.spec.base.gamma_minus) == (0.0, 1.0)
    shortdash = presets["fig3_shortdash"]
    assert (shortdash.spec.base.gamma_plus, shortdash.spec.base.gamma_minus) == (1.0, 0.0)
    dotted = presets["fig3_dotted"]
    assert dotted.spec.base.delta_a == 0.0
    assert (dotted.spec.base.gamma_plus, dotted.spec.base.gamma_minus) == (1.0, 0.0)
    assert len(dotted.notes) == 2
    for name in ("fig3_solid", "fig3_longdash", "fig3_shortdash", "fig3_dotted"):
        preset = presets[name]
        assert preset.gamma_star == 1.0
        assert preset.spec.axis2 is None
        assert preset.spec.axis1.param_name == "epsilon"


def test_axis_validation():
    base = SystemParams()
    with pytest.raises(UsageError):
        run_sweep(SweepSpec(AxisSpec("epsilonn", 0, 1, 3), None, base, "moments"))
    with pytest.raises(UsageError):
        run_sweep(SweepSpec(AxisSpec("epsilon", 0, 1, 1), None, base, "moments"))
    with pytest.raises(UsageError):
        run_sweep(SweepSpec(AxisSpec("epsilon", 1, 0, 3), None, base, "moments"))
    with pytest.raises(UsageError):
        run_sweep(SweepSpec(AxisSpec("epsilon", 0, 1, 3), None, base, "exact"))


def test_minimal_sweep_matches_direct_solve():
    base = SystemParams()
    text = run_sweep(SweepSpec(AxisSpec("epsilon", 0.3, 0.6, 2), None, base, "moments"))
    header, rows = _data_rows(text)
    assert header == ["epsilon", "n", "rz", "solver", "regime_ok", "error"]
    assert len(rows) == 2
    for row, eps in zip(rows, (0.3, 0.6)):
        p = dataclasses.replace(base, epsilon=eps)
        s = steady_state(dress(p), p)
        assert float(row[0]) == pytest.approx(eps)
        assert float(row[1]) == pytest.approx(s.n, rel=1e-7)
        assert float(row[2]) == pytest.approx(s.rz, rel=1e-7)
        assert row[3] == "moments"
        assert row[4] == "false"
        assert row[5] == ""


def test_sweep_is_deterministic():
    spec = SweepSpec(AxisSpec("epsilon", 0.0, 1.0, 5), None, SystemParams(), "moments")
    assert run_sweep(spec) == run_sweep(spec)


def test_sweep_manifest_lines():
    spec = SweepSpec(AxisSpec("epsilon", 0.0, 1.0, 3), None, SystemParams(), "analytic")
    text = run_sweep(spec, regime_factor=4.0)
    manifest = [l for l in text.splitlines() if l.startswith("# ")]
    keys = [l.split(" = ")[0] for l in manifest]
    assert keys == ["# base", "# axis1", "# solver", "# regime_factor"]
    base_line = manifest[0].split(" = ", 1)[1]
    assert json.loads(base_line) == SystemParams().as_dict()
    axis_line = json.loads(manifest[1].split(" = ", 1)[1])
    assert axis_line == {"param_name": "epsilon", "start": 0.0, "stop": 1.0, "steps": 3}


def test_sweep_survives_invalid_points():
    base = SystemParams(delta_a=0.0)
    spec = SweepSpec(AxisSpec("omega_rabi", -1.0, 1.0, 3), None, base, "moments")
    header, rows = _data_rows(run_sweep(spec))
    assert len(rows) == 3
    assert all(len(r) == len(header) for r in rows)
    assert "DomainError" in rows[0][-1]
    assert "DegenerateDressing" in rows[1][-1]
    assert rows[2][-1] == ""
    assert float(rows[2][1]) > 0.0


def test_two_axis_sweep_is_axis1_major():
    spec = SweepSpec(
        AxisSpec("epsilon", 0.1, 0.2, 2),
        AxisSpec("delta_c", -1.0, 1.0, 3),
        SystemParams(),
        "moments",
    )
    header, rows = _data_rows(run_sweep(spec))
    assert header[:2] == ["epsilon", "delta_c"]
    assert len(rows) == 6
    eps_col = [float(r[0]) for r in rows]
    assert eps_col == pytest.approx([0.1, 0.1, 0.1, 0.2, 0.2, 0.2])
    dc_col = [float(r[1]) for r in rows]
    assert dc_col == pytest.approx([-1.0, 0.0, 1.0, -1.0, 0.0, 1.0])


def test_detuning_ratio_axis():
    base = SystemParams(omega_rabi=2.0)
    spec = SweepSpec(AxisSpec("delta_over_omega", 1.5, 3.0, 2), None, base, "moments")
    header, rows = _data_rows(run_sweep(spec))
    p = dataclasses.replace(base, delta_a=1.5 * 2.0)
    s = steady_state(dress(p), p)
    assert float(rows[0][1]) == pytest.approx(s.n, rel=1e-7)


def test_preset_sweep_reports_scaled_drive():
    presets = figure_presets()
    solid = presets["fig3_solid"]
    small = dataclasses.replace(
        solid.spec, axis1=AxisSpec("epsilon", 0.0, 1.0, 3)
    )
    text = run_sweep(small, preset=solid)
    assert "# preset = fig3_solid" in text
    assert "# gamma_star = 1.0" in text
    header, rows = _data_rows(text)
    assert header[:2] == ["epsilon", "epsilon_over_gamma_star"]
    assert float(rows[2][1]) == pytest.approx(1.0)


def test_coarse_drive_grid_minimum_sits_at_vertex():
    # along the resonant-cavity row of a coarse 2D preset grid the smallest
    # photon number appears at the drive point nearest the vertex, far below
    # the undriven value
    fig2 = figure_presets()["fig2"]
    coarse = dataclasses.replace(
        fig2.spec,
        axis1=AxisSpec("epsilon", 0.0, 2.0, 21),
        axis2=AxisSpec("delta_c", -3.0, 3.0, 7),
    )
    header, rows = _data_rows(run_sweep(coarse))
    resonant = [r for r in rows if float(r[1]) == 0.0]
    assert len(resonant) == 21
    best = min(resonant, key=lambda r: float(r[2]))
    assert float(best[0]) == pytest.approx(0.5)
    undriven = next(r for r in resonant if float(r[0]) == 0.0)
    assert float(best[2]) < 0.01 * float(undriven[2])


def test_find_minimum_methods_agree(default_params):
    analytic = find_minimum(default_params, method="analytic")
    numeric = find_minimum(default_params, method="numeric")
    auto = find_minimum(default_params)
    assert auto.method == "analytic"
    assert numeric.method == "numeric"
    assert numeric.eps_min == pytest.approx(analytic.eps_min, rel=1e-8)
    assert numeric.n_min == pytest.approx(analytic.n_min, rel=1e-8)
    assert analytic.bound == pytest.approx(0.703597544730292, rel=1e-12)


def test_find_minimum_auto_falls_back_on_asymmetric_rates():
    p = SystemParams(delta_a=0.0, gamma_plus=1.0, gamma_minus=0.0, phi=0.0)
    report = find_minimum(p)
    assert report.method == "numeric"
    assert report.bound is None
    # the fixed point is exactly quadratic in the drive, so the vertex can be
    # rebuilt from three samples of the interference decomposition
    f = dress(p)
    samples = []
    for eps in (0.0, 1.0, 2.0):
        split = decomposition(dataclasses.replace(p, epsilon=eps), f)
        samples.append(split.total)
    curv = (samples[2] + samples[0] - 2.0 * samples[1]) / 2.0
    slope = (4.0 * samples[1] - 3.0 * samples[0] - samples[2]) / 2.0
    vertex = -slope / (2.0 * curv)
    assert report.eps_min == pytest.approx(vertex, rel=1e-7)
    assert vertex > 0.9  # strict interior minimum, not a boundary artifact


def test_find_minimum_analytic_refuses_detuned_cavity():
    with pytest.raises(UsageError):
        find_minimum(SystemParams(delta_c=0.5), method="analytic")


def test_find_minimum_validates_method(default_params):
    with pytest.raises(UsageError):
        find_minimum(default_params, method="brent")


def test_closure_report_small_window():
    p = oracle_check_params()
    report = closure_report(p, t_final=2.0)
    assert report.max_deviation < 1e-8
    assert len(report.times) == len(report.moment_states) == len(report.oracle_samples)
    assert report.times[0] == 0.0
    assert report.times[-1] == pytest.approx(2.0)


def test_closure_csv_layout():
    p = oracle_check_params()
    report = closure_report(p, t_final=1.0, record_dt=0.5)
    text = closure_csv(report, p)
    lines = text.splitlines()
    keys = [l.split(" = ")[0] for l in lines if l.startswith("# ")]
    assert keys == [
        "# mode", "# base", "# fock_dim", "# t_final", "# record_dt",
        "# max_deviation",
    ]
    header = [l for l in lines if not l.startswith("#")][0]
    assert header == "t,n_moments,n_oracle,dev_n,dev_rza,dev_a_mean,dev_rz,tail_pop"
    assert len([l for l in lines if not l.startswith("#")]) == 1 + 3


def test_closure_rejects_strong_drive():
    p = oracle_check_params({"epsilon": 5.0})
    with pytest.raises(TruncationTooLarge):
        closure_report(p, t_final=1.0)


def test_secular_scan_error_shrinks():
    p = oracle_check_params()
    report = secular_scan_report(p, ratios=(5.0, 10.0))
    assert len(report.rows) == 2
    assert report.rows[0].rel_error > report.rows[1].rel_error
    for row, ratio in zip(report.rows, (5.0, 10.0)):
        assert row.ratio == ratio
        assert row.omega_bar == pytest.approx(ratio * p.g, rel=1e-12)
        assert row.delta_a / row.omega_rabi == pytest.approx(3.0, rel=1e-12)
    text = secular_scan_csv(report, p)
    header, rows = _data_rows(text)
    assert header == [
        "ratio", "omega_rabi", "delta_a", "omega_bar", "fock_dim",
        "n_secular", "n_full", "rel_error",
    ]
    assert len(rows) == 2


def test_secular_scan_validates_ratios():
    p = oracle_check_params()
    with pytest.raises(UsageError):
        secular_scan_report(p, ratios=(5.0, -1.0))


def test_oracle_check_dispatch():
    p = oracle_check_params()
    text = oracle_check(p, mode="closure", t_final=1.0)
    assert text.startswith("# mode = closure")
    with pytest.raises(UsageError):
        oracle_check(p, mode="bogus")


def test_oracle_check_params_layering():
    p = oracle_check_params()
    assert (p.omega_rabi, p.delta_a, p.epsilon) == (50.0, 150.0, 0.3)
    assert p.kappa == 0.1
    q = oracle_check_params({"epsilon": 0.1, "kappa": 0.5})
    assert (q.omega_rabi, q.epsilon, q.kappa) == (50.0, 0.1, 0.5)
