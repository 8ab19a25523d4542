import pytest
from fastapi.testclient import TestClient

from dressedcavity import SystemParams, dress, find_minimum, steady_state
from dressedcavity.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_presets_listing(client):
    resp = client.get("/presets")
    assert resp.status_code == 200
    items = resp.json()
    assert [item["name"] for item in items] == [
        "fig2", "fig3_solid", "fig3_longdash", "fig3_shortdash", "fig3_dotted",
    ]
    fig2 = items[0]
    assert fig2["axis1"]["param_name"] == "epsilon"
    assert fig2["axis2"]["steps"] == 121
    assert fig2["gamma_star"] is None
    assert items[1]["gamma_star"] == 1.0


def test_steady_default_point(client):
    resp = client.post("/steady", json={})
    assert resp.status_code == 200
    data = resp.json()
    p = SystemParams()
    s = steady_state(dress(p), p)
    assert data["n"] == pytest.approx(s.n, rel=1e-12)
    assert data["rz"] == pytest.approx(s.rz, rel=1e-12)
    assert data["a_mean"]["im"] == pytest.approx(s.a_mean.imag, rel=1e-12)
    assert data["solver"] == "moments"
    assert data["regime_ok"] is False
    assert "regime" in data["warning"]


def test_steady_respects_overrides(client):
    resp = client.post("/steady", json={"params": {"epsilon": 0.0, "g": 0.0}})
    assert resp.status_code == 200
    assert resp.json()["n"] == 0.0


def test_steady_analytic_solver(client):
    resp = client.post("/steady", json={"params": {"epsilon": 0.3},
                                        "solver": "analytic"})
    assert resp.status_code == 200
    data = resp.json()
    assert data["solver"] == "analytic"
    p = SystemParams(epsilon=0.3)
    s = steady_state(dress(p), p)
    assert data["n"] == pytest.approx(s.n, rel=1e-10)


def test_steady_analytic_falls_back_when_detuned(client):
    resp = client.post("/steady", json={"params": {"delta_c": 0.4},
                                        "solver": "analytic"})
    assert resp.status_code == 200
    data = resp.json()
    assert data["solver"] == "moments"
    assert "closed-form preconditions not met" in data["warning"]


def test_steady_oracle_solver(client):
    resp = client.post(
        "/steady",
        json={"params": {"omega_rabi": 50.0, "delta_a": 150.0, "epsilon": 0.3},
              "solver": "oracle_secular"},
    )
    assert resp.status_code == 200
    data = resp.json()
    p = SystemParams(omega_rabi=50.0, delta_a=150.0, epsilon=0.3)
    s = steady_state(dress(p), p)
    assert data["solver"] == "oracle_secular"
    assert data["n"] == pytest.approx(s.n, rel=1e-7)
    assert data["regime_ok"] is True
    assert data["warning"] is None


def test_steady_regime_factor(client):
    payload = {"params": {"omega_rabi": 50.0, "delta_a": 0.0, "epsilon": 1.0},
               "regime_factor": 30.0}
    resp = client.post("/steady", json=payload)
    assert resp.status_code == 200
    assert resp.json()["regime_ok"] is False
    payload["regime_factor"] = 20.0
    assert client.post("/steady", json=payload).json()["regime_ok"] is True


def test_steady_domain_errors_are_400(client):
    resp = client.post("/steady", json={"params": {"kappa": -1.0}})
    assert resp.status_code == 400
    body = resp.json()
    assert body["kind"] == "NonPositiveKappa"
    assert "kappa" in body["detail"]
    resp = client.post("/steady", json={"params": {"gamma_d": -0.1}})
    assert resp.status_code == 400
    assert resp.json()["kind"] == "NegativeRate"
    resp = client.post(
        "/steady", json={"params": {"omega_rabi": 0.0, "delta_a": 0.0}}
    )
    assert resp.status_code == 400
    assert resp.json()["kind"] == "DegenerateDressing"


def test_unknown_parameter_is_422(client):
    resp = client.post("/steady", json={"params": {"epsilonn": 0.3}})
    assert resp.status_code == 422


def test_solver_failures_are_500(client):
    # relaxation-free point: the moment fixed point does not exist
    resp = client.post(
        "/steady",
        json={"params": {"delta_a": 0.0, "gamma0": 0.0, "gamma_plus": 0.0,
                          "gamma_minus": 0.0, "gamma_d": 0.0}},
    )
    assert resp.status_code == 500
    assert resp.json()["kind"] == "ZeroRelaxation"


def test_min_endpoint(client):
    resp = client.post("/min", json={})
    assert resp.status_code == 200
    data = resp.json()
    report = find_minimum(SystemParams())
    assert data["eps_min"] == pytest.approx(report.eps_min, rel=1e-12)
    assert data["n_min"] == pytest.approx(report.n_min, rel=1e-12)
    assert data["bound"] == pytest.approx(report.bound, rel=1e-12)
    assert data["method"] == "analytic"


def test_min_numeric_method(client):
    resp = client.post("/min", json={"params": {"gamma_plus": 0.5},
                                     "method": "numeric"})
    assert resp.status_code == 200
    data = resp.json()
    assert data["method"] == "numeric"
    assert data["bound"] is None


def test_sweep_custom_axes(client):
    resp = client.post(
        "/sweep",
        json={"axis1": {"param_name": "epsilon", "start": 0.0, "stop": 1.0,
                         "steps": 3}},
    )
    assert resp.status_code == 200
    assert resp.headers["content-type"].startswith("text/csv")
    lines = [l for l in resp.text.splitlines() if not l.startswith("#")]
    assert lines[0] == "epsilon,n,rz,solver,regime_ok,error"
    assert len(lines) == 4


def test_sweep_requires_axis_without_preset(client):
    resp = client.post("/sweep", json={})
    assert resp.status_code == 400
    assert "axis1" in resp.json()["detail"]


def test_sweep_preset_with_overrides(client):
    resp = client.post(
        "/sweep",
        json={"preset": "fig3_solid",
              "axis1": {"param_name": "epsilon", "start": 0.0, "stop": 1.0,
                         "steps": 3},
              "params": {"kappa": 0.2}},
    )
    assert resp.status_code == 200
    assert "# preset = fig3_solid" in resp.text
    assert '"kappa": 0.2' in resp.text
    header = [l for l in resp.text.splitlines() if not l.startswith("#")][0]
    assert header.startswith("epsilon,epsilon_over_gamma_star,")


def test_sweep_unknown_preset(client):
    resp = client.post("/sweep", json={"preset": "fig9"})
    assert resp.status_code == 400
    assert resp.json()["kind"] == "UsageError"


def test_sweep_bad_axis_is_400(client):
    resp = client.post(
        "/sweep",
        json={"axis1": {"param_name": "epsilon", "start": 1.0, "stop": 0.0,
                         "steps": 3}},
    )
    assert resp.status_code == 400


def test_oracle_check_closure(client):
    resp = client.post("/oracle-check", json={"t_final": 1.0})
    assert resp.status_code == 200
    assert resp.headers["content-type"].startswith("text/csv")
    assert resp.text.startswith("# mode = closure")
    assert '"omega_rabi": 50.0' in resp.text


def test_oracle_check_rejects_strong_drive(client):
    resp = client.post("/oracle-check", json={"params": {"epsilon": 5.0},
                                              "t_final": 1.0})
    assert resp.status_code == 500
    assert resp.json()["kind"] == "TruncationTooLarge"


def test_oracle_check_bad_mode_is_422(client):
    resp = client.post("/oracle-check", json={"mode": "quick"})
    assert resp.status_code == 422
