"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict

Solver = Literal["analytic", "moments", "oracle_secular", "oracle_full"]


class ParamsModel(BaseModel):
    """Physical parameters; omitted fields fall back to server defaults."""

    model_config = ConfigDict(extra="forbid")

    delta_a: float | None = None
    delta_c: float | None = None
    omega_rabi: float | None = None
    epsilon: float | None = None
    g: float | None = None
    kappa: float | None = None
    gamma0: float | None = None
    gamma_plus: float | None = None
    gamma_minus: float | None = None
    gamma_d: float | None = None
    phi: float | None = None

    def overrides(self) -> dict[str, float]:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class AxisModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    param_name: str
    start: float
    stop: float
    steps: int


class ComplexModel(BaseModel):
    re: float
    im: float


class SteadyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    params: ParamsModel = ParamsModel()
    solver: Solver = "moments"
    regime_factor: float = 10.0


class SteadyResponse(BaseModel):
    n: float
    rz: float
    a_mean: ComplexModel
    rza: ComplexModel
    solver: Solver
    regime_ok: bool
    worst_ratio: float
    warning: str | None = None


class MinRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    params: ParamsModel = ParamsModel()
    method: Literal["auto", "analytic", "numeric"] = "auto"


class MinResponse(BaseModel):
    eps_min: float
    n_min: float
    bound: float | None
    method: Literal["analytic", "numeric"]


class SweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    params: ParamsModel = ParamsModel()
    preset: str | None = None
    axis1: AxisModel | None = None
    axis2: AxisModel | None = None
    solver: Solver | None = None
    regime_factor: float = 10.0


class OracleCheckRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    params: ParamsModel = ParamsModel()
    mode: Literal["closure", "secular_scan"] = "closure"
    t_final: float | None = None
    ratios: list[float] | None = None
    target_tail: float = 1e-8


class PresetInfo(BaseModel):
    name: str
    description: str
    solver: Solver
    base: dict[str, float]
    axis1: AxisModel
    axis2: AxisModel | None
    gamma_star: float | None
    notes: list[str]


class HealthResponse(BaseModel):
    status: Literal["ok"] = "ok"
