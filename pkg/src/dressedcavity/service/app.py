"""FastAPI service exposing steady-state evaluation, extremum search,
sweeps, and oracle cross-checks.

Input errors map to HTTP 400, solver failures to HTTP 500, both carrying
{"detail", "kind"} so thin clients can translate them to exit codes.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import moments, oracle
from ..analytic import coefficients, n_quadratic
from ..dressing import dress
from ..errors import DomainError, SolverError, UsageError
from ..params import build_params, regime_check
from ..sweeps import (
    AxisSpec,
    SweepSpec,
    figure_presets,
    find_minimum,
    oracle_check,
    oracle_check_params,
    run_sweep,
)
from .schemas import (
    AxisModel,
    ComplexModel,
    HealthResponse,
    MinRequest,
    MinResponse,
    OracleCheckRequest,
    ParamsModel,
    PresetInfo,
    SteadyRequest,
    SteadyResponse,
    SweepRequest,
)


def _axis_from_model(model: AxisModel) -> AxisSpec:
    return AxisSpec(
        param_name=model.param_name,
        start=model.start,
        stop=model.stop,
        steps=model.steps,
    )


def _axis_to_model(axis: AxisSpec) -> AxisModel:
    return AxisModel(
        param_name=axis.param_name, start=axis.start, stop=axis.stop, steps=axis.steps
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="dressedcavity",
        version="0.1.0",
        description=(
            "Steady-state and transient photon statistics of a weakly driven "
            "cavity coupled to a strongly dressed two-level emitter"
        ),
    )

    @app.exception_handler(UsageError)
    async def _usage_error(request: Request, exc: UsageError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"detail": str(exc), "kind": type(exc).__name__},
        )

    @app.exception_handler(SolverError)
    async def _solver_error(request: Request, exc: SolverError) -> JSONResponse:
        return JSONResponse(
            status_code=500,
            content={"detail": str(exc), "kind": type(exc).__name__},
        )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse()

    @app.get("/presets", response_model=list[PresetInfo])
    def presets() -> list[PresetInfo]:
        out = []
        for preset in figure_presets().values():
            spec = preset.spec
            out.append(
                PresetInfo(
                    name=preset.name,
                    description=preset.description,
                    solver=spec.solver,
                    base=spec.base.as_dict(),
                    axis1=_axis_to_model(spec.axis1),
                    axis2=_axis_to_model(spec.axis2) if spec.axis2 else None,
                    gamma_star=preset.gamma_star,
                    notes=list(preset.notes),
                )
            )
        return out

    @app.post("/steady", response_model=SteadyResponse)
    def steady(req: SteadyRequest) -> SteadyResponse:
        p = build_params(req.params.overrides())
        f = dress(p)
        report = regime_check(p, f, req.regime_factor)
        warnings: list[str] = []
        solver = req.solver
        if solver in ("oracle_secular", "oracle_full"):
            space = oracle.build_space(p, f)
            choice = "secular" if solver == "oracle_secular" else "full"
            rho = oracle.steady_rho(p, f, space, hamiltonian_choice=choice)
            e = oracle.expectations(rho, space)
            n, rz, a_mean, rza = e.n, e.rz, e.a_mean, e.rza
        else:
            s = moments.steady_state(f, p)
            n, rz, a_mean, rza = s.n, s.rz, s.a_mean, s.rza
            if solver == "analytic":
                try:
                    n = n_quadratic(coefficients(p), p.epsilon)
                except DomainError as exc:
                    solver = "moments"
                    warnings.append(
                        f"closed-form preconditions not met ({exc}); "
                        "solved with moments"
                    )
        if not report.ok:
            warnings.append(
                f"secular regime check failed: worst ratio "
                f"{report.worst_ratio:.3g} is below factor {req.regime_factor:.3g}"
            )
        return SteadyResponse(
            n=n,
            rz=rz,
            a_mean=ComplexModel(re=a_mean.real, im=a_mean.imag),
            rza=ComplexModel(re=rza.real, im=rza.imag),
            solver=solver,
            regime_ok=report.ok,
            worst_ratio=report.worst_ratio,
            warning="; ".join(warnings) if warnings else None,
        )

    @app.post("/min", response_model=MinResponse)
    def minimum(req: MinRequest) -> MinResponse:
        p = build_params(req.params.overrides())
        result = find_minimum(p, method=req.method)
        return MinResponse(
            eps_min=result.eps_min,
            n_min=result.n_min,
            bound=result.bound,
            method=result.method,
        )

    @app.post("/sweep")
    def sweep(req: SweepRequest) -> PlainTextResponse:
        catalogue = figure_presets()
        if req.preset is not None:
            if req.preset not in catalogue:
                raise UsageError(
                    f"unknown preset {req.preset!r}; "
                    f"choose one of {', '.join(catalogue)}"
                )
            preset = catalogue[req.preset]
            base = build_params(preset.spec.base.as_dict(), req.params.overrides())
            spec = SweepSpec(
                axis1=_axis_from_model(req.axis1) if req.axis1 else preset.spec.axis1,
                axis2=_axis_from_model(req.axis2) if req.axis2 else preset.spec.axis2,
                base=base,
                solver=req.solver or preset.spec.solver,
            )
            text = run_sweep(spec, regime_factor=req.regime_factor, preset=preset)
        else:
            if req.axis1 is None:
                raise UsageError("axis1 is required when no preset is selected")
            spec = SweepSpec(
                axis1=_axis_from_model(req.axis1),
                axis2=_axis_from_model(req.axis2) if req.axis2 else None,
                base=build_params(req.params.overrides()),
                solver=req.solver or "moments",
            )
            text = run_sweep(spec, regime_factor=req.regime_factor)
        return PlainTextResponse(text, media_type="text/csv")

    @app.post("/oracle-check")
    def oracle_check_endpoint(req: OracleCheckRequest) -> PlainTextResponse:
        p = oracle_check_params(req.params.overrides())
        text = oracle_check(
            p,
            mode=req.mode,
            t_final=req.t_final,
            ratios=tuple(req.ratios) if req.ratios else None,
            target_tail=req.target_tail,
        )
        return PlainTextResponse(text, media_type="text/csv")

    return app


app = create_app()
