"""HTTP service exposing the exterior-ball eigenvalue solver.

FastAPI application with three POST endpoints (``/solve``, ``/sweep``,
``/verify``) and a ``/health`` probe.  All responses carry a ``schema``
version field.  Sweeps run on a thread pool (the solver releases the GIL
inside scipy kernels) and results are returned in input order regardless of
completion order; worker count comes from ``ROBINEXT_WORKERS``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from fastapi import FastAPI
from pydantic import BaseModel, Field

from .core import NoBracket, NoNegativeEigenvalue, ProblemParams, StepFailure
from .shooting import SolverOptions, solve_lambda1_ball
from .verify import CHECKS, run_check

SCHEMA_VERSION = 1


class SolveRequest(BaseModel):
    p: float = Field(gt=1.0)
    n: int = Field(ge=1)
    alpha: float
    R: float = Field(default=1.0, gt=0.0)
    r_max_factor: float = Field(default=30.0, gt=0.0)
    ode_rel_tol: float = Field(default=1e-10, gt=0.0)
    lambda_tol: float = Field(default=1e-9, gt=0.0)

    def to_params(self) -> ProblemParams:
        return ProblemParams(p=self.p, n=self.n, alpha=self.alpha, R=self.R)

    def to_options(self) -> SolverOptions:
        return SolverOptions(
            r_max_factor=self.r_max_factor,
            ode_rel_tol=self.ode_rel_tol,
            lambda_tol=self.lambda_tol,
        )


class SolveResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    model_config = {"populate_by_name": True}

    p: float
    n: int
    alpha: float
    R: float
    status: str
    lambda1: float | None = None
    bracket_lo: float | None = None
    bracket_hi: float | None = None
    g_residual: float | None = None
    iterations: int | None = None
    detail: str = ""


class SweepRequest(BaseModel):
    points: list[SolveRequest]


class SweepResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    model_config = {"populate_by_name": True}

    results: list[SolveResponse]


class VerifyRequest(BaseModel):
    check_id: str = "all"


class VerifyResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    model_config = {"populate_by_name": True}

    passed: bool
    reports: list[dict]


def solve_record(req: SolveRequest) -> SolveResponse:
    """Run one solve, mapping domain errors to a status string instead of an
    HTTP failure (a refused parameter regime is a result, not a 500)."""
    base = dict(p=req.p, n=req.n, alpha=req.alpha, R=req.R)
    try:
        res = solve_lambda1_ball(req.to_params(), req.to_options())
    except NoNegativeEigenvalue as exc:
        return SolveResponse(status="no_negative_eigenvalue", detail=str(exc), **base)
    except NoBracket as exc:
        return SolveResponse(status="no_bracket", detail=str(exc), **base)
    except StepFailure as exc:
        return SolveResponse(status="step_failure", detail=str(exc), **base)
    return SolveResponse(
        status="ok",
        lambda1=res.lambda1,
        bracket_lo=res.bracket.lo,
        bracket_hi=res.bracket.hi,
        g_residual=res.g_limit_residual,
        iterations=res.iterations,
        **base,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="robinext", version="0.1.0")

    @app.get("/health")
    def health() -> dict:
        return {"schema": SCHEMA_VERSION, "status": "ok"}

    @app.post("/solve", response_model=SolveResponse, response_model_by_alias=True)
    def solve(req: SolveRequest) -> SolveResponse:
        return solve_record(req)

    @app.post("/sweep", response_model=SweepResponse, response_model_by_alias=True)
    def sweep(req: SweepRequest) -> SweepResponse:
        workers = int(os.environ.get("ROBINEXT_WORKERS", "4"))
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            results = list(pool.map(solve_record, req.points))
        return SweepResponse(results=results)

    @app.post("/verify", response_model=VerifyResponse, response_model_by_alias=True)
    def verify(req: VerifyRequest) -> VerifyResponse:
        ids = list(CHECKS) if req.check_id == "all" else [req.check_id]
        reports = [run_check(cid).to_dict() for cid in ids]
        return VerifyResponse(passed=all(r["passed"] for r in reports), reports=reports)

    return app


app = create_app()
