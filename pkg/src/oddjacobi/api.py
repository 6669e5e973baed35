"""HTTP service exposing the verification engine.

Stateless compute endpoints over the same service layer the CLI drives:
POST a model source, get back the reports.  DSL problems come back as 400
with the offending line and column; everything else is a plain 200 whose
body carries the per-structure verdicts and the would-be process exit code.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .catalog import CatalogError
from .core import EngineError
from .dsl import DslError
from .service import (
    RunOptions,
    RunOutcome,
    bracket_source,
    examples_listing,
    run_catalog,
    run_source,
)


class OptionsIn(BaseModel):
    seed: int = 0
    max_degree: int = Field(default=3, ge=0)
    samples: int = Field(default=4, ge=0)
    parallel: bool = False

    def to_options(self) -> RunOptions:
        return RunOptions(self.seed, self.max_degree, self.samples, self.parallel)


class VerifyRequest(BaseModel):
    source: str
    options: OptionsIn = OptionsIn()


class ExamplesRunRequest(BaseModel):
    params: dict[str, int] = {}
    options: OptionsIn = OptionsIn()


class BracketRequest(BaseModel):
    source: str
    structure: str
    f: str
    g: str


class Condition(BaseModel):
    name: str
    residual: str
    pass_: bool = Field(alias="pass")

    model_config = {"populate_by_name": True}


class Report(BaseModel):
    structure: str
    conditions: list[Condition]
    verdict: bool


class RunResponse(BaseModel):
    reports: list[Report]
    verdict: bool
    exit_code: int


class BracketResponse(BaseModel):
    result: str


class ExamplesResponse(BaseModel):
    names: list[str]


app = FastAPI(
    title="oddjacobi",
    description="Exact symbolic verification of odd Jacobi geometry",
    version=__version__,
)


def _bad_request(e: DslError) -> HTTPException:
    return HTTPException(
        status_code=400,
        detail={"message": e.message, "line": e.line, "col": e.col},
    )


def _respond(outcome: RunOutcome) -> RunResponse:
    if outcome.error is not None:
        raise HTTPException(
            status_code=400,
            detail={"message": outcome.error, "line": outcome.error_line, "col": outcome.error_col},
        )
    return RunResponse(**outcome.to_dict())


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/verify", response_model=RunResponse)
def verify(req: VerifyRequest):
    return _respond(run_source(req.source, req.options.to_options()))


@app.get("/examples", response_model=ExamplesResponse)
def examples():
    return ExamplesResponse(names=examples_listing())


@app.post("/examples/{name}", response_model=RunResponse)
def examples_run(name: str, req: ExamplesRunRequest | None = None):
    req = req or ExamplesRunRequest()
    try:
        return _respond(run_catalog(name, req.params, req.options.to_options()))
    except CatalogError as e:
        raise HTTPException(status_code=404, detail=str(e)) from None


@app.post("/bracket", response_model=BracketResponse)
def bracket(req: BracketRequest):
    try:
        return BracketResponse(result=bracket_source(req.source, req.structure, req.f, req.g))
    except DslError as e:
        raise _bad_request(e) from None
    except EngineError as e:
        raise HTTPException(status_code=400, detail={"message": str(e)}) from None
