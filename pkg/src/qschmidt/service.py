"""HTTP front end: one POST endpoint per analysis, pydantic in and out.

Error mapping mirrors the CLI exit codes: malformed input (parse errors,
bad dimensions, invalid matrices) becomes 422 with a structured body, and an
internal cross-method disagreement becomes 500 with kind "consistency".
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .errors import ConsistencyError, InputError, KetParseError
from .models import (
    AnalysisReport,
    AnalyzeRequest,
    ErrorReport,
    TeleportReport,
    TeleportRequest,
    WitnessReportModel,
    WitnessRequest,
)
from .reports import build_analysis, build_teleport, build_witness_report

app = FastAPI(
    title="qschmidt",
    version=__version__,
    description="Schmidt-decomposition entanglement analysis, teleportation "
    "simulation and operator witnesses for small qubit systems.",
)


@app.exception_handler(InputError)
async def _input_error(_: Request, err: InputError) -> JSONResponse:
    kind = "parse" if isinstance(err, KetParseError) else "input"
    body = ErrorReport(error=str(err), kind=kind, position=err.position)
    return JSONResponse(status_code=422, content=body.model_dump())


@app.exception_handler(ConsistencyError)
async def _consistency_error(_: Request, err: ConsistencyError) -> JSONResponse:
    body = ErrorReport(error=str(err), kind="consistency", position=None)
    return JSONResponse(status_code=500, content=body.model_dump())


@app.get("/health")
async def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/analyze", response_model=AnalysisReport)
async def analyze_endpoint(request: AnalyzeRequest) -> AnalysisReport:
    return build_analysis(request)


@app.post("/teleport", response_model=TeleportReport)
async def teleport_endpoint(request: TeleportRequest) -> TeleportReport:
    return build_teleport(request)


@app.post("/witness", response_model=WitnessReportModel)
async def witness_endpoint(request: WitnessRequest) -> WitnessReportModel:
    return build_witness_report(request)
