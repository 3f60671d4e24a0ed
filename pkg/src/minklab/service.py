"""HTTP front door: one POST endpoint per report builder.

Inputs arrive as raw text in the documented file formats (or a builtin
name); parsing happens server-side so clients stay thin.  Precondition
and parse failures map to HTTP 422 with the error message as detail;
verdict failures still return 200 with passed=false, and clients decide
what to do with that.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import reports
from .errors import InputError

app = FastAPI(
    title="minklab",
    description=(
        "Mod-2 multilinear invariants, cup-product hypothesis tests, "
        "certified cycle bases, lattice minima, and pairing permutations."
    ),
    version="0.1.0",
)


class RunReport(BaseModel):
    command: str
    input_digest: str
    seeds: dict
    tolerances: dict
    results: dict
    verdicts: dict[str, bool]
    passed: bool


class Det2Request(BaseModel):
    tensor_text: Optional[str] = None
    builtin: Optional[str] = None
    invariant_text: Optional[str] = None


class CupFormRequest(BaseModel):
    complex_text: Optional[str] = None
    builtin: Optional[str] = None


class GraphBasisRequest(BaseModel):
    graph_text: str
    oracle: bool = False


class MinimaRequest(BaseModel):
    body_json: Optional[str] = None
    builtin: Optional[str] = None
    seed: Optional[int] = None
    samples: int = Field(default=1_000_000, ge=1)
    tolerance: Optional[float] = None


class PairingRequest(BaseModel):
    form_text: Optional[str] = None
    builtin: Optional[str] = None


class CountRequest(BaseModel):
    body_json: Optional[str] = None
    builtin: Optional[str] = None
    t: float = Field(gt=0)


class VerifyStabRequest(BaseModel):
    body_json: Optional[str] = None
    builtin: Optional[str] = None
    vectors: Optional[list[list[int]]] = None


def _run(builder, /, **kwargs) -> dict:
    try:
        return builder(**kwargs)
    except InputError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/builtins")
def builtins() -> dict:
    return reports.builtins_report()


@app.post("/det2", response_model=RunReport)
def det2(request: Det2Request):
    return _run(
        reports.det2_report,
        tensor_text=request.tensor_text,
        builtin=request.builtin,
        invariant_text=request.invariant_text,
    )


@app.post("/cup-form", response_model=RunReport)
def cup_form(request: CupFormRequest):
    return _run(
        reports.cup_form_report,
        complex_text=request.complex_text,
        builtin=request.builtin,
    )


@app.post("/graph-basis", response_model=RunReport)
def graph_basis(request: GraphBasisRequest):
    return _run(
        reports.graph_basis_report,
        graph_text=request.graph_text,
        oracle=request.oracle,
    )


@app.post("/minima", response_model=RunReport)
def minima(request: MinimaRequest):
    return _run(
        reports.minima_report,
        body_json=request.body_json,
        builtin=request.builtin,
        seed=request.seed,
        samples=request.samples,
        tolerance=request.tolerance,
    )


@app.post("/pairing", response_model=RunReport)
def pairing(request: PairingRequest):
    return _run(
        reports.pairing_report,
        form_text=request.form_text,
        builtin=request.builtin,
    )


@app.post("/count", response_model=RunReport)
def count(request: CountRequest):
    return _run(
        reports.count_report,
        body_json=request.body_json,
        builtin=request.builtin,
        t=request.t,
    )


@app.post("/verify-stab", response_model=RunReport)
def verify_stab(request: VerifyStabRequest):
    return _run(
        reports.verify_stab_report,
        body_json=request.body_json,
        builtin=request.builtin,
        vectors=request.vectors,
    )
