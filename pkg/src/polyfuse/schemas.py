"""Request/response models for the HTTP service.

The JSON shapes for polynomials and envelope elements mirror the render
module: a polynomial is a list of (p0_power, coefficient) terms in
descending power, a coefficient is a list of monomials over the central
symbols with exact rational values carried as strings.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class MonomialJSON(BaseModel):
    symbols: dict[str, int] = Field(default_factory=dict)
    rational: str


class TermJSON(BaseModel):
    p0_power: int
    coeff: list[MonomialJSON]


class PolyJSON(BaseModel):
    terms: list[TermJSON]


class ParseIssue(BaseModel):
    line: int
    col: int
    message: str
    expected: list[str] = Field(default_factory=list)


class CheckRequest(BaseModel):
    source: str


class CheckResponse(BaseModel):
    ok: bool
    statements: int = 0
    error: ParseIssue | None = None


class EvalRequest(BaseModel):
    source: str
    format: Literal["text", "json", "latex"] = "text"
    params: dict[str, str] = Field(
        default_factory=dict,
        description="verify parameter overrides, exact rationals as strings")


class EvalResponse(BaseModel):
    ok: bool
    output: str | None = None   # text and latex formats
    report: dict | None = None  # json format
    error: str | None = None
    parse_error: ParseIssue | None = None


class VerifyRequest(BaseModel):
    source: str
    params: dict[str, str] = Field(default_factory=dict)


class VerifyResponse(BaseModel):
    ok: bool
    verifications: int = 0
    failures: list[str] = Field(default_factory=list)
    report: dict | None = None
    error: str | None = None
    parse_error: ParseIssue | None = None


class BuiltinInfo(BaseModel):
    name: str
    order: int | None
    phi: PolyJSON
    phi_text: str
    centrals: list[str]


class BuiltinsResponse(BaseModel):
    algebras: list[BuiltinInfo]


class HealthResponse(BaseModel):
    status: str
    version: str
