"""HTTP service exposing the symbolic kernel.

POST /check   - parse a program, report syntax errors with positions
POST /eval    - run a program, return the rendered report
POST /verify  - run a program, return only the verification outcome
GET  /builtins - the stock algebra catalog
GET  /health   - liveness and version

All computation happens in-process; requests are self-contained programs in
the same language the CLI accepts.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI

from . import __version__
from .algebra import builtin, builtin_names
from .dsl import parse, ParseError
from .runner import run, render_report, ExecutionError, VerifyResult
from .render import render_poly, poly_to_text
from .schemas import (BuiltinInfo, BuiltinsResponse, CheckRequest,
                      CheckResponse, EvalRequest, EvalResponse, HealthResponse,
                      ParseIssue, VerifyRequest, VerifyResponse)


def _issue(exc: ParseError) -> ParseIssue:
    return ParseIssue(line=exc.line, col=exc.col, message=exc.message,
                      expected=list(exc.expected))


def _parse_params(raw: dict[str, str]) -> dict[str, Fraction]:
    params = {}
    for key, value in raw.items():
        try:
            params[key] = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ExecutionError(
                f"parameter {key}={value!r} is not an exact rational") from exc
    return params


def create_app() -> FastAPI:
    app = FastAPI(
        title="polyfuse",
        version=__version__,
        description="Exact symbolic kernel for three-dimensional polynomial "
                    "algebras: ladder products, Casimir construction, "
                    "two-mode fusion, and numeric verification.")

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/builtins", response_model=BuiltinsResponse)
    def builtins() -> BuiltinsResponse:
        infos = []
        for name in builtin_names():
            alg = builtin(name)
            infos.append(BuiltinInfo(name=name, order=alg.order,
                                     phi=render_poly(alg.phi, "json"),
                                     phi_text=poly_to_text(alg.phi),
                                     centrals=sorted(alg.centrals)))
        return BuiltinsResponse(algebras=infos)

    @app.post("/check", response_model=CheckResponse)
    def check(request: CheckRequest) -> CheckResponse:
        try:
            program = parse(request.source)
        except ParseError as exc:
            return CheckResponse(ok=False, error=_issue(exc))
        return CheckResponse(ok=True, statements=len(program.statements))

    @app.post("/eval", response_model=EvalResponse)
    def evaluate(request: EvalRequest) -> EvalResponse:
        try:
            program = parse(request.source)
        except ParseError as exc:
            return EvalResponse(ok=False, parse_error=_issue(exc))
        try:
            report = run(program, base_params=_parse_params(request.params))
        except ExecutionError as exc:
            return EvalResponse(ok=False, error=str(exc))
        rendered = render_report(report, request.format)
        if request.format == "json":
            return EvalResponse(ok=report.ok, report=rendered)
        return EvalResponse(ok=report.ok, output=rendered)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(request: VerifyRequest) -> VerifyResponse:
        try:
            program = parse(request.source)
        except ParseError as exc:
            return VerifyResponse(ok=False, parse_error=_issue(exc))
        try:
            report = run(program, base_params=_parse_params(request.params))
        except ExecutionError as exc:
            return VerifyResponse(ok=False, error=str(exc))
        verifications = [r for r in report.results
                         if isinstance(r, VerifyResult)]
        failures = [failure for r in verifications for failure in r.failures]
        return VerifyResponse(ok=report.ok, verifications=len(verifications),
                              failures=failures,
                              report=render_report(report, "json"))

    return app


app = create_app()
