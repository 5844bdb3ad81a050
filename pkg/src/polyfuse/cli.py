"""Command-line interface.

    polyfuse check FILE            parse only, report the first syntax error
    polyfuse eval FILE             run a program, print the report
    polyfuse verify FILE           run a program, print verification results
    polyfuse selftest              run the built-in acceptance battery
    polyfuse serve                 start the HTTP service

Exit status: 0 on success (including all verifications passing), 1 when a
verification ran and failed or the selftest found a defect, 2 on usage,
parse, or execution errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .dsl import parse, ParseError
from .runner import run, render_report, ExecutionError, VerifyResult

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_ERROR = 2


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _parse_params(raw: str) -> dict[str, Fraction]:
    """Parse 'j=3/2,cutoff=16' into exact rationals."""
    params: dict[str, Fraction] = {}
    if not raw:
        return params
    for chunk in raw.split(","):
        key, sep, value = chunk.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ValueError(f"expected name=value, got {chunk!r}")
        params[key] = Fraction(value)
    return params


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyfuse",
        description="Exact symbolic kernel for three-dimensional polynomial "
                    "algebras and their two-mode fusions.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="parse a program, report errors")
    check.add_argument("file", help="program file, or - for stdin")

    evaluate = sub.add_parser("eval", help="run a program, print the report")
    evaluate.add_argument("file", help="program file, or - for stdin")
    evaluate.add_argument("--format", choices=("text", "json", "latex"),
                          default="text")
    evaluate.add_argument("--params", default="",
                          help="verify parameter overrides, e.g. "
                               "'j=3/2,cutoff=16'")

    verify = sub.add_parser(
        "verify", help="run a program, print verification results only")
    verify.add_argument("file", help="program file, or - for stdin")
    verify.add_argument("--params", default="",
                        help="verify parameter overrides, e.g. "
                             "'j=3/2,cutoff=16'")

    sub.add_parser("selftest", help="run the built-in acceptance battery")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; normalize to int
        return int(exc.code or 0)

    if args.command == "selftest":
        return _cmd_selftest()
    if args.command == "serve":
        return _cmd_serve(args.host, args.port)

    try:
        source = _read_source(args.file)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if args.command == "check":
        return _cmd_check(source)

    try:
        params = _parse_params(args.params)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: bad --params: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if args.command == "eval":
        return _cmd_eval(source, args.format, params)
    return _cmd_verify(source, params)


def _cmd_check(source: str) -> int:
    try:
        program = parse(source)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    plural = "" if len(program.statements) == 1 else "s"
    print(f"ok: {len(program.statements)} statement{plural}")
    return EXIT_OK


def _run_program(source: str, params: dict[str, Fraction]):
    """Returns (report, exit_code); report is None when exit_code != 0/1."""
    try:
        program = parse(source)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_ERROR
    try:
        report = run(program, base_params=params)
    except ExecutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_ERROR
    return report, EXIT_OK if report.ok else EXIT_VERIFICATION_FAILED


def _cmd_eval(source: str, fmt: str, params: dict[str, Fraction]) -> int:
    report, code = _run_program(source, params)
    if report is None:
        return code
    rendered = render_report(report, fmt)
    if fmt == "json":
        print(json.dumps(rendered, indent=2))
    else:
        print(rendered, end="")
    return code


def _cmd_verify(source: str, params: dict[str, Fraction]) -> int:
    report, code = _run_program(source, params)
    if report is None:
        return code
    verifications = [r for r in report.results if isinstance(r, VerifyResult)]
    if not verifications:
        print("no verify statements in program")
        return EXIT_OK
    for result in verifications:
        rendered_params = ", ".join(f"{k}={v}" for k, v in
                                    sorted(result.params.items()))
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.target} [{rendered_params}]")
        for report_ in result.reports:
            worst = report_.max_interior()
            print(f"  {report_.target}: max interior residual {worst:.3e}")
        for failure in result.failures:
            print(f"  {failure}")
    print(f"result: {'ok' if report.ok else 'VERIFICATION FAILED'}")
    return code


def _cmd_selftest() -> int:
    from .selftest import run_all
    results = run_all()
    for result in results:
        print(result.line)
    failed = [r for r in results if not r.ok]
    print(f"selftest: {len(results) - len(failed)}/{len(results)} criteria "
          f"passed")
    return EXIT_OK if not failed else EXIT_VERIFICATION_FAILED


def _cmd_serve(host: str, port: int) -> int:
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host=host, port=port)
    return EXIT_OK


def console() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
